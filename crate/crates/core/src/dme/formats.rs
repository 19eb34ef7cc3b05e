//! Text formats for parameters, keys and messages. Writers are deterministic
//! and readers accept exactly what they produce, so files round-trip byte for byte.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use thiserror::Error;

use super::{Monomial, PrivateKey, PublicKey, SystemParams, BLOCK_NAMES};
use crate::fields::{FqElem, TowerParams};
use crate::linalg::Mat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unexpected end of input, expected {0}")]
    Truncated(String),
    #[error("{0}")]
    Invalid(String),
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(s: &'a str) -> Lines<'a> {
        Lines {
            inner: s.lines().enumerate(),
        }
    }

    /// Next line that is not a comment.
    fn next(&mut self, what: &str) -> Result<(usize, &'a str), FormatError> {
        for (i, l) in self.inner.by_ref() {
            if !l.starts_with('#') {
                return Ok((i + 1, l));
            }
        }
        Err(FormatError::Truncated(what.to_string()))
    }

    /// Consumes the rest; true if only comments remain.
    fn at_end(&mut self) -> bool {
        self.inner.by_ref().all(|(_, l)| l.starts_with('#'))
    }
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        msg: msg.into(),
    }
}

fn parse_hex(line: usize, s: &str, w: u32) -> Result<FqElem, FormatError> {
    let ok = s.len() == w.div_ceil(4) as usize
        && s.bytes().all(|b| matches!(b, b'0'..=b'9' | b'a'..=b'f'));
    ok.then(|| FqElem::from_hex(s, w))
        .flatten()
        .ok_or_else(|| syntax(line, format!("bad field element {s:?}")))
}

/// `key value...` with a fixed key.
fn fields<'a>(line: usize, l: &'a str, key: &str, n: usize) -> Result<Vec<&'a str>, FormatError> {
    let mut it = l.split(' ');
    if it.next() != Some(key) {
        return Err(syntax(line, format!("expected {key:?}")));
    }
    let rest: Vec<&str> = it.collect();
    if rest.len() != n || rest.iter().any(|s| s.is_empty()) {
        return Err(syntax(line, format!("{key} takes {n} values")));
    }
    Ok(rest)
}

fn parse_header(lines: &mut Lines<'_>, magic: &str) -> Result<u32, FormatError> {
    let (n, l) = lines.next("header")?;
    let w = l
        .strip_prefix(magic)
        .and_then(|r| r.strip_prefix(" w="))
        .ok_or_else(|| syntax(n, format!("expected \"{magic} w=<width>\"")))?;
    let w: u32 = w.parse().map_err(|_| syntax(n, "bad width"))?;
    if !(3..=64).contains(&w) || w.to_string().len() != l.len() - magic.len() - 3 {
        return Err(syntax(n, "bad width"));
    }
    Ok(w)
}

/// `x^48+x^28+x^27+x+1` style rendering of a GF(2) polynomial.
pub fn poly_string(p: u128) -> String {
    let terms: Vec<String> = (0..128)
        .rev()
        .filter(|i| p >> i & 1 == 1)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

pub fn write_params(p: &SystemParams) -> String {
    let tp = p.tower().params();
    let w = tp.w;
    let hex = |x: FqElem| x.to_hex(w);
    let mut s = format!(
        "dme32 w={w}\n# F_q modulus {}\n",
        poly_string(tp.base_modulus)
    );
    writeln!(s, "base {:x}", tp.base_modulus).unwrap();
    writeln!(s, "quad {} {}", hex(tp.quad[0]), hex(tp.quad[1])).unwrap();
    writeln!(
        s,
        "cubic {} {} {}",
        hex(tp.cubic[0]),
        hex(tp.cubic[1]),
        hex(tp.cubic[2])
    )
    .unwrap();
    for (name, m) in [("E", p.e()), ("F", p.f())] {
        for row in m.rows() {
            let row: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(s, "{name} {}", row.join(" ")).unwrap();
        }
    }
    s
}

fn parse_dec(line: usize, s: &str) -> Result<BigUint, FormatError> {
    let canonical = s.bytes().all(|b| b.is_ascii_digit()) && (s == "0" || !s.starts_with('0'));
    canonical
        .then(|| s.parse::<BigUint>().ok())
        .flatten()
        .ok_or_else(|| syntax(line, format!("bad exponent {s:?}")))
}

pub fn read_params(text: &str) -> Result<SystemParams, FormatError> {
    let mut lines = Lines::new(text);
    let w = parse_header(&mut lines, "dme32")?;
    let (n, l) = lines.next("base")?;
    let b = fields(n, l, "base", 1)?[0];
    let base_modulus = u128::from_str_radix(b, 16)
        .ok()
        .filter(|m| format!("{m:x}") == b)
        .ok_or_else(|| syntax(n, "bad base modulus"))?;
    if crate::fields::gf2x::degree(base_modulus) != Some(w) {
        return Err(syntax(n, format!("base modulus must have degree {w}")));
    }
    let (n, l) = lines.next("quad")?;
    let q = fields(n, l, "quad", 2)?;
    let quad = [parse_hex(n, q[0], w)?, parse_hex(n, q[1], w)?];
    let (n, l) = lines.next("cubic")?;
    let c = fields(n, l, "cubic", 3)?;
    let cubic = [
        parse_hex(n, c[0], w)?,
        parse_hex(n, c[1], w)?,
        parse_hex(n, c[2], w)?,
    ];
    let mut e: [[BigUint; 3]; 3] = Default::default();
    for row in e.iter_mut() {
        let (n, l) = lines.next("E row")?;
        for (x, s) in row.iter_mut().zip(fields(n, l, "E", 3)?) {
            *x = parse_dec(n, s)?;
        }
    }
    let mut f: [[BigUint; 2]; 2] = Default::default();
    for row in f.iter_mut() {
        let (n, l) = lines.next("F row")?;
        for (x, s) in row.iter_mut().zip(fields(n, l, "F", 2)?) {
            *x = parse_dec(n, s)?;
        }
    }
    if !lines.at_end() {
        return Err(FormatError::Invalid("trailing data after F".into()));
    }
    SystemParams::new(
        TowerParams {
            w,
            base_modulus,
            quad,
            cubic,
        },
        e,
        f,
    )
    .map_err(|e| FormatError::Invalid(e.to_string()))
}

pub fn write_private_key(sk: &PrivateKey, w: u32) -> String {
    let mut s = format!("dme32-key w={w}\n");
    for (name, b) in BLOCK_NAMES.iter().zip(sk.blocks()) {
        writeln!(s, "{name}").unwrap();
        for i in 0..b.dim() {
            let row: Vec<String> = b.row(i).iter().map(|x| x.to_hex(w)).collect();
            writeln!(s, "{}", row.join(" ")).unwrap();
        }
    }
    s
}

fn read_rows(
    lines: &mut Lines<'_>,
    w: u32,
    dim: usize,
    what: &str,
) -> Result<Vec<Vec<FqElem>>, FormatError> {
    (0..dim)
        .map(|_| {
            let (n, l) = lines.next(what)?;
            let parts: Vec<&str> = l.split(' ').collect();
            if parts.len() != dim {
                return Err(syntax(n, format!("{what} rows have {dim} entries")));
            }
            parts.iter().map(|p| parse_hex(n, p, w)).collect()
        })
        .collect()
}

/// Reads a private key and checks every block is invertible over the
/// parameters' base field.
pub fn read_private_key(text: &str, params: &SystemParams) -> Result<PrivateKey, FormatError> {
    let mut lines = Lines::new(text);
    let w = parse_header(&mut lines, "dme32-key")?;
    if w != params.w() {
        return Err(FormatError::Invalid(format!(
            "key width {w} does not match parameters ({})",
            params.w()
        )));
    }
    let mut blocks = Vec::with_capacity(7);
    for (i, name) in BLOCK_NAMES.iter().enumerate() {
        let (n, l) = lines.next(name)?;
        if l != *name {
            return Err(syntax(n, format!("expected block {name}")));
        }
        let rows = read_rows(&mut lines, w, if i < 3 { 2 } else { 3 }, name)?;
        blocks.push(Mat::from_rows(&rows));
    }
    if !lines.at_end() {
        return Err(FormatError::Invalid("trailing data after L32".into()));
    }
    let blocks: [Mat; 7] = blocks.try_into().expect("seven blocks");
    let sk = PrivateKey::from_blocks(blocks).expect("shapes fixed by the reader");
    if !sk.is_valid(params.tower().base()) {
        return Err(FormatError::Invalid(
            "private key has a singular block".into(),
        ));
    }
    Ok(sk)
}

pub fn write_public_key(pk: &PublicKey, w: u32) -> String {
    let mut s = format!("dme32-pub w={w}\n");
    for i in 0..6 {
        writeln!(s, "component {} terms={}", i + 1, pk.component(i).len()).unwrap();
        for (m, c) in pk.component(i) {
            let e = m.exps();
            writeln!(
                s,
                "{} {} {} {} {} {} {}",
                e[0],
                e[1],
                e[2],
                e[3],
                e[4],
                e[5],
                c.to_hex(w)
            )
            .unwrap();
        }
    }
    s
}

pub fn read_public_key(text: &str, params: &SystemParams) -> Result<PublicKey, FormatError> {
    let mut lines = Lines::new(text);
    let w = parse_header(&mut lines, "dme32-pub")?;
    if w != params.w() {
        return Err(FormatError::Invalid(format!(
            "public key width {w} does not match parameters ({})",
            params.w()
        )));
    }
    let qm1 = params.q_minus_1();
    let mut polys: [BTreeMap<Monomial, FqElem>; 6] = Default::default();
    for (i, poly) in polys.iter_mut().enumerate() {
        let (n, l) = lines.next("component header")?;
        let count = l
            .strip_prefix(&format!("component {} terms=", i + 1))
            .and_then(|c| c.parse::<usize>().ok().filter(|v| v.to_string() == c))
            .ok_or_else(|| syntax(n, format!("expected \"component {} terms=<n>\"", i + 1)))?;
        let mut prev: Option<Monomial> = None;
        for _ in 0..count {
            let (n, l) = lines.next("term")?;
            let parts: Vec<&str> = l.split(' ').collect();
            if parts.len() != 7 {
                return Err(syntax(n, "terms have six exponents and a coefficient"));
            }
            let mut exps = [0u64; 6];
            for (e, s) in exps.iter_mut().zip(&parts[..6]) {
                *e = s
                    .parse::<u64>()
                    .ok()
                    .filter(|v| v.to_string() == *s && *v <= qm1)
                    .ok_or_else(|| syntax(n, format!("bad exponent {s:?}")))?;
            }
            let c = parse_hex(n, parts[6], w)?;
            if c.is_zero() {
                return Err(syntax(n, "zero coefficient"));
            }
            let m = Monomial(exps);
            if prev.is_some_and(|p| p >= m) {
                return Err(syntax(n, "terms out of order or repeated"));
            }
            prev = Some(m);
            poly.insert(m, c);
        }
    }
    if !lines.at_end() {
        return Err(FormatError::Invalid(
            "trailing data after component 6".into(),
        ));
    }
    Ok(PublicKey::new(polys))
}

/// Six lines, one hex element each.
pub fn write_vector(v: &[FqElem; 6], w: u32) -> String {
    v.iter().map(|x| x.to_hex(w) + "\n").collect()
}

pub fn read_vector(text: &str, w: u32) -> Result<[FqElem; 6], FormatError> {
    let mut lines = Lines::new(text);
    let mut out = [FqElem::ZERO; 6];
    for x in out.iter_mut() {
        let (n, l) = lines.next("six field elements")?;
        *x = parse_hex(n, l, w)?;
    }
    if !lines.at_end() {
        return Err(FormatError::Invalid("more than six elements".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dme::{derive_public_key, gen_system_params, keygen, Preset};

    #[test]
    fn nist_modulus_line() {
        let p = gen_system_params(48, 0, Some(Preset::Nist));
        let s = write_params(&p);
        assert!(s.contains("x^48+x^28+x^27+x+1\n"));
        assert!(s.contains("base 1000018000003\n"));
        assert_eq!(read_params(&s).unwrap(), p);
    }

    #[test]
    fn params_round_trip() {
        for (w, seed) in [(4, 0), (8, 1), (12, 2), (20, 3)] {
            let p = gen_system_params(w, seed, None);
            let s = write_params(&p);
            assert!(s.starts_with(&format!("dme32 w={w}\n")));
            let back = read_params(&s).unwrap();
            assert_eq!(back, p);
            assert_eq!(write_params(&back), s);
        }
    }

    #[test]
    fn key_files_round_trip() {
        let p = gen_system_params(8, 4, None);
        let sk = keygen(&p, 9);
        let s = write_private_key(&sk, 8);
        assert_eq!(read_private_key(&s, &p).unwrap(), sk);
        let pk = derive_public_key(&sk, &p);
        let t = write_public_key(&pk, 8);
        let back = read_public_key(&t, &p).unwrap();
        assert_eq!(back, pk);
        assert_eq!(write_public_key(&back, 8), t);
    }

    #[test]
    fn vector_round_trip() {
        let v = [0x0a, 0, 1, 0xff, 0x10, 0x7].map(FqElem);
        let s = write_vector(&v, 8);
        assert_eq!(s, "0a\n00\n01\nff\n10\n07\n");
        assert_eq!(read_vector(&s, 8).unwrap(), v);
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        let p = gen_system_params(8, 1, None);
        let good = write_params(&p);
        assert!(read_params(&good.replace("dme32 w=8", "dme32 w=9")).is_err());
        assert!(read_params(&good.replace("\nE ", "\nE 3 ")).is_err());
        assert!(read_params(&good[..good.len() - 5]).is_err());
        assert!(read_params(&format!("{good}junk\n")).is_err());
        assert!(read_vector("0a\n00\n01\nff\n10\n", 8).is_err());
        assert!(read_vector("0a\n00\n01\nff\n10\n7\n", 8).is_err());
        assert!(read_vector("0a\n00\n01\nff\n10\nzz\n", 8).is_err());
        let pk = derive_public_key(&keygen(&p, 2), &p);
        let t = write_public_key(&pk, 8);
        let first_term = t.lines().nth(2).unwrap();
        let swapped = t.replacen(first_term, &first_term.replace(' ', "  "), 1);
        assert!(read_public_key(&swapped, &p).is_err());
        let mut sk = keygen(&p, 2);
        sk.l12 = Mat::zero(2);
        let singular = write_private_key(&sk, 8);
        assert!(matches!(
            read_private_key(&singular, &p),
            Err(FormatError::Invalid(_))
        ));
    }
}
