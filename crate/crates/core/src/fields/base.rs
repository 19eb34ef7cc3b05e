use std::fmt;
use std::sync::Arc;

use rand::Rng;

use super::gf2x;
use super::{Field, FieldError, FqElem};

/// Fields up to this width get log/antilog tables.
const TABLE_MAX_WIDTH: u32 = 16;

struct LogTables {
    log: Vec<u32>,
    // exp[i] = g^i for 0 <= i < 2(q-1), so a product needs no reduction.
    exp: Vec<u64>,
}

/// `GF(2^w)` as `GF(2)[x]` modulo a degree-`w` irreducible polynomial.
#[derive(Clone)]
pub struct BaseField {
    w: u32,
    modulus: u128,
    tables: Option<Arc<LogTables>>,
}

impl fmt::Debug for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BaseField")
            .field("w", &self.w)
            .field("modulus", &format_args!("{:#x}", self.modulus))
            .finish()
    }
}

impl PartialEq for BaseField {
    fn eq(&self, other: &Self) -> bool {
        self.w == other.w && self.modulus == other.modulus
    }
}

impl Eq for BaseField {}

impl BaseField {
    /// `modulus` is the full degree-`w` polynomial including the `x^w` term.
    /// Irreducibility is not checked here; see [`gf2x::is_irreducible`].
    pub fn new(w: u32, modulus: u128) -> BaseField {
        assert!((1..=64).contains(&w), "field width {w} out of range");
        assert_eq!(
            gf2x::degree(modulus),
            Some(w),
            "modulus degree must equal w"
        );
        let mut field = BaseField {
            w,
            modulus,
            tables: None,
        };
        if w <= TABLE_MAX_WIDTH {
            field.tables = field.build_tables().map(Arc::new);
        }
        field
    }

    pub fn width(&self) -> u32 {
        self.w
    }

    pub fn modulus(&self) -> u128 {
        self.modulus
    }

    /// `q - 1` as a machine word.
    pub fn order_minus_one(&self) -> u64 {
        if self.w == 64 {
            u64::MAX
        } else {
            (1u64 << self.w) - 1
        }
    }

    pub fn element(&self, v: u64) -> FqElem {
        debug_assert!(self.w == 64 || v >> self.w == 0);
        FqElem(v)
    }

    #[inline]
    fn mul_slow(&self, a: u64, b: u64) -> u64 {
        let mut r = gf2x::clmul(a, b);
        let w = self.w;
        let mut i = 127 - r.leading_zeros().min(127);
        while r >> w != 0 {
            if (r >> i) & 1 == 1 {
                r ^= self.modulus << (i - w);
            }
            i -= 1;
        }
        r as u64
    }

    fn pow_slow(&self, a: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    fn build_tables(&self) -> Option<LogTables> {
        let n = self.order_minus_one();
        let primes = prime_factors(n);
        let gen = (2..=n).find(|&g| primes.iter().all(|&p| self.pow_slow(g, n / p) != 1))?;
        let mut log = vec![0u32; (n + 1) as usize];
        let mut exp = vec![0u64; 2 * n as usize];
        let mut x = 1u64;
        for i in 0..n as usize {
            exp[i] = x;
            exp[i + n as usize] = x;
            log[x as usize] = i as u32;
            x = self.mul_slow(x, gen);
        }
        Some(LogTables { log, exp })
    }

    /// Square root; every element of a binary field has exactly one.
    pub fn sqrt(&self, a: FqElem) -> FqElem {
        self.frobenius(a, self.w - 1)
    }

    /// Absolute trace to GF(2).
    pub fn trace(&self, a: FqElem) -> bool {
        let mut t = a;
        let mut x = a;
        for _ in 1..self.w {
            x = self.square(x);
            t += x;
        }
        debug_assert!(t.0 <= 1);
        t.0 == 1
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl Field for BaseField {
    type Elem = FqElem;

    fn degree(&self) -> u32 {
        self.w
    }

    fn one(&self) -> FqElem {
        FqElem::ONE
    }

    #[inline]
    fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        match &self.tables {
            Some(t) => {
                if a.0 == 0 || b.0 == 0 {
                    FqElem::ZERO
                } else {
                    FqElem(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
                }
            }
            None => FqElem(self.mul_slow(a.0, b.0)),
        }
    }

    fn inv(&self, a: FqElem) -> Result<FqElem, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        let n = self.order_minus_one();
        Ok(match &self.tables {
            Some(t) => FqElem(t.exp[((n - t.log[a.0 as usize] as u64) % n) as usize]),
            None => FqElem(self.pow_slow(a.0, n - 1)),
        })
    }

    fn embed(&self, x: FqElem) -> FqElem {
        x
    }

    fn f2_basis(&self, i: u32) -> FqElem {
        FqElem(1 << i)
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FqElem {
        FqElem(rng.gen::<u64>() & self.order_minus_one())
    }

    #[inline]
    fn pow_u64(&self, a: FqElem, e: u64) -> FqElem {
        if e == 0 {
            return FqElem::ONE;
        }
        if a.is_zero() {
            return FqElem::ZERO;
        }
        match &self.tables {
            Some(t) => {
                let n = self.order_minus_one();
                let l = (t.log[a.0 as usize] as u64 * (e % n)) % n;
                FqElem(t.exp[l as usize])
            }
            None => FqElem(self.pow_slow(a.0, e % self.order_minus_one())),
        }
    }
}
