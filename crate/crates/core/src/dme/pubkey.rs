use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::{PrivateKey, SystemParams};
use crate::fields::{BaseField, Ext2Elem, Ext3Elem, Field, FqElem};
use crate::linalg::Mat;

/// Exponent vector of a monomial in `x1..x6`, canonically reduced so that
/// every nonzero exponent lies in `[1, q-1]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub [u64; 6]);

fn canon(e: u64, q_minus_1: u64) -> u64 {
    if e == 0 {
        0
    } else {
        (e - 1) % q_minus_1 + 1
    }
}

fn canon_big(e: &BigUint, q_minus_1: u64) -> u64 {
    if e.is_zero() {
        0
    } else {
        ((e - 1u32) % q_minus_1)
            .to_u64()
            .expect("reduced below q-1")
            + 1
    }
}

impl Monomial {
    pub fn canonical(exps: [u64; 6], q_minus_1: u64) -> Monomial {
        Monomial(exps.map(|e| canon(e, q_minus_1)))
    }

    pub fn from_big(exps: &[BigUint; 6], q_minus_1: u64) -> Monomial {
        Monomial(std::array::from_fn(|i| canon_big(&exps[i], q_minus_1)))
    }

    pub fn exps(&self) -> &[u64; 6] {
        &self.0
    }

    /// Bitmask of the variables with nonzero exponent (bit `i` for `x_{i+1}`).
    pub fn vars(&self) -> u8 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    pub fn eval(&self, k: &BaseField, x: &[FqElem; 6]) -> FqElem {
        self.0
            .iter()
            .zip(x)
            .filter(|(&e, _)| e != 0)
            .fold(FqElem::ONE, |acc, (&e, &xi)| k.mul(acc, k.pow_u64(xi, e)))
    }
}

/// Six polynomials over `F_q`, nonzero coefficients only.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PublicKey {
    polys: [BTreeMap<Monomial, FqElem>; 6],
}

impl PublicKey {
    pub fn new(mut polys: [BTreeMap<Monomial, FqElem>; 6]) -> PublicKey {
        for p in polys.iter_mut() {
            p.retain(|_, c| !c.is_zero());
        }
        PublicKey { polys }
    }

    /// Component `i` in `0..6`.
    pub fn component(&self, i: usize) -> &BTreeMap<Monomial, FqElem> {
        &self.polys[i]
    }

    pub fn components(&self) -> &[BTreeMap<Monomial, FqElem>; 6] {
        &self.polys
    }

    pub fn coeff(&self, i: usize, mon: &Monomial) -> FqElem {
        self.polys[i].get(mon).copied().unwrap_or_default()
    }

    pub fn term_count(&self) -> usize {
        self.polys.iter().map(BTreeMap::len).sum()
    }

    /// The public key of the same map precomposed with
    /// `x5 <- x5 + t x6`, `x6 <- t x5 + (1 + t^2) x6`.
    pub fn substitute_x56(&self, k: &BaseField, q_minus_1: u64, t: FqElem) -> PublicKey {
        let s = FqElem::ONE + k.square(t);
        let polys = self.polys.clone().map(|poly| {
            let mut out = BTreeMap::new();
            for (mon, c) in poly {
                let [e1, e2, e3, e4, e5, e6] = mon.0;
                // (A + B)^e = sum over bit-submasks a of e of A^a B^(e-a)
                for a in submasks(e5) {
                    for b in submasks(e6) {
                        let coeff =
                            k.mul(c, k.mul(k.pow_u64(t, (e5 - a) + b), k.pow_u64(s, e6 - b)));
                        let m = Monomial::canonical(
                            [e1, e2, e3, e4, a + b, (e5 - a) + (e6 - b)],
                            q_minus_1,
                        );
                        *out.entry(m).or_insert(FqElem::ZERO) += coeff;
                    }
                }
            }
            out
        });
        PublicKey::new(polys)
    }
}

fn submasks(e: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(e);
    std::iter::from_fn(move || {
        let cur = next?;
        next = (cur != 0).then(|| (cur - 1) & e);
        Some(cur)
    })
}

pub fn coeff_lookup(pk: &PublicKey, component: usize, mon: &Monomial) -> FqElem {
    pk.coeff(component, mon)
}

pub fn eval_public(pk: &PublicKey, params: &SystemParams, m: &[FqElem; 6]) -> [FqElem; 6] {
    let k = params.tower().base();
    std::array::from_fn(|i| {
        pk.polys[i].iter().fold(FqElem::ZERO, |acc, (mon, &c)| {
            acc + k.mul(c, mon.eval(k, m))
        })
    })
}

#[derive(Clone, Debug)]
struct Term<E> {
    c: E,
    e: [BigUint; 6],
}

fn frob_pow<K: Field>(k: &K, p: &[Term<K::Elem>], log: u32) -> Vec<Term<K::Elem>> {
    p.iter()
        .map(|t| Term {
            c: k.frobenius(t.c, log),
            e: t.e.clone().map(|x| x << log),
        })
        .collect()
}

fn mul_terms<K: Field>(k: &K, a: &[Term<K::Elem>], b: &[Term<K::Elem>]) -> Vec<Term<K::Elem>> {
    a.iter()
        .flat_map(|s| {
            b.iter().map(move |t| Term {
                c: k.mul(s.c, t.c),
                e: std::array::from_fn(|i| &s.e[i] + &t.e[i]),
            })
        })
        .collect()
}

fn unit_exps(i: usize) -> [BigUint; 6] {
    std::array::from_fn(|j| BigUint::from(u32::from(i == j)))
}

fn col3(m: &Mat, j: usize) -> [FqElem; 3] {
    [m[(0, j)], m[(1, j)], m[(2, j)]]
}

/// Symbolic expansion of the encryption map into six polynomials.
pub fn derive_public_key(sk: &PrivateKey, params: &SystemParams) -> PublicKey {
    let t = params.tower();
    let (k, quad, cubic) = (t.base(), t.quad(), t.cubic());

    // L1 blocks as linear forms over F_{q^2}
    let blocks: Vec<Vec<Term<Ext2Elem>>> = sk
        .l1()
        .iter()
        .enumerate()
        .map(|(j, m)| {
            (0..2)
                .map(|c| Term {
                    c: Ext2Elem::new(m[(0, c)], m[(1, c)]),
                    e: unit_exps(2 * j + c),
                })
                .collect()
        })
        .collect();

    // E-map
    let y: Vec<Vec<Term<Ext2Elem>>> = params
        .e_log()
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter_map(|(j, l)| l.map(|l| frob_pow(&quad, &blocks[j], l)))
                .reduce(|a, b| mul_terms(&quad, &a, &b))
                .expect("every row of E has nonzero entries")
        })
        .collect();

    // L2 on F_q coordinates, regrouped into two F_{q^3}-valued polynomials
    let coords: [(usize, usize); 6] = [(0, 0), (0, 1), (1, 0), (1, 1), (2, 0), (2, 1)];
    let u: Vec<Vec<Term<Ext3Elem>>> = sk
        .l2()
        .iter()
        .enumerate()
        .map(|(half, m)| {
            let mut terms = Vec::new();
            for r in 0..3 {
                let (yi, ci) = coords[3 * half + r];
                let col = col3(m, r);
                for term in &y[yi] {
                    let a = term.c.coords()[ci];
                    if a.is_zero() {
                        continue;
                    }
                    terms.push(Term {
                        c: Ext3Elem::from_coords(col.map(|x| k.mul(x, a))),
                        e: term.e.clone(),
                    });
                }
            }
            terms
        })
        .collect();

    // F-map
    let z: Vec<Vec<Term<Ext3Elem>>> = params
        .f_log()
        .iter()
        .map(|row| {
            mul_terms(
                &cubic,
                &frob_pow(&cubic, &u[0], row[0]),
                &frob_pow(&cubic, &u[1], row[1]),
            )
        })
        .collect();

    // L3, then canonical reduction and merging
    let qm1 = params.q_minus_1();
    let mut polys: [BTreeMap<Monomial, FqElem>; 6] = Default::default();
    for (half, m) in sk.l3().iter().enumerate() {
        for term in &z[half] {
            let mon = Monomial::from_big(&term.e, qm1);
            let c = term.c.coords();
            for i in 0..3 {
                let v = (0..3).fold(FqElem::ZERO, |acc, r| acc + k.mul(m[(i, r)], c[r]));
                *polys[3 * half + i].entry(mon).or_insert(FqElem::ZERO) += v;
            }
        }
    }
    PublicKey::new(polys)
}

/// Monomials that can occur in each component for any key, from `E` and `F` alone.
pub fn structural_support(params: &SystemParams) -> [BTreeSet<Monomial>; 6] {
    let qm1 = params.q_minus_1();
    let pow = |l: u32| BigUint::from(1u32) << l;
    let rows: Vec<Vec<[BigUint; 6]>> = params
        .e_log()
        .iter()
        .map(|row| {
            let nz: Vec<(usize, u32)> = row
                .iter()
                .enumerate()
                .filter_map(|(j, l)| l.map(|l| (j, l)))
                .collect();
            let mut out = Vec::new();
            for a in 0..2 {
                for b in 0..2 {
                    let mut e: [BigUint; 6] = Default::default();
                    e[2 * nz[0].0 + a] += pow(nz[0].1);
                    e[2 * nz[1].0 + b] += pow(nz[1].1);
                    out.push(e);
                }
            }
            out
        })
        .collect();
    let b0: Vec<_> = rows[0].iter().chain(&rows[1]).collect();
    let b1: Vec<_> = rows[1].iter().chain(&rows[2]).collect();
    let mut halves = [BTreeSet::new(), BTreeSet::new()];
    for (half, set) in halves.iter_mut().enumerate() {
        let [l0, l1] = params.f_log()[half];
        for m in &b0 {
            for n in &b1 {
                let e: [BigUint; 6] = std::array::from_fn(|i| (&m[i] << l0) + (&n[i] << l1));
                set.insert(Monomial::from_big(&e, qm1));
            }
        }
    }
    let [top, bottom] = halves;
    [
        top.clone(),
        top.clone(),
        top,
        bottom.clone(),
        bottom.clone(),
        bottom,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dme::{encrypt_private, gen_system_params, keygen, random_plaintext, Preset};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn canonical_form() {
        assert_eq!(canon(0, 255), 0);
        assert_eq!(canon(255, 255), 255);
        assert_eq!(canon(256, 255), 1);
        assert_eq!(canon(510, 255), 255);
        assert_eq!(canon_big(&(BigUint::from(1u32) << 16), 255), 1);
    }

    #[test]
    fn submask_enumeration() {
        let mut s: Vec<u64> = submasks(0b1010).collect();
        s.sort();
        assert_eq!(s, vec![0, 2, 8, 10]);
        assert_eq!(submasks(0).collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn evaluation_matches_encryption() {
        for (w, seed) in [(8u32, 1u64), (8, 2), (6, 3), (10, 4)] {
            let p = gen_system_params(w, seed, None);
            let sk = keygen(&p, seed);
            let pk = derive_public_key(&sk, &p);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..300 {
                let m = random_plaintext(w, &mut rng);
                assert_eq!(
                    eval_public(&pk, &p, &m),
                    encrypt_private(&sk, &p, &m).unwrap()
                );
            }
        }
    }

    #[test]
    fn nist_evaluation_matches_encryption() {
        let p = gen_system_params(48, 0, Some(Preset::Nist));
        let sk = keygen(&p, 3);
        let pk = derive_public_key(&sk, &p);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..3 {
            let m = random_plaintext(48, &mut rng);
            assert_eq!(
                eval_public(&pk, &p, &m),
                encrypt_private(&sk, &p, &m).unwrap()
            );
        }
    }

    #[test]
    fn support_is_structural() {
        for seed in 0..5 {
            let p = gen_system_params(8, seed, None);
            let pk = derive_public_key(&keygen(&p, seed), &p);
            let sup = structural_support(&p);
            for (i, s) in sup.iter().enumerate() {
                assert!(pk.component(i).keys().all(|m| s.contains(m)));
            }
        }
    }

    #[test]
    fn empty_key_evaluates_to_zero() {
        let p = gen_system_params(8, 1, None);
        let pk = PublicKey::default();
        assert_eq!(eval_public(&pk, &p, &[FqElem(5); 6]), [FqElem::ZERO; 6]);
    }

    #[test]
    fn public_map_is_not_additive() {
        let p = gen_system_params(8, 1, None);
        let sk = keygen(&p, 1);
        let pk = derive_public_key(&sk, &p);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let violated = (0..20).any(|_| {
            let a = random_plaintext(8, &mut rng);
            let b = random_plaintext(8, &mut rng);
            let s: [FqElem; 6] = std::array::from_fn(|i| a[i] + b[i]);
            let (fa, fb, fs) = (
                eval_public(&pk, &p, &a),
                eval_public(&pk, &p, &b),
                eval_public(&pk, &p, &s),
            );
            (0..6).any(|i| fs[i] != fa[i] + fb[i])
        });
        assert!(violated);
    }

    #[test]
    fn lookup_is_canonical() {
        let p = gen_system_params(8, 1, None);
        let pk = derive_public_key(&keygen(&p, 1), &p);
        let (mon, &c) = pk.component(0).iter().next().unwrap();
        let raw: [u64; 6] = mon.0.map(|e| if e == 0 { 0 } else { e + 255 });
        assert_eq!(coeff_lookup(&pk, 0, &Monomial::canonical(raw, 255)), c);
        assert_eq!(coeff_lookup(&pk, 0, &Monomial([0; 6])), FqElem::ZERO);
    }

    #[test]
    fn substitution_matches_key_change() {
        let p = gen_system_params(8, 2, None);
        let k = p.tower().base();
        let sk = keygen(&p, 4);
        let pk = derive_public_key(&sk, &p);
        for t in [1u64, 2, 77] {
            let t = FqElem(t);
            let kt = Mat::from_rows(&[[FqElem::ONE, t], [t, FqElem::ONE + k.square(t)]]);
            let mut sk2 = sk.clone();
            sk2.l13 = sk.l13.mul(k, &kt);
            assert_eq!(
                pk.substitute_x56(k, p.q_minus_1(), t),
                derive_public_key(&sk2, &p)
            );
        }
    }
}
