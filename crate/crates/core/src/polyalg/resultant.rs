use super::{PolyError, UniPoly};
use crate::fields::Field;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
}

/// Bivariate polynomial at most quadratic in each variable;
/// `c[i][j]` is the coefficient of `X^i Y^j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BiPoly<E> {
    pub c: [[E; 3]; 3],
}

impl<E> BiPoly<E>
where
    E: Copy + Default + Eq + std::ops::Add<Output = E>,
{
    pub fn new(c: [[E; 3]; 3]) -> BiPoly<E> {
        BiPoly { c }
    }

    pub fn zero() -> BiPoly<E> {
        BiPoly {
            c: [[E::default(); 3]; 3],
        }
    }

    /// `cx X + cy Y + c0`.
    pub fn affine(cx: E, cy: E, c0: E) -> BiPoly<E> {
        let mut p = BiPoly::zero();
        p.c[1][0] = cx;
        p.c[0][1] = cy;
        p.c[0][0] = c0;
        p
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().flatten().all(|&x| x == E::default())
    }

    pub fn add(&self, rhs: &BiPoly<E>) -> BiPoly<E> {
        let mut out = *self;
        for i in 0..3 {
            for j in 0..3 {
                out.c[i][j] = out.c[i][j] + rhs.c[i][j];
            }
        }
        out
    }

    /// Product; panics if a variable would exceed degree 2.
    pub fn mul<K: Field<Elem = E>>(&self, k: &K, rhs: &BiPoly<E>) -> BiPoly<E> {
        let mut out = BiPoly::zero();
        for (i, row) in self.c.iter().enumerate() {
            for (j, &a) in row.iter().enumerate() {
                if a == E::default() {
                    continue;
                }
                for (u, rrow) in rhs.c.iter().enumerate() {
                    for (v, &b) in rrow.iter().enumerate() {
                        if b == E::default() {
                            continue;
                        }
                        assert!(i + u <= 2 && j + v <= 2, "product exceeds degree 2");
                        out.c[i + u][j + v] = out.c[i + u][j + v] + k.mul(a, b);
                    }
                }
            }
        }
        out
    }

    pub fn eval<K: Field<Elem = E>>(&self, k: &K, x: E, y: E) -> E {
        self.as_poly_in(k, Var::X)
            .iter()
            .rev()
            .fold(E::default(), |acc, p| k.mul(acc, x) + p.eval(k, y))
    }

    pub fn swap_vars(&self) -> BiPoly<E> {
        let mut out = BiPoly::zero();
        for i in 0..3 {
            for j in 0..3 {
                out.c[j][i] = self.c[i][j];
            }
        }
        out
    }

    /// Coefficients with respect to `var`, each a polynomial in the other variable.
    fn as_poly_in<K: Field<Elem = E>>(&self, _k: &K, var: Var) -> [UniPoly<E>; 3] {
        let m = match var {
            Var::X => *self,
            Var::Y => self.swap_vars(),
        };
        [0, 1, 2].map(|i| UniPoly::new(m.c[i].to_vec()))
    }
}

/// `Res_var(P, Q)` as a polynomial in the surviving variable.
pub fn resultant_eliminate<K: Field>(
    k: &K,
    p: &BiPoly<K::Elem>,
    q: &BiPoly<K::Elem>,
    eliminate: Var,
) -> Result<UniPoly<K::Elem>, PolyError> {
    let pc = trimmed(p.as_poly_in(k, eliminate));
    let qc = trimmed(q.as_poly_in(k, eliminate));
    let res = if pc.len() == 3 && qc.len() == 3 {
        quadratic_resultant(k, &pc, &qc)
    } else {
        sylvester_resultant(k, &pc, &qc)
    };
    if res.is_zero() {
        Err(PolyError::DegenerateSystem)
    } else {
        Ok(res)
    }
}

fn trimmed<E>(c: [UniPoly<E>; 3]) -> Vec<UniPoly<E>>
where
    E: Copy + Default + Eq + std::ops::Add<Output = E>,
{
    let mut v = c.to_vec();
    while v.last().is_some_and(|p| p.is_zero()) {
        v.pop();
    }
    v
}

/// Closed form for two quadratics `aX^2+bX+c` and `dX^2+eX+f`:
/// `(af - cd)^2 - (ae - bd)(bf - ce)`, signs dropped in characteristic 2.
fn quadratic_resultant<K: Field>(
    k: &K,
    p: &[UniPoly<K::Elem>],
    q: &[UniPoly<K::Elem>],
) -> UniPoly<K::Elem> {
    let (c, b, a) = (&p[0], &p[1], &p[2]);
    let (f, e, d) = (&q[0], &q[1], &q[2]);
    let af_cd = a.mul(k, f).add(&c.mul(k, d));
    let ae_bd = a.mul(k, e).add(&b.mul(k, d));
    let bf_ce = b.mul(k, f).add(&c.mul(k, e));
    af_cd.mul(k, &af_cd).add(&ae_bd.mul(k, &bf_ce))
}

/// Determinant of the Sylvester matrix by Laplace expansion.
fn sylvester_resultant<K: Field>(
    k: &K,
    p: &[UniPoly<K::Elem>],
    q: &[UniPoly<K::Elem>],
) -> UniPoly<K::Elem> {
    if p.is_empty() || q.is_empty() {
        return UniPoly::zero();
    }
    let m = p.len() - 1;
    let n = q.len() - 1;
    let size = m + n;
    if size == 0 {
        return UniPoly::constant(k.one());
    }
    let mut mat = vec![vec![UniPoly::zero(); size]; size];
    for r in 0..n {
        for (i, c) in p.iter().rev().enumerate() {
            mat[r][r + i] = c.clone();
        }
    }
    for r in 0..m {
        for (i, c) in q.iter().rev().enumerate() {
            mat[n + r][r + i] = c.clone();
        }
    }
    let cols: Vec<usize> = (0..size).collect();
    laplace(k, &mat, 0, &cols)
}

/// Determinant of the minor on rows `row..` and the given columns.
/// Signs are irrelevant in characteristic 2.
fn laplace<K: Field>(
    k: &K,
    mat: &[Vec<UniPoly<K::Elem>>],
    row: usize,
    cols: &[usize],
) -> UniPoly<K::Elem> {
    if cols.len() == 1 {
        return mat[row][cols[0]].clone();
    }
    let mut acc = UniPoly::zero();
    for (idx, &c) in cols.iter().enumerate() {
        let entry = &mat[row][c];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != idx)
            .map(|(_, &c)| c)
            .collect();
        acc = acc.add(&entry.mul(k, &laplace(k, mat, row + 1, &rest)));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{gen_tower_params, Ext3Elem, FqElem, Tower};
    use crate::polyalg::upoly_roots;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tower() -> Tower {
        Tower::new(gen_tower_params(8, 11)).unwrap()
    }

    fn random_bi<K: Field>(k: &K, rng: &mut ChaCha8Rng) -> BiPoly<K::Elem> {
        let mut p = BiPoly::zero();
        for i in 0..3 {
            for j in 0..3 - i {
                p.c[i][j] = k.random(rng);
            }
        }
        p
    }

    #[test]
    fn hand_elimination() {
        let t = tower();
        let c = t.cubic();
        let one = c.one();
        // P = XY - 1, Q = X - Y
        let mut p = BiPoly::zero();
        p.c[1][1] = one;
        p.c[0][0] = one;
        let q = BiPoly::affine(one, one, c.zero());
        let r = resultant_eliminate(&c, &p, &q, Var::X).unwrap();
        // Y^2 - 1 = Y^2 + 1 in characteristic 2
        assert_eq!(r.monic(&c), UniPoly::new(vec![one, c.zero(), one]));
    }

    #[test]
    fn vanishes_at_known_common_zero() {
        let t = tower();
        let c = t.cubic();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let (u, v) = (c.random(&mut rng), c.random(&mut rng));
            let mut p = random_bi(&c, &mut rng);
            let mut q = random_bi(&c, &mut rng);
            p.c[0][0] += p.eval(&c, u, v);
            q.c[0][0] += q.eval(&c, u, v);
            assert!(c.is_zero(p.eval(&c, u, v)));
            let ry = resultant_eliminate(&c, &p, &q, Var::X).unwrap();
            assert!(ry.degree().unwrap() <= 4);
            assert!(c.is_zero(ry.eval(&c, v)));
            let rx = resultant_eliminate(&c, &p, &q, Var::Y).unwrap();
            assert!(c.is_zero(rx.eval(&c, u)));
            assert!(upoly_roots(&c, &ry).contains(&v));
        }
    }

    #[test]
    fn closed_form_agrees_with_sylvester() {
        let t = tower();
        let c = t.cubic();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let p = random_bi(&c, &mut rng);
            let q = random_bi(&c, &mut rng);
            let pc = trimmed(p.as_poly_in(&c, Var::X));
            let qc = trimmed(q.as_poly_in(&c, Var::X));
            assert_eq!(pc.len(), 3);
            assert_eq!(
                quadratic_resultant(&c, &pc, &qc),
                sylvester_resultant(&c, &pc, &qc)
            );
        }
    }

    #[test]
    fn sylvester_matches_product_of_evaluations() {
        // Res(a(X-r1)(X-r2), Q) = a^deg(Q) * Q(r1) * Q(r2)
        let t = tower();
        let b = t.base();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for deg_q in 1..=2usize {
            for _ in 0..20 {
                let a = b.random_nonzero(&mut rng);
                let (r1, r2) = (b.random(&mut rng), b.random(&mut rng));
                let p = UniPoly::constant(a)
                    .mul(b, &UniPoly::linear(r1, FqElem::ONE))
                    .mul(b, &UniPoly::linear(r2, FqElem::ONE));
                let mut qc: Vec<FqElem> = (0..=deg_q).map(|_| b.random(&mut rng)).collect();
                qc[deg_q] = b.random_nonzero(&mut rng);
                let q = UniPoly::new(qc);
                let lift = |f: &UniPoly<FqElem>| -> Vec<UniPoly<FqElem>> {
                    f.coeffs().iter().map(|&x| UniPoly::constant(x)).collect()
                };
                let res = sylvester_resultant(b, &lift(&p), &lift(&q));
                let want = b.mul(
                    b.pow_u64(a, deg_q as u64),
                    b.mul(q.eval(b, r1), q.eval(b, r2)),
                );
                assert_eq!(res.coeff(0), want);
                assert!(res.degree().unwrap_or(0) == 0);
            }
        }
    }

    #[test]
    fn roots_cover_exhaustive_common_zeros() {
        // every v admitting a common zero (u, v) must be a resultant root
        let t = Tower::new(gen_tower_params(4, 3)).unwrap();
        let c = t.cubic();
        let all: Vec<Ext3Elem> = (0..1u64 << 12)
            .map(|v| Ext3Elem::new(FqElem(v & 15), FqElem((v >> 4) & 15), FqElem(v >> 8)))
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..3 {
            let (u0, v0) = (c.random(&mut rng), c.random(&mut rng));
            let mut p = random_bi(&c, &mut rng);
            let mut q = random_bi(&c, &mut rng);
            p.c[0][0] += p.eval(&c, u0, v0);
            q.c[0][0] += q.eval(&c, u0, v0);
            let roots = upoly_roots(&c, &resultant_eliminate(&c, &p, &q, Var::X).unwrap());
            for &v in &all {
                let pv = p.as_poly_in(&c, Var::X).map(|f| f.eval(&c, v));
                let qv = q.as_poly_in(&c, Var::X).map(|f| f.eval(&c, v));
                let pu = UniPoly::new(pv.to_vec());
                let qu = UniPoly::new(qv.to_vec());
                let common = all
                    .iter()
                    .any(|&u| c.is_zero(pu.eval(&c, u)) && c.is_zero(qu.eval(&c, u)));
                if common {
                    assert!(roots.contains(&v));
                }
            }
        }
    }

    #[test]
    fn shared_factor_is_degenerate() {
        let t = tower();
        let c = t.cubic();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let l = BiPoly::affine(c.random_nonzero(&mut rng), c.one(), c.random(&mut rng));
        let p = l.mul(&c, &BiPoly::affine(c.one(), c.random(&mut rng), c.one()));
        let q = l.mul(&c, &BiPoly::affine(c.random(&mut rng), c.one(), c.zero()));
        assert_eq!(
            resultant_eliminate(&c, &p, &q, Var::X),
            Err(PolyError::DegenerateSystem)
        );
    }
}
