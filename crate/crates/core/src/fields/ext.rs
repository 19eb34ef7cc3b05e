use std::fmt;
use std::ops::{Add, AddAssign, Sub, SubAssign};

use rand::Rng;

use super::{BaseField, Field, FieldError, FqElem};
use crate::linalg::Mat;

/// An element `c0 + c1*T` of `F_{q^2}`.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ext2Elem {
    pub c0: FqElem,
    pub c1: FqElem,
}

/// An element `c0 + c1*S + c2*S^2` of `F_{q^3}`.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ext3Elem {
    pub c0: FqElem,
    pub c1: FqElem,
    pub c2: FqElem,
}

impl Ext2Elem {
    pub const fn new(c0: FqElem, c1: FqElem) -> Self {
        Ext2Elem { c0, c1 }
    }

    pub fn from_coords(c: [FqElem; 2]) -> Self {
        Ext2Elem::new(c[0], c[1])
    }

    pub fn coords(self) -> [FqElem; 2] {
        [self.c0, self.c1]
    }

    pub fn is_zero(self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }

    pub fn to_hex(self, w: u32) -> String {
        format!("{},{}", self.c0.to_hex(w), self.c1.to_hex(w))
    }
}

impl Ext3Elem {
    pub const fn new(c0: FqElem, c1: FqElem, c2: FqElem) -> Self {
        Ext3Elem { c0, c1, c2 }
    }

    pub fn from_coords(c: [FqElem; 3]) -> Self {
        Ext3Elem::new(c[0], c[1], c[2])
    }

    pub fn coords(self) -> [FqElem; 3] {
        [self.c0, self.c1, self.c2]
    }

    pub fn is_zero(self) -> bool {
        self.c0.is_zero() && self.c1.is_zero() && self.c2.is_zero()
    }

    /// True when the element lies in the base field `F_q`.
    pub fn is_base(self) -> bool {
        self.c1.is_zero() && self.c2.is_zero()
    }

    pub fn to_hex(self, w: u32) -> String {
        format!(
            "{},{},{}",
            self.c0.to_hex(w),
            self.c1.to_hex(w),
            self.c2.to_hex(w)
        )
    }
}

impl fmt::Debug for Ext2Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}T)", self.c0, self.c1)
    }
}

impl fmt::Debug for Ext3Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}S + {:?}S^2)", self.c0, self.c1, self.c2)
    }
}

macro_rules! impl_xor_ops {
    ($ty:ident { $($f:ident),+ }) => {
        impl Add for $ty {
            type Output = $ty;
            #[inline]
            fn add(self, rhs: $ty) -> $ty {
                $ty { $($f: self.$f + rhs.$f),+ }
            }
        }
        impl AddAssign for $ty {
            #[inline]
            fn add_assign(&mut self, rhs: $ty) {
                $(self.$f += rhs.$f;)+
            }
        }
        impl Sub for $ty {
            type Output = $ty;
            #[inline]
            fn sub(self, rhs: $ty) -> $ty {
                self + rhs
            }
        }
        impl SubAssign for $ty {
            #[inline]
            fn sub_assign(&mut self, rhs: $ty) {
                *self += rhs;
            }
        }
    };
}

impl_xor_ops!(Ext2Elem { c0, c1 });
impl_xor_ops!(Ext3Elem { c0, c1, c2 });

/// `F_q[T]/(T^2 + aT + b)`.
#[derive(Clone, Copy, Debug)]
pub struct QuadExt<'a> {
    pub(super) base: &'a BaseField,
    pub(super) a: FqElem,
    pub(super) b: FqElem,
}

/// `F_q[S]/(S^3 + cS^2 + dS + e)`.
#[derive(Clone, Copy, Debug)]
pub struct CubicExt<'a> {
    pub(super) base: &'a BaseField,
    pub(super) c: FqElem,
    pub(super) d: FqElem,
    pub(super) e: FqElem,
}

impl<'a> QuadExt<'a> {
    pub fn base(&self) -> &'a BaseField {
        self.base
    }

    /// The generator `T`.
    pub fn gen(&self) -> Ext2Elem {
        Ext2Elem::new(FqElem::ZERO, FqElem::ONE)
    }
}

impl<'a> CubicExt<'a> {
    pub fn base(&self) -> &'a BaseField {
        self.base
    }

    pub fn gen(&self) -> Ext3Elem {
        Ext3Elem::new(FqElem::ZERO, FqElem::ONE, FqElem::ZERO)
    }

    /// Reduces `p0 + p1 S + ... + p4 S^4` using `S^3 = cS^2 + dS + e`.
    #[inline]
    fn reduce(&self, mut p: [FqElem; 5]) -> Ext3Elem {
        let k = self.base;
        for i in (3..5).rev() {
            let t = p[i];
            if !t.is_zero() {
                p[i - 1] += k.mul(self.c, t);
                p[i - 2] += k.mul(self.d, t);
                p[i - 3] += k.mul(self.e, t);
            }
        }
        Ext3Elem::new(p[0], p[1], p[2])
    }
}

impl Field for QuadExt<'_> {
    type Elem = Ext2Elem;

    fn degree(&self) -> u32 {
        2 * self.base.width()
    }

    fn one(&self) -> Ext2Elem {
        Ext2Elem::new(FqElem::ONE, FqElem::ZERO)
    }

    #[inline]
    fn mul(&self, x: Ext2Elem, y: Ext2Elem) -> Ext2Elem {
        let k = self.base;
        let lo = k.mul(x.c0, y.c0);
        let hi = k.mul(x.c1, y.c1);
        let mid = k.mul(x.c0 + x.c1, y.c0 + y.c1) + lo + hi;
        // T^2 = aT + b
        Ext2Elem::new(lo + k.mul(self.b, hi), mid + k.mul(self.a, hi))
    }

    #[inline]
    fn square(&self, x: Ext2Elem) -> Ext2Elem {
        let k = self.base;
        let lo = k.square(x.c0);
        let hi = k.square(x.c1);
        Ext2Elem::new(lo + k.mul(self.b, hi), k.mul(self.a, hi))
    }

    fn inv(&self, x: Ext2Elem) -> Result<Ext2Elem, FieldError> {
        if x.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        let k = self.base;
        // The conjugate of T is T + a; x * conj(x) = x0^2 + a x0 x1 + b x1^2.
        let conj = Ext2Elem::new(x.c0 + k.mul(self.a, x.c1), x.c1);
        let norm =
            k.square(x.c0) + k.mul(self.a, k.mul(x.c0, x.c1)) + k.mul(self.b, k.square(x.c1));
        let ninv = k.inv(norm)?;
        Ok(Ext2Elem::new(k.mul(conj.c0, ninv), k.mul(conj.c1, ninv)))
    }

    fn embed(&self, x: FqElem) -> Ext2Elem {
        Ext2Elem::new(x, FqElem::ZERO)
    }

    fn f2_basis(&self, i: u32) -> Ext2Elem {
        let w = self.base.width();
        let mut c = [FqElem::ZERO; 2];
        c[(i / w) as usize] = FqElem(1 << (i % w));
        Ext2Elem::from_coords(c)
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Ext2Elem {
        Ext2Elem::new(self.base.random(rng), self.base.random(rng))
    }
}

impl Field for CubicExt<'_> {
    type Elem = Ext3Elem;

    fn degree(&self) -> u32 {
        3 * self.base.width()
    }

    fn one(&self) -> Ext3Elem {
        Ext3Elem::new(FqElem::ONE, FqElem::ZERO, FqElem::ZERO)
    }

    #[inline]
    fn mul(&self, x: Ext3Elem, y: Ext3Elem) -> Ext3Elem {
        let k = self.base;
        let (a, b) = (x.coords(), y.coords());
        let mut p = [FqElem::ZERO; 5];
        for i in 0..3 {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..3 {
                p[i + j] += k.mul(a[i], b[j]);
            }
        }
        self.reduce(p)
    }

    #[inline]
    fn square(&self, x: Ext3Elem) -> Ext3Elem {
        let k = self.base;
        let z = FqElem::ZERO;
        self.reduce([k.square(x.c0), z, k.square(x.c1), z, k.square(x.c2)])
    }

    fn inv(&self, x: Ext3Elem) -> Result<Ext3Elem, FieldError> {
        if x.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        let g = mul_matrix(self, x, 3);
        let ginv = g.inverse(self.base)?;
        Ok(Ext3Elem::from_coords([
            ginv[(0, 0)],
            ginv[(1, 0)],
            ginv[(2, 0)],
        ]))
    }

    fn embed(&self, x: FqElem) -> Ext3Elem {
        Ext3Elem::new(x, FqElem::ZERO, FqElem::ZERO)
    }

    fn f2_basis(&self, i: u32) -> Ext3Elem {
        let w = self.base.width();
        let mut c = [FqElem::ZERO; 3];
        c[(i / w) as usize] = FqElem(1 << (i % w));
        Ext3Elem::from_coords(c)
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Ext3Elem {
        Ext3Elem::new(
            self.base.random(rng),
            self.base.random(rng),
            self.base.random(rng),
        )
    }
}

trait Coords: Copy {
    fn coord_vec(self) -> Vec<FqElem>;
    fn basis(i: usize) -> Self;
}

impl Coords for Ext2Elem {
    fn coord_vec(self) -> Vec<FqElem> {
        self.coords().to_vec()
    }
    fn basis(i: usize) -> Self {
        let mut c = [FqElem::ZERO; 2];
        c[i] = FqElem::ONE;
        Ext2Elem::from_coords(c)
    }
}

impl Coords for Ext3Elem {
    fn coord_vec(self) -> Vec<FqElem> {
        self.coords().to_vec()
    }
    fn basis(i: usize) -> Self {
        let mut c = [FqElem::ZERO; 3];
        c[i] = FqElem::ONE;
        Ext3Elem::from_coords(c)
    }
}

/// Column `j` is the coordinate vector of `x` times the `j`-th basis element.
fn mul_matrix<K>(field: &K, x: K::Elem, n: usize) -> Mat
where
    K: Field,
    K::Elem: Coords,
{
    let mut m = Mat::zero(n);
    for j in 0..n {
        let col = field.mul(x, K::Elem::basis(j)).coord_vec();
        for (i, v) in col.into_iter().enumerate() {
            m[(i, j)] = v;
        }
    }
    m
}

/// The 2x2 matrix of multiplication by `alpha` in the basis `(1, T)`.
pub fn mul_matrix_h(quad: &QuadExt<'_>, alpha: Ext2Elem) -> Result<Mat, FieldError> {
    if alpha.is_zero() {
        return Err(FieldError::ZeroInverse);
    }
    Ok(mul_matrix(quad, alpha, 2))
}

/// The 3x3 matrix of multiplication by `lambda` in the basis `(1, S, S^2)`.
pub fn mul_matrix_g(cubic: &CubicExt<'_>, lambda: Ext3Elem) -> Result<Mat, FieldError> {
    if lambda.is_zero() {
        return Err(FieldError::ZeroInverse);
    }
    Ok(mul_matrix(cubic, lambda, 3))
}

/// `(x1..x6)` as three `F_{q^2}` blocks `(x1,x2), (x3,x4), (x5,x6)`.
pub fn split_ext2(v: &[FqElem; 6]) -> [Ext2Elem; 3] {
    [
        Ext2Elem::new(v[0], v[1]),
        Ext2Elem::new(v[2], v[3]),
        Ext2Elem::new(v[4], v[5]),
    ]
}

pub fn join_ext2(b: &[Ext2Elem; 3]) -> [FqElem; 6] {
    [b[0].c0, b[0].c1, b[1].c0, b[1].c1, b[2].c0, b[2].c1]
}

/// `(x1..x6)` as two `F_{q^3}` blocks `(x1,x2,x3), (x4,x5,x6)`.
pub fn split_ext3(v: &[FqElem; 6]) -> [Ext3Elem; 2] {
    [
        Ext3Elem::new(v[0], v[1], v[2]),
        Ext3Elem::new(v[3], v[4], v[5]),
    ]
}

pub fn join_ext3(b: &[Ext3Elem; 2]) -> [FqElem; 6] {
    [b[0].c0, b[0].c1, b[0].c2, b[1].c0, b[1].c1, b[1].c2]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{gen_tower_params, Tower};
    use num_bigint::BigUint;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tower() -> Tower {
        Tower::new(gen_tower_params(8, 1)).unwrap()
    }

    #[test]
    fn identities_and_inverses() {
        let t = tower();
        let (q2, q3) = (t.quad(), t.cubic());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(q2.inv(q2.one()), Ok(q2.one()));
        assert_eq!(q3.inv(q3.one()), Ok(q3.one()));
        assert_eq!(q2.inv(q2.zero()), Err(FieldError::ZeroInverse));
        assert_eq!(q3.inv(q3.zero()), Err(FieldError::ZeroInverse));
        for _ in 0..100 {
            let u = q2.random_nonzero(&mut rng);
            assert_eq!(q2.mul(u, q2.one()), u);
            assert_eq!(q2.inv(q2.inv(u).unwrap()), Ok(u));
            assert_eq!(q2.mul(u, q2.inv(u).unwrap()), q2.one());
            let v = q3.random_nonzero(&mut rng);
            assert_eq!(q3.mul(v, q3.inv(v).unwrap()), q3.one());
        }
    }

    #[test]
    fn generators_satisfy_their_moduli() {
        let t = tower();
        let (q2, q3) = (t.quad(), t.cubic());
        let [a, b] = t.params().quad;
        let tt = q2.gen();
        assert_eq!(
            q2.square(tt) + q2.mul(q2.embed(a), tt) + q2.embed(b),
            q2.zero()
        );
        let [c, d, e] = t.params().cubic;
        let s = q3.gen();
        let s2 = q3.square(s);
        let lhs = q3.mul(s2, s) + q3.mul(q3.embed(c), s2) + q3.mul(q3.embed(d), s) + q3.embed(e);
        assert_eq!(lhs, q3.zero());
    }

    #[test]
    fn lagrange_and_repeated_squaring() {
        let t = tower();
        let (q2, q3) = (t.quad(), t.cubic());
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let u = q2.random_nonzero(&mut rng);
            assert_eq!(q2.pow(u, &q2.group_order()), Ok(q2.one()));
            let v = q3.random(&mut rng);
            for k in [0u32, 1, 5, 24, 30] {
                let by_pow = q3.pow(v, &(BigUint::from(1u32) << k));
                let by_sq = (0..k).fold(v, |x, _| q3.square(x));
                assert_eq!(by_pow, Ok(by_sq));
            }
        }
        assert_eq!(
            q2.pow(q2.zero(), &BigUint::from(0u32)),
            Err(FieldError::UndefinedPower)
        );
        assert_eq!(q2.pow(q2.zero(), &BigUint::from(3u32)), Ok(q2.zero()));
    }

    #[test]
    fn multiplication_matrices() {
        let t = tower();
        let (q2, q3) = (t.quad(), t.cubic());
        let k = t.base();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(mul_matrix_h(&q2, q2.one()).unwrap(), Mat::identity(2));
        assert_eq!(mul_matrix_g(&q3, q3.one()).unwrap(), Mat::identity(3));
        assert_eq!(mul_matrix_h(&q2, q2.zero()), Err(FieldError::ZeroInverse));
        for _ in 0..30 {
            let al = q2.random_nonzero(&mut rng);
            let v = q2.random(&mut rng);
            let h = mul_matrix_h(&q2, al).unwrap();
            let hv = h.mul_vec(k, &v.coords());
            assert_eq!(Ext2Elem::from_coords([hv[0], hv[1]]), q2.mul(al, v));
            let hinv = mul_matrix_h(&q2, q2.inv(al).unwrap()).unwrap();
            assert_eq!(h.mul(k, &hinv), Mat::identity(2));
            let be = q2.random_nonzero(&mut rng);
            assert_eq!(
                mul_matrix_h(&q2, q2.mul(al, be)).unwrap(),
                h.mul(k, &mul_matrix_h(&q2, be).unwrap())
            );

            let la = q3.random_nonzero(&mut rng);
            let x = q3.random(&mut rng);
            let g = mul_matrix_g(&q3, la).unwrap();
            let gx = g.mul_vec(k, &x.coords());
            assert_eq!(Ext3Elem::from_coords([gx[0], gx[1], gx[2]]), q3.mul(la, x));
            let ginv = mul_matrix_g(&q3, q3.inv(la).unwrap()).unwrap();
            assert_eq!(g.mul(k, &ginv), Mat::identity(3));
        }
    }

    #[test]
    fn reblocking() {
        let (a, b) = (FqElem(0x12), FqElem(0x34));
        let e1 = [
            FqElem::ONE,
            FqElem::ZERO,
            FqElem::ZERO,
            FqElem::ZERO,
            FqElem::ZERO,
            FqElem::ZERO,
        ];
        assert_eq!(
            split_ext2(&e1),
            [
                Ext2Elem::new(FqElem::ONE, FqElem::ZERO),
                Ext2Elem::default(),
                Ext2Elem::default()
            ]
        );
        let tail = [FqElem::ZERO, FqElem::ZERO, FqElem::ZERO, FqElem::ZERO, a, b];
        assert_eq!(split_ext2(&tail)[2], Ext2Elem::new(a, b));
        let v: [FqElem; 6] = std::array::from_fn(|i| FqElem(i as u64 * 37 + 5));
        assert_eq!(join_ext2(&split_ext2(&v)), v);
        assert_eq!(join_ext3(&split_ext3(&v)), v);
        assert_eq!(split_ext3(&v)[1], Ext3Elem::new(v[3], v[4], v[5]));
    }
}
