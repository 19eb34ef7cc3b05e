//! Arithmetic in the tower `F_q = GF(2^w)`, `F_{q^2} = F_q[T]/(T^2+aT+b)` and
//! `F_{q^3} = F_q[S]/(S^3+cS^2+dS+e)`.
//!
//! Elements are plain `Copy` values; multiplication needs the field context,
//! which is passed explicitly. Addition is XOR and needs no context.

// Addition is XOR in characteristic 2.
#![allow(clippy::suspicious_arithmetic_impl, clippy::suspicious_op_assign_impl)]

mod base;
mod ext;
pub mod gf2x;
mod tower;

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Sub, SubAssign};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

pub use base::BaseField;
pub use ext::{
    join_ext2, join_ext3, mul_matrix_g, mul_matrix_h, split_ext2, split_ext3, CubicExt, Ext2Elem,
    Ext3Elem, QuadExt,
};
pub use tower::{gen_tower_params, nist_tower_params, Tower, TowerParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("0^0 is undefined")]
    UndefinedPower,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("invalid tower: {0} is not irreducible")]
    ReducibleModulus(&'static str),
}

/// An element of `F_q`: bit `i` is the coefficient of `x^i`.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FqElem(pub u64);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Lowercase hex, most significant nibble first, `ceil(w/4)` digits.
    pub fn to_hex(self, w: u32) -> String {
        format!("{:0width$x}", self.0, width = w.div_ceil(4) as usize)
    }

    pub fn from_hex(s: &str, w: u32) -> Option<FqElem> {
        if s.is_empty() || s.len() > w.div_ceil(4) as usize {
            return None;
        }
        let v = u64::from_str_radix(s, 16).ok()?;
        (w == 64 || v >> w == 0).then_some(FqElem(v))
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{:x}", self.0)
    }
}

impl Add for FqElem {
    type Output = FqElem;
    #[inline]
    fn add(self, rhs: FqElem) -> FqElem {
        FqElem(self.0 ^ rhs.0)
    }
}

impl AddAssign for FqElem {
    #[inline]
    fn add_assign(&mut self, rhs: FqElem) {
        self.0 ^= rhs.0;
    }
}

impl Sub for FqElem {
    type Output = FqElem;
    #[inline]
    fn sub(self, rhs: FqElem) -> FqElem {
        self + rhs
    }
}

impl SubAssign for FqElem {
    #[inline]
    fn sub_assign(&mut self, rhs: FqElem) {
        *self += rhs;
    }
}

/// A finite field of characteristic 2 given by a runtime context.
pub trait Field {
    type Elem: Copy
        + Default
        + Eq
        + Ord
        + Hash
        + fmt::Debug
        + Add<Output = Self::Elem>
        + AddAssign
        + Sub<Output = Self::Elem>
        + SubAssign;

    /// Degree of the field over GF(2); the field has `2^degree()` elements.
    fn degree(&self) -> u32;

    fn one(&self) -> Self::Elem;

    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;

    fn inv(&self, a: Self::Elem) -> Result<Self::Elem, FieldError>;

    /// Embeds a base-field element.
    fn embed(&self, x: FqElem) -> Self::Elem;

    /// The `i`-th element of a fixed GF(2)-basis, `0 <= i < degree()`.
    fn f2_basis(&self, i: u32) -> Self::Elem;

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn zero(&self) -> Self::Elem {
        Self::Elem::default()
    }

    fn is_zero(&self, a: Self::Elem) -> bool {
        a == Self::Elem::default()
    }

    fn square(&self, a: Self::Elem) -> Self::Elem {
        self.mul(a, a)
    }

    fn div(&self, a: Self::Elem, b: Self::Elem) -> Result<Self::Elem, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `2^degree() - 1`, the order of the multiplicative group.
    fn group_order(&self) -> BigUint {
        (BigUint::one() << self.degree()) - 1u32
    }

    fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        loop {
            let x = self.random(rng);
            if !self.is_zero(x) {
                return x;
            }
        }
    }

    /// `a^e` for a machine-word exponent, with `0^0 = 1`.
    fn pow_u64(&self, a: Self::Elem, mut e: u64) -> Self::Elem {
        let mut acc = self.one();
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.square(base);
            }
        }
        acc
    }

    /// `a^e` for an arbitrary-precision exponent. For nonzero `a` the exponent
    /// is reduced modulo the group order first.
    fn pow(&self, a: Self::Elem, e: &BigUint) -> Result<Self::Elem, FieldError> {
        if self.is_zero(a) {
            return if e.is_zero() {
                Err(FieldError::UndefinedPower)
            } else {
                Ok(self.zero())
            };
        }
        let e = e % self.group_order();
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.square(acc);
            if e.bit(i) {
                acc = self.mul(acc, a);
            }
        }
        Ok(acc)
    }

    /// `a^(2^k)`.
    fn frobenius(&self, a: Self::Elem, k: u32) -> Self::Elem {
        let k = k % self.degree();
        (0..k).fold(a, |x, _| self.square(x))
    }
}
