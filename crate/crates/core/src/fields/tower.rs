use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gf2x::{self, from_exponents};
use super::{BaseField, CubicExt, Field, FieldError, FqElem, QuadExt};
use crate::polyalg::has_root;

/// The moduli defining the tower. Validity is checked by [`Tower::new`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerParams {
    pub w: u32,
    /// Degree-`w` polynomial over GF(2), including the `x^w` term.
    pub base_modulus: u128,
    /// `(a, b)` for `T^2 + aT + b`.
    pub quad: [FqElem; 2],
    /// `(c, d, e)` for `S^3 + cS^2 + dS + e`.
    pub cubic: [FqElem; 3],
}

const fn fq(exps: &[u32]) -> FqElem {
    FqElem(from_exponents(exps) as u64)
}

/// The 48-bit tower of the submitted DME-(3,2,2^48) parameter set.
pub fn nist_tower_params() -> TowerParams {
    TowerParams {
        w: 48,
        base_modulus: from_exponents(&[48, 28, 27, 1, 0]),
        quad: [
            fq(&[
                43, 38, 36, 34, 29, 26, 25, 24, 23, 22, 21, 20, 19, 13, 9, 8, 4, 3, 1, 0,
            ]),
            fq(&[
                47, 46, 45, 43, 40, 39, 38, 37, 35, 31, 30, 27, 26, 24, 23, 22, 21, 18, 17, 16, 14,
                9, 8, 7, 3, 2, 0,
            ]),
        ],
        cubic: [
            fq(&[
                43, 42, 41, 40, 38, 37, 36, 34, 33, 29, 26, 24, 22, 20, 19, 17, 15, 14, 13, 12, 11,
                8, 5, 3, 2, 1,
            ]),
            fq(&[
                46, 45, 44, 41, 38, 37, 33, 32, 31, 30, 25, 21, 20, 17, 16, 15, 14, 12, 10, 9, 8,
                7, 4, 3, 2, 1, 0,
            ]),
            fq(&[
                47, 46, 42, 39, 38, 35, 32, 26, 25, 24, 23, 20, 19, 17, 15, 14, 13, 12, 11, 9, 8,
                6, 5, 2, 1,
            ]),
        ],
    }
}

/// Samples a tower of width `w` deterministically from `seed`.
pub fn gen_tower_params(w: u32, seed: u64) -> TowerParams {
    assert!((3..=64).contains(&w), "width {w} outside 3..=64");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let low_mask: u128 = (1u128 << w) - 1;
    let base_modulus = loop {
        let m = (1u128 << w) | (rng.gen::<u128>() & low_mask) | 1;
        if gf2x::is_irreducible(m) {
            break m;
        }
    };
    let base = BaseField::new(w, base_modulus);
    let quad = loop {
        let a = base.random(&mut rng);
        let b = base.random(&mut rng);
        if !has_root(&base, &[b, a, FqElem::ONE]) {
            break [a, b];
        }
    };
    let cubic = loop {
        let c = base.random(&mut rng);
        let d = base.random(&mut rng);
        let e = base.random(&mut rng);
        if !has_root(&base, &[e, d, c, FqElem::ONE]) {
            break [c, d, e];
        }
    };
    TowerParams {
        w,
        base_modulus,
        quad,
        cubic,
    }
}

/// A validated tower together with its base-field context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tower {
    params: TowerParams,
    base: BaseField,
}

impl Tower {
    pub fn new(params: TowerParams) -> Result<Tower, FieldError> {
        let w = params.w;
        if !(3..=64).contains(&w) || gf2x::degree(params.base_modulus) != Some(w) {
            return Err(FieldError::ReducibleModulus(
                "base modulus has wrong degree",
            ));
        }
        if !gf2x::is_irreducible(params.base_modulus) {
            return Err(FieldError::ReducibleModulus("base modulus"));
        }
        let fits = |x: FqElem| w == 64 || x.0 >> w == 0;
        if !params.quad.iter().chain(&params.cubic).all(|&x| fits(x)) {
            return Err(FieldError::ReducibleModulus(
                "coefficient wider than w bits",
            ));
        }
        let base = BaseField::new(w, params.base_modulus);
        let [a, b] = params.quad;
        if has_root(&base, &[b, a, FqElem::ONE]) {
            return Err(FieldError::ReducibleModulus("quadratic modulus"));
        }
        let [c, d, e] = params.cubic;
        if has_root(&base, &[e, d, c, FqElem::ONE]) {
            return Err(FieldError::ReducibleModulus("cubic modulus"));
        }
        Ok(Tower { params, base })
    }

    pub fn params(&self) -> &TowerParams {
        &self.params
    }

    pub fn w(&self) -> u32 {
        self.params.w
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn quad(&self) -> QuadExt<'_> {
        QuadExt {
            base: &self.base,
            a: self.params.quad[0],
            b: self.params.quad[1],
        }
    }

    pub fn cubic(&self) -> CubicExt<'_> {
        CubicExt {
            base: &self.base,
            c: self.params.cubic[0],
            d: self.params.cubic[1],
            e: self.params.cubic[2],
        }
    }
}
