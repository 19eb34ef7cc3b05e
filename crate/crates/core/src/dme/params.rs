use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::DmeError;
use crate::fields::{gen_tower_params, nist_tower_params, Tower, TowerParams};
use crate::polyalg::{exp_matrix_inverse, mod_inverse, ExpMatrix};

/// Positions of the structural zeros of `E`.
const E_ZEROS: [(usize, usize); 3] = [(0, 2), (1, 1), (2, 0)];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// The 48-bit submitted parameter set.
    Nist,
}

/// Tower plus the exponent matrices `E` (mod `q^2-1`) and `F` (mod `q^3-1`).
#[derive(Debug, Clone)]
pub struct SystemParams {
    tower: Tower,
    e: ExpMatrix,
    f: ExpMatrix,
    e_inv: ExpMatrix,
    f_inv: ExpMatrix,
    f_inv_base: ExpMatrix,
    e21_inv: BigUint,
    e23_inv: BigUint,
    e_log: [[Option<u32>; 3]; 3],
    f_log: [[u32; 2]; 2],
}

impl PartialEq for SystemParams {
    fn eq(&self, other: &Self) -> bool {
        self.tower.params() == other.tower.params() && self.e == other.e && self.f == other.f
    }
}

impl Eq for SystemParams {}

fn q_pow_minus_one(w: u32, k: u32) -> BigUint {
    (BigUint::one() << (w * k)) - 1u32
}

fn log2_exact(x: &BigUint) -> Option<u32> {
    (!x.is_zero() && x.count_ones() == 1).then(|| (x.bits() - 1) as u32)
}

impl SystemParams {
    pub fn new(
        tower: TowerParams,
        e_rows: [[BigUint; 3]; 3],
        f_rows: [[BigUint; 2]; 2],
    ) -> Result<SystemParams, DmeError> {
        let tower = Tower::new(tower).map_err(|e| DmeError::InvalidParams(e.to_string()))?;
        let w = tower.w();
        let mut e_log = [[None; 3]; 3];
        for (i, row) in e_rows.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if E_ZEROS.contains(&(i, j)) {
                    if !x.is_zero() {
                        return Err(DmeError::InvalidParams(format!(
                            "E{}{} must be 0",
                            i + 1,
                            j + 1
                        )));
                    }
                } else {
                    e_log[i][j] = Some(log2_exact(x).ok_or_else(|| {
                        DmeError::InvalidParams(format!("E{}{} is not a power of 2", i + 1, j + 1))
                    })?);
                }
            }
        }
        let mut f_log = [[0; 2]; 2];
        for (i, row) in f_rows.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                f_log[i][j] = log2_exact(x).ok_or_else(|| {
                    DmeError::InvalidParams(format!("F{}{} is not a power of 2", i + 1, j + 1))
                })?;
            }
        }
        let q2 = q_pow_minus_one(w, 2);
        let e = ExpMatrix::new(e_rows.iter().map(|r| r.to_vec()).collect(), q2.clone());
        let f = ExpMatrix::new(
            f_rows.iter().map(|r| r.to_vec()).collect(),
            q_pow_minus_one(w, 3),
        );
        let not_inv = |what: &str| DmeError::InvalidParams(format!("{what} is not invertible"));
        let e_inv = exp_matrix_inverse(&e).map_err(|_| not_inv("E mod q^2-1"))?;
        let f_inv = exp_matrix_inverse(&f).map_err(|_| not_inv("F mod q^3-1"))?;
        let f_inv_base = exp_matrix_inverse(&f.with_modulus(q_pow_minus_one(w, 1)))
            .map_err(|_| not_inv("F mod q-1"))?;
        let e21_inv = mod_inverse(e.entry(1, 0), &q2).ok_or_else(|| not_inv("E21"))?;
        let e23_inv = mod_inverse(e.entry(1, 2), &q2).ok_or_else(|| not_inv("E23"))?;
        Ok(SystemParams {
            tower,
            e,
            f,
            e_inv,
            f_inv,
            f_inv_base,
            e21_inv,
            e23_inv,
            e_log,
            f_log,
        })
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn w(&self) -> u32 {
        self.tower.w()
    }

    pub fn e(&self) -> &ExpMatrix {
        &self.e
    }

    pub fn f(&self) -> &ExpMatrix {
        &self.f
    }

    pub fn e_inv(&self) -> &ExpMatrix {
        &self.e_inv
    }

    pub fn f_inv(&self) -> &ExpMatrix {
        &self.f_inv
    }

    /// `F^{-1}` modulo `q - 1`.
    pub fn f_inv_base(&self) -> &ExpMatrix {
        &self.f_inv_base
    }

    pub fn e21_inv(&self) -> &BigUint {
        &self.e21_inv
    }

    pub fn e23_inv(&self) -> &BigUint {
        &self.e23_inv
    }

    /// `log2 E_ij`, `None` at structural zeros.
    pub fn e_log(&self) -> &[[Option<u32>; 3]; 3] {
        &self.e_log
    }

    pub fn f_log(&self) -> &[[u32; 2]; 2] {
        &self.f_log
    }

    /// `q - 1` as a machine word.
    pub fn q_minus_1(&self) -> u64 {
        self.tower.base().order_minus_one()
    }
}

fn pow2(k: u32) -> BigUint {
    BigUint::one() << k
}

/// Parameters for width `w`; with a preset the width is fixed by the preset.
pub fn gen_system_params(w: u32, seed: u64, preset: Option<Preset>) -> SystemParams {
    match preset {
        Some(Preset::Nist) => {
            let z = BigUint::zero;
            SystemParams::new(
                nist_tower_params(),
                [
                    [pow2(24), pow2(59), z()],
                    [pow2(21), z(), pow2(28)],
                    [z(), pow2(29), pow2(65)],
                ],
                [[pow2(50), pow2(24)], [pow2(7), pow2(88)]],
            )
            .expect("preset parameters are valid")
        }
        None => {
            let tower = gen_tower_params(w, seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_e0f0);
            loop {
                let e_rows: [[BigUint; 3]; 3] = std::array::from_fn(|i| {
                    std::array::from_fn(|j| {
                        if E_ZEROS.contains(&(i, j)) {
                            BigUint::zero()
                        } else {
                            pow2(rng.gen_range(0..2 * w))
                        }
                    })
                });
                let f_rows: [[BigUint; 2]; 2] =
                    std::array::from_fn(|_| std::array::from_fn(|_| pow2(rng.gen_range(0..3 * w))));
                if let Ok(p) = SystemParams::new(tower.clone(), e_rows, f_rows) {
                    return p;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;

    #[test]
    fn nist_preset_matrices() {
        let p = gen_system_params(48, 0, Some(Preset::Nist));
        let e: Vec<Vec<Option<u32>>> = p.e_log().iter().map(|r| r.to_vec()).collect();
        assert_eq!(
            e,
            vec![
                vec![Some(24), Some(59), None],
                vec![Some(21), None, Some(28)],
                vec![None, Some(29), Some(65)]
            ]
        );
        assert_eq!(p.f_log(), &[[50, 24], [7, 88]]);
        assert!(p.f().mul_mod(p.f_inv()).is_identity_mod());
        assert!(p.e().mul_mod(p.e_inv()).is_identity_mod());
    }

    #[test]
    fn toy_params_deterministic_and_valid() {
        for w in [4u32, 6, 8, 12] {
            let p = gen_system_params(w, 7, None);
            assert_eq!(p, gen_system_params(w, 7, None));
            assert!(p.e().det_mod().gcd(p.e().modulus()).is_one());
            assert!(p.f().det_mod().gcd(p.f().modulus()).is_one());
            let qm1 = BigUint::from(p.q_minus_1());
            assert!((p.f().det_mod() % &qm1).gcd(&qm1).is_one());
            assert!(p.e().mul_mod(p.e_inv()).is_identity_mod());
            assert!(p.f_inv().mul_mod(p.f()).is_identity_mod());
        }
    }

    #[test]
    fn pattern_violations_rejected() {
        let t = gen_tower_params(8, 1);
        let one = BigUint::one;
        let bad_zero = [
            [one(), one(), one()],
            [one(), BigUint::zero(), one()],
            [BigUint::zero(), one(), one()],
        ];
        let f = [[one(), pow2(3)], [pow2(5), one()]];
        assert!(SystemParams::new(t.clone(), bad_zero, f.clone()).is_err());
        let not_pow2 = [
            [BigUint::from(3u32), one(), BigUint::zero()],
            [one(), BigUint::zero(), one()],
            [BigUint::zero(), one(), one()],
        ];
        assert!(SystemParams::new(t, not_pow2, f).is_err());
    }
}
