use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};

use super::PolyError;

/// A 2x2 or 3x3 matrix of nonnegative exponents, read modulo `modulus`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpMatrix {
    rows: Vec<Vec<BigUint>>,
    modulus: BigUint,
}

impl ExpMatrix {
    pub fn new(rows: Vec<Vec<BigUint>>, modulus: BigUint) -> ExpMatrix {
        let n = rows.len();
        assert!(n == 2 || n == 3, "exponent matrices are 2x2 or 3x3");
        assert!(
            rows.iter().all(|r| r.len() == n),
            "exponent matrix must be square"
        );
        assert!(modulus > BigUint::one());
        ExpMatrix { rows, modulus }
    }

    /// Entries given as exponents of two (`None` for a structural zero).
    pub fn from_powers_of_two(pows: &[&[Option<u32>]], modulus: BigUint) -> ExpMatrix {
        let rows = pows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|p| p.map_or_else(BigUint::zero, |k| BigUint::one() << k))
                    .collect()
            })
            .collect();
        ExpMatrix::new(rows, modulus)
    }

    pub fn identity(n: usize, modulus: BigUint) -> ExpMatrix {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            BigUint::one()
                        } else {
                            BigUint::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        ExpMatrix::new(rows, modulus)
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn rows(&self) -> &[Vec<BigUint>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigUint {
        &self.rows[i][j]
    }

    /// Same entries read modulo a different modulus.
    pub fn with_modulus(&self, modulus: BigUint) -> ExpMatrix {
        ExpMatrix::new(self.rows.clone(), modulus)
    }

    /// Integer determinant (before reduction).
    pub fn det(&self) -> BigInt {
        let m: Vec<Vec<BigInt>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| BigInt::from(x.clone())).collect())
            .collect();
        int_det(&m)
    }

    pub fn det_mod(&self) -> BigUint {
        reduce(&self.det(), &self.modulus)
    }

    pub fn is_invertible(&self) -> bool {
        self.det_mod().gcd(&self.modulus).is_one()
    }

    /// Product modulo the shared modulus.
    pub fn mul_mod(&self, rhs: &ExpMatrix) -> ExpMatrix {
        assert_eq!(self.dim(), rhs.dim());
        assert_eq!(self.modulus, rhs.modulus);
        let n = self.dim();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let s: BigUint = (0..n).map(|l| &self.rows[i][l] * &rhs.rows[l][j]).sum();
                        s % &self.modulus
                    })
                    .collect()
            })
            .collect();
        ExpMatrix::new(rows, self.modulus.clone())
    }

    pub fn is_identity_mod(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let v = &self.rows[i][j] % &self.modulus;
                if i == j {
                    v.is_one()
                } else {
                    v.is_zero()
                }
            })
        })
    }
}

fn reduce(x: &BigInt, m: &BigUint) -> BigUint {
    let m = BigInt::from(m.clone());
    x.mod_floor(&m)
        .to_biguint()
        .expect("mod_floor is nonnegative")
}

fn int_det(m: &[Vec<BigInt>]) -> BigInt {
    match m.len() {
        1 => m[0][0].clone(),
        2 => &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0],
        n => (0..n)
            .map(|j| {
                let term = &m[0][j] * int_det(&minor(m, 0, j));
                if j % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .sum(),
    }
}

fn minor(m: &[Vec<BigInt>], r: usize, c: usize) -> Vec<Vec<BigInt>> {
    m.iter()
        .enumerate()
        .filter(|&(i, _)| i != r)
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|&(j, _)| j != c)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

/// `a^{-1} mod m` when `gcd(a, m) = 1`.
pub fn mod_inverse(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    let a = BigInt::from_biguint(Sign::Plus, a % m);
    let mi = BigInt::from(m.clone());
    let eg = a.extended_gcd(&mi);
    eg.gcd.is_one().then(|| reduce(&eg.x, m))
}

/// Inverse modulo the matrix modulus: adjugate times the inverse determinant.
pub fn exp_matrix_inverse(m: &ExpMatrix) -> Result<ExpMatrix, PolyError> {
    let n = m.dim();
    let det_inv = mod_inverse(&m.det_mod(), m.modulus())
        .ok_or_else(|| PolyError::NotInvertible(m.modulus().to_string()))?;
    let ints: Vec<Vec<BigInt>> = m
        .rows
        .iter()
        .map(|r| r.iter().map(|x| BigInt::from(x.clone())).collect())
        .collect();
    let mut rows = vec![vec![BigUint::zero(); n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        for (j, out) in row.iter_mut().enumerate() {
            // adj[i][j] = (-1)^(i+j) * minor(j, i)
            let cof = if n == 1 {
                BigInt::one()
            } else {
                int_det(&minor(&ints, j, i))
            };
            let cof = if (i + j) % 2 == 0 { cof } else { -cof };
            *out = (reduce(&cof, m.modulus()) * &det_inv) % m.modulus();
        }
    }
    Ok(ExpMatrix::new(rows, m.modulus().clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q_pow_minus_one(w: u32, k: u32) -> BigUint {
        (BigUint::one() << (w * k)) - 1u32
    }

    #[test]
    fn identity_inverts_to_itself() {
        let id = ExpMatrix::identity(2, BigUint::from(255u32));
        assert_eq!(exp_matrix_inverse(&id).unwrap(), id);
    }

    #[test]
    fn nist_f_inverse() {
        let f = ExpMatrix::from_powers_of_two(
            &[&[Some(50), Some(24)], &[Some(7), Some(88)]],
            q_pow_minus_one(48, 3),
        );
        let finv = exp_matrix_inverse(&f).unwrap();
        assert!(f.mul_mod(&finv).is_identity_mod());
        assert!(finv.mul_mod(&f).is_identity_mod());
        assert!(finv.rows().iter().flatten().all(|x| x < f.modulus()));
    }

    #[test]
    fn nist_e_inverse() {
        let e = ExpMatrix::from_powers_of_two(
            &[
                &[Some(24), Some(59), None],
                &[Some(21), None, Some(28)],
                &[None, Some(29), Some(65)],
            ],
            q_pow_minus_one(48, 2),
        );
        let einv = exp_matrix_inverse(&e).unwrap();
        assert!(e.mul_mod(&einv).is_identity_mod());
        assert!(einv.mul_mod(&e).is_identity_mod());
    }

    #[test]
    fn singular_matrix_rejected() {
        // det = 2*2 - 1*4 = 0
        let m = ExpMatrix::from_powers_of_two(
            &[&[Some(1), Some(0)], &[Some(2), Some(1)]],
            BigUint::from(255u32),
        );
        assert!(matches!(
            exp_matrix_inverse(&m),
            Err(PolyError::NotInvertible(_))
        ));
    }

    #[test]
    fn mod_inverse_matches_egcd_oracle() {
        let m = BigUint::from(65535u32);
        for a in [1u32, 2, 4, 128, 32768, 7, 11] {
            let inv = mod_inverse(&BigUint::from(a), &m).unwrap();
            assert!((BigUint::from(a) * inv % &m).is_one());
        }
        assert!(mod_inverse(&BigUint::from(3u32), &m).is_none());
    }
}
