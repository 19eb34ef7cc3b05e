//! Equivalent private keys: transforms preserving the public key, and the
//! reduction of any key to normal form.

use thiserror::Error;

use crate::dme::{derive_public_key, PrivateKey, SystemParams};
use crate::fields::{mul_matrix_g, mul_matrix_h, Ext2Elem, Ext3Elem, Field, FieldError, FqElem};
use crate::linalg::Mat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MalleabilityError {
    #[error("alpha^E21 * gamma^E23 is not in F_q^*")]
    ConstraintViolated,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Which form the second column `a + bT` of `L13` takes after normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `(a+bT)^E23 = 1 + cT`
    UnitC,
    /// `(a+bT)^E23 = T`
    PureT,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::UnitC => "unit_c",
            Branch::PureT => "pure_T",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NormalizedKeyTag {
    pub branch: Branch,
    /// Meaningful for [`Branch::UnitC`] only.
    pub c: FqElem,
}

pub fn ext2_col(m: &Mat, j: usize) -> Ext2Elem {
    Ext2Elem::new(m[(0, j)], m[(1, j)])
}

pub fn ext3_col(m: &Mat, j: usize) -> Ext3Elem {
    Ext3Elem::new(m[(0, j)], m[(1, j)], m[(2, j)])
}

/// `L1j <- H(.) L1j` with compensating `L21`, `L22`; requires
/// `delta = alpha^E21 gamma^E23` in `F_q^*`.
pub fn transform_abc(
    sk: &PrivateKey,
    params: &SystemParams,
    alpha: Ext2Elem,
    beta: Ext2Elem,
    gamma: Ext2Elem,
) -> Result<PrivateKey, MalleabilityError> {
    let t = params.tower();
    let (k, q2) = (t.base(), t.quad());
    let e = params.e();
    let pw = |x: Ext2Elem, i: usize, j: usize| q2.pow(x, e.entry(i, j));
    let delta = q2.mul(pw(alpha, 1, 0)?, pw(gamma, 1, 2)?);
    if delta.c1 != FqElem::ZERO || delta.c0.is_zero() {
        return Err(MalleabilityError::ConstraintViolated);
    }
    let delta_inv = Mat::scalar(1, k.inv(delta.c0)?);
    let h1 = mul_matrix_h(&q2, q2.inv(q2.mul(pw(alpha, 0, 0)?, pw(beta, 0, 1)?))?)?;
    let h3 = mul_matrix_h(&q2, q2.inv(q2.mul(pw(beta, 2, 1)?, pw(gamma, 2, 2)?))?)?;
    Ok(PrivateKey {
        l11: mul_matrix_h(&q2, alpha)?.mul(k, &sk.l11),
        l12: mul_matrix_h(&q2, beta)?.mul(k, &sk.l12),
        l13: mul_matrix_h(&q2, gamma)?.mul(k, &sk.l13),
        l21: sk.l21.mul(k, &Mat::block_diag(&[&h1, &delta_inv])),
        l22: sk.l22.mul(k, &Mat::block_diag(&[&delta_inv, &h3])),
        l31: sk.l31.clone(),
        l32: sk.l32.clone(),
    })
}

/// `L2j <- G(.) L2j` with compensating `L31`, `L32`.
pub fn transform_lm(
    sk: &PrivateKey,
    params: &SystemParams,
    lambda: Ext3Elem,
    mu: Ext3Elem,
) -> Result<PrivateKey, MalleabilityError> {
    let t = params.tower();
    let (k, q3) = (t.base(), t.cubic());
    let f = params.f();
    let scale = |i: usize| -> Result<Ext3Elem, FieldError> {
        Ok(q3.mul(q3.pow(lambda, f.entry(i, 0))?, q3.pow(mu, f.entry(i, 1))?))
    };
    let g_top = mul_matrix_g(&q3, q3.inv(scale(0)?)?)?;
    let g_bottom = mul_matrix_g(&q3, q3.inv(scale(1)?)?)?;
    Ok(PrivateKey {
        l21: mul_matrix_g(&q3, lambda)?.mul(k, &sk.l21),
        l22: mul_matrix_g(&q3, mu)?.mul(k, &sk.l22),
        l31: sk.l31.mul(k, &g_top),
        l32: sk.l32.mul(k, &g_bottom),
        ..sk.clone()
    })
}

/// An equivalent key with `L11`, `L12` second columns `(1,0)`, `L13` second
/// column `a+bT` with `(a+bT)^E23` in `{1+cT, T}`, `L21` third column and
/// `L22` first column `(1,0,0)`.
pub fn normalize_key(sk: &PrivateKey, params: &SystemParams) -> (PrivateKey, NormalizedKeyTag) {
    let t = params.tower();
    let (k, q2, q3) = (t.base(), t.quad(), t.cubic());
    let valid = "key blocks are invertible";
    let a_inv = ext2_col(&sk.l11, 1);
    let alpha = q2.inv(a_inv).expect(valid);
    let beta = q2.inv(ext2_col(&sk.l12, 1)).expect(valid);
    let tau = ext2_col(&sk.l13, 1);
    // alpha^{-E21}
    let a_neg = q2.pow(a_inv, params.e().entry(1, 0)).expect(valid);
    let de = q2.mul(a_neg, q2.pow(tau, params.e().entry(1, 2)).expect(valid));
    let (scale, tag) = if !de.c0.is_zero() {
        let c = k.div(de.c1, de.c0).expect("nonzero");
        (
            de.c0,
            NormalizedKeyTag {
                branch: Branch::UnitC,
                c,
            },
        )
    } else {
        (
            de.c1,
            NormalizedKeyTag {
                branch: Branch::PureT,
                c: FqElem::ZERO,
            },
        )
    };
    let target = q2.mul(q2.embed(k.inv(scale).expect(valid)), a_neg);
    let gamma = q2.pow(target, params.e23_inv()).expect(valid);
    let sk1 =
        transform_abc(sk, params, alpha, beta, gamma).expect("constraint holds by construction");
    let lambda = q3.inv(ext3_col(&sk1.l21, 2)).expect(valid);
    let mu = q3.inv(ext3_col(&sk1.l22, 0)).expect(valid);
    let sk2 = transform_lm(&sk1, params, lambda, mu).expect(valid);
    (sk2, tag)
}

pub fn same_public_key(sk1: &PrivateKey, sk2: &PrivateKey, params: &SystemParams) -> bool {
    derive_public_key(sk1, params) == derive_public_key(sk2, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dme::{gen_system_params, keygen};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn assert_normal_shape(
        sk: &PrivateKey,
        tag: NormalizedKeyTag,
        params: &SystemParams,
    ) {
        let (z, o) = (FqElem::ZERO, FqElem::ONE);
        assert_eq!(sk.l11.col(1), vec![o, z]);
        assert_eq!(sk.l12.col(1), vec![o, z]);
        assert_eq!(sk.l21.col(2), vec![o, z, z]);
        assert_eq!(sk.l22.col(0), vec![o, z, z]);
        let q2 = params.tower().quad();
        let ab = q2
            .pow(ext2_col(&sk.l13, 1), params.e().entry(1, 2))
            .unwrap();
        match tag.branch {
            Branch::UnitC => assert_eq!(ab, Ext2Elem::new(o, tag.c)),
            Branch::PureT => assert_eq!(ab, Ext2Elem::new(z, o)),
        }
    }

    /// A key whose normalization lands in the `T` branch.
    fn pure_t_key(params: &SystemParams, seed: u64) -> PrivateKey {
        let q2 = params.tower().quad();
        let k = params.tower().base();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut sk = keygen(params, seed);
        let a_inv = ext2_col(&sk.l11, 1);
        let s = k.random_nonzero(&mut rng);
        let want = q2.mul(
            q2.pow(q2.inv(a_inv).unwrap(), params.e().entry(1, 0))
                .unwrap(),
            Ext2Elem::new(FqElem::ZERO, s),
        );
        let tau = q2.pow(want, params.e23_inv()).unwrap();
        loop {
            let c1 = q2.random(&mut rng);
            let m = Mat::from_cols(&[c1.coords(), tau.coords()]);
            if m.is_invertible(k) {
                sk.l13 = m;
                return sk;
            }
        }
    }

    #[test]
    fn identity_transforms() {
        let p = gen_system_params(8, 1, None);
        let sk = keygen(&p, 1);
        let (q2, q3) = (p.tower().quad(), p.tower().cubic());
        assert_eq!(
            transform_abc(&sk, &p, q2.one(), q2.one(), q2.one()).unwrap(),
            sk
        );
        assert_eq!(transform_lm(&sk, &p, q3.one(), q3.one()).unwrap(), sk);
    }

    #[test]
    fn transforms_preserve_public_key() {
        let p = gen_system_params(8, 2, None);
        let (k, q2, q3) = (p.tower().base(), p.tower().quad(), p.tower().cubic());
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for trial in 0..100 {
            let sk = keygen(&p, trial);
            let alpha = q2.random_nonzero(&mut rng);
            let beta = q2.random_nonzero(&mut rng);
            let d = q2.embed(k.random_nonzero(&mut rng));
            // gamma^E23 = d alpha^{-E21}
            let target = q2.mul(
                d,
                q2.inv(q2.pow(alpha, p.e().entry(1, 0)).unwrap()).unwrap(),
            );
            let gamma = q2.pow(target, p.e23_inv()).unwrap();
            let sk1 = transform_abc(&sk, &p, alpha, beta, gamma).unwrap();
            assert!(same_public_key(&sk, &sk1, &p));
            let sk2 = transform_lm(
                &sk,
                &p,
                q3.random_nonzero(&mut rng),
                q3.random_nonzero(&mut rng),
            )
            .unwrap();
            assert!(same_public_key(&sk, &sk2, &p));
        }
    }

    #[test]
    fn inadmissible_gamma_rejected() {
        let p = gen_system_params(8, 2, None);
        let sk = keygen(&p, 0);
        let q2 = p.tower().quad();
        let one = q2.one();
        let gamma = q2.pow(q2.gen(), p.e23_inv()).unwrap();
        assert_eq!(
            transform_abc(&sk, &p, one, one, gamma),
            Err(MalleabilityError::ConstraintViolated)
        );
    }

    #[test]
    fn lm_transforms_compose() {
        let p = gen_system_params(8, 3, None);
        let q3 = p.tower().cubic();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let sk = keygen(&p, 3);
        let (l1, m1, l2, m2) = (
            q3.random_nonzero(&mut rng),
            q3.random_nonzero(&mut rng),
            q3.random_nonzero(&mut rng),
            q3.random_nonzero(&mut rng),
        );
        let two_step = transform_lm(&transform_lm(&sk, &p, l1, m1).unwrap(), &p, l2, m2).unwrap();
        let one_step = transform_lm(&sk, &p, q3.mul(l1, l2), q3.mul(m1, m2)).unwrap();
        assert_eq!(two_step, one_step);
    }

    #[test]
    fn normalization_shape_and_equivalence() {
        for seed in 0..40 {
            let p = gen_system_params(8, seed % 4, None);
            let sk = keygen(&p, seed);
            let (n, tag) = normalize_key(&sk, &p);
            assert_eq!(tag.branch, Branch::UnitC);
            assert_normal_shape(&n, tag, &p);
            assert!(same_public_key(&sk, &n, &p));
            let (n2, tag2) = normalize_key(&n, &p);
            assert_eq!(tag2, tag);
            assert_eq!(n2.l11, n.l11);
            assert_eq!(n2.l13.col(1), n.l13.col(1));
        }
    }

    #[test]
    fn zero_delta_gives_pure_t() {
        for seed in 0..10 {
            let p = gen_system_params(8, seed, None);
            let sk = pure_t_key(&p, seed);
            let (n, tag) = normalize_key(&sk, &p);
            assert_eq!(tag.branch, Branch::PureT);
            assert_normal_shape(&n, tag, &p);
            assert!(same_public_key(&sk, &n, &p));
        }
    }

    #[test]
    fn independent_keys_differ() {
        let p = gen_system_params(8, 4, None);
        for seed in 0..100 {
            assert!(!same_public_key(
                &keygen(&p, 2 * seed),
                &keygen(&p, 2 * seed + 1),
                &p
            ));
        }
        let sk = keygen(&p, 5);
        assert!(same_public_key(&sk, &sk, &p));
    }
}
