use num_bigint::BigUint;

use super::AttackError;
use crate::dme::{exp_map, Monomial, PublicKey, SystemParams};
use crate::fields::{Ext2Elem, Field, FqElem};
use crate::linalg::Mat;
use crate::malleability::Branch;

/// Coefficients of the four two-variable monomial families, per component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EtaColumns {
    /// `x2/x6`: `c^F12 eta_i` (top), `c^F22 eta_i` (bottom).
    pub col_c: [FqElem; 6],
    /// `x1/x5`: `f1^F11 f2^F12 eta_i` (top), `f1^F21 f2^F22 eta_i` (bottom).
    pub col_f: [FqElem; 6],
    /// `x1/x6`, same pattern with `g`.
    pub col_g: [FqElem; 6],
    /// `x2/x5`, same pattern with `h`.
    pub col_h: [FqElem; 6],
}

/// `f1 + f2 T`, `g1 + g2 T`, `h1 + h2 T` with `f2' = f2 / c` etc.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FGHValues {
    pub f1: FqElem,
    pub f2p: FqElem,
    pub g1: FqElem,
    pub g2p: FqElem,
    pub h1: FqElem,
    pub h2p: FqElem,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecoveredL1 {
    /// Columns `(l11, 1)`.
    pub l11: Mat,
    /// Columns `(l31, a + bT)`.
    pub l13: Mat,
    pub c: FqElem,
    pub eta: [FqElem; 6],
    /// Branch detected on the input key; `PureT` also covers `c = 0`.
    pub branch: Branch,
    /// `t` of the change of variables applied before recovery, if any.
    /// The matrices above then describe the substituted public key.
    pub substitution: Option<FqElem>,
}

/// `K_t`, the change of variables on `(x5, x6)` used by the fallback.
pub fn substitution_matrix(k: &crate::fields::BaseField, t: FqElem) -> Mat {
    Mat::from_rows(&[[FqElem::ONE, t], [t, FqElem::ONE + k.square(t)]])
}

/// The top and bottom monomials `(x_a^E21 x_b^E23)^(F_i1 + F_i2)` for
/// `a in {1,2}`, `b in {5,6}` (zero-based variable indices).
pub fn pair_monomials(params: &SystemParams, a: usize, b: usize) -> [Monomial; 2] {
    let e = params.e();
    let qm1 = params.q_minus_1();
    [0, 1].map(|half| {
        let fsum = params.f().entry(half, 0) + params.f().entry(half, 1);
        let mut exps: [BigUint; 6] = Default::default();
        exps[a] = e.entry(1, 0) * &fsum;
        exps[b] = e.entry(1, 2) * &fsum;
        Monomial::from_big(&exps, qm1)
    })
}

pub fn extract_eta_columns(
    pk: &PublicKey,
    params: &SystemParams,
) -> Result<EtaColumns, AttackError> {
    let column = |a: usize, b: usize| -> [FqElem; 6] {
        let mons = pair_monomials(params, a, b);
        std::array::from_fn(|i| pk.coeff(i, &mons[i / 3]))
    };
    let cols = EtaColumns {
        col_c: column(1, 5),
        col_f: column(0, 4),
        col_g: column(0, 5),
        col_h: column(1, 4),
    };
    if cols.col_c.iter().all(|x| x.is_zero()) {
        return Err(AttackError::MissingMonomials);
    }
    Ok(cols)
}

pub fn recover_fgh(cols: &EtaColumns, params: &SystemParams) -> Result<FGHValues, AttackError> {
    let k = params.tower().base();
    let pick = |range: std::ops::Range<usize>| {
        range
            .into_iter()
            .find(|&i| !cols.col_c[i].is_zero())
            .ok_or(AttackError::MissingMonomials)
    };
    let (it, ib) = (pick(0..3)?, pick(3..6)?);
    let pair = |col: &[FqElem; 6]| -> Result<(FqElem, FqElem), AttackError> {
        let top = k.div(col[it], cols.col_c[it]).expect("nonzero denominator");
        let bottom = k.div(col[ib], cols.col_c[ib]).expect("nonzero denominator");
        let r = exp_map(k, params.f_inv_base(), &[top, bottom])
            .map_err(|_| AttackError::ZeroQuotient)?;
        Ok((r[0], r[1]))
    };
    let (f1, f2p) = pair(&cols.col_f)?;
    let (g1, g2p) = pair(&cols.col_g)?;
    let (h1, h2p) = pair(&cols.col_h)?;
    Ok(FGHValues {
        f1,
        f2p,
        g1,
        g2p,
        h1,
        h2p,
    })
}

/// The nonzero `c` with `(f1 + c f2' T)(1 + cT) = (g1 + c g2' T)(h1 + c h2' T)`.
pub fn solve_c(v: &FGHValues, params: &SystemParams) -> Result<FqElem, AttackError> {
    let k = params.tower().base();
    let [qa, qb] = params.tower().params().quad;
    let s = v.f2p + k.mul(v.g2p, v.h2p);
    // constant coordinate: k0 + c^2 k2 = 0
    let k0 = v.f1 + k.mul(v.g1, v.h1);
    let k2 = k.mul(qb, s);
    // T coordinate divided by c: b1 + c b2 = 0
    let b1 = v.f1 + v.f2p + k.mul(v.g1, v.h2p) + k.mul(v.g2p, v.h1);
    let b2 = k.mul(qa, s);
    if b2.is_zero() {
        return Err(if b1.is_zero() && k0.is_zero() && k2.is_zero() {
            AttackError::AmbiguousRoot
        } else {
            AttackError::NoCommonRoot
        });
    }
    let c = k.div(b1, b2).expect("nonzero");
    if c.is_zero() || !(k0 + k.mul(k.square(c), k2)).is_zero() {
        return Err(AttackError::NoCommonRoot);
    }
    Ok(c)
}

/// Recovery without any change of variables.
pub fn recover_l1_direct(
    pk: &PublicKey,
    params: &SystemParams,
) -> Result<RecoveredL1, AttackError> {
    let t = params.tower();
    let (k, q2) = (t.base(), t.quad());
    let cols = extract_eta_columns(pk, params)?;
    let v = recover_fgh(&cols, params)?;
    let c = solve_c(&v, params)?;
    let f = Ext2Elem::new(v.f1, k.mul(c, v.f2p));
    let h = Ext2Elem::new(v.h1, k.mul(c, v.h2p));
    let h_inv = q2.inv(h).map_err(|_| AttackError::ZeroQuotient)?;
    let l31 = q2.pow(h, params.e23_inv()).expect("nonzero");
    let l11 = q2
        .pow(q2.mul(f, h_inv), params.e21_inv())
        .map_err(|_| AttackError::ZeroQuotient)?;
    let ab = q2
        .pow(Ext2Elem::new(FqElem::ONE, c), params.e23_inv())
        .expect("nonzero");
    let ct = k.pow(c, params.f().entry(0, 1)).expect("nonzero");
    let cb = k.pow(c, params.f().entry(1, 1)).expect("nonzero");
    let eta = std::array::from_fn(|i| {
        k.div(cols.col_c[i], if i < 3 { ct } else { cb })
            .expect("nonzero")
    });
    Ok(RecoveredL1 {
        l11: Mat::from_cols(&[l11.coords(), [FqElem::ONE, FqElem::ZERO]]),
        l13: Mat::from_cols(&[l31.coords(), ab.coords()]),
        c,
        eta,
        branch: Branch::UnitC,
        substitution: None,
    })
}

/// Recovery with the change-of-variables fallback for degenerate keys.
/// Returns the recovery and the public key it refers to.
pub fn recover_l1(
    pk: &PublicKey,
    params: &SystemParams,
) -> Result<(RecoveredL1, PublicKey), AttackError> {
    let retryable = |e: &AttackError| {
        matches!(
            e,
            AttackError::MissingMonomials | AttackError::ZeroQuotient | AttackError::AmbiguousRoot
        )
    };
    let first = match recover_l1_direct(pk, params) {
        Ok(r) => return Ok((r, pk.clone())),
        Err(e) if retryable(&e) => e,
        Err(e) => return Err(e),
    };
    let branch = if first == AttackError::MissingMonomials {
        Branch::PureT
    } else {
        Branch::UnitC
    };
    let k = params.tower().base();
    let limit = 256u64.min(params.q_minus_1() + 1);
    for t in 1..limit {
        let t = FqElem(t);
        let pk_t = pk.substitute_x56(k, params.q_minus_1(), t);
        match recover_l1_direct(&pk_t, params) {
            Ok(mut r) => {
                r.branch = branch;
                r.substitution = Some(t);
                return Ok((r, pk_t));
            }
            Err(e) if retryable(&e) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(AttackError::FallbackExhausted)
}
