//! Key recovery from the public key: `L11`, `L13` and the first columns of
//! `L31`, `L32` directly from monomial coefficients; `L2`, `L3` from a
//! candidate `L1` via resultants; a search over the two free entries of `L12`.

mod l1;
mod l2l3;
mod search;

use thiserror::Error;

use crate::dme::DmeError;

pub use l1::{
    extract_eta_columns, pair_monomials, recover_fgh, recover_l1, recover_l1_direct, solve_c,
    substitution_matrix, EtaColumns, FGHValues, RecoveredL1,
};
pub use l2l3::{
    collect_z, recover_l2l3, recover_zetas, reduced_eval, solve_thetas, theta_resultants,
    ThetaCandidates, ThetaZeta, ZTable,
};
pub use search::{full_attack, l12_candidate, search_l12, AttackReport, SearchOutcome};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AttackError {
    #[error("the x2/x6-only monomials are all zero")]
    MissingMonomials,
    #[error("a quotient needed for pair-exponent inversion is zero")]
    ZeroQuotient,
    #[error("the two equations in c have no common nonzero root")]
    NoCommonRoot,
    #[error("the equations in c vanish identically")]
    AmbiguousRoot,
    #[error("no change of variables reached a usable normal form")]
    FallbackExhausted,
    #[error("input has a zero block")]
    ZeroBlock,
    #[error("no theta candidate satisfies the z-equations")]
    NoSolution,
    #[error("theta candidates give inconsistent zeta values")]
    Inconsistent,
    #[error("assembled key does not reproduce the public key")]
    VerificationFailed,
    #[error("no L12 candidate produced a verified key")]
    SearchExhausted,
}

impl From<DmeError> for AttackError {
    fn from(_: DmeError) -> AttackError {
        AttackError::ZeroBlock
    }
}
