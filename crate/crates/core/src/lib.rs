//! Workbench for the DME-(3,2,q) multivariate cryptosystem: field tower,
//! key generation, encryption, public-key expansion and a structural
//! key-recovery attack.

pub mod attack;
pub mod dme;
pub mod fields;
pub mod linalg;
pub mod malleability;
pub mod polyalg;
