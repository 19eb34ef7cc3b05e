//! The DME-(3,2,q) scheme: `L3 ∘ F ∘ L2 ∘ E ∘ L1` over `F_q^6`.

mod cipher;
pub mod formats;
mod key;
mod params;
mod pubkey;

use thiserror::Error;

pub use cipher::{decrypt, encrypt_private, exp_map, random_plaintext};
pub use key::{apply_blocks, keygen, PrivateKey, BLOCK_NAMES};
pub use params::{gen_system_params, Preset, SystemParams};
pub use pubkey::{
    coeff_lookup, derive_public_key, eval_public, structural_support, Monomial, PublicKey,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DmeError {
    #[error("input block is zero")]
    ZeroBlock,
    #[error("ciphertext is not the image of a valid plaintext")]
    InvalidCiphertext,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}
