use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::SystemParams;
use crate::fields::{BaseField, FqElem};
use crate::linalg::Mat;

/// Seven invertible blocks: `L1 = L11 ⊕ L12 ⊕ L13` (2x2),
/// `L2 = L21 ⊕ L22` and `L3 = L31 ⊕ L32` (3x3).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrivateKey {
    pub l11: Mat,
    pub l12: Mat,
    pub l13: Mat,
    pub l21: Mat,
    pub l22: Mat,
    pub l31: Mat,
    pub l32: Mat,
}

pub const BLOCK_NAMES: [&str; 7] = ["L11", "L12", "L13", "L21", "L22", "L31", "L32"];

impl PrivateKey {
    pub fn blocks(&self) -> [&Mat; 7] {
        [
            &self.l11, &self.l12, &self.l13, &self.l21, &self.l22, &self.l31, &self.l32,
        ]
    }

    /// Builds a key from blocks in `BLOCK_NAMES` order, checking shapes.
    pub fn from_blocks(blocks: [Mat; 7]) -> Option<PrivateKey> {
        let shapes_ok = blocks
            .iter()
            .enumerate()
            .all(|(i, b)| b.dim() == if i < 3 { 2 } else { 3 });
        if !shapes_ok {
            return None;
        }
        let [l11, l12, l13, l21, l22, l31, l32] = blocks;
        Some(PrivateKey {
            l11,
            l12,
            l13,
            l21,
            l22,
            l31,
            l32,
        })
    }

    pub fn is_valid(&self, k: &BaseField) -> bool {
        self.blocks().iter().all(|b| b.is_invertible(k))
    }

    pub fn l1(&self) -> [&Mat; 3] {
        [&self.l11, &self.l12, &self.l13]
    }

    pub fn l2(&self) -> [&Mat; 2] {
        [&self.l21, &self.l22]
    }

    pub fn l3(&self) -> [&Mat; 2] {
        [&self.l31, &self.l32]
    }
}

/// Applies a block-diagonal map, blocks laid out consecutively along `v`.
pub fn apply_blocks(k: &BaseField, blocks: &[&Mat], v: &[FqElem; 6]) -> [FqElem; 6] {
    let mut out = [FqElem::ZERO; 6];
    let mut at = 0;
    for b in blocks {
        let n = b.dim();
        let r = b.mul_vec(k, &v[at..at + n]);
        out[at..at + n].copy_from_slice(&r);
        at += n;
    }
    out
}

pub fn keygen(params: &SystemParams, seed: u64) -> PrivateKey {
    let k = params.tower().base();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |n| Mat::random_invertible(k, n, &mut rng);
    PrivateKey {
        l11: draw(2),
        l12: draw(2),
        l13: draw(2),
        l21: draw(3),
        l22: draw(3),
        l31: draw(3),
        l32: draw(3),
    }
}
