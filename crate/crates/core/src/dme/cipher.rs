use rand::Rng;

use super::key::apply_blocks;
use super::{DmeError, PrivateKey, SystemParams};
use crate::fields::{join_ext2, join_ext3, split_ext2, split_ext3, Field, FqElem};
use crate::polyalg::ExpMatrix;

/// Uniform plaintext whose three `F_{q^2}` blocks are nonzero.
pub fn random_plaintext<R: Rng + ?Sized>(w: u32, rng: &mut R) -> [FqElem; 6] {
    loop {
        let m: [FqElem; 6] = std::array::from_fn(|_| FqElem(rng.gen::<u64>() >> (64 - w)));
        if split_ext2(&m).iter().all(|b| !b.is_zero()) {
            return m;
        }
    }
}

/// `x^M`: component `i` is `prod_j x_j^{M_ij}`.
pub fn exp_map<K: Field>(k: &K, m: &ExpMatrix, x: &[K::Elem]) -> Result<Vec<K::Elem>, DmeError> {
    assert_eq!(
        x.len(),
        m.dim(),
        "block count must match the matrix dimension"
    );
    if x.iter().any(|&b| k.is_zero(b)) {
        return Err(DmeError::ZeroBlock);
    }
    Ok(m.rows()
        .iter()
        .map(|row| {
            row.iter().zip(x).fold(k.one(), |acc, (e, &b)| {
                k.mul(acc, k.pow(b, e).expect("nonzero base"))
            })
        })
        .collect())
}

pub fn encrypt_private(
    sk: &PrivateKey,
    params: &SystemParams,
    m: &[FqElem; 6],
) -> Result<[FqElem; 6], DmeError> {
    let t = params.tower();
    let k = t.base();
    let x = apply_blocks(k, &sk.l1(), m);
    let y = exp_map(&t.quad(), params.e(), &split_ext2(&x))?;
    let v = apply_blocks(k, &sk.l2(), &join_ext2(&[y[0], y[1], y[2]]));
    let u = split_ext3(&v);
    assert!(
        u.iter().all(|b| !b.is_zero()),
        "middle blocks of a valid plaintext are nonzero"
    );
    let z = exp_map(&t.cubic(), params.f(), &u)?;
    Ok(apply_blocks(k, &sk.l3(), &join_ext3(&[z[0], z[1]])))
}

pub fn decrypt(
    sk: &PrivateKey,
    params: &SystemParams,
    ct: &[FqElem; 6],
) -> Result<[FqElem; 6], DmeError> {
    let t = params.tower();
    let k = t.base();
    let inv = |blocks: [&crate::linalg::Mat; 2]| -> [crate::linalg::Mat; 2] {
        blocks.map(|b| b.inverse(k).expect("key blocks are invertible"))
    };
    let l3i = inv(sk.l3());
    let l2i = inv(sk.l2());
    let l1i = sk
        .l1()
        .map(|b| b.inverse(k).expect("key blocks are invertible"));

    let u = apply_blocks(k, &[&l3i[0], &l3i[1]], ct);
    let z = exp_map(&t.cubic(), params.f_inv(), &split_ext3(&u))
        .map_err(|_| DmeError::InvalidCiphertext)?;
    let v = apply_blocks(k, &[&l2i[0], &l2i[1]], &join_ext3(&[z[0], z[1]]));
    let y = exp_map(&t.quad(), params.e_inv(), &split_ext2(&v))
        .map_err(|_| DmeError::InvalidCiphertext)?;
    Ok(apply_blocks(
        k,
        &[&l1i[0], &l1i[1], &l1i[2]],
        &join_ext2(&[y[0], y[1], y[2]]),
    ))
}
