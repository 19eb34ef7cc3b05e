use super::AttackError;
use crate::dme::apply_blocks;
use crate::dme::{derive_public_key, eval_public, exp_map, PrivateKey, PublicKey, SystemParams};
use crate::fields::{join_ext2, split_ext2, BaseField, CubicExt, Ext3Elem, Field, FqElem};
use crate::linalg::Mat;
use crate::polyalg::{resultant_eliminate, upoly_gcd, upoly_roots, BiPoly, UniPoly, Var};

/// `z[i][j]` is the reduced-map output `z^{(i+1)(j+4)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZTable {
    pub z: [[[FqElem; 6]; 3]; 3],
}

/// Solutions `(theta_1, theta_2)` and `(theta_4, theta_5)`, with
/// `theta_3 = theta_6 = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaCandidates {
    pub top: Vec<(Ext3Elem, Ext3Elem)>,
    pub bottom: Vec<(Ext3Elem, Ext3Elem)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThetaZeta {
    /// `theta_1, theta_2, theta_4, theta_5`.
    pub theta: [Ext3Elem; 4],
    pub zeta: [Ext3Elem; 6],
}

/// `R = PublicMap ∘ L1^{-1} ∘ E^{-1}`, equal to `L3 ∘ F ∘ L2` for the right `L1`.
pub fn reduced_eval(
    pk: &PublicKey,
    l1: &[Mat; 3],
    params: &SystemParams,
    v: &[FqElem; 6],
) -> Result<[FqElem; 6], AttackError> {
    let t = params.tower();
    let k = t.base();
    let y = exp_map(&t.quad(), params.e_inv(), &split_ext2(v))?;
    let inv: Vec<Mat> = l1
        .iter()
        .map(|m| m.inverse(k).map_err(|_| AttackError::ZeroBlock))
        .collect::<Result<_, _>>()?;
    let x = apply_blocks(
        k,
        &[&inv[0], &inv[1], &inv[2]],
        &join_ext2(&[y[0], y[1], y[2]]),
    );
    Ok(eval_public(pk, params, &x))
}

/// Sample inputs: `v = (a1, a2, a3, b1, b2, b3)` for GF(2)-vectors `a`, `b`
/// chosen so that every `F_{q^2}` block of `v` is nonzero.
pub(crate) const SAMPLE_A: [[u8; 3]; 3] = [[1, 0, 1], [0, 1, 1], [1, 1, 1]];
pub(crate) const SAMPLE_B: [[u8; 3]; 3] = [[1, 1, 0], [1, 0, 1], [1, 1, 1]];

pub(crate) fn sample_vector(s: usize, t: usize) -> [FqElem; 6] {
    let (a, b) = (SAMPLE_A[s], SAMPLE_B[t]);
    std::array::from_fn(|i| FqElem(u64::from(if i < 3 { a[i] } else { b[i - 3] })))
}

/// Inverse of a 3x3 matrix over GF(2).
fn gf2_inverse(m: [[u8; 3]; 3]) -> [[u8; 3]; 3] {
    let mut a = m;
    let mut inv = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    for col in 0..3 {
        let p = (col..3)
            .find(|&r| a[r][col] == 1)
            .expect("sample matrix is invertible");
        a.swap(col, p);
        inv.swap(col, p);
        for r in 0..3 {
            if r != col && a[r][col] == 1 {
                for c in 0..3 {
                    a[r][c] ^= a[col][c];
                    inv[r][c] ^= inv[col][c];
                }
            }
        }
    }
    inv
}

/// The reduced map is GF(2)-bilinear in `(a, b)`, so with `R[s][t]` the
/// output at sample `(s, t)` we have `Z = A^{-1} R B^{-T}`.
pub(crate) fn interpolate_z(r: &[[[FqElem; 6]; 3]; 3]) -> ZTable {
    let (ai, bi) = (gf2_inverse(SAMPLE_A), gf2_inverse(SAMPLE_B));
    let mut z = [[[FqElem::ZERO; 6]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for s in 0..3 {
                for t in 0..3 {
                    if ai[i][s] == 1 && bi[j][t] == 1 {
                        for c in 0..6 {
                            z[i][j][c] += r[s][t][c];
                        }
                    }
                }
            }
        }
    }
    ZTable { z }
}

pub fn collect_z(
    pk: &PublicKey,
    l1: &[Mat; 3],
    params: &SystemParams,
) -> Result<ZTable, AttackError> {
    let mut r = [[[FqElem::ZERO; 6]; 3]; 3];
    for (s, row) in r.iter_mut().enumerate() {
        for (t, out) in row.iter_mut().enumerate() {
            *out = reduced_eval(pk, l1, params, &sample_vector(s, t))?;
        }
    }
    Ok(interpolate_z(&r))
}

/// `z_1 X + z_2 Y + z_3` for the given half.
fn affine(z: &ZTable, i: usize, j: usize, half: usize) -> BiPoly<FqElem> {
    let v = &z.z[i][j][3 * half..3 * half + 3];
    BiPoly::affine(v[0], v[1], v[2])
}

/// The 2x2 minor `A_ij A_kl - A_il A_kj` of the matrix of affine forms.
fn minor(
    k: &BaseField,
    z: &ZTable,
    half: usize,
    (i, kk): (usize, usize),
    (j, l): (usize, usize),
) -> BiPoly<FqElem> {
    let a = |r, c| affine(z, r, c, half);
    a(i, j).mul(k, &a(kk, l)).add(&a(i, l).mul(k, &a(kk, j)))
}

fn half_equations(k: &BaseField, z: &ZTable, half: usize) -> [BiPoly<FqElem>; 3] {
    [
        minor(k, z, half, (0, 1), (0, 1)),
        minor(k, z, half, (0, 1), (0, 2)),
        minor(k, z, half, (0, 2), (0, 1)),
    ]
}

/// `Res(P1, P2)` and `Res(P1, P3)` eliminating the first theta, where
/// `P1: A14 A25 = A15 A24`, `P2: A14 A26 = A16 A24`, `P3: A14 A35 = A15 A34`.
/// The coefficients lie in `F_q`.
pub fn theta_resultants(
    z: &ZTable,
    params: &SystemParams,
    half: usize,
) -> Result<[UniPoly<FqElem>; 2], AttackError> {
    let k = params.tower().base();
    let [p1, p2, p3] = half_equations(k, z, half);
    let r12 = resultant_eliminate(k, &p1, &p2, Var::X).map_err(|_| AttackError::NoSolution)?;
    let r13 = resultant_eliminate(k, &p1, &p3, Var::X).map_err(|_| AttackError::NoSolution)?;
    Ok([r12, r13])
}

/// Cheap necessary condition: the common factor of the two resultants must
/// have degree at least 3, the degree of the minimal polynomial of a theta
/// outside `F_q`.
pub(crate) fn passes_filter(
    z: &ZTable,
    params: &SystemParams,
    half: usize,
) -> Option<UniPoly<FqElem>> {
    let k = params.tower().base();
    let [r12, r13] = theta_resultants(z, params, half).ok()?;
    let g = upoly_gcd(k, &r12, &r13);
    (g.degree()? >= 3).then_some(g)
}

fn lift(cubic: &CubicExt<'_>, p: &UniPoly<FqElem>) -> UniPoly<Ext3Elem> {
    UniPoly::new(p.coeffs().iter().map(|&c| cubic.embed(c)).collect())
}

/// `P(X, y)` as a polynomial in `X` over `F_{q^3}`.
fn specialize(cubic: &CubicExt<'_>, p: &BiPoly<FqElem>, y: Ext3Elem) -> UniPoly<Ext3Elem> {
    let y2 = cubic.square(y);
    UniPoly::new(
        p.c.iter()
            .map(|row| {
                cubic.embed(row[0])
                    + cubic.mul(cubic.embed(row[1]), y)
                    + cubic.mul(cubic.embed(row[2]), y2)
            })
            .collect(),
    )
}

fn eval_affine(cubic: &CubicExt<'_>, v: &[FqElem], x: Ext3Elem, y: Ext3Elem) -> Ext3Elem {
    cubic.mul(cubic.embed(v[0]), x) + cubic.mul(cubic.embed(v[1]), y) + cubic.embed(v[2])
}

/// The matrix `A_ij = z_1 x + z_2 y + z_3` of one half.
fn a_matrix(
    cubic: &CubicExt<'_>,
    z: &ZTable,
    half: usize,
    x: Ext3Elem,
    y: Ext3Elem,
) -> [[Ext3Elem; 3]; 3] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| eval_affine(cubic, &z.z[i][j][3 * half..3 * half + 3], x, y))
    })
}

fn independent_with_one(k: &BaseField, x: Ext3Elem, y: Ext3Elem) -> bool {
    Mat::from_cols(&[
        x.coords(),
        y.coords(),
        [FqElem::ONE, FqElem::ZERO, FqElem::ZERO],
    ])
    .is_invertible(k)
}

fn is_rank_one(cubic: &CubicExt<'_>, a: &[[Ext3Elem; 3]; 3]) -> bool {
    if a.iter().flatten().any(|&x| cubic.is_zero(x)) {
        return false;
    }
    (0..3).all(|i| {
        (i + 1..3).all(|kk| {
            (0..3).all(|j| {
                (j + 1..3).all(|l| cubic.mul(a[i][j], a[kk][l]) == cubic.mul(a[i][l], a[kk][j]))
            })
        })
    })
}

fn solve_half(
    z: &ZTable,
    params: &SystemParams,
    half: usize,
) -> Result<Vec<(Ext3Elem, Ext3Elem)>, AttackError> {
    let t = params.tower();
    let (k, cubic) = (t.base(), t.cubic());
    let g = passes_filter(z, params, half).ok_or(AttackError::NoSolution)?;
    let eqs = half_equations(k, z, half);
    let mut out = Vec::new();
    for y in upoly_roots(&cubic, &lift(&cubic, &g)) {
        if y.is_base() {
            continue;
        }
        let xg = eqs
            .iter()
            .map(|p| specialize(&cubic, p, y))
            .fold(UniPoly::zero(), |acc, p| upoly_gcd(&cubic, &acc, &p));
        if xg.is_zero() {
            continue;
        }
        for x in upoly_roots(&cubic, &xg) {
            if independent_with_one(k, x, y)
                && is_rank_one(&cubic, &a_matrix(&cubic, z, half, x, y))
            {
                out.push((x, y));
            }
        }
    }
    if out.is_empty() {
        Err(AttackError::NoSolution)
    } else {
        Ok(out)
    }
}

pub fn solve_thetas(z: &ZTable, params: &SystemParams) -> Result<ThetaCandidates, AttackError> {
    let top = solve_half(z, params, 0)?;
    let bottom = solve_half(z, params, 1)?;
    Ok(ThetaCandidates { top, bottom })
}

/// Every top/bottom pairing whose zeta values agree across all nine pairs.
pub fn recover_zetas(
    cands: &ThetaCandidates,
    z: &ZTable,
    params: &SystemParams,
) -> Result<Vec<ThetaZeta>, AttackError> {
    let t = params.tower();
    let (k, cubic) = (t.base(), t.cubic());
    let mut out = Vec::new();
    for &(t1, t2) in &cands.top {
        let at = a_matrix(&cubic, z, 0, t1, t2);
        for &(t4, t5) in &cands.bottom {
            let ab = a_matrix(&cubic, z, 1, t4, t5);
            let mut zeta: [Option<Ext3Elem>; 6] = [None; 6];
            let consistent = (0..3).all(|i| {
                (0..3).all(|j| {
                    let Ok(r) = exp_map(&cubic, params.f_inv(), &[at[i][j], ab[i][j]]) else {
                        return false;
                    };
                    let agree = |slot: &mut Option<Ext3Elem>, v: Ext3Elem| match slot {
                        Some(prev) => *prev == v,
                        None => {
                            *slot = Some(v);
                            true
                        }
                    };
                    agree(&mut zeta[i], r[0]) && agree(&mut zeta[3 + j], r[1])
                })
            });
            if !consistent {
                continue;
            }
            let zeta = zeta.map(|x| x.expect("all nine pairs visited"));
            let independent = |zs: &[Ext3Elem]| {
                Mat::from_cols(&[zs[0].coords(), zs[1].coords(), zs[2].coords()]).is_invertible(k)
            };
            if independent(&zeta[..3]) && independent(&zeta[3..]) {
                out.push(ThetaZeta {
                    theta: [t1, t2, t4, t5],
                    zeta,
                });
            }
        }
    }
    if out.is_empty() {
        Err(AttackError::Inconsistent)
    } else {
        Ok(out)
    }
}

/// Assembles `L2`, `L3` from a solution: `L21`, `L22` have columns zeta,
/// `L31^{-1}`, `L32^{-1}` have columns `(theta_1, theta_2, 1)` and `(theta_4, theta_5, 1)`.
pub(crate) fn assemble(l1: &[Mat; 3], sol: &ThetaZeta, k: &BaseField) -> Option<PrivateKey> {
    let one = [FqElem::ONE, FqElem::ZERO, FqElem::ZERO];
    let cols = |zs: &[Ext3Elem]| Mat::from_cols(&[zs[0].coords(), zs[1].coords(), zs[2].coords()]);
    let th = sol.theta;
    Some(PrivateKey {
        l11: l1[0].clone(),
        l12: l1[1].clone(),
        l13: l1[2].clone(),
        l21: cols(&sol.zeta[..3]),
        l22: cols(&sol.zeta[3..]),
        l31: Mat::from_cols(&[th[0].coords(), th[1].coords(), one])
            .inverse(k)
            .ok()?,
        l32: Mat::from_cols(&[th[2].coords(), th[3].coords(), one])
            .inverse(k)
            .ok()?,
    })
}

pub(crate) fn finish_from_z(
    pk: &PublicKey,
    l1: &[Mat; 3],
    params: &SystemParams,
    z: &ZTable,
) -> Result<PrivateKey, AttackError> {
    let k = params.tower().base();
    let cands = solve_thetas(z, params)?;
    let sols = recover_zetas(&cands, z, params)?;
    sols.iter()
        .filter_map(|s| assemble(l1, s, k))
        .find(|key| derive_public_key(key, params) == *pk)
        .ok_or(AttackError::VerificationFailed)
}

/// Completes a key from a full `L1` candidate, verified against `pk`.
pub fn recover_l2l3(
    pk: &PublicKey,
    l1: &[Mat; 3],
    params: &SystemParams,
) -> Result<PrivateKey, AttackError> {
    let z = collect_z(pk, l1, params)?;
    finish_from_z(pk, l1, params, &z)
}
