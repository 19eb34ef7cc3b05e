use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::l2l3::{finish_from_z, interpolate_z, passes_filter, sample_vector};
use super::{recover_l1, substitution_matrix, AttackError, RecoveredL1};
use crate::dme::{derive_public_key, exp_map, PrivateKey, PublicKey, SystemParams};
use crate::fields::{split_ext2, Field, FqElem};
use crate::linalg::Mat;
use crate::malleability::Branch;

/// `L12 = (u, 1; v, 0)`.
pub fn l12_candidate(u: FqElem, v: FqElem) -> Mat {
    Mat::from_rows(&[[u, FqElem::ONE], [v, FqElem::ZERO]])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub key: PrivateKey,
    pub u: FqElem,
    pub v: FqElem,
    /// One-based position of the accepted candidate in the fixed order
    /// `(u, v) = (0, 1), (0, 2), ..., (1, 1), ...`.
    pub candidates_tried: u64,
}

/// Public key of one sample with everything but `x3`, `x4` substituted.
struct Sample {
    /// `E^{-1}` image of the sample's middle block: `p + rT`.
    p: FqElem,
    r: FqElem,
    /// Per component: `(index into x3 powers, index into x4 powers, coefficient)`.
    terms: [Vec<(usize, usize, FqElem)>; 6],
}

struct Evaluator<'a> {
    params: &'a SystemParams,
    ex3: Vec<u64>,
    ex4: Vec<u64>,
    samples: Vec<Sample>,
}

impl<'a> Evaluator<'a> {
    fn new(
        pk: &PublicKey,
        rec: &RecoveredL1,
        params: &'a SystemParams,
    ) -> Result<Evaluator<'a>, AttackError> {
        let t = params.tower();
        let k = t.base();
        let l11i = rec.l11.inverse(k).map_err(|_| AttackError::ZeroBlock)?;
        let l13i = rec.l13.inverse(k).map_err(|_| AttackError::ZeroBlock)?;
        let mut ex3: Vec<u64> = Vec::new();
        let mut ex4: Vec<u64> = Vec::new();
        let index = |list: &mut Vec<u64>, e: u64| match list.iter().position(|&x| x == e) {
            Some(i) => i,
            None => {
                list.push(e);
                list.len() - 1
            }
        };
        let mut samples = Vec::with_capacity(9);
        for s in 0..3 {
            for tt in 0..3 {
                let y = exp_map(
                    &t.quad(),
                    params.e_inv(),
                    &split_ext2(&sample_vector(s, tt)),
                )?;
                let x12 = l11i.mul_vec(k, &y[0].coords());
                let x56 = l13i.mul_vec(k, &y[2].coords());
                let fixed = [x12[0], x12[1], FqElem::ONE, FqElem::ONE, x56[0], x56[1]];
                let terms = std::array::from_fn(|i| {
                    let mut grouped: BTreeMap<(u64, u64), FqElem> = BTreeMap::new();
                    for (mon, &c) in pk.component(i) {
                        let e = mon.exps();
                        let partial = [0, 1, 4, 5]
                            .iter()
                            .fold(c, |acc, &j| k.mul(acc, k.pow_u64(fixed[j], e[j])));
                        *grouped.entry((e[2], e[3])).or_insert(FqElem::ZERO) += partial;
                    }
                    grouped
                        .into_iter()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|((e3, e4), c)| (index(&mut ex3, e3), index(&mut ex4, e4), c))
                        .collect()
                });
                samples.push(Sample {
                    p: y[1].c0,
                    r: y[1].c1,
                    terms,
                });
            }
        }
        Ok(Evaluator {
            params,
            ex3,
            ex4,
            samples,
        })
    }

    /// Reduced-map outputs at the nine samples for components `comps`.
    fn eval(
        &self,
        u: FqElem,
        v_inv: FqElem,
        comps: std::ops::Range<usize>,
        out: &mut [[[FqElem; 6]; 3]; 3],
    ) {
        let k = self.params.tower().base();
        let mut p3 = vec![FqElem::ZERO; self.ex3.len()];
        let mut p4 = vec![FqElem::ZERO; self.ex4.len()];
        for (n, s) in self.samples.iter().enumerate() {
            // L12^{-1} = (0, 1/v; 1, u/v)
            let x3 = k.mul(s.r, v_inv);
            let x4 = s.p + k.mul(u, x3);
            for (d, &e) in p3.iter_mut().zip(&self.ex3) {
                *d = k.pow_u64(x3, e);
            }
            for (d, &e) in p4.iter_mut().zip(&self.ex4) {
                *d = k.pow_u64(x4, e);
            }
            let slot = &mut out[n / 3][n % 3];
            for c in comps.clone() {
                slot[c] = s.terms[c]
                    .iter()
                    .fold(FqElem::ZERO, |acc, &(i3, i4, coef)| {
                        acc + k.mul(coef, k.mul(p3[i3], p4[i4]))
                    });
            }
        }
    }

    fn check(
        &self,
        pk: &PublicKey,
        rec: &RecoveredL1,
        u: FqElem,
        v: FqElem,
    ) -> Result<PrivateKey, AttackError> {
        let k = self.params.tower().base();
        let v_inv = k.inv(v).map_err(|_| AttackError::ZeroBlock)?;
        let mut r = [[[FqElem::ZERO; 6]; 3]; 3];
        self.eval(u, v_inv, 0..3, &mut r);
        if passes_filter(&interpolate_z(&r), self.params, 0).is_none() {
            return Err(AttackError::NoSolution);
        }
        self.eval(u, v_inv, 3..6, &mut r);
        let z = interpolate_z(&r);
        if passes_filter(&z, self.params, 1).is_none() {
            return Err(AttackError::NoSolution);
        }
        let l1 = [rec.l11.clone(), l12_candidate(u, v), rec.l13.clone()];
        finish_from_z(pk, &l1, self.params, &z)
    }
}

/// Exhaustive search over the two unknown entries of `L12`. The accepted
/// candidate is the first in the fixed order regardless of `workers`.
pub fn search_l12(
    pk: &PublicKey,
    rec: &RecoveredL1,
    params: &SystemParams,
    workers: usize,
) -> Result<SearchOutcome, AttackError> {
    let ev = Evaluator::new(pk, rec, params)?;
    let qm1 = params.q_minus_1();
    let total = (qm1 as u128 + 1) * qm1 as u128;
    let total = u64::try_from(total).unwrap_or(u64::MAX);
    let split = |n: u64| (FqElem(n / qm1), FqElem(n % qm1 + 1));
    let try_one = |n: u64| {
        let (u, v) = split(n);
        ev.check(pk, rec, u, v).ok().map(|key| (n, key))
    };
    let found = if workers <= 1 {
        (0..total).find_map(try_one)
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("thread pool");
        pool.install(|| (0..total).into_par_iter().find_map_first(try_one))
    };
    let (n, key) = found.ok_or(AttackError::SearchExhausted)?;
    let (u, v) = split(n);
    Ok(SearchOutcome {
        key,
        u,
        v,
        candidates_tried: n + 1,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackReport {
    pub branch: Branch,
    pub substitution: Option<FqElem>,
    pub c: FqElem,
    pub u: FqElem,
    pub v: FqElem,
    pub candidates_tried: u64,
    pub l1_time: Duration,
    pub search_time: Duration,
    pub verified: bool,
}

impl AttackReport {
    pub fn machine_line(&self, key: &str) -> String {
        format!(
            "key={key} candidates_tried={} branch={} verified={}",
            self.candidates_tried,
            self.branch.as_str(),
            self.verified
        )
    }
}

impl fmt::Display for AttackReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "branch:            {}", self.branch.as_str())?;
        match self.substitution {
            Some(t) => writeln!(
                f,
                "substitution:      x5 <- x5 + t x6, x6 <- t x5 + (1+t^2) x6 with t = {:#x}",
                t.0
            )?,
            None => writeln!(f, "substitution:      none")?,
        }
        writeln!(f, "c:                 {:#x}", self.c.0)?;
        writeln!(f, "L12 entries (u,v): ({:#x}, {:#x})", self.u.0, self.v.0)?;
        writeln!(f, "candidates tried:  {}", self.candidates_tried)?;
        writeln!(f, "L1 recovery:       {:.3?}", self.l1_time)?;
        writeln!(f, "search:            {:.3?}", self.search_time)?;
        write!(f, "verified:          {}", self.verified)
    }
}

/// Recovers a private key with the same public key as `pk`.
pub fn full_attack(
    pk: &PublicKey,
    params: &SystemParams,
    workers: usize,
) -> Result<(PrivateKey, AttackReport), AttackError> {
    let k = params.tower().base();
    let start = Instant::now();
    let (rec, pk_used) = recover_l1(pk, params)?;
    let l1_time = start.elapsed();
    let start = Instant::now();
    let found = search_l12(&pk_used, &rec, params, workers)?;
    let search_time = start.elapsed();
    let mut key = found.key;
    if let Some(t) = rec.substitution {
        let back = substitution_matrix(k, t).inverse(k).expect("det K_t = 1");
        key.l13 = key.l13.mul(k, &back);
    }
    if derive_public_key(&key, params) != *pk {
        return Err(AttackError::VerificationFailed);
    }
    let report = AttackReport {
        branch: rec.branch,
        substitution: rec.substitution,
        c: rec.c,
        u: found.u,
        v: found.v,
        candidates_tried: found.candidates_tried,
        l1_time,
        search_time,
        verified: true,
    };
    Ok((key, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dme::{gen_system_params, keygen};
    use crate::malleability::normalize_key;

    fn ordinal(p: &SystemParams, l12: &Mat) -> u64 {
        l12[(0, 0)].0 * p.q_minus_1() + l12[(1, 0)].0
    }

    #[test]
    fn candidate_shape() {
        let m = l12_candidate(FqElem(3), FqElem(5));
        assert_eq!(m.col(1), vec![FqElem::ONE, FqElem::ZERO]);
        assert_eq!(m.col(0), vec![FqElem(3), FqElem(5)]);
    }

    #[test]
    fn full_attack_small_width() {
        for seed in 0..4 {
            let p = gen_system_params(6, seed, None);
            let sk = keygen(&p, 40 + seed);
            let pk = derive_public_key(&sk, &p);
            let (key, report) = full_attack(&pk, &p, 1).unwrap();
            assert_eq!(derive_public_key(&key, &p), pk);
            assert!(report.verified);
            if report.substitution.is_none() {
                let (n, _) = normalize_key(&sk, &p);
                assert!(report.candidates_tried <= ordinal(&p, &n.l12));
            }
        }
    }

    #[test]
    fn true_candidate_is_accepted() {
        for seed in 0..5 {
            let p = gen_system_params(8, seed, None);
            let sk = keygen(&p, 90 + seed);
            let pk = derive_public_key(&sk, &p);
            let (rec, used) = recover_l1(&pk, &p).unwrap();
            if rec.substitution.is_some() {
                continue;
            }
            let (n, _) = normalize_key(&sk, &p);
            let ev = Evaluator::new(&used, &rec, &p).unwrap();
            let key = ev.check(&used, &rec, n.l12[(0, 0)], n.l12[(1, 0)]).unwrap();
            assert_eq!(derive_public_key(&key, &p), pk);
        }
    }

    #[test]
    fn pure_t_key_goes_through_fallback() {
        let p = gen_system_params(6, 2, None);
        let (k, q2) = (p.tower().base(), p.tower().quad());
        let (mut sk, _) = normalize_key(&keygen(&p, 3), &p);
        let tau = q2.pow(q2.gen(), p.e23_inv()).unwrap();
        sk.l13.set_col(1, &tau.coords());
        if !sk.l13.is_invertible(k) {
            sk.l13.set_col(0, &[FqElem::ONE, FqElem::ONE]);
        }
        let pk = derive_public_key(&sk, &p);
        let (key, report) = full_attack(&pk, &p, 1).unwrap();
        assert_eq!(report.branch, Branch::PureT);
        assert!(report.substitution.is_some());
        assert_eq!(derive_public_key(&key, &p), pk);
    }

    #[test]
    fn worker_count_does_not_change_result() {
        let p = gen_system_params(6, 7, None);
        let pk = derive_public_key(&keygen(&p, 8), &p);
        let a = full_attack(&pk, &p, 1).unwrap();
        let b = full_attack(&pk, &p, 3).unwrap();
        assert_eq!(a.0, b.0);
        assert_eq!(a.1.candidates_tried, b.1.candidates_tried);
    }

    #[test]
    fn machine_line_format() {
        let p = gen_system_params(6, 1, None);
        let pk = derive_public_key(&keygen(&p, 2), &p);
        let (_, report) = full_attack(&pk, &p, 1).unwrap();
        let line = report.machine_line("k.txt");
        assert!(line.starts_with("key=k.txt candidates_tried="));
        assert!(line.ends_with("verified=true"));
        assert!(report.to_string().contains("candidates tried"));
    }
}
