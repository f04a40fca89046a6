//! Verification engines: symbolic invariance under one-parameter subgroups,
//! algebraic independence by Jacobian rank, weight coranks, and the report
//! assembled from them.

mod case242;

pub use case242::{case242_report, Case242Report, IdentityCheck, ShiftCheck, TableRow};

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::{rank, Polynomial, RatMatrix, Var};
use crate::invgen::{GeneratorSet, RestrictionCheck};
use crate::orbitlab::{borel_orbit_dim, orbit_dim};
use crate::rootcomb::{nilradical_roots, AdmissiblePair, ParabolicType, Root};
use crate::sampling::Sampler;

/// Jacobian evaluations per seed before settling for a non-maximal rank.
pub const RANK_ATTEMPTS: usize = 4;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20240;

fn check_support(ty: &ParabolicType, f: &Polynomial) -> Result<()> {
    for v in f.vars() {
        if let Some((i, j)) = v.as_entry() {
            ty.require_nilradical(Root::new(i, j))?;
        }
    }
    Ok(())
}

/// `T f` for `g = 1 + t E_{k,k+1}`: substitutes each `x[i,j]` by entry
/// `(i,j)` of `(1 - t E_{k,k+1}) X (1 + t E_{k,k+1})`, i.e. row `k` gets
/// `-t` times row `k+1` and column `k+1` gets `t` times column `k`.
pub fn one_param_transform(ty: &ParabolicType, k: usize, f: &Polynomial) -> Result<Polynomial> {
    let n = ty.n();
    if k == 0 || k >= n {
        return Err(Error::InvalidArgument(format!(
            "subgroup index {k} outside 1..{}",
            n.saturating_sub(1)
        )));
    }
    check_support(ty, f)?;
    let t = Polynomial::var(Var::Deform);
    let x = |i: usize, j: usize| {
        if ty.in_nilradical(i, j) {
            Polynomial::x(i, j)
        } else {
            Polynomial::zero()
        }
    };
    let entry = |i: usize, j: usize| {
        let mut e = x(i, j);
        if i == k {
            e = &e - &(&t * &x(k + 1, j));
        }
        if j == k + 1 {
            e = &e + &(&t * &x(i, k));
        }
        if i == k && j == k + 1 {
            e = &e - &(&(&t * &t) * &x(k + 1, k));
        }
        e
    };
    // the conjugated matrix must stay in the nilradical
    for i in 1..=n {
        for j in 1..=n {
            if !ty.in_nilradical(i, j) && !entry(i, j).is_zero() {
                return Err(Error::SupportViolation(i, j));
            }
        }
    }
    let assignment: HashMap<Var, Polynomial> = f
        .vars()
        .into_iter()
        .filter_map(|v| v.as_entry().map(|(i, j)| (v, entry(i, j))))
        .filter(|(v, img)| *img != Polynomial::var(*v))
        .collect();
    Ok(f.substitute(&assignment))
}

/// Per-`k` invariance of `f`, for `k = 1..n-1`.
pub fn invariance_by_k(ty: &ParabolicType, f: &Polynomial) -> Result<Vec<bool>> {
    (1..ty.n())
        .map(|k| Ok(one_param_transform(ty, k, f)? == *f))
        .collect()
}

/// True iff `f` is fixed by every `1 + t E_{k,k+1}`; these generate `N`.
pub fn is_n_invariant(ty: &ParabolicType, f: &Polynomial) -> Result<bool> {
    Ok(invariance_by_k(ty, f)?.into_iter().all(|b| b))
}

/// Symbolic Jacobian `d f / d x` over the nilradical coordinates.
pub struct Jacobian {
    ty: ParabolicType,
    rows: Vec<Vec<Polynomial>>,
}

impl Jacobian {
    pub fn new(ty: &ParabolicType, polys: &[&Polynomial]) -> Self {
        let coords = nilradical_roots(ty);
        let rows = polys
            .par_iter()
            .map(|f| {
                coords
                    .iter()
                    .map(|r| f.derivative(Var::entry(r.i, r.j)))
                    .collect()
            })
            .collect();
        Jacobian {
            ty: ty.clone(),
            rows,
        }
    }

    pub fn max_rank(&self) -> usize {
        self.rows.len().min(nilradical_roots(&self.ty).len())
    }

    /// Rank at one random point per attempt, keeping the best of up to
    /// [`RANK_ATTEMPTS`] attempts.
    pub fn rank_at_seed(&self, seed: u64) -> usize {
        let mut sampler = Sampler::new(seed);
        let mut best = 0;
        for _ in 0..RANK_ATTEMPTS {
            let p = sampler.point(&self.ty);
            let m = RatMatrix::from_fn(
                self.rows.len(),
                self.rows.first().map_or(0, Vec::len),
                |a, b| self.rows[a][b].eval(|v| p.value(v)),
            );
            best = best.max(rank(&m));
            if best == self.max_rank() {
                break;
            }
        }
        best
    }
}

/// Jacobian rank of `polys` at seeded random points. Equal to `polys.len()`
/// certifies algebraic independence; a smaller value means dependent or an
/// unlucky sample.
pub fn independence_rank(ty: &ParabolicType, polys: &[&Polynomial], seed: u64) -> usize {
    Jacobian::new(ty, polys).rank_at_seed(seed)
}

fn weight_rank(weights: impl Iterator<Item = (usize, usize)>, n: usize) -> (usize, usize) {
    let rows: Vec<Vec<_>> = weights
        .map(|(a, b)| {
            let mut v = vec![crate::exactpoly::rat(0); n];
            v[a - 1] += crate::exactpoly::rat(1);
            v[b - 1] -= crate::exactpoly::rat(1);
            v
        })
        .collect();
    let count = rows.len();
    if count == 0 {
        return (0, 0);
    }
    let m = RatMatrix::from_rows(rows).expect("rows have equal length");
    (count, rank(&m))
}

/// `|Q|` minus the rank of the weights `e_b - e_a'` of the roots `alpha_q`.
pub fn weight_corank(pairs: &[AdmissiblePair], n: usize) -> usize {
    let (count, r) = weight_rank(pairs.iter().map(|q| (q.alpha.i, q.alpha.j)), n);
    count - r
}

/// `|X|` minus the rank of the weights `e_i - e_j` of the roots in `X`.
pub fn root_corank(roots: &[Root], n: usize) -> usize {
    let (count, r) = weight_rank(roots.iter().map(|r| (r.i, r.j)), n);
    count - r
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvarianceResult {
    pub id: String,
    /// Entry `k-1` is true iff the generator is fixed by `1 + t E_{k,k+1}`.
    pub by_k: Vec<bool>,
    pub invariant: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankResult {
    pub seed: u64,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorankResult {
    /// Corank of the weights of the `alpha_q`.
    pub pairs: usize,
    /// Corank of the weights of `S ∪ Phi`.
    pub slice: usize,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trdeg {
    /// `|S| + |Q|`
    pub unipotent: usize,
    /// corank of the `alpha_q` weights
    pub borel: usize,
    /// corank of the weights of `S ∪ Phi`
    pub borel_slice: usize,
    /// `dim m` minus the largest sampled `N`-orbit dimension.
    pub unipotent_sampled: usize,
    /// `dim m` minus the largest sampled orbit dimension of the upper
    /// triangular group.
    pub borel_sampled: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checks {
    pub invariance: bool,
    pub independence: bool,
    pub restriction: bool,
    pub corank: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    #[serde(rename = "type")]
    pub parabolic_type: Vec<usize>,
    pub seeds: Vec<u64>,
    pub invariance: Vec<InvarianceResult>,
    pub independence: Vec<RankResult>,
    pub expected_rank: usize,
    pub restriction: Vec<RestrictionCheck>,
    pub corank: CorankResult,
    pub trdeg: Trdeg,
    pub checks: Checks,
    pub pass: bool,
}

/// Seeds `seed, seed+1, ..., seed+count-1`.
pub fn seed_run(seed: u64, count: usize) -> Vec<u64> {
    (0..count as u64).map(|d| seed.wrapping_add(d)).collect()
}

/// Invariance of every generator (extras included), independence of the
/// core generators at each seed, restriction forms and coranks.
pub fn verify(ty: &ParabolicType, seeds: &[u64]) -> VerificationReport {
    let set = GeneratorSet::build(ty);
    verify_set(&set, seeds)
}

pub fn verify_set(set: &GeneratorSet, seeds: &[u64]) -> VerificationReport {
    let ty = set.parabolic_type();
    let n = ty.n();
    let invariance: Vec<InvarianceResult> = set
        .all()
        .par_iter()
        .map(|(id, f)| {
            let by_k = invariance_by_k(ty, f).expect("generators live on the nilradical");
            InvarianceResult {
                id: id.to_string(),
                invariant: by_k.iter().all(|&b| b),
                by_k,
            }
        })
        .collect();
    let core: Vec<&Polynomial> = set.generators().into_iter().map(|(_, p)| p).collect();
    let expected_rank = core.len();
    let jac = Jacobian::new(ty, &core);
    let independence: Vec<RankResult> = seeds
        .par_iter()
        .map(|&seed| RankResult {
            seed,
            rank: jac.rank_at_seed(seed),
        })
        .collect();
    let restriction = set.restriction_forms();
    let pairs_corank = weight_corank(set.pairs(), n);
    let mut slice: Vec<Root> = set.base().roots().to_vec();
    slice.extend(set.phi_set());
    slice.sort();
    slice.dedup();
    let slice_corank = root_corank(&slice, n);
    let dim_m = nilradical_roots(ty).len();
    let (n_orbit, b_orbit) = seeds
        .par_iter()
        .map(|&seed| {
            let x = Sampler::new(seed).point(ty);
            (orbit_dim(&x), borel_orbit_dim(&x))
        })
        .reduce(|| (0, 0), |a, b| (a.0.max(b.0), a.1.max(b.1)));
    let checks = Checks {
        invariance: invariance.iter().all(|r| r.invariant),
        independence: !independence.is_empty()
            && independence.iter().all(|r| r.rank == expected_rank),
        restriction: restriction.iter().all(RestrictionCheck::pass),
        corank: pairs_corank == slice_corank,
    };
    VerificationReport {
        parabolic_type: ty.sizes().to_vec(),
        seeds: seeds.to_vec(),
        invariance,
        independence,
        expected_rank,
        restriction,
        corank: CorankResult {
            pairs: pairs_corank,
            slice: slice_corank,
            equal: checks.corank,
        },
        trdeg: Trdeg {
            unipotent: expected_rank,
            borel: pairs_corank,
            borel_slice: slice_corank,
            unipotent_sampled: dim_m - n_orbit,
            borel_sampled: dim_m - b_orbit,
        },
        pass: checks.invariance && checks.independence && checks.restriction && checks.corank,
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootcomb::{admissible_pairs, compute_base};

    fn ty(s: &str) -> ParabolicType {
        s.parse().unwrap()
    }

    #[test]
    fn transform_examples() {
        let t = ty("2,4,2");
        let f = Polynomial::x(2, 4);
        let g = one_param_transform(&t, 3, &f).unwrap();
        assert_eq!(g.to_string(), "x[2,3]*t + x[2,4]");
        assert!(!is_n_invariant(&t, &f).unwrap());
        assert!(is_n_invariant(&t, &Polynomial::one()).unwrap());
        assert!(one_param_transform(&t, 0, &f).is_err());
        assert!(one_param_transform(&t, 8, &f).is_err());
        assert!(one_param_transform(&t, 1, &Polynomial::x(3, 4)).is_err());
    }

    #[test]
    fn independence_small() {
        let t = ty("1,1");
        let x = Polynomial::x(1, 2);
        assert_eq!(independence_rank(&t, &[&x], 1), 1);
        let sq = &x * &x;
        assert_eq!(independence_rank(&t, &[&x, &sq], 1), 1);
    }

    #[test]
    fn coranks() {
        let t = ty("2,4,2");
        let pairs = admissible_pairs(&t, &compute_base(&t));
        assert_eq!(weight_corank(&pairs, 8), 1);
        let t = ty("2,2,2,1,1");
        let pairs = admissible_pairs(&t, &compute_base(&t));
        assert_eq!(weight_corank(&pairs, 8), 0);
        assert_eq!(weight_corank(&[], 3), 0);
        assert_eq!(
            root_corank(&[Root::new(1, 2), Root::new(2, 3), Root::new(1, 3)], 3),
            1
        );
    }

    #[test]
    fn verify_small_type() {
        let r = verify(&ty("2,2,1,1"), &seed_run(DEFAULT_SEED, 3));
        assert!(r.pass, "{r:?}");
        assert_eq!(r.expected_rank, 5);
        assert_eq!(r.invariance.len(), 5);
    }
}
