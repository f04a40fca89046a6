//! The adjoint action of `N` on points of the nilradical: orbit dimensions
//! and reduction of points in `U0` to the slice `Y`.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::{format_rational, rank, MatrixPoint, PointDoc, RatMatrix, Rational};
use crate::invgen::{first_vanishing_base_minor, GeneratorSet, SliceSolver};
use crate::rootcomb::{dims, nilradical_roots, Dims, ParabolicType, Root};
use crate::sampling::Sampler;

/// An element of `N`: an upper unitriangular rational matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement(RatMatrix);

impl GroupElement {
    pub fn new(m: RatMatrix) -> Result<Self> {
        if m.is_upper_unitriangular() {
            Ok(GroupElement(m))
        } else {
            Err(Error::NotUnitriangular)
        }
    }

    pub fn identity(n: usize) -> Self {
        GroupElement(RatMatrix::identity(n))
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.rows()
    }

    pub fn inverse(&self) -> Self {
        GroupElement(self.0.unitriangular_inverse().expect("unitriangular"))
    }

    pub fn compose(&self, other: &GroupElement) -> Self {
        GroupElement(self.0.mul(&other.0).expect("same size"))
    }

    /// Dense rows of rational strings.
    pub fn to_rows(&self) -> Vec<Vec<String>> {
        (0..self.n())
            .map(|i| self.0.row(i).iter().map(format_rational).collect())
            .collect()
    }
}

/// `g x g^-1`, checked to stay on the nilradical.
pub fn adjoint(g: &GroupElement, x: &MatrixPoint) -> Result<MatrixPoint> {
    if g.n() != x.n() {
        return Err(Error::DimensionMismatch {
            expected: x.n(),
            got: g.n(),
        });
    }
    let gx = g.0.mul(x.matrix())?;
    let y = gx.mul(&g.inverse().0)?;
    MatrixPoint::new(x.parabolic_type(), y)
}

fn bracket_rank(x: &MatrixPoint, torus: bool) -> usize {
    let ty = x.parabolic_type();
    let n = ty.n();
    let coords = nilradical_roots(ty);
    let mut rows = Vec::new();
    for a in 1..=n {
        let first = if torus { a } else { a + 1 };
        for b in first..=n {
            // [E_ab, x] = E_ab x - x E_ab: row b of x moved to row a, minus
            // column a of x moved to column b
            let row: Vec<Rational> = coords
                .iter()
                .map(|r| {
                    let mut v = Rational::zero();
                    if r.i == a {
                        v += x.at(b, r.j);
                    }
                    if r.j == b {
                        v -= x.at(r.i, a);
                    }
                    v
                })
                .collect();
            rows.push(row);
        }
    }
    if rows.is_empty() || coords.is_empty() {
        return 0;
    }
    rank(&RatMatrix::from_rows(rows).expect("rectangular"))
}

/// Rank of `a -> [a, x]` from the strictly upper triangular matrices to the
/// nilradical coordinates.
pub fn orbit_dim(x: &MatrixPoint) -> usize {
    bracket_rank(x, false)
}

/// Same with the diagonal matrices added: the dimension of the orbit of
/// the full upper triangular group.
pub fn borel_orbit_dim(x: &MatrixPoint) -> usize {
    bracket_rank(x, true)
}

/// Sampled maximal orbit dimension versus `dim m - |S| - |Q|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitDimRecord {
    #[serde(rename = "type")]
    pub parabolic_type: Vec<usize>,
    pub seed: u64,
    pub trials: usize,
    pub dims: Dims,
    pub max_rank: usize,
    pub predicted: usize,
    /// Reduction to the slice is established for this type.
    pub covered: bool,
    /// The sample exceeded the prediction.
    pub flagged: bool,
    pub pass: bool,
}

pub fn max_orbit_dim(ty: &ParabolicType, trials: usize, seed: u64) -> Result<OrbitDimRecord> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let mut sampler = Sampler::new(seed);
    let max_rank = (0..trials)
        .map(|_| orbit_dim(&sampler.point(ty)))
        .max()
        .unwrap_or(0);
    let d = dims(ty);
    let predicted = d.predicted_regular_orbit_dim;
    let covered = ty.has_unique_slice();
    let flagged = max_rank > predicted;
    Ok(OrbitDimRecord {
        parabolic_type: ty.sizes().to_vec(),
        seed,
        trials,
        dims: d,
        max_rank,
        predicted,
        covered,
        flagged,
        pass: if covered {
            max_rank == predicted
        } else {
            !flagged
        },
    })
}

/// Applies `Ad(1 + t E_kl)` (1-based, `k < l`) to `x` in place and
/// accumulates the factor into `g`.
fn conjugate_elementary(x: &mut RatMatrix, g: &mut RatMatrix, k: usize, l: usize, t: &Rational) {
    let n = x.rows();
    let (k, l) = (k - 1, l - 1);
    for j in 0..n {
        let v = x.get(k, j) + t * x.get(l, j);
        x.set(k, j, v);
        let v = g.get(k, j) + t * g.get(l, j);
        g.set(k, j, v);
    }
    for i in 0..n {
        let v = x.get(i, l) - t * x.get(i, k);
        x.set(i, l, v);
    }
}

/// Finds `g` in `N` with `g A g^-1` supported on `S ∪ Phi`.
///
/// Rows are swept from the bottom up, left to right. An entry off the slice
/// is cleared from the base position below it in its column when there is
/// one, and otherwise from the base position to its left in its row. Sweeps
/// repeat until nothing is left to clear.
pub fn reduce_to_canonical(
    set: &GeneratorSet,
    a: &MatrixPoint,
) -> Result<(GroupElement, MatrixPoint)> {
    let ty = set.parabolic_type();
    if !ty.has_unique_slice() {
        return Err(Error::UnsupportedType(ty.to_string()));
    }
    if a.parabolic_type() != ty {
        return Err(Error::DimensionMismatch {
            expected: ty.n(),
            got: a.n(),
        });
    }
    if let Some(xi) = first_vanishing_base_minor(set.base(), a) {
        return Err(Error::OutsideU0(xi));
    }
    let n = ty.n();
    let base = set.base();
    let mut keep = vec![false; n * n];
    for r in base.roots().iter().copied().chain(set.phi_set()) {
        keep[(r.i - 1) * n + r.j - 1] = true;
    }
    let mut x = a.matrix().clone();
    let mut g = RatMatrix::identity(n);
    let max_sweeps = 2 * n + 2;
    for _ in 0..max_sweeps {
        let mut dirty = false;
        for i in (1..=n).rev() {
            for j in 1..=n {
                if keep[(i - 1) * n + j - 1] || x.get(i - 1, j - 1).is_zero() {
                    continue;
                }
                dirty = true;
                let below = base
                    .in_column(j)
                    .filter(|p| p.i > i && !x.get(p.i - 1, j - 1).is_zero());
                let left = base
                    .in_row(i)
                    .filter(|p| p.j < j && !x.get(i - 1, p.j - 1).is_zero());
                if let Some(p) = below {
                    let t = -(x.get(i - 1, j - 1) / x.get(p.i - 1, j - 1));
                    conjugate_elementary(&mut x, &mut g, i, p.i, &t);
                } else if let Some(p) = left {
                    let t = x.get(i - 1, j - 1) / x.get(i - 1, p.j - 1);
                    conjugate_elementary(&mut x, &mut g, p.j, j, &t);
                } else {
                    return Err(Error::ReductionFailed(format!("no pivot clears ({i},{j})")));
                }
            }
        }
        if !dirty {
            let g = GroupElement::new(g)?;
            let y = MatrixPoint::new(ty, x)?;
            if adjoint(&g, a)? != y {
                return Err(Error::ReductionFailed("conjugation check failed".into()));
            }
            return Ok((g, y));
        }
    }
    Err(Error::ReductionFailed(format!(
        "not reduced after {max_sweeps} sweeps"
    )))
}

/// Outcome of reducing one point and cross-checking it against the
/// coordinates recovered from its invariants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionReport {
    #[serde(rename = "type")]
    pub parabolic_type: Vec<usize>,
    pub input: PointDoc,
    pub g: Vec<Vec<String>>,
    pub y: PointDoc,
    pub on_slice: bool,
    /// Generators whose value changed, by label.
    pub changed: Vec<String>,
    pub invariants_preserved: bool,
    pub matches_slice_coordinates: bool,
    pub idempotent: bool,
    pub pass: bool,
}

/// Reduces `a` and checks that the generators agree on `a` and `y`, that `y`
/// is the point recovered from those values, and that `y` reduces to itself.
pub fn verify_unique_intersection(
    set: &GeneratorSet,
    solver: &SliceSolver,
    a: &MatrixPoint,
) -> Result<ReductionReport> {
    let (g, y) = reduce_to_canonical(set, a)?;
    let before = set.evaluate(a);
    let after = set.evaluate(&y);
    let changed: Vec<String> = before
        .iter()
        .filter(|(id, v)| after.get(*id) != Some(*v))
        .map(|(id, _)| id.to_string())
        .collect();
    let mut slice: Vec<Root> = set.base().roots().to_vec();
    slice.extend(set.phi_set());
    let on_slice = y.support().iter().all(|r| slice.contains(r));
    let recovered = solver.solve(&before)?;
    let (_, again) = reduce_to_canonical(set, &y)?;
    let invariants_preserved = changed.is_empty();
    let matches_slice_coordinates = recovered == y;
    let idempotent = again == y;
    Ok(ReductionReport {
        parabolic_type: set.parabolic_type().sizes().to_vec(),
        input: a.to_doc(),
        g: g.to_rows(),
        y: y.to_doc(),
        on_slice,
        changed,
        invariants_preserved,
        matches_slice_coordinates,
        idempotent,
        pass: on_slice && invariants_preserved && matches_slice_coordinates && idempotent,
    })
}

/// Generator values keyed by label, for reports.
pub fn labelled_values(set: &GeneratorSet, x: &MatrixPoint) -> BTreeMap<String, String> {
    set.evaluate(x)
        .into_iter()
        .map(|(id, v)| (id.to_string(), format_rational(&v)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat;

    fn ty(s: &str) -> ParabolicType {
        s.parse().unwrap()
    }

    #[test]
    fn group_element_validation() {
        let mut m = RatMatrix::identity(3);
        m.set(0, 2, rat(4));
        assert!(GroupElement::new(m.clone()).is_ok());
        m.set(2, 0, rat(1));
        assert_eq!(GroupElement::new(m), Err(Error::NotUnitriangular));
    }

    #[test]
    fn adjoint_identity_and_composition() {
        let t = ty("2,4,2");
        let mut s = Sampler::new(3);
        let x = s.point(&t);
        assert_eq!(adjoint(&GroupElement::identity(8), &x).unwrap(), x);
        let g = GroupElement::new(s.unitriangular(8)).unwrap();
        let h = GroupElement::new(s.unitriangular(8)).unwrap();
        let lhs = adjoint(&g, &adjoint(&h, &x).unwrap()).unwrap();
        assert_eq!(lhs, adjoint(&g.compose(&h), &x).unwrap());
    }

    #[test]
    fn orbit_dims() {
        let t = ty("2,4,2");
        assert_eq!(orbit_dim(&MatrixPoint::zero(&t)), 0);
        let mut s = Sampler::new(5);
        let set = GeneratorSet::build(&t);
        assert_eq!(orbit_dim(&s.u0_point(&t, set.base()).unwrap()), 12);
        assert_eq!(max_orbit_dim(&ty("1,1,1,1"), 10, 1).unwrap().max_rank, 3);
        let r = max_orbit_dim(&ty("6"), 3, 1).unwrap();
        assert_eq!((r.max_rank, r.pass), (0, true));
        assert!(max_orbit_dim(&t, 0, 1).is_err());
    }

    #[test]
    fn reduce_2_2() {
        let t = ty("2,2");
        let set = GeneratorSet::build(&t);
        let a = MatrixPoint::from_entries(
            &t,
            [
                (Root::new(1, 3), rat(2)),
                (Root::new(1, 4), rat(-3)),
                (Root::new(2, 3), rat(5)),
                (Root::new(2, 4), rat(7)),
            ],
        )
        .unwrap();
        let (_, y) = reduce_to_canonical(&set, &a).unwrap();
        assert_eq!(y.at(2, 3), &rat(5));
        // -(a13 a24 - a14 a23) / a23
        assert_eq!(y.at(1, 4), &(-(rat(14) + rat(15)) / rat(5)));
        assert_eq!(y.support().len(), 2);
    }

    #[test]
    fn reduce_errors() {
        let t = ty("2,2");
        let set = GeneratorSet::build(&t);
        let a =
            MatrixPoint::from_entries(&t, [(Root::new(1, 3), rat(1)), (Root::new(2, 4), rat(1))])
                .unwrap();
        assert_eq!(
            reduce_to_canonical(&set, &a),
            Err(Error::OutsideU0(Root::new(2, 3)))
        );
        let u = ty("1,1,2,1");
        let set = GeneratorSet::build(&u);
        assert!(matches!(
            reduce_to_canonical(&set, &MatrixPoint::zero(&u)),
            Err(Error::UnsupportedType(_))
        ));
    }

    #[test]
    fn unique_intersection_small_batch() {
        for s in ["2,2,1,1", "3,2,1", "2,4,2"] {
            let t = ty(s);
            let set = GeneratorSet::build(&t);
            let solver = SliceSolver::new(&set).unwrap();
            let mut sampler = Sampler::new(11);
            for _ in 0..5 {
                let a = sampler.u0_point(&t, set.base()).unwrap();
                let r = verify_unique_intersection(&set, &solver, &a).unwrap();
                assert!(r.pass, "{s}: {r:?}");
            }
        }
    }
}
