//! Invariant generators: the formal matrix, the base minors `M_gamma`, the
//! pair polynomials `L_q`, minors of matrix powers, restriction to the slice
//! `Y` (matrices supported on `S ∪ Phi`) and recovery of slice coordinates
//! from invariant values.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::{det_bareiss, MatrixPoint, Monomial, PolyMatrix, Polynomial, Rational, Var};
use crate::rootcomb::{
    admissible_pairs, compute_base, s_gamma, AdmissiblePair, Base, ParabolicType, Root,
};

/// Identifies a generator within a [`GeneratorSet`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorId {
    /// `M_xi` for a base root.
    Base(Root),
    /// `L_q` for the pair `(xi, xi')`.
    Pair(Root, Root),
    Extra(String),
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorId::Base(r) => write!(f, "M({},{})", r.i, r.j),
            GeneratorId::Pair(a, b) => write!(f, "L({},{};{},{})", a.i, a.j, b.i, b.j),
            GeneratorId::Extra(name) => write!(f, "{name}"),
        }
    }
}

impl GeneratorId {
    pub fn pair(q: &AdmissiblePair) -> Self {
        GeneratorId::Pair(q.xi, q.xi_prime)
    }

    fn kind(&self) -> &'static str {
        match self {
            GeneratorId::Base(_) => "base",
            GeneratorId::Pair(..) => "pair",
            GeneratorId::Extra(_) => "extra",
        }
    }
}

/// `X`: variable `x[i,j]` at every nilradical position, zero elsewhere.
pub fn formal_matrix(ty: &ParabolicType) -> PolyMatrix {
    PolyMatrix::from_fn(ty.n(), ty.n(), |i, j| {
        if ty.in_nilradical(i + 1, j + 1) {
            Polynomial::x(i + 1, j + 1)
        } else {
            Polynomial::zero()
        }
    })
}

/// Rows `ord{a, i_1..i_k}` and columns `ord{j_1..j_k, b}` of `M_gamma`,
/// 1-based, where `(i_t, j_t)` run over `S_gamma`.
pub fn minor_indices(base: &Base, gamma: Root) -> (Vec<usize>, Vec<usize>) {
    let inside = s_gamma(base, gamma);
    let mut rows: Vec<usize> = std::iter::once(gamma.i)
        .chain(inside.iter().map(|r| r.i))
        .collect();
    let mut cols: Vec<usize> = inside
        .iter()
        .map(|r| r.j)
        .chain(std::iter::once(gamma.j))
        .collect();
    rows.sort_unstable();
    cols.sort_unstable();
    (rows, cols)
}

fn zero_based(idx: &[usize]) -> Vec<usize> {
    idx.iter().map(|&k| k - 1).collect()
}

fn minor_of(x: &PolyMatrix, base: &Base, gamma: Root) -> Polynomial {
    let (rows, cols) = minor_indices(base, gamma);
    let sub = x
        .submatrix(&zero_based(&rows), &zero_based(&cols))
        .expect("minor indices are ascending and in range");
    det_bareiss(&sub)
}

/// `M_gamma` for a nilradical root `gamma`.
pub fn minor_poly(ty: &ParabolicType, base: &Base, gamma: Root) -> Result<Polynomial> {
    ty.require_nilradical(gamma)?;
    Ok(minor_of(&formal_matrix(ty), base, gamma))
}

fn l_of(x: &PolyMatrix, base: &Base, q: &AdmissiblePair) -> Polynomial {
    let (a, b) = (q.xi.i, q.xi.j);
    let (a2, b2) = (q.xi_prime.i, q.xi_prime.j);
    (b..=a2)
        .map(|c| &minor_of(x, base, Root::new(a, c)) * &minor_of(x, base, Root::new(c, b2)))
        .sum()
}

/// `L_q = sum over c in [b, a'] of M_(a,c) * M_(c,b')` for `q = ((a,b), (a',b'))`,
/// i.e. over all splittings of `alpha_q` into two roots of the reductive part
/// (either may be zero).
pub fn l_poly(ty: &ParabolicType, base: &Base, q: &AdmissiblePair) -> Result<Polynomial> {
    if !admissible_pairs(ty, base).contains(q) {
        return Err(Error::NotAdmissible(q.xi, q.xi_prime));
    }
    Ok(l_of(&formal_matrix(ty), base, q))
}

/// Minor on 1-based `rows` x `cols` of the `k`-th power of `X`.
pub fn power_minor(
    ty: &ParabolicType,
    k: u32,
    rows: &[usize],
    cols: &[usize],
) -> Result<Polynomial> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "matrix power must be at least 1".into(),
        ));
    }
    if rows.len() != cols.len() {
        return Err(Error::RaggedMinor {
            rows: rows.len(),
            cols: cols.len(),
        });
    }
    if rows.iter().chain(cols).any(|&i| i == 0) {
        return Err(Error::BadIndexSet);
    }
    let x = formal_matrix(ty);
    let mut p = x.clone();
    for _ in 1..k {
        p = p.mul(&x)?;
    }
    p.minor(&zero_based(rows), &zero_based(cols))
}

/// Sets to zero every entry variable outside `S ∪ phi_set`.
pub fn restrict(ty: &ParabolicType, base: &Base, phi_set: &[Root], f: &Polynomial) -> Polynomial {
    let zeros: HashMap<Var, Polynomial> = f
        .vars()
        .into_iter()
        .filter(|v| match v.as_entry() {
            Some((i, j)) => {
                let r = Root::new(i, j);
                ty.in_nilradical(i, j) && !base.contains(r) && !phi_set.contains(&r)
            }
            None => false,
        })
        .map(|v| (v, Polynomial::zero()))
        .collect();
    f.substitute(&zeros)
}

/// Numeric value of `M_gamma` at a point.
pub fn minor_value(base: &Base, point: &MatrixPoint, gamma: Root) -> Rational {
    let (rows, cols) = minor_indices(base, gamma);
    point
        .matrix()
        .minor(&zero_based(&rows), &zero_based(&cols))
        .expect("minor indices are ascending and in range")
}

/// First base root (by row) whose minor vanishes at `point`.
pub fn first_vanishing_base_minor(base: &Base, point: &MatrixPoint) -> Option<Root> {
    base.roots()
        .iter()
        .copied()
        .find(|&xi| minor_value(base, point, xi).is_zero())
}

/// The generators `M_xi` (xi in S) and `L_q` (q in Q) of a type, plus named
/// extras (only `D` for type `(2,4,2)`).
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    ty: ParabolicType,
    base: Base,
    pairs: Vec<AdmissiblePair>,
    formal: PolyMatrix,
    base_minors: Vec<(Root, Polynomial)>,
    pair_polys: Vec<(AdmissiblePair, Polynomial)>,
    extras: Vec<(String, Polynomial)>,
}

impl GeneratorSet {
    pub fn build(ty: &ParabolicType) -> Self {
        let base = compute_base(ty);
        let pairs = admissible_pairs(ty, &base);
        let formal = formal_matrix(ty);
        let base_minors = base
            .roots()
            .iter()
            .map(|&xi| (xi, minor_of(&formal, &base, xi)))
            .collect();
        let pair_polys = pairs
            .iter()
            .map(|q| (*q, l_of(&formal, &base, q)))
            .collect();
        let mut extras = Vec::new();
        if ty.sizes() == [2, 4, 2] {
            let d = power_minor(ty, 2, &[1, 2], &[7, 8]).expect("valid minor of X^2");
            extras.push(("D".to_string(), d));
        }
        GeneratorSet {
            ty: ty.clone(),
            base,
            pairs,
            formal,
            base_minors,
            pair_polys,
            extras,
        }
    }

    pub fn parabolic_type(&self) -> &ParabolicType {
        &self.ty
    }

    pub fn base(&self) -> &Base {
        &self.base
    }

    pub fn pairs(&self) -> &[AdmissiblePair] {
        &self.pairs
    }

    pub fn formal_matrix(&self) -> &PolyMatrix {
        &self.formal
    }

    pub fn base_minors(&self) -> &[(Root, Polynomial)] {
        &self.base_minors
    }

    pub fn pair_polys(&self) -> &[(AdmissiblePair, Polynomial)] {
        &self.pair_polys
    }

    pub fn extras(&self) -> &[(String, Polynomial)] {
        &self.extras
    }

    /// `M_gamma` from the cached formal matrix.
    pub fn minor(&self, gamma: Root) -> Result<Polynomial> {
        self.ty.require_nilradical(gamma)?;
        Ok(minor_of(&self.formal, &self.base, gamma))
    }

    pub fn phi_set(&self) -> Vec<Root> {
        self.pairs.iter().map(|q| q.phi).collect()
    }

    /// `M_xi` then `L_q`, without extras.
    pub fn generators(&self) -> Vec<(GeneratorId, &Polynomial)> {
        let m = self
            .base_minors
            .iter()
            .map(|(xi, p)| (GeneratorId::Base(*xi), p));
        let l = self
            .pair_polys
            .iter()
            .map(|(q, p)| (GeneratorId::pair(q), p));
        m.chain(l).collect()
    }

    /// Core generators followed by extras.
    pub fn all(&self) -> Vec<(GeneratorId, &Polynomial)> {
        let mut v = self.generators();
        v.extend(
            self.extras
                .iter()
                .map(|(name, p)| (GeneratorId::Extra(name.clone()), p)),
        );
        v
    }

    pub fn get(&self, id: &GeneratorId) -> Option<&Polynomial> {
        self.all()
            .into_iter()
            .find(|(g, _)| g == id)
            .map(|(_, p)| p)
    }

    /// Values of the core generators at a point.
    pub fn evaluate(&self, point: &MatrixPoint) -> BTreeMap<GeneratorId, Rational> {
        self.generators()
            .into_iter()
            .map(|(id, p)| (id, p.eval(|v| point.value(v))))
            .collect()
    }

    pub fn restrict(&self, f: &Polynomial) -> Polynomial {
        restrict(&self.ty, &self.base, &self.phi_set(), f)
    }

    /// Checks that each restricted generator is `±` the expected monomial:
    /// `x_xi * prod_{S_xi} x` for base minors and
    /// `x_phi * x_xi * prod_{S_xi} x * prod_{S_xi'} x` for pair polynomials.
    pub fn restriction_forms(&self) -> Vec<RestrictionCheck> {
        let prod = |roots: Vec<Root>| -> Vec<(Var, u32)> {
            roots
                .into_iter()
                .map(|r| (Var::entry(r.i, r.j), 1))
                .collect()
        };
        let mut out = Vec::new();
        for (xi, p) in &self.base_minors {
            let mut f = prod(s_gamma(&self.base, *xi));
            f.push((Var::entry(xi.i, xi.j), 1));
            out.push(RestrictionCheck::new(
                GeneratorId::Base(*xi),
                self.restrict(p),
                Monomial::from_factors(f),
            ));
        }
        for (q, p) in &self.pair_polys {
            let mut f = prod(s_gamma(&self.base, q.xi));
            f.extend(prod(s_gamma(&self.base, q.xi_prime)));
            f.push((Var::entry(q.xi.i, q.xi.j), 1));
            f.push((Var::entry(q.phi.i, q.phi.j), 1));
            out.push(RestrictionCheck::new(
                GeneratorId::pair(q),
                self.restrict(p),
                Monomial::from_factors(f),
            ));
        }
        out
    }

    pub fn to_doc(&self) -> GeneratorSetDoc {
        GeneratorSetDoc {
            parabolic_type: self.ty.sizes().to_vec(),
            base: self.base.roots().to_vec(),
            pairs: self.pairs.clone(),
            generators: self
                .all()
                .into_iter()
                .map(|(id, p)| GeneratorEntry {
                    kind: id.kind().to_string(),
                    id: id.to_string(),
                    poly: p.to_string(),
                })
                .collect(),
        }
    }

    /// Two-column LaTeX table, one generator per row.
    pub fn to_latex(&self) -> String {
        let mut out = String::from("\\begin{tabular}{r@{\\;=\\;}l}\n");
        for (id, p) in self.all() {
            let name = match &id {
                GeneratorId::Base(r) => format!("M_{{({},{})}}", r.i, r.j),
                GeneratorId::Pair(a, b) => {
                    format!("L_{{({},{}),({},{})}}", a.i, a.j, b.i, b.j)
                }
                GeneratorId::Extra(n) => n.clone(),
            };
            out.push_str(&format!("${name}$ & ${}$\\\\\n", p.to_latex()));
        }
        out.push_str("\\end{tabular}\n");
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictionCheck {
    pub id: String,
    pub image: String,
    pub expected: String,
    /// `+1` or `-1` when the image is `±expected`, `0` otherwise.
    pub sign: i8,
}

impl RestrictionCheck {
    fn new(id: GeneratorId, image: Polynomial, expected: Monomial) -> Self {
        let sign = match image.as_single_term() {
            Some((m, c)) if *m == expected && c.is_one() => 1,
            Some((m, c)) if *m == expected && (-c).is_one() => -1,
            _ => 0,
        };
        RestrictionCheck {
            id: id.to_string(),
            image: image.to_string(),
            expected: expected.to_string(),
            sign,
        }
    }

    pub fn pass(&self) -> bool {
        self.sign != 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorEntry {
    pub id: String,
    pub kind: String,
    pub poly: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSetDoc {
    #[serde(rename = "type")]
    pub parabolic_type: Vec<usize>,
    pub base: Vec<Root>,
    pub pairs: Vec<AdmissiblePair>,
    pub generators: Vec<GeneratorEntry>,
}

/// One step of the triangular solve: `value(id) = coeff * fresh * rest`.
#[derive(Clone, Debug)]
struct SliceEquation {
    id: GeneratorId,
    fresh: Root,
    coeff: Rational,
    rest: Vec<(Root, u32)>,
}

/// Solves for the slice point with prescribed generator values, using the
/// restricted generators: each is a monomial that is linear in one fresh
/// slice variable.
#[derive(Clone, Debug)]
pub struct SliceSolver {
    ty: ParabolicType,
    base_ids: Vec<(Root, GeneratorId)>,
    order: Vec<SliceEquation>,
}

impl SliceSolver {
    pub fn new(set: &GeneratorSet) -> Result<Self> {
        let ty = set.parabolic_type();
        if !ty.has_unique_slice() {
            return Err(Error::UnsupportedType(ty.to_string()));
        }
        let mut pending: Vec<SliceEquation> = Vec::new();
        let targets = set
            .base_minors()
            .iter()
            .map(|(xi, p)| (GeneratorId::Base(*xi), *xi, p))
            .chain(
                set.pair_polys()
                    .iter()
                    .map(|(q, p)| (GeneratorId::pair(q), q.phi, p)),
            );
        for (id, fresh, p) in targets {
            let image = set.restrict(p);
            let (m, c) = image
                .as_single_term()
                .ok_or_else(|| Error::NotMonomial(id.to_string()))?;
            let fresh_var = Var::entry(fresh.i, fresh.j);
            if m.exponent(fresh_var) != 1 {
                return Err(Error::NotMonomial(id.to_string()));
            }
            let rest = m
                .factors()
                .iter()
                .filter(|&&(v, _)| v != fresh_var)
                .map(|&(v, e)| {
                    let (i, j) = v
                        .as_entry()
                        .expect("restricted generators use entries only");
                    (Root::new(i, j), e)
                })
                .collect();
            pending.push(SliceEquation {
                id,
                fresh,
                coeff: c.clone(),
                rest,
            });
        }
        // order so that every equation only uses already-solved variables
        let mut solved: Vec<Root> = Vec::new();
        let mut order = Vec::with_capacity(pending.len());
        while !pending.is_empty() {
            let k = pending
                .iter()
                .position(|eq| eq.rest.iter().all(|(r, _)| solved.contains(r)))
                .ok_or_else(|| Error::NotMonomial(pending[0].id.to_string()))?;
            let eq = pending.remove(k);
            solved.push(eq.fresh);
            order.push(eq);
        }
        Ok(SliceSolver {
            ty: ty.clone(),
            base_ids: set
                .base()
                .roots()
                .iter()
                .map(|&xi| (xi, GeneratorId::Base(xi)))
                .collect(),
            order,
        })
    }

    pub fn solve(&self, values: &BTreeMap<GeneratorId, Rational>) -> Result<MatrixPoint> {
        let lookup = |id: &GeneratorId| {
            values
                .get(id)
                .ok_or_else(|| Error::MissingValue(id.to_string()))
        };
        for (xi, id) in &self.base_ids {
            if lookup(id)?.is_zero() {
                return Err(Error::OutsideU0(*xi));
            }
        }
        let mut coords: BTreeMap<Root, Rational> = BTreeMap::new();
        for eq in &self.order {
            let mut denom = eq.coeff.clone();
            for (r, e) in &eq.rest {
                let v = &coords[r];
                denom *= num_traits::pow(v.clone(), *e as usize);
            }
            if denom.is_zero() {
                // only reachable when a base coordinate vanished
                let culprit = eq
                    .rest
                    .iter()
                    .find(|(r, _)| coords[r].is_zero())
                    .map(|(r, _)| *r);
                return Err(Error::OutsideU0(culprit.unwrap_or(eq.fresh)));
            }
            coords.insert(eq.fresh, lookup(&eq.id)? / denom);
        }
        MatrixPoint::from_entries(&self.ty, coords)
    }
}

/// The unique slice point whose generator values are `values`.
pub fn y_coordinates(
    set: &GeneratorSet,
    values: &BTreeMap<GeneratorId, Rational>,
) -> Result<MatrixPoint> {
    SliceSolver::new(set)?.solve(values)
}
