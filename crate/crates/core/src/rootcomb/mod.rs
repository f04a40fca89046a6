//! Block and root combinatorics of a parabolic subalgebra of gl(n): the
//! nilradical positions, the order on roots, the base, admissible pairs and
//! the marked sets drawn in diagrams.

mod diagram;

pub use diagram::{parse_diagram, render_diagram, DiagramDoc, DiagramFormat};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Block sizes `(n_1, ..., n_s)` of the reductive part.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParabolicType {
    sizes: Vec<usize>,
    /// `block[k - 1]` is the 0-based block of index `k`.
    block: Vec<usize>,
}

impl ParabolicType {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::InvalidType("no blocks".into()));
        }
        if sizes.contains(&0) {
            return Err(Error::InvalidType("block sizes must be positive".into()));
        }
        let n: usize = sizes.iter().sum();
        if n > u16::MAX as usize {
            return Err(Error::InvalidType(format!("dimension {n} too large")));
        }
        let block = sizes
            .iter()
            .enumerate()
            .flat_map(|(b, &s)| std::iter::repeat_n(b, s))
            .collect();
        Ok(ParabolicType { sizes, block })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn n(&self) -> usize {
        self.block.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.sizes.len()
    }

    /// 0-based block of the 1-based index `k`.
    pub fn block_of(&self, k: usize) -> usize {
        self.block[k - 1]
    }

    /// 1-based indices of block `b`, ascending.
    pub fn block_indices(&self, b: usize) -> std::ops::RangeInclusive<usize> {
        let start: usize = self.sizes[..b].iter().sum::<usize>() + 1;
        start..=start + self.sizes[b] - 1
    }

    pub fn same_block(&self, k: usize, l: usize) -> bool {
        self.block_of(k) == self.block_of(l)
    }

    pub fn in_nilradical(&self, i: usize, j: usize) -> bool {
        (1..=self.n()).contains(&i)
            && (1..=self.n()).contains(&j)
            && self.block_of(i) < self.block_of(j)
    }

    pub fn is_non_increasing(&self) -> bool {
        self.sizes.windows(2).all(|w| w[0] >= w[1])
    }

    /// Types where the orbit of every point of U0 meets the slice once:
    /// non-increasing sizes, or at most three blocks.
    pub fn has_unique_slice(&self) -> bool {
        self.is_non_increasing() || self.num_blocks() <= 3
    }

    pub fn require_root(&self, r: Root) -> Result<Root> {
        if r.i >= 1 && r.i < r.j && r.j <= self.n() {
            Ok(r)
        } else {
            Err(Error::InvalidRoot(r.i, r.j, self.n()))
        }
    }

    pub fn require_nilradical(&self, r: Root) -> Result<Root> {
        self.require_root(r)?;
        if self.in_nilradical(r.i, r.j) {
            Ok(r)
        } else {
            Err(Error::NotInNilradical(r))
        }
    }
}

impl fmt::Display for ParabolicType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sizes.iter().map(usize::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for ParabolicType {
    type Err = Error;

    /// Comma-separated positive sizes, e.g. `2,4,2`.
    fn from_str(s: &str) -> Result<Self> {
        let sizes = s
            .split(',')
            .map(|p| {
                let p = p.trim();
                if p.is_empty() || !p.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(Error::InvalidType(format!("bad block size {p:?}")));
                }
                p.parse::<usize>()
                    .map_err(|_| Error::InvalidType(format!("bad block size {p:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if sizes
            .iter()
            .try_fold(0usize, |acc, &s| acc.checked_add(s))
            .is_none()
        {
            return Err(Error::InvalidType("size overflow".into()));
        }
        ParabolicType::new(sizes)
    }
}

impl Serialize for ParabolicType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.sizes.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ParabolicType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let sizes = Vec::<usize>::deserialize(d)?;
        ParabolicType::new(sizes).map_err(serde::de::Error::custom)
    }
}

/// Positive root `e_i - e_j`, stored as the 1-based pair `(i, j)`, `i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct Root {
    pub i: usize,
    pub j: usize,
}

impl Root {
    pub const fn new(i: usize, j: usize) -> Self {
        Root { i, j }
    }
}

impl From<[usize; 2]> for Root {
    fn from([i, j]: [usize; 2]) -> Self {
        Root { i, j }
    }
}

impl From<Root> for [usize; 2] {
    fn from(r: Root) -> Self {
        [r.i, r.j]
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// Pairwise incomparable set of nilradical roots, one per row and column at
/// most, sorted by row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Base {
    ty: ParabolicType,
    roots: Vec<Root>,
}

impl Base {
    pub fn parabolic_type(&self) -> &ParabolicType {
        &self.ty
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn contains(&self, r: Root) -> bool {
        self.roots.binary_search(&r).is_ok()
    }

    /// Base root in row `i`, if any.
    pub fn in_row(&self, i: usize) -> Option<Root> {
        self.roots.iter().copied().find(|r| r.i == i)
    }

    /// Base root in column `j`, if any.
    pub fn in_column(&self, j: usize) -> Option<Root> {
        self.roots.iter().copied().find(|r| r.j == j)
    }
}

/// Pair `(xi, xi')` of base roots chained through a root `alpha` of the
/// reductive part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AdmissiblePair {
    pub xi: Root,
    pub xi_prime: Root,
    /// `(b, a')`
    pub alpha: Root,
    /// `alpha + xi' = (b, b')`
    pub phi: Root,
    /// `xi + alpha = (a, a')`
    pub psi: Root,
}

/// Which root of each admissible pair is drawn as the second mark.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MarkedSet {
    #[default]
    Phi,
    Psi,
}

impl MarkedSet {
    pub fn select(self, q: &AdmissiblePair) -> Root {
        match self {
            MarkedSet::Phi => q.phi,
            MarkedSet::Psi => q.psi,
        }
    }
}

impl FromStr for MarkedSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "phi" => Ok(MarkedSet::Phi),
            "psi" => Ok(MarkedSet::Psi),
            other => Err(Error::Parse(format!("unknown marked set {other:?}"))),
        }
    }
}

/// Nilradical positions `{(i, j) : block(i) < block(j)}`, row-major.
pub fn nilradical_roots(ty: &ParabolicType) -> Vec<Root> {
    let n = ty.n();
    (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| Root::new(i, j)))
        .filter(|r| ty.in_nilradical(r.i, r.j))
        .collect()
}

/// `g1 > g2` iff `g1 - g2` is a positive root of the reductive part.
pub fn higher(ty: &ParabolicType, g1: Root, g2: Root) -> bool {
    if g1.i == g2.i && g2.j < g1.j {
        ty.same_block(g1.j, g2.j)
    } else if g1.j == g2.j && g1.i < g2.i {
        ty.same_block(g1.i, g2.i)
    } else {
        false
    }
}

/// Staircase construction of the base. Strips `(a, a + d)` are filled for
/// `d = 1, 2, ...`; inside a strip the k-th lowest unused row of block `a` is
/// matched with the k-th leftmost unused column of block `a + d`.
pub fn compute_base(ty: &ParabolicType) -> Base {
    let n = ty.n();
    let s = ty.num_blocks();
    let mut row_used = vec![false; n + 1];
    let mut col_used = vec![false; n + 1];
    let mut roots = Vec::new();
    for d in 1..s {
        for a in 0..s - d {
            let rows = ty.block_indices(a).rev().filter(|&r| !row_used[r]);
            let cols = ty.block_indices(a + d).filter(|&c| !col_used[c]);
            let matched: Vec<(usize, usize)> = rows.zip(cols).collect();
            for (r, c) in matched {
                row_used[r] = true;
                col_used[c] = true;
                roots.push(Root::new(r, c));
            }
        }
    }
    roots.sort();
    Base {
        ty: ty.clone(),
        roots,
    }
}

/// All admissible pairs, ordered by `xi` then `xi'` (both by row).
pub fn admissible_pairs(ty: &ParabolicType, base: &Base) -> Vec<AdmissiblePair> {
    let mut out = Vec::new();
    for &xi in base.roots() {
        for &xp in base.roots() {
            if xi.j < xp.i && ty.same_block(xi.j, xp.i) {
                out.push(AdmissiblePair {
                    xi,
                    xi_prime: xp,
                    alpha: Root::new(xi.j, xp.i),
                    phi: Root::new(xi.j, xp.j),
                    psi: Root::new(xi.i, xp.i),
                });
            }
        }
    }
    out
}

/// Looks up the admissible pair `(xi, xi')`.
pub fn find_pair(pairs: &[AdmissiblePair], xi: Root, xi_prime: Root) -> Result<AdmissiblePair> {
    pairs
        .iter()
        .copied()
        .find(|q| q.xi == xi && q.xi_prime == xi_prime)
        .ok_or(Error::NotAdmissible(xi, xi_prime))
}

/// Base roots strictly inside `gamma = (a, b)`: rows below `a`, columns left
/// of `b`.
pub fn s_gamma(base: &Base, gamma: Root) -> Vec<Root> {
    base.roots()
        .iter()
        .copied()
        .filter(|r| r.i > gamma.i && r.j < gamma.j)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dims {
    pub dim_m: usize,
    pub base_size: usize,
    pub pair_count: usize,
    pub phi_size: usize,
    pub predicted_regular_orbit_dim: usize,
    pub y_dim: usize,
    /// `predicted_regular_orbit_dim + y_dim == dim_m`
    pub consistent: bool,
}

pub fn dims(ty: &ParabolicType) -> Dims {
    let dim_m = nilradical_roots(ty).len();
    let base = compute_base(ty);
    let pairs = admissible_pairs(ty, &base);
    let mut phi: Vec<Root> = pairs.iter().map(|q| q.phi).collect();
    phi.sort();
    phi.dedup();
    let predicted = dim_m - base.len() - pairs.len();
    let y_dim = base.len() + phi.len();
    Dims {
        dim_m,
        base_size: base.len(),
        pair_count: pairs.len(),
        phi_size: phi.len(),
        predicted_regular_orbit_dim: predicted,
        y_dim,
        consistent: predicted + y_dim == dim_m,
    }
}

/// Marked positions `S` and `Phi` (or `Psi`) as sorted root lists.
pub fn marks(ty: &ParabolicType, set: MarkedSet) -> (Vec<Root>, Vec<Root>) {
    let base = compute_base(ty);
    let mut crosses: Vec<Root> = admissible_pairs(ty, &base)
        .iter()
        .map(|q| set.select(q))
        .collect();
    crosses.sort();
    crosses.dedup();
    (base.roots().to_vec(), crosses)
}
