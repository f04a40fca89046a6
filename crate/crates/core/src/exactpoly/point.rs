use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{format_rational, parse_rational, RatMatrix, Rational, Var};
use crate::error::{Error, Result};
use crate::rootcomb::{ParabolicType, Root};

/// Largest matrix size accepted from point files.
const MAX_POINT_DIM: usize = 512;

/// A rational matrix supported on the nilradical positions of its type.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixPoint {
    ty: ParabolicType,
    m: RatMatrix,
}

impl MatrixPoint {
    pub fn new(ty: &ParabolicType, m: RatMatrix) -> Result<Self> {
        let n = ty.n();
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: m.rows().max(m.cols()),
            });
        }
        for i in 0..n {
            for j in 0..n {
                if !m.get(i, j).is_zero() && !ty.in_nilradical(i + 1, j + 1) {
                    return Err(Error::SupportViolation(i + 1, j + 1));
                }
            }
        }
        Ok(MatrixPoint { ty: ty.clone(), m })
    }

    pub fn zero(ty: &ParabolicType) -> Self {
        MatrixPoint {
            ty: ty.clone(),
            m: RatMatrix::zeros(ty.n(), ty.n()),
        }
    }

    /// Point with the given entries at nilradical positions.
    pub fn from_entries(
        ty: &ParabolicType,
        entries: impl IntoIterator<Item = (Root, Rational)>,
    ) -> Result<Self> {
        let mut m = RatMatrix::zeros(ty.n(), ty.n());
        for (r, v) in entries {
            ty.require_nilradical(r)?;
            m.set(r.i - 1, r.j - 1, v);
        }
        Ok(MatrixPoint { ty: ty.clone(), m })
    }

    pub fn parabolic_type(&self) -> &ParabolicType {
        &self.ty
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> RatMatrix {
        self.m
    }

    pub fn n(&self) -> usize {
        self.ty.n()
    }

    /// Entry at the 1-based position `(i, j)`.
    pub fn at(&self, i: usize, j: usize) -> &Rational {
        self.m.get(i - 1, j - 1)
    }

    /// Value of a polynomial variable at this point; non-entry variables
    /// evaluate to zero.
    pub fn value(&self, v: Var) -> Rational {
        match v.as_entry() {
            Some((i, j)) if (1..=self.n()).contains(&i) && (1..=self.n()).contains(&j) => {
                self.at(i, j).clone()
            }
            _ => Rational::zero(),
        }
    }

    /// Positions of nonzero entries, row-major.
    pub fn support(&self) -> Vec<Root> {
        let n = self.n();
        (1..=n)
            .flat_map(|i| (1..=n).map(move |j| Root::new(i, j)))
            .filter(|r| !self.at(r.i, r.j).is_zero())
            .collect()
    }

    pub fn to_doc(&self) -> PointDoc {
        PointDoc {
            n: self.n(),
            entries: self
                .support()
                .into_iter()
                .map(|r| (r.i, r.j, format_rational(self.at(r.i, r.j))))
                .collect(),
        }
    }

    pub fn from_json(ty: &ParabolicType, text: &str) -> Result<Self> {
        let m = parse_point_json(text)?;
        MatrixPoint::new(ty, m)
    }
}

/// Point file layout: `{"n": 4, "entries": [[1, 3, "2/3"], ...]}` with
/// 1-based positions and exact rational strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointDoc {
    pub n: usize,
    pub entries: Vec<(usize, usize, String)>,
}

/// Parses a point file into an `n x n` rational matrix. Positions must be in
/// range and appear at most once; values must be strings.
pub fn parse_point_json(text: &str) -> Result<RatMatrix> {
    let doc: PointDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("point JSON: {e}")))?;
    if doc.n > MAX_POINT_DIM {
        return Err(Error::Parse(format!(
            "n = {} exceeds {MAX_POINT_DIM}",
            doc.n
        )));
    }
    let mut m = RatMatrix::zeros(doc.n, doc.n);
    let mut seen = vec![false; doc.n * doc.n];
    for (i, j, v) in &doc.entries {
        let (i, j) = (*i, *j);
        if !(1..=doc.n).contains(&i) || !(1..=doc.n).contains(&j) {
            return Err(Error::Parse(format!("entry ({i},{j}) out of range")));
        }
        let k = (i - 1) * doc.n + (j - 1);
        if std::mem::replace(&mut seen[k], true) {
            return Err(Error::Parse(format!("duplicate entry ({i},{j})")));
        }
        m.set(i - 1, j - 1, parse_rational(v)?);
    }
    Ok(m)
}
