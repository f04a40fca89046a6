//! Seeded random rational points with small integer entries.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactpoly::{rat, MatrixPoint, RatMatrix, Rational};
use crate::invgen;
use crate::rootcomb::{nilradical_roots, Base, ParabolicType};

/// Entries are drawn uniformly from `[-ENTRY_BOUND, ENTRY_BOUND]`.
pub const ENTRY_BOUND: i64 = 9;

const MAX_U0_ATTEMPTS: usize = 1000;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn entry(&mut self) -> Rational {
        rat(self.rng.gen_range(-ENTRY_BOUND..=ENTRY_BOUND))
    }

    pub fn nonzero_entry(&mut self) -> Rational {
        loop {
            let v = self.rng.gen_range(-ENTRY_BOUND..=ENTRY_BOUND);
            if v != 0 {
                return rat(v);
            }
        }
    }

    pub fn values(&mut self, k: usize) -> Vec<Rational> {
        (0..k).map(|_| self.entry()).collect()
    }

    /// Random point of the nilradical.
    pub fn point(&mut self, ty: &ParabolicType) -> MatrixPoint {
        let entries: Vec<_> = nilradical_roots(ty)
            .into_iter()
            .map(|r| (r, self.entry()))
            .collect();
        MatrixPoint::from_entries(ty, entries).expect("nilradical positions")
    }

    /// Random point with every base minor nonzero.
    pub fn u0_point(&mut self, ty: &ParabolicType, base: &Base) -> Result<MatrixPoint> {
        for _ in 0..MAX_U0_ATTEMPTS {
            let p = self.point(ty);
            if invgen::first_vanishing_base_minor(base, &p).is_none() {
                return Ok(p);
            }
        }
        Err(Error::InvalidArgument(format!(
            "no U0 point found in {MAX_U0_ATTEMPTS} samples"
        )))
    }

    /// Random upper unitriangular matrix.
    pub fn unitriangular(&mut self, n: usize) -> RatMatrix {
        let mut g = RatMatrix::identity(n);
        for i in 0..n {
            for j in i + 1..n {
                g.set(i, j, self.entry());
            }
        }
        g
    }
}
