use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Expression, Point};
use crate::error::ExprError;
use crate::scalar::{rat, Rational};

/// Band around singular sets that sampled points must avoid.
pub const REGULARITY_MARGIN: f64 = 1e-6;

/// Draws rational lattice points `k / denominator` with `|k| <= radius`,
/// rejecting those that are not regular for every expression.
#[derive(Debug, Clone)]
pub struct LatticeSampler {
    pub dim: usize,
    pub radius: i64,
    pub denominator: i64,
    /// Coordinates held fixed (index, value).
    pub pinned: Vec<(usize, Rational)>,
    pub max_attempts: usize,
}

impl LatticeSampler {
    pub fn new(dim: usize) -> Self {
        LatticeSampler {
            dim,
            radius: 16,
            denominator: 4,
            pinned: Vec::new(),
            max_attempts: 100_000,
        }
    }

    pub fn pin(mut self, index: usize, value: Rational) -> Self {
        self.pinned.push((index, value));
        self
    }

    pub fn sample(
        &self,
        exprs: &[&Expression],
        count: usize,
        seed: u64,
    ) -> Result<Vec<Point>, ExprError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        let mut attempts = 0;
        while out.len() < count {
            attempts += 1;
            if attempts > self.max_attempts {
                return Err(ExprError::Singular(format!(
                    "found only {} regular points in {} attempts",
                    out.len(),
                    self.max_attempts
                )));
            }
            let mut coords: Vec<Rational> = (0..self.dim)
                .map(|_| rat(rng.gen_range(-self.radius..=self.radius), self.denominator))
                .collect();
            for (i, v) in &self.pinned {
                coords[*i] = v.clone();
            }
            let p = Point::from_rationals(coords);
            if exprs
                .iter()
                .all(|e| e.check_regular(&p, REGULARITY_MARGIN).is_ok())
            {
                out.push(p);
            }
        }
        Ok(out)
    }
}

/// `count` seeded regular points on the default lattice.
pub fn sample_regular_points(
    exprs: &[&Expression],
    dim: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<Point>, ExprError> {
    LatticeSampler::new(dim).sample(exprs, count, seed)
}
