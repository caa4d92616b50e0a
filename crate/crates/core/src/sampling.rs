//! Seeded sample points and the data-parallel map used by every numeric check.
//!
//! Points are always drawn sequentially from one ChaCha stream, so the
//! parallel and sequential builds see identical inputs and produce
//! identical reports.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalars::Poly;

/// Box around a center, minus neighbourhoods of excluded hypersurfaces.
#[derive(Clone, Debug)]
pub struct Domain {
    pub center: Vec<f64>,
    pub radius: f64,
    pub excluded: Vec<Poly>,
    /// Points with `|p(x)| < margin` for an excluded `p` are rejected.
    pub margin: f64,
}

impl Domain {
    pub fn cube(dim: usize, radius: f64) -> Self {
        Domain { center: vec![0.0; dim], radius, excluded: Vec::new(), margin: 0.0 }
    }

    pub fn around(center: Vec<f64>, radius: f64) -> Self {
        Domain { center, radius, excluded: Vec::new(), margin: 0.0 }
    }

    pub fn excluding(mut self, polys: Vec<Poly>, margin: f64) -> Self {
        self.excluded = polys;
        self.margin = margin;
        self
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.excluded.iter().all(|p| p.eval_f64(x).abs() >= self.margin)
    }

    pub fn sample(&self, count: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        let mut tries = 0usize;
        while out.len() < count {
            let x: Vec<f64> = self.center.iter().map(|c| c + rng.gen_range(-self.radius..=self.radius)).collect();
            tries += 1;
            if self.contains(&x) || tries > 1000 * count.max(1) {
                out.push(x);
            }
        }
        out
    }
}

/// Seeded uniform vectors in `[-1, 1]^dim`.
pub fn random_vectors(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    Domain::cube(dim, 1.0).sample(count, seed)
}

/// `f` over `items`, in parallel when the `parallel` feature is on.
#[cfg(feature = "parallel")]
pub fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    items.iter().map(f).collect()
}

/// Sequential map with the same signature, for benchmarks and comparisons.
pub fn seq_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    items.iter().map(f).collect()
}

/// Relative difference scaled by `max(1, |a|, |b|)`.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}

pub fn max_rel_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| rel_diff(*x, *y)).fold(0.0, f64::max)
}

/// Largest value, treating NaN as infinitely bad.
pub fn worst(errs: impl IntoIterator<Item = f64>) -> f64 {
    errs.into_iter().fold(0.0, |m, e| if e.is_nan() { f64::INFINITY } else { m.max(e) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_is_seeded() {
        let d = Domain::around(vec![0.0, 1.0], 0.5);
        assert_eq!(d.sample(5, 7), d.sample(5, 7));
        assert_ne!(d.sample(5, 7), d.sample(5, 8));
    }

    #[test]
    fn par_and_seq_agree() {
        let xs: Vec<u64> = (0..100).collect();
        assert_eq!(par_map(&xs, |x| x * x), seq_map(&xs, |x| x * x));
    }
}
