//! Reproducible Monte Carlo replication.
//!
//! Each replication draws from its own ChaCha stream selected by
//! `(master seed, replication index)`, so results do not depend on how
//! replications are scheduled across worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

/// Random stream for replication `rep` under `seed`.
pub fn stream(seed: u64, rep: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(rep);
    rng
}

/// Runs `f` once per replication and returns the outputs in replication order.
pub fn replicate<T, F>(seed: u64, reps: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> T + Sync,
{
    (0..reps as u64)
        .into_par_iter()
        .map(|rep| f(&mut stream(seed, rep)))
        .collect()
}

pub fn normals(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

/// Partial sums of i.i.d. standard normals plus a per-step `drift`.
pub fn random_walk(rng: &mut ChaCha8Rng, n: usize, drift: f64) -> Vec<f64> {
    let mut level = 0.0;
    (0..n)
        .map(|_| {
            let e: f64 = StandardNormal.sample(rng);
            level += drift + e;
            level
        })
        .collect()
}

/// Linear-interpolation (type 7) empirical quantile of sorted data.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Share of `flags` that are set.
pub fn rate(flags: &[bool]) -> f64 {
    flags.iter().filter(|f| **f).count() as f64 / flags.len().max(1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn replication_is_order_stable() {
        let a = replicate(5, 64, |rng| rng.random::<u64>());
        let b: Vec<u64> = (0..64).map(|r| stream(5, r).random::<u64>()).collect();
        assert_eq!(a, b);
        assert_ne!(a[0], a[1]);
    }

    #[test]
    fn quantiles() {
        let v: Vec<f64> = (0..=100).map(f64::from).collect();
        assert_eq!(quantile_sorted(&v, 0.05), 5.0);
        assert_eq!(quantile_sorted(&v, 0.5), 50.0);
        assert_eq!(quantile_sorted(&[1.0, 2.0], 0.5), 1.5);
    }
}
