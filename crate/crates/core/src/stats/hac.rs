use crate::error::{Error, Result};

/// Bartlett-kernel (Newey–West) long-run variance of `u`.
///
/// Autocovariances are uncentered and divided by `T`:
/// `γ_j = (1/T) Σ_{t>j} u_t u_{t−j}`, and the estimate is
/// `γ_0 + 2 Σ_{j=1}^{L} (1 − j/(L+1)) γ_j`.
pub fn newey_west_lrv(u: &[f64], bandwidth: usize) -> Result<f64> {
    let n = u.len();
    if n <= bandwidth {
        return Err(Error::BandwidthTooLarge { bandwidth, len: n });
    }
    let t = n as f64;
    let gamma = |j: usize| u[j..].iter().zip(u).map(|(a, b)| a * b).sum::<f64>() / t;
    let mut lrv = gamma(0);
    for j in 1..=bandwidth {
        let w = 1.0 - j as f64 / (bandwidth as f64 + 1.0);
        lrv += 2.0 * w * gamma(j);
    }
    Ok(lrv)
}

/// Rule-of-thumb Bartlett bandwidth `⌊4 (T/100)^{2/9}⌋`.
pub fn auto_bandwidth(u: &[f64]) -> Result<usize> {
    bandwidth_for_len(u.len())
}

pub(crate) fn bandwidth_for_len(n: usize) -> Result<usize> {
    if n < 8 {
        return Err(Error::SeriesTooShort { needed: 8, got: n });
    }
    Ok((4.0 * (n as f64 / 100.0).powf(2.0 / 9.0)).floor() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    /// Direct double sum over all pairs `(s, t)` with `|s − t| ≤ L`,
    /// weighted by the Bartlett kernel.
    fn brute_force(u: &[f64], l: usize) -> f64 {
        let n = u.len();
        let mut acc = 0.0;
        for s in 0..n {
            for t in 0..n {
                let lag = s.abs_diff(t);
                if lag <= l {
                    acc += (1.0 - lag as f64 / (l as f64 + 1.0)) * u[s] * u[t];
                }
            }
        }
        acc / n as f64
    }

    #[test]
    fn zero_bandwidth_is_second_moment() {
        let u = [0.3, -1.2, 2.0, 0.7, -0.4];
        let m2 = u.iter().map(|v| v * v).sum::<f64>() / 5.0;
        assert!((newey_west_lrv(&u, 0).unwrap() - m2).abs() < 1e-15);
    }

    #[test]
    fn alternating_signs() {
        // γ0 = 1, γ1 = −3/4, weight 1/2.
        let u = [1.0, -1.0, 1.0, -1.0];
        let v = newey_west_lrv(&u, 1).unwrap();
        assert!((v - brute_force(&u, 1)).abs() < 1e-15);
        assert!((v - 0.25).abs() < 1e-15);
    }

    #[test]
    fn bandwidth_must_be_shorter_than_series() {
        assert!(matches!(
            newey_west_lrv(&[1.0, 2.0], 2),
            Err(Error::BandwidthTooLarge { .. })
        ));
    }

    #[test]
    fn ar1_long_run_variance() {
        let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
        let phi = 0.5;
        let mut u = Vec::with_capacity(5000);
        let mut prev = 0.0;
        for _ in 0..5000 {
            let e: f64 = StandardNormal.sample(&mut rng);
            prev = phi * prev + e;
            u.push(prev);
        }
        let analytic = 1.0 / (1.0f64 - phi).powi(2);
        let est = newey_west_lrv(&u, 20).unwrap();
        assert!((est / analytic - 1.0).abs() < 0.15, "{est} vs {analytic}");
    }

    #[test]
    fn bandwidth_rule() {
        assert_eq!(bandwidth_for_len(100).unwrap(), 4);
        assert_eq!(bandwidth_for_len(46).unwrap(), 3);
        assert_eq!(bandwidth_for_len(400).unwrap(), 5);
        assert!(auto_bandwidth(&[0.0; 7]).is_err());
    }

    proptest! {
        #[test]
        fn matches_brute_force(u in prop::collection::vec(-10.0f64..10.0, 6..40), l in 0usize..5) {
            let fast = newey_west_lrv(&u, l).unwrap();
            prop_assert!((fast - brute_force(&u, l)).abs() < 1e-9 * (1.0 + fast.abs()));
        }

        #[test]
        fn sign_and_scale(u in prop::collection::vec(-10.0f64..10.0, 6..40), l in 0usize..5, c in 0.1f64..10.0) {
            let base = newey_west_lrv(&u, l).unwrap();
            let neg: Vec<f64> = u.iter().map(|v| -v).collect();
            let scaled: Vec<f64> = u.iter().map(|v| c * v).collect();
            prop_assert!((newey_west_lrv(&neg, l).unwrap() - base).abs() < 1e-9 * (1.0 + base.abs()));
            prop_assert!((newey_west_lrv(&scaled, l).unwrap() - c * c * base).abs() < 1e-9 * (1.0 + c * c * base.abs()));
        }
    }
}
