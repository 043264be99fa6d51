//! Foreign Capital Depthness Index: the first principal component of the
//! standardized logs of FDI, remittance and aid inflows.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::series::{log_transform, standardize, Dataset, TimeSeries};
use crate::stats::symmetric_eigen;

#[derive(Debug, Clone)]
pub struct PcaResult {
    pub variables: Vec<String>,
    /// Unit norm, sign chosen so the loadings sum to a positive number.
    pub loadings: DVector<f64>,
    pub explained_variance_ratio: f64,
    /// Eigenvalues of the correlation matrix, descending.
    pub eigenvalues: Vec<f64>,
    pub scores: TimeSeries,
}

/// Correlation-matrix PCA of the dataset's columns; the leading component's
/// scores are returned as a series called `name`.
pub fn pca_first_component(data: &Dataset, name: &str) -> Result<PcaResult> {
    let d = data.dim();
    if d < 2 {
        return Err(Error::TooFewColumns(d));
    }
    let z = data.map(standardize)?.matrix();
    let n = z.nrows();
    let corr = z.transpose() * &z / (n - 1) as f64;
    let pairs = symmetric_eigen(&corr);
    let mut loadings = pairs[0].eigenvector.normalize();
    if loadings.sum() < 0.0 {
        loadings = -loadings;
    }
    let eigenvalues: Vec<f64> = pairs.iter().map(|p| p.eigenvalue).collect();
    let total: f64 = eigenvalues.iter().sum();
    let scores = &z * &loadings;
    Ok(PcaResult {
        variables: data.names().iter().map(|s| s.to_string()).collect(),
        explained_variance_ratio: eigenvalues[0] / total,
        eigenvalues,
        loadings,
        scores: TimeSeries::new(name, data.first_year(), scores.iter().copied().collect())?,
    })
}

/// Logs the three inflow series, aligns them on their common span and
/// extracts the first principal component as the series `fcdi`.
pub fn build_fcdi(fdi: &TimeSeries, rem: &TimeSeries, aid: &TimeSeries) -> Result<PcaResult> {
    let logs = Dataset::new(vec![
        log_transform(fdi)?,
        log_transform(rem)?,
        log_transform(aid)?,
    ])?;
    pca_first_component(&logs, "fcdi")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc;
    use nalgebra::DMatrix;
    use proptest::prelude::*;

    fn ts(name: &str, v: Vec<f64>) -> TimeSeries {
        TimeSeries::new(name, 1976, v).unwrap()
    }

    fn data(cols: Vec<Vec<f64>>) -> Dataset {
        Dataset::new(
            cols.into_iter()
                .enumerate()
                .map(|(i, c)| ts(&format!("x{i}"), c))
                .collect(),
        )
        .unwrap()
    }

    /// Columns with sample correlation exactly `rho`: orthogonalize a second
    /// vector against the first, then mix.
    fn correlated_pair(rho: f64) -> Dataset {
        let a: Vec<f64> = (0..20).map(|i| ((i * 37 % 11) as f64) - 5.0).collect();
        let b: Vec<f64> = (0..20).map(|i| ((i * 13 % 7) as f64).powi(2)).collect();
        let center = |v: &[f64]| {
            let m = v.iter().sum::<f64>() / v.len() as f64;
            v.iter().map(|x| x - m).collect::<Vec<_>>()
        };
        let a = center(&a);
        let b = center(&b);
        let proj = a.iter().zip(&b).map(|(x, y)| x * y).sum::<f64>()
            / a.iter().map(|x| x * x).sum::<f64>();
        let b: Vec<f64> = b.iter().zip(&a).map(|(y, x)| y - proj * x).collect();
        let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
        let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
        let c: Vec<f64> = a
            .iter()
            .zip(&b)
            .map(|(x, y)| rho * x / na + (1.0 - rho * rho).sqrt() * y / nb)
            .collect();
        data(vec![a, c])
    }

    #[test]
    fn perfectly_correlated_columns() {
        let a: Vec<f64> = (0..10).map(|i| (i as f64).sin()).collect();
        let b: Vec<f64> = a.iter().map(|v| 3.0 * v + 1.0).collect();
        let pca = pca_first_component(&data(vec![a, b]), "pc1").unwrap();
        let h = 1.0 / 2f64.sqrt();
        assert!((pca.loadings[0] - h).abs() < 1e-10 && (pca.loadings[1] - h).abs() < 1e-10);
        assert!((pca.explained_variance_ratio - 1.0).abs() < 1e-10);
    }

    #[test]
    fn two_columns_with_known_correlation() {
        let pca = pca_first_component(&correlated_pair(0.6), "pc1").unwrap();
        assert!((pca.eigenvalues[0] - 1.6).abs() < 1e-10);
        assert!((pca.explained_variance_ratio - 0.8).abs() < 1e-10);
    }

    #[test]
    fn isotropic_columns() {
        let mut rng = mc::stream(50, 0);
        let cols = (0..3).map(|_| mc::normals(&mut rng, 10_000)).collect();
        let pca = pca_first_component(&data(cols), "pc1").unwrap();
        assert!((pca.explained_variance_ratio - 1.0 / 3.0).abs() < 0.02);
    }

    #[test]
    fn proportional_inputs() {
        let fdi: Vec<f64> = (0..46)
            .map(|i| 5.42e6 * 1.12f64.powi(i) * (1.0 + 0.3 * (i as f64).sin()))
            .collect();
        let aid: Vec<f64> = fdi.iter().map(|v| 2.0 * v).collect();
        let rem: Vec<f64> = fdi.iter().map(|v| 5.0 * v).collect();
        let pca = build_fcdi(&ts("fdi", fdi), &ts("rem", rem), &ts("aid", aid)).unwrap();
        let h = 1.0 / 3f64.sqrt();
        for l in pca.loadings.iter() {
            assert!((l - h).abs() < 1e-10);
        }
        assert!((pca.explained_variance_ratio - 1.0).abs() < 1e-10);
        assert_eq!(pca.scores.name(), "fcdi");
    }

    /// Leading root of `det(C − λI)` for a 3×3 correlation matrix by
    /// bisection, eigenvector from the cross product of two rows of `C − λI`.
    fn cubic_oracle(c: &DMatrix<f64>) -> (f64, DVector<f64>) {
        let (a, b, e) = (c[(0, 1)], c[(0, 2)], c[(1, 2)]);
        let p = |l: f64| {
            let x = 1.0 - l;
            x * x * x - x * (a * a + b * b + e * e) + 2.0 * a * b * e
        };
        let (mut lo, mut hi) = (1.0, 3.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if p(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let l = 0.5 * (lo + hi);
        let m = c - DMatrix::identity(3, 3) * l;
        let r0 = m.row(0).transpose();
        let r1 = m.row(1).transpose();
        let mut v = r0.cross(&r1).normalize();
        if v.sum() < 0.0 {
            v = -v;
        }
        (l, v)
    }

    #[test]
    fn loadings_match_characteristic_polynomial() {
        let mut rng = mc::stream(51, 0);
        let base = mc::normals(&mut rng, 200);
        let cols: Vec<Vec<f64>> = [0.9, 0.6, 0.3]
            .iter()
            .map(|w| {
                let noise = mc::normals(&mut rng, 200);
                base.iter().zip(&noise).map(|(b, n)| w * b + n).collect()
            })
            .collect();
        let d = data(cols);
        let pca = pca_first_component(&d, "pc1").unwrap();
        let z = d.map(standardize).unwrap().matrix();
        let corr = z.transpose() * &z / 199.0;
        let (l, v) = cubic_oracle(&corr);
        assert!((pca.eigenvalues[0] - l).abs() < 1e-8);
        assert!((&pca.loadings - v).amax() < 1e-8);
    }

    #[test]
    fn errors() {
        let one = data(vec![(0..10).map(f64::from).collect()]);
        assert!(matches!(
            pca_first_component(&one, "x"),
            Err(Error::TooFewColumns(1))
        ));
        let flat = data(vec![(0..10).map(f64::from).collect(), vec![2.0; 10]]);
        assert!(matches!(
            pca_first_component(&flat, "x"),
            Err(Error::ZeroVariance(_))
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn scale_invariance_and_score_moments(seed in 0u64..1000, s in 1e-3f64..1e3) {
            let mut rng = mc::stream(seed, 0);
            let draw = |rng: &mut _| -> Vec<f64> {
                mc::random_walk(rng, 46, 0.05).iter().map(|v| (v * 0.2).exp() * 1e6).collect()
            };
            let fdi = draw(&mut rng);
            let rem = draw(&mut rng);
            let aid = draw(&mut rng);
            let a = build_fcdi(&ts("f", fdi.clone()), &ts("r", rem.clone()), &ts("a", aid.clone())).unwrap();
            let scaled: Vec<f64> = rem.iter().map(|v| v * s).collect();
            let b = build_fcdi(&ts("f", fdi), &ts("r", scaled), &ts("a", aid)).unwrap();
            for (x, y) in a.scores.values().iter().zip(b.scores.values()) {
                prop_assert!((x - y).abs() < 1e-8);
            }
            prop_assert!((a.loadings.norm() - 1.0).abs() < 1e-10);
            prop_assert!((a.eigenvalues.iter().sum::<f64>() - 3.0).abs() < 1e-10);
            prop_assert!(a.scores.mean().abs() < 1e-10);
            let sd = a.scores.std_dev();
            prop_assert!((sd * sd - a.eigenvalues[0]).abs() < 1e-10);
        }
    }
}
