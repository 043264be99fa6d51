//! Residual diagnostics: multivariate LM autocorrelation and Jarque–Bera
//! normality tests.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::{self, regress};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagnosticTest {
    LmAutocorrelation,
    JarqueBera,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticResult {
    pub test_name: DiagnosticTest,
    /// Equation name, `ALL` for joint statistics, or `lag j` for LM tests.
    pub scope: String,
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
}

fn ln_det(m: &DMatrix<f64>) -> Result<f64> {
    let chol = m.clone().cholesky().ok_or(Error::NotPositiveDefinite)?;
    Ok(2.0 * chol.l().diagonal().iter().map(|v| v.ln()).sum::<f64>())
}

/// LM test for residual autocorrelation at lag `j` with an intercept-only
/// auxiliary design.
pub fn lm_autocorrelation(residuals: &DMatrix<f64>, j: usize) -> Result<DiagnosticResult> {
    let ones = DMatrix::from_element(residuals.nrows(), 1, 1.0);
    lm_autocorrelation_with_design(residuals, &ones, j)
}

/// LM test for residual autocorrelation at lag `j`.
///
/// The residuals are regressed on `design` (the regressors of the model
/// that produced them) with and without the lag-`j` residuals appended,
/// pre-sample lags set to zero; the statistic is `T ln(|Σ̂| / |Σ̃|)`, compared
/// with `χ²(d²)`.
pub fn lm_autocorrelation_with_design(
    residuals: &DMatrix<f64>,
    design: &DMatrix<f64>,
    j: usize,
) -> Result<DiagnosticResult> {
    let (t, d) = residuals.shape();
    if j == 0 {
        return Err(Error::InvalidParameters("LM lag must be positive".into()));
    }
    if t <= d * j + d + 2 + design.ncols() {
        return Err(Error::InsufficientObservations {
            needed: d * j + d + 3 + design.ncols(),
            got: t,
        });
    }
    let mut aux = DMatrix::zeros(t, design.ncols() + d);
    aux.columns_mut(0, design.ncols()).copy_from(design);
    for s in j..t {
        for k in 0..d {
            aux[(s, design.ncols() + k)] = residuals[(s - j, k)];
        }
    }
    let base = regress(residuals, design)?.residuals;
    let full = regress(residuals, &aux)?.residuals;
    let sigma_hat = base.transpose() * &base / t as f64;
    let sigma_tilde = full.transpose() * &full / t as f64;
    let statistic = (t as f64 * (ln_det(&sigma_hat)? - ln_det(&sigma_tilde)?)).max(0.0);
    let df = d * d;
    Ok(DiagnosticResult {
        test_name: DiagnosticTest::LmAutocorrelation,
        scope: format!("lag {j}"),
        statistic,
        df,
        p_value: stats::chi_square_tail(statistic, df as f64),
    })
}

/// Jarque–Bera statistic of one sample, `T/6 (S² + (K − 3)²/4)`, with
/// moments about the mean and denominator `T`.
pub fn jarque_bera_statistic(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let m = |k: i32| x.iter().map(|v| (v - mean).powi(k)).sum::<f64>() / n;
    let m2 = m(2);
    let skew = m(3) / m2.powf(1.5);
    let kurt = m(4) / (m2 * m2);
    n / 6.0 * (skew * skew + (kurt - 3.0).powi(2) / 4.0)
}

/// Per-equation Jarque–Bera tests on raw residual columns followed by the
/// joint statistic (their sum, `2d` degrees of freedom) with scope `ALL`.
pub fn jarque_bera(residuals: &DMatrix<f64>, names: &[&str]) -> Result<Vec<DiagnosticResult>> {
    let (t, d) = residuals.shape();
    if t < 8 {
        return Err(Error::SeriesTooShort { needed: 8, got: t });
    }
    if names.len() != d {
        return Err(Error::InvalidParameters(format!(
            "{} names for {d} residual columns",
            names.len()
        )));
    }
    let mut out = Vec::with_capacity(d + 1);
    let mut total = 0.0;
    for (k, name) in names.iter().enumerate() {
        let col: Vec<f64> = residuals.column(k).iter().copied().collect();
        if col.iter().all(|v| *v == col[0]) {
            return Err(Error::ZeroVariance(name.to_string()));
        }
        let statistic = jarque_bera_statistic(&col);
        total += statistic;
        out.push(DiagnosticResult {
            test_name: DiagnosticTest::JarqueBera,
            scope: name.to_string(),
            statistic,
            df: 2,
            p_value: stats::chi_square_tail(statistic, 2.0),
        });
    }
    out.push(DiagnosticResult {
        test_name: DiagnosticTest::JarqueBera,
        scope: "ALL".to_string(),
        statistic: total,
        df: 2 * d,
        p_value: stats::chi_square_tail(total, (2 * d) as f64),
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc;
    use proptest::prelude::*;

    #[test]
    fn symmetric_four_point_sample_has_zero_statistic() {
        let base = [-1.0, 0.0, 0.0, 0.0, 0.0, 1.0];
        let x: Vec<f64> = base.iter().chain(&base).copied().collect();
        let m = DMatrix::from_column_slice(12, 1, &x);
        let r = jarque_bera(&m, &["e"]).unwrap();
        assert!(r[0].statistic.abs() < 1e-14);
        assert!((r[0].p_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn skewed_sample_by_hand() {
        // mean 1, m2 = 3, m3 = 6, m4 = 21
        let x = [0.0, 0.0, 0.0, 4.0];
        let expected = 4.0 / 6.0 * (36.0 / 27.0 + (21.0 / 9.0 - 3.0f64).powi(2) / 4.0);
        assert!((jarque_bera_statistic(&x) - expected).abs() < 1e-12);
    }

    #[test]
    fn joint_is_sum() {
        let mut rng = mc::stream(60, 0);
        let m = DMatrix::from_vec(50, 4, mc::normals(&mut rng, 200));
        let r = jarque_bera(&m, &["a", "b", "c", "d"]).unwrap();
        let sum: f64 = r[..4].iter().map(|x| x.statistic).sum();
        assert!((r[4].statistic - sum).abs() < 1e-10);
        assert_eq!(r[4].df, 8);
        assert_eq!(r[4].scope, "ALL");
        for x in &r {
            assert!((x.p_value - stats::chi_square_tail(x.statistic, x.df as f64)).abs() < 1e-10);
        }
    }

    #[test]
    fn preconditions() {
        let m = DMatrix::from_vec(7, 1, (0..7).map(f64::from).collect());
        assert!(matches!(
            jarque_bera(&m, &["a"]),
            Err(Error::SeriesTooShort { .. })
        ));
        let m = DMatrix::from_vec(10, 4, (0..40).map(|v| (v as f64).sin()).collect());
        assert!(matches!(
            lm_autocorrelation(&m, 2),
            Err(Error::InsufficientObservations { .. })
        ));
    }

    #[test]
    fn lm_matches_explicit_regression() {
        let mut rng = mc::stream(61, 0);
        let e = DMatrix::from_vec(60, 2, mc::normals(&mut rng, 120));
        let r = lm_autocorrelation(&e, 1).unwrap();
        let centered = DMatrix::from_fn(60, 2, |t, k| e[(t, k)] - e.column(k).mean());
        let s0 = centered.transpose() * &centered / 60.0;
        let mut x = DMatrix::from_element(60, 3, 1.0);
        for t in 1..60 {
            x[(t, 1)] = e[(t - 1, 0)];
            x[(t, 2)] = e[(t - 1, 1)];
        }
        x[(0, 1)] = 0.0;
        x[(0, 2)] = 0.0;
        let b = (x.transpose() * &x).try_inverse().unwrap() * x.transpose() * &e;
        let u = &e - &x * b;
        let s1 = u.transpose() * &u / 60.0;
        let oracle = 60.0 * (s0.determinant() / s1.determinant()).ln();
        assert!((r.statistic - oracle).abs() < 1e-9);
        assert_eq!(r.df, 4);
    }

    #[test]
    fn lm_size() {
        let flags = mc::replicate(62, 500, |rng| {
            let e = DMatrix::from_vec(1000, 4, mc::normals(rng, 4000));
            lm_autocorrelation(&e, 1).unwrap().p_value < 0.05
        });
        let rate = mc::rate(&flags);
        assert!((0.03..=0.07).contains(&rate), "{rate}");
    }

    #[test]
    fn lm_power() {
        let flags = mc::replicate(63, 200, |rng| {
            let z = mc::normals(rng, 4000);
            let mut e = DMatrix::zeros(1000, 4);
            for k in 0..4 {
                let mut prev = 0.0;
                for t in 0..1000 {
                    prev = 0.5 * prev + z[k * 1000 + t];
                    e[(t, k)] = prev;
                }
            }
            lm_autocorrelation(&e, 1).unwrap().p_value < 0.05
        });
        assert!(mc::rate(&flags) >= 0.95);
    }

    #[test]
    fn jarque_bera_size() {
        let flags = mc::replicate(64, 500, |rng| {
            let e = DMatrix::from_vec(10_000, 1, mc::normals(rng, 10_000));
            jarque_bera(&e, &["e"]).unwrap()[0].p_value < 0.05
        });
        let rate = mc::rate(&flags);
        assert!((0.03..=0.07).contains(&rate), "{rate}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn scale_invariance(seed in 0u64..1000, a in 0.01f64..100.0, b in 0.01f64..100.0) {
            let mut rng = mc::stream(seed, 0);
            let e = DMatrix::from_vec(80, 2, mc::normals(&mut rng, 160));
            let mut s = e.clone();
            s.column_mut(0).scale_mut(a);
            s.column_mut(1).scale_mut(b);
            let l1 = lm_autocorrelation(&e, 2).unwrap();
            let l2 = lm_autocorrelation(&s, 2).unwrap();
            prop_assert!((l1.statistic - l2.statistic).abs() < 1e-8);
            prop_assert!(l1.statistic >= 0.0 && (0.0..=1.0).contains(&l1.p_value));
            let j1 = jarque_bera(&e, &["x", "y"]).unwrap();
            let j2 = jarque_bera(&s, &["x", "y"]).unwrap();
            for (u, v) in j1.iter().zip(&j2) {
                prop_assert!((u.statistic - v.statistic).abs() < 1e-8);
            }
        }
    }
}
