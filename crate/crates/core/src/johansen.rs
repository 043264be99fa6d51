//! Johansen reduced-rank cointegration tests and the vector error correction
//! model.
//!
//! With `p` the lag order of the levels VAR, the VECM is
//!
//! ```text
//! ΔY_t = α βᵀ Y*_{t−1} + Σ_{i=1}^{p−1} Γ_i ΔY_{t−i} + μ + ε_t
//! ```
//!
//! where `Y*` is `Y` augmented with a constant under
//! [`JohansenDet::RestrictedConstant`]. The rank of `αβᵀ` is tested by
//! concentrating the short-run terms out of `ΔY_t` and `Y*_{t−1}` and solving
//! `S₁₀ S₀₀⁻¹ S₀₁ v = λ S₁₁ v`.

use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::cv_tables::{self, Family, Level};
use crate::error::{Error, Result};
use crate::series::{Dataset, TimeSeries};
use crate::stats::{self, ols_fit, regress, OlsResult};

/// Deterministic terms of the error correction model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JohansenDet {
    None,
    /// Constant confined to the cointegrating relations.
    RestrictedConstant,
    /// Constant in every equation; its projection on `α` is reported as the
    /// constant of the cointegrating relation.
    #[default]
    UnrestrictedConstant,
}

impl JohansenDet {
    pub fn as_str(&self) -> &'static str {
        match self {
            JohansenDet::None => "none",
            JohansenDet::RestrictedConstant => "restricted_constant",
            JohansenDet::UnrestrictedConstant => "unrestricted_constant",
        }
    }
}

impl FromStr for JohansenDet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(JohansenDet::None),
            "restricted_constant" => Ok(JohansenDet::RestrictedConstant),
            "unrestricted_constant" => Ok(JohansenDet::UnrestrictedConstant),
            _ => Err(Error::Config(format!(
                "unknown Johansen deterministic spec `{s}`"
            ))),
        }
    }
}

fn check_sample(n: usize, d: usize, p: usize) -> Result<()> {
    if p == 0 {
        return Err(Error::InvalidParameters(
            "lag order must be at least 1".into(),
        ));
    }
    let needed = d * p + d + 5 + p;
    if n < needed {
        return Err(Error::InsufficientObservations { needed, got: n });
    }
    Ok(())
}

/// Regression blocks over the effective sample `t = p..n`.
struct Design {
    dy: DMatrix<f64>,
    /// `Y*_{t−1}`.
    level: DMatrix<f64>,
    /// Lagged differences followed by the unrestricted constant, if any.
    short: DMatrix<f64>,
}

fn build_design(y: &DMatrix<f64>, p: usize, det: JohansenDet) -> Design {
    let (n, d) = y.shape();
    let t = n - p;
    let restricted = usize::from(det == JohansenDet::RestrictedConstant);
    let unrestricted = usize::from(det == JohansenDet::UnrestrictedConstant);
    let lags = p - 1;
    let mut dy = DMatrix::zeros(t, d);
    let mut level = DMatrix::zeros(t, d + restricted);
    let mut short = DMatrix::zeros(t, d * lags + unrestricted);
    for (r, s) in (p..n).enumerate() {
        for j in 0..d {
            dy[(r, j)] = y[(s, j)] - y[(s - 1, j)];
            level[(r, j)] = y[(s - 1, j)];
            for i in 1..=lags {
                short[(r, (i - 1) * d + j)] = y[(s - i, j)] - y[(s - i - 1, j)];
            }
        }
        if restricted == 1 {
            level[(r, d)] = 1.0;
        }
        if unrestricted == 1 {
            short[(r, d * lags)] = 1.0;
        }
    }
    Design { dy, level, short }
}

/// Concentrated problem shared by the rank test and the VECM.
struct Reduced {
    design: Design,
    r1: DMatrix<f64>,
    eigenvalues: Vec<f64>,
    /// Columns are eigenvectors, `vᵀ S₁₁ v = 1`.
    eigenvectors: DMatrix<f64>,
}

fn reduce(y: &DMatrix<f64>, p: usize, det: JohansenDet) -> Result<Reduced> {
    let (n, d) = y.shape();
    check_sample(n, d, p)?;
    let design = build_design(y, p, det);
    let t = design.dy.nrows() as f64;
    let r0 = regress(&design.dy, &design.short)?.residuals;
    let r1 = regress(&design.level, &design.short)?.residuals;
    let s00 = r0.transpose() * &r0 / t;
    let s01 = r0.transpose() * &r1 / t;
    let s11 = r1.transpose() * &r1 / t;
    let s00_inv_s01 = s00
        .cholesky()
        .ok_or(Error::NotPositiveDefinite)?
        .solve(&s01);
    let a = s01.transpose() * s00_inv_s01;
    let pairs = stats::generalized_eigen(&a, &s11)?;
    let eigenvalues = pairs
        .iter()
        .take(d)
        .map(|p| p.eigenvalue.clamp(0.0, 1.0 - f64::EPSILON))
        .collect();
    let vectors: Vec<DVector<f64>> = pairs.into_iter().take(d).map(|p| p.eigenvector).collect();
    Ok(Reduced {
        design,
        r1,
        eigenvalues,
        eigenvectors: DMatrix::from_columns(&vectors),
    })
}

/// Trace and maximum-eigenvalue statistics for `r = 0..d`.
fn rank_statistics(eigenvalues: &[f64], t: usize) -> (Vec<f64>, Vec<f64>) {
    let terms: Vec<f64> = eigenvalues
        .iter()
        .map(|l| -(t as f64) * (1.0 - l).ln())
        .collect();
    let trace = (0..terms.len()).map(|r| terms[r..].iter().sum()).collect();
    (trace, terms)
}

/// Rank-zero statistics only, without critical values; used by the
/// critical value simulator.
pub(crate) fn rank_zero_statistics(
    y: &DMatrix<f64>,
    p: usize,
    det: JohansenDet,
) -> Result<(f64, f64)> {
    let red = reduce(y, p, det)?;
    let (trace, max) = rank_statistics(&red.eigenvalues, red.design.dy.nrows());
    Ok((trace[0], max[0]))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JohansenResult {
    pub variables: Vec<String>,
    pub det_spec: JohansenDet,
    pub lag: usize,
    pub n_effective: usize,
    /// Descending, in `[0, 1)`.
    pub eigenvalues: Vec<f64>,
    /// Indexed by the hypothesized rank `r = 0..d`.
    pub trace_stats: Vec<f64>,
    pub max_eigen_stats: Vec<f64>,
    pub trace_critical_5pct: Vec<f64>,
    pub max_eigen_critical_5pct: Vec<f64>,
    /// First `r` whose trace statistic falls below its 5% critical value,
    /// or `d` if every hypothesis is rejected.
    pub selected_rank: usize,
}

impl JohansenResult {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Trace statistic with `trace_stat(d) = 0`.
    pub fn trace_stat(&self, r: usize) -> f64 {
        self.trace_stats.get(r).copied().unwrap_or(0.0)
    }

    pub fn trace_rejects(&self, r: usize) -> bool {
        self.trace_stats[r] > self.trace_critical_5pct[r]
    }

    pub fn max_eigen_rejects(&self, r: usize) -> bool {
        self.max_eigen_stats[r] > self.max_eigen_critical_5pct[r]
    }
}

/// Johansen trace and maximum-eigenvalue tests with lag order `p` of the
/// levels VAR.
pub fn johansen_test(data: &Dataset, p: usize, det: JohansenDet) -> Result<JohansenResult> {
    let red = reduce(&data.matrix(), p, det)?;
    let t = red.design.dy.nrows();
    let d = data.dim();
    let (trace_stats, max_eigen_stats) = rank_statistics(&red.eigenvalues, t);
    let mut trace_cv = Vec::with_capacity(d);
    let mut max_cv = Vec::with_capacity(d);
    for r in 0..d {
        trace_cv.push(cv_tables::lookup(
            Family::JohansenTrace(det),
            d - r,
            Level::Five,
        )?);
        max_cv.push(cv_tables::lookup(
            Family::JohansenMaxEigen(det),
            d - r,
            Level::Five,
        )?);
    }
    let selected_rank = (0..d).find(|&r| trace_stats[r] < trace_cv[r]).unwrap_or(d);
    Ok(JohansenResult {
        variables: data.names().iter().map(|s| s.to_string()).collect(),
        det_spec: det,
        lag: p,
        n_effective: t,
        eigenvalues: red.eigenvalues,
        trace_stats,
        max_eigen_stats,
        trace_critical_5pct: trace_cv,
        max_eigen_critical_5pct: max_cv,
        selected_rank,
    })
}

/// Inference for one free entry of the normalized cointegrating matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaEntry {
    pub row: String,
    pub relation: usize,
    pub coefficient: f64,
    pub standard_error: f64,
    pub z: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone)]
pub struct VecmModel {
    pub variables: Vec<String>,
    pub outcome: String,
    pub rank: usize,
    pub lag: usize,
    pub det_spec: JohansenDet,
    pub eigenvalues: Vec<f64>,
    /// Names of the rows of `beta`: the variables, then `_cons` under a
    /// restricted constant.
    pub beta_rows: Vec<String>,
    /// Rows fixed by the normalization (identity block).
    pub normalized_rows: Vec<usize>,
    pub beta: DMatrix<f64>,
    pub alpha: DMatrix<f64>,
    /// `Γ_1..Γ_{p−1}`, each `d × d`.
    pub gamma: Vec<DMatrix<f64>>,
    /// Equation intercepts under an unrestricted constant.
    pub intercept: Option<DVector<f64>>,
    /// Constant of each cointegrating relation, `(αᵀα)⁻¹ αᵀ μ`, under an
    /// unrestricted constant.
    pub relation_constant: Option<DVector<f64>>,
    pub beta_inference: Vec<BetaEntry>,
    /// Effective-sample residuals, `T × d`.
    pub residuals: DMatrix<f64>,
    /// `εᵀε / T`.
    pub omega: DMatrix<f64>,
    /// Per-equation OLS fits of `ΔY_t`; regressors are the intercept (if
    /// any), the `r` error-correction terms, then the lagged differences
    /// ordered by lag and variable.
    pub equations: Vec<OlsResult>,
    /// Error-correction terms over the whole sample, `n × r`.
    pub ect: DMatrix<f64>,
    pub first_year: i32,
    /// Regressors of the equations over the effective sample, intercept
    /// excluded.
    pub design: DMatrix<f64>,
}

impl VecmModel {
    pub fn dim(&self) -> usize {
        self.variables.len()
    }

    pub fn n_effective(&self) -> usize {
        self.residuals.nrows()
    }

    /// Year of the first effective-sample observation.
    pub fn first_effective_year(&self) -> i32 {
        self.first_year + self.lag as i32
    }

    fn offset(&self) -> usize {
        usize::from(self.intercept.is_some())
    }

    /// Index of the coefficient on `ΔY_{j,t−lag}` within each equation.
    pub fn lagged_difference_index(&self, lag: usize, j: usize) -> usize {
        self.offset() + self.rank + (lag - 1) * self.dim() + j
    }
}

fn index_of(names: &[String], name: &str) -> Result<usize> {
    names
        .iter()
        .position(|n| n == name)
        .ok_or_else(|| Error::UnknownVariable(name.to_string()))
}

/// Fits a rank-`r` VECM, normalizing `β` on `outcome` (and, for `r > 1`, on
/// the next `r − 1` variables in dataset order) so those rows form an
/// identity block.
pub fn vecm_fit(
    data: &Dataset,
    p: usize,
    r: usize,
    det: JohansenDet,
    outcome: &str,
) -> Result<VecmModel> {
    let d = data.dim();
    if r == 0 || r >= d {
        return Err(Error::InvalidRank { rank: r, dim: d });
    }
    let variables: Vec<String> = data.names().iter().map(|s| s.to_string()).collect();
    let out = index_of(&variables, outcome)?;
    let y = data.matrix();
    let red = reduce(&y, p, det)?;
    let t = red.design.dy.nrows();

    let mut normalized_rows = vec![out];
    normalized_rows.extend((0..d).filter(|&j| j != out).take(r - 1));
    let raw = red.eigenvectors.columns(0, r).into_owned();
    let block = DMatrix::from_fn(r, r, |i, j| raw[(normalized_rows[i], j)]);
    let beta = &raw * block.try_inverse().ok_or(Error::RankDeficient)?;

    let ect_eff = &red.design.level * &beta;
    let lags = p - 1;
    let mut design = DMatrix::zeros(t, r + d * lags);
    design.columns_mut(0, r).copy_from(&ect_eff);
    design
        .columns_mut(r, d * lags)
        .copy_from(&red.design.short.columns(0, d * lags));
    let unrestricted = det == JohansenDet::UnrestrictedConstant;
    let off = usize::from(unrestricted);

    let mut equations = Vec::with_capacity(d);
    let mut residuals = DMatrix::zeros(t, d);
    let mut alpha = DMatrix::zeros(d, r);
    let mut gamma = vec![DMatrix::zeros(d, d); lags];
    let mut mu = DVector::zeros(d);
    for i in 0..d {
        let dy: Vec<f64> = red.design.dy.column(i).iter().copied().collect();
        let fit = ols_fit(&dy, &design, unrestricted)?;
        if unrestricted {
            mu[i] = fit.coefficients[0];
        }
        for j in 0..r {
            alpha[(i, j)] = fit.coefficients[off + j];
        }
        for (l, g) in gamma.iter_mut().enumerate() {
            for j in 0..d {
                g[(i, j)] = fit.coefficients[off + r + l * d + j];
            }
        }
        residuals.set_column(i, &DVector::from_column_slice(&fit.residuals));
        equations.push(fit);
    }
    let omega = residuals.transpose() * &residuals / t as f64;

    let relation_constant = if unrestricted {
        let ata = alpha.transpose() * &alpha;
        let nu = ata
            .cholesky()
            .ok_or(Error::NotPositiveDefinite)?
            .solve(&(alpha.transpose() * &mu));
        Some(nu)
    } else {
        None
    };

    let mut beta_rows = variables.clone();
    if det == JohansenDet::RestrictedConstant {
        beta_rows.push("_cons".to_string());
    }
    let n = y.nrows();
    let mut augmented = DMatrix::from_element(n, beta.nrows(), 1.0);
    augmented.columns_mut(0, d).copy_from(&y);
    let mut ect = &augmented * &beta;
    if let Some(nu) = &relation_constant {
        for mut row in ect.row_iter_mut() {
            row += nu.transpose();
        }
    }

    let beta_inference =
        beta_inference(&beta, &alpha, &omega, &red.r1, &normalized_rows, &beta_rows)?;

    Ok(VecmModel {
        variables,
        outcome: outcome.to_string(),
        rank: r,
        lag: p,
        det_spec: det,
        eigenvalues: red.eigenvalues,
        beta_rows,
        normalized_rows,
        beta,
        alpha,
        gamma,
        intercept: unrestricted.then_some(mu),
        relation_constant,
        beta_inference,
        residuals,
        omega,
        equations,
        ect,
        first_year: data.first_year(),
        design,
    })
}

/// Asymptotic standard errors of the free rows of a normalized `β`:
/// `Var(vec B) = (αᵀ Ω⁻¹ α)⁻¹ ⊗ (R₁ᶠᵀ R₁ᶠ)⁻¹`, where `R₁ᶠ` holds the free
/// columns of the concentrated lagged levels.
fn beta_inference(
    beta: &DMatrix<f64>,
    alpha: &DMatrix<f64>,
    omega: &DMatrix<f64>,
    r1: &DMatrix<f64>,
    normalized: &[usize],
    rows: &[String],
) -> Result<Vec<BetaEntry>> {
    let free: Vec<usize> = (0..beta.nrows())
        .filter(|i| !normalized.contains(i))
        .collect();
    let omega_inv_alpha = omega
        .clone()
        .cholesky()
        .ok_or(Error::NotPositiveDefinite)?
        .solve(alpha);
    let a = (alpha.transpose() * omega_inv_alpha)
        .try_inverse()
        .ok_or(Error::NotPositiveDefinite)?;
    let r1f = DMatrix::from_fn(r1.nrows(), free.len(), |t, k| r1[(t, free[k])]);
    let c = (r1f.transpose() * &r1f)
        .try_inverse()
        .ok_or(Error::NotPositiveDefinite)?;
    let mut out = Vec::new();
    for j in 0..beta.ncols() {
        for (k, &row) in free.iter().enumerate() {
            let coefficient = beta[(row, j)];
            let standard_error = (a[(j, j)] * c[(k, k)]).sqrt();
            let z = coefficient / standard_error;
            out.push(BetaEntry {
                row: rows[row].clone(),
                relation: j,
                coefficient,
                standard_error,
                z,
                p_value: stats::normal_two_sided(z),
            });
        }
    }
    Ok(out)
}

/// Error-correction term of relation `j` over the full sample,
/// `βⱼᵀ Y*_t` plus the relation constant when one is reported.
pub fn ect_series(m: &VecmModel, j: usize) -> Result<TimeSeries> {
    if j >= m.rank {
        return Err(Error::InvalidRank {
            rank: j + 1,
            dim: m.rank,
        });
    }
    let name = if m.rank == 1 {
        "ect".to_string()
    } else {
        format!("ect{}", j + 1)
    };
    TimeSeries::new(
        name,
        m.first_year,
        m.ect.column(j).iter().copied().collect(),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaldResult {
    pub target_equation: String,
    pub excluded_block: Vec<String>,
    pub chi_square: f64,
    pub df: usize,
    pub p_value: f64,
}

/// Wald test that every lagged difference of the `excluded` variables has a
/// zero coefficient in the equation for `ΔtargetY`.
pub fn wald_block_exogeneity(m: &VecmModel, target: &str, excluded: &[&str]) -> Result<WaldResult> {
    let eq = index_of(&m.variables, target)?;
    if excluded.is_empty() {
        return Err(Error::InvalidParameters("empty excluded block".into()));
    }
    if m.lag < 2 {
        return Err(Error::InvalidParameters(
            "a VECM with lag order 1 has no lagged differences".into(),
        ));
    }
    let mut cols = Vec::new();
    for name in excluded {
        let j = index_of(&m.variables, name)?;
        if j == eq {
            return Err(Error::InvalidParameters(format!(
                "`{name}` is the target of the equation"
            )));
        }
        if cols.iter().any(|&c| c == m.lagged_difference_index(1, j)) {
            return Err(Error::InvalidParameters(format!("`{name}` listed twice")));
        }
        cols.extend((1..m.lag).map(|l| m.lagged_difference_index(l, j)));
    }
    let fit = &m.equations[eq];
    let b = DVector::from_iterator(cols.len(), cols.iter().map(|&c| fit.coefficients[c]));
    let v = DMatrix::from_fn(cols.len(), cols.len(), |i, k| {
        fit.covariance[(cols[i], cols[k])]
    });
    let vinv_b = v.cholesky().ok_or(Error::NotPositiveDefinite)?.solve(&b);
    let chi_square = b.dot(&vinv_b);
    let df = cols.len();
    Ok(WaldResult {
        target_equation: target.to_string(),
        excluded_block: excluded.iter().map(|s| s.to_string()).collect(),
        chi_square,
        df,
        p_value: stats::chi_square_tail(chi_square, df as f64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc;
    use proptest::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn dataset(cols: &[Vec<f64>]) -> Dataset {
        let names: Vec<String> = (0..cols.len()).map(|i| format!("y{i}")).collect();
        let series = cols
            .iter()
            .zip(&names)
            .map(|(c, n)| TimeSeries::new(n.clone(), 1, c.clone()).unwrap())
            .collect();
        Dataset::new(series).unwrap()
    }

    /// `y0 = b·y1 + stationary noise`, `y1` a random walk, plus `extra`
    /// independent walks.
    fn cointegrated(rng: &mut ChaCha8Rng, n: usize, b: f64, extra: usize) -> Dataset {
        let y1 = mc::random_walk(rng, n, 0.0);
        let u = mc::normals(rng, n);
        let y0: Vec<f64> = y1.iter().zip(&u).map(|(a, e)| b * a + e).collect();
        let mut cols = vec![y0, y1];
        for _ in 0..extra {
            cols.push(mc::random_walk(rng, n, 0.0));
        }
        dataset(&cols)
    }

    fn walks(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Dataset {
        dataset(
            &(0..d)
                .map(|_| mc::random_walk(rng, n, 0.0))
                .collect::<Vec<_>>(),
        )
    }

    /// Squared canonical correlations between the concentrated blocks,
    /// from the singular values of `Q₀ᵀ Q₁`.
    fn canonical_oracle(y: &DMatrix<f64>, p: usize, det: JohansenDet) -> Vec<f64> {
        let design = build_design(y, p, det);
        let r0 = regress(&design.dy, &design.short).unwrap().residuals;
        let r1 = regress(&design.level, &design.short).unwrap().residuals;
        let q0 = r0.qr().q();
        let q1 = r1.qr().q();
        let mut s: Vec<f64> = (q0.transpose() * q1)
            .singular_values()
            .iter()
            .map(|v| v * v)
            .collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s.truncate(y.ncols());
        s
    }

    #[test]
    fn eigenvalues_are_squared_canonical_correlations() {
        let mut rng = mc::stream(21, 0);
        let data = cointegrated(&mut rng, 120, 2.0, 1);
        for det in [
            JohansenDet::None,
            JohansenDet::RestrictedConstant,
            JohansenDet::UnrestrictedConstant,
        ] {
            for p in 1..=3 {
                let res = johansen_test(&data, p, det).unwrap();
                let oracle = canonical_oracle(&data.matrix(), p, det);
                for (a, b) in res.eigenvalues.iter().zip(&oracle) {
                    assert!((a - b).abs() < 1e-10, "{a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn univariate_eigenvalue_is_squared_correlation() {
        let mut rng = mc::stream(22, 0);
        let y = mc::random_walk(&mut rng, 80, 0.0);
        let res = johansen_test(&dataset(&[y.clone()]), 1, JohansenDet::None).unwrap();
        let dy: Vec<f64> = y.windows(2).map(|w| w[1] - w[0]).collect();
        let lvl = &y[..79];
        let sxy: f64 = dy.iter().zip(lvl).map(|(a, b)| a * b).sum();
        let sxx: f64 = dy.iter().map(|a| a * a).sum();
        let syy: f64 = lvl.iter().map(|a| a * a).sum();
        assert!((res.eigenvalues[0] - sxy * sxy / (sxx * syy)).abs() < 1e-12);
        assert!((res.trace_stats[0] + 79.0 * (1.0 - res.eigenvalues[0]).ln()).abs() < 1e-9);
    }

    #[test]
    fn telescoping_identity() {
        let mut rng = mc::stream(23, 0);
        let data = cointegrated(&mut rng, 100, -1.5, 2);
        let res = johansen_test(&data, 2, JohansenDet::UnrestrictedConstant).unwrap();
        for r in 0..data.dim() {
            let diff = res.trace_stat(r) - res.trace_stat(r + 1);
            assert!((diff - res.max_eigen_stats[r]).abs() < 1e-8);
            assert!(res.trace_stats[r] >= res.max_eigen_stats[r]);
        }
        assert!(res.eigenvalues.iter().all(|l| (0.0..1.0).contains(l)));
        assert_eq!(res.trace_critical_5pct, vec![47.21, 29.68, 15.41, 3.76]);
    }

    #[test]
    fn sample_requirement() {
        let mut rng = mc::stream(24, 0);
        let data = walks(&mut rng, 15, 4);
        assert!(matches!(
            johansen_test(&data, 2, JohansenDet::UnrestrictedConstant),
            Err(Error::InsufficientObservations { .. })
        ));
    }

    #[test]
    fn rank_recovery() {
        let coint = mc::replicate(25, 100, |rng| {
            let data = cointegrated(rng, 500, 1.0, 0);
            johansen_test(&data, 1, JohansenDet::RestrictedConstant)
                .unwrap()
                .selected_rank
                == 1
        });
        assert!(mc::rate(&coint) >= 0.9, "{}", mc::rate(&coint));
        let none = mc::replicate(26, 100, |rng| {
            let data = walks(rng, 500, 2);
            johansen_test(&data, 1, JohansenDet::RestrictedConstant)
                .unwrap()
                .selected_rank
                == 0
        });
        assert!(mc::rate(&none) >= 0.9, "{}", mc::rate(&none));
    }

    #[test]
    fn beta_recovers_known_vector() {
        let mut rng = mc::stream(27, 0);
        let data = cointegrated(&mut rng, 1000, 2.0, 0);
        let m = vecm_fit(&data, 2, 1, JohansenDet::UnrestrictedConstant, "y0").unwrap();
        assert_eq!(m.beta[(0, 0)], 1.0);
        assert!((m.beta[(1, 0)] + 2.0).abs() < 0.1, "{}", m.beta[(1, 0)]);
        assert_eq!(m.beta_inference.len(), 1);
        assert_eq!(m.beta_inference[0].row, "y1");
    }

    #[test]
    fn beta_z_statistics_are_calibrated() {
        let flags = mc::replicate(28, 300, |rng| {
            let data = cointegrated(rng, 200, 2.0, 0);
            let m = vecm_fit(&data, 1, 1, JohansenDet::RestrictedConstant, "y0").unwrap();
            let e = m.beta_inference.iter().find(|e| e.row == "y1").unwrap();
            ((e.coefficient + 2.0) / e.standard_error).abs() > 1.96
        });
        let rate = mc::rate(&flags);
        assert!((0.02..=0.10).contains(&rate), "{rate}");
    }

    #[test]
    fn normalization_is_identity_block() {
        let mut rng = mc::stream(29, 0);
        let data = cointegrated(&mut rng, 200, 1.0, 2);
        let m = vecm_fit(&data, 2, 2, JohansenDet::RestrictedConstant, "y2").unwrap();
        assert_eq!(m.normalized_rows, vec![2, 0]);
        assert_eq!(m.beta[(2, 0)], 1.0);
        assert_eq!(m.beta[(0, 1)], 1.0);
        assert!(m.beta[(2, 1)].abs() < 1e-12 && m.beta[(0, 0)].abs() < 1e-12);
        assert_eq!(m.beta_rows.last().unwrap(), "_cons");
        assert_eq!(m.beta_inference.len(), 2 * 3);
    }

    #[test]
    fn ect_reconstruction() {
        let mut rng = mc::stream(30, 0);
        let data = cointegrated(&mut rng, 150, 0.5, 1);
        let m = vecm_fit(&data, 2, 1, JohansenDet::UnrestrictedConstant, "y0").unwrap();
        let ect = ect_series(&m, 0).unwrap();
        let y = data.matrix();
        let nu = m.relation_constant.as_ref().unwrap()[0];
        for t in 0..y.nrows() {
            let direct: f64 = (0..3).map(|j| m.beta[(j, 0)] * y[(t, j)]).sum::<f64>() + nu;
            assert!((ect.values()[t] - direct).abs() < 1e-10);
        }
        assert!(ect_series(&m, 1).is_err());
    }

    #[test]
    fn ect_is_less_persistent_than_a_walk() {
        let flags = mc::replicate(31, 100, |rng| {
            let data = cointegrated(rng, 300, 1.0, 1);
            let m = vecm_fit(&data, 2, 1, JohansenDet::UnrestrictedConstant, "y0").unwrap();
            let e = ect_series(&m, 0).unwrap();
            let v = e.values();
            let mean = e.mean();
            let num: f64 = v.windows(2).map(|w| (w[0] - mean) * (w[1] - mean)).sum();
            let den: f64 = v.iter().map(|x| (x - mean).powi(2)).sum();
            num / den < 0.9
        });
        assert!(mc::rate(&flags) >= 0.9);
    }

    #[test]
    fn invalid_rank_and_names() {
        let mut rng = mc::stream(32, 0);
        let data = cointegrated(&mut rng, 100, 1.0, 0);
        let det = JohansenDet::UnrestrictedConstant;
        assert!(matches!(
            vecm_fit(&data, 2, 0, det, "y0"),
            Err(Error::InvalidRank { .. })
        ));
        assert!(matches!(
            vecm_fit(&data, 2, 2, det, "y0"),
            Err(Error::InvalidRank { .. })
        ));
        assert!(matches!(
            vecm_fit(&data, 2, 1, det, "gdp"),
            Err(Error::UnknownVariable(_))
        ));
        let m = vecm_fit(&data, 2, 1, det, "y0").unwrap();
        assert!(wald_block_exogeneity(&m, "y0", &["y0"]).is_err());
        assert!(wald_block_exogeneity(&m, "y0", &["zz"]).is_err());
    }

    /// Homoskedastic Wald equals the scaled drop in RSS from deleting the
    /// block.
    #[test]
    fn wald_matches_restricted_regression() {
        let mut rng = mc::stream(33, 0);
        let data = cointegrated(&mut rng, 120, 1.0, 2);
        let m = vecm_fit(&data, 3, 1, JohansenDet::UnrestrictedConstant, "y0").unwrap();
        let w = wald_block_exogeneity(&m, "y1", &["y0", "y3"]).unwrap();
        assert_eq!(w.df, 4);
        let eq = &m.equations[1];
        let drop: Vec<usize> = [0, 3]
            .iter()
            .flat_map(|&j| (1..3).map(move |l| (l, j)))
            .map(|(l, j)| m.lagged_difference_index(l, j) - 1)
            .collect();
        let keep: Vec<usize> = (0..m.design.ncols())
            .filter(|c| !drop.contains(c))
            .collect();
        let x = m.design.select_columns(&keep);
        let dy: Vec<f64> = (0..eq.nobs())
            .map(|t| {
                eq.residuals[t]
                    + m.design
                        .row(t)
                        .iter()
                        .zip(&eq.coefficients[1..])
                        .map(|(a, b)| a * b)
                        .sum::<f64>()
                    + eq.coefficients[0]
            })
            .collect();
        let restricted = ols_fit(&dy, &x, true).unwrap();
        let oracle = (restricted.rss - eq.rss) / eq.sigma2;
        assert!((w.chi_square - oracle).abs() < 1e-8 * (1.0 + oracle));
        let w2 = wald_block_exogeneity(&m, "y1", &["y3", "y0"]).unwrap();
        assert!((w.chi_square - w2.chi_square).abs() < 1e-10);
        assert!((w.p_value - stats::chi_square_tail(w.chi_square, 4.0)).abs() < 1e-14);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn permutation_invariance(seed in 0u64..500) {
            let mut rng = mc::stream(seed, 1);
            let data = cointegrated(&mut rng, 80, 1.0, 1);
            let base = johansen_test(&data, 2, JohansenDet::UnrestrictedConstant).unwrap();
            let moved = data.select(&["y2", "y0", "y1"]).unwrap();
            let perm = johansen_test(&moved, 2, JohansenDet::UnrestrictedConstant).unwrap();
            for (a, b) in base.eigenvalues.iter().zip(&perm.eigenvalues) {
                prop_assert!((a - b).abs() < 1e-9);
            }
        }

        #[test]
        fn rescaling_a_variable(seed in 0u64..500, c in 0.1f64..50.0) {
            let mut rng = mc::stream(seed, 2);
            let data = cointegrated(&mut rng, 80, 1.0, 1);
            let scaled = data
                .map(|s| {
                    if s.name() == "y1" {
                        TimeSeries::new("y1", s.start_year(), s.values().iter().map(|v| v * c).collect())
                    } else {
                        Ok(s.clone())
                    }
                })
                .unwrap();
            let det = JohansenDet::RestrictedConstant;
            let a = johansen_test(&data, 2, det).unwrap();
            let b = johansen_test(&scaled, 2, det).unwrap();
            for r in 0..3 {
                prop_assert!((a.trace_stats[r] - b.trace_stats[r]).abs() < 1e-7 * (1.0 + a.trace_stats[r]));
                prop_assert!((a.max_eigen_stats[r] - b.max_eigen_stats[r]).abs() < 1e-7 * (1.0 + a.max_eigen_stats[r]));
            }
            let ma = vecm_fit(&data, 2, 1, det, "y0").unwrap();
            let mb = vecm_fit(&scaled, 2, 1, det, "y0").unwrap();
            prop_assert!((ma.beta[(1, 0)] - c * mb.beta[(1, 0)]).abs() < 1e-6 * (1.0 + ma.beta[(1, 0)].abs()));
            for row in [2, 3] {
                prop_assert!((ma.beta[(row, 0)] - mb.beta[(row, 0)]).abs() < 1e-6 * (1.0 + ma.beta[(row, 0)].abs()));
            }
        }
    }
}
