//! Augmented Dickey–Fuller and Phillips–Perron unit-root tests.
//!
//! Both tests share the null hypothesis that the series has a unit root and
//! reject in the left tail of the Dickey–Fuller distribution. The ADF
//! regression is
//!
//! ```text
//! ΔY_t = μ (+ β t) + ρ Y_{t−1} + Σ_{i=1}^{k} α_i ΔY_{t−i} + ε_t
//! ```
//!
//! and the statistic is the t-ratio on `ρ`. Phillips–Perron fits the `k = 0`
//! regression and corrects the t-ratio with a Bartlett long-run variance of
//! the residuals instead of adding lagged differences.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::cv_tables::{self, CriticalValues, Family, Level};
use crate::error::{Error, Result};
use crate::series::{difference, TimeSeries};
use crate::stats::{self, ols_fit};

/// Deterministic terms in the test regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitRootDet {
    #[default]
    Constant,
    ConstantTrend,
}

impl UnitRootDet {
    pub fn as_str(&self) -> &'static str {
        match self {
            UnitRootDet::Constant => "constant",
            UnitRootDet::ConstantTrend => "constant_trend",
        }
    }
}

impl FromStr for UnitRootDet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constant" => Ok(UnitRootDet::Constant),
            "constant_trend" => Ok(UnitRootDet::ConstantTrend),
            _ => Err(Error::Config(format!(
                "unknown unit-root deterministic spec `{s}`"
            ))),
        }
    }
}

/// ADF augmentation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdfLags {
    Fixed(usize),
    /// Minimize AIC over `0..=⌊12 (T/100)^{1/4}⌋` on a common sample.
    #[default]
    Aic,
}

/// Phillips–Perron Bartlett bandwidth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bandwidth {
    Fixed(usize),
    /// `⌊4 (T/100)^{2/9}⌋`.
    #[default]
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitRootTest {
    Adf(AdfLags),
    Pp(Bandwidth),
}

impl UnitRootTest {
    pub fn name(&self) -> &'static str {
        match self {
            UnitRootTest::Adf(_) => "ADF",
            UnitRootTest::Pp(_) => "PP",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    /// Most stringent level at which the unit root is rejected.
    RejectUnitRootAt(Level),
    FailToReject,
}

impl Decision {
    pub fn from_statistic(statistic: f64, cv: &CriticalValues) -> Self {
        Level::ALL
            .into_iter()
            .find(|l| statistic < cv.at(*l))
            .map_or(Decision::FailToReject, Decision::RejectUnitRootAt)
    }

    /// Whether the unit root is rejected at `level` or a stricter level.
    pub fn rejects_at(&self, level: Level) -> bool {
        matches!(self, Decision::RejectUnitRootAt(l) if *l <= level)
    }

    pub fn stars(&self) -> &'static str {
        match self {
            Decision::RejectUnitRootAt(l) => l.stars(),
            Decision::FailToReject => "",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitRootResult {
    pub test: UnitRootTest,
    pub statistic: f64,
    pub det_spec: UnitRootDet,
    /// ADF augmentation order or PP bandwidth actually used.
    pub lags_or_bandwidth: usize,
    pub critical_values: CriticalValues,
    pub decision: Decision,
    pub n_effective: usize,
}

impl UnitRootResult {
    /// Re-evaluates the decision against another set of critical values, for
    /// example a Monte Carlo table simulated at the sample size at hand.
    pub fn with_critical_values(mut self, cv: CriticalValues) -> Self {
        self.critical_values = cv;
        self.decision = Decision::from_statistic(self.statistic, &cv);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Integration {
    I0,
    I1,
    Higher,
}

impl fmt::Display for Integration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Integration::I0 => "I(0)",
            Integration::I1 => "I(1)",
            Integration::Higher => "I(2+)",
        })
    }
}

/// ADF design on observations `first..n` of `y`: returns `(ΔY_t, X)` where
/// the columns of `X` are the deterministic terms (without the constant,
/// which `ols_fit` adds), `Y_{t−1}` and `ΔY_{t−1..t−lags}`.
fn adf_design(y: &[f64], det: UnitRootDet, lags: usize, first: usize) -> (Vec<f64>, DMatrix<f64>) {
    let n = y.len();
    let rows = n - first;
    let trend = usize::from(det == UnitRootDet::ConstantTrend);
    let level_col = trend;
    let mut x = DMatrix::zeros(rows, trend + 1 + lags);
    let mut dy = Vec::with_capacity(rows);
    for (r, t) in (first..n).enumerate() {
        dy.push(y[t] - y[t - 1]);
        if trend == 1 {
            x[(r, 0)] = t as f64;
        }
        x[(r, level_col)] = y[t - 1];
        for i in 1..=lags {
            x[(r, level_col + i)] = y[t - i] - y[t - i - 1];
        }
    }
    (dy, x)
}

fn level_coefficient(det: UnitRootDet) -> usize {
    // intercept, [trend], Y_{t-1}
    match det {
        UnitRootDet::Constant => 1,
        UnitRootDet::ConstantTrend => 2,
    }
}

/// Dickey–Fuller t-ratio (no augmentation) of a raw slice.
pub fn dickey_fuller_statistic(y: &[f64], det: UnitRootDet) -> Result<f64> {
    if y.len() < 4 {
        return Err(Error::SeriesTooShort {
            needed: 4,
            got: y.len(),
        });
    }
    let (dy, x) = adf_design(y, det, 0, 1);
    let fit = ols_fit(&dy, &x, true)?;
    Ok(fit.t_stats[level_coefficient(det)])
}

/// Upper end of the AIC lag search, `⌊12 (T/100)^{1/4}⌋`, capped so the
/// largest candidate still satisfies the length requirement.
pub fn adf_max_lag(n: usize) -> usize {
    let rule = (12.0 * (n as f64 / 100.0).powf(0.25)).floor() as usize;
    rule.min(n.saturating_sub(10))
}

fn select_adf_lag(y: &[f64], det: UnitRootDet) -> Result<usize> {
    let max = adf_max_lag(y.len());
    let first = max + 1;
    let mut best = (f64::INFINITY, 0);
    for k in 0..=max {
        let (dy, x) = adf_design(y, det, k, first);
        let fit = ols_fit(&dy, &x, true)?;
        let m = dy.len() as f64;
        let params = fit.coefficients.len() as f64;
        let aic = m * (fit.rss / m).ln() + 2.0 * params;
        if aic < best.0 {
            best = (aic, k);
        }
    }
    Ok(best.1)
}

/// Augmented Dickey–Fuller test with bundled critical values.
pub fn adf_test(s: &TimeSeries, det: UnitRootDet, lags: AdfLags) -> Result<UnitRootResult> {
    let y = s.values();
    let n = y.len();
    let k = match lags {
        AdfLags::Fixed(k) => k,
        AdfLags::Aic => {
            if n < 10 {
                return Err(Error::SeriesTooShort { needed: 10, got: n });
            }
            select_adf_lag(y, det)?
        }
    };
    if n < k + 10 {
        return Err(Error::SeriesTooShort {
            needed: k + 10,
            got: n,
        });
    }
    let (dy, x) = adf_design(y, det, k, k + 1);
    let fit = ols_fit(&dy, &x, true)?;
    let statistic = fit.t_stats[level_coefficient(det)];
    let n_effective = n - 1 - k;
    let cv = cv_tables::lookup_all(Family::DickeyFuller(det), n_effective)?;
    Ok(UnitRootResult {
        test: UnitRootTest::Adf(lags),
        statistic,
        det_spec: det,
        lags_or_bandwidth: k,
        critical_values: cv,
        decision: Decision::from_statistic(statistic, &cv),
        n_effective,
    })
}

/// Phillips–Perron `Z_t` test with bundled critical values.
///
/// With `γ₀ = Σû²/T`, `λ²` the Bartlett long-run variance of the residuals
/// and `s² = Σû²/(T−k)`,
/// `Z_t = √(γ₀/λ²)·t_ρ − (λ² − γ₀)·T·se(ρ) / (2 λ s)`.
pub fn pp_test(s: &TimeSeries, det: UnitRootDet, bandwidth: Bandwidth) -> Result<UnitRootResult> {
    let y = s.values();
    let n = y.len();
    if n < 12 {
        return Err(Error::SeriesTooShort { needed: 12, got: n });
    }
    let (dy, x) = adf_design(y, det, 0, 1);
    let fit = ols_fit(&dy, &x, true)?;
    let t = dy.len();
    let bw = match bandwidth {
        Bandwidth::Fixed(b) => b,
        Bandwidth::Auto => stats::bandwidth_for_len(t)?,
    };
    let idx = level_coefficient(det);
    let gamma0 = fit.rss / t as f64;
    let lambda2 = stats::newey_west_lrv(&fit.residuals, bw)?;
    if !(lambda2 > 0.0) {
        return Err(Error::InvalidParameters(
            "non-positive long-run variance of the PP residuals".into(),
        ));
    }
    let lambda = lambda2.sqrt();
    let s = fit.sigma2.sqrt();
    let statistic = (gamma0 / lambda2).sqrt() * fit.t_stats[idx]
        - (lambda2 - gamma0) * t as f64 * fit.standard_errors[idx] / (2.0 * lambda * s);
    let cv = cv_tables::lookup_all(Family::DickeyFuller(det), t)?;
    Ok(UnitRootResult {
        test: UnitRootTest::Pp(bandwidth),
        statistic,
        det_spec: det,
        lags_or_bandwidth: bw,
        critical_values: cv,
        decision: Decision::from_statistic(statistic, &cv),
        n_effective: t,
    })
}

pub fn unit_root_test(
    s: &TimeSeries,
    test: UnitRootTest,
    det: UnitRootDet,
) -> Result<UnitRootResult> {
    match test {
        UnitRootTest::Adf(lags) => adf_test(s, det, lags),
        UnitRootTest::Pp(bw) => pp_test(s, det, bw),
    }
}

/// Order of integration at the 5% level from a level test and a
/// first-difference test: `I0` if the level rejects, `I1` if only the
/// difference rejects, `Higher` otherwise.
pub fn integration_order(level: &UnitRootResult, difference: &UnitRootResult) -> Integration {
    if level.decision.rejects_at(Level::Five) {
        Integration::I0
    } else if difference.decision.rejects_at(Level::Five) {
        Integration::I1
    } else {
        Integration::Higher
    }
}

/// Runs the level and first-difference tests and applies
/// [`integration_order`]. Levels use `det`; the differenced series always
/// uses a constant only.
pub fn classify_integration(
    s: &TimeSeries,
    test: UnitRootTest,
    det: UnitRootDet,
) -> Result<Integration> {
    let level = unit_root_test(s, test, det)?;
    let diff = unit_root_test(&difference(s, 1)?, test, UnitRootDet::Constant)?;
    Ok(integration_order(&level, &diff))
}
