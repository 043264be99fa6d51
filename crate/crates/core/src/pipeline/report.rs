use serde::{Deserialize, Serialize};

use crate::diagnostics::DiagnosticResult;
use crate::johansen::{JohansenDet, JohansenResult, WaldResult};
use crate::unit_root::{Integration, UnitRootDet, UnitRootResult};
use crate::var::LagSelectionTable;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub schema_version: u32,
    pub tsecon_version: String,
    /// SHA-256 of the canonical TOML form of the config.
    pub config_sha256: String,
    pub data_file: String,
    pub data_sha256: String,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnSummary {
    pub series: String,
    pub source_column: String,
    pub first_value: f64,
    pub last_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataSummary {
    pub first_year: i32,
    pub last_year: i32,
    pub nobs: usize,
    pub columns: Vec<ColumnSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FcdiSection {
    pub inputs: Vec<String>,
    pub loadings: Vec<f64>,
    pub eigenvalues: Vec<f64>,
    pub explained_variance_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitRootRow {
    pub series: String,
    pub adf_level: UnitRootResult,
    pub adf_difference: UnitRootResult,
    pub pp_level: UnitRootResult,
    pub pp_difference: UnitRootResult,
    pub adf_order: Integration,
    pub pp_order: Integration,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitRootSection {
    pub level_det: UnitRootDet,
    pub difference_det: UnitRootDet,
    /// Replications of the per-sample Monte Carlo critical values, when used.
    pub simulated_critical_values: Option<usize>,
    pub rows: Vec<UnitRootRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LagSection {
    pub table: LagSelectionTable,
    pub overridden: bool,
    pub lag_used: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CointegrationSection {
    pub system: String,
    pub result: JohansenResult,
    pub rank_used: usize,
    pub rank_overridden: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaRow {
    pub relation: usize,
    pub row: String,
    pub coefficient: f64,
    /// Absent for rows fixed by the normalization.
    pub standard_error: Option<f64>,
    pub z: Option<f64>,
    pub p_value: Option<f64>,
    /// `−coefficient` for free variable rows: the effect on the outcome once
    /// the relation is solved for it.
    pub long_run_effect: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VecmSummary {
    pub system: String,
    pub variables: Vec<String>,
    pub outcome: String,
    pub rank: usize,
    pub lag: usize,
    pub det_spec: JohansenDet,
    pub n_effective: usize,
    pub beta: Vec<BetaRow>,
    /// Constant of each relation under an unrestricted constant.
    pub relation_constants: Vec<f64>,
    /// `d × r`.
    pub alpha: Vec<Vec<f64>>,
    pub ect_expressions: Vec<String>,
    /// ADF test on the first error-correction term.
    pub ect_adf: UnitRootResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum VecmSection {
    Fitted(Box<VecmSummary>),
    Skipped {
        system: String,
        rank: usize,
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefRow {
    pub name: String,
    pub coefficient: f64,
    pub standard_error: f64,
    pub t: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OlsSection {
    pub name: String,
    pub dependent: String,
    /// Slopes first, constant last.
    pub coefficients: Vec<CoefRow>,
    pub r_squared: f64,
    pub adj_r_squared: f64,
    pub f_stat: f64,
    pub f_p_value: f64,
    pub nobs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CausalitySection {
    Fitted {
        lag: usize,
        rank: usize,
        tests: Vec<WaldResult>,
    },
    Skipped {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum DiagnosticsSection {
    Fitted {
        lm: Vec<DiagnosticResult>,
        jarque_bera: Vec<DiagnosticResult>,
    },
    Skipped {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceCheck {
    pub label: String,
    /// JSON pointer into this report.
    pub pointer: String,
    pub reported: f64,
    pub computed: Option<f64>,
    /// Relative tolerance, or absolute when `absolute` is set.
    pub tolerance: f64,
    pub absolute: bool,
    pub within_tolerance: bool,
}

/// Internal consistency of a published statistic and its printed p-value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PValueCheck {
    pub label: String,
    pub statistic: f64,
    pub df: usize,
    pub printed_p_value: f64,
    pub computed_p_value: f64,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceSection {
    pub source: String,
    pub checks: Vec<ReferenceCheck>,
    pub p_values: Vec<PValueCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub provenance: Provenance,
    pub data: DataSummary,
    pub fcdi: FcdiSection,
    pub unit_roots: UnitRootSection,
    pub lag_selection: LagSection,
    pub cointegration: Vec<CointegrationSection>,
    pub vecm: Vec<VecmSection>,
    pub ols: Vec<OlsSection>,
    pub causality: CausalitySection,
    pub diagnostics: DiagnosticsSection,
    pub reference: Option<ReferenceSection>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn vecm_fitted(&self, system: &str) -> Option<&VecmSummary> {
        self.vecm.iter().find_map(|v| match v {
            VecmSection::Fitted(s) if s.system == system => Some(s.as_ref()),
            _ => None,
        })
    }

    pub fn cointegration(&self, system: &str) -> Option<&CointegrationSection> {
        self.cointegration.iter().find(|c| c.system == system)
    }
}
