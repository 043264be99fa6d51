//! Config-driven pipeline from a WDI extract to a rendered report.
//!
//! Stages run in dependency order: ingest, log transforms, FCDI, unit-root
//! suite, lag selection, Johansen tests, VECM, OLS, Wald grid,
//! diagnostics, reference comparison. A failing stage aborts the run with
//! its name attached to the error.

pub mod config;
pub mod ingest;
pub mod plot;
pub mod render;
pub mod report;
pub mod synthetic;

use std::path::{Path, PathBuf};

use serde::Deserialize;

pub use config::{Layout, OutputFormat, PipelineConfig, Role};
pub use ingest::{ingest_wdi_csv, parse_wdi_csv};
pub use plot::emit_plots;
pub use render::{render_part, render_report, Part};
pub use report::*;
pub use synthetic::synthetic_wdi_csv;

use crate::cv_tables;
use crate::diagnostics::{jarque_bera, lm_autocorrelation_with_design};
use crate::error::{Error, Result};
use crate::fcdi::{build_fcdi, PcaResult};
use crate::johansen::{
    ect_series, johansen_test, vecm_fit, wald_block_exogeneity, VecmModel, WaldResult,
};
use crate::series::{difference, log_transform, Dataset, TimeSeries};
use crate::stats::{self, ols_fit};
use crate::unit_root::{
    adf_test, integration_order, pp_test, AdfLags, Bandwidth, UnitRootDet, UnitRootResult,
};
use crate::var::select_lag;

/// Variables of the main cointegrating system, outcome first.
pub const SYSTEM_VARIABLES: [&str; 4] = ["lngdp", "lnfdi", "lnrem", "lnaid"];
pub const MAIN_SYSTEM: &str = "lngdp_lnfdi_lnrem_lnaid";
pub const FCDI_SYSTEM: &str = "lngdp_fcdi";
const OUTCOME: &str = "lngdp";

/// Ingested and transformed inputs shared by every stage.
#[derive(Debug, Clone)]
pub struct Prepared {
    /// Raw series in current US dollars, plus `gdp_growth` when mapped.
    pub raw: Dataset,
    /// `lngdp, lnfdi, lnrem, lnaid`.
    pub logs: Dataset,
    pub fcdi: PcaResult,
    pub data_file: String,
    pub data_sha256: String,
}

impl Prepared {
    /// `lngdp` and `fcdi` on a common span.
    pub fn fcdi_system(&self) -> Result<Dataset> {
        Dataset::new(vec![
            self.logs.get(OUTCOME).expect("lngdp present").clone(),
            self.fcdi.scores.clone(),
        ])
    }
}

trait Staged<T> {
    fn stage(self, name: &'static str) -> Result<T>;
}

impl<T> Staged<T> for Result<T> {
    fn stage(self, name: &'static str) -> Result<T> {
        self.map_err(|e| e.in_stage(name))
    }
}

/// Ingest, log transforms and FCDI construction.
pub fn prepare(cfg: &PipelineConfig) -> Result<Prepared> {
    let path = cfg.data_file();
    let bytes = std::fs::read(&path).map_err(Error::from).stage("ingest")?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
        .stage("ingest")?;
    let raw = parse_wdi_csv(&text, &cfg.variables, cfg.span, cfg.layout).stage("ingest")?;
    let logs = raw
        .select(&["gdp", "fdi", "rem", "aid"])
        .and_then(|d| d.map(log_transform))
        .stage("transform")?;
    let fcdi = build_fcdi(
        raw.get("fdi").expect("fdi present"),
        raw.get("rem").expect("rem present"),
        raw.get("aid").expect("aid present"),
    )
    .stage("fcdi")?;
    Ok(Prepared {
        raw,
        logs,
        fcdi,
        data_file: cfg.data_path.display().to_string(),
        data_sha256: ingest::sha256_hex(&bytes),
    })
}

/// Swaps in critical values simulated for a series of `nobs` points when
/// `reps` is set.
fn simulated(
    result: UnitRootResult,
    nobs: usize,
    reps: Option<usize>,
    seed: u64,
) -> Result<UnitRootResult> {
    let Some(reps) = reps else {
        return Ok(result);
    };
    let table = cv_tables::simulate_df_quantiles(result.det_spec, nobs, reps, seed)?;
    Ok(result.with_critical_values(table.values))
}

/// ADF and PP on levels and first differences of the five modelled series.
pub fn unit_root_section(p: &Prepared, cfg: &PipelineConfig) -> Result<UnitRootSection> {
    let order = ["lngdp", "fcdi", "lnfdi", "lnaid", "lnrem"];
    let reps = cfg.simulate_critical_values;
    let mut rows = Vec::with_capacity(order.len());
    for name in order {
        let s = if name == "fcdi" {
            &p.fcdi.scores
        } else {
            p.logs.get(name).expect("log series present")
        };
        let d = difference(s, 1)?;
        let level_det = cfg.unit_root_det;
        let diff_det = UnitRootDet::Constant;
        let (nl, nd, seed) = (s.len(), d.len(), cfg.seed);
        let adf_level = simulated(adf_test(s, level_det, AdfLags::Aic)?, nl, reps, seed)?;
        let adf_difference = simulated(adf_test(&d, diff_det, AdfLags::Aic)?, nd, reps, seed)?;
        let pp_level = simulated(pp_test(s, level_det, Bandwidth::Auto)?, nl, reps, seed)?;
        let pp_difference = simulated(pp_test(&d, diff_det, Bandwidth::Auto)?, nd, reps, seed)?;
        rows.push(UnitRootRow {
            series: name.to_string(),
            adf_order: integration_order(&adf_level, &adf_difference),
            pp_order: integration_order(&pp_level, &pp_difference),
            adf_level,
            adf_difference,
            pp_level,
            pp_difference,
        });
    }
    Ok(UnitRootSection {
        level_det: cfg.unit_root_det,
        difference_det: UnitRootDet::Constant,
        simulated_critical_values: reps,
        rows,
    })
}

pub fn lag_section(p: &Prepared, cfg: &PipelineConfig) -> Result<LagSection> {
    let table = select_lag(&p.logs, cfg.max_lag)?;
    let lag_used = cfg.fixed_lag.unwrap_or(table.chosen_lag.max(1));
    Ok(LagSection {
        overridden: cfg.fixed_lag.is_some(),
        lag_used,
        table,
    })
}

pub fn cointegration_sections(
    p: &Prepared,
    cfg: &PipelineConfig,
    lag: usize,
) -> Result<Vec<CointegrationSection>> {
    let main = johansen_test(&p.logs, lag, cfg.johansen_det)?;
    let fc = johansen_test(&p.fcdi_system()?, lag, cfg.johansen_det)?;
    Ok(vec![
        CointegrationSection {
            system: MAIN_SYSTEM.to_string(),
            rank_used: cfg.rank.unwrap_or(main.selected_rank),
            rank_overridden: cfg.rank.is_some(),
            result: main,
        },
        CointegrationSection {
            system: FCDI_SYSTEM.to_string(),
            rank_used: fc.selected_rank,
            rank_overridden: false,
            result: fc,
        },
    ])
}

fn fmt_term(coef: f64, name: &str) -> String {
    let sign = if coef < 0.0 { "-" } else { "+" };
    format!(" {sign} {:.4}·{name}", coef.abs())
}

/// Summary of a fitted VECM, with the ADF test of its first
/// error-correction term.
pub fn summarize_vecm(system: &str, m: &VecmModel) -> Result<VecmSummary> {
    let mut beta = Vec::new();
    for j in 0..m.rank {
        for (i, row) in m.beta_rows.iter().enumerate() {
            let inference = m
                .beta_inference
                .iter()
                .find(|e| e.relation == j && &e.row == row);
            let coefficient = m.beta[(i, j)];
            beta.push(BetaRow {
                relation: j,
                row: row.clone(),
                coefficient,
                standard_error: inference.map(|e| e.standard_error),
                z: inference.map(|e| e.z),
                p_value: inference.map(|e| e.p_value),
                long_run_effect: (inference.is_some() && row != "_cons").then_some(-coefficient),
            });
        }
    }
    let relation_constants: Vec<f64> = m
        .relation_constant
        .as_ref()
        .map(|v| v.iter().copied().collect())
        .unwrap_or_default();
    let ect_expressions = (0..m.rank)
        .map(|j| {
            let mut s = format!("ECT{}(t-1) =", j + 1);
            for (i, row) in m.beta_rows.iter().enumerate() {
                let c = m.beta[(i, j)];
                if row == "_cons" {
                    s.push_str(&format!(
                        " {} {:.4}",
                        if c < 0.0 { "-" } else { "+" },
                        c.abs()
                    ));
                } else {
                    s.push_str(&fmt_term(c, &format!("{row}(t-1)")));
                }
            }
            if let Some(c) = relation_constants.get(j) {
                s.push_str(&format!(
                    " {} {:.4}",
                    if *c < 0.0 { "-" } else { "+" },
                    c.abs()
                ));
            }
            s.replacen("= + ", "= ", 1)
        })
        .collect();
    let ect_adf = adf_test(&ect_series(m, 0)?, UnitRootDet::Constant, AdfLags::Aic)?;
    Ok(VecmSummary {
        system: system.to_string(),
        variables: m.variables.clone(),
        outcome: m.outcome.clone(),
        rank: m.rank,
        lag: m.lag,
        det_spec: m.det_spec,
        n_effective: m.n_effective(),
        beta,
        relation_constants,
        alpha: m
            .alpha
            .row_iter()
            .map(|r| r.iter().copied().collect())
            .collect(),
        ect_expressions,
        ect_adf,
    })
}

fn skip_reason(rank: usize, dim: usize) -> Option<String> {
    if rank == 0 {
        Some(format!(
            "rank 0 — VECM skipped: no cointegrating relation among {dim} variables"
        ))
    } else if rank >= dim {
        Some(format!(
            "rank {rank} — VECM skipped: full rank, the system is stationary in levels"
        ))
    } else {
        None
    }
}

fn vecm_section(
    data: &Dataset,
    system: &str,
    lag: usize,
    rank: usize,
    cfg: &PipelineConfig,
) -> Result<(VecmSection, Option<VecmModel>)> {
    if let Some(reason) = skip_reason(rank, data.dim()) {
        return Ok((
            VecmSection::Skipped {
                system: system.to_string(),
                rank,
                reason,
            },
            None,
        ));
    }
    let m = vecm_fit(data, lag, rank, cfg.johansen_det, OUTCOME)?;
    Ok((
        VecmSection::Fitted(Box::new(summarize_vecm(system, &m)?)),
        Some(m),
    ))
}

fn ols_section(name: &str, y: &TimeSeries, regressors: &[&TimeSeries]) -> Result<OlsSection> {
    let mut cols = vec![y.clone()];
    cols.extend(regressors.iter().map(|s| (*s).clone()));
    let data = Dataset::new(cols)?;
    let m = data.matrix();
    let x = m.columns(1, regressors.len()).into_owned();
    let yv: Vec<f64> = m.column(0).iter().copied().collect();
    let fit = ols_fit(&yv, &x, true)?;
    let mut names: Vec<String> = regressors.iter().map(|s| s.name().to_string()).collect();
    names.push("_cons".to_string());
    let k = regressors.len();
    let order: Vec<usize> = (1..=k).chain(std::iter::once(0)).collect();
    let coefficients = order
        .iter()
        .zip(names)
        .map(|(&i, name)| CoefRow {
            name,
            coefficient: fit.coefficients[i],
            standard_error: fit.standard_errors[i],
            t: fit.t_stats[i],
            p_value: fit.p_values[i],
        })
        .collect();
    Ok(OlsSection {
        name: name.to_string(),
        dependent: y.name().to_string(),
        coefficients,
        r_squared: fit.r_squared,
        adj_r_squared: fit.adj_r_squared,
        f_stat: fit.f_stat,
        f_p_value: fit.f_p_value,
        nobs: fit.nobs(),
    })
}

pub fn ols_sections(p: &Prepared) -> Result<Vec<OlsSection>> {
    let l = |n: &str| p.logs.get(n).expect("log series present");
    Ok(vec![
        ols_section("levels", l("lngdp"), &[l("lnfdi"), l("lnrem"), l("lnaid")])?,
        ols_section("fcdi", l("lngdp"), &[&p.fcdi.scores])?,
    ])
}

/// Wald block-exogeneity grid: every other variable singly, then all of
/// them, in every equation.
pub fn causality_tests(m: &VecmModel) -> Result<Vec<WaldResult>> {
    let mut out = Vec::new();
    for target in &m.variables {
        let others: Vec<&str> = m
            .variables
            .iter()
            .filter(|v| *v != target)
            .map(String::as_str)
            .collect();
        for o in &others {
            out.push(wald_block_exogeneity(m, target, &[o])?);
        }
        out.push(wald_block_exogeneity(m, target, &others)?);
    }
    Ok(out)
}

pub fn diagnostics_section(m: &VecmModel, lm_lags: &[usize]) -> Result<DiagnosticsSection> {
    let design = m.design.clone().insert_column(0, 1.0);
    let lm = lm_lags
        .iter()
        .map(|&j| lm_autocorrelation_with_design(&m.residuals, &design, j))
        .collect::<Result<Vec<_>>>()?;
    let names: Vec<String> = m.variables.iter().map(|v| format!("D.{v}")).collect();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    Ok(DiagnosticsSection::Fitted {
        lm,
        jarque_bera: jarque_bera(&m.residuals, &names)?,
    })
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReferenceFile {
    source: String,
    #[serde(default)]
    check: Vec<ReferenceEntry>,
    #[serde(default)]
    p_value: Vec<PValueEntry>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReferenceEntry {
    label: String,
    pointer: String,
    reported: f64,
    tolerance: f64,
    #[serde(default)]
    absolute: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct PValueEntry {
    label: String,
    statistic: f64,
    df: usize,
    printed: f64,
}

/// Compares report values with published ones listed in a TOML file of
/// `[[check]]` (JSON pointer, reported value, tolerance) and `[[p_value]]`
/// (statistic, df, printed p-value) entries.
pub fn reference_section(
    report_json: &serde_json::Value,
    reference_toml: &str,
) -> Result<ReferenceSection> {
    let file: ReferenceFile =
        toml::from_str(reference_toml).map_err(|e| Error::Config(e.to_string()))?;
    let checks = file
        .check
        .into_iter()
        .map(|c| {
            let computed = report_json.pointer(&c.pointer).and_then(|v| v.as_f64());
            let within_tolerance = computed.is_some_and(|v| {
                let err = (v - c.reported).abs();
                if c.absolute {
                    err <= c.tolerance
                } else {
                    err <= c.tolerance * c.reported.abs()
                }
            });
            ReferenceCheck {
                label: c.label,
                pointer: c.pointer,
                reported: c.reported,
                computed,
                tolerance: c.tolerance,
                absolute: c.absolute,
                within_tolerance,
            }
        })
        .collect();
    let p_values = file
        .p_value
        .into_iter()
        .map(|e| {
            let computed = stats::chi_square_tail(e.statistic, e.df as f64);
            PValueCheck {
                label: e.label,
                statistic: e.statistic,
                df: e.df,
                printed_p_value: e.printed,
                computed_p_value: computed,
                consistent: (computed - e.printed).abs() < 5e-4,
            }
        })
        .collect();
    Ok(ReferenceSection {
        source: file.source,
        checks,
        p_values,
    })
}

fn notes(cfg: &PipelineConfig) -> Vec<String> {
    vec![
        "FCDI is the first principal component of the standardized logs of FDI, remittance and aid (correlation-matrix PCA), signed so the loadings sum to a positive number.".to_string(),
        format!(
            "Unit-root tests use a {} specification on levels and a constant on first differences; ADF lags minimize AIC over 0..floor(12(T/100)^(1/4)); PP uses a Bartlett kernel with bandwidth floor(4(T/100)^(2/9)).",
            cfg.unit_root_det.as_str()
        ),
        "Significance: *** 1%, ** 5%, * 10%.".to_string(),
        format!(
            "Johansen tests use the {} specification; the rank is the first r whose trace statistic is below its 5% critical value.",
            cfg.johansen_det.as_str()
        ),
        "Normalized beta is reported with raw signs; the long-run effect on lngdp is the negated coefficient.".to_string(),
        "The Wald grid uses the equation's OLS covariance; the LM statistic is T·ln(|Σ̂|/|Σ̃|) on the VECM design with zero pre-sample residuals; Jarque–Bera uses raw residuals per equation.".to_string(),
    ]
}

pub fn config_sha256(cfg: &PipelineConfig) -> Result<String> {
    let canonical = toml::to_string(cfg).map_err(|e| Error::Config(e.to_string()))?;
    Ok(ingest::sha256_hex(canonical.as_bytes()))
}

/// Runs every stage and assembles the report.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<Report> {
    let p = prepare(cfg)?;
    run_prepared(cfg, &p)
}

/// Provenance block and input summary.
pub fn data_summary(cfg: &PipelineConfig, p: &Prepared) -> Result<(Provenance, DataSummary)> {
    let provenance = Provenance {
        schema_version: SCHEMA_VERSION,
        tsecon_version: env!("CARGO_PKG_VERSION").to_string(),
        config_sha256: config_sha256(cfg)?,
        data_file: p.data_file.clone(),
        data_sha256: p.data_sha256.clone(),
        seed: cfg.seed,
    };
    let data = DataSummary {
        first_year: p.raw.first_year(),
        last_year: p.raw.last_year(),
        nobs: p.raw.len(),
        columns: p
            .raw
            .series()
            .iter()
            .map(|s| ColumnSummary {
                series: s.name().to_string(),
                source_column: cfg
                    .variables
                    .iter()
                    .find(|(_, r)| r.series_name() == s.name())
                    .map(|(c, _)| c.clone())
                    .unwrap_or_default(),
                first_value: s.values()[0],
                last_value: s.values()[s.len() - 1],
            })
            .collect(),
    };
    Ok((provenance, data))
}

pub fn fcdi_section(p: &Prepared) -> FcdiSection {
    FcdiSection {
        inputs: p.fcdi.variables.clone(),
        loadings: p.fcdi.loadings.iter().copied().collect(),
        eigenvalues: p.fcdi.eigenvalues.clone(),
        explained_variance_ratio: p.fcdi.explained_variance_ratio,
    }
}

/// [`run_pipeline`] on already prepared inputs.
pub fn run_prepared(cfg: &PipelineConfig, p: &Prepared) -> Result<Report> {
    let (provenance, data) = data_summary(cfg, p)?;
    let fcdi = fcdi_section(p);
    let unit_roots = unit_root_section(p, cfg).stage("unitroot")?;
    let lag_selection = lag_section(p, cfg).stage("lagselect")?;
    let lag = lag_selection.lag_used;
    let cointegration = cointegration_sections(p, cfg, lag).stage("johansen")?;

    let main_rank = cointegration[0].rank_used;
    let fc_rank = cointegration[1].rank_used;
    let (main_vecm, main_model) =
        vecm_section(&p.logs, MAIN_SYSTEM, lag, main_rank, cfg).stage("vecm")?;
    let fc_data = p.fcdi_system().stage("vecm")?;
    let (fc_vecm, _) = vecm_section(&fc_data, FCDI_SYSTEM, lag, fc_rank, cfg).stage("vecm")?;
    let ols = ols_sections(p).stage("ols")?;

    let causality = match main_model.as_ref() {
        None => CausalitySection::Skipped {
            reason: skip_reason(main_rank, p.logs.dim()).unwrap_or_default(),
        },
        Some(_) => {
            let clag = cfg.causality_lag.unwrap_or(lag + 1);
            let m =
                vecm_fit(&p.logs, clag, main_rank, cfg.johansen_det, OUTCOME).stage("causality")?;
            CausalitySection::Fitted {
                lag: clag,
                rank: main_rank,
                tests: causality_tests(&m).stage("causality")?,
            }
        }
    };
    let diagnostics = match main_model.as_ref() {
        None => DiagnosticsSection::Skipped {
            reason: skip_reason(main_rank, p.logs.dim()).unwrap_or_default(),
        },
        Some(m) => diagnostics_section(m, &cfg.lm_lags).stage("diagnose")?,
    };

    let mut report = Report {
        provenance,
        data,
        fcdi,
        unit_roots,
        lag_selection,
        cointegration,
        vecm: vec![main_vecm, fc_vecm],
        ols,
        causality,
        diagnostics,
        reference: None,
        notes: notes(cfg),
    };
    if let Some(path) = &cfg.reference {
        let text = std::fs::read_to_string(cfg.resolve(path))
            .map_err(Error::from)
            .stage("reference")?;
        let json = serde_json::to_value(&report)
            .map_err(Error::from)
            .stage("reference")?;
        report.reference = Some(reference_section(&json, &text).stage("reference")?);
    }
    Ok(report)
}

/// Writes the configured report formats and the plots into the output
/// directory and returns the written paths.
pub fn write_outputs(
    p: &Prepared,
    report: &Report,
    formats: &[OutputFormat],
    out: &Path,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out)
        .map_err(Error::from)
        .stage("report")?;
    let mut written = Vec::new();
    let mut formats = formats.to_vec();
    formats.sort();
    formats.dedup();
    for f in formats {
        let path = out.join(f.file_name());
        std::fs::write(&path, render_report(report, f)?)
            .map_err(Error::from)
            .stage("report")?;
        written.push(path);
    }
    written.extend(emit_plots(&p.raw, out).stage("plot")?);
    Ok(written)
}
