//! Text, Markdown and JSON renderings of a [`Report`].

use std::fmt::Write;

use serde::Serialize;

use super::config::OutputFormat;
use super::report::*;
use crate::cv_tables::Level;
use crate::error::Result;
use crate::unit_root::UnitRootResult;

/// Stars for a p-value: `***` below 1%, `**` below 5%, `*` below 10%.
pub fn p_stars(p: f64) -> &'static str {
    Level::ALL
        .into_iter()
        .find(|l| p < l.alpha())
        .map_or("", |l| l.stars())
}

pub fn render_report(report: &Report, format: OutputFormat) -> Result<String> {
    Ok(match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(report)?;
            s.push('\n');
            s
        }
        OutputFormat::Text => Renderer { markdown: false }.report(report),
        OutputFormat::Markdown => Renderer { markdown: true }.report(report),
    })
}

/// A single section, for the per-stage CLI verbs.
#[derive(Debug, Clone, Copy, Serialize)]
#[serde(untagged)]
pub enum Part<'a> {
    Data {
        provenance: &'a Provenance,
        data: &'a DataSummary,
    },
    Fcdi(&'a FcdiSection),
    UnitRoots(&'a UnitRootSection),
    Lags(&'a LagSection),
    Cointegration(&'a [CointegrationSection]),
    Vecm(&'a [VecmSection]),
    Ols(&'a [OlsSection]),
    Causality(&'a CausalitySection),
    Diagnostics(&'a DiagnosticsSection),
}

pub fn render_part(part: Part<'_>, format: OutputFormat) -> Result<String> {
    let r = Renderer {
        markdown: format == OutputFormat::Markdown,
    };
    let mut out = String::new();
    match part {
        _ if format == OutputFormat::Json => {
            out = serde_json::to_string_pretty(&part)?;
            out.push('\n');
        }
        Part::Data { provenance, data } => r.provenance(&mut out, provenance, data),
        Part::Fcdi(f) => r.fcdi(&mut out, f),
        Part::UnitRoots(u) => r.unit_roots(&mut out, u),
        Part::Lags(l) => r.lags(&mut out, l),
        Part::Cointegration(cs) => cs.iter().for_each(|c| r.cointegration(&mut out, c)),
        Part::Vecm(vs) => vs.iter().for_each(|v| r.vecm(&mut out, v)),
        Part::Ols(os) => os.iter().for_each(|o| r.ols(&mut out, o)),
        Part::Causality(c) => r.causality(&mut out, c),
        Part::Diagnostics(d) => r.diagnostics(&mut out, d),
    }
    Ok(out)
}

fn f4(x: f64) -> String {
    format!("{x:.4}")
}

fn opt4(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), f4)
}

struct Renderer {
    markdown: bool,
}

impl Renderer {
    fn heading(&self, out: &mut String, title: &str) {
        if self.markdown {
            let _ = writeln!(out, "## {title}\n");
        } else {
            let _ = writeln!(out, "{title}\n{}\n", "=".repeat(title.chars().count()));
        }
    }

    fn para(&self, out: &mut String, text: &str) {
        let _ = writeln!(out, "{text}\n");
    }

    fn table(&self, out: &mut String, header: &[&str], rows: &[Vec<String>]) {
        if self.markdown {
            let _ = writeln!(out, "| {} |", header.join(" | "));
            let rule: Vec<&str> = header.iter().map(|_| "---").collect();
            let _ = writeln!(out, "| {} |", rule.join(" | "));
            for r in rows {
                let _ = writeln!(out, "| {} |", r.join(" | "));
            }
        } else {
            let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
            for r in rows {
                for (w, c) in widths.iter_mut().zip(r) {
                    *w = (*w).max(c.chars().count());
                }
            }
            let line = |cells: Vec<&str>| {
                cells
                    .iter()
                    .zip(&widths)
                    .enumerate()
                    .map(|(i, (c, w))| {
                        let pad = w - c.chars().count();
                        if i == 0 {
                            format!("{c}{}", " ".repeat(pad))
                        } else {
                            format!("{}{c}", " ".repeat(pad))
                        }
                    })
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            let _ = writeln!(out, "{}", line(header.to_vec()));
            let total = widths.iter().sum::<usize>() + 2 * widths.len().saturating_sub(1);
            let _ = writeln!(out, "{}", "-".repeat(total));
            for r in rows {
                let _ = writeln!(out, "{}", line(r.iter().map(String::as_str).collect()));
            }
        }
        out.push('\n');
    }

    fn report(&self, r: &Report) -> String {
        let mut out = String::new();
        if self.markdown {
            out.push_str("# Cointegration report\n\n");
        } else {
            out.push_str("COINTEGRATION REPORT\n\n");
        }
        self.provenance(&mut out, &r.provenance, &r.data);
        self.fcdi(&mut out, &r.fcdi);
        self.unit_roots(&mut out, &r.unit_roots);
        self.lags(&mut out, &r.lag_selection);
        for c in &r.cointegration {
            self.cointegration(&mut out, c);
        }
        for v in &r.vecm {
            self.vecm(&mut out, v);
        }
        for o in &r.ols {
            self.ols(&mut out, o);
        }
        self.causality(&mut out, &r.causality);
        self.diagnostics(&mut out, &r.diagnostics);
        if let Some(reference) = &r.reference {
            self.reference(&mut out, reference);
        }
        self.heading(&mut out, "Notes");
        for n in &r.notes {
            let _ = writeln!(out, "- {n}");
        }
        out
    }

    fn provenance(&self, out: &mut String, p: &Provenance, data: &DataSummary) {
        self.heading(out, "Data");
        self.table(
            out,
            &["field", "value"],
            &[
                vec!["data file".into(), p.data_file.clone()],
                vec!["data sha256".into(), p.data_sha256.clone()],
                vec!["config sha256".into(), p.config_sha256.clone()],
                vec!["seed".into(), p.seed.to_string()],
                vec!["tsecon".into(), p.tsecon_version.clone()],
                vec!["schema".into(), p.schema_version.to_string()],
                vec![
                    "span".into(),
                    format!("{}-{} ({} obs)", data.first_year, data.last_year, data.nobs),
                ],
            ],
        );
        let rows: Vec<Vec<String>> = data
            .columns
            .iter()
            .map(|c| {
                vec![
                    c.series.clone(),
                    c.source_column.clone(),
                    format!("{:.6e}", c.first_value),
                    format!("{:.6e}", c.last_value),
                ]
            })
            .collect();
        self.table(out, &["series", "column", "first", "last"], &rows);
    }

    fn fcdi(&self, out: &mut String, f: &FcdiSection) {
        self.heading(out, "FCDI");
        let rows: Vec<Vec<String>> = f
            .inputs
            .iter()
            .zip(&f.loadings)
            .map(|(n, l)| vec![n.clone(), f4(*l)])
            .collect();
        self.table(out, &["input", "loading"], &rows);
        let eig: Vec<String> = f.eigenvalues.iter().map(|e| f4(*e)).collect();
        self.para(
            out,
            &format!(
                "Eigenvalues: {}. First component explains {:.2}% of the variance.",
                eig.join(", "),
                100.0 * f.explained_variance_ratio
            ),
        );
    }

    fn unit_roots(&self, out: &mut String, u: &UnitRootSection) {
        self.heading(out, "Unit-root tests");
        let cell = |t: &UnitRootResult| format!("{:.4}{}", t.statistic, t.decision.stars());
        let rows: Vec<Vec<String>> = u
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.series.clone(),
                    cell(&r.adf_level),
                    cell(&r.adf_difference),
                    r.adf_order.to_string(),
                    cell(&r.pp_level),
                    cell(&r.pp_difference),
                    r.pp_order.to_string(),
                ]
            })
            .collect();
        self.table(
            out,
            &[
                "series",
                "ADF level",
                "ADF diff",
                "ADF order",
                "PP level",
                "PP diff",
                "PP order",
            ],
            &rows,
        );
        let detail: Vec<Vec<String>> = u
            .rows
            .iter()
            .flat_map(|r| {
                [
                    ("ADF", "level", &r.adf_level),
                    ("ADF", "diff", &r.adf_difference),
                    ("PP", "level", &r.pp_level),
                    ("PP", "diff", &r.pp_difference),
                ]
                .map(|(test, form, t)| {
                    vec![
                        r.series.clone(),
                        test.to_string(),
                        form.to_string(),
                        t.det_spec.as_str().to_string(),
                        t.lags_or_bandwidth.to_string(),
                        t.n_effective.to_string(),
                        f4(t.critical_values.one),
                        f4(t.critical_values.five),
                        f4(t.critical_values.ten),
                    ]
                })
            })
            .collect();
        self.table(
            out,
            &[
                "series", "test", "form", "det", "lags/bw", "nobs", "cv 1%", "cv 5%", "cv 10%",
            ],
            &detail,
        );
        let source = match u.simulated_critical_values {
            Some(reps) => {
                format!("Critical values simulated at each sample size with {reps} replications.")
            }
            None => "Critical values from the bundled table, interpolated in 1/T.".to_string(),
        };
        self.para(
            out,
            &format!(
                "Levels: {}; differences: {}. {source}",
                u.level_det.as_str(),
                u.difference_det.as_str()
            ),
        );
    }

    fn lags(&self, out: &mut String, l: &LagSection) {
        self.heading(out, "Lag-order selection");
        let t = &l.table;
        let mark = |lag: usize, chosen: usize| if lag == chosen { "*" } else { "" };
        let rows: Vec<Vec<String>> = t
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.lag.to_string(),
                    f4(r.log_likelihood),
                    format!("{}{}", opt4(r.lr_stat), mark(r.lag, t.selected.lr)),
                    if r.lr_stat.is_some() {
                        r.lr_df.to_string()
                    } else {
                        "-".into()
                    },
                    opt4(r.lr_p_value),
                    format!("{:.4e}{}", r.criteria.fpe, mark(r.lag, t.selected.fpe)),
                    format!("{}{}", f4(r.criteria.aic), mark(r.lag, t.selected.aic)),
                    format!("{}{}", f4(r.criteria.hqic), mark(r.lag, t.selected.hqic)),
                    format!("{}{}", f4(r.criteria.sbic), mark(r.lag, t.selected.sbic)),
                ]
            })
            .collect();
        self.table(
            out,
            &["lag", "LL", "LR", "df", "p", "FPE", "AIC", "HQIC", "SBIC"],
            &rows,
        );
        let used = if l.overridden {
            format!(
                "Lag {} used (overridden; AIC selects {}).",
                l.lag_used, t.chosen_lag
            )
        } else {
            format!("Lag {} used (AIC).", l.lag_used)
        };
        self.para(
            out,
            &format!(
                "Variables: {}; {} observations. {used}",
                t.variables.join(", "),
                t.n_effective
            ),
        );
    }

    fn cointegration(&self, out: &mut String, c: &CointegrationSection) {
        let j = &c.result;
        self.heading(out, &format!("Johansen test: {}", c.system));
        let d = j.dim();
        let rows: Vec<Vec<String>> = (0..d)
            .map(|r| {
                vec![
                    r.to_string(),
                    if r == 0 {
                        "-".into()
                    } else {
                        f4(j.eigenvalues[r - 1])
                    },
                    format!(
                        "{}{}",
                        f4(j.trace_stats[r]),
                        if r == j.selected_rank { "*" } else { "" }
                    ),
                    f4(j.trace_critical_5pct[r]),
                    f4(j.max_eigen_stats[r]),
                    f4(j.max_eigen_critical_5pct[r]),
                ]
            })
            .chain(std::iter::once(vec![
                d.to_string(),
                f4(j.eigenvalues[d - 1]),
                "-".into(),
                "-".into(),
                "-".into(),
                "-".into(),
            ]))
            .collect();
        self.table(
            out,
            &["rank", "eigenvalue", "trace", "5% cv", "max", "5% cv"],
            &rows,
        );
        let rank = if c.rank_overridden {
            format!(
                "Rank {} used (overridden; trace test selects {}).",
                c.rank_used, j.selected_rank
            )
        } else {
            format!("Rank {} used.", c.rank_used)
        };
        self.para(
            out,
            &format!(
                "Lag {}, {} specification, {} observations. {rank}",
                j.lag,
                j.det_spec.as_str(),
                j.n_effective
            ),
        );
    }

    fn vecm(&self, out: &mut String, v: &VecmSection) {
        match v {
            VecmSection::Skipped { system, reason, .. } => {
                self.heading(out, &format!("VECM: {system}"));
                self.para(out, reason);
            }
            VecmSection::Fitted(s) => {
                self.heading(out, &format!("VECM: {}", s.system));
                let rows: Vec<Vec<String>> = s
                    .beta
                    .iter()
                    .map(|b| {
                        vec![
                            format!("{}", b.relation + 1),
                            b.row.clone(),
                            f4(b.coefficient),
                            opt4(b.standard_error),
                            opt4(b.z),
                            b.p_value.map_or_else(
                                || "-".to_string(),
                                |p| format!("{}{}", f4(p), p_stars(p)),
                            ),
                            opt4(b.long_run_effect),
                        ]
                    })
                    .collect();
                self.table(
                    out,
                    &[
                        "relation",
                        "variable",
                        "beta",
                        "se",
                        "z",
                        "p",
                        "long-run effect",
                    ],
                    &rows,
                );
                self.para(
                    out,
                    &format!(
                        "Sign convention: beta is reported as estimated; since the relation is zero in equilibrium, the long-run effect of a regressor on {} is minus its beta.",
                        s.outcome
                    ),
                );
                if !s.relation_constants.is_empty() {
                    let c: Vec<String> = s.relation_constants.iter().map(|x| f4(*x)).collect();
                    self.para(out, &format!("Relation constants: {}.", c.join(", ")));
                }
                let header: Vec<String> = std::iter::once("equation".to_string())
                    .chain((1..=s.rank).map(|j| format!("alpha{j}")))
                    .collect();
                let header: Vec<&str> = header.iter().map(String::as_str).collect();
                let rows: Vec<Vec<String>> = s
                    .variables
                    .iter()
                    .zip(&s.alpha)
                    .map(|(v, a)| {
                        std::iter::once(format!("D.{v}"))
                            .chain(a.iter().map(|x| f4(*x)))
                            .collect()
                    })
                    .collect();
                self.table(out, &header, &rows);
                for e in &s.ect_expressions {
                    self.para(out, e);
                }
                self.para(
                    out,
                    &format!(
                        "ADF on ECT1: {:.4}{} (lags {}, 5% cv {:.4}). Lag {}, rank {}, {} specification, {} observations.",
                        s.ect_adf.statistic,
                        s.ect_adf.decision.stars(),
                        s.ect_adf.lags_or_bandwidth,
                        s.ect_adf.critical_values.five,
                        s.lag,
                        s.rank,
                        s.det_spec.as_str(),
                        s.n_effective
                    ),
                );
            }
        }
    }

    fn ols(&self, out: &mut String, o: &OlsSection) {
        self.heading(out, &format!("OLS: {}", o.name));
        let rows: Vec<Vec<String>> = o
            .coefficients
            .iter()
            .map(|c| {
                vec![
                    c.name.clone(),
                    f4(c.coefficient),
                    f4(c.standard_error),
                    f4(c.t),
                    format!("{}{}", f4(c.p_value), p_stars(c.p_value)),
                ]
            })
            .collect();
        self.table(out, &[o.dependent.as_str(), "coef", "se", "t", "p"], &rows);
        self.para(
            out,
            &format!(
                "R² {:.4}, adjusted {:.4}, F {:.4} (p {:.4}), {} observations.",
                o.r_squared, o.adj_r_squared, o.f_stat, o.f_p_value, o.nobs
            ),
        );
    }

    fn causality(&self, out: &mut String, c: &CausalitySection) {
        self.heading(out, "Short-run causality (Wald)");
        match c {
            CausalitySection::Skipped { reason } => self.para(out, reason),
            CausalitySection::Fitted { lag, rank, tests } => {
                let rows: Vec<Vec<String>> = tests
                    .iter()
                    .map(|t| {
                        let excluded = if t.excluded_block.len() > 1 {
                            "All".to_string()
                        } else {
                            t.excluded_block.join(", ")
                        };
                        vec![
                            format!("D.{}", t.target_equation),
                            excluded,
                            f4(t.chi_square),
                            t.df.to_string(),
                            format!("{}{}", f4(t.p_value), p_stars(t.p_value)),
                        ]
                    })
                    .collect();
                self.table(out, &["equation", "excluded", "chi2", "df", "p"], &rows);
                self.para(out, &format!("VECM with lag {lag}, rank {rank}."));
            }
        }
    }

    fn diagnostics(&self, out: &mut String, d: &DiagnosticsSection) {
        self.heading(out, "Residual diagnostics");
        match d {
            DiagnosticsSection::Skipped { reason } => self.para(out, reason),
            DiagnosticsSection::Fitted { lm, jarque_bera } => {
                let row = |t: &crate::diagnostics::DiagnosticResult| {
                    vec![
                        t.scope.clone(),
                        f4(t.statistic),
                        t.df.to_string(),
                        f4(t.p_value),
                    ]
                };
                self.table(
                    out,
                    &["LM", "chi2", "df", "p"],
                    &lm.iter().map(row).collect::<Vec<_>>(),
                );
                self.table(
                    out,
                    &["Jarque-Bera", "chi2", "df", "p"],
                    &jarque_bera.iter().map(row).collect::<Vec<_>>(),
                );
            }
        }
    }

    fn reference(&self, out: &mut String, r: &ReferenceSection) {
        self.heading(out, &format!("Comparison with {}", r.source));
        let rows: Vec<Vec<String>> = r
            .checks
            .iter()
            .map(|c| {
                let tol = if c.absolute {
                    format!("±{}", c.tolerance)
                } else {
                    format!("{}%", 100.0 * c.tolerance)
                };
                vec![
                    c.label.clone(),
                    f4(c.reported),
                    opt4(c.computed),
                    tol,
                    if c.within_tolerance { "ok" } else { "differs" }.to_string(),
                ]
            })
            .collect();
        self.table(
            out,
            &["quantity", "reported", "computed", "tolerance", "status"],
            &rows,
        );
        if !r.p_values.is_empty() {
            let rows: Vec<Vec<String>> = r
                .p_values
                .iter()
                .map(|p| {
                    vec![
                        p.label.clone(),
                        f4(p.statistic),
                        p.df.to_string(),
                        f4(p.printed_p_value),
                        f4(p.computed_p_value),
                        if p.consistent { "ok" } else { "inconsistent" }.to_string(),
                    ]
                })
                .collect();
            self.table(
                out,
                &[
                    "printed p-value",
                    "chi2",
                    "df",
                    "printed",
                    "computed",
                    "status",
                ],
                &rows,
            );
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stars_follow_levels() {
        assert_eq!(p_stars(0.005), "***");
        assert_eq!(p_stars(0.03), "**");
        assert_eq!(p_stars(0.07), "*");
        assert_eq!(p_stars(0.5), "");
    }

    #[test]
    fn text_table_aligns() {
        let mut out = String::new();
        Renderer { markdown: false }.table(
            &mut out,
            &["a", "bb"],
            &[
                vec!["xyz".into(), "1".into()],
                vec!["q".into(), "22".into()],
            ],
        );
        assert_eq!(out, "a    bb\n-------\nxyz   1\nq    22\n\n");
    }

    #[test]
    fn markdown_table() {
        let mut out = String::new();
        Renderer { markdown: true }.table(&mut out, &["a", "b"], &[vec!["1".into(), "2".into()]]);
        assert_eq!(out, "| a | b |\n| --- | --- |\n| 1 | 2 |\n\n");
    }
}
