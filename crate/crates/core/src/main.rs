use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tsecon::cv_tables::{self, JohansenStat};
use tsecon::johansen::JohansenDet;
use tsecon::pipeline::{self, OutputFormat, Part, PipelineConfig};
use tsecon::unit_root::UnitRootDet;
use tsecon::{Error, Result};

#[derive(Parser)]
#[command(
    name = "tsecon",
    version,
    about = "Cointegration analysis of annual macro series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Pipeline config (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output format: text, markdown or json.
    #[arg(long, default_value = "text")]
    format: OutputFormat,
}

#[derive(Subcommand)]
enum Command {
    /// Validate the input file and summarize the mapped columns.
    Ingest(Common),
    /// Build the financial-capital index.
    Fcdi(Common),
    /// ADF and PP tests on levels and differences.
    Unitroot(Common),
    /// VAR lag-order selection table.
    Lagselect(Common),
    /// Johansen trace and max-eigenvalue tests.
    Johansen(Common),
    /// Fit the VECM at the selected lag and rank.
    Vecm(Common),
    /// Static OLS regressions in levels.
    Ols(Common),
    /// Wald short-run causality grid.
    Causality(Common),
    /// LM autocorrelation and Jarque-Bera tests on VECM residuals.
    Diagnose(Common),
    /// Run every stage and write the report files and plots.
    Report {
        #[command(flatten)]
        common: ReportArgs,
    },
    /// Write the SVG charts of the raw inputs.
    Plot {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; defaults to the config's `output_dir`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate critical values and print them as table-file lines.
    CvSim(CvSimArgs),
    /// Write a synthetic WDI-shaped CSV.
    DemoData {
        #[arg(long, default_value_t = 20240601)]
        seed: u64,
        #[arg(long, default_value_t = 1976)]
        first: i32,
        #[arg(long, default_value_t = 2021)]
        last: i32,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Formats to write; defaults to the config's `output_formats`.
    #[arg(long, value_delimiter = ',')]
    format: Vec<OutputFormat>,
    /// Output directory; defaults to the config's `output_dir`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CvFamily {
    Df,
    Trace,
    MaxEigen,
}

#[derive(Args)]
struct CvSimArgs {
    #[arg(long, value_enum)]
    family: CvFamily,
    /// `constant` or `constant_trend` for df; `none`, `restricted_constant`
    /// or `unrestricted_constant` for the Johansen families.
    #[arg(long)]
    det: String,
    #[arg(long, default_value_t = 500)]
    nobs: usize,
    #[arg(long, default_value_t = 100_000)]
    reps: usize,
    #[arg(long, default_value_t = 20240601)]
    seed: u64,
    /// Johansen d − r values to simulate.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
    dims: Vec<usize>,
}

fn load(config: &PathBuf, seed: Option<u64>) -> Result<PipelineConfig> {
    let mut cfg = PipelineConfig::load(config).map_err(|e| Error::Stage {
        stage: "config",
        source: Box::new(e),
    })?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn stage(
    c: &Common,
    f: impl FnOnce(&PipelineConfig, &pipeline::Prepared) -> Result<String>,
) -> Result<String> {
    let cfg = load(&c.config, c.seed)?;
    let p = pipeline::prepare(&cfg)?;
    f(&cfg, &p)
}

fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Ingest(c) => stage(&c, |cfg, p| {
            let (provenance, data) = pipeline::data_summary(cfg, p)?;
            pipeline::render_part(
                Part::Data {
                    provenance: &provenance,
                    data: &data,
                },
                c.format,
            )
        }),
        Command::Fcdi(c) => stage(&c, |_, p| {
            pipeline::render_part(Part::Fcdi(&pipeline::fcdi_section(p)), c.format)
        }),
        Command::Unitroot(c) => stage(&c, |cfg, p| {
            pipeline::render_part(
                Part::UnitRoots(&pipeline::unit_root_section(p, cfg)?),
                c.format,
            )
        }),
        Command::Lagselect(c) => stage(&c, |cfg, p| {
            pipeline::render_part(Part::Lags(&pipeline::lag_section(p, cfg)?), c.format)
        }),
        Command::Johansen(c) => stage(&c, |cfg, p| {
            let lag = pipeline::lag_section(p, cfg)?.lag_used;
            let sections = pipeline::cointegration_sections(p, cfg, lag)?;
            pipeline::render_part(Part::Cointegration(&sections), c.format)
        }),
        Command::Ols(c) => stage(&c, |_, p| {
            pipeline::render_part(Part::Ols(&pipeline::ols_sections(p)?), c.format)
        }),
        Command::Vecm(c) => stage(&c, |cfg, p| {
            let r = pipeline::run_prepared(cfg, p)?;
            pipeline::render_part(Part::Vecm(&r.vecm), c.format)
        }),
        Command::Causality(c) => stage(&c, |cfg, p| {
            let r = pipeline::run_prepared(cfg, p)?;
            pipeline::render_part(Part::Causality(&r.causality), c.format)
        }),
        Command::Diagnose(c) => stage(&c, |cfg, p| {
            let r = pipeline::run_prepared(cfg, p)?;
            pipeline::render_part(Part::Diagnostics(&r.diagnostics), c.format)
        }),
        Command::Report { common } => {
            let cfg = load(&common.config, common.seed)?;
            let p = pipeline::prepare(&cfg)?;
            let report = pipeline::run_prepared(&cfg, &p)?;
            let formats = if common.format.is_empty() {
                cfg.output_formats.clone()
            } else {
                common.format
            };
            let out = common.out.unwrap_or_else(|| cfg.output_path());
            let written = pipeline::write_outputs(&p, &report, &formats, &out)?;
            Ok(written
                .iter()
                .map(|w| format!("wrote {}\n", w.display()))
                .collect())
        }
        Command::Plot { config, out } => {
            let cfg = load(&config, None)?;
            let p = pipeline::prepare(&cfg)?;
            let out = out.unwrap_or_else(|| cfg.output_path());
            let written = pipeline::emit_plots(&p.raw, &out).map_err(|e| Error::Stage {
                stage: "plot",
                source: Box::new(e),
            })?;
            Ok(written
                .iter()
                .map(|w| format!("wrote {}\n", w.display()))
                .collect())
        }
        Command::CvSim(a) => cv_sim(a).map_err(|e| Error::Stage {
            stage: "cv-sim",
            source: Box::new(e),
        }),
        Command::DemoData {
            seed,
            first,
            last,
            out,
        } => {
            std::fs::write(&out, pipeline::synthetic_wdi_csv(seed, first, last))?;
            Ok(format!("wrote {}\n", out.display()))
        }
    }
}

fn cv_sim(a: CvSimArgs) -> Result<String> {
    let rows = match a.family {
        CvFamily::Df => {
            let det: UnitRootDet = a.det.parse()?;
            vec![cv_tables::simulate_df_quantiles(
                det, a.nobs, a.reps, a.seed,
            )?]
        }
        CvFamily::Trace | CvFamily::MaxEigen => {
            let det: JohansenDet = a.det.parse()?;
            let stat = match a.family {
                CvFamily::Trace => JohansenStat::Trace,
                _ => JohansenStat::MaxEigen,
            };
            a.dims
                .iter()
                .map(|k| {
                    cv_tables::simulate_johansen_quantiles(stat, *k, det, a.nobs, a.reps, a.seed)
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    Ok(cv_tables::write_table_file(&rows))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
