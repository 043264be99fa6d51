use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::johansen::JohansenDet;
use crate::unit_root::UnitRootDet;

/// Economic role of an input column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Gdp,
    Fdi,
    Remittance,
    Aid,
    /// Optional annual real GDP growth in percent, used only for plotting.
    GdpGrowth,
}

impl Role {
    pub const REQUIRED: [Role; 4] = [Role::Gdp, Role::Fdi, Role::Remittance, Role::Aid];

    /// Series name used inside the pipeline.
    pub fn series_name(&self) -> &'static str {
        match self {
            Role::Gdp => "gdp",
            Role::Fdi => "fdi",
            Role::Remittance => "rem",
            Role::Aid => "aid",
            Role::GdpGrowth => "gdp_growth",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layout {
    #[default]
    Auto,
    /// `year, indicator_code, value` rows.
    Long,
    /// `year` plus one column per indicator.
    Wide,
    /// World Bank DataBank export: one row per indicator, one column per year.
    Databank,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Text,
    Markdown,
    Json,
}

impl OutputFormat {
    pub fn file_name(&self) -> &'static str {
        match self {
            OutputFormat::Text => "report.txt",
            OutputFormat::Markdown => "report.md",
            OutputFormat::Json => "report.json",
        }
    }
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" | "txt" => Ok(OutputFormat::Text),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::Config(format!("unknown output format `{s}`"))),
        }
    }
}

fn default_max_lag() -> usize {
    4
}

fn default_seed() -> u64 {
    20240601
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_formats() -> Vec<OutputFormat> {
    vec![
        OutputFormat::Text,
        OutputFormat::Markdown,
        OutputFormat::Json,
    ]
}

fn default_lm_lags() -> Vec<usize> {
    vec![1, 2]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    /// Relative paths resolve against the config file's directory.
    pub data_path: PathBuf,
    #[serde(default)]
    pub layout: Layout,
    /// Input column (or indicator code) to role.
    pub variables: BTreeMap<String, Role>,
    /// Inclusive `[first_year, last_year]`.
    pub span: [i32; 2],
    /// Deterministic terms for unit-root tests on levels; differences always
    /// use a constant only.
    #[serde(default)]
    pub unit_root_det: UnitRootDet,
    #[serde(default)]
    pub johansen_det: JohansenDet,
    #[serde(default = "default_max_lag")]
    pub max_lag: usize,
    /// Overrides the AIC lag choice.
    #[serde(default)]
    pub fixed_lag: Option<usize>,
    /// Overrides the trace-test rank choice.
    #[serde(default)]
    pub rank: Option<usize>,
    /// Levels lag order of the VECM used for the Wald grid; defaults to the
    /// selected lag plus one, which gives as many lagged differences as the
    /// selected lag.
    #[serde(default)]
    pub causality_lag: Option<usize>,
    #[serde(default = "default_lm_lags")]
    pub lm_lags: Vec<usize>,
    /// Replications for per-sample Dickey–Fuller critical values; the
    /// bundled response-surface table is used when unset.
    #[serde(default)]
    pub simulate_critical_values: Option<usize>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default = "default_formats")]
    pub output_formats: Vec<OutputFormat>,
    /// Published values to compare against, relative to the config file.
    #[serde(default)]
    pub reference: Option<PathBuf>,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl PipelineConfig {
    pub fn from_toml(text: &str, base_dir: &Path) -> Result<Self> {
        let mut cfg: PipelineConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.base_dir = base_dir.to_path_buf();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_toml(&text, base)
    }

    pub fn validate(&self) -> Result<()> {
        for role in Role::REQUIRED {
            let n = self.variables.values().filter(|r| **r == role).count();
            if n != 1 {
                return Err(Error::Config(format!(
                    "role `{}` must be mapped exactly once, found {n}",
                    role.series_name()
                )));
            }
        }
        if self
            .variables
            .values()
            .filter(|r| **r == Role::GdpGrowth)
            .count()
            > 1
        {
            return Err(Error::Config(
                "role `gdp_growth` mapped more than once".into(),
            ));
        }
        if self.span[0] > self.span[1] {
            return Err(Error::Config(format!("empty span {:?}", self.span)));
        }
        if self.lm_lags.contains(&0) {
            return Err(Error::Config("LM lags must be positive".into()));
        }
        if self.fixed_lag == Some(0) {
            return Err(Error::Config("fixed_lag must be at least 1".into()));
        }
        if self.output_formats.is_empty() {
            return Err(Error::Config("no output formats".into()));
        }
        Ok(())
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn data_file(&self) -> PathBuf {
        self.resolve(&self.data_path)
    }

    pub fn output_path(&self) -> PathBuf {
        self.resolve(&self.output_dir)
    }

    pub fn column_for(&self, role: Role) -> Option<&str> {
        self.variables
            .iter()
            .find(|(_, r)| **r == role)
            .map(|(c, _)| c.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
data_path = "data.csv"
span = [1976, 2021]
[variables]
"NY.GDP.MKTP.CD" = "gdp"
"BX.KLT.DINV.CD.WD" = "fdi"
"BX.TRF.PWKR.CD.DT" = "remittance"
"DT.ODA.ALLD.CD" = "aid"
"#;

    #[test]
    fn defaults() {
        let cfg = PipelineConfig::from_toml(BASE, Path::new("/cfg")).unwrap();
        assert_eq!(cfg.max_lag, 4);
        assert_eq!(cfg.fixed_lag, None);
        assert_eq!(cfg.johansen_det, JohansenDet::UnrestrictedConstant);
        assert_eq!(cfg.unit_root_det, UnitRootDet::Constant);
        assert_eq!(cfg.data_file(), PathBuf::from("/cfg/data.csv"));
        assert_eq!(cfg.column_for(Role::Aid), Some("DT.ODA.ALLD.CD"));
    }

    #[test]
    fn roles_must_be_unique() {
        let text = BASE.replace("\"aid\"", "\"fdi\"");
        assert!(matches!(
            PipelineConfig::from_toml(&text, Path::new(".")),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = format!("bogus = 1\n{BASE}");
        assert!(PipelineConfig::from_toml(&text, Path::new(".")).is_err());
    }
}
