//! Critical values for the Dickey–Fuller and Johansen null distributions.
//!
//! The bundled values live in `data/critical_values.txt`, a versioned
//! fixed-width table compiled into the crate. Dickey–Fuller quantiles are
//! tabulated for sample sizes 25, 50, 100, 250, 500 and the asymptotic limit;
//! [`lookup`] interpolates linearly in `1/T` between neighbouring rows and
//! uses the `T = 25` row for smaller samples. Johansen quantiles are indexed
//! by the number of unit roots under the null, `d − r`.
//!
//! [`simulate_df_quantiles`] and [`simulate_johansen_quantiles`] regenerate
//! the tables by Monte Carlo and emit rows in the same format.

use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::johansen::{self, JohansenDet};
use crate::mc;
use crate::unit_root::{dickey_fuller_statistic, UnitRootDet};

pub const TABLE_FORMAT_VERSION: u32 = 1;

const BUNDLED_SOURCE: &str = include_str!("../data/critical_values.txt");

static BUNDLED: LazyLock<Vec<CriticalValueTable>> = LazyLock::new(|| {
    parse_table_file(BUNDLED_SOURCE).expect("bundled critical value table is well formed")
});

/// Significance level of a test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Level {
    #[serde(rename = "1%")]
    One,
    #[serde(rename = "5%")]
    Five,
    #[serde(rename = "10%")]
    Ten,
}

impl Level {
    /// From most to least stringent.
    pub const ALL: [Level; 3] = [Level::One, Level::Five, Level::Ten];

    pub fn alpha(self) -> f64 {
        match self {
            Level::One => 0.01,
            Level::Five => 0.05,
            Level::Ten => 0.10,
        }
    }

    pub fn stars(self) -> &'static str {
        match self {
            Level::One => "***",
            Level::Five => "**",
            Level::Ten => "*",
        }
    }

    fn position(self) -> usize {
        match self {
            Level::One => 0,
            Level::Five => 1,
            Level::Ten => 2,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::One => "1%",
            Level::Five => "5%",
            Level::Ten => "10%",
        })
    }
}

/// Critical values at 1%, 5% and 10%.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalValues {
    pub one: f64,
    pub five: f64,
    pub ten: f64,
}

impl CriticalValues {
    pub fn at(&self, level: Level) -> f64 {
        match level {
            Level::One => self.one,
            Level::Five => self.five,
            Level::Ten => self.ten,
        }
    }

    fn from_array(v: [f64; 3]) -> Self {
        Self {
            one: v[0],
            five: v[1],
            ten: v[2],
        }
    }

    fn as_array(&self) -> [f64; 3] {
        [self.one, self.five, self.ten]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    DickeyFuller(UnitRootDet),
    JohansenTrace(JohansenDet),
    JohansenMaxEigen(JohansenDet),
}

impl Family {
    fn family_name(&self) -> &'static str {
        match self {
            Family::DickeyFuller(_) => "dickey_fuller",
            Family::JohansenTrace(_) => "johansen_trace",
            Family::JohansenMaxEigen(_) => "johansen_max_eigen",
        }
    }

    fn det_name(&self) -> &'static str {
        match self {
            Family::DickeyFuller(d) => d.as_str(),
            Family::JohansenTrace(d) | Family::JohansenMaxEigen(d) => d.as_str(),
        }
    }

    fn parse(family: &str, det: &str) -> Result<Self> {
        let bad = || Error::UnsupportedCombination(format!("{family}/{det}"));
        match family {
            "dickey_fuller" => Ok(Family::DickeyFuller(det.parse().map_err(|_| bad())?)),
            "johansen_trace" => Ok(Family::JohansenTrace(det.parse().map_err(|_| bad())?)),
            "johansen_max_eigen" => Ok(Family::JohansenMaxEigen(det.parse().map_err(|_| bad())?)),
            _ => Err(bad()),
        }
    }

    /// Dickey–Fuller tests reject in the left tail, Johansen tests in the right.
    pub fn left_tailed(&self) -> bool {
        matches!(self, Family::DickeyFuller(_))
    }
}

/// Row key: sample size (or asymptotic) for Dickey–Fuller, `d − r` for Johansen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TableIndex {
    Nobs(usize),
    Asymptotic,
    UnitRoots(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Bundled,
    Simulated { seed: u64, reps: usize, nobs: usize },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Bundled => f.write_str("bundled"),
            Provenance::Simulated { seed, reps, nobs } => {
                write!(f, "simulated:seed={seed},reps={reps},nobs={nobs}")
            }
        }
    }
}

impl FromStr for Provenance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "bundled" {
            return Ok(Provenance::Bundled);
        }
        let bad = || Error::Config(format!("bad provenance field `{s}`"));
        let body = s.strip_prefix("simulated:").ok_or_else(bad)?;
        let (mut seed, mut reps, mut nobs) = (None, None, None);
        for kv in body.split(',') {
            let (k, v) = kv.split_once('=').ok_or_else(bad)?;
            match k {
                "seed" => seed = v.parse().ok(),
                "reps" => reps = v.parse().ok(),
                "nobs" => nobs = v.parse().ok(),
                _ => return Err(bad()),
            }
        }
        Ok(Provenance::Simulated {
            seed: seed.ok_or_else(bad)?,
            reps: reps.ok_or_else(bad)?,
            nobs: nobs.ok_or_else(bad)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalValueTable {
    pub family: Family,
    pub index: TableIndex,
    pub values: CriticalValues,
    pub provenance: Provenance,
}

impl CriticalValueTable {
    /// One fixed-width line of the table file.
    pub fn to_line(&self) -> String {
        let index = match self.index {
            TableIndex::Nobs(n) | TableIndex::UnitRoots(n) => n.to_string(),
            TableIndex::Asymptotic => "inf".to_string(),
        };
        format!(
            "{:<20}{:<24}{:>8}{:>12.4}{:>12.4}{:>12.4}  {}",
            self.family.family_name(),
            self.family.det_name(),
            index,
            self.values.one,
            self.values.five,
            self.values.ten,
            self.provenance
        )
    }

    fn from_line(line: &str) -> Result<Self> {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 7 {
            return Err(Error::Config(format!("malformed table row `{line}`")));
        }
        let family = Family::parse(fields[0], fields[1])?;
        let index = match (family, fields[2]) {
            (Family::DickeyFuller(_), "inf") => TableIndex::Asymptotic,
            (Family::DickeyFuller(_), n) => TableIndex::Nobs(parse_num(n, line)?),
            (_, n) => TableIndex::UnitRoots(parse_num(n, line)?),
        };
        let mut v = [0.0; 3];
        for (slot, text) in v.iter_mut().zip(&fields[3..6]) {
            *slot = parse_num(text, line)?;
        }
        Ok(Self {
            family,
            index,
            values: CriticalValues::from_array(v),
            provenance: fields[6].parse()?,
        })
    }

    /// Whether the values move outward (further into the rejection region)
    /// as the level becomes more stringent.
    pub fn is_monotone(&self) -> bool {
        let v = self.values.as_array();
        if self.family.left_tailed() {
            v[0] <= v[1] && v[1] <= v[2]
        } else {
            v[0] >= v[1] && v[1] >= v[2]
        }
    }
}

fn parse_num<T: FromStr>(s: &str, line: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Config(format!("bad number `{s}` in table row `{line}`")))
}

/// Parses a table file. Comment lines start with `#`; the column header
/// line starts with `family`.
pub fn parse_table_file(text: &str) -> Result<Vec<CriticalValueTable>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#') && !l.starts_with("family"))
        .map(CriticalValueTable::from_line)
        .collect()
}

/// Renders rows in the table file format, header included.
pub fn write_table_file(rows: &[CriticalValueTable]) -> String {
    let mut out = format!(
        "# tsecon critical value table, format version {TABLE_FORMAT_VERSION}\n\
         {:<20}{:<24}{:>8}{:>12}{:>12}{:>12}  provenance\n",
        "family", "det_spec", "index", "cv_1pct", "cv_5pct", "cv_10pct"
    );
    for r in rows {
        out.push_str(&r.to_line());
        out.push('\n');
    }
    out
}

pub fn bundled() -> &'static [CriticalValueTable] {
    &BUNDLED
}

/// Bundled critical value.
///
/// For the Dickey–Fuller family `index` is the regression sample size; for
/// the Johansen families it is `d − r`.
pub fn lookup(family: Family, index: usize, level: Level) -> Result<f64> {
    Ok(lookup_all(family, index)?.at(level))
}

/// All three bundled levels for one row.
pub fn lookup_all(family: Family, index: usize) -> Result<CriticalValues> {
    let unsupported = || {
        Error::UnsupportedCombination(format!(
            "{}/{} at index {index}",
            family.family_name(),
            family.det_name()
        ))
    };
    match family {
        Family::DickeyFuller(_) => {
            if index == 0 {
                return Err(unsupported());
            }
            let mut rows: Vec<(f64, [f64; 3])> = bundled()
                .iter()
                .filter(|r| r.family == family)
                .map(|r| {
                    let x = match r.index {
                        TableIndex::Nobs(n) => 1.0 / n as f64,
                        _ => 0.0,
                    };
                    (x, r.values.as_array())
                })
                .collect();
            if rows.is_empty() {
                return Err(unsupported());
            }
            rows.sort_by(|a, b| a.0.total_cmp(&b.0));
            let x = 1.0 / index as f64;
            let last = rows[rows.len() - 1];
            if x >= last.0 {
                return Ok(CriticalValues::from_array(last.1));
            }
            let k = rows.iter().position(|r| r.0 > x).unwrap();
            let (x0, v0) = rows[k - 1];
            let (x1, v1) = rows[k];
            let w = (x - x0) / (x1 - x0);
            let mut out = [0.0; 3];
            for i in 0..3 {
                out[i] = v0[i] + w * (v1[i] - v0[i]);
            }
            Ok(CriticalValues::from_array(out))
        }
        _ => bundled()
            .iter()
            .find(|r| r.family == family && r.index == TableIndex::UnitRoots(index))
            .map(|r| r.values)
            .ok_or_else(unsupported),
    }
}

fn check_reps(reps: usize) -> Result<()> {
    if reps < 10_000 {
        return Err(Error::InvalidParameters(format!(
            "at least 10000 replications are required, got {reps}"
        )));
    }
    Ok(())
}

fn quantiles(mut draws: Vec<f64>, left_tail: bool) -> CriticalValues {
    draws.sort_by(f64::total_cmp);
    let mut v = [0.0; 3];
    for level in Level::ALL {
        let p = if left_tail {
            level.alpha()
        } else {
            1.0 - level.alpha()
        };
        v[level.position()] = mc::quantile_sorted(&draws, p);
    }
    CriticalValues::from_array(v)
}

/// Empirical 1/5/10% quantiles of the Dickey–Fuller t-ratio for driftless
/// random walks of length `nobs`.
pub fn simulate_df_quantiles(
    det: UnitRootDet,
    nobs: usize,
    reps: usize,
    seed: u64,
) -> Result<CriticalValueTable> {
    check_reps(reps)?;
    if nobs < 10 {
        return Err(Error::SeriesTooShort {
            needed: 10,
            got: nobs,
        });
    }
    let draws = mc::replicate(seed, reps, |rng| {
        let y = mc::random_walk(rng, nobs, 0.0);
        dickey_fuller_statistic(&y, det).unwrap_or(f64::NAN)
    });
    if draws.iter().any(|d| !d.is_finite()) {
        return Err(Error::RankDeficient);
    }
    Ok(CriticalValueTable {
        family: Family::DickeyFuller(det),
        index: TableIndex::Nobs(nobs),
        values: quantiles(draws, true),
        provenance: Provenance::Simulated { seed, reps, nobs },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum JohansenStat {
    Trace,
    MaxEigen,
}

/// Empirical quantiles of the rank-zero Johansen statistic for `d_minus_r`
/// independent random walks of length `nobs`.
///
/// Under `UnrestrictedConstant` the walks carry a unit drift, which is the
/// data-generating process that distribution is tabulated for; the other
/// specifications use driftless walks.
pub fn simulate_johansen_quantiles(
    stat: JohansenStat,
    d_minus_r: usize,
    det: JohansenDet,
    nobs: usize,
    reps: usize,
    seed: u64,
) -> Result<CriticalValueTable> {
    check_reps(reps)?;
    if !(1..=6).contains(&d_minus_r) {
        return Err(Error::InvalidParameters(format!(
            "d - r must be in 1..=6, got {d_minus_r}"
        )));
    }
    let drift = if det == JohansenDet::UnrestrictedConstant {
        1.0
    } else {
        0.0
    };
    let draws = mc::replicate(seed, reps, |rng| {
        let mut m = DMatrix::zeros(nobs, d_minus_r);
        for j in 0..d_minus_r {
            m.set_column(j, &DVector::from_vec(mc::random_walk(rng, nobs, drift)));
        }
        johansen::rank_zero_statistics(&m, 1, det)
            .map(|(trace, max)| match stat {
                JohansenStat::Trace => trace,
                JohansenStat::MaxEigen => max,
            })
            .unwrap_or(f64::NAN)
    });
    if draws.iter().any(|d| !d.is_finite()) {
        return Err(Error::NotPositiveDefinite);
    }
    let family = match stat {
        JohansenStat::Trace => Family::JohansenTrace(det),
        JohansenStat::MaxEigen => Family::JohansenMaxEigen(det),
    };
    Ok(CriticalValueTable {
        family,
        index: TableIndex::UnitRoots(d_minus_r),
        values: quantiles(draws, false),
        provenance: Provenance::Simulated { seed, reps, nobs },
    })
}
