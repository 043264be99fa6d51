//! Annual time series and year-aligned datasets.
//!
//! A [`TimeSeries`] is a named run of observations with an implied year
//! index: observation `i` belongs to `start_year + i`. Gaps are rejected at
//! construction; nothing in this crate interpolates. A [`Dataset`] is a set of
//! uniquely named series trimmed to their common span, which is the unit that
//! every multivariate estimator consumes.
//!
//! Sample statistics use the `n - 1` denominator.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    name: String,
    start_year: i32,
    values: Vec<f64>,
}

impl TimeSeries {
    /// Builds a series. Empty input and non-finite values (the in-memory
    /// representation of a missing year) are rejected.
    pub fn new(name: impl Into<String>, start_year: i32, values: Vec<f64>) -> Result<Self> {
        let name = name.into();
        if values.is_empty() {
            return Err(Error::InvalidSeries(format!(
                "`{name}` has no observations"
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::GapInYears {
                series: name,
                year: start_year + i as i32,
            });
        }
        Ok(Self {
            name,
            start_year,
            values,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn start_year(&self) -> i32 {
        self.start_year
    }

    pub fn end_year(&self) -> i32 {
        self.start_year + self.values.len() as i32 - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn years(&self) -> impl Iterator<Item = i32> + '_ {
        (0..self.values.len() as i32).map(move |i| self.start_year + i)
    }

    /// Value observed in `year`, if covered.
    pub fn at(&self, year: i32) -> Option<f64> {
        let idx = year.checked_sub(self.start_year)?;
        usize::try_from(idx)
            .ok()
            .and_then(|i| self.values.get(i).copied())
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Restricts the series to `[first, last]`, which must lie inside its span.
    pub fn trim(&self, first: i32, last: i32) -> Result<Self> {
        if first < self.start_year || last > self.end_year() || first > last {
            return Err(Error::InvalidSeries(format!(
                "`{}` covers {}..={}, cannot trim to {first}..={last}",
                self.name,
                self.start_year,
                self.end_year()
            )));
        }
        let lo = (first - self.start_year) as usize;
        let hi = (last - self.start_year) as usize;
        Ok(Self {
            name: self.name.clone(),
            start_year: first,
            values: self.values[lo..=hi].to_vec(),
        })
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Sample standard deviation (`n - 1` denominator); zero for one observation.
    pub fn std_dev(&self) -> f64 {
        sample_std(&self.values)
    }
}

pub(crate) fn sample_std(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    (ss / (n - 1) as f64).sqrt()
}

/// Natural log of every observation; the name gains an `ln` prefix.
pub fn log_transform(s: &TimeSeries) -> Result<TimeSeries> {
    if let Some((year, _)) = s.years().zip(s.values()).find(|(_, v)| **v <= 0.0) {
        return Err(Error::NonPositiveValue {
            series: s.name.clone(),
            year,
        });
    }
    Ok(TimeSeries {
        name: format!("ln{}", s.name),
        start_year: s.start_year,
        values: s.values.iter().map(|v| v.ln()).collect(),
    })
}

/// `order`-th difference. The output starts `order` years later.
pub fn difference(s: &TimeSeries, order: usize) -> Result<TimeSeries> {
    if order == 0 {
        return Err(Error::InvalidParameters(
            "difference order must be positive".into(),
        ));
    }
    if s.len() <= order {
        return Err(Error::SeriesTooShort {
            needed: order + 1,
            got: s.len(),
        });
    }
    let mut values = s.values.clone();
    for _ in 0..order {
        values = values.windows(2).map(|w| w[1] - w[0]).collect();
    }
    let name = if order == 1 {
        format!("D.{}", s.name)
    } else {
        format!("D{order}.{}", s.name)
    };
    Ok(TimeSeries {
        name,
        start_year: s.start_year + order as i32,
        values,
    })
}

/// Lag by `k` years: the value reported for year `t` is the input at `t - k`,
/// so the aligned span loses its first `k` years.
pub fn lag(s: &TimeSeries, k: usize) -> Result<TimeSeries> {
    if k == 0 {
        return Err(Error::InvalidParameters("lag must be at least 1".into()));
    }
    if s.len() <= k {
        return Err(Error::SeriesTooShort {
            needed: k + 1,
            got: s.len(),
        });
    }
    let name = if k == 1 {
        format!("L.{}", s.name)
    } else {
        format!("L{k}.{}", s.name)
    };
    Ok(TimeSeries {
        name,
        start_year: s.start_year + k as i32,
        values: s.values[..s.len() - k].to_vec(),
    })
}

/// Centers to sample mean 0 and scales to sample standard deviation 1.
pub fn standardize(s: &TimeSeries) -> Result<TimeSeries> {
    let sd = s.std_dev();
    if !(sd > 0.0) || !sd.is_finite() {
        return Err(Error::ZeroVariance(s.name.clone()));
    }
    let mean = s.mean();
    Ok(TimeSeries {
        name: s.name.clone(),
        start_year: s.start_year,
        values: s.values.iter().map(|v| (v - mean) / sd).collect(),
    })
}

/// Uniquely named series sharing one contiguous span of years.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    series: Vec<TimeSeries>,
}

impl Dataset {
    /// Aligns the members by intersecting their spans and trimming each to
    /// the intersection.
    pub fn new(series: Vec<TimeSeries>) -> Result<Self> {
        if series.is_empty() {
            return Err(Error::InvalidSeries(
                "a dataset needs at least one series".into(),
            ));
        }
        for (i, s) in series.iter().enumerate() {
            if series[..i].iter().any(|o| o.name == s.name) {
                return Err(Error::DuplicateName(s.name.clone()));
            }
        }
        let first = series.iter().map(|s| s.start_year).max().unwrap();
        let last = series.iter().map(|s| s.end_year()).min().unwrap();
        if first > last {
            return Err(Error::EmptyIntersection);
        }
        let series = series
            .iter()
            .map(|s| s.trim(first, last))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { series })
    }

    pub fn series(&self) -> &[TimeSeries] {
        &self.series
    }

    pub fn names(&self) -> Vec<&str> {
        self.series.iter().map(|s| s.name()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&TimeSeries> {
        self.series.iter().find(|s| s.name == name)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.series.iter().position(|s| s.name == name)
    }

    /// Number of variables.
    pub fn dim(&self) -> usize {
        self.series.len()
    }

    /// Number of years in the common span.
    pub fn len(&self) -> usize {
        self.series[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn first_year(&self) -> i32 {
        self.series[0].start_year
    }

    pub fn last_year(&self) -> i32 {
        self.series[0].end_year()
    }

    /// Observations as a `len × dim` matrix, columns in member order.
    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.len(), self.dim(), |t, j| self.series[j].values[t])
    }

    /// Sub-dataset with the named members, in the order given.
    pub fn select(&self, names: &[&str]) -> Result<Self> {
        let series = names
            .iter()
            .map(|n| {
                self.get(n)
                    .cloned()
                    .ok_or_else(|| Error::UnknownVariable((*n).to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(series)
    }

    /// Restricts every member to `[first, last]`.
    pub fn trim(&self, first: i32, last: i32) -> Result<Self> {
        let series = self
            .series
            .iter()
            .map(|s| s.trim(first, last))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { series })
    }

    /// Applies `f` to every member.
    pub fn map(&self, f: impl Fn(&TimeSeries) -> Result<TimeSeries>) -> Result<Self> {
        Self::new(self.series.iter().map(f).collect::<Result<Vec<_>>>()?)
    }

    /// Builds a dataset from the columns of a matrix.
    pub fn from_matrix(names: &[&str], start_year: i32, m: &DMatrix<f64>) -> Result<Self> {
        if names.len() != m.ncols() {
            return Err(Error::InvalidParameters(format!(
                "{} names for {} columns",
                names.len(),
                m.ncols()
            )));
        }
        let series = names
            .iter()
            .enumerate()
            .map(|(j, n)| TimeSeries::new(*n, start_year, m.column(j).iter().copied().collect()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(series)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ts(values: &[f64]) -> TimeSeries {
        TimeSeries::new("x", 1, values.to_vec()).unwrap()
    }

    #[test]
    fn log_of_ones_is_zero() {
        let s = log_transform(&ts(&[1.0; 5])).unwrap();
        assert!(s.values().iter().all(|v| *v == 0.0));
        assert_eq!(s.name(), "lnx");
    }

    #[test]
    fn log_of_fdi_1976() {
        let s = TimeSeries::new("fdi", 1976, vec![5.42e6]).unwrap();
        let l = log_transform(&s).unwrap();
        assert!((l.values()[0] - 15.505_606_373_415_828).abs() < 1e-12);
    }

    #[test]
    fn log_rejects_zero_and_reports_year() {
        let s = TimeSeries::new("aid", 1976, vec![1.0, 0.0, 2.0]).unwrap();
        match log_transform(&s) {
            Err(Error::NonPositiveValue { year, .. }) => assert_eq!(year, 1977),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn differences() {
        let c = difference(&ts(&[4.0; 6]), 1).unwrap();
        assert_eq!(c.len(), 5);
        assert!(c.values().iter().all(|v| *v == 0.0));

        let s = ts(&[1.0, 3.0, 6.0, 10.0]);
        let d1 = difference(&s, 1).unwrap();
        assert_eq!(d1.values(), &[2.0, 3.0, 4.0]);
        assert_eq!(d1.start_year(), 2);
        let d2 = difference(&s, 2).unwrap();
        assert_eq!(d2.values(), &[1.0, 1.0]);
        assert_eq!(d2.start_year(), 3);
        assert!(matches!(
            difference(&s, 4),
            Err(Error::SeriesTooShort { .. })
        ));
    }

    #[test]
    fn lags() {
        let l = lag(&ts(&[5.0, 7.0, 9.0]), 1).unwrap();
        assert_eq!(l.values(), &[5.0, 7.0]);
        assert_eq!((l.start_year(), l.end_year()), (2, 3));

        let l2 = lag(&ts(&[1.0, 2.0, 3.0, 4.0]), 2).unwrap();
        assert_eq!(l2.values(), &[1.0, 2.0]);
        assert_eq!((l2.start_year(), l2.end_year()), (3, 4));

        assert!(matches!(
            lag(&ts(&[1.0, 2.0]), 0),
            Err(Error::InvalidParameters(_))
        ));
        assert!(matches!(
            lag(&ts(&[1.0, 2.0]), 2),
            Err(Error::SeriesTooShort { .. })
        ));
    }

    #[test]
    fn standardize_examples() {
        let a = standardize(&ts(&[-1.0, 0.0, 1.0])).unwrap();
        assert_eq!(a.values(), &[-1.0, 0.0, 1.0]);
        let b = standardize(&ts(&[10.0, 20.0, 30.0])).unwrap();
        for (x, e) in b.values().iter().zip([-1.0, 0.0, 1.0]) {
            assert!((x - e).abs() < 1e-15);
        }
        assert!(matches!(
            standardize(&ts(&[3.0; 4])),
            Err(Error::ZeroVariance(_))
        ));
    }

    #[test]
    fn gaps_rejected() {
        match TimeSeries::new("gdp", 1988, vec![1.0, 2.0, f64::NAN, 4.0]) {
            Err(Error::GapInYears { year, .. }) => assert_eq!(year, 1990),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dataset_aligns_to_common_span() {
        let a = TimeSeries::new("a", 1970, (0..10).map(f64::from).collect()).unwrap();
        let b = TimeSeries::new("b", 1973, (0..10).map(f64::from).collect()).unwrap();
        let d = Dataset::new(vec![a, b]).unwrap();
        assert_eq!((d.first_year(), d.last_year()), (1973, 1979));
        assert_eq!(d.get("a").unwrap().values()[0], 3.0);
        assert_eq!(d.get("b").unwrap().values()[0], 0.0);
        assert_eq!(d.matrix().shape(), (7, 2));
    }

    #[test]
    fn dataset_rejects_duplicates_and_disjoint_spans() {
        let a = TimeSeries::new("a", 1970, vec![1.0, 2.0]).unwrap();
        assert!(matches!(
            Dataset::new(vec![a.clone(), a.clone()]),
            Err(Error::DuplicateName(_))
        ));
        let b = TimeSeries::new("b", 1990, vec![1.0, 2.0]).unwrap();
        assert!(matches!(
            Dataset::new(vec![a, b]),
            Err(Error::EmptyIntersection)
        ));
    }

    fn positive_series() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.01f64..1e6, 3..40)
    }

    proptest! {
        #[test]
        fn log_difference_is_log_growth(values in positive_series()) {
            let s = ts(&values);
            let d = difference(&log_transform(&s).unwrap(), 1).unwrap();
            for (t, g) in d.values().iter().enumerate() {
                prop_assert!((g - (values[t + 1] / values[t]).ln()).abs() < 1e-12);
            }
        }

        #[test]
        fn lag_and_difference_commute(values in prop::collection::vec(-1e3f64..1e3, 5..40), k in 1usize..3) {
            let s = ts(&values);
            let a = difference(&lag(&s, k).unwrap(), 1).unwrap();
            let b = lag(&difference(&s, 1).unwrap(), k).unwrap();
            prop_assert_eq!(a.start_year(), b.start_year());
            prop_assert_eq!(a.values(), b.values());
        }

        #[test]
        fn standardize_is_idempotent(values in prop::collection::vec(-1e3f64..1e3, 3..40)) {
            let s = ts(&values);
            prop_assume!(s.std_dev() > 1e-6);
            let once = standardize(&s).unwrap();
            let twice = standardize(&once).unwrap();
            for (a, b) in once.values().iter().zip(twice.values()) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }
    }
}
