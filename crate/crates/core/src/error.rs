use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("series `{series}` has a non-positive value in {year}")]
    NonPositiveValue { series: String, year: i32 },

    #[error("series too short: need at least {needed} observations, got {got}")]
    SeriesTooShort { needed: usize, got: usize },

    #[error("series `{0}` has zero variance")]
    ZeroVariance(String),

    #[error("missing observation for `{series}` in {year}")]
    GapInYears { series: String, year: i32 },

    #[error("invalid series: {0}")]
    InvalidSeries(String),

    #[error("duplicate series name `{0}`")]
    DuplicateName(String),

    #[error("series spans do not overlap")]
    EmptyIntersection,

    #[error("design matrix is rank deficient")]
    RankDeficient,

    #[error("insufficient observations: need {needed}, got {got}")]
    InsufficientObservations { needed: usize, got: usize },

    #[error("bandwidth {bandwidth} is too large for {len} observations")]
    BandwidthTooLarge { bandwidth: usize, len: usize },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("invalid cointegrating rank {rank} for a {dim}-variable system")]
    InvalidRank { rank: usize, dim: usize },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("at least two columns are required, got {0}")]
    TooFewColumns(usize),

    #[error("no bundled critical value for {0}")]
    UnsupportedCombination(String),

    #[error("column `{0}` not found in input")]
    MissingColumn(String),

    #[error("non-numeric cell at row {row}, column `{column}`: {value:?}")]
    NonNumericCell {
        row: usize,
        column: String,
        value: String,
    },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}
