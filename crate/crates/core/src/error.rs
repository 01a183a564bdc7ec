use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("input contains no data lines")]
    EmptyInput,
    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("line {line}: quality score {value} is not one of 1, 2, 3, 4, 5")]
    QualityOutOfRange { line: usize, value: f64 },
    #[error("line {line}: indicator {value} must be positive")]
    NonpositiveIndicator { line: usize, value: f64 },
    #[error("group contains no values")]
    EmptyGroup,
    #[error("denominator {0} must be positive")]
    DivisionByNonpositive(f64),
    #[error("inputs have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("{0}")]
    DegenerateInput(String),
    #[error("statistic undefined: {0}")]
    StatisticUndefined(String),
    #[error("{redraws} degenerate resamples redrawn for {replicates} replicates (limit 10%)")]
    TooManyDegenerateResamples { redraws: usize, replicates: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// Stable variant name, used in CLI diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptyInput => "EmptyInput",
            Error::MalformedLine { .. } => "MalformedLine",
            Error::QualityOutOfRange { .. } => "QualityOutOfRange",
            Error::NonpositiveIndicator { .. } => "NonpositiveIndicator",
            Error::EmptyGroup => "EmptyGroup",
            Error::DivisionByNonpositive(_) => "DivisionByNonpositive",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::DegenerateInput(_) => "DegenerateInput",
            Error::StatisticUndefined(_) => "StatisticUndefined",
            Error::TooManyDegenerateResamples { .. } => "TooManyDegenerateResamples",
            Error::InvalidConfig(_) => "InvalidConfig",
        }
    }

    /// Line number for parse errors.
    pub fn line(&self) -> Option<usize> {
        match self {
            Error::MalformedLine { line, .. }
            | Error::QualityOutOfRange { line, .. }
            | Error::NonpositiveIndicator { line, .. } => Some(*line),
            _ => None,
        }
    }
}
