use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Location-tagged syntax error from the map or metric DSL.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

/// Failure while evaluating an arithmetic expression.
#[derive(Debug, Clone, PartialEq)]
pub enum EvalError {
    DivisionByZero,
    LogOfNonPositive(f64),
    NonFinite,
    UnboundVariable { arg: usize, index: usize },
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::DivisionByZero => f.write_str("division by zero"),
            EvalError::LogOfNonPositive(v) => write!(f, "ln of non-positive value {v}"),
            EvalError::NonFinite => f.write_str("non-finite result"),
            EvalError::UnboundVariable { arg, index } => {
                write!(f, "variable #{} of argument {} is not bound", index + 1, arg)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    InvalidPoint(String),
    InvalidRadius(f64),
    InvalidParameter(String),
    UnknownFamily(String),
    UnsupportedFamily {
        family: String,
        operation: &'static str,
    },
    Parse(ParseError),
    /// Metric expression failed to evaluate.
    MetricEval(EvalError),
    /// A map rule failed to evaluate; `rule` is 0-based.
    MapEval {
        rule: usize,
        source: EvalError,
    },
    MixedMetrics,
    AlphaOnCircle {
        circle: usize,
    },
    HOutOfRange {
        h: f64,
        expected: &'static str,
    },
    NotOnCircle {
        residual: f64,
    },
    RUndefined,
    EmptySample,
    InvalidWindow(String),
    Nested {
        context: &'static str,
        source: Box<Error>,
    },
}

impl Error {
    pub fn context(self, context: &'static str) -> Error {
        Error::Nested { context, source: Box::new(self) }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::InvalidPoint(msg) => write!(f, "invalid point: {msg}"),
            Error::InvalidRadius(r) => write!(f, "radius must be positive and finite, got {r}"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::UnknownFamily(name) => write!(f, "unknown metric family `{name}`"),
            Error::UnsupportedFamily { family, operation } => {
                write!(f, "{operation} is not supported for metric `{family}`; use grid tracing instead")
            }
            Error::Parse(e) => write!(f, "parse error at {e}"),
            Error::MetricEval(e) => write!(f, "metric evaluation failed: {e}"),
            Error::MapEval { rule, source } => {
                write!(f, "map rule {} failed to evaluate: {source}", rule + 1)
            }
            Error::MixedMetrics => f.write_str("circles do not share one metric"),
            Error::AlphaOnCircle { circle } => {
                write!(f, "alpha lies on circle #{}; it must lie on none of them", circle + 1)
            }
            Error::HOutOfRange { h, expected } => write!(f, "h = {h} is outside {expected}"),
            Error::NotOnCircle { residual } => {
                write!(f, "sample point is not on the circle (residual {residual})")
            }
            Error::RUndefined => f.write_str("r undefined (map is identity on sample)"),
            Error::EmptySample => f.write_str("sample is empty"),
            Error::InvalidWindow(msg) => write!(f, "invalid window: {msg}"),
            Error::Nested { context, source } => write!(f, "{context}: {source}"),
        }
    }
}

impl From<ParseError> for Error {
    fn from(e: ParseError) -> Self {
        Error::Parse(e)
    }
}

impl core::error::Error for Error {}
impl core::error::Error for ParseError {}
impl core::error::Error for EvalError {}
