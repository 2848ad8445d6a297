use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported schema_version {0} (expected {1})")]
    SchemaVersion(u32, u32),
    #[error("dangling reference: {kind} `{id}` referenced by {referrer} does not exist")]
    DanglingReference {
        kind: &'static str,
        id: String,
        referrer: String,
    },
    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: &'static str, id: String },
    #[error("invalid field `{field}`: {reason}")]
    Invalid { field: String, reason: String },
    #[error("stops {0} and {1} are the same stop; direction is undefined")]
    SameStop(u32, u32),
    #[error("stop {stop} is not on line {line}")]
    StopNotOnLine { stop: u32, line: u32 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("toll table seat thresholds must be strictly increasing, got {0:?}")]
    NonMonotoneToll([u32; 3]),
    #[error("segment capacity must be positive (run {run}, {from}->{to}, capacity {capacity})")]
    NonPositiveCapacity {
        run: u32,
        from: u32,
        to: u32,
        capacity: f64,
    },
    #[error("confidence level {0} outside (0.5, 1)")]
    ConfidenceOutOfRange(f64),
    #[error("solution has {got} {what}, instance expects {expected}")]
    Dimension {
        what: &'static str,
        got: usize,
        expected: usize,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Error)]
pub enum ScalarizeError {
    #[error("entropy weighting needs at least 2 samples, got {0}")]
    TooFewSamples(usize),
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("population of {0} is too small (differential evolution needs at least 3 distinct members)")]
    PopulationTooSmall(usize),
    #[error("invalid solver configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Scalarize(#[from] ScalarizeError),
}
