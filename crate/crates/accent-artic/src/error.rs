//! Error types shared across the crate.

use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AlignError {
    #[error("phoneme `{0}` is not in the weight table inventory")]
    UnknownPhoneme(String),
    #[error("reference length is zero but alignment cost is positive")]
    DegenerateReference,
}

#[derive(Debug, Error)]
pub enum PmiError {
    #[error("no non-matching aligned pairs and smoothing delta is zero")]
    EmptyCounts,
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("per-utterance distance list is empty")]
    EmptyScoreInput,
}

#[derive(Debug, Error)]
pub enum ReparamError {
    #[error("covariance for sensor {sensor} is singular (all frames identical)")]
    RankDeficient { sensor: &'static str },
    #[error("fewer than 2 distinct frames available for PCA")]
    TooFewFrames,
    #[error("no frame falls inside segment [{t_start}, {t_end})")]
    EmptySegment { t_start: f64, t_end: f64 },
    #[error("no tracks for speaker `{0}` in the fitted basis")]
    UnknownSpeaker(String),
}

#[derive(Debug, Error)]
pub enum GestureError {
    #[error("segment yields {got} in-window samples, need at least {need}")]
    TooFewSamples { got: usize, need: usize },
    #[error("trajectory contains non-finite values")]
    NonFinite,
    #[error("no samples inside the fit window")]
    EmptyWindow,
}

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("predictor x is constant; correlation is undefined")]
    ConstantPredictor,
    #[error("need at least 3 points for regression, got {0}")]
    DegenerateN(usize),
    #[error("x and y have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),
    #[error("missing file: {0}")]
    MissingFile(PathBuf),
    #[error("malformed row in {file} at line {line}: {reason}")]
    MalformedRow {
        file: PathBuf,
        line: usize,
        reason: String,
    },
    #[error("failed to parse manifest {0}: {1}")]
    ManifestParse(PathBuf, String),
    #[error("io error on {0}: {1}")]
    Io(PathBuf, #[source] std::io::Error),
}

/// Top-level pipeline error with (speaker, utterance, segment) context where known.
#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("input error: {0}")]
    Ingest(#[from] IngestError),
    #[error("config error: {0}")]
    Config(String),
    #[error("{context}: {source}")]
    Numeric {
        context: String,
        #[source]
        source: Box<dyn std::error::Error + Send + Sync>,
    },
    #[error("need at least 3 speakers for regression, got {0}")]
    TooFewSpeakers(usize),
    #[error("io error on {0}: {1}")]
    Io(PathBuf, #[source] std::io::Error),
}

impl PipelineError {
    pub fn numeric<E>(context: impl Into<String>, source: E) -> Self
    where
        E: std::error::Error + Send + Sync + 'static,
    {
        PipelineError::Numeric {
            context: context.into(),
            source: Box::new(source),
        }
    }

    /// Process exit code per the CLI contract: 1 input, 2 numerical, 3 config.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Ingest(_) | PipelineError::Io(..) | PipelineError::TooFewSpeakers(_) => 1,
            PipelineError::Numeric { .. } => 2,
            PipelineError::Config(_) => 3,
        }
    }
}
