use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported Barker length {0}; valid lengths are 2, 3, 4, 5, 7, 11, 13")]
    UnsupportedBarkerLength(usize),

    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    #[error("length mismatch: received has {received} samples, reference has {reference}")]
    LengthMismatch { received: usize, reference: usize },

    #[error("FFT length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("non-finite sample at index {0}")]
    NonFinite(usize),

    #[error("range {range_m} m maps to bin {bin}, beyond the maximum unambiguous range of {max_range_m} m")]
    RangeOutOfBounds {
        range_m: f64,
        bin: usize,
        max_range_m: f64,
    },

    #[error("bin {bin} out of range [0, {n_bins})")]
    BinOutOfRange { bin: usize, n_bins: usize },

    #[error("no reference detectable: scan magnitudes are all zero")]
    NoReference,

    #[error("scan is already aligned")]
    AlreadyAligned,

    #[error("scan is not aligned")]
    NotAligned,

    #[error("invalid {field}: {reason}")]
    Validation { field: String, reason: String },

    #[error("failed to parse {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("IQ file {path}: {message}")]
    IqFormat { path: PathBuf, message: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("export failed: {0}")]
    Export(String),
}

/// Broad failure class, used for process exit codes and the C error codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Parse,
    Validation,
    Runtime,
}

impl Error {
    pub(crate) fn validation(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::Parse { .. } | Error::IqFormat { .. } => ErrorCategory::Parse,
            Error::UnsupportedBarkerLength(_)
            | Error::InvalidSequence(_)
            | Error::LengthMismatch { .. }
            | Error::NotPowerOfTwo(_)
            | Error::NonFinite(_)
            | Error::RangeOutOfBounds { .. }
            | Error::BinOutOfRange { .. }
            | Error::Validation { .. } => ErrorCategory::Validation,
            Error::NoReference
            | Error::AlreadyAligned
            | Error::NotAligned
            | Error::Io { .. }
            | Error::Export(_) => ErrorCategory::Runtime,
        }
    }

    /// Process exit code: 2 parse, 3 validation, 4 runtime.
    pub fn exit_code(&self) -> i32 {
        match self.category() {
            ErrorCategory::Parse => 2,
            ErrorCategory::Validation => 3,
            ErrorCategory::Runtime => 4,
        }
    }
}
