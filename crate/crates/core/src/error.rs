use thiserror::Error;

/// Errors raised anywhere in the engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error in {path}: {message}")]
    Parse { path: String, message: String },

    #[error("invalid value for `{key}`: {reason}")]
    Validation { key: String, reason: String },

    #[error("pairing ambiguity at k = {k:?}: bands {indices:?} (|E_n - E_m| = {split:.3e}, gap to rest = {gap:.3e} Ha)")]
    PairingAmbiguity {
        k: [f64; 3],
        indices: (usize, usize),
        split: f64,
        gap: f64,
    },

    #[error("unknown band label `{0}`")]
    UnknownBand(String),

    #[error("intermediate band {band} lies within {gap:.3e} Ha of the pair energy at k = {k:?}")]
    NearDegenerateIntermediate { band: usize, gap: f64, k: [f64; 3] },

    #[error("zero Zeeman splitting: ground-state moment undefined")]
    ZeroField,

    #[error("target g = {target} not bracketed on [{lo}, {hi}] Bohr (g ranges {g_lo}..{g_hi})")]
    NoBracket {
        target: f64,
        lo: f64,
        hi: f64,
        g_lo: f64,
        g_hi: f64,
    },

    #[error("maximal-entanglement lemma not applicable for point group {group} along {direction:?}")]
    DirectionNotApplicable { group: String, direction: [f64; 3] },

    #[error("eigensolver failed: {0}")]
    Internal(String),

    #[error("invalid argument: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn validation(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            key: key.into(),
            reason: reason.into(),
        }
    }

    /// True for errors that reflect a violated physical precondition
    /// (pairing, degenerate denominators, applicability) rather than bad input or I/O.
    pub fn is_physics(&self) -> bool {
        matches!(
            self,
            Error::PairingAmbiguity { .. }
                | Error::NearDegenerateIntermediate { .. }
                | Error::ZeroField
                | Error::NoBracket { .. }
                | Error::DirectionNotApplicable { .. }
                | Error::Internal(_)
        )
    }

    /// Short kebab-case name of the variant, for status columns.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Io { .. } => "io",
            Error::Parse { .. } => "parse",
            Error::Validation { .. } => "validation",
            Error::PairingAmbiguity { .. } => "pairing-ambiguity",
            Error::UnknownBand(_) => "unknown-band",
            Error::NearDegenerateIntermediate { .. } => "near-degenerate-intermediate",
            Error::ZeroField => "zero-field",
            Error::NoBracket { .. } => "no-bracket",
            Error::DirectionNotApplicable { .. } => "direction-not-applicable",
            Error::Internal(_) => "internal",
            Error::Usage(_) => "usage",
        }
    }
}
