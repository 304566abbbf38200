use std::fmt;

/// Errors shared across the library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A letter is outside the alphabet of the given mode (zero value,
    /// index above the rank, or an inverse letter in monoid mode).
    #[error("invalid letter {value} for {context}")]
    InvalidLetter { value: i32, context: String },
    /// Rank below 2.
    #[error("rank must be at least 2, got {0}")]
    RankOutOfRange(u32),
    /// A group-mode word contains an adjacent letter/inverse pair.
    #[error("word is not freely reduced at position {position}")]
    NotReduced { position: usize },
    /// Two values of different modes were combined.
    #[error("mode mismatch: {0} vs {1}")]
    ModeMismatch(String, String),
    /// The empty word was supplied where a nonempty pattern is required.
    #[error("pattern word must be nonempty")]
    EmptyPattern,
    /// Requested level is below the depth of the sum.
    #[error("level {level} is too small for a sum of depth {depth}")]
    LevelTooSmall { level: usize, depth: String },
    /// Requested level is outside the valid range for the operation.
    #[error("level {level} out of range (minimum {min})")]
    LevelOutOfRange { level: usize, min: usize },
    /// A sum that must be pure of a given length is not.
    #[error("sum is not pure of length {level}: support contains a word of length {found}")]
    NotPure { level: usize, found: usize },
    /// Tree operation applied below the minimal depth.
    #[error("operation requires depth at least {min}, got {got}")]
    DepthTooSmall { min: usize, got: usize },
    /// Complete reduction of a non-constant brotherhood.
    #[error("brotherhood of {father} is not constant")]
    NotConstant { father: String },
    /// Partial reduction along a letter that is not available in the brotherhood.
    #[error("letter {letter} is not a valid ending for the brotherhood of {father}")]
    IllegalLetter { letter: String, father: String },
    /// s_map applied to a word outside the special-word set.
    #[error("{word} is not a special word at level {level}")]
    NotSpecialWord { word: String, level: usize },
    /// Graph operation that requires connectivity.
    #[error("graph is disconnected")]
    Disconnected,
    /// Oracle request beyond the configured desk-scale cap.
    #[error("enumeration too large: {0}")]
    TooLarge(String),
    /// Malformed word text.
    #[error("word syntax error at byte {position}: {message}")]
    WordSyntax { position: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn mode_mismatch(a: impl fmt::Display, b: impl fmt::Display) -> Error {
        Error::ModeMismatch(a.to_string(), b.to_string())
    }
}
