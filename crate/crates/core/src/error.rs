use std::fmt;

/// Library-wide error type.
///
/// Most variants report precondition violations on the caller's side.
/// `Internal` is reserved for failed cross-checks between two
/// implementations of the same quantity (e.g. the two displayed forms
/// of the erasure+substitution channel count); the CLI maps it to a
/// distinct exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two words from different alphabets were combined.
    AlphabetMismatch { left: u32, right: u32 },
    /// Two words of different lengths were combined coordinatewise.
    LengthMismatch { left: usize, right: usize },
    /// A word containing the unknown marker reached an operation that
    /// has no semantics for it.
    UnknownSymbol { context: &'static str },
    /// A word containing the erasure marker reached an operation that
    /// requires plain symbols.
    ErasedSymbol { context: &'static str },
    /// A symbol code outside the extended alphabet [0, q+1].
    SymbolOutOfRange { value: u32, q: u32 },
    /// Word text that does not parse under the given alphabet.
    ParseWord { text: String, reason: String },
    /// Malformed code file or batch file.
    ParseInput { reason: String },
    /// A parameter outside the documented domain of an operation.
    InvalidParameter { reason: String },
    /// An enumeration would exceed the configured cap.
    CapExceeded {
        what: &'static str,
        needed: String,
        cap: u64,
    },
    /// Set-semantics sampling asked for more distinct words than the
    /// ball holds.
    NotEnoughWords { volume: String, requested: u64 },
    /// Rejection sampling hit the retry cap without finding a fresh
    /// word.
    SamplingStalled { retries: u64 },
    /// A channel count landed outside every erasure bracket.
    NoBracket {
        n_outputs: String,
        side: &'static str,
    },
    /// Erasure outputs disagree on a plain symbol (1-based coordinate).
    ConflictingSymbols { coordinate: usize },
    /// A decoder could not produce the result its contract promises.
    DecodeFailed { reason: String },
    /// A redundant internal computation disagreed with the primary one.
    Internal { check: &'static str, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for failed internal cross-checks, which indicate a bug in
    /// this library rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal { .. })
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::AlphabetMismatch { left, right } => {
                write!(f, "alphabet mismatch: q={left} vs q={right}")
            }
            Error::LengthMismatch { left, right } => {
                write!(f, "length mismatch: {left} vs {right}")
            }
            Error::UnknownSymbol { context } => {
                write!(f, "unknown marker '?' not allowed in {context}")
            }
            Error::ErasedSymbol { context } => {
                write!(f, "erasure marker '*' not allowed in {context}")
            }
            Error::SymbolOutOfRange { value, q } => {
                write!(f, "symbol code {value} outside extended alphabet for q={q}")
            }
            Error::ParseWord { text, reason } => {
                write!(f, "cannot parse word {text:?}: {reason}")
            }
            Error::ParseInput { reason } => write!(f, "malformed input: {reason}"),
            Error::InvalidParameter { reason } => write!(f, "invalid parameter: {reason}"),
            Error::CapExceeded { what, needed, cap } => {
                write!(f, "{what} needs {needed} items, above the cap {cap}")
            }
            Error::NotEnoughWords { volume, requested } => write!(
                f,
                "requested {requested} distinct outputs from a ball of {volume} words"
            ),
            Error::SamplingStalled { retries } => {
                write!(
                    f,
                    "distinct-output sampling stalled after {retries} retries"
                )
            }
            Error::NoBracket { n_outputs, side } => {
                write!(f, "channel count {n_outputs} lies {side} every bracket")
            }
            Error::ConflictingSymbols { coordinate } => {
                write!(
                    f,
                    "outputs disagree on plain symbol at coordinate {coordinate}"
                )
            }
            Error::DecodeFailed { reason } => write!(f, "decoding failed: {reason}"),
            Error::Internal { check, detail } => {
                write!(f, "internal cross-check '{check}' failed: {detail}")
            }
        }
    }
}

impl std::error::Error for Error {}
