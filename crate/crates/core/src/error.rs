use thiserror::Error;

/// Errors produced by the library.
///
/// Variants split into input errors (malformed text, unknown names) and
/// domain errors (the input is well formed but the requested quantity does
/// not exist). The CLI maps the former to exit code 1 and the latter to 2.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("unknown letter `{0}`")]
    UnknownLetter(String),

    #[error("unknown state `{0}`")]
    UnknownState(String),

    #[error("transition from `{state}` on `{letter}` is listed twice")]
    DuplicateTransition { state: String, letter: String },

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("unknown language `{0}`")]
    UnknownLanguage(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("`{0}` is not in the language")]
    NotInLanguage(String),

    #[error("`{0}` is not in the center of the language")]
    NotInCenter(String),

    #[error("`{0}` is not in the adherence of the language")]
    NotInAdherence(String),

    #[error("the language is finite")]
    FiniteLanguage,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("{value} lies outside [{lo}, 1]")]
    OutOfRange { value: String, lo: String },

    #[error("cannot separate the target from an interval boundary at position {position}")]
    Ambiguous { position: usize },

    #[error("{value} is not an interval endpoint at depth <= {depth}")]
    NotAnEndpoint { value: String, depth: usize },

    #[error("enumeration guard exceeded: more than {0} words")]
    GuardExceeded(usize),
}

impl Error {
    /// Domain errors: well-formed input for which the answer does not exist.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::NotInLanguage(_)
                | Error::NotInCenter(_)
                | Error::NotInAdherence(_)
                | Error::FiniteLanguage
                | Error::Unsupported(_)
                | Error::OutOfRange { .. }
                | Error::Ambiguous { .. }
                | Error::NotAnEndpoint { .. }
                | Error::GuardExceeded(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
