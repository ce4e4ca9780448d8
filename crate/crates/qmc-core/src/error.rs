use alloc::string::String;
use core::fmt;

/// Errors raised when an operation's contract is violated.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Operands live in spaces of different dimension.
    DimensionMismatch { expected: usize, got: usize },
    /// A matrix required to be unitary is not, within the unitarity
    /// tolerance. Carries the max-entry magnitude of `U†U - I`.
    NotUnitary { violation: f64 },
    /// An action name absent from the automaton was used.
    UnknownAction(String),
    /// A transition or marking refers to an undeclared classical state.
    UnknownState(String),
    /// The eigen-reduction requires every action to have a non-degenerate
    /// spectrum; this action does not.
    DegenerateSpectrum(String),
    /// A checker relying on the commuting/join-closed hypotheses was given a
    /// proposition set that failed (or skipped) validation.
    UnvalidatedPropositions,
    /// The product construction requires a co-deterministic automaton.
    NotCoDeterministic,
    /// The requested reduction requires a reversible recognizer.
    NotReversible,
    /// The product construction assumes no initial state is final.
    InitialsMeetFinals,
    /// Finite-word operation on a Buechi automaton or vice versa.
    ModeMismatch,
    /// Lasso acceptance needs a nonempty loop.
    EmptyLoop,
    /// A quantum automaton must have a nonzero initial subspace.
    EmptyInitialSubspace,
    /// Tolerances must be strictly positive with membership <= unitarity.
    BadTolerances,
    /// The recognizer accepts the empty word, so the property is empty.
    EmptyWordBadPrefix,
}

/// Convenience alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::NotUnitary { violation } => {
                write!(f, "matrix is not unitary: max |U†U - I| entry is {violation:.3e}")
            }
            Error::UnknownAction(name) => write!(f, "unknown action {name:?}"),
            Error::UnknownState(name) => write!(f, "unknown classical state {name:?}"),
            Error::DegenerateSpectrum(name) => {
                write!(f, "action {name:?} has a degenerate spectrum")
            }
            Error::UnvalidatedPropositions => write!(
                f,
                "proposition set is not validated as commuting and join-closed"
            ),
            Error::NotCoDeterministic => write!(f, "automaton is not co-deterministic"),
            Error::NotReversible => write!(f, "recognizer is not reversible"),
            Error::InitialsMeetFinals => {
                write!(f, "recognizer has an initial state that is also final")
            }
            Error::ModeMismatch => write!(f, "acceptance mode mismatch"),
            Error::EmptyLoop => write!(f, "lasso loop must be nonempty"),
            Error::EmptyInitialSubspace => write!(f, "initial subspace must be nonzero"),
            Error::BadTolerances => write!(f, "tolerances must be strictly positive"),
            Error::EmptyWordBadPrefix => {
                write!(f, "recognizer accepts the empty word; the property is empty")
            }
        }
    }
}

impl core::error::Error for Error {}
