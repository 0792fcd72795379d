use thiserror::Error;

use crate::automaton::Violation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("period of an eventually periodic word must be nonempty")]
    EmptyPeriod,
    #[error("bad letter `{0}`")]
    BadLetter(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid automaton: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("letter {letter} out of range (alphabet size {sigma})")]
    LetterOutOfRange { letter: usize, sigma: usize },
    #[error("state {state} out of range (maximal state {d})")]
    StateOutOfRange { state: usize, d: usize },
    #[error("split index {j} out of range for a word of length {len}")]
    SplitIndex { j: usize, len: usize },
    #[error("state {0} has no transition avoiding the sink")]
    NoExit(usize),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("polynomial must be monic with degree at least 1")]
    NotMonic,
    #[error("polynomial {poly} is reducible: {factors}")]
    Reducible { poly: String, factors: String },
    #[error("polynomial {0} has no real root greater than 1")]
    NoRootAboveOne(String),
    #[error("irreducibility of degree-{0} polynomials is not checked; assert it explicitly")]
    DegreeTooLarge(usize),
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different number fields")]
    FieldMismatch,
    #[error("bad polynomial syntax: {0}")]
    Syntax(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectralError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("characteristic polynomial {charpoly} is reducible ({factors}); the dual forms are undefined")]
    ReducibleCharpoly { charpoly: String, factors: String },
    #[error("incidence matrix is not primitive")]
    NotPrimitive,
    #[error("dominant eigenvalue is not a simple root of the characteristic polynomial")]
    NotSimple,
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumerationError {
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error("word {0} is not accepted")]
    NotAccepted(String),
    #[error("word {0} is not in the pruned mirror language")]
    NotInPruned(String),
    #[error("hypothesis violated: the smallest letter sends state {0} to the sink")]
    SmallestLetterSinks(usize),
    #[error("rank {0} exceeds the size of the (finite) language")]
    RankTooLarge(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValueError {
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Numeration(#[from] NumerationError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("word leaves the language at position {0}")]
    LeavesLanguage(usize),
    #[error("position must be at least 1")]
    Position,
    #[error("the automaton is not a Pisot automaton")]
    NotPisot,
    #[error("value {0} lies outside [0,1]")]
    OutOfUnitInterval(String),
    #[error("N = {n} exceeds the brute-force cap {cap}")]
    CapExceeded { n: u64, cap: u64 },
    #[error("stride must be at least 1")]
    Stride,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BetaError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error("beta is not a Pisot number; the expansion of 1 need not be eventually periodic")]
    NotPisot,
    #[error("more than {0} distinct remainders; giving up")]
    CapExceeded(usize),
    #[error("expansion is not admissible")]
    NotAdmissible,
}

/// Crate-level error used by the command line and the C interface.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Numeration(#[from] NumerationError),
    #[error(transparent)]
    Value(#[from] ValueError),
    #[error(transparent)]
    Beta(#[from] BetaError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True when the error reports a failed internal cross-check rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::Spectral(SpectralError::Consistency(_))
                | Error::Value(ValueError::Spectral(SpectralError::Consistency(_)))
        )
    }
}
