use thiserror::Error;

/// Errors for set construction, arithmetic, classification and sweeps.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("modulus {0} is not prime")]
    NonPrimeModulus(u64),

    /// Moduli are capped so that every residue and witness fits in i64
    /// arithmetic without overflow checks sprinkled through the hot paths.
    #[error("modulus {0} exceeds the supported range (max 2^62)")]
    ModulusTooLarge(u64),

    #[error("residue {value} out of range for modulus {modulus}")]
    ResidueOutOfRange { value: u64, modulus: u64 },

    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),

    #[error("integer overflow in 64-bit arithmetic")]
    Overflow,

    #[error("operand set is empty")]
    EmptySet,

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A theorem's stated hypotheses do not hold for the given input.
    /// Distinct from `Precondition`: it signals "the characterization does
    /// not apply here", not "the input is malformed".
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("generator must be a nonzero residue")]
    ZeroGenerator,

    #[error("estimated {estimated} pairs exceeds the budget of {budget}; narrow the sweep")]
    BudgetExceeded { estimated: u64, budget: u64 },

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
