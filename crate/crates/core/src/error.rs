use thiserror::Error;

/// Errors raised by field, polynomial, curve and construction operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    InvalidCharacteristic(u64),
    #[error("extension degree must be at least 1, got {0}")]
    InvalidExtensionDegree(u32),
    #[error("field order {p}^{r} exceeds the configured limit {limit}")]
    FieldTooLarge { p: u64, r: u32, limit: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("invalid field element: {0}")]
    InvalidElement(String),
    #[error("operation requires a non-constant polynomial")]
    ConstantPolynomial,
    #[error("polynomial is not squarefree; gcd(f, f') = {witness}")]
    NotSquarefree { witness: String },
    #[error("polynomial degree {degree} is below the minimum {minimum}")]
    DegreeTooSmall { degree: usize, minimum: usize },
    #[error("polynomial is reducible")]
    Reducible,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("j = 0 for genus {genus} over F_{q}: the criterion is undefined")]
    DegenerateJ { genus: u64, q: u64 },
    #[error("curve is not pointless")]
    NotPointless,
    #[error("search space of {needed} candidates exceeds the budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
