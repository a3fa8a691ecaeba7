//! Error type shared by every module in the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong during exact series and determinant work.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two operands live in different coefficient rings.
    #[error("ring mismatch: {left} vs {right}")]
    RingMismatch { left: String, right: String },

    /// Modulus must be a prime power p^e with p prime and e >= 1.
    #[error("invalid modulus {0}: not a prime power")]
    InvalidModulus(u64),

    /// Coefficient index past the valid order of a series.
    #[error("coefficient index {index} exceeds valid order {order}")]
    OrderExceeded { index: usize, order: usize },

    /// An operation needs more valid coefficients than the input carries.
    #[error("insufficient series order: need {need}, have {have}")]
    InsufficientOrder { need: usize, have: usize },

    /// Division by the zero series, or by a series whose valuation exceeds
    /// the numerator's.
    #[error("series division by zero (denominator valuation {denom_val} exceeds numerator valuation {numer_val})")]
    DivisionByZero { numer_val: usize, denom_val: usize },

    /// A residue with no multiplicative inverse modulo m.
    #[error("{value} is not invertible modulo {modulus}")]
    NonInvertible { value: u64, modulus: u64 },

    /// Square roots are only taken of series with constant term 1.
    #[error("series sqrt requires constant term 1, found {found}")]
    SqrtConstantTerm { found: String },

    /// No square root algorithm modulo 2^e; compute exactly and reduce.
    #[error("series sqrt is not supported modulo {0}: even modulus")]
    SqrtEvenModulus(u64),

    /// A rational coefficient whose denominator is divisible by p cannot be
    /// reduced modulo p^e.
    #[error("coefficient at index {index} is not p-integral: denominator of {value} shares a factor with {modulus}")]
    NotPIntegral {
        index: usize,
        value: String,
        modulus: u64,
    },

    /// The Stieltjes algorithm divides by H_n at step n; a vanishing Hankel
    /// determinant stops it.
    #[error("Stieltjes breakdown at n={n} (H_{n}=0)")]
    StieltjesBreakdown { n: usize },

    /// A J-fraction carries too few coefficient pairs for the requested
    /// series order.
    #[error("continued fraction depth {depth} too small for order {order}: need {need} pairs")]
    InsufficientDepth {
        depth: usize,
        order: usize,
        need: usize,
    },

    /// Recovering u_n, v_n from Hankel determinants divides by H_n.
    #[error("Hankel determinant H_{index} is zero; u/v recovery undefined")]
    ZeroHankelDenominator { index: usize },

    /// Grafting requires the host series to have constant term 1.
    #[error("graft requires constant term 1 in the host series, found {found}")]
    GraftBasis { found: String },

    /// A generator or check parameter outside its documented range.
    #[error("parameter {name}={value} out of range: {reason}")]
    ParamOutOfRange {
        name: &'static str,
        value: String,
        reason: &'static str,
    },

    /// The cofactor-expansion determinant is for cross-checks only.
    #[error("naive determinant limited to n<=8, requested n={0}")]
    OracleTooLarge(usize),

    /// No check with this id in the catalog.
    #[error("unknown check id {0:?}")]
    UnknownCheck(String),

    /// Neither quadratic branch matches the supplied initial coefficients.
    #[error("no branch of the quadratic matches the initial terms at index {index}")]
    BranchMismatch { index: usize },

    /// Expression or format parse failure.
    #[error("parse error: {0}")]
    Parse(String),
}
