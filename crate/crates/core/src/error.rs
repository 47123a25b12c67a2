use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("{n} is not invertible modulo {m}")]
    NotInvertible { n: BigInt, m: BigInt },

    #[error("denominator {den} is divisible by K = {k}")]
    DenominatorDivisible { den: BigInt, k: u32 },

    #[error("valuation of zero is infinite")]
    ZeroValuation,

    #[error("quotient does not lie in Z[q] (K = {k})")]
    NotDivisible { k: u32 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("series has zero constant term and cannot be inverted")]
    NotInvertibleSeries,

    #[error("Laurent shift h^{shift} did not cancel: coefficient of h^{index} is {coeff}")]
    LaurentShift { shift: u32, index: usize, coeff: String },

    #[error("series truncated at order {have}, but order {need} is required")]
    Truncation { have: usize, need: usize },

    #[error("color {0} must be odd and positive")]
    BadColor(i64),

    #[error("surgery framing must be nonzero")]
    ZeroFraming,

    #[error("K = {k} divides h1 = {h1}; theorem hypotheses do not hold")]
    PrimeDividesH1 { k: u32, h1: BigInt },

    #[error("K = {k} divides p = {p}")]
    PrimeDividesP { k: u32, p: i64 },

    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
