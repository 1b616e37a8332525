use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("p-adic valuation of zero is undefined")]
    ZeroValuation,

    #[error("division by zero in Q(zeta_{0})")]
    DivisionByZero(u64),

    #[error("weight {weight} is divisible by p = {p}")]
    WeightDivisibleByP { weight: i64, p: u64 },

    #[error("a lens space needs at least one weight")]
    NoWeights,

    #[error("mismatched primes: {0} vs {1}")]
    MismatchedPrime(u64, u64),

    #[error("virtual representation has nonzero virtual dimension {0}")]
    NonzeroVirtualDimension(i64),

    #[error("{r} is not a unit mod {p}")]
    NotAUnit { r: i64, p: u64 },

    #[error("dimension parameter n = {n} is out of range: {reason}")]
    DimensionOutOfRange { n: u64, reason: &'static str },

    #[error("p = {p} exceeds the configured bound {bound}")]
    PrimeBeyondBound { p: u64, bound: u64 },

    #[error("enumeration bound exceeded: p = {p}, n = {n} (limits p <= 13, n <= 8)")]
    EnumerationBound { p: u64, n: u64 },

    #[error("the spaces are not tangentially homotopy equivalent")]
    NotTangential,

    #[error("{0} lies outside the ideal (p)")]
    NotInIdeal(u64),

    #[error("order exponent {t} exceeds m = {m}")]
    OrderExponentOutOfRange { t: u32, m: u32 },

    #[error("cokernel is infinite")]
    InfiniteCokernel,

    #[error("cokernel too large for enumeration ({0} cosets)")]
    CokernelTooLarge(u128),

    /// A computed value contradicts a proven statement; this indicates a bug.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
