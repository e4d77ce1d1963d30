use thiserror::Error;

use crate::ecs::ResidueClass;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid modulus {0}: must be at least 1")]
    InvalidModulus(i64),
    #[error("a covering system needs at least one class")]
    EmptySystem,
    #[error("lcm of the moduli overflows 64 bits")]
    LcmOverflow,
    #[error("N = {lcm} exceeds the scan limit {limit}; use the CRT verifier")]
    ScanLimitExceeded { lcm: u64, limit: u64 },
    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{divisor} does not divide {value}")]
    NotADivisor { divisor: u64, value: u64 },
    #[error("the sum does not vanish at a primitive root of unity")]
    NotVanishing,
    #[error("modulus {0} has more than two distinct prime factors")]
    TooManyPrimeFactors(u64),
    #[error("the zero vector has no coset decomposition")]
    ZeroVector,
    #[error("coefficient at index {0} is negative")]
    NegativeCoefficient(usize),
    #[error("invalid coset: prime {prime}, shift {shift} for modulus {modulus}")]
    InvalidCoset {
        modulus: u64,
        prime: u64,
        shift: u64,
    },
    #[error("vanishing sum mod {0} contains no prime-order coset")]
    NoCosetFound(u64),
    #[error("modulus must be at least 1")]
    ZeroModulus,

    #[error("class {0} is not present in the system")]
    TargetNotPresent(ResidueClass),
    #[error("split arity {0} must be at least 2")]
    InvalidArity(u64),
    #[error("coset (n={modulus}, p={prime}, d={shift}) is not fully present")]
    CosetNotPresent {
        modulus: u64,
        prime: u64,
        shift: u64,
    },
    #[error("the system is not an exact covering system")]
    NotExact,
    #[error("the system is already trivial")]
    AlreadyTrivial,
    #[error("every division-maximal modulus has three or more distinct prime factors")]
    NoEligibleMaximalModulus,
    #[error("{0:?} is not a triple of distinct primes")]
    InvalidPrimes((u64, u64, u64)),
    #[error("N(A) = {lcm} is not supported exactly on the primes {primes:?}")]
    WrongPrimeSupport { lcm: u64, primes: (u64, u64, u64) },
    #[error("N = {n} exceeds the enumeration limit {limit}")]
    EnumerationLimitExceeded { n: u64, limit: u64 },
    #[error("invalid prime pool: {0}")]
    InvalidPrimePool(String),
    #[error("trace step {index} splits a class that is not present")]
    InvalidTrace { index: usize },
    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
