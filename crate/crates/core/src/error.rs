use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{what} exceeds cap: {value} > {cap}")]
    CapExceeded {
        what: &'static str,
        value: u64,
        cap: u64,
    },
    #[error("{0} is not a supported prime")]
    InvalidPrime(u32),
    #[error("quotient algebra is not finite-dimensional (variable {0} has no pure-power leading term)")]
    NotFiniteDimensional(String),
    #[error("ideal is the unit ideal; the zero algebra is rejected")]
    ZeroAlgebra,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("operands live in different rings: {0}")]
    RingMismatch(String),
    #[error("shift by {shift} overflows truncation length {n}")]
    TruncationOverflow { shift: usize, n: usize },
    #[error("structure polynomial cache corrupt: {0}")]
    CacheCorrupt(String),
    #[error("cache i/o: {0}")]
    CacheIo(String),
    #[error("exact integer division failed in ghost recursion at index {0}")]
    InexactDivision(usize),
    #[error("the first exact sequence requires a reduced algebra")]
    ReducednessRequired,
    #[error("curve is not smooth: singular point over F_{p}^{degree}")]
    NotSmooth { p: u32, degree: u32 },
    #[error("pole bound {bound} is too small for level {level} (needed {needed})")]
    BoundInconclusive {
        bound: u32,
        level: usize,
        needed: u32,
    },
    #[error("splitting witness failed validation: {0}")]
    WitnessInvalid(String),
    #[error("factor {0} is F-split")]
    FactorIsSplit(String),
    #[error("comparison map failed: {0}")]
    ComparisonFailed(String),
    #[error("invalid p-rank {p_rank} for dimension {g}")]
    InvalidRank { g: u32, p_rank: u32 },
    #[error("independent methods disagree: {0}")]
    MethodDisagreement(String),
    #[error("subject is not catalogued: {0}")]
    Uncatalogued(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn cap(what: &'static str, value: u64, cap: u64) -> Result<()> {
    if value > cap {
        Err(Error::CapExceeded { what, value, cap })
    } else {
        Ok(())
    }
}
