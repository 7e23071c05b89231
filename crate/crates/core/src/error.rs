use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid rank {rank} for type {family}")]
    InvalidRank { family: char, rank: usize },

    #[error("cannot parse root system label {0:?}")]
    InvalidLabel(String),

    #[error("vector {0:?} is not a root of the system")]
    NotARoot(Vec<i64>),

    #[error("simple root index {index} out of range 1..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("Gamma has a pole at {0}")]
    Pole(String),

    #[error("argument {value} outside the domain of {function}")]
    Domain { function: &'static str, value: String },

    #[error("{u} is not a unit modulo {modulus}")]
    NotAUnit { u: u64, modulus: u64 },

    #[error("modulus mismatch: word over {word} evaluated at a site over {site}")]
    ModulusMismatch { word: u64, site: u64 },

    #[error("power iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("no prime p = 1 mod {modulus} found below {limit}")]
    SearchExhausted { modulus: u64, limit: u64 },

    #[error("word is not in C_N: {0}")]
    NotInC(String),

    #[error("quadrature did not converge: successive estimates differ by {0:e}")]
    QuadratureNotConverged(f64),

    #[error("precision must be at least {min} digits, got {got}")]
    Precision { min: u32, got: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
