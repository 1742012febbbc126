use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid Reed-Muller parameters m={m}, r={r} (need 0 <= r <= m <= 30)")]
    InvalidOrder { m: i64, r: i64 },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("subspace lives in dimension {subspace}, word in dimension {word}")]
    DimensionMismatch { subspace: u32, word: u32 },
    #[error("invalid subspace: {0}")]
    InvalidSubspace(&'static str),
    #[error("operation needs a one-dimensional subspace, got dimension {0}")]
    NotOneDimensional(u32),
    #[error("invalid channel parameter: {0}")]
    InvalidChannel(&'static str),
    #[error("received word does not match the channel alphabet")]
    AlphabetMismatch,
    #[error("invalid decoder configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("list exponent t={t} exceeds the limit for length {n}")]
    ListTooLarge { t: u32, n: usize },
    #[error("decoder inputs are misaligned: {0}")]
    Misaligned(&'static str),
}
