use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The modulus is not a prime number.
    NotPrime(u64),
    /// Two operands carry different moduli.
    ModulusMismatch { left: u32, right: u32 },
    /// A row, vector or matrix has the wrong length.
    DimensionMismatch { expected: usize, found: usize },
    /// The dominance matching only exists for `2ℓ ≤ σ`.
    DegreeAboveHalf { degree: u32, sigma: u32 },
    /// The grade lies outside the admissible range of the operation.
    GradeOutOfRange { grade: u32, min: u32, max: u32 },
    /// A multi-index does not have the expected total degree.
    DegreeMismatch { expected: u32, found: u32 },
    /// A multi-index has the wrong number of coordinates.
    ArityMismatch { expected: usize, found: usize },
    /// The tensor power `n^ℓ` does not fit in memory addressing.
    TensorTooLarge { n: usize, degree: u32 },
    /// A subsheaf of rank zero has no slope.
    ZeroRank,
    /// Declared rank differs from the sum of the rank profile.
    RankMismatch { declared: u64, profile_sum: u64 },
    /// The rank profile is longer than the filtration.
    ProfileTooLong { len: usize, max: usize },
    /// An instability value is missing for a filtration step.
    MissingInstability { step: usize },
    /// Instabilities are `μ_max − μ_min` and cannot be negative.
    NegativeInstability { step: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(p) => write!(f, "modulus {p} is not prime"),
            Error::ModulusMismatch { left, right } => {
                write!(f, "mixed moduli {left} and {right}")
            }
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::DegreeAboveHalf { degree, sigma } => write!(
                f,
                "degree {degree} exceeds half of the cap sum {sigma}; no dominance matching is promised"
            ),
            Error::GradeOutOfRange { grade, min, max } => {
                write!(f, "grade {grade} outside admissible range [{min}, {max}]")
            }
            Error::DegreeMismatch { expected, found } => {
                write!(f, "multi-index has degree {found}, expected {expected}")
            }
            Error::ArityMismatch { expected, found } => {
                write!(f, "multi-index has {found} coordinates, expected {expected}")
            }
            Error::TensorTooLarge { n, degree } => {
                write!(f, "tensor power {n}^{degree} is too large to index")
            }
            Error::ZeroRank => f.write_str("subsheaf rank must be positive"),
            Error::RankMismatch { declared, profile_sum } => write!(
                f,
                "declared rank {declared} differs from rank profile sum {profile_sum}"
            ),
            Error::ProfileTooLong { len, max } => {
                write!(f, "rank profile has {len} entries, at most {max} allowed")
            }
            Error::MissingInstability { step } => {
                write!(f, "no instability given for filtration step {step}")
            }
            Error::NegativeInstability { step } => {
                write!(f, "instability at step {step} is negative")
            }
        }
    }
}

impl core::error::Error for Error {}
