use alloc::string::String;
use core::fmt;

/// Errors raised by constructions and algorithms in this crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    NotPrime(u32),
    InvalidArgument(String),
    /// An enumeration would exceed the configured element cap.
    BudgetExceeded { needed: u64, cap: u64 },
    NotUnit,
    /// A documented precondition of the operation does not hold.
    Precondition(String),
    /// An element is not a member of the subgroup the operation requires.
    NotInSubgroup(String),
    /// A self-check failed; always indicates a bug.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::InvalidArgument(s) => write!(f, "invalid argument: {s}"),
            Error::BudgetExceeded { needed, cap } => {
                write!(f, "enumeration budget exceeded: need {needed}, cap {cap}")
            }
            Error::NotUnit => write!(f, "element is not a unit"),
            Error::Precondition(s) => write!(f, "precondition violated: {s}"),
            Error::NotInSubgroup(s) => write!(f, "element not in {s}"),
            Error::Internal(s) => write!(f, "internal inconsistency: {s}"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;

/// Cap on the number of elements any single enumeration may visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Budget {
    pub const DEFAULT: Budget = Budget(10_000_000);

    pub fn check(self, needed: u64) -> Result<()> {
        if needed > self.0 {
            Err(Error::BudgetExceeded { needed, cap: self.0 })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::DEFAULT
    }
}
