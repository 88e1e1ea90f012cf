use thiserror::Error;

use crate::charsum::SumId;
use crate::codes::Family;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("extension degree {0} outside the supported range 2..=16")]
    DegreeOutOfRange(u32),

    #[error("modulus {mask:#x} ({poly}) does not have degree {expected}")]
    WrongDegree {
        mask: u32,
        poly: String,
        expected: u32,
    },

    #[error("modulus {mask:#x} ({poly}) is reducible over GF(2)")]
    ReducibleModulus { mask: u32, poly: String },

    #[error("element mask {mask:#x} does not belong to GF(2^{m})")]
    ElementOutOfRange { mask: u32, m: u32 },

    #[error("exponent d must be positive")]
    ZeroExponent,

    #[error("x^2 + x + a needs a nonzero constant term a")]
    ZeroConstantTerm,

    #[error("no case of the closed form for {sum} covers a={a:#x}, b={b:#x}")]
    LemmaSilent { sum: SumId, a: u32, b: u32 },

    #[error("{family} at m={m} is outside the scope of its weight distribution theorem")]
    OutOfTheoremScope { family: Family, m: u32 },

    #[error("work budget exceeded: {task} needs {required} operations, budget is {budget}")]
    BudgetExceeded {
        task: &'static str,
        required: u128,
        budget: u128,
    },

    #[error("invalid configuration: {0}")]
    Config(String),
}
