use thiserror::Error;

use crate::poly::Var;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no value assigned to variable {0}")]
    MissingVariable(Var),

    #[error("denominator is zero")]
    ZeroDenominator,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("site {site} is out of range for width {width}")]
    SiteOutOfRange { site: usize, width: usize },

    #[error("cannot join non-adjacent sites {a} and {b}")]
    NonAdjacentJoin { a: usize, b: usize },

    #[error("malformed connectivity code: {0}")]
    MalformedCode(String),

    #[error("{what} needs {needed} evaluations, budget is {budget}; use a smaller strip")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("Z_{} is not divisible by Q^{j}", 2 * .j + 1)]
    NotDivisible { j: usize },

    #[error("p = {0} has no rational Q; supported values are 2, 3, 4, 6")]
    UnsupportedBeraha(u32),

    #[error("{0}")]
    Precondition(String),

    #[error("state {0} fell outside the transfer basis")]
    BasisClosure(String),
}
