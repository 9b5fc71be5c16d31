//! Exact algebra on the jet spaces `J^1` and `J^2` of functions of two
//! variables, aimed at third-order Monge–Ampère equations: symbols and
//! characteristic cones, the meta-symplectic form on `M^(1)`, Goursat-type
//! distributions and their intermediate integrals.
//!
//! Everything is computed over `Q` with exact rational arithmetic. Where a
//! root of a symbol is irrational the result is marked inexact instead of
//! being silently rounded.

pub mod algebra;
pub mod integrals;
pub mod jet;
pub mod metasymplectic;
pub mod monge_ampere;
pub mod probe;
pub mod symbol;
pub mod verify;

pub use algebra::{Coordinate, MultiPoly, Rational};
pub use jet::{Distribution, JetPoint, VectorField};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] algebra::ParseError),
    #[error("a level-{level} jet point needs {expected} values, got {got}")]
    BadPoint {
        level: u8,
        expected: usize,
        got: usize,
    },
    #[error("vector field is not a section of the contact distribution")]
    OutsideContact,
    #[error("vertical rank is not constant across samples: {0:?}")]
    NonConstantRank(Vec<usize>),
    #[error("the symbol vanishes at this point")]
    ZeroSymbol,
    #[error("the point does not lie on the equation")]
    NotOnEquation,
    #[error("the line is not contained in the Lagrangian plane")]
    LineNotInPlane,
    #[error("only {0} independent fibre samples on the equation")]
    InsufficientSamples(usize),
    #[error("covector is not decomposable over Q: {0}")]
    NotDecomposable(String),
    #[error("the horizontal part of the distribution degenerates")]
    DegenerateHorizontal,
    #[error("distribution must have rank 3, found {0}")]
    RankError(usize),
    #[error("the equation vanishes identically")]
    TrivialEquation,
    #[error("distribution is not of the required normal form: {0}")]
    NormalFormError(String),
    #[error("not a Monge–Ampère equation: offending monomial `{0}`")]
    NotMae(String),
    #[error("symbol has complex roots: no orthogonal triple")]
    NotFullyDecomposable,
    #[error("not of Goursat type: {0}")]
    NotGoursat(String),
    #[error("the recovery certificate vanishes at every probe")]
    DiscriminantVanishes,
    #[error("candidate integral must be a function on M^(1), found `{0}`")]
    NotOnFirstProlongation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
