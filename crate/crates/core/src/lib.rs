//! Exact-arithmetic library for desk-scale orbit-counting experiments:
//! weighted projective heights and bounded-height enumeration over ℤ and
//! 𝔽_q[t], invariant theory of binary quartics / ternary cubics / quadric
//! pairs, 2-Selmer computation via locally soluble quartic classes, exact
//! rational LP verification of cusp-cutting character conditions, local
//! density and tail-count experiments, and local mass factors.
//!
//! Everything user-visible is exact: `BigInt` / `BigRational` values,
//! integer powers of `q`, and certified p-adic verdicts. Floating point
//! never decides a predicate.

pub mod curve;
pub mod cusp;
pub mod geom;
pub mod gf;
pub mod lp;
pub mod masses;
pub mod oracle;
pub mod padic;
pub mod primes;
pub mod quadric;
pub mod quartic;
pub mod selmer;
pub mod sieve;
pub mod solubility;
pub mod ternary;
pub mod wps;
pub mod zpoly;

use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("undefined resultant: both polynomials are zero")]
    BothZero,
    #[error("constant polynomial has no discriminant")]
    ConstantPoly,
    #[error("polynomial is identically zero mod {0}")]
    IdenticallyZero(u64),
    #[error("Hensel hypothesis fails: root is not simple mod {0}")]
    HenselFails(u64),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("undecided local test at p = {0}")]
    Undecided(u64),
    #[error("reduce first: point is not minimal")]
    NotMinimal,
    #[error("zero point")]
    ZeroPoint,
    #[error("rank mismatch")]
    RankMismatch,
    #[error("singular invariants: 4I^3 = J^2")]
    SingularInvariants,
    #[error("determinant must be +1 or -1")]
    NotUnimodular,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("oracle inapplicable: no rational 2-torsion")]
    OracleInapplicable,
    #[error("no curves in family")]
    EmptyFamily,
    #[error("unknown builtin representation: {0}")]
    UnknownRep(String),
    #[error("witness support violation: {0}")]
    SupportViolation(String),
    #[error("bad input: {0}")]
    BadInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
