use thiserror::Error;

/// Errors produced by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("incompatible fugacity specs")]
    IncompatibleSpecs,
    #[error("non-unit series")]
    NonUnit,
    #[error("divergent inversion")]
    DivergentInversion,
    #[error("lattice violation: exponent {exponent} of `{variable}` is off the lattice")]
    LatticeViolation { variable: String, exponent: String },
    #[error("non-unital factor at lattice point ({0}, {1})")]
    NonUnitalFactor(u32, u32),
    #[error("PE undefined: argument has a nonzero constant term")]
    PeUndefined,
    #[error("PE divergent: the letter index has no direction leaving the box")]
    PeDivergent,
    #[error("fugacity spec is missing variable `{0}`")]
    MissingVariable(String),
    #[error("invalid fugacity spec: {0}")]
    InvalidSpec(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("pole within tolerance")]
    PoleWithinTolerance,
    #[error("non-convergent product: {0}")]
    NonConvergent(String),
    #[error("pole in partial product at (n1, n2, n) = ({0}, {1}, {2})")]
    PoleInPartialProduct(u32, u32, i64),
    #[error("superpotential is not quasi-homogeneous for the given weights")]
    NotQuasiHomogeneous,
    #[error("cohomology not determined by (g,d)")]
    CohomologyNotDetermined,
    #[error("inconsistent override")]
    InconsistentOverride,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
