//! Floating complex polynomial and rational-function algebra.
//!
//! Structural predicates (coprimality, root multiplicity, vanishing residues)
//! are decided with relative tolerances; see [`DEFAULT_CLUSTER_TOL`] and
//! [`RESIDUE_TOL`].

mod poly;
mod rational;
mod roots;
mod sphere;

use thiserror::Error;

pub use num_complex::Complex64 as Complex;
pub use poly::Polynomial;
pub use rational::ComplexRational;
pub use roots::Root;
pub use sphere::{Divisor, SpherePoint};

/// Default relative tolerance for root clustering and order detection.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-9;
/// Residues below `RESIDUE_TOL * max |numerator coefficient|` count as zero.
pub const RESIDUE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum AlgebraError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("the zero polynomial has no roots")]
    ZeroPolynomial,
    #[error("operation undefined for the zero rational function")]
    ZeroFunction,
    #[error("root finder did not converge after {iterations} iterations (max relative residual {max_residual:e})")]
    NoConvergence {
        iterations: usize,
        max_residual: f64,
    },
    #[error("nonzero residue {value} at {point}")]
    NonzeroResidue { point: SpherePoint, value: Complex },
    #[error("singular Möbius matrix")]
    SingularMatrix,
}

/// Formats a complex constant in the expression grammar, e.g. `(1.5-0.25i)`.
pub fn fmt_complex(c: Complex) -> String {
    format!(
        "({}{}{}i)",
        c.re,
        if c.im.is_sign_negative() { "-" } else { "+" },
        c.im.abs()
    )
}

/// Short human form: `2`, `-i`, `1+2i`.
pub fn fmt_complex_short(c: Complex) -> String {
    match (c.re == 0.0, c.im == 0.0) {
        (_, true) => format!("{}", c.re),
        (true, false) => format!("{}i", c.im),
        _ => format!(
            "{}{}{}i",
            c.re,
            if c.im < 0.0 { "-" } else { "+" },
            c.im.abs()
        ),
    }
}
