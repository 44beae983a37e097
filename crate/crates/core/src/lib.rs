//! Minimal Lagrangian surfaces in C² from rational Weierstrass data.
//!
//! Data `(h dz, g)` on a punctured Riemann sphere is parsed from text
//! ([`parser`]), checked for regularity, vanishing periods and completeness
//! ([`weierstrass`], [`ends`]), and analyzed through the degree, branching
//! and exceptional values of the Gauss map and its total curvature
//! ([`gauss_map`]). [`surface`] and [`mesh`] evaluate and export the
//! immersion; [`report`] ties the pipeline together.

pub mod algebra;
pub mod ends;
pub mod error;
pub mod exec;
pub mod fixtures;
pub mod flat_metric;
pub mod gauss_map;
pub mod mesh;
pub mod parser;
pub mod quadrature;
pub mod report;
pub mod surface;
pub mod weierstrass;

pub use algebra::{Complex, ComplexRational, Divisor, Polynomial, SpherePoint};
pub use error::{Error, Result};
pub use exec::Execution;
pub use fixtures::InputSpec;
pub use weierstrass::WeierstrassData;
