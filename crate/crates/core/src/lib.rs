//! Eigenvalue localization bounds for matrix polynomials.
//!
//! Cauchy radii and Pellet gaps for `P(z) = A_n z^n + ... + A_0`, their
//! variants through the squared block companion matrix, the 2x2 embedding
//! of lacunary scalar polynomials, and a dense eigenvalue oracle that checks
//! every reported bound.

pub mod bounds;
pub mod embed;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod matpoly;
pub mod oracle;
pub mod report;
pub mod rootloc;

pub use bounds::{cauchy_bounds, pellet_gap, squared_bounds, squared_gap, CauchyBounds, GapResult, GapStatus, Variant};
pub use embed::{embed_even, embed_odd, LacunaryPolynomial};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, NormKind};
pub use matpoly::MatrixPolynomial;
pub use oracle::{eigen_oracle, EigenReport};
pub use rootloc::{PositiveRoots, SignedRadialPolynomial};
