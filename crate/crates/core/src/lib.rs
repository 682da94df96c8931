//! Exact computations around vector partition functions and the graded Betti
//! numbers of powers and good filtrations of monomial ideals.
//!
//! The crate is organised bottom-up:
//!
//! - [`exactlinalg`]: integer matrices, Hermite normal form, kernels, lattices.
//! - [`polyhedra`]: H-represented polyhedra, Fourier–Motzkin elimination and
//!   exact lattice-point enumeration.
//! - [`genfun`]: rational generating functions of cones and truncated series
//!   (Brion identity checks).
//! - [`partition`]: vector partition functions of two-row weight matrices,
//!   their chambers and certified quasi-polynomials.
//! - [`monomial`]: monomial ideal arithmetic, closures and filtrations.
//! - [`betti`]: multigraded and graded Betti numbers of monomial ideals.
//! - [`asymptotics`]: region descriptions (boundary lines, period, region
//!   polynomials) fitted to Betti families and certified on data.
//!
//! All arithmetic is exact. No floating point is used anywhere.

pub mod asymptotics;
pub mod betti;
pub mod error;
pub mod exactlinalg;
pub mod genfun;
pub mod monomial;
pub mod partition;
pub mod poly;
pub mod polyhedra;
pub mod serde_util;

pub use error::{Error, Result};
pub use exactlinalg::{HnfResult, IntegerMatrix, Lattice};
pub use monomial::{Filtration, FiltrationKind, MonomialIdeal};
pub use partition::{Chamber, QuasiPolynomial, WeightSystem};
pub use poly::BivariatePoly;
pub use polyhedra::{Polyhedron, ReducedPolytope};
