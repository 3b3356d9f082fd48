//! Symbol algebra: polynomials, Laurent series, rational symbols, grids.
//!
//! Everything downstream (Hankel operators, kernel computations, the audits)
//! manipulates symbols through the types in this module. Two representations
//! coexist: exact coefficient arithmetic (`Poly`, `LaurentPoly`,
//! `LaurentMatrix`, `RationalScalar`, `RationalMatrix`) and sampled values on
//! dyadic circle grids (`GridSymbol`), converted by FFT. Exact arithmetic
//! carries the constructions; grids carry sup norms, winding numbers and
//! residual checks.

pub mod fejer;
pub mod grid;
pub mod io;
pub mod laurent;
pub mod poly;
pub mod rational;
pub mod winding;

pub use fejer::{abs_squared, fejer_riesz};
pub use grid::{grid_point, round_trip_check, GridSymbol};
pub use laurent::LaurentMatrix;
pub use poly::{cluster_points, refine_root, LaurentPoly, Poly};
pub use rational::{MatrixSymbol, RationalMatrix, RationalScalar};
pub use winding::{winding_from_samples, winding_number_adaptive, winding_number_grid};
