//! Numerical Nehari-Takagi approximation on the unit circle.
//!
//! The crate solves and certifies best approximation problems by meromorphic
//! functions with a bounded number of poles in the disc, both for scalar and
//! for matrix symbols, and audits the Fredholm index identities that connect
//! the error symbol `Phi - Q` with Hankel singular data.
//!
//! Modules follow the pipeline:
//!
//! * [`symalg`]: Laurent polynomial matrices, circle grids, rational symbols,
//!   winding numbers and Fejer-Riesz factorization.
//! * [`hankel`]: finite block Hankel and Toeplitz truncations, singular data,
//!   Schmidt subspaces and the flip operator.
//! * [`aak`]: the scalar best-meromorphic solver and its index certificate.
//! * [`blaschke`]: Blaschke-Potapov products and Hankel kernel carriers.
//! * [`superopt`]: superoptimal error analysis, thematic completions and the
//!   one-step 2x2 construction.
//! * [`index`]: exact Toeplitz kernels, cokernels, index audits and the
//!   kernel-space comparisons.

pub mod error;
pub mod tol;
pub(crate) mod par;

pub mod symalg;
pub mod hankel;
pub mod aak;
pub mod blaschke;
pub mod corpus;
pub mod report;
pub mod suite;
pub mod index;
pub mod superopt;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex<f64>;
/// Dense complex matrix.
pub type CMat = nalgebra::DMatrix<C64>;
/// Dense complex column vector.
pub type CVec = nalgebra::DVector<C64>;

pub(crate) fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
