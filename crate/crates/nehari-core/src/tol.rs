//! Numerical tolerances used across the crate.
//!
//! All comparisons are relative to a natural scale of the quantity involved
//! unless stated otherwise. Values are part of the library contract: tests
//! and certificates quote them.

/// Coefficients with modulus below `TRIM * scale` are dropped when a Laurent
/// polynomial is put into canonical form.
pub const TRIM: f64 = 1e-12;

/// Default circle grid size. Power of two; overridable per run.
pub const GRID_DEFAULT: usize = 4096;

/// Smallest grid accepted for quadrature and winding computations.
pub const GRID_MIN: usize = 64;

/// Hard cap for adaptive grid refinement (winding numbers).
pub const GRID_CAP: usize = 1 << 20;

/// Polynomial roots closer than this are treated as one root cluster.
pub const ROOT_CLUSTER: f64 = 1e-7;

/// Relative radius for clustering singular values into multiplicity groups.
pub const SV_CLUSTER_REL: f64 = 1e-7;

/// Relative cutoff for rank decisions in SVD-based null space computations.
pub const RANK_REL: f64 = 1e-8;

/// Denominator roots within this distance of the unit circle are rejected:
/// the induced Hankel/Toeplitz data is numerically meaningless.
pub const BOUNDARY_POLE: f64 = 1e-6;

/// Residual bound for Schmidt subspace verification, relative to `s^2`.
pub const SCHMIDT_RESID_REL: f64 = 1e-8;

/// Largest admissible antianalytic residual when certifying that `Q B` is
/// analytic (pole carrier construction).
pub const CARRIER_RESID: f64 = 1e-9;

/// Hankel kernel membership: `|<f, g>| <= MEMBERSHIP * ||f||_2`.
pub const MEMBERSHIP: f64 = 1e-8;

/// Pointwise constancy of superoptimal singular values, relative to `1 + t0`.
pub const CONSTANCY: f64 = 1e-6;

/// Tolerance for norm-level identities (`||Phi - Q||_inf = s_k` and friends).
pub const NORM_EQ: f64 = 1e-7;

/// Residual bound for exact Toeplitz kernel elements re-checked on the grid.
pub const KERNEL_RESID: f64 = 1e-7;

/// Unitarity defect allowed for thematic and Blaschke-Potapov factors.
pub const UNITARITY: f64 = 1e-8;

/// Round-trip error allowed for grid <-> coefficient transforms.
pub const GRID_ROUNDTRIP: f64 = 1e-10;

/// `|h|^2 = f` defect allowed for Fejer-Riesz factorizations.
pub const FEJER: f64 = 1e-8;

/// Relative floor under which a symbol counts as vanishing somewhere on the
/// circle; winding numbers and Fredholm checks refuse below it.
pub const CIRCLE_MIN_REL: f64 = 1e-8;

/// Rational simplification cancels numerator/denominator root pairs closer
/// than this.
pub const CANCEL: f64 = 1e-7;

/// Coefficients of a rational tail below `TAIL * scale` are dropped when a
/// rational symbol is truncated to a Laurent window.
pub const TAIL: f64 = 1e-13;

/// Relative rank cutoff for audit-level subspace decisions (E spaces, span
/// criteria, flip conditions). Looser than `RANK_REL` because the inputs are
/// themselves outputs of earlier numerics.
pub const AUDIT_RANK: f64 = 1e-7;

/// A symbol counts as Fredholm when the smallest grid value of `|det|`
/// exceeds this fraction of the largest.
pub const FREDHOLM: f64 = 1e-8;
