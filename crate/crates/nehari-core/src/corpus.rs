//! Built-in reference instances.
//!
//! Coefficients are stored as exact decimal strings of the closest doubles
//! to the intended real values, so the binary data is reproducible from the
//! source text on any platform and toolchain.

use crate::symalg::{LaurentMatrix, LaurentPoly, MatrixSymbol, Poly, RationalMatrix, RationalScalar};
use crate::{c64, C64};

/// Closest double to 1/sqrt(2).
const INV_SQRT2: &str = "0.70710678118654757273731092936941422522068023681640625";
/// Closest double to 1/(3 sqrt(2)).
const INV_3SQRT2: &str = "0.235702260395515839075386566037195734679698944091796875";
/// Closest double to 1/3.
const THIRD: &str = "0.333333333333333314829616256247390992939472198486328125";

fn parse(s: &str) -> f64 {
    s.parse().expect("corpus constant")
}

fn real(s: &str) -> C64 {
    c64(parse(s), 0.0)
}

/// 2x2 symbol with antianalytic degree 5 whose level-1 data exercises every
/// audit: three equal superoptimal values at t0 = 1, a second level at 1/3,
/// and index 6 against 2k + mu = 5.
pub fn example_2x2() -> LaurentMatrix {
    let r = real(INV_SQRT2);
    let t = real(INV_3SQRT2);
    let entries = [
        LaurentPoly::new(
            -5,
            Poly::from_coeffs(vec![r, C64::default(), C64::default(), C64::default(), t]),
        ),
        LaurentPoly::new(-2, Poly::from_coeffs(vec![-t])),
        LaurentPoly::new(-4, Poly::from_coeffs(vec![r])),
        LaurentPoly::new(-1, Poly::from_coeffs(vec![t])),
    ];
    LaurentMatrix::from_entries(2, 2, &entries).expect("2x2 shape")
}

/// Superoptimal approximant of [`example_2x2`] at level 1.
pub fn example_candidate() -> MatrixSymbol {
    let t = real(INV_3SQRT2);
    let entries = vec![
        RationalScalar::from_laurent(LaurentPoly::new(-1, Poly::from_coeffs(vec![t]))),
        RationalScalar::zero(),
        RationalScalar::zero(),
        RationalScalar::zero(),
    ];
    MatrixSymbol::from(RationalMatrix::from_entries(2, 2, entries).expect("2x2 shape"))
}

/// Factorization of the example error `Phi - Q` into a unitary-valued left
/// factor and a diagonal right factor, as displayed.
pub fn example_factors() -> (LaurentMatrix, LaurentMatrix) {
    let r = real(INV_SQRT2);
    let third = real(THIRD);
    let left = [
        LaurentPoly::new(-1, Poly::from_coeffs(vec![r])),
        LaurentPoly::new(0, Poly::from_coeffs(vec![-r])),
        LaurentPoly::new(0, Poly::from_coeffs(vec![r])),
        LaurentPoly::new(1, Poly::from_coeffs(vec![r])),
    ];
    let right = [
        LaurentPoly::new(-4, Poly::from_coeffs(vec![c64(1.0, 0.0)])),
        LaurentPoly::zero(),
        LaurentPoly::zero(),
        LaurentPoly::new(-2, Poly::from_coeffs(vec![third])),
    ];
    (
        LaurentMatrix::from_entries(2, 2, &left).expect("2x2 shape"),
        LaurentMatrix::from_entries(2, 2, &right).expect("2x2 shape"),
    )
}
