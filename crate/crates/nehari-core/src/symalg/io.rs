//! Symbol file format: JSON with explicit Fourier coefficients.
//!
//! ```json
//! {
//!   "rows": 2,
//!   "cols": 2,
//!   "coefficients": [
//!     {"power": -1, "entries": [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]}
//!   ]
//! }
//! ```
//!
//! `entries` is row-major, each entry an `[re, im]` pair. Powers may repeat on
//! input (they accumulate); output is canonical with powers ascending.

use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::error::{Error, Result};
use crate::symalg::laurent::LaurentMatrix;
use crate::{c64, CMat};

#[derive(Serialize, Deserialize)]
struct SymbolFile {
    rows: usize,
    cols: usize,
    coefficients: Vec<CoeffBlock>,
}

#[derive(Serialize, Deserialize)]
struct CoeffBlock {
    power: i64,
    entries: Vec<Vec<[f64; 2]>>,
}

/// Parse a symbol from JSON text.
pub fn parse_symbol(text: &str) -> Result<LaurentMatrix> {
    let file: SymbolFile =
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("symbol JSON: {e}")))?;
    if file.rows == 0 || file.cols == 0 {
        return Err(Error::invalid("symbol: rows and cols must be positive"));
    }
    let mut coeffs = Vec::with_capacity(file.coefficients.len());
    for block in &file.coefficients {
        if block.entries.len() != file.rows {
            return Err(Error::invalid(format!(
                "symbol: power {} has {} rows, expected {}",
                block.power,
                block.entries.len(),
                file.rows
            )));
        }
        let mut m = CMat::zeros(file.rows, file.cols);
        for (r, row) in block.entries.iter().enumerate() {
            if row.len() != file.cols {
                return Err(Error::invalid(format!(
                    "symbol: power {} row {} has {} cols, expected {}",
                    block.power,
                    r,
                    row.len(),
                    file.cols
                )));
            }
            for (c, &[re, im]) in row.iter().enumerate() {
                if !re.is_finite() || !im.is_finite() {
                    return Err(Error::invalid(format!(
                        "symbol: non-finite entry at power {} position ({r}, {c})",
                        block.power
                    )));
                }
                m[(r, c)] = c64(re, im);
            }
        }
        coeffs.push((block.power, m));
    }
    LaurentMatrix::from_coeffs(file.rows, file.cols, coeffs)
}

/// Read a symbol from a JSON file.
pub fn read_symbol(path: &Path) -> Result<LaurentMatrix> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?;
    parse_symbol(&text)
}

fn symbol_file(sym: &LaurentMatrix) -> SymbolFile {
    let coefficients = sym
        .coeffs()
        .map(|(p, m)| CoeffBlock {
            power: p,
            entries: (0..sym.rows())
                .map(|r| {
                    (0..sym.cols())
                        .map(|c| [m[(r, c)].re, m[(r, c)].im])
                        .collect()
                })
                .collect(),
        })
        .collect();
    SymbolFile {
        rows: sym.rows(),
        cols: sym.cols(),
        coefficients,
    }
}

/// Serialize a symbol to canonical JSON: powers ascending, deterministic
/// float formatting, trailing newline.
pub fn write_symbol(sym: &LaurentMatrix) -> String {
    to_canonical_json(&symbol_file(sym))
}

/// The symbol's file representation as a JSON value, for embedding inside
/// larger reports.
pub fn symbol_value(sym: &LaurentMatrix) -> serde_json::Value {
    serde_json::to_value(symbol_file(sym)).expect("in-memory JSON serialization cannot fail")
}

/// Write a symbol to a file.
pub fn save_symbol(path: &Path, sym: &LaurentMatrix) -> Result<()> {
    std::fs::write(path, write_symbol(sym))
        .map_err(|e| Error::invalid(format!("{}: {e}", path.display())))
}

/// JSON serialization with a fixed float format so equal values always
/// produce identical bytes.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter);
    value
        .serialize(&mut ser)
        .expect("in-memory JSON serialization cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

/// Compact JSON formatter printing every float as `{:.12e}`.
struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.12e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.12e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let sym = LaurentMatrix::from_coeffs(
            2,
            2,
            vec![
                (-1, CMat::from_row_slice(2, 2, &[c64(0.5, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.5, -0.25)])),
                (2, CMat::from_row_slice(2, 2, &[c64(0.0, 1.0), c64(0.0, 0.0), c64(3.0, 0.0), c64(0.0, 0.0)])),
            ],
        )
        .unwrap();
        let text = write_symbol(&sym);
        let back = parse_symbol(&text).unwrap();
        assert_eq!(write_symbol(&back), text);
        assert_eq!(back.coeff_or_zero(-1), sym.coeff_or_zero(-1));
        assert_eq!(back.coeff_or_zero(2), sym.coeff_or_zero(2));
    }

    #[test]
    fn repeated_powers_accumulate() {
        let one = CMat::from_row_slice(1, 1, &[c64(1.0, 0.0)]);
        let text = r#"{"rows":1,"cols":1,"coefficients":[
            {"power":0,"entries":[[[1.0,0.0]]]},
            {"power":0,"entries":[[[2.0,0.0]]]}
        ]}"#;
        let sym = parse_symbol(text).unwrap();
        assert_eq!(sym.coeff_or_zero(0), one.scale(3.0));
    }

    #[test]
    fn rejects_nan_and_bad_shape() {
        assert!(parse_symbol(
            r#"{"rows":1,"cols":1,"coefficients":[{"power":0,"entries":[[[null,0.0]]]}]}"#
        )
        .is_err());
        assert!(parse_symbol(
            r#"{"rows":2,"cols":1,"coefficients":[{"power":0,"entries":[[[1.0,0.0]]]}]}"#
        )
        .is_err());
    }

    #[test]
    fn float_format_is_stable() {
        let sym = LaurentMatrix::scalar([(0, c64(1.0 / 3.0, 0.0))]);
        let text = write_symbol(&sym);
        assert!(text.contains("3.333333333333e-1"), "{text}");
    }
}
