//! Shared JSON encodings: matrices, scalars and simplex keys.
//!
//! Scalars are written as JSON integers when they are integral and fit in
//! an `i64`, and as `"a/b"` strings otherwise. Matrices are lists of rows.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exactalg::{Matrix, RingSpec, Scalar};

pub fn scalar_to_value(x: &Scalar) -> Value {
    if x.is_integer() {
        if let Some(v) = x.to_integer().to_i64() {
            return Value::from(v);
        }
    }
    Value::from(x.to_string())
}

pub fn scalar_from_value(ring: RingSpec, v: &Value) -> Result<Scalar> {
    let raw = match v {
        Value::Number(n) => match n.as_i64() {
            Some(i) => Scalar::from_integer(BigInt::from(i)),
            None => return Err(Error::Parse(format!("{n} is not an integer; write fractions as \"a/b\""))),
        },
        Value::String(s) => s.trim().parse::<Scalar>().map_err(|e| Error::Parse(format!("bad scalar {s:?}: {e}")))?,
        other => return Err(Error::Parse(format!("expected a number, got {other}"))),
    };
    ring.element(raw)
}

pub fn matrix_to_value(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(scalar_to_value).collect())).collect())
}

/// Parses a list of rows. `expected` fixes the shape, which also makes the
/// empty list meaningful for matrices with zero rows.
pub fn matrix_from_value(ring: RingSpec, v: &Value, expected: Option<(usize, usize)>) -> Result<Matrix> {
    let rows = v.as_array().ok_or_else(|| Error::Parse("matrix must be a list of rows".into()))?;
    let mut entries = Vec::new();
    let mut cols = None;
    for row in rows {
        let row = row.as_array().ok_or_else(|| Error::Parse("matrix row must be a list".into()))?;
        if *cols.get_or_insert(row.len()) != row.len() {
            return Err(Error::Parse("matrix rows have different lengths".into()));
        }
        for x in row {
            entries.push(scalar_from_value(ring, x)?);
        }
    }
    let shape = (rows.len(), cols.unwrap_or(0));
    let shape = match expected {
        Some((r, c)) if rows.is_empty() && r == 0 => (r, c),
        Some(e) if e != shape => {
            return Err(Error::DimensionMismatch(format!("expected a {}x{} matrix, got {}x{}", e.0, e.1, shape.0, shape.1)))
        }
        _ => shape,
    };
    Matrix::from_entries(ring, shape.0, shape.1, entries)
}

/// Sorted vertex list joined by dashes, e.g. `"0-2-5"`.
pub fn simplex_key(s: &[usize]) -> String {
    s.iter().map(usize::to_string).collect::<Vec<_>>().join("-")
}

pub fn parse_simplex_key(key: &str) -> Result<Vec<usize>> {
    let mut s: Vec<usize> = key
        .split('-')
        .map(|p| p.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad simplex key {key:?}"))))
        .collect::<Result<_>>()?;
    s.sort_unstable();
    Ok(s)
}

pub(crate) fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalars_round_trip() {
        let q = RingSpec::Rationals;
        let half = scalar_from_value(q, &Value::from("1/2")).unwrap();
        assert_eq!(scalar_to_value(&half), Value::from("1/2"));
        assert_eq!(scalar_to_value(&q.from_i64(-3)), Value::from(-3));
        assert!(scalar_from_value(RingSpec::Integers, &Value::from("1/2")).is_err());
        assert_eq!(scalar_from_value(RingSpec::prime_field(5).unwrap(), &Value::from(7)).unwrap(), q.from_i64(2));
    }

    #[test]
    fn matrices_round_trip() {
        let z = RingSpec::Integers;
        let m = Matrix::from_rows(z, &[vec![1, -2], vec![0, 3]]);
        assert_eq!(matrix_from_value(z, &matrix_to_value(&m), Some((2, 2))).unwrap(), m);
        let empty = matrix_from_value(z, &serde_json::json!([]), Some((0, 3))).unwrap();
        assert_eq!((empty.rows(), empty.cols()), (0, 3));
        assert!(matrix_from_value(z, &serde_json::json!([[1], [2, 3]]), None).is_err());
    }

    #[test]
    fn simplex_keys() {
        assert_eq!(simplex_key(&[0, 2, 5]), "0-2-5");
        assert_eq!(parse_simplex_key("5-0").unwrap(), vec![0, 5]);
        assert!(parse_simplex_key("a-1").is_err());
    }
}
