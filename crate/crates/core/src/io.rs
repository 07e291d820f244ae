//! JSON wire formats. Matrices travel as
//! `{"rows": m, "cols": n, "entries": [["num/den", ...], ...]}` (a bare
//! array of rows is also accepted on input) with entries as rational
//! strings; integer JSON numbers are accepted, and decimal literals are
//! converted exactly with the conversion reported to the caller.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::padic::PadicIwasawa;
use crate::real::RealIwasawa;
use crate::scalar::{ensure_prime, parse_rational_or_decimal, rational_to_string, Rational};

pub struct ParsedMatrix {
    pub matrix: RatMatrix,
    /// True when at least one entry was a decimal literal converted to an
    /// exact power-of-ten fraction.
    pub had_decimal: bool,
}

fn entry_from_value(v: &Value) -> Result<(Rational, bool)> {
    match v {
        Value::String(s) => parse_rational_or_decimal(s),
        Value::Number(n) => parse_rational_or_decimal(&n.to_string()),
        other => Err(Error::Parse(format!(
            "matrix entry must be a string or number, got {other}"
        ))),
    }
}

pub fn matrix_from_value(v: &Value) -> Result<ParsedMatrix> {
    let (entries, expect): (&Vec<Value>, Option<(usize, usize)>) = match v {
        Value::Array(rows) => (rows, None),
        Value::Object(obj) => {
            let entries = obj
                .get("entries")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("matrix object needs an \"entries\" array".into()))?;
            let rows = obj.get("rows").and_then(Value::as_u64);
            let cols = obj.get("cols").and_then(Value::as_u64);
            let expect = match (rows, cols) {
                (Some(r), Some(c)) => Some((r as usize, c as usize)),
                _ => None,
            };
            (entries, expect)
        }
        other => {
            return Err(Error::Parse(format!(
                "matrix must be an object or an array of rows, got {other}"
            )))
        }
    };
    let mut had_decimal = false;
    let mut parsed_rows = Vec::with_capacity(entries.len());
    for row in entries {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Parse("matrix rows must be arrays".into()))?;
        let mut out = Vec::with_capacity(row.len());
        for cell in row {
            let (value, dec) = entry_from_value(cell)?;
            had_decimal |= dec;
            out.push(value);
        }
        parsed_rows.push(out);
    }
    let matrix = RatMatrix::from_rows(parsed_rows)?;
    if let Some((r, c)) = expect {
        if matrix.rows() != r || matrix.cols() != c {
            return Err(Error::DimensionMismatch(format!(
                "declared {r}x{c} but entries are {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
    }
    Ok(ParsedMatrix { matrix, had_decimal })
}

pub fn matrix_to_value(m: &RatMatrix) -> Value {
    let entries: Vec<Vec<String>> = (0..m.rows())
        .map(|i| m.row(i).iter().map(rational_to_string).collect())
        .collect();
    json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "entries": entries,
    })
}

pub fn padic_to_value(dec: &PadicIwasawa) -> Value {
    json!({
        "prime": dec.prime,
        "N": matrix_to_value(&dec.n),
        "A": matrix_to_value(&dec.a),
        "K": matrix_to_value(&dec.k),
        "dilaton_valuations": serde_json::to_value(&dec.dilaton_valuations)
            .expect("valuations serialize"),
    })
}

/// Rebuilds a decomposition from its JSON form. The decomposed matrix is
/// recovered as the product N*A*K and the dilaton data is recomputed from
/// A, so a hand-edited file is re-validated rather than trusted.
pub fn padic_from_value(v: &Value) -> Result<PadicIwasawa> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("decomposition must be a JSON object".into()))?;
    let prime = obj
        .get("prime")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("decomposition needs a \"prime\" field".into()))?;
    ensure_prime(prime)?;
    let field = |name: &str| -> Result<RatMatrix> {
        let value = obj
            .get(name)
            .ok_or_else(|| Error::Parse(format!("decomposition needs an {name:?} matrix")))?;
        Ok(matrix_from_value(value)?.matrix)
    };
    let n = field("N")?;
    let a = field("A")?;
    let k = field("K")?;
    let size = n.ensure_square()?;
    if a.rows() != size || !a.is_square() || k.rows() != size || !k.is_square() {
        return Err(Error::DimensionMismatch(
            "N, A, K must be square matrices of one size".into(),
        ));
    }
    let matrix = n.mul(&a)?.mul(&k)?;
    Ok(PadicIwasawa::assemble(prime, matrix, n, a, k))
}

pub fn real_to_value(dec: &RealIwasawa) -> Value {
    let y_squared: Vec<String> = dec.dilatons_squared.iter().map(rational_to_string).collect();
    json!({
        "N": matrix_to_value(&dec.n),
        "dilatons_squared": y_squared,
        "A_diag": dec.a_diag,
        "K": dec.k,
        "residuals": {
            "orthogonality": dec.orthogonality_residual,
            "reconstruction": dec.reconstruction_residual,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{decompose_padic, verify_membership};
    use crate::scalar::{rat, rat_int};

    #[test]
    fn matrix_round_trip() {
        let m = RatMatrix::from_str_rows(&[&["1", "-2/3"], &["0", "5"]]).unwrap();
        let v = matrix_to_value(&m);
        let back = matrix_from_value(&v).unwrap();
        assert_eq!(back.matrix, m);
        assert!(!back.had_decimal);
    }

    #[test]
    fn bare_array_and_numbers_accepted() {
        let v: Value = serde_json::from_str(r#"[[1, "1/2"], [0, 1]]"#).unwrap();
        let parsed = matrix_from_value(&v).unwrap();
        assert_eq!(*parsed.matrix.at(0, 1), rat(1, 2));
        assert!(!parsed.had_decimal);
    }

    #[test]
    fn decimal_entries_flagged_and_exact() {
        let v: Value = serde_json::from_str(r#"[["0.5", 1], [0, 2]]"#).unwrap();
        let parsed = matrix_from_value(&v).unwrap();
        assert!(parsed.had_decimal);
        assert_eq!(*parsed.matrix.at(0, 0), rat(1, 2));
        // decimal JSON numbers keep their literal text under
        // arbitrary-precision parsing, so 0.1 converts to exactly 1/10
        let v: Value = serde_json::from_str("[[0.1, 1], [0, 2]]").unwrap();
        let parsed = matrix_from_value(&v).unwrap();
        assert!(parsed.had_decimal);
        assert_eq!(*parsed.matrix.at(0, 0), rat(1, 10));
    }

    #[test]
    fn declared_shape_must_match() {
        let v: Value =
            serde_json::from_str(r#"{"rows": 3, "cols": 2, "entries": [["1","0"],["0","1"]]}"#)
                .unwrap();
        assert!(matrix_from_value(&v).is_err());
    }

    #[test]
    fn padic_round_trip_reverifies() {
        let m = RatMatrix::from_str_rows(&[&["1", "0"], &["1/5", "1"]]).unwrap();
        let dec = decompose_padic(&m, 5).unwrap();
        let v = padic_to_value(&dec);
        let back = padic_from_value(&v).unwrap();
        assert_eq!(back, dec);
        assert!(verify_membership(&back).pass);
    }

    #[test]
    fn padic_rejects_bad_prime() {
        let m = RatMatrix::identity(2);
        let dec = decompose_padic(&m, 5).unwrap();
        let mut v = padic_to_value(&dec);
        v["prime"] = json!(6);
        assert_eq!(padic_from_value(&v), Err(Error::NonPrime(6)));
    }

    #[test]
    fn valuation_serialization_shape() {
        let m = RatMatrix::from_str_rows(&[&["1", "0"], &["1/5", "1"]]).unwrap();
        let dec = decompose_padic(&m, 5).unwrap();
        let v = padic_to_value(&dec);
        assert_eq!(v["dilaton_valuations"], json!([1]));
        assert_eq!(v["prime"], json!(5));
        assert_eq!(v["A"]["entries"][0][0], json!("5"));
        let _ = rat_int(0);
    }
}
