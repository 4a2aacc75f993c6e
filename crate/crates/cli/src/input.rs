//! Parsing of symbols, complex numbers and vectors given on the command line.

use std::fs;

use serde_json::Value;
use toeplitz_dyn::{CoeffVector, LaurentSymbol, TridiagonalSymbol, C64};

use crate::error::CliError;

/// `re`, `re:im` or `re,im`.
pub fn parse_complex(text: &str) -> Result<C64, CliError> {
    let parts: Vec<&str> = text.split([',', ':']).map(str::trim).collect();
    let (re, im) = match parts.as_slice() {
        [re] => (parse_real(re)?, 0.0),
        [re, im] => (parse_real(re)?, parse_real(im)?),
        _ => {
            return Err(CliError::usage(format!(
                "expected `re`, `re,im` or `re:im`, got `{text}`"
            )))
        }
    };
    Ok(C64::new(re, im))
}

fn parse_real(text: &str) -> Result<f64, CliError> {
    match text.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(CliError::usage(format!("`{text}` is not a finite number"))),
    }
}

/// `a,b,c` where each part is `re` or `re:im`.
pub fn parse_tri(text: &str) -> Result<TridiagonalSymbol, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [a, b, c] = parts.as_slice() else {
        return Err(CliError::usage(format!(
            "--tri expects three comma-separated coefficients, got `{text}`"
        )));
    };
    let part = |p: &str| {
        if p.split(':').count() > 2 {
            return Err(CliError::usage(format!(
                "coefficient `{p}` must be `re` or `re:im`"
            )));
        }
        parse_complex(p)
    };
    Ok(TridiagonalSymbol::new(part(a)?, part(b)?, part(c)?))
}

/// Inline JSON when the text starts with `{` or `[`, otherwise a file path.
fn json_argument(text: &str, what: &str) -> Result<Value, CliError> {
    let trimmed = text.trim_start();
    let body = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        text.to_owned()
    } else {
        fs::read_to_string(text)
            .map_err(|e| CliError::usage(format!("cannot read {what} file `{text}`: {e}")))?
    };
    serde_json::from_str(&body).map_err(|e| CliError::usage(format!("invalid {what} JSON: {e}")))
}

fn json_complex(value: &Value) -> Option<C64> {
    match value {
        Value::Number(n) => n.as_f64().map(|re| C64::new(re, 0.0)),
        Value::Array(pair) if pair.len() == 2 => {
            Some(C64::new(pair[0].as_f64()?, pair[1].as_f64()?))
        }
        _ => None,
    }
}

/// Accepts the canonical `{"coeffs": [...]}` form, the tridiagonal
/// `{"a": .., "b": .., "c": ..}` form, and the index map `{"-1": [re, im]}`.
pub fn parse_coeffs(text: &str) -> Result<LaurentSymbol, CliError> {
    let value = json_argument(text, "symbol")?;
    let Value::Object(map) = &value else {
        return Err(CliError::usage("symbol JSON must be an object"));
    };
    if map.contains_key("coeffs") {
        return serde_json::from_value(value)
            .map_err(|e| CliError::usage(format!("invalid canonical symbol: {e}")));
    }
    if !map.is_empty() && map.keys().all(|k| matches!(k.as_str(), "a" | "b" | "c")) {
        let coeff = |key: &str| match map.get(key) {
            None => Ok(C64::new(0.0, 0.0)),
            Some(v) => json_complex(v).ok_or_else(|| {
                CliError::usage(format!("coefficient `{key}` must be a number or [re, im]"))
            }),
        };
        return Ok(TridiagonalSymbol::new(coeff("a")?, coeff("b")?, coeff("c")?).to_laurent());
    }
    let mut terms = Vec::with_capacity(map.len());
    for (key, v) in map {
        let n: i32 = key
            .parse()
            .map_err(|_| CliError::usage(format!("symbol index `{key}` is not an integer")))?;
        let a = json_complex(v).ok_or_else(|| {
            CliError::usage(format!("coefficient {key} must be a number or [re, im]"))
        })?;
        terms.push((n, a));
    }
    Ok(LaurentSymbol::new(terms))
}

pub fn parse_symbol(tri: Option<&str>, coeffs: Option<&str>) -> Result<LaurentSymbol, CliError> {
    match (tri, coeffs) {
        (Some(t), None) => Ok(parse_tri(t)?.to_laurent()),
        (None, Some(c)) => parse_coeffs(c),
        _ => Err(CliError::usage(
            "exactly one of --tri and --coeffs is required",
        )),
    }
}

/// `eK`, or a JSON array (inline or in a file) of numbers or `[re, im]`
/// pairs, zero-padded to `dim`.
pub fn parse_vector(text: &str, dim: usize) -> Result<CoeffVector, CliError> {
    if let Some(index) = text.strip_prefix('e') {
        if let Ok(k) = index.parse::<usize>() {
            if k >= dim {
                return Err(CliError::usage(format!(
                    "basis index {k} is outside dimension {dim}"
                )));
            }
            return Ok(CoeffVector::basis(dim, k));
        }
    }
    let Value::Array(items) = json_argument(text, "vector")? else {
        return Err(CliError::usage("vector JSON must be an array"));
    };
    if items.len() > dim {
        return Err(CliError::usage(format!(
            "vector has {} entries, more than dimension {dim}",
            items.len()
        )));
    }
    let mut entries = items
        .iter()
        .map(|v| {
            json_complex(v)
                .ok_or_else(|| CliError::usage("vector entries must be numbers or [re, im]"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    entries.resize(dim, C64::new(0.0, 0.0));
    Ok(CoeffVector::from_vec(entries))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("0:2").unwrap(), C64::new(0.0, 2.0));
        assert_eq!(parse_complex("-1.5,0.25").unwrap(), C64::new(-1.5, 0.25));
        assert_eq!(parse_complex("3").unwrap(), C64::new(3.0, 0.0));
        assert!(parse_complex("1,2,3").is_err());
        assert!(parse_complex("nan").is_err());
    }

    #[test]
    fn tri_forms() {
        let t = parse_tri("2,0,0.5").unwrap();
        assert_eq!(t, TridiagonalSymbol::real(2.0, 0.0, 0.5));
        let t = parse_tri("1:-1, 0, 0.5:0.5").unwrap();
        assert_eq!(t.a, C64::new(1.0, -1.0));
        assert_eq!(t.c, C64::new(0.5, 0.5));
        assert!(parse_tri("1,2").is_err());
        assert!(parse_tri("1,x,2").is_err());
    }

    #[test]
    fn coeff_forms_agree() {
        let expected = TridiagonalSymbol::real(2.0, 0.0, 0.5).to_laurent();
        assert_eq!(parse_coeffs(r#"{"-1":[2,0],"1":0.5}"#).unwrap(), expected);
        assert_eq!(
            parse_coeffs(r#"{"a":[2,0],"b":[0,0],"c":[0.5,0]}"#).unwrap(),
            expected
        );
        assert_eq!(
            parse_coeffs(r#"{"coeffs":[{"n":-1,"re":2,"im":0},{"n":1,"re":0.5,"im":0}]}"#).unwrap(),
            expected
        );
        assert!(parse_coeffs(r#"{"x":[1,0]}"#).is_err());
        assert!(parse_coeffs(r#"{"1":[1,0,0]}"#).is_err());
        assert!(parse_coeffs("[1,2]").is_err());
        assert!(parse_coeffs("/nonexistent/symbol.json").is_err());
    }

    #[test]
    fn vector_forms() {
        assert_eq!(parse_vector("e3", 8).unwrap(), CoeffVector::basis(8, 3));
        assert!(parse_vector("e8", 8).is_err());
        let v = parse_vector("[1, [0, 2]]", 4).unwrap();
        assert_eq!(
            v.as_slice(),
            &[
                C64::new(1.0, 0.0),
                C64::new(0.0, 2.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0)
            ]
        );
        assert!(parse_vector("[1, 2, 3]", 2).is_err());
    }
}
