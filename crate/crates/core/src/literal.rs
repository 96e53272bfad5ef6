//! Text forms used on the command line and in JSON: complex literals such as
//! `1.5-2i`, `i`, `-0.25`, boundary points (`inf` or a real), foliation pairs
//! `a,b`, and comma-separated coefficient lists.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::halfplane::Boundary;

/// Parses `[real][(+|-)[imag]i]`. At least one part must be present.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("malformed complex literal {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return parse_real(&s).map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // Split at the last sign that is not the leading one and not part of an exponent.
    let bytes = body.as_bytes();
    let mut split = None;
    for k in (1..bytes.len()).rev() {
        if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
            split = Some(k);
            break;
        }
    }
    let (re_part, im_part) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let re = if re_part.is_empty() { 0.0 } else { parse_real(re_part).map_err(|_| bad())? };
    let im = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => parse_real(other).map_err(|_| bad())?,
    };
    Ok(Complex64::new(re, im))
}

fn parse_real(s: &str) -> std::result::Result<f64, ()> {
    let v: f64 = s.parse().map_err(|_| ())?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(())
    }
}

/// `inf` (or `∞`) for the point at infinity, otherwise a real number.
pub fn parse_boundary(text: &str) -> Result<Boundary> {
    let s = text.trim();
    match s {
        "inf" | "Inf" | "infinity" | "∞" => Ok(Boundary::Infinity),
        _ => parse_real(s)
            .map(Boundary::Real)
            .map_err(|_| Error::Parse(format!("malformed boundary point {text:?}"))),
    }
}

/// `a,b` as two reals.
pub fn parse_pair(text: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => {
            let a = parse_real(a).map_err(|_| Error::Parse(format!("malformed pair {text:?}")))?;
            let b = parse_real(b).map_err(|_| Error::Parse(format!("malformed pair {text:?}")))?;
            Ok((a, b))
        }
        _ => Err(Error::Parse(format!("expected `a,b`, got {text:?}"))),
    }
}

/// Comma-separated complex literals.
pub fn parse_complex_list(text: &str) -> Result<Vec<Complex64>> {
    text.split(',').map(parse_complex).collect()
}

/// Formats as `x+yi` so that [`parse_complex`] reads it back.
pub fn format_complex(z: Complex64) -> String {
    if z.im < 0.0 || (z.im == 0.0 && z.im.is_sign_negative()) {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn literal_forms() {
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("2i").unwrap(), c(0.0, 2.0));
        assert_eq!(parse_complex("1+i").unwrap(), c(1.0, 1.0));
        assert_eq!(parse_complex("1-2.5i").unwrap(), c(1.0, -2.5));
        assert_eq!(parse_complex("-0.5+3i").unwrap(), c(-0.5, 3.0));
        assert_eq!(parse_complex("3").unwrap(), c(3.0, 0.0));
        assert_eq!(parse_complex("1e-3+2e+1i").unwrap(), c(1e-3, 20.0));
        assert_eq!(parse_complex(" 1 + 2i ").unwrap(), c(1.0, 2.0));
    }

    #[test]
    fn malformed_literals() {
        for bad in ["", "x", "1+2j", "1+2ii", "++i", "nan", "inf+i", "1,2"] {
            assert!(parse_complex(bad).is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn boundary_and_pair() {
        assert_eq!(parse_boundary("inf").unwrap(), Boundary::Infinity);
        assert_eq!(parse_boundary("-1.5").unwrap(), Boundary::Real(-1.5));
        assert!(parse_boundary("i").is_err());
        assert_eq!(parse_pair("1, -2").unwrap(), (1.0, -2.0));
        assert!(parse_pair("1").is_err());
        assert!(parse_pair("1,2,3").is_err());
    }

    #[test]
    fn coefficient_list() {
        let v = parse_complex_list("1,0.5+0.2i,-i").unwrap();
        assert_eq!(v, vec![c(1.0, 0.0), c(0.5, 0.2), c(0.0, -1.0)]);
    }

    proptest! {
        #[test]
        fn format_then_parse_round_trips(re in -1e6f64..1e6, im in -1e6f64..1e6) {
            let z = c(re, im);
            prop_assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
        }
    }
}
