//! Reader for the plain-text polynomial format:
//!
//! ```text
//! degree 2
//! 1 0
//! 0 0
//! 1 0
//! ```
//!
//! The first line gives the degree `d`, followed by `d + 1` lines holding the
//! real and imaginary parts of the coefficients in ascending degree order.
//! Values are exact decimals (`-1.25`, `3e-4`) or fractions (`7/3`). Blank
//! lines and lines starting with `#` are ignored.

use std::str::FromStr;

use rug::{Integer, Rational};

use super::ComplexRational;
use crate::error::{Error, Result};

/// Parses an exact decimal or fraction.
pub fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty number".into());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = Integer::from_str(p.trim()).map_err(|_| format!("bad numerator in {s:?}"))?;
        let q = Integer::from_str(q.trim()).map_err(|_| format!("bad denominator in {s:?}"))?;
        if q == 0 {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(Rational::from((p, q)));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let e = s[i + 1..]
                .parse::<i32>()
                .map_err(|_| format!("bad exponent in {s:?}"))?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(format!("not a number: {s:?}"));
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return Err(format!("not a number: {s:?}"));
    }
    let all: String = format!("{int_part}{frac_part}");
    let n = Integer::from_str(if all.is_empty() { "0" } else { &all })
        .map_err(|_| format!("not a number: {s:?}"))?;
    let mut value = Rational::from(n);
    let scale = exponent - frac_part.len() as i32;
    let power = Integer::from(Integer::u_pow_u(10, scale.unsigned_abs()));
    if scale >= 0 {
        value *= power;
    } else {
        value /= power;
    }
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Parses a polynomial file. Errors carry the 1-based line number.
pub fn parse_polynomial(text: &str) -> Result<Vec<ComplexRational>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let err = |line: usize, message: String| Error::Parse { line, message };

    let (line, header) = lines
        .next()
        .ok_or_else(|| err(1, "missing `degree d` header".into()))?;
    let mut words = header.split_whitespace();
    if words.next() != Some("degree") {
        return Err(err(line, format!("expected `degree d`, found {header:?}")));
    }
    let d: usize = words
        .next()
        .and_then(|w| w.parse().ok())
        .ok_or_else(|| err(line, "degree must be a nonnegative integer".into()))?;
    if words.next().is_some() {
        return Err(err(line, "trailing text after degree".into()));
    }

    let mut coeffs = Vec::with_capacity(d + 1);
    for k in 0..=d {
        let (line, text) = lines.next().ok_or_else(|| {
            err(
                text.lines().count() + 1,
                format!("expected {} coefficient lines, found {k}", d + 1),
            )
        })?;
        let parts: Vec<&str> = text.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(err(line, format!("expected `re im`, found {text:?}")));
        }
        let re = parse_rational(parts[0]).map_err(|m| err(line, m))?;
        let im = parse_rational(parts[1]).map_err(|m| err(line, m))?;
        coeffs.push((re, im));
    }
    if let Some((line, _)) = lines.next() {
        return Err(err(
            line,
            "unexpected text after the last coefficient".into(),
        ));
    }
    if coeffs[d].0 == 0 && coeffs[d].1 == 0 {
        return Err(err(
            line_of_last(text),
            "leading coefficient is zero".into(),
        ));
    }
    Ok(coeffs)
}

fn line_of_last(text: &str) -> usize {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let l = l.trim();
            !l.is_empty() && !l.starts_with('#')
        })
        .last()
        .map_or(1, |(i, _)| i + 1)
}
