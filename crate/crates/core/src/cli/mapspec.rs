use std::fmt;

use num_complex::Complex64;

use super::CliError;
use crate::extensions::MapInput;
use crate::maps::{BlaschkeProduct, Polynomial, RationalMap};

/// A map as written on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum MapSpec {
    /// `rat:num=<coeffs>;den=<coeffs>`, coefficients ascending.
    Rational(RationalMap),
    /// `bls:theta=<radians>;zeros=<complex list>`.
    Blaschke(BlaschkeProduct),
    /// `quad:c=<complex>`, the map `z² + c`.
    Quadratic(Complex64),
}

impl MapSpec {
    pub fn to_input(&self) -> MapInput {
        match self {
            MapSpec::Rational(r) => MapInput::Rational(r.clone()),
            MapSpec::Blaschke(b) => MapInput::Blaschke(b.clone()),
            MapSpec::Quadratic(c) => MapInput::Rational(quadratic(*c)),
        }
    }
}

pub(crate) fn quadratic(c: Complex64) -> RationalMap {
    RationalMap::polynomial(Polynomial::new(vec![
        c,
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
    ]))
    .expect("z² + c has degree 2")
}

fn bad(token: &str, message: impl Into<String>) -> CliError {
    CliError::Parse {
        token: token.to_string(),
        message: message.into(),
    }
}

fn parse_real(s: &str) -> Result<f64, CliError> {
    let v: f64 = s.parse().map_err(|_| bad(s, "not a number"))?;
    if !v.is_finite() {
        return Err(bad(s, "not a finite number"));
    }
    Ok(v)
}

/// `a`, `a+bi` or `a-bi`; no whitespace.
pub fn parse_complex(s: &str) -> Result<Complex64, CliError> {
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(parse_real(s)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'))
        .ok_or_else(|| bad(s, "expected a+bi or a-bi"))?;
    let re = parse_real(&body[..split]).map_err(|_| bad(s, "bad real part"))?;
    let im_text = &body[split..];
    let im = parse_real(im_text.strip_prefix('+').unwrap_or(im_text)).map_err(|_| bad(s, "bad imaginary part"))?;
    Ok(Complex64::new(re, im))
}

/// Shortest round-trip text; exponent form for very small or large values.
pub(crate) fn real_text(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-5..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        real_text(z.re)
    } else if z.im.is_sign_negative() {
        format!("{}-{}i", real_text(z.re), real_text(-z.im))
    } else {
        format!("{}+{}i", real_text(z.re), real_text(z.im))
    }
}

fn parse_list(s: &str) -> Result<Vec<Complex64>, CliError> {
    if s.is_empty() {
        return Err(bad(s, "empty list"));
    }
    s.split(',').map(parse_complex).collect()
}

fn fields<'a>(body: &'a str, keys: &[&str]) -> Result<Vec<&'a str>, CliError> {
    let parts: Vec<&str> = body.split(';').collect();
    if parts.len() != keys.len() {
        return Err(bad(body, format!("expected fields {}", keys.join(", "))));
    }
    parts
        .iter()
        .zip(keys)
        .map(|(part, key)| {
            part.strip_prefix(key)
                .and_then(|rest| rest.strip_prefix('='))
                .ok_or_else(|| bad(part, format!("expected `{key}=`")))
        })
        .collect()
}

pub fn parse_map_spec(text: &str) -> Result<MapSpec, CliError> {
    let (kind, body) = text.split_once(':').ok_or_else(|| bad(text, "expected rat:, bls: or quad:"))?;
    match kind {
        "rat" => {
            let f = fields(body, &["num", "den"])?;
            let num = Polynomial::new(parse_list(f[0])?);
            let den = Polynomial::new(parse_list(f[1])?);
            if den.is_zero() {
                return Err(bad(f[1], "denominator is zero"));
            }
            Ok(MapSpec::Rational(RationalMap::new(num, den)?))
        }
        "bls" => {
            let f = fields(body, &["theta", "zeros"])?;
            let theta = parse_real(f[0])?;
            Ok(MapSpec::Blaschke(BlaschkeProduct::new(theta, parse_list(f[1])?)?))
        }
        "quad" => {
            let f = fields(body, &["c"])?;
            Ok(MapSpec::Quadratic(parse_complex(f[0])?))
        }
        _ => Err(bad(kind, "unknown map kind")),
    }
}

fn join(coeffs: &[Complex64]) -> String {
    coeffs.iter().map(|&c| format_complex(c)).collect::<Vec<_>>().join(",")
}

impl fmt::Display for MapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapSpec::Rational(r) => write!(f, "rat:num={};den={}", join(r.num().coeffs()), join(r.den().coeffs())),
            MapSpec::Blaschke(b) => write!(f, "bls:theta={};zeros={}", real_text(b.theta()), join(b.zeros())),
            MapSpec::Quadratic(c) => write!(f, "quad:c={}", format_complex(*c)),
        }
    }
}
