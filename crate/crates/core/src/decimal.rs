//! Decimal rendering of floats with explicit rounding direction.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;

/// Enough fractional digits to print any finite `f64` exactly.
const EXACT_DIGITS: usize = 1100;

/// Sign, integer digits and fractional digits of the exact expansion of `|x|`.
fn exact_parts(x: f64) -> (bool, String, String) {
    let s = format!("{:.*}", EXACT_DIGITS, x.abs());
    let (ip, fp) = s.split_once('.').unwrap_or((&s, ""));
    (x.is_sign_negative() && x != 0.0, ip.to_string(), fp.to_string())
}

/// Adds one unit in the last place to a string of decimal digits.
fn increment(digits: &str) -> String {
    let mut bytes: Vec<u8> = digits.bytes().collect();
    let mut i = bytes.len();
    loop {
        if i == 0 {
            bytes.insert(0, b'1');
            break;
        }
        i -= 1;
        if bytes[i] == b'9' {
            bytes[i] = b'0';
        } else {
            bytes[i] += 1;
            break;
        }
    }
    String::from_utf8(bytes).expect("ascii digits")
}

fn assemble(negative: bool, digits: &str, frac_len: usize) -> String {
    let split = digits.len() - frac_len;
    let (ip, fp) = digits.split_at(split);
    let ip = ip.trim_start_matches('0');
    let ip = if ip.is_empty() { "0" } else { ip };
    let is_zero = ip == "0" && fp.bytes().all(|b| b == b'0');
    let sign = if negative && !is_zero { "-" } else { "" };
    if frac_len == 0 {
        format!("{sign}{ip}")
    } else {
        format!("{sign}{ip}.{fp}")
    }
}

fn directed(x: f64, digits: usize, toward_larger: bool) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let (negative, ip, fp) = exact_parts(x);
    let kept = &fp[..digits.min(fp.len())];
    let inexact = fp[kept.len()..].bytes().any(|b| b != b'0');
    let mut body = format!("{ip}{kept}");
    // Truncation moves toward zero; bump the magnitude when that is the wrong way.
    if inexact && (toward_larger != negative) {
        body = increment(&body);
    }
    assemble(negative, &body, digits)
}

/// Largest decimal with `digits` fractional digits that is `<= x`.
pub fn floor_str(x: f64, digits: usize) -> String {
    directed(x, digits, false)
}

/// Smallest decimal with `digits` fractional digits that is `>= x`.
pub fn ceil_str(x: f64, digits: usize) -> String {
    directed(x, digits, true)
}

/// Exact decimal expansion of `x` with trailing zeros removed.
pub fn exact_str(x: f64) -> String {
    if !x.is_finite() {
        return directed(x, 0, false);
    }
    let (negative, ip, fp) = exact_parts(x);
    let fp = fp.trim_end_matches('0');
    let sign = if negative { "-" } else { "" };
    if fp.is_empty() {
        format!("{sign}{ip}")
    } else {
        format!("{sign}{ip}.{fp}")
    }
}

/// Normalised plain decimal: sign, integer digits without leading zeros,
/// fractional digits without trailing zeros.
fn normalise(s: &str) -> Option<(bool, String, String)> {
    let s = s.trim();
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
    if ip.is_empty() && fp.is_empty() {
        return None;
    }
    if !ip.bytes().all(|b| b.is_ascii_digit()) || !fp.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let ip = ip.trim_start_matches('0').to_string();
    let fp = fp.trim_end_matches('0').to_string();
    let negative = negative && !(ip.is_empty() && fp.is_empty());
    Some((negative, ip, fp))
}

fn cmp_magnitude(a: &(bool, String, String), b: &(bool, String, String)) -> Ordering {
    a.1.len().cmp(&b.1.len()).then_with(|| a.1.cmp(&b.1)).then_with(|| a.2.cmp(&b.2))
}

/// Compare two plain decimal strings numerically.
fn cmp_decimal(a: &(bool, String, String), b: &(bool, String, String)) -> Ordering {
    match (a.0, b.0) {
        (false, true) => Ordering::Greater,
        (true, false) => Ordering::Less,
        (false, false) => cmp_magnitude(a, b),
        (true, true) => cmp_magnitude(b, a),
    }
}

fn parse_directed(s: &str, lower: bool) -> Option<f64> {
    let t = s.trim();
    match t {
        "inf" | "+inf" => return Some(f64::INFINITY),
        "-inf" => return Some(f64::NEG_INFINITY),
        _ => {}
    }
    let p: f64 = t.parse().ok()?;
    if p.is_nan() {
        return None;
    }
    let Some(target) = normalise(t) else {
        // Exponent notation: step outward unconditionally.
        return Some(if lower { p.next_down() } else { p.next_up() });
    };
    let exact = normalise(&exact_str(p)).expect("exact expansion is plain");
    Some(match (cmp_decimal(&exact, &target), lower) {
        (Ordering::Greater, true) => p.next_down(),
        (Ordering::Less, false) => p.next_up(),
        _ => p,
    })
}

/// Largest `f64` not exceeding the decimal `s`.
pub fn parse_lower(s: &str) -> Option<f64> {
    parse_directed(s, true)
}

/// Smallest `f64` not below the decimal `s`.
pub fn parse_upper(s: &str) -> Option<f64> {
    parse_directed(s, false)
}

/// An enclosure stored as outward-rounded decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecimalEnclosure {
    pub lo: String,
    pub hi: String,
}

impl DecimalEnclosure {
    pub fn from_interval(iv: Interval, digits: usize) -> Self {
        DecimalEnclosure { lo: floor_str(iv.lo(), digits), hi: ceil_str(iv.hi(), digits) }
    }

    /// Bit-exact form: every `f64` bound printed in full.
    pub fn exact(iv: Interval) -> Self {
        DecimalEnclosure { lo: exact_str(iv.lo()), hi: exact_str(iv.hi()) }
    }

    pub fn to_interval(&self) -> Result<Interval> {
        Interval::from_decimal_bounds(&self.lo, &self.hi).ok_or_else(|| Error::Parse(format!("bad enclosure {self}")))
    }
}

impl fmt::Display for DecimalEnclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl FromStr for DecimalEnclosure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected [lo, hi], got {s:?}")))?;
        let (lo, hi) = inner.split_once(',').ok_or_else(|| Error::Parse(format!("expected [lo, hi], got {s:?}")))?;
        let e = DecimalEnclosure { lo: lo.trim().to_string(), hi: hi.trim().to_string() };
        e.to_interval()?;
        Ok(e)
    }
}
