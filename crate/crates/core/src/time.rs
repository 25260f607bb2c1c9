//! Exact rational time stamps.

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

/// Time values are exact rationals so interval shifts and breakpoints never
/// drift.
pub type Time = Ratio<i128>;

/// Largest number of significant digits accepted in a decimal literal.
const MAX_DIGITS: usize = 30;

/// Parses `123`, `12.5`, `-0.25`, `1e-3`, `2.5E2` or `p/q` into an exact
/// rational. Returns `None` for anything else (including values that do not
/// fit).
pub fn parse_time(text: &str) -> Option<Time> {
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p: i128 = p.trim().parse().ok()?;
        let q: i128 = q.trim().parse().ok()?;
        if q == 0 {
            return None;
        }
        return Some(Ratio::new(p, q));
    }
    let (neg, body) = match text.as_bytes().first()? {
        b'-' => (true, &text[1..]),
        b'+' => (false, &text[1..]),
        _ => (false, text),
    };
    let (mantissa, exp) = match body.find(['e', 'E']) {
        Some(k) => (&body[..k], body[k + 1..].parse::<i32>().ok()?),
        None => (body, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.bytes().chain(frac.bytes()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let digits = digits.trim_start_matches('0');
    if digits.len() > MAX_DIGITS {
        return None;
    }
    let num: i128 = if digits.is_empty() { 0 } else { digits.parse().ok()? };
    let scale = exp - frac.len() as i32;
    if scale.unsigned_abs() > 36 {
        return if num == 0 { Some(Time::zero()) } else { None };
    }
    let pow = 10i128.checked_pow(scale.unsigned_abs())?;
    let value = if scale >= 0 {
        Ratio::from_integer(num.checked_mul(pow)?)
    } else {
        Ratio::new(num, pow)
    };
    Some(if neg { -value } else { value })
}

/// Decimal rendering when the value has a short terminating expansion,
/// `p/q` otherwise. The output always parses back to the same value.
pub fn format_time(t: &Time) -> String {
    if t.is_integer() {
        return t.numer().to_string();
    }
    let (mut q, mut twos, mut fives) = (*t.denom(), 0u32, 0u32);
    while q % 2 == 0 {
        q /= 2;
        twos += 1;
    }
    while q % 5 == 0 {
        q /= 5;
        fives += 1;
    }
    let places = twos.max(fives);
    if q == 1 && places <= 18 {
        let scale = 10i128.pow(places);
        if let Some(n) = t.numer().checked_mul(scale / t.denom()) {
            let neg = n < 0;
            let digits = format!("{:0>width$}", n.unsigned_abs(), width = places as usize + 1);
            let (int, frac) = digits.split_at(digits.len() - places as usize);
            return format!("{}{int}.{frac}", if neg { "-" } else { "" });
        }
    }
    format!("{}/{}", t.numer(), t.denom())
}

pub fn time_to_f64(t: &Time) -> f64 {
    t.to_f64().unwrap_or(f64::NAN)
}

/// Rational with the shortest decimal expansion of `x`, or a close
/// approximation when that does not fit.
pub fn time_from_f64(x: f64) -> Option<Time> {
    if !x.is_finite() {
        return None;
    }
    parse_time(&format!("{x}")).or_else(|| Ratio::approximate_float(x))
}
