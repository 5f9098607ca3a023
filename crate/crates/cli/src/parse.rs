//! Parsers for the structured flag values.

use weierdim_core::word::Tail;
use weierdim_core::{DigitWord, PhiSpec};

use crate::error::{usage, CliError};

/// `cos` (the classical `cos 2πx`), `zero`, or a comma-separated list of
/// `cos:K:A`, `sin:K:A` and `const:C` terms.
pub fn phi(s: &str) -> Result<PhiSpec, CliError> {
    match s {
        "cos" => return Ok(PhiSpec::weierstrass()),
        "zero" => return Ok(PhiSpec::zero()),
        _ => {}
    }
    let mut out = PhiSpec::zero();
    for term in s.split(',') {
        let parts: Vec<&str> = term.trim().split(':').collect();
        let num = |p: &str| p.parse::<f64>().map_err(|_| usage(format!("bad number '{p}' in phi '{s}'")));
        let freq = |p: &str| {
            p.parse::<u32>()
                .ok()
                .filter(|&k| k >= 1)
                .ok_or_else(|| usage(format!("bad frequency '{p}' in phi '{s}'")))
        };
        out = match parts.as_slice() {
            ["cos", k, a] => out.with_cosine(freq(k)?, num(a)?),
            ["sin", k, a] => out.with_sine(freq(k)?, num(a)?),
            ["const", c] => out.shifted(num(c)?),
            _ => return Err(usage(format!("bad phi term '{term}'"))),
        };
    }
    Ok(out)
}

/// `zero` or `random:SEED`.
pub fn tail(s: &str) -> Result<Tail, CliError> {
    if s == "zero" {
        return Ok(Tail::AllZero);
    }
    s.strip_prefix("random:")
        .and_then(|seed| seed.parse().ok())
        .map(Tail::Random)
        .ok_or_else(|| usage(format!("tail must be 'zero' or 'random:SEED', got '{s}'")))
}

/// Digits as a plain string (`0110`) or comma separated (`10,3,7`).
pub fn word(s: &str, tail: Tail, b: u32) -> Result<DigitWord, CliError> {
    if s.contains(',') {
        let digits = s
            .split(',')
            .map(|d| d.trim().parse::<u32>().map_err(|_| usage(format!("bad digit '{d}'"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(DigitWord::new(digits, tail, b)?)
    } else {
        Ok(DigitWord::parse(s, tail, b)?)
    }
}

/// `A..B` (inclusive) or a single base.
pub fn b_range(s: &str) -> Result<(u32, u32), CliError> {
    let bad = || usage(format!("b range must look like '2..12', got '{s}'"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?),
        None => {
            let v = s.parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo < 2 || hi < lo {
        return Err(bad());
    }
    Ok((lo, hi))
}

/// Comma-separated reals.
pub fn reals(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|_| usage(format!("bad number '{v}'"))))
        .collect()
}

pub fn word_string(w: &DigitWord) -> String {
    let d = w.prefix();
    if d.iter().all(|&x| x < 10) {
        d.iter().map(|x| char::from_digit(*x, 10).unwrap_or('?')).collect()
    } else {
        d.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
    }
}
