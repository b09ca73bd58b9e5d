//! Text formats: curve specification files, complex numbers, divisors, CSV and SVG.
//!
//! A curve specification is line oriented. Blank lines and text after `#` are
//! ignored; every other line is `key = value` (`:` also accepted as separator).
//!
//! ```text
//! # y^2 = x^5 - 5x^3 + 4x
//! genus = 2
//! lambda = 0, 4, 0, -5, 0, 1
//! ```
//!
//! `lambda` lists `λ_0, …, λ_{2g+1}` in ascending powers as complex numbers
//! (`1.5`, `-2i`, `0.5-1e-3i`); `genus` is optional and, when present, must agree
//! with the length of `lambda`.

use crate::curve::{CurvePoint, Divisor, HyperellipticCurve, Sheet};
use crate::dynamics::LoopSample;
use crate::error::{Error, Result};
use crate::loops::FourierLoop;
use crate::C64;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// `a+bi` with 17 significant digits in both parts.
pub fn format_complex(z: C64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{:.16e}{}{:.16e}i", z.re, sign, z.im.abs())
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` (also `j` for the imaginary unit).
pub fn parse_complex(text: &str) -> std::result::Result<C64, String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty complex number".into());
    }
    let bad = || format!("cannot parse '{text}' as a complex number");
    let num = |s: &str| -> std::result::Result<f64, String> {
        match s {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => s.parse::<f64>().map_err(|_| bad()),
        }
    };
    if let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) {
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        return match split {
            Some(k) => {
                let re = body[..k].parse::<f64>().map_err(|_| bad())?;
                Ok(C64::new(re, num(&body[k..])?))
            }
            None => Ok(C64::new(0.0, num(body)?)),
        };
    }
    Ok(C64::new(t.parse::<f64>().map_err(|_| bad())?, 0.0))
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parsed curve specification with the hash of its source text.
#[derive(Clone, Debug)]
pub struct CurveSpec {
    pub genus: usize,
    pub lambda: Vec<C64>,
    pub sha256: String,
}

impl CurveSpec {
    pub fn parse(text: &str) -> Result<CurveSpec> {
        let mut genus: Option<(usize, usize)> = None;
        let mut lambda: Option<(usize, Vec<C64>)> = None;
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some(sep) = body.find(['=', ':']) else {
                return Err(parse_err(line, format!("expected 'key = value', got '{body}'")));
            };
            let key = body[..sep].trim().to_ascii_lowercase();
            let value = body[sep + 1..].trim();
            match key.as_str() {
                "genus" => {
                    if genus.is_some() {
                        return Err(parse_err(line, "duplicate key 'genus'"));
                    }
                    let g = value
                        .parse::<usize>()
                        .ok()
                        .filter(|&g| g >= 1)
                        .ok_or_else(|| parse_err(line, format!("genus must be a positive integer, got '{value}'")))?;
                    genus = Some((line, g));
                }
                "lambda" => {
                    if lambda.is_some() {
                        return Err(parse_err(line, "duplicate key 'lambda'"));
                    }
                    let mut v = Vec::new();
                    for (j, item) in value.split(',').enumerate() {
                        v.push(parse_complex(item).map_err(|e| parse_err(line, format!("coefficient {j}: {e}")))?);
                    }
                    lambda = Some((line, v));
                }
                other => return Err(parse_err(line, format!("unknown key '{other}'"))),
            }
        }
        let (lline, lambda) = lambda.ok_or_else(|| parse_err(0, "missing key 'lambda'"))?;
        if lambda.len() < 4 || lambda.len() % 2 != 0 {
            return Err(parse_err(lline, format!("lambda has {} entries, expected 2g+2 with g >= 1", lambda.len())));
        }
        let g = lambda.len() / 2 - 1;
        if let Some((gline, declared)) = genus {
            if declared != g {
                return Err(parse_err(gline, format!("genus {declared} does not match {} lambda entries", lambda.len())));
            }
        }
        if lambda[lambda.len() - 1] != C64::new(1.0, 0.0) {
            return Err(parse_err(lline, "leading coefficient must be 1"));
        }
        Ok(CurveSpec {
            genus: g,
            lambda,
            sha256: sha256_hex(text.as_bytes()),
        })
    }

    pub fn curve(&self) -> Result<HyperellipticCurve> {
        HyperellipticCurve::new(&self.lambda)
    }

    /// Canonical text form.
    pub fn to_text(&self) -> String {
        let l: Vec<String> = self.lambda.iter().map(|&z| format_complex(z)).collect();
        format!("genus = {}\nlambda = {}\n", self.genus, l.join(", "))
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut s = String::with_capacity(64);
    for b in digest {
        let _ = write!(s, "{b:02x}");
    }
    s
}

/// Divisor list: comma-separated points `x`, `x@+`, `x@-` or `x@y`.
/// A bare `x` lies on the plus sheet; an explicit `y` must satisfy the curve.
pub fn parse_divisor(curve: &HyperellipticCurve, text: &str) -> Result<Divisor> {
    let mut points = Vec::new();
    for item in text.split(',') {
        let item = item.trim();
        let (xs, ys) = match item.split_once('@') {
            Some((a, b)) => (a, Some(b.trim())),
            None => (item, None),
        };
        let x = parse_complex(xs).map_err(Error::InvalidDivisor)?;
        let p = match ys {
            None | Some("+") => curve.lift(x, Sheet::Plus),
            Some("-") => curve.lift(x, Sheet::Minus),
            Some(y) => {
                let p = CurvePoint::new(x, parse_complex(y).map_err(Error::InvalidDivisor)?);
                if !curve.contains(&p, 1e-8) {
                    return Err(Error::InvalidDivisor(format!("point ({x}, {}) is not on the curve", p.y)));
                }
                p
            }
        };
        points.push(p);
    }
    Divisor::new(curve, points)
}

/// Header comment lines shared by every output file.
pub fn header_lines(curve_sha: &str, seed: u64) -> Vec<String> {
    vec![
        format!("loopsoliton {VERSION}"),
        format!("curve-sha256 {curve_sha}"),
        format!("seed {seed}"),
    ]
}

pub fn comment_block(header: &[String]) -> String {
    header.iter().map(|h| format!("# {h}\n")).collect()
}

/// CSV text: `#` header comments, a column row, then the rows.
pub fn csv(header: &[String], columns: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = comment_block(header);
    out.push_str(&columns.join(","));
    out.push('\n');
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

/// Shortest round-trip real formatting.
pub fn real(x: f64) -> String {
    format!("{x:e}")
}

/// Data rows of a CSV file, skipping comments and the column row.
pub fn csv_rows(text: &str) -> Result<Vec<(usize, Vec<String>)>> {
    let mut rows = Vec::new();
    let mut seen_columns = false;
    for (k, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        if !seen_columns {
            seen_columns = true;
            continue;
        }
        rows.push((k + 1, t.split(',').map(|c| c.trim().to_string()).collect()));
    }
    Ok(rows)
}

fn field(row: &(usize, Vec<String>), k: usize) -> Result<f64> {
    let v = row.1.get(k).ok_or_else(|| parse_err(row.0, format!("missing column {k}")))?;
    v.parse::<f64>().map_err(|_| parse_err(row.0, format!("cannot parse '{v}'")))
}

pub fn fourier_csv(l: &FourierLoop, header: &[String]) -> String {
    let rows: Vec<Vec<String>> = l.iter().map(|(n, a)| vec![n.to_string(), real(a.re), real(a.im)]).collect();
    csv(header, &["n", "re_a", "im_a"], &rows)
}

pub fn parse_fourier_csv(text: &str) -> Result<FourierLoop> {
    let rows = csv_rows(text)?;
    let mut pairs = Vec::with_capacity(rows.len());
    for row in &rows {
        let n = row.1[0].parse::<i64>().map_err(|_| parse_err(row.0, format!("bad harmonic '{}'", row.1[0])))?;
        pairs.push((n, C64::new(field(row, 1)?, field(row, 2)?)));
    }
    if pairs.is_empty() {
        return Err(parse_err(0, "no coefficients"));
    }
    Ok(FourierLoop::from_pairs(&pairs))
}

pub fn trace_csv(sample: &LoopSample, header: &[String]) -> String {
    let rows: Vec<Vec<String>> = (0..sample.len())
        .map(|j| {
            vec![
                real(sample.s[j]),
                real(sample.z[j].re),
                real(sample.z[j].im),
                real(sample.q[j].re),
                real(sample.q[j].im),
                real(sample.dz[j].norm()),
            ]
        })
        .collect();
    csv(header, &["s", "re_z", "im_z", "re_q", "im_q", "abs_dz"], &rows)
}

/// Reads a trace CSV back. Only `|dZ|` is stored, so `dz` holds it on the real axis.
pub fn parse_trace_csv(text: &str) -> Result<LoopSample> {
    let mut out = LoopSample::default();
    for row in &csv_rows(text)? {
        out.s.push(field(row, 0)?);
        out.z.push(C64::new(field(row, 1)?, field(row, 2)?));
        out.q.push(C64::new(field(row, 3)?, field(row, 4)?));
        out.dz.push(C64::new(field(row, 5)?, 0.0));
    }
    Ok(out)
}

/// Polyline of the points with a viewBox fitted around them.
pub fn svg_polyline(points: &[C64], header: &[String]) -> String {
    let finite: Vec<C64> = points.iter().copied().filter(|z| z.re.is_finite() && z.im.is_finite()).collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for z in &finite {
        x0 = x0.min(z.re);
        x1 = x1.max(z.re);
        y0 = y0.min(-z.im);
        y1 = y1.max(-z.im);
    }
    if finite.is_empty() {
        (x0, x1, y0, y1) = (-1.0, 1.0, -1.0, 1.0);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let pad = 0.05 * span;
    let stroke = span / 400.0;
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    for h in header {
        let _ = writeln!(out, "<!-- {h} -->");
    }
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">",
        real(x0 - pad),
        real(y0 - pad),
        real(x1 - x0 + 2.0 * pad),
        real(y1 - y0 + 2.0 * pad)
    );
    out.push_str("<polyline fill=\"none\" stroke=\"black\" stroke-width=\"");
    out.push_str(&real(stroke));
    out.push_str("\" points=\"");
    let pts: Vec<String> = finite.iter().map(|z| format!("{},{}", real(z.re), real(-z.im))).collect();
    out.push_str(&pts.join(" "));
    out.push_str("\"/>\n</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_round_trip() {
        for z in [
            C64::new(0.1, -0.2),
            C64::new(-1e-300, 3.0),
            C64::new(1.0 / 3.0, f64::MIN_POSITIVE),
            C64::new(0.0, -0.0),
        ] {
            let back = parse_complex(&format_complex(z)).unwrap();
            assert_eq!(back.re.to_bits(), z.re.to_bits());
            assert_eq!(back.im.to_bits(), z.im.to_bits());
        }
        assert_eq!(parse_complex("-i").unwrap(), C64::new(0.0, -1.0));
        assert_eq!(parse_complex("2.5e-3-4e+2i").unwrap(), C64::new(2.5e-3, -400.0));
        assert!(parse_complex("1+").is_err());
    }

    #[test]
    fn spec_errors_carry_lines() {
        let e = CurveSpec::parse("genus = 2\n\nlambda = 0, 1, x, 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e}");
        let e = CurveSpec::parse("genus = 2\nlambda = 0, -1, 0, 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }), "{e}");
        let spec = CurveSpec::parse("# cubic\ngenus: 1\nlambda = 0, -1, 0, 1 # x^3 - x\n").unwrap();
        assert_eq!(spec.genus, 1);
        assert_eq!(CurveSpec::parse(&spec.to_text()).unwrap().lambda, spec.lambda);
    }
}
