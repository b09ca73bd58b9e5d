//! Dense complex polynomials with ascending coefficients.

use crate::numeric::linalg;
use crate::C64;
use nalgebra::DMatrix;

pub fn horner(coeffs: &[C64], x: C64) -> C64 {
    coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * x + c)
}

/// Value and first derivative.
pub fn horner2(coeffs: &[C64], x: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

pub fn derivative(coeffs: &[C64]) -> Vec<C64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * k as f64)
        .collect()
}

pub fn mul(a: &[C64], b: &[C64]) -> Vec<C64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![C64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn add(a: &[C64], b: &[C64]) -> Vec<C64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| a.get(k).copied().unwrap_or_default() + b.get(k).copied().unwrap_or_default())
        .collect()
}

pub fn scale(a: &[C64], s: C64) -> Vec<C64> {
    a.iter().map(|&c| c * s).collect()
}

/// Monic polynomial with the given roots.
pub fn from_roots(roots: &[C64]) -> Vec<C64> {
    let mut p = vec![C64::new(1.0, 0.0)];
    for &r in roots {
        p = mul(&p, &[-r, C64::new(1.0, 0.0)]);
    }
    p
}

/// Drop trailing coefficients that are exactly zero, keeping at least one.
pub fn trim(mut p: Vec<C64>) -> Vec<C64> {
    while p.len() > 1 && *p.last().unwrap() == C64::new(0.0, 0.0) {
        p.pop();
    }
    p
}

/// Quotient and remainder of polynomial division.
pub fn div_rem(num: &[C64], den: &[C64]) -> (Vec<C64>, Vec<C64>) {
    let den = trim(den.to_vec());
    let dn = den.len() - 1;
    let lead = den[dn];
    if num.len() <= dn {
        return (vec![C64::new(0.0, 0.0)], num.to_vec());
    }
    let mut rem = num.to_vec();
    let mut quo = vec![C64::new(0.0, 0.0); num.len() - dn];
    for k in (0..quo.len()).rev() {
        let c = rem[k + dn] / lead;
        quo[k] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[k + j] -= c * d;
        }
    }
    rem.truncate(dn.max(1));
    (quo, rem)
}

/// Lagrange interpolation through `(xs[i], ys[i])`.
pub fn interpolate(xs: &[C64], ys: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); xs.len()];
    for i in 0..xs.len() {
        let mut basis = vec![C64::new(1.0, 0.0)];
        let mut denom = C64::new(1.0, 0.0);
        for j in 0..xs.len() {
            if j != i {
                basis = mul(&basis, &[-xs[j], C64::new(1.0, 0.0)]);
                denom *= xs[i] - xs[j];
            }
        }
        let w = ys[i] / denom;
        for (k, b) in basis.iter().enumerate() {
            out[k] += b * w;
        }
    }
    out
}

/// Roots of a polynomial with nonzero leading coefficient.
///
/// Eigenvalues of the companion matrix, then a few Newton steps each.
pub fn roots(coeffs: &[C64]) -> Vec<C64> {
    let p = trim(coeffs.to_vec());
    let n = p.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = p[n];
    let mut comp = DMatrix::<C64>::zeros(n, n);
    for i in 1..n {
        comp[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    for i in 0..n {
        comp[(i, n - 1)] = -p[i] / lead;
    }
    let mut rts = linalg::eigenvalues(&comp).unwrap_or_else(|| aberth(&p));
    let dp = derivative(&p);
    for r in rts.iter_mut() {
        polish(&p, &dp, r);
    }
    rts
}

/// Simultaneous Aberth iteration; fallback when the Schur iteration stalls.
fn aberth(p: &[C64]) -> Vec<C64> {
    let n = p.len() - 1;
    let dp = derivative(p);
    let radius = 1.0 + p[..n].iter().map(|c| (c / p[n]).norm()).fold(0.0, f64::max);
    let mut z: Vec<C64> = (0..n)
        .map(|k| C64::from_polar(0.5 * radius, 0.4 + std::f64::consts::TAU * k as f64 / n as f64))
        .collect();
    for _ in 0..1000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let f = horner(p, z[i]);
            if f.norm() == 0.0 {
                continue;
            }
            let ratio = f / horner(&dp, z[i]);
            let s: C64 = (0..n).filter(|&j| j != i).map(|j| C64::new(1.0, 0.0) / (z[i] - z[j])).sum();
            let w = ratio / (C64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm());
            }
        }
        if moved == 0.0 {
            break;
        }
    }
    z
}

fn polish(p: &[C64], dp: &[C64], r: &mut C64) {
    let mut best = horner(p, *r).norm();
    for _ in 0..12 {
        if best == 0.0 {
            return;
        }
        let d = horner(dp, *r);
        if d.norm() == 0.0 {
            return;
        }
        let cand = *r - horner(p, *r) / d;
        let val = horner(p, cand).norm();
        if val < best {
            *r = cand;
            best = val;
        } else {
            return;
        }
    }
}

/// Sort by real part, then imaginary part.
pub fn sort_lex(v: &mut [C64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn roots_of_cubic() {
        let mut r = roots(&[c(0.0), c(-1.0), c(0.0), c(1.0)]);
        sort_lex(&mut r);
        for (a, b) in r.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((a - c(b)).norm() < 1e-14);
        }
    }

    #[test]
    fn division_round_trip() {
        let a = from_roots(&[c(1.0), c(2.0), C64::new(0.5, 1.0)]);
        let b = vec![c(-3.0), c(1.0)];
        let (q, r) = div_rem(&a, &b);
        let back = add(&mul(&q, &b), &r);
        for (x, y) in back.iter().zip(&a) {
            assert!((x - y).norm() < 1e-13);
        }
        assert!((r[0] - horner(&a, c(3.0))).norm() < 1e-12);
    }

    #[test]
    fn interpolation_reproduces_points() {
        let xs = [c(0.0), c(1.0), C64::new(2.0, 1.0)];
        let ys = [c(1.0), C64::new(0.0, 3.0), c(-2.0)];
        let p = interpolate(&xs, &ys);
        for (x, y) in xs.iter().zip(&ys) {
            assert!((horner(&p, *x) - y).norm() < 1e-13);
        }
    }
}
