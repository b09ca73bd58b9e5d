//! Real complete elliptic integrals and Jacobi elliptic functions, AGM based.
//!
//! Parameter convention: `m = k^2`.

use std::f64::consts::PI;

pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        if (an - bn).abs() <= 1e-16 * an.abs() {
            return an;
        }
        a = an;
        b = bn;
    }
    a
}

/// Complete elliptic integral of the first kind.
pub fn ellip_k(m: f64) -> f64 {
    PI / (2.0 * agm(1.0, (1.0 - m).sqrt()))
}

/// Complete elliptic integral of the second kind.
pub fn ellip_e(m: f64) -> f64 {
    let mut a = 1.0;
    let mut b = (1.0 - m).sqrt();
    let mut c = m.sqrt();
    let mut sum = 0.5 * m;
    let mut pow = 0.5;
    for _ in 0..64 {
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        c = c * c / (4.0 * an);
        pow *= 2.0;
        sum += pow * c * c;
        a = an;
        b = bn;
        if pow * c * c < 1e-18 * sum {
            break;
        }
    }
    PI / (2.0 * a) * (1.0 - sum)
}

/// `(sn, cn, dn)` of `u` with parameter `0 <= m < 1`.
pub fn jacobi(u: f64, m: f64) -> (f64, f64, f64) {
    if m == 0.0 {
        return (u.sin(), u.cos(), 1.0);
    }
    let mut a = vec![1.0];
    let mut c = vec![m.sqrt()];
    let mut b = (1.0 - m).sqrt();
    while c.last().unwrap().abs() > 1e-17 * a.last().unwrap() && a.len() < 40 {
        let an = *a.last().unwrap();
        let a_next = 0.5 * (an + b);
        let cn = *c.last().unwrap();
        let c_next = cn * cn / (4.0 * a_next);
        b = (an * b).sqrt();
        a.push(a_next);
        c.push(c_next);
    }
    let n = a.len() - 1;
    let mut phi = 2f64.powi(n as i32) * a[n] * u;
    for k in (1..=n).rev() {
        phi = 0.5 * (phi + (c[k] / a[k] * phi.sin()).asin());
    }
    let (s, cphi) = phi.sin_cos();
    let dn = (1.0 - m * s * s).sqrt();
    (s, cphi, dn)
}
