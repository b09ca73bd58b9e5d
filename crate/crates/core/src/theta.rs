//! Riemann theta function with characteristics and its first two derivatives.
//!
//! `θ[a;b](z;τ) = Σ_{n∈ℤ^g} exp 2πi{½(n+a)ᵀτ(n+a) + (n+a)ᵀ(z+b)}`.
//!
//! Values are returned as `exp(log_scale) · value` where `log_scale` is the
//! Gaussian peak `π Im(z+b)ᵀ (Im τ)^{-1} Im(z+b)`, so large `Im z` never
//! overflows.

use crate::error::{Error, Result};
use crate::numeric::linalg;
use crate::{CMatrix, C64};
use nalgebra::DMatrix;
use std::f64::consts::PI;

/// Default cap on the genus handled without an explicit opt-in.
pub const MAX_DEFAULT_GENUS: usize = 4;

#[derive(Clone, Debug, PartialEq)]
pub struct ThetaChar {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl ThetaChar {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Self {
        assert_eq!(a.len(), b.len());
        ThetaChar { a, b }
    }

    pub fn zero(g: usize) -> Self {
        ThetaChar {
            a: vec![0.0; g],
            b: vec![0.0; g],
        }
    }

    /// Top `δ'' = (½, …, ½)`, bottom `δ' = (g/2, (g-1)/2, …, ½)`.
    pub fn sigma_char(g: usize) -> Self {
        ThetaChar {
            a: vec![0.5; g],
            b: (0..g).map(|i| (g - i) as f64 / 2.0).collect(),
        }
    }

    /// Parity `(-1)^{4 a·b}` of a half-integer characteristic.
    pub fn parity(&self) -> i32 {
        let s: f64 = self.a.iter().zip(&self.b).map(|(x, y)| 4.0 * x * y).sum();
        if (s.round() as i64).rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }
}

/// Theta value with gradient and Hessian, all scaled by `exp(-log_scale)`.
#[derive(Clone, Debug)]
pub struct ThetaJet {
    pub log_scale: f64,
    pub value: C64,
    pub grad: Vec<C64>,
    pub hess: CMatrix,
    pub terms: usize,
    pub radius: f64,
}

impl ThetaJet {
    pub fn full_value(&self) -> C64 {
        self.value * self.log_scale.exp()
    }
}

/// Precomputed data for a fixed period matrix.
#[derive(Clone, Debug)]
pub struct Theta {
    g: usize,
    tau: CMatrix,
    y: DMatrix<f64>,
    y_inv: DMatrix<f64>,
    chol: DMatrix<f64>,
    lambda_min: f64,
}

impl Theta {
    pub fn new(tau: &CMatrix) -> Result<Self> {
        Self::with_genus_cap(tau, MAX_DEFAULT_GENUS)
    }

    /// Allows genera above [`MAX_DEFAULT_GENUS`].
    pub fn with_genus_cap(tau: &CMatrix, cap: usize) -> Result<Self> {
        let g = tau.nrows();
        if g > cap {
            return Err(Error::InvalidInput(format!(
                "genus {g} exceeds the theta genus cap {cap}"
            )));
        }
        let tau = linalg::symmetrize(tau);
        let y = linalg::imag_part(&tau);
        let ev = linalg::symmetric_eigenvalues(&y);
        if ev[0] <= 0.0 {
            return Err(Error::NonPositiveImTau(ev[0]));
        }
        let chol = y
            .clone()
            .cholesky()
            .ok_or(Error::NonPositiveImTau(ev[0]))?
            .l()
            .transpose();
        let y_inv = y.clone().try_inverse().ok_or(Error::NonPositiveImTau(ev[0]))?;
        Ok(Theta {
            g,
            tau,
            y,
            y_inv,
            chol,
            lambda_min: ev[0],
        })
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn tau(&self) -> &CMatrix {
        &self.tau
    }

    /// Smallest ellipsoid radius whose tail bound for derivative `order` is below `tol`.
    fn radius(&self, center_norm: f64, order: usize, tol: f64) -> f64 {
        let lm = self.lambda_min;
        let pre = (1.0 + (2.0 / lm).sqrt()).powi(self.g as i32);
        let bound = |r: f64| {
            pre * (-PI * r * r / 2.0).exp()
                * ((2.0 * PI) * (center_norm + r / lm.sqrt())).powi(order as i32)
        };
        let mut r = 1.0f64.max(((order as f64) / PI).sqrt());
        while bound(r) > tol && r < 1e3 {
            r += 0.05;
        }
        r
    }

    pub fn value(&self, z: &[C64], chr: &ThetaChar, tol: f64) -> Result<C64> {
        Ok(self.jet(z, chr, 0, tol)?.full_value())
    }

    /// Theta and derivatives up to `order` (0, 1 or 2) with tail below `tol`.
    pub fn jet(&self, z: &[C64], chr: &ThetaChar, order: usize, tol: f64) -> Result<ThetaJet> {
        self.jet_scaled(z, chr, order, tol, 1.0)
    }

    /// As [`Theta::jet`] with the summation radius multiplied by `radius_factor`.
    pub fn jet_scaled(
        &self,
        z: &[C64],
        chr: &ThetaChar,
        order: usize,
        tol: f64,
        radius_factor: f64,
    ) -> Result<ThetaJet> {
        let g = self.g;
        if z.len() != g || chr.a.len() != g {
            return Err(Error::InvalidInput("dimension mismatch in theta".into()));
        }
        let w: Vec<C64> = z.iter().zip(&chr.b).map(|(zi, bi)| zi + bi).collect();
        let wi = nalgebra::DVector::from_iterator(g, w.iter().map(|x| x.im));
        let c = &self.y_inv * &wi;
        let log_scale = PI * wi.dot(&c);
        let shift: Vec<f64> = (0..g).map(|i| chr.a[i] + c[i]).collect();
        let radius = self.radius(c.norm() + chr.a.iter().map(|x| x * x).sum::<f64>().sqrt(), order, tol)
            * radius_factor;
        let mut value = C64::default();
        let mut grad = vec![C64::default(); g];
        let mut hess = CMatrix::zeros(g, g);
        let mut terms = 0usize;
        let mut n = vec![0i64; g];
        let mut v = vec![0.0; g];
        let two_pi_i = C64::new(0.0, 2.0 * PI);
        let x_re = linalg::real_part(&self.tau);
        let mut visit = |n: &[i64]| {
            for i in 0..g {
                v[i] = n[i] as f64 + chr.a[i];
            }
            let mut q = 0.0;
            let mut ph = 0.0;
            for i in 0..g {
                let xi = v[i] + c[i];
                for j in 0..g {
                    q += xi * self.y[(i, j)] * (v[j] + c[j]);
                    ph += v[i] * x_re[(i, j)] * v[j];
                }
                ph += 2.0 * v[i] * w[i].re;
            }
            let t = C64::from_polar((-PI * q).exp(), PI * ph);
            terms += 1;
            value += t;
            if order >= 1 {
                for i in 0..g {
                    let di = two_pi_i * v[i];
                    grad[i] += t * di;
                    if order >= 2 {
                        for j in 0..=i {
                            hess[(i, j)] += t * di * two_pi_i * v[j];
                        }
                    }
                }
            }
        };
        enumerate(&self.chol, &shift, radius * radius, g, 0.0, &mut n, &mut visit);
        if order >= 2 {
            for i in 0..g {
                for j in 0..i {
                    hess[(j, i)] = hess[(i, j)];
                }
            }
        }
        Ok(ThetaJet {
            log_scale,
            value,
            grad,
            hess,
            terms,
            radius,
        })
    }
}

/// Visits integer `n` with `‖R(n + shift)‖² ≤ r2`, `R` upper triangular.
fn enumerate<F: FnMut(&[i64])>(
    r: &DMatrix<f64>,
    shift: &[f64],
    r2: f64,
    level: usize,
    partial: f64,
    n: &mut Vec<i64>,
    visit: &mut F,
) {
    if level == 0 {
        visit(n);
        return;
    }
    let i = level - 1;
    let g = shift.len();
    let mut off = 0.0;
    for j in i + 1..g {
        off += r[(i, j)] * (n[j] as f64 + shift[j]);
    }
    let rii = r[(i, i)];
    let rem = r2 - partial;
    if rem < 0.0 {
        return;
    }
    let hw = rem.sqrt() / rii;
    let center = -off / rii - shift[i];
    let lo = (center - hw).ceil() as i64;
    let hi = (center + hw).floor() as i64;
    for k in lo..=hi {
        n[i] = k;
        let comp = rii * (k as f64 + shift[i]) + off;
        enumerate(r, shift, r2, i, partial + comp * comp, n, visit);
    }
}

/// One-shot theta evaluation.
pub fn theta(z: &[C64], tau: &CMatrix, chr: &ThetaChar, tol: f64) -> Result<C64> {
    Theta::new(tau)?.value(z, chr, tol)
}
