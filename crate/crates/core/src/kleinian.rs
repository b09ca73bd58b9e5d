//! Kleinian sigma, zeta and wp functions and the al functions.
//!
//! `σ(u) = exp(-½ uᵀ η'ω'^{-1} u) θ[δ''; δ'](½ ω'^{-1} u; τ)` with `γ = 1`.

use crate::curve::{CurvePoint, Divisor, HyperellipticCurve};
use crate::error::{Error, Result};
use crate::numeric::{linalg, sqrt_p};
use crate::periods::{self, PeriodData};
use crate::theta::{Theta, ThetaChar};
use crate::{CMatrix, C64};

/// Default truncation tolerance for the theta sums behind sigma.
pub const THETA_TOL: f64 = 1e-15;
/// Normalized theta modulus below which a point counts as on the theta divisor.
pub const DIVISOR_THRESHOLD: f64 = 1e-12;

/// A point of `ℂ^g`, read modulo the period lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobianPoint {
    pub u: Vec<C64>,
}

impl JacobianPoint {
    pub fn new(u: Vec<C64>) -> Self {
        JacobianPoint { u }
    }

    pub fn zero(g: usize) -> Self {
        JacobianPoint { u: vec![C64::default(); g] }
    }

    pub fn add(&self, v: &[C64]) -> Self {
        JacobianPoint {
            u: self.u.iter().zip(v).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &JacobianPoint) -> Vec<C64> {
        self.u.iter().zip(&other.u).map(|(a, b)| a - b).collect()
    }

    pub fn scaled(&self, s: f64) -> Self {
        JacobianPoint {
            u: self.u.iter().map(|a| a * s).collect(),
        }
    }

    /// Representative in the fundamental cell of the lattice.
    pub fn reduced(&self, periods: &PeriodData) -> Self {
        JacobianPoint { u: periods.reduce(&self.u) }
    }
}

/// The half period `ω_r` of a branch point with its lattice bookkeeping.
#[derive(Clone, Debug)]
pub struct HalfPeriod {
    pub r: usize,
    pub omega: Vec<C64>,
    /// `ω_r = ω' eps1 + ω'' eps2`, integer vectors.
    pub eps1: Vec<f64>,
    pub eps2: Vec<f64>,
    /// `η' eps1 + η'' eps2`.
    pub eta: Vec<C64>,
    /// Distance of `2 ω_r` from the lattice.
    pub lattice_residual: f64,
}

/// Which derivative defines `γ_r = sqrt(-1/P'(b_r))` in the al function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GammaConvention {
    /// `P = f`, the curve polynomial.
    Curve,
    /// `P = F`, the divisor polynomial.
    Divisor,
}

/// Index map between `F(x)` coefficients and `wp_{g,i}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WpIndexConvention {
    /// `F(x) = x^g − Σ_i ℘_{g,g+1−i} x^{g−i}`, so `℘_{gg} = Σ x_i`.
    Reversed,
    /// `F(x) = x^g − Σ_i ℘_{g,i} x^{g−i}` read literally.
    Literal,
}

/// Log sigma with its first two log-derivatives at one point.
#[derive(Clone, Debug)]
pub struct SigmaJet {
    pub log_sigma: C64,
    pub zeta: Vec<C64>,
    pub wp: CMatrix,
    /// `|θ|` divided by its Gaussian envelope.
    pub theta_modulus: f64,
}

#[derive(Clone, Debug)]
pub struct SigmaContext {
    curve: HyperellipticCurve,
    periods: PeriodData,
    theta: Theta,
    chr: ThetaChar,
    h: CMatrix,
    a: CMatrix,
    tol: f64,
    half_periods: Vec<HalfPeriod>,
}

impl SigmaContext {
    pub fn new(curve: &HyperellipticCurve, periods: &PeriodData) -> Result<Self> {
        Self::with_tolerance(curve, periods, THETA_TOL)
    }

    pub fn from_curve(curve: &HyperellipticCurve) -> Result<Self> {
        let p = periods::compute_periods(curve)?;
        Self::new(curve, &p)
    }

    pub fn with_tolerance(curve: &HyperellipticCurve, periods: &PeriodData, tol: f64) -> Result<Self> {
        let g = curve.genus();
        let inv = linalg::inverse(&periods.omega1)?;
        let h = linalg::symmetrize(&(&periods.eta1 * &inv));
        let a = &inv * C64::new(0.5, 0.0);
        let theta = Theta::new(&periods.tau)?;
        let mut half_periods = Vec::with_capacity(2 * g + 1);
        for r in 1..=2 * g + 1 {
            let b = curve.branch_point(r)?;
            let (w, _) = periods::abel_integral(curve, &CurvePoint::new(b, C64::default()))?;
            half_periods.push(half_period_data(periods, r, w));
        }
        Ok(SigmaContext {
            curve: curve.clone(),
            periods: periods.clone(),
            theta,
            chr: ThetaChar::sigma_char(g),
            h,
            a,
            tol,
            half_periods,
        })
    }

    pub fn curve(&self) -> &HyperellipticCurve {
        &self.curve
    }

    pub fn periods(&self) -> &PeriodData {
        &self.periods
    }

    pub fn genus(&self) -> usize {
        self.curve.genus()
    }

    /// `η' ω'^{-1}` (symmetrized).
    pub fn eta_omega_inv(&self) -> &CMatrix {
        &self.h
    }

    pub fn characteristic(&self) -> &ThetaChar {
        &self.chr
    }

    pub fn theta(&self) -> &Theta {
        &self.theta
    }

    pub fn half_period(&self, r: usize) -> Result<&HalfPeriod> {
        self.half_periods
            .get(r.wrapping_sub(1))
            .ok_or_else(|| Error::InvalidInput(format!("branch index {r} out of range")))
    }

    fn theta_arg(&self, u: &[C64]) -> Vec<C64> {
        linalg::mat_vec(&self.a, u)
    }

    /// Log sigma, zeta and wp from one theta evaluation.
    pub fn jet(&self, u: &[C64]) -> Result<SigmaJet> {
        let g = self.genus();
        let z = self.theta_arg(u);
        let t = self.theta.jet(&z, &self.chr, 2, self.tol)?;
        let hu = linalg::mat_vec(&self.h, u);
        let quad = linalg::dot(u, &hu);
        let modulus = t.value.norm();
        let log_sigma = -quad * 0.5 + t.log_scale + t.value.ln();
        if modulus < DIVISOR_THRESHOLD {
            return Ok(SigmaJet {
                log_sigma,
                zeta: vec![C64::new(f64::NAN, f64::NAN); g],
                wp: CMatrix::from_element(g, g, C64::new(f64::NAN, f64::NAN)),
                theta_modulus: modulus,
            });
        }
        let lg: Vec<C64> = t.grad.iter().map(|d| d / t.value).collect();
        let zeta_z = linalg::mat_t_vec(&self.a, &lg);
        let zeta: Vec<C64> = zeta_z.iter().zip(&hu).map(|(zz, h)| zz - h).collect();
        let mut m = CMatrix::zeros(g, g);
        for i in 0..g {
            for j in 0..g {
                m[(i, j)] = t.hess[(i, j)] / t.value - lg[i] * lg[j];
            }
        }
        let wp = &self.h - self.a.transpose() * m * &self.a;
        Ok(SigmaJet {
            log_sigma,
            zeta,
            wp: linalg::symmetrize(&wp),
            theta_modulus: modulus,
        })
    }

    fn checked_jet(&self, u: &[C64]) -> Result<SigmaJet> {
        let j = self.jet(u)?;
        if j.theta_modulus < DIVISOR_THRESHOLD {
            return Err(Error::OnThetaDivisor(j.theta_modulus));
        }
        Ok(j)
    }

    pub fn log_sigma(&self, u: &[C64]) -> Result<C64> {
        let z = self.theta_arg(u);
        let t = self.theta.jet(&z, &self.chr, 0, self.tol)?;
        let quad = linalg::dot(u, &linalg::mat_vec(&self.h, u));
        Ok(-quad * 0.5 + t.log_scale + t.value.ln())
    }

    pub fn sigma(&self, u: &[C64]) -> Result<C64> {
        let z = self.theta_arg(u);
        let t = self.theta.jet(&z, &self.chr, 0, self.tol)?;
        let quad = linalg::dot(u, &linalg::mat_vec(&self.h, u));
        Ok(t.value * (-quad * 0.5 + t.log_scale).exp())
    }

    /// `ζ_μ = ∂_{u_μ} log σ`, `mu` counted from 1.
    pub fn zeta(&self, u: &[C64], mu: usize) -> Result<C64> {
        Ok(self.checked_jet(u)?.zeta[mu - 1])
    }

    pub fn zeta_all(&self, u: &[C64]) -> Result<Vec<C64>> {
        Ok(self.checked_jet(u)?.zeta)
    }

    /// `℘_{μν} = −∂² log σ / ∂u_μ ∂u_ν`, indices counted from 1.
    pub fn wp(&self, u: &[C64], mu: usize, nu: usize) -> Result<C64> {
        Ok(self.checked_jet(u)?.wp[(mu - 1, nu - 1)])
    }

    pub fn wp_all(&self, u: &[C64]) -> Result<CMatrix> {
        Ok(self.checked_jet(u)?.wp)
    }

    /// Coefficients of `F(x)` (ascending) predicted by `℘_{g,·}`.
    pub fn f_poly_from_wp(&self, u: &[C64], convention: WpIndexConvention) -> Result<Vec<C64>> {
        let g = self.genus();
        let wp = self.wp_all(u)?;
        let mut out = vec![C64::default(); g + 1];
        out[g] = C64::new(1.0, 0.0);
        for i in 1..=g {
            let col = match convention {
                WpIndexConvention::Reversed => g - i,
                WpIndexConvention::Literal => i - 1,
            };
            out[g - i] = -wp[(g - 1, col)];
        }
        Ok(out)
    }

    /// `exp(uᵀη_r) σ(u + ω_r) / σ(u)`, with `η_r` the quasi-period paired with `ω_r`.
    ///
    /// With the second-kind periods used here `ζ(u + 2ω) = ζ(u) − 2η`, hence the
    /// positive exponent. The ratio to [`al_divisor`] is a constant.
    pub fn al_sigma(&self, u: &[C64], r: usize) -> Result<C64> {
        let hp = self.half_period(r)?;
        let eta: Vec<C64> = hp.eta.iter().map(|e| -e).collect();
        self.al_sigma_with(u, &hp.omega, &eta)
    }

    /// `exp(−uᵀ η'ω'^{-1} ω_r) σ(u + ω_r) / σ(u)`, the exponent taken literally.
    pub fn al_sigma_literal(&self, u: &[C64], r: usize) -> Result<C64> {
        let hp = self.half_period(r)?;
        let eta = linalg::mat_vec(&self.h, &hp.omega);
        self.al_sigma_with(u, &hp.omega, &eta)
    }

    fn al_sigma_with(&self, u: &[C64], omega: &[C64], eta: &[C64]) -> Result<C64> {
        let shifted: Vec<C64> = u.iter().zip(omega).map(|(a, b)| a + b).collect();
        let num = self.jet_log_sigma_checked(&shifted)?;
        let den = self.jet_log_sigma_checked(u)?;
        Ok((num - den - linalg::dot(u, eta)).exp())
    }

    fn jet_log_sigma_checked(&self, u: &[C64]) -> Result<C64> {
        let z = self.theta_arg(u);
        let t = self.theta.jet(&z, &self.chr, 0, self.tol)?;
        if t.value.norm() < DIVISOR_THRESHOLD {
            return Err(Error::OnThetaDivisor(t.value.norm()));
        }
        let quad = linalg::dot(u, &linalg::mat_vec(&self.h, u));
        Ok(-quad * 0.5 + t.log_scale + t.value.ln())
    }

    /// Quasi-period `H = 2η'm1 + 2η''m2` of the lattice vector `2ω'm1 + 2ω''m2`.
    pub fn quasi_period(&self, m1: &[f64], m2: &[f64]) -> Vec<C64> {
        let a: Vec<C64> = m1.iter().map(|&x| C64::new(2.0 * x, 0.0)).collect();
        let b: Vec<C64> = m2.iter().map(|&x| C64::new(2.0 * x, 0.0)).collect();
        let va = linalg::mat_vec(&self.periods.eta1, &a);
        let vb = linalg::mat_vec(&self.periods.eta2, &b);
        va.iter().zip(&vb).map(|(x, y)| x + y).collect()
    }
}

fn half_period_data(periods: &PeriodData, r: usize, omega: Vec<C64>) -> HalfPeriod {
    let (a, b) = periods.lattice_coords(&omega);
    // ω = 2ω'a + 2ω''b with a, b ∈ ½ℤ
    let eps1: Vec<f64> = a.iter().map(|x| (2.0 * x).round()).collect();
    let eps2: Vec<f64> = b.iter().map(|x| (2.0 * x).round()).collect();
    let lattice_residual = a
        .iter()
        .zip(&eps1)
        .chain(b.iter().zip(&eps2))
        .map(|(x, e)| (2.0 * x - e).abs())
        .fold(0.0, f64::max);
    let e1: Vec<C64> = eps1.iter().map(|&x| C64::new(x, 0.0)).collect();
    let e2: Vec<C64> = eps2.iter().map(|&x| C64::new(x, 0.0)).collect();
    let eta: Vec<C64> = linalg::mat_vec(&periods.eta1, &e1)
        .iter()
        .zip(linalg::mat_vec(&periods.eta2, &e2))
        .map(|(x, y)| x + y)
        .collect();
    HalfPeriod {
        r,
        omega,
        eps1,
        eps2,
        eta,
        lattice_residual,
    }
}

/// `γ_r sqrt(F(b_r))` with `γ_r = sqrt(−1/P'(b_r))`.
pub fn al_divisor(curve: &HyperellipticCurve, divisor: &Divisor, r: usize, convention: GammaConvention) -> Result<C64> {
    let b = curve.branch_point(r)?;
    for p in divisor.points() {
        if (p.x - b).norm() <= 1e-12 * (1.0 + b.norm()) {
            return Err(Error::BranchPointCollision { r, x: p.x });
        }
    }
    let dp = match convention {
        GammaConvention::Curve => curve.eval_df(b),
        GammaConvention::Divisor => crate::numeric::poly::horner2(&divisor.f_poly(), b).1,
    };
    let gamma = sqrt_p(-C64::new(1.0, 0.0) / dp);
    Ok(gamma * sqrt_p(divisor.eval_f_poly(b)))
}

/// As [`al_divisor`], choosing the square-root sign nearest `reference`.
pub fn al_divisor_tracked(
    curve: &HyperellipticCurve,
    divisor: &Divisor,
    r: usize,
    reference: C64,
) -> Result<C64> {
    let v = al_divisor(curve, divisor, r, GammaConvention::Curve)?;
    Ok(if (v - reference).norm() <= (v + reference).norm() { v } else { -v })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn al_divisor_arithmetic() {
        let curve = HyperellipticCurve::from_real(&[0.0, 4.0, 0.0, -5.0, 0.0, 1.0]).unwrap();
        let d = Divisor::from_xs_unchecked(&[C64::new(2.0, 0.0), C64::new(3.0, 0.0)]);
        // b_4 = 1
        let v = al_divisor(&curve, &d, 4, GammaConvention::Curve).unwrap();
        assert!((v.norm() - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        let sq = v * v * curve.eval_df(C64::new(1.0, 0.0)) + d.eval_f_poly(C64::new(1.0, 0.0));
        assert!(sq.norm() < 1e-15);
        let hit = Divisor::from_xs_unchecked(&[C64::new(1.0, 0.0), C64::new(3.0, 0.0)]);
        assert!(matches!(
            al_divisor(&curve, &hit, 4, GammaConvention::Curve),
            Err(Error::BranchPointCollision { .. })
        ));
    }
}
