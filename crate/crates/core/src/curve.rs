//! Hyperelliptic curves `y^2 = f(x)` with `f` monic of degree `2g+1`.

use crate::error::{Error, Result};
use crate::numeric::{poly, sqrt_p};
use crate::C64;

/// Which square root of `f(x)` a lifted point uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sheet {
    Plus,
    Minus,
}

impl Sheet {
    pub fn sign(self) -> f64 {
        match self {
            Sheet::Plus => 1.0,
            Sheet::Minus => -1.0,
        }
    }

    pub fn from_sign(s: i32) -> Sheet {
        if s < 0 {
            Sheet::Minus
        } else {
            Sheet::Plus
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvePoint {
    pub x: C64,
    pub y: C64,
}

impl CurvePoint {
    pub fn new(x: C64, y: C64) -> Self {
        CurvePoint { x, y }
    }

    /// Hyperelliptic involution `(x, y) -> (x, -y)`.
    pub fn conjugate_sheet(self) -> Self {
        CurvePoint { x: self.x, y: -self.y }
    }
}

#[derive(Clone, Debug)]
pub struct HyperellipticCurve {
    genus: usize,
    lambda: Vec<C64>,
    branch_points: Vec<C64>,
}

/// Relative separation used by [`HyperellipticCurve::new`].
pub const DEFAULT_SEPARATION: f64 = 1e-8;

impl HyperellipticCurve {
    /// Builds a curve from `λ_0, …, λ_{2g+1}` (ascending powers).
    pub fn new(lambda: &[C64]) -> Result<Self> {
        Self::with_separation(lambda, DEFAULT_SEPARATION)
    }

    pub fn from_real(lambda: &[f64]) -> Result<Self> {
        let l: Vec<C64> = lambda.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::new(&l)
    }

    /// Curve whose branch points are the given roots.
    pub fn from_branch_points(points: &[C64]) -> Result<Self> {
        Self::new(&poly::from_roots(points))
    }

    pub fn with_separation(lambda: &[C64], separation: f64) -> Result<Self> {
        let n = lambda.len();
        if n < 4 || n % 2 != 0 {
            return Err(Error::BadCoefficientCount(n));
        }
        let lead = lambda[n - 1];
        if lead != C64::new(1.0, 0.0) {
            return Err(Error::BadLeadingCoefficient(lead));
        }
        let genus = (n - 2) / 2;
        let mut b = poly::roots(lambda);
        poly::sort_lex(&mut b);
        let scale = 1.0 + b.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let tol = separation * scale;
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                let d = (b[i] - b[j]).norm();
                if d <= tol {
                    return Err(Error::DegenerateCurve {
                        a: b[i],
                        b: b[j],
                        distance: d,
                        tolerance: tol,
                    });
                }
            }
        }
        Ok(HyperellipticCurve {
            genus,
            lambda: lambda.to_vec(),
            branch_points: b,
        })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn degree(&self) -> usize {
        2 * self.genus + 1
    }

    pub fn lambda(&self) -> &[C64] {
        &self.lambda
    }

    /// `λ_k`, zero outside `0..=2g+1`.
    pub fn lambda_at(&self, k: usize) -> C64 {
        self.lambda.get(k).copied().unwrap_or_default()
    }

    /// Branch points sorted by real part, then imaginary part.
    pub fn branch_points(&self) -> &[C64] {
        &self.branch_points
    }

    /// Branch point `b_r`, `r` counted from 1.
    pub fn branch_point(&self, r: usize) -> Result<C64> {
        if r == 0 || r > self.branch_points.len() {
            return Err(Error::InvalidInput(format!(
                "branch index {r} outside 1..={}",
                self.branch_points.len()
            )));
        }
        Ok(self.branch_points[r - 1])
    }

    pub fn eval_f(&self, x: C64) -> C64 {
        poly::horner(&self.lambda, x)
    }

    pub fn eval_df(&self, x: C64) -> C64 {
        poly::horner2(&self.lambda, x).1
    }

    /// `y = ±sqrt(f(x))` on the principal branch.
    pub fn lift(&self, x: C64, sheet: Sheet) -> CurvePoint {
        CurvePoint::new(x, sqrt_p(self.eval_f(x)) * sheet.sign())
    }

    /// Relative curve-equation residual `|y^2 - f(x)| / (1 + |f(x)|)`.
    pub fn residual(&self, p: &CurvePoint) -> f64 {
        let f = self.eval_f(p.x);
        (p.y * p.y - f).norm() / (1.0 + f.norm())
    }

    pub fn contains(&self, p: &CurvePoint, tol: f64) -> bool {
        self.residual(p) <= tol
    }

    /// Max relative mismatch between `∏(x - b_j)` and `f(x)` at `g+2` probe points.
    pub fn factorization_residual(&self) -> f64 {
        let scale = 1.0 + self.branch_points.iter().map(|z| z.norm()).fold(0.0, f64::max);
        (0..self.genus + 2)
            .map(|k| {
                let t = 0.7 + k as f64;
                let x = C64::from_polar(scale * (1.0 + 0.1 * t), 0.9 * t);
                let prod: C64 = self.branch_points.iter().map(|b| x - b).product();
                let f = self.eval_f(x);
                (prod - f).norm() / f.norm()
            })
            .fold(0.0, f64::max)
    }

    pub fn is_real(&self) -> bool {
        self.lambda.iter().all(|c| c.im == 0.0)
    }
}

/// `g` points on the curve with pairwise distinct `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct Divisor {
    points: Vec<CurvePoint>,
}

/// Relative tolerance for the curve equation when validating a divisor.
pub const ON_CURVE_TOL: f64 = 1e-9;

impl Divisor {
    pub fn new(curve: &HyperellipticCurve, points: Vec<CurvePoint>) -> Result<Self> {
        if points.len() != curve.genus() {
            return Err(Error::InvalidDivisor(format!(
                "expected {} points, got {}",
                curve.genus(),
                points.len()
            )));
        }
        for p in &points {
            let r = curve.residual(p);
            if r > ON_CURVE_TOL {
                return Err(Error::InvalidDivisor(format!(
                    "point ({}, {}) is off the curve (residual {r:e})",
                    p.x, p.y
                )));
            }
        }
        let d = Divisor { points };
        d.check_distinct()?;
        Ok(d)
    }

    /// Divisor from `x`-coordinates and sheets.
    pub fn from_x(curve: &HyperellipticCurve, xs: &[C64], sheets: &[Sheet]) -> Result<Self> {
        let pts = xs
            .iter()
            .zip(sheets.iter().chain(std::iter::repeat(&Sheet::Plus)))
            .map(|(&x, &s)| curve.lift(x, s))
            .collect();
        Self::new(curve, pts)
    }

    /// No validation; used for symmetric-function algebra on bare `x` values.
    pub fn from_points_unchecked(points: Vec<CurvePoint>) -> Self {
        Divisor { points }
    }

    pub fn from_xs_unchecked(xs: &[C64]) -> Self {
        Divisor {
            points: xs.iter().map(|&x| CurvePoint::new(x, C64::default())).collect(),
        }
    }

    fn check_distinct(&self) -> Result<()> {
        let scale = 1.0 + self.points.iter().map(|p| p.x.norm()).fold(0.0, f64::max);
        for i in 0..self.points.len() {
            for j in i + 1..self.points.len() {
                if (self.points[i].x - self.points[j].x).norm() <= 1e-9 * scale {
                    return Err(Error::InvalidDivisor(format!(
                        "x-coordinates {} and {} collide",
                        self.points[i].x, self.points[j].x
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn xs(&self) -> Vec<C64> {
        self.points.iter().map(|p| p.x).collect()
    }

    pub fn ys(&self) -> Vec<C64> {
        self.points.iter().map(|p| p.y).collect()
    }

    /// Coefficients (ascending) of `F(x) = ∏(x - x_i)`.
    pub fn f_poly(&self) -> Vec<C64> {
        poly::from_roots(&self.xs())
    }

    /// `F(x)` evaluated directly as a product.
    pub fn eval_f_poly(&self, x: C64) -> C64 {
        self.points.iter().map(|p| x - p.x).product()
    }

    /// `F'(x_i) = ∏_{j≠i}(x_i - x_j)`.
    pub fn f_poly_derivative_at(&self, i: usize) -> C64 {
        let xi = self.points[i].x;
        self.points
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, p)| xi - p.x)
            .product()
    }

    /// `q_n = Σ x_i^n` for `n = 1..=count`.
    pub fn power_sums(&self, count: usize) -> Vec<C64> {
        let xs = self.xs();
        let mut pw = xs.clone();
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            out.push(pw.iter().sum());
            for (p, x) in pw.iter_mut().zip(&xs) {
                *p *= x;
            }
        }
        out
    }

    /// `e_1, …, e_g`.
    pub fn elementary_symmetric(&self) -> Vec<C64> {
        let g = self.points.len();
        let f = self.f_poly();
        (1..=g)
            .map(|k| {
                let s = if k % 2 == 0 { 1.0 } else { -1.0 };
                f[g - k] * s
            })
            .collect()
    }
}

/// Power sums from elementary symmetric functions by Newton's identities.
pub fn newton_power_sums(e: &[C64], count: usize) -> Vec<C64> {
    let g = e.len();
    let mut p: Vec<C64> = Vec::with_capacity(count);
    for k in 1..=count {
        let mut acc = C64::default();
        for i in 1..k.min(g + 1) {
            let s = if (i - 1) % 2 == 0 { 1.0 } else { -1.0 };
            acc += e[i - 1] * p[k - i - 1] * s;
        }
        if k <= g {
            let s = if (k - 1) % 2 == 0 { 1.0 } else { -1.0 };
            acc += e[k - 1] * (k as f64) * s;
        }
        p.push(acc);
    }
    p
}
