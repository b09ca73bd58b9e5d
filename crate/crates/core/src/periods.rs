//! Homology basis, period matrices and Abel integrals.
//!
//! Cuts join `b_1 b_2, b_3 b_4, …, b_{2g-1} b_{2g}` (sorted branch points) and
//! run from `b_{2g+1}` horizontally to `+∞`. With these cuts `y(x)` is a
//! single-valued function on the plane, see [`CutStructure::y`].

use crate::curve::{CurvePoint, HyperellipticCurve};
use crate::error::{Error, Result};
use crate::numeric::{linalg, quad, sqrt_p};
use crate::{CMatrix, C64};

pub use crate::theta::{theta, Theta, ThetaChar, ThetaJet};

/// Node budget for the cycle quadratures.
pub const MAX_NODES: usize = 1 << 16;
const CYCLE_TOL: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycleKind {
    Alpha,
    Beta,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DifferentialKind {
    First,
    Second,
}

/// A basis cycle described through the cut structure.
///
/// `segments` are pairs of 0-based branch indices: the encircled cut for an
/// alpha cycle, the chain of gaps walked (on both sheets) for a beta cycle.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleSpec {
    pub kind: CycleKind,
    pub index: usize,
    pub orientation: i32,
    pub segments: Vec<(usize, usize)>,
}

impl CycleSpec {
    pub fn reversed(&self) -> Self {
        CycleSpec {
            orientation: -self.orientation,
            ..self.clone()
        }
    }

    pub fn describe(&self) -> String {
        let name = match self.kind {
            CycleKind::Alpha => "alpha",
            CycleKind::Beta => "beta",
        };
        let segs: Vec<String> = self
            .segments
            .iter()
            .map(|(a, b)| format!("b{}-b{}", a + 1, b + 1))
            .collect();
        format!("{name}{} [{}] orientation {:+}", self.index, segs.join(" "), self.orientation)
    }
}

/// Standard basis from the fixed cut pairing.
pub fn homology_basis(curve: &HyperellipticCurve) -> Vec<CycleSpec> {
    let g = curve.genus();
    let mut out = Vec::with_capacity(2 * g);
    for i in 1..=g {
        out.push(CycleSpec {
            kind: CycleKind::Alpha,
            index: i,
            orientation: 1,
            segments: vec![(2 * i - 2, 2 * i - 1)],
        });
    }
    for i in 1..=g {
        out.push(CycleSpec {
            kind: CycleKind::Beta,
            index: i,
            orientation: 1,
            segments: (i..=g).map(|k| (2 * k - 1, 2 * k)).collect(),
        });
    }
    out
}

/// Intersection numbers computed from the cut combinatorics.
///
/// A beta chain meets an alpha circle once when the chain starts on that cut;
/// cuts passed in the middle of the chain are entered and left, adding zero.
pub fn intersection_matrix(cycles: &[CycleSpec]) -> Vec<Vec<i32>> {
    let n = cycles.len();
    let mut m = vec![vec![0; n]; n];
    for (i, a) in cycles.iter().enumerate() {
        for (j, b) in cycles.iter().enumerate() {
            if a.kind == CycleKind::Alpha && b.kind == CycleKind::Beta {
                let cut = a.segments[0];
                let start = b.segments[0].0;
                if start == cut.0 || start == cut.1 {
                    let v = a.orientation * b.orientation;
                    m[i][j] = v;
                    m[j][i] = -v;
                }
            }
        }
    }
    m
}

/// The branch cuts and the global branch of `y` they define.
#[derive(Clone, Debug)]
pub struct CutStructure {
    b: Vec<C64>,
    g: usize,
}

impl CutStructure {
    pub fn new(curve: &HyperellipticCurve) -> Self {
        CutStructure {
            b: curve.branch_points().to_vec(),
            g: curve.genus(),
        }
    }

    fn mid_half(&self, k: usize) -> (C64, C64) {
        let a = self.b[2 * k];
        let c = self.b[2 * k + 1];
        ((a + c) * 0.5, (c - a) * 0.5)
    }

    /// `sqrt((x - b_{2k+1})(x - b_{2k+2}))` with its cut on the segment (0-based `k`).
    pub fn pair_factor(&self, k: usize, x: C64) -> C64 {
        let (m, h) = self.mid_half(k);
        let w = x - m;
        w * sqrt_p(C64::new(1.0, 0.0) - h * h / (w * w))
    }

    /// `sqrt(x - b_{2g+1})` with its cut on the ray to `+∞`.
    pub fn ray_factor(&self, x: C64) -> C64 {
        C64::new(0.0, 1.0) * sqrt_p(self.b[2 * self.g] - x)
    }

    /// The global branch of `y`.
    pub fn y(&self, x: C64) -> C64 {
        (0..self.g).fold(self.ray_factor(x), |acc, k| acc * self.pair_factor(k, x))
    }

    /// `y / pair_factor(k)`, analytic across cut `k`.
    pub fn y_without_pair(&self, k: usize, x: C64) -> C64 {
        (0..self.g)
            .filter(|&j| j != k)
            .fold(self.ray_factor(x), |acc, j| acc * self.pair_factor(j, x))
    }

    /// `∮_{α_{k+1}} x^m dx / (2y)` for `m = 0..count`.
    pub fn alpha_moments(&self, k: usize, count: usize) -> Result<Vec<C64>> {
        let (mid, half) = self.mid_half(k);
        let i = C64::new(0.0, 1.0);
        quad::periodic_trapezoid(
            |th, out| {
                let x = mid + half * th.cos();
                let q = self.y_without_pair(k, x);
                let mut p = i / (q * 2.0);
                for o in out.iter_mut() {
                    *o = p;
                    p *= x;
                }
            },
            count,
            CYCLE_TOL,
            MAX_NODES,
        )
        .map_err(|e| relabel(e, format!("alpha cycle {}", k + 1)))
    }

    /// `∫ x^m dx / (2y)` along the gap from `b_{2k}` to `b_{2k+1}` (1-based `k`).
    pub fn gap_moments(&self, k: usize, count: usize) -> Result<Vec<C64>> {
        let a = self.b[2 * k - 1];
        let c = self.b[2 * k];
        let mid = (a + c) * 0.5;
        let half = (c - a) * 0.5;
        let i = C64::new(0.0, 1.0);
        let others: Vec<C64> = self
            .b
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != 2 * k - 1 && j != 2 * k)
            .map(|(_, &v)| v)
            .collect();
        quad::chebyshev_midpoint(
            |th, out| {
                let x = mid - half * th.cos();
                let r: C64 = others.iter().map(|bj| x - bj).product();
                let mut sr = sqrt_p(r);
                // (x-a)(x-c) = -(h sinθ)^2, so y = ±i h sinθ sqrt(R)
                let cand = i * half * th.sin() * sr;
                let yg = self.y(x);
                if (cand - yg).norm() > (cand + yg).norm() {
                    sr = -sr;
                }
                // dx = h sinθ dθ
                let mut p = C64::new(1.0, 0.0) / (i * sr * 2.0);
                for o in out.iter_mut() {
                    *o = p;
                    p *= x;
                }
            },
            count,
            CYCLE_TOL,
            MAX_NODES,
        )
        .map_err(|e| relabel(e, format!("gap {k}")))
    }

    /// Moments `∮ x^m dx/(2y)` over a basis cycle.
    pub fn cycle_moments(&self, cycle: &CycleSpec, count: usize) -> Result<Vec<C64>> {
        let mut out = match cycle.kind {
            CycleKind::Alpha => self.alpha_moments(cycle.segments[0].0 / 2, count)?,
            CycleKind::Beta => {
                let mut acc = vec![C64::default(); count];
                for &(s, _) in &cycle.segments {
                    let k = (s + 1) / 2;
                    for (a, v) in acc.iter_mut().zip(self.gap_moments(k, count)?) {
                        *a += v * 2.0;
                    }
                }
                acc
            }
        };
        for v in out.iter_mut() {
            *v *= cycle.orientation as f64;
        }
        Ok(out)
    }
}

fn relabel(e: Error, what: String) -> Error {
    match e {
        Error::QuadratureFailure { nodes, error, .. } => Error::QuadratureFailure { what, nodes, error },
        other => other,
    }
}

/// Coefficients `c_k` of `dr_j = Σ_k c_k x^k dx/(2y)`, `j` counted from 1.
pub fn second_kind_coefficients(curve: &HyperellipticCurve, j: usize) -> Vec<(usize, C64)> {
    let g = curve.genus();
    (j..=2 * g - j)
        .map(|k| (k, curve.lambda_at(k + 1 + j) * (k + 1 - j) as f64))
        .collect()
}

/// Integral of `du_j` (first kind) or `dr_j` (second kind) over a cycle.
pub fn integrate_differential(
    curve: &HyperellipticCurve,
    cycle: &CycleSpec,
    kind: DifferentialKind,
    j: usize,
) -> Result<C64> {
    let g = curve.genus();
    if j == 0 || j > g {
        return Err(Error::InvalidInput(format!("differential index {j} outside 1..={g}")));
    }
    let cuts = CutStructure::new(curve);
    let mom = cuts.cycle_moments(cycle, 2 * g)?;
    Ok(match kind {
        DifferentialKind::First => mom[j - 1],
        DifferentialKind::Second => second_kind_coefficients(curve, j)
            .into_iter()
            .map(|(k, c)| c * mom[k])
            .sum(),
    })
}

/// Half-period matrices of the first and second kind and `τ = ω'^{-1} ω''`.
#[derive(Clone, Debug)]
pub struct PeriodData {
    pub genus: usize,
    pub omega1: CMatrix,
    pub omega2: CMatrix,
    pub eta1: CMatrix,
    pub eta2: CMatrix,
    pub tau: CMatrix,
    pub cycles: Vec<CycleSpec>,
    pub beta_flipped: bool,
    pub tau_asymmetry: f64,
    pub im_tau_min_eigenvalue: f64,
}

pub fn compute_periods(curve: &HyperellipticCurve) -> Result<PeriodData> {
    let g = curve.genus();
    let cuts = CutStructure::new(curve);
    let mut cycles = homology_basis(curve);
    let mut mom = Vec::with_capacity(2 * g);
    for c in &cycles {
        mom.push(cuts.cycle_moments(c, 2 * g)?);
    }
    let assemble = |sel: &dyn Fn(usize) -> usize, second: bool| {
        CMatrix::from_fn(g, g, |i, j| {
            let m = &mom[sel(j)];
            if second {
                second_kind_coefficients(curve, i + 1)
                    .into_iter()
                    .map(|(k, c)| c * m[k])
                    .sum::<C64>()
                    * 0.5
            } else {
                m[i] * 0.5
            }
        })
    };
    let omega1 = assemble(&|j| j, false);
    let mut omega2 = assemble(&|j| g + j, false);
    let eta1 = assemble(&|j| j, true);
    let mut eta2 = assemble(&|j| g + j, true);
    let inv = linalg::inverse(&omega1)?;
    let mut tau = &inv * &omega2;
    let mut ev = linalg::symmetric_eigenvalues(&linalg::imag_part(&tau));
    let mut flipped = false;
    if ev.iter().all(|&e| e < 0.0) {
        flipped = true;
        omega2 = -omega2;
        eta2 = -eta2;
        tau = -tau;
        for c in cycles.iter_mut().filter(|c| c.kind == CycleKind::Beta) {
            c.orientation = -c.orientation;
        }
        ev = linalg::symmetric_eigenvalues(&linalg::imag_part(&tau));
    }
    if ev[0] <= 0.0 {
        return Err(Error::NonPositiveImTau(ev[0]));
    }
    let tau_asymmetry = linalg::max_entry(&(&tau - tau.transpose()));
    Ok(PeriodData {
        genus: g,
        omega1,
        omega2,
        eta1,
        eta2,
        tau,
        cycles,
        beta_flipped: flipped,
        tau_asymmetry,
        im_tau_min_eigenvalue: ev[0],
    })
}

impl PeriodData {
    /// `η'ω''ᵀ − η''ω'ᵀ`, the block of `M J Mᵀ` for `M = [[ω', ω''], [η', η'']]`.
    pub fn legendre_matrix(&self) -> CMatrix {
        &self.eta1 * self.omega2.transpose() - &self.eta2 * self.omega1.transpose()
    }

    /// `ω'ᵀη'' − η'ᵀω''`, the block of `Mᵀ J M`.
    pub fn legendre_matrix_dual(&self) -> CMatrix {
        self.omega1.transpose() * &self.eta2 - self.eta1.transpose() * &self.omega2
    }

    /// `η'ᵀω'' − η''ᵀω'`; equals the others only when `η''ᵀω'` is symmetric.
    pub fn legendre_matrix_transposed(&self) -> CMatrix {
        self.eta1.transpose() * &self.omega2 - self.eta2.transpose() * &self.omega1
    }

    /// Distance of both Legendre blocks from `s·(πi/2)·I` and the sign `s` found.
    pub fn legendre_residual(&self) -> (f64, f64) {
        let id = CMatrix::identity(self.genus, self.genus);
        let q = C64::new(0.0, std::f64::consts::FRAC_PI_2);
        let l = self.legendre_matrix();
        let d = self.legendre_matrix_dual();
        let res = |s: f64| {
            linalg::max_entry(&(&l - &id * (q * s))).max(linalg::max_entry(&(&d + &id * (q * s))))
        };
        let (plus, minus) = (res(1.0), res(-1.0));
        if plus <= minus {
            (plus, 1.0)
        } else {
            (minus, -1.0)
        }
    }

    /// Residual of the transposed form against `±(πi/2)·I`.
    pub fn legendre_residual_transposed(&self) -> f64 {
        let id = CMatrix::identity(self.genus, self.genus);
        let q = C64::new(0.0, std::f64::consts::FRAC_PI_2);
        let l = self.legendre_matrix_transposed();
        linalg::max_entry(&(&l - &id * q)).min(linalg::max_entry(&(&l + &id * q)))
    }

    /// `τ` symmetrized.
    pub fn tau_symmetric(&self) -> CMatrix {
        linalg::symmetrize(&self.tau)
    }

    /// `2ω' m1 + 2ω'' m2`.
    pub fn lattice_vector(&self, m1: &[f64], m2: &[f64]) -> Vec<C64> {
        let a: Vec<C64> = m1.iter().map(|&x| C64::new(2.0 * x, 0.0)).collect();
        let b: Vec<C64> = m2.iter().map(|&x| C64::new(2.0 * x, 0.0)).collect();
        let va = linalg::mat_vec(&self.omega1, &a);
        let vb = linalg::mat_vec(&self.omega2, &b);
        va.iter().zip(&vb).map(|(x, y)| x + y).collect()
    }

    /// Real coordinates `(a, b)` with `v = 2ω' a + 2ω'' b`.
    pub fn lattice_coords(&self, v: &[C64]) -> (Vec<f64>, Vec<f64>) {
        let g = self.genus;
        let inv = self.omega1.clone().try_inverse().expect("omega1 invertible");
        let w: Vec<C64> = linalg::mat_vec(&inv, v).iter().map(|z| z * 0.5).collect();
        let tau = self.tau_symmetric();
        let y = linalg::imag_part(&tau);
        let x = linalg::real_part(&tau);
        let wi = nalgebra::DVector::from_iterator(g, w.iter().map(|z| z.im));
        let b = y.lu().solve(&wi).expect("Im tau invertible");
        let wr = nalgebra::DVector::from_iterator(g, w.iter().map(|z| z.re));
        let a = wr - x * &b;
        (a.iter().copied().collect(), b.iter().copied().collect())
    }

    /// Distance of `v` from the period lattice in lattice coordinates.
    pub fn lattice_residual(&self, v: &[C64]) -> f64 {
        let (a, b) = self.lattice_coords(v);
        a.iter()
            .chain(&b)
            .map(|x| (x - x.round()).abs())
            .fold(0.0, f64::max)
    }

    /// Representative of `v` with lattice coordinates in `[-1/2, 1/2)`.
    pub fn reduce(&self, v: &[C64]) -> Vec<C64> {
        let (a, b) = self.lattice_coords(v);
        let ra: Vec<f64> = a.iter().map(|x| -x.round()).collect();
        let rb: Vec<f64> = b.iter().map(|x| -x.round()).collect();
        let shift = self.lattice_vector(&ra, &rb);
        v.iter().zip(&shift).map(|(x, s)| x + s).collect()
    }
}

/// Path from infinity used for an Abel integral: the ray `x + s·direction`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AbelPath {
    pub direction: C64,
    pub clearance: f64,
}

const RAY_CANDIDATES: usize = 24;

fn ray_clearance(x: C64, d: C64, b: &[C64], skip: Option<usize>) -> f64 {
    b.iter()
        .enumerate()
        .filter(|&(j, _)| Some(j) != skip)
        .map(|(_, &bj)| {
            let t = ((bj - x) * d.conj()).re.max(0.0);
            (x + d * t - bj).norm()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Chooses the ray from `x` to infinity that keeps furthest from the branch points.
pub fn choose_path(curve: &HyperellipticCurve, x: C64) -> Result<AbelPath> {
    let b = curve.branch_points();
    let skip = b.iter().position(|&bj| (bj - x).norm() <= 1e-12 * (1.0 + bj.norm()));
    let scale = 1.0 + b.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut best = AbelPath {
        direction: C64::new(1.0, 0.0),
        clearance: -1.0,
    };
    for k in 0..RAY_CANDIDATES {
        let ang = std::f64::consts::TAU * (k as f64 + 0.25) / RAY_CANDIDATES as f64;
        let d = C64::from_polar(1.0, ang);
        let c = ray_clearance(x, d, b, skip);
        if c > best.clearance {
            best = AbelPath { direction: d, clearance: c };
        }
    }
    if best.clearance < 1e-6 * scale {
        return Err(Error::PathThroughBranchPoint(x));
    }
    Ok(best)
}

/// `∫_∞^P du` along the ray from `P` in the chosen direction.
pub fn abel_integral(curve: &HyperellipticCurve, p: &CurvePoint) -> Result<(Vec<C64>, AbelPath)> {
    let path = choose_path(curve, p.x)?;
    Ok((abel_integral_along(curve, p, path.direction)?, path))
}

/// `∫_∞^P du` along the ray `P.x + s·direction`, `s ∈ [0, ∞)`.
///
/// `y` is continued exactly as `y_P ∏ sqrt(1 + s·d/(x_P − b_j))`.
pub fn abel_integral_along(curve: &HyperellipticCurve, p: &CurvePoint, direction: C64) -> Result<Vec<C64>> {
    let g = curve.genus();
    let b = curve.branch_points();
    let d = direction / direction.norm();
    let scale = 1.0 + b.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if ray_clearance(p.x, d, b, None) < 1e-9 * scale && !b.iter().any(|&bj| (bj - p.x).norm() <= 1e-12 * scale) {
        return Err(Error::PathThroughBranchPoint(p.x));
    }
    let at_branch = b.iter().position(|&bj| (bj - p.x).norm() <= 1e-12 * scale);
    let one = C64::new(1.0, 0.0);
    let inv: Vec<C64> = b
        .iter()
        .enumerate()
        .map(|(j, &bj)| if Some(j) == at_branch { C64::default() } else { d / (p.x - bj) })
        .collect();
    let pref = match at_branch {
        None => p.y,
        Some(r) => {
            let br = b[r];
            sqrt_p(d) * b.iter().enumerate().filter(|&(j, _)| j != r).map(|(_, &bj)| sqrt_p(br - bj)).product::<C64>()
        }
    };
    let x0 = match at_branch {
        Some(r) => b[r],
        None => p.x,
    };
    // s = (t/(1-t))^2, ds = 2t/(1-t)^3 dt
    let res = quad::integrate(
        |t, out| {
            let u = t / (1.0 - t);
            let s = u * u;
            let jac = 2.0 * t / ((1.0 - t) * (1.0 - t) * (1.0 - t));
            let x = x0 + d * s;
            let mut y = pref;
            for (j, c) in inv.iter().enumerate() {
                if Some(j) == at_branch {
                    // sqrt(s d) = u sqrt(d), sqrt(d) is already in pref
                    y *= u;
                } else {
                    y *= sqrt_p(one + c * s);
                }
            }
            if !(y.norm() > 0.0) || !y.is_finite() {
                for o in out.iter_mut() {
                    *o = C64::default();
                }
                return Ok(());
            }
            let mut w = -d * jac / (y * 2.0);
            for o in out.iter_mut() {
                *o = w;
                w *= x;
            }
            Ok(())
        },
        0.0,
        1.0,
        g,
        1e-15,
        1e-13,
        4000,
    );
    res.map_err(|e| relabel(e, format!("Abel integral to x = {}", p.x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::elliptic::agm;

    fn lemniscate() -> HyperellipticCurve {
        HyperellipticCurve::from_real(&[0.0, -1.0, 0.0, 1.0]).unwrap()
    }

    #[test]
    fn global_y_squares_to_f() {
        let curve = HyperellipticCurve::from_real(&[0.0, 4.0, 0.0, -5.0, 0.0, 1.0]).unwrap();
        let cuts = CutStructure::new(&curve);
        for k in 0..20 {
            let x = C64::new(-3.0 + 0.31 * k as f64, 0.7 - 0.09 * k as f64);
            let y = cuts.y(x);
            assert!((y * y - curve.eval_f(x)).norm() < 1e-12 * (1.0 + curve.eval_f(x).norm()));
        }
    }

    #[test]
    fn y_continuous_off_cuts() {
        let curve = HyperellipticCurve::from_real(&[0.0, 4.0, 0.0, -5.0, 0.0, 1.0]).unwrap();
        let cuts = CutStructure::new(&curve);
        // crossing the real axis in a gap or left of all branch points keeps y continuous
        for xr in [-0.5, -3.0, 1.5] {
            let up = cuts.y(C64::new(xr, 1e-9));
            let down = cuts.y(C64::new(xr, -1e-9));
            assert!((up - down).norm() < 1e-6, "{xr}");
        }
        // crossing a cut flips it
        let up = cuts.y(C64::new(-1.5, 1e-9));
        let down = cuts.y(C64::new(-1.5, -1e-9));
        assert!((up + down).norm() < 1e-6);
    }

    #[test]
    fn lemniscate_periods() {
        let curve = lemniscate();
        let cuts = CutStructure::new(&curve);
        let a = cuts.alpha_moments(0, 1).unwrap()[0];
        let lem = std::f64::consts::PI / agm(1.0, 2f64.sqrt());
        assert!((a.norm() - lem).abs() < 1e-12, "{a} {lem}");
    }

    #[test]
    fn intersection_is_symplectic() {
        let curve = HyperellipticCurve::from_real(&[0.0, 4.0, 0.0, -5.0, 0.0, 1.0]).unwrap();
        let m = intersection_matrix(&homology_basis(&curve));
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(m[i][j], 0);
                assert_eq!(m[2 + i][2 + j], 0);
                assert_eq!(m[i][2 + j], if i == j { 1 } else { 0 });
                assert_eq!(m[2 + i][j], if i == j { -1 } else { 0 });
            }
        }
    }
}
