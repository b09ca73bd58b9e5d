//! Abel map, divisor flows on the Jacobian and loop-soliton tracing.
//!
//! A flow in the direction `v ∈ ℂ^g` moves the divisor so that its Abel image
//! moves by `τ v`. With `V_{k,i} = x_i^{k-1}` and `c = V^{-1} v` the points obey
//! `dx_i/dτ = 2 y_i c_i`, `dy_i/dτ = f'(x_i) c_i`, which stays smooth through
//! `y_i = 0`.

use crate::curve::{CurvePoint, Divisor, HyperellipticCurve};
use crate::error::{Error, Result};
use crate::kleinian::{JacobianPoint, SigmaContext};
use crate::numeric::{linalg, poly, sqrt_p};
use crate::periods::{self, AbelPath};
use crate::{CMatrix, C64};

/// `Σ_i ∫_∞^{P_i} du`, each along its own ray.
pub fn abel_map(curve: &HyperellipticCurve, points: &[CurvePoint]) -> Result<(JacobianPoint, Vec<AbelPath>)> {
    let g = curve.genus();
    let mut u = vec![C64::default(); g];
    let mut paths = Vec::with_capacity(points.len());
    for p in points {
        let (v, path) = periods::abel_integral(curve, p)?;
        for (a, b) in u.iter_mut().zip(v) {
            *a += b;
        }
        paths.push(path);
    }
    Ok((JacobianPoint::new(u), paths))
}

/// Abel image of a divisor.
pub fn abel_map_divisor(curve: &HyperellipticCurve, divisor: &Divisor) -> Result<JacobianPoint> {
    Ok(abel_map(curve, divisor.points())?.0)
}

fn vandermonde(xs: &[C64]) -> CMatrix {
    let g = xs.len();
    CMatrix::from_fn(g, g, |k, i| xs[i].powu(k as u32))
}

/// Maximum condition number accepted for the Abel differential matrix.
pub const CONDITION_CAP: f64 = 1e10;

/// `dx_i/du_k`, `k` counted from 1.
pub fn flow_field(curve: &HyperellipticCurve, divisor: &Divisor, k: usize) -> Result<Vec<C64>> {
    let g = curve.genus();
    if k == 0 || k > g {
        return Err(Error::InvalidInput(format!("direction {k} outside 1..={g}")));
    }
    let xs = divisor.xs();
    let ys = divisor.ys();
    let m = CMatrix::from_fn(g, g, |r, i| xs[i].powu(r as u32) / (ys[i] * 2.0));
    let cond = linalg::condition(&m);
    if !(cond <= CONDITION_CAP) {
        return Err(Error::SpecialDivisor(cond));
    }
    let inv = linalg::inverse(&m)?;
    Ok((0..g).map(|i| inv[(i, k - 1)]).collect())
}

/// `dx_i/du_g = 2 y_i / F'(x_i)`.
pub fn flow_field_ug(divisor: &Divisor) -> Vec<C64> {
    (0..divisor.len())
        .map(|i| divisor.points()[i].y * 2.0 / divisor.f_poly_derivative_at(i))
        .collect()
}

#[derive(Clone, Debug)]
pub struct FlowOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    pub min_step: f64,
    /// Fixed RK4 steps per output interval instead of adaptive stepping.
    pub fixed_steps: Option<usize>,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions {
            rtol: 1e-10,
            atol: 1e-12,
            max_steps: 200_000,
            min_step: 1e-13,
            fixed_steps: None,
        }
    }
}

impl FlowOptions {
    pub fn fixed(steps_per_output: usize) -> Self {
        FlowOptions {
            fixed_steps: Some(steps_per_output),
            ..Default::default()
        }
    }
}

/// A divisor reached by a flow together with the accumulated data.
#[derive(Clone, Debug)]
pub struct FlowState {
    pub divisor: Divisor,
    /// Flow parameter `τ`; the Abel image moved by `τ · direction`.
    pub tau: f64,
    pub du: Vec<C64>,
    /// `∫ F(b_r) du_g` along the flow when a branch point is tracked.
    pub z: C64,
    /// Accumulated change of `arg y_i`.
    pub winding: Vec<f64>,
}

struct System<'a> {
    curve: &'a HyperellipticCurve,
    g: usize,
    dir: Vec<C64>,
    track: Option<C64>,
}

impl System<'_> {
    fn rhs(&self, s: &[C64]) -> Result<Vec<C64>> {
        let g = self.g;
        let xs = &s[..g];
        let v = vandermonde(xs);
        let cond = linalg::condition(&v);
        if !(cond <= CONDITION_CAP) {
            return Err(Error::SpecialDivisor(cond));
        }
        let c = linalg::solve(&v, &self.dir)?;
        let mut out = vec![C64::default(); 2 * g + 1];
        for i in 0..g {
            out[i] = s[g + i] * 2.0 * c[i];
            out[g + i] = self.curve.eval_df(xs[i]) * c[i];
        }
        if let Some(b) = self.track {
            let fb: C64 = xs.iter().map(|x| b - x).product();
            out[2 * g] = fb * self.dir[g - 1];
        }
        Ok(out)
    }

    fn rk4_increment(&self, s: &[C64], h: f64) -> Result<Vec<C64>> {
        let n = s.len();
        let add = |a: &[C64], k: &[C64], f: f64| -> Vec<C64> { (0..n).map(|i| a[i] + k[i] * f).collect() };
        let k1 = self.rhs(s)?;
        let k2 = self.rhs(&add(s, &k1, h / 2.0))?;
        let k3 = self.rhs(&add(s, &k2, h / 2.0))?;
        let k4 = self.rhs(&add(s, &k3, h))?;
        Ok((0..n).map(|i| (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0)).collect())
    }

    fn rk4(&self, s: &[C64], h: f64) -> Result<Vec<C64>> {
        let d = self.rk4_increment(s, h)?;
        Ok(s.iter().zip(d).map(|(a, b)| a + b).collect())
    }

    /// Re-lift `y_i` to `±sqrt(f(x_i))`, keeping the integrated sign.
    fn project(&self, s: &mut [C64]) {
        for i in 0..self.g {
            let r = sqrt_p(self.curve.eval_f(s[i]));
            s[self.g + i] = if (r - s[self.g + i]).norm() <= (r + s[self.g + i]).norm() { r } else { -r };
        }
    }

    fn arg_jump(&self, old: &[C64], new: &[C64]) -> (f64, Vec<f64>) {
        let g = self.g;
        let mut worst = 0.0f64;
        let mut d = vec![0.0; g];
        for i in 0..g {
            let (a, b) = (old[g + i], new[g + i]);
            if a.norm() > 1e-8 && b.norm() > 1e-8 {
                d[i] = (b / a).arg();
                worst = worst.max(d[i].abs());
            }
        }
        (worst, d)
    }
}

fn pack(divisor: &Divisor) -> Vec<C64> {
    let mut s = divisor.xs();
    s.extend(divisor.ys());
    s.push(C64::default());
    s
}

fn unpack(g: usize, s: &[C64]) -> Divisor {
    Divisor::from_points_unchecked((0..g).map(|i| CurvePoint::new(s[i], s[g + i])).collect())
}

/// Flows `divisor` along `direction` for `τ ∈ [0, span]`, reporting `n_out`
/// evenly spaced states including both ends.
pub fn flow_direction(
    curve: &HyperellipticCurve,
    divisor: &Divisor,
    direction: &[C64],
    span: f64,
    n_out: usize,
    track: Option<usize>,
    opts: &FlowOptions,
) -> Result<Vec<FlowState>> {
    let g = curve.genus();
    if direction.len() != g || divisor.len() != g {
        return Err(Error::InvalidInput("dimension mismatch in flow".into()));
    }
    let sys = System {
        curve,
        g,
        dir: direction.to_vec(),
        track: track.map(|r| curve.branch_point(r)).transpose()?,
    };
    let mut state = pack(divisor);
    let mut winding = vec![0.0; g];
    let mut comp = vec![C64::default(); state.len()];
    let mut tau = 0.0;
    let n_out = n_out.max(1);
    let mut out = Vec::with_capacity(n_out);
    let record = |s: &[C64], tau: f64, winding: &[f64]| FlowState {
        divisor: unpack(g, s),
        tau,
        du: direction.iter().map(|d| d * tau).collect(),
        z: s[2 * g],
        winding: winding.to_vec(),
    };
    out.push(record(&state, 0.0, &winding));
    if n_out == 1 || span == 0.0 {
        for _ in 1..n_out {
            out.push(record(&state, 0.0, &winding));
        }
        return Ok(out);
    }
    let interval = span / (n_out - 1) as f64;
    let mut h = interval.abs().min(0.05) * interval.signum();
    let mut steps = 0usize;
    for k in 1..n_out {
        let target = interval * k as f64;
        if let Some(nfix) = opts.fixed_steps {
            let hf = interval / nfix as f64;
            for _ in 0..nfix {
                // compensated accumulation keeps rounding noise out of finite differences
                let inc = sys.rk4_increment(&state, hf)?;
                let mut next = state.clone();
                for i in 0..next.len() {
                    let y = inc[i] - comp[i];
                    let t = state[i] + y;
                    comp[i] = (t - state[i]) - y;
                    next[i] = t;
                }
                sys.project(&mut next);
                for c in &mut comp[g..2 * g] {
                    *c = C64::default();
                }
                let (jump, d) = sys.arg_jump(&state, &next);
                if jump > std::f64::consts::FRAC_PI_2 {
                    return Err(Error::StepCollapse { step: hf, at: tau });
                }
                for (w, di) in winding.iter_mut().zip(d) {
                    *w += di;
                }
                state = next;
                tau += hf;
            }
            tau = target;
        } else {
            while (target - tau) * interval.signum() > 1e-15 * span.abs() {
                steps += 1;
                if steps > opts.max_steps {
                    return Err(Error::StepCollapse { step: h, at: tau });
                }
                let remaining = target - tau;
                let hh = if h.abs() > remaining.abs() { remaining } else { h };
                if hh.abs() < opts.min_step {
                    return Err(Error::StepCollapse { step: hh, at: tau });
                }
                let attempt = (|| -> Result<(Vec<C64>, f64)> {
                    let full = sys.rk4(&state, hh)?;
                    let half = sys.rk4(&state, hh / 2.0)?;
                    let two = sys.rk4(&half, hh / 2.0)?;
                    let mut err = 0.0f64;
                    for i in 0..2 * g {
                        let sc = opts.atol + opts.rtol * two[i].norm();
                        err = err.max((two[i] - full[i]).norm() / sc);
                    }
                    let next: Vec<C64> = (0..two.len()).map(|i| two[i] + (two[i] - full[i]) / 15.0).collect();
                    Ok((next, err))
                })();
                let (mut next, err) = match attempt {
                    Ok(v) => v,
                    Err(Error::SpecialDivisor(_)) if hh.abs() > opts.min_step * 4.0 => {
                        h = hh / 2.0;
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                if !(err <= 1.0) {
                    h = hh * (0.9 * err.powf(-0.2)).clamp(0.1, 0.5);
                    continue;
                }
                sys.project(&mut next);
                let (jump, d) = sys.arg_jump(&state, &next);
                if jump > std::f64::consts::FRAC_PI_2 {
                    h = hh / 2.0;
                    continue;
                }
                for (w, di) in winding.iter_mut().zip(d) {
                    *w += di;
                }
                state = next;
                tau += hh;
                let grow = if err == 0.0 { 2.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 2.0) };
                if hh == h {
                    h = hh * grow;
                } else {
                    h = h.abs().max(hh.abs() * grow) * interval.signum();
                }
            }
            tau = target;
        }
        out.push(record(&state, tau, &winding));
    }
    Ok(out)
}

/// Flow along `e_k` by `delta_u` (complex), `steps` reported intervals.
pub fn flow(
    curve: &HyperellipticCurve,
    divisor: &Divisor,
    k: usize,
    delta_u: C64,
    steps: usize,
) -> Result<Vec<FlowState>> {
    let g = curve.genus();
    if k == 0 || k > g {
        return Err(Error::InvalidInput(format!("direction {k} outside 1..={g}")));
    }
    let mut dir = vec![C64::default(); g];
    dir[k - 1] = delta_u;
    flow_direction(curve, divisor, &dir, 1.0, steps + 1, None, &FlowOptions::default())
}

/// Final divisor after moving the Abel image by `delta`.
pub fn flow_by(curve: &HyperellipticCurve, divisor: &Divisor, delta: &[C64]) -> Result<Divisor> {
    let norm = delta.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if norm == 0.0 {
        return Ok(divisor.clone());
    }
    let states = flow_direction(curve, divisor, delta, 1.0, 2, None, &FlowOptions::default())?;
    Ok(states.last().unwrap().divisor.clone())
}

/// Sampled loop soliton: `Z(s)`, half curvature `q` and `dZ/ds = F(b_r)`.
#[derive(Clone, Debug, Default)]
pub struct LoopSample {
    pub s: Vec<f64>,
    pub z: Vec<C64>,
    pub q: Vec<C64>,
    pub dz: Vec<C64>,
}

impl LoopSample {
    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }
}

/// Derivatives along the `u_g` flow at one divisor, for the branch point `b_r`.
#[derive(Clone, Debug)]
pub struct UgJet {
    pub x1: Vec<C64>,
    pub x2: Vec<C64>,
    /// `F(b_r) = ∏(b_r − x_i)`.
    pub f_b: C64,
    /// `ψ = ∂ log F(b_r)`.
    pub psi: C64,
    pub dpsi: C64,
}

/// First and second `u_g`-derivatives of the divisor points and of `log F(b_r)`.
pub fn ug_jet(curve: &HyperellipticCurve, divisor: &Divisor, b: C64) -> UgJet {
    let g = divisor.len();
    let xs = divisor.xs();
    let fp: Vec<C64> = (0..g).map(|i| divisor.f_poly_derivative_at(i)).collect();
    let x1: Vec<C64> = (0..g).map(|i| divisor.points()[i].y * 2.0 / fp[i]).collect();
    let x2: Vec<C64> = (0..g)
        .map(|i| {
            let mut s = C64::default();
            for j in 0..g {
                if j != i {
                    s += (x1[i] - x1[j]) / (xs[i] - xs[j]);
                }
            }
            curve.eval_df(xs[i]) * 2.0 / (fp[i] * fp[i]) - x1[i] * s
        })
        .collect();
    let f_b: C64 = xs.iter().map(|x| b - x).product();
    let mut psi = C64::default();
    let mut dpsi = C64::default();
    for i in 0..g {
        let w = xs[i] - b;
        psi += x1[i] / w;
        dpsi += x2[i] / w - x1[i] * x1[i] / (w * w);
    }
    UgJet { x1, x2, f_b, psi, dpsi }
}

/// Traces `Z' = F(b_r)` along the `u_g` flow from `divisor0` over `s ∈ [0, span]`.
pub fn trace_soliton(
    curve: &HyperellipticCurve,
    r: usize,
    divisor0: &Divisor,
    span: f64,
    n_samples: usize,
    opts: &FlowOptions,
) -> Result<(LoopSample, Vec<FlowState>)> {
    let g = curve.genus();
    let b = curve.branch_point(r)?;
    let mut dir = vec![C64::default(); g];
    dir[g - 1] = C64::new(1.0, 0.0);
    let states = flow_direction(curve, divisor0, &dir, span, n_samples, Some(r), opts)?;
    let mut sample = LoopSample::default();
    for st in &states {
        let jet = ug_jet(curve, &st.divisor, b);
        sample.s.push(st.tau);
        sample.z.push(st.z);
        sample.dz.push(jet.f_b);
        sample.q.push(jet.psi / C64::new(0.0, 2.0));
    }
    Ok((sample, states))
}

/// Compares a trace with `b_r^g u_g + Σ b_r^{i-1} ζ_i(u)` up to an affine map.
///
/// The map is fitted on the first and last samples; the returned value is the
/// largest relative mismatch on the others, with the fitted scale.
pub fn zeta_form_discrepancy(
    ctx: &SigmaContext,
    r: usize,
    u0: &JacobianPoint,
    sample: &LoopSample,
) -> Result<(f64, C64)> {
    let g = ctx.genus();
    let b = ctx.curve().branch_point(r)?;
    let mut zz = Vec::with_capacity(sample.len());
    for &s in &sample.s {
        let mut u = u0.u.clone();
        u[g - 1] += s;
        let zeta = ctx.zeta_all(&u)?;
        let mut v = b.powu(g as u32) * u[g - 1];
        for (i, z) in zeta.iter().enumerate() {
            v += b.powu(i as u32) * z;
        }
        zz.push(v);
    }
    let n = sample.len();
    if n < 3 {
        return Ok((0.0, C64::new(1.0, 0.0)));
    }
    let a = (sample.z[n - 1] - sample.z[0]) / (zz[n - 1] - zz[0]);
    let c = sample.z[0] - a * zz[0];
    let scale = sample.z.iter().map(|z| (z - sample.z[0]).norm()).fold(0.0, f64::max).max(1e-300);
    let worst = (1..n - 1)
        .map(|k| (a * zz[k] + c - sample.z[k]).norm() / scale)
        .fold(0.0, f64::max);
    Ok((worst, a))
}

/// Flow direction used as the MKdV time.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TimeDirection {
    /// `e_{g-1} + (λ_{2g-1} + b_r) e_g`.
    Literal,
    /// `−4 e_{g-1} + (2λ_{2g} + 6 b_r) e_g`, the direction in which
    /// `q_t + 6 q² q_s + q_sss = 0` holds with `s = u_g`.
    Mkdv,
}

pub fn t_direction(curve: &HyperellipticCurve, r: usize, kind: TimeDirection) -> Result<Vec<C64>> {
    let g = curve.genus();
    let b = curve.branch_point(r)?;
    let mut v = vec![C64::default(); g];
    match kind {
        TimeDirection::Literal => {
            if g >= 2 {
                v[g - 2] = C64::new(1.0, 0.0);
            }
            v[g - 1] += curve.lambda_at(2 * g - 1) + b;
        }
        TimeDirection::Mkdv => {
            if g >= 2 {
                v[g - 2] = C64::new(-4.0, 0.0);
            }
            v[g - 1] += curve.lambda_at(2 * g) * 2.0 + b * 6.0;
        }
    }
    Ok(v)
}

/// Flows along the time direction by `delta_t`, `steps` reported intervals.
pub fn t_flow(
    curve: &HyperellipticCurve,
    divisor: &Divisor,
    r: usize,
    delta_t: f64,
    steps: usize,
    kind: TimeDirection,
) -> Result<Vec<FlowState>> {
    let dir = t_direction(curve, r, kind)?;
    flow_direction(curve, divisor, &dir, delta_t, steps + 1, None, &FlowOptions::default())
}

/// `max_j |q_t + 6 q² q_s + q_sss|` on three time slices with centered differences.
pub fn mkdv_residual_grid(q_minus: &[C64], q_center: &[C64], q_plus: &[C64], ds: f64, dt: f64) -> f64 {
    let n = q_center.len();
    let mut worst = 0.0f64;
    for j in 2..n.saturating_sub(2) {
        let q = q_center[j];
        let qs = (q_center[j + 1] - q_center[j - 1]) / (2.0 * ds);
        let qsss = (q_center[j + 2] - q_center[j + 1] * 2.0 + q_center[j - 1] * 2.0 - q_center[j - 2])
            / (2.0 * ds * ds * ds);
        let qt = (q_plus[j] - q_minus[j]) / (2.0 * dt);
        worst = worst.max((qt + q * q * qs * 6.0 + qsss).norm());
    }
    worst
}

/// Half curvature `q(s, t)` on `n_grid` points spaced `ds` for `t ∈ {−dt, 0, dt}`.
pub fn mkdv_slices(
    curve: &HyperellipticCurve,
    r: usize,
    divisor0: &Divisor,
    n_grid: usize,
    ds: f64,
    dt: f64,
    kind: TimeDirection,
) -> Result<[Vec<C64>; 3]> {
    let dir = t_direction(curve, r, kind)?;
    let mut out: [Vec<C64>; 3] = Default::default();
    for (k, sgn) in [-1.0, 0.0, 1.0].iter().enumerate() {
        let d = if *sgn == 0.0 {
            divisor0.clone()
        } else {
            let st = flow_direction(curve, divisor0, &dir, sgn * dt, 2, None, &FlowOptions::fixed(4))?;
            st[1].divisor.clone()
        };
        let span = ds * (n_grid - 1) as f64;
        let (sample, _) = trace_soliton(curve, r, &d, span, n_grid, &FlowOptions::fixed(2))?;
        out[k] = sample.q;
    }
    Ok(out)
}

/// MKdV residual of the traced soliton; requires `g ≥ 2`.
pub fn mkdv_residual(
    curve: &HyperellipticCurve,
    r: usize,
    divisor0: &Divisor,
    n_grid: usize,
    ds: f64,
    dt: f64,
    kind: TimeDirection,
) -> Result<f64> {
    if curve.genus() < 2 {
        return Err(Error::InvalidInput("the MKdV check needs genus >= 2".into()));
    }
    let [m, c, p] = mkdv_slices(curve, r, divisor0, n_grid, ds, dt, kind)?;
    Ok(mkdv_residual_grid(&m, &c, &p, ds, dt))
}

/// Reduced divisor of `D + (b_r, 0)`, whose Abel image is `u(D) + ω_r` modulo the lattice.
pub fn shift_by_half_period(curve: &HyperellipticCurve, divisor: &Divisor, r: usize) -> Result<Divisor> {
    let b = curve.branch_point(r)?;
    let xs = divisor.xs();
    let ys = divisor.ys();
    let u = divisor.f_poly();
    let v = poly::interpolate(&xs, &ys);
    let ub = poly::horner(&u, b);
    if ub.norm() <= 1e-14 * (1.0 + b.norm()) {
        return Err(Error::BranchPointCollision { r, x: b });
    }
    let vb = poly::horner(&v, b);
    let v2 = poly::add(&v, &poly::scale(&u, -vb / ub));
    let u2 = poly::mul(&u, &[-b, C64::new(1.0, 0.0)]);
    let num = poly::add(curve.lambda(), &poly::scale(&poly::mul(&v2, &v2), C64::new(-1.0, 0.0)));
    let (u3, _) = poly::div_rem(&num, &u2);
    let u3 = poly::trim(u3);
    let lead = *u3.last().unwrap();
    let u3 = poly::scale(&u3, C64::new(1.0, 0.0) / lead);
    let (_, v3) = poly::div_rem(&v2, &u3);
    let v3 = poly::scale(&v3, C64::new(-1.0, 0.0));
    let mut roots = poly::roots(&u3);
    poly::sort_lex(&mut roots);
    let pts: Vec<CurvePoint> = roots.iter().map(|&x| CurvePoint::new(x, poly::horner(&v3, x))).collect();
    let d = Divisor::from_points_unchecked(pts);
    for p in d.points() {
        if curve.residual(p) > 1e-8 {
            return Err(Error::InvalidDivisor(format!(
                "half-period shift left the curve (residual {:e})",
                curve.residual(p)
            )));
        }
    }
    Ok(d)
}
