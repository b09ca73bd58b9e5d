//! Closed loops as Fourier series, winding loops and partition sums.
//!
//! A loop of period 1 is stored as `Z(s) = Σ_n a_n e^{2πins} / √(2π)` for
//! `n ∈ [−N, N]`. Loops built from samples are rescaled to unit speed, so a
//! closed arclength loop of length `L` is stored as `Z(Ls)/L`.

use crate::dynamics::LoopSample;
use crate::error::{Error, Result};
use crate::numeric::dd::{Dd, DdComplex};
use crate::numeric::{elliptic, spectral};
use crate::relations::{self, IdentityReport};
use crate::C64;
use std::f64::consts::PI;

/// `√(2π)`.
pub const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

/// Default number of stored harmonics on each side.
pub const DEFAULT_HARMONICS: usize = 256;

#[derive(Clone, Debug, PartialEq)]
pub struct FourierLoop {
    n_max: usize,
    coeffs: Vec<C64>,
}

impl FourierLoop {
    pub fn zeros(n_max: usize) -> Self {
        FourierLoop {
            n_max,
            coeffs: vec![C64::default(); 2 * n_max + 1],
        }
    }

    /// Loop with the given `(n, a_n)` pairs and all other coefficients zero.
    pub fn from_pairs(pairs: &[(i64, C64)]) -> Self {
        let n_max = pairs.iter().map(|(n, _)| n.unsigned_abs() as usize).max().unwrap_or(0);
        let mut l = FourierLoop::zeros(n_max);
        for &(n, a) in pairs {
            l.set(n, a);
        }
        l
    }

    /// Unit-speed circle of circumference 1: `a_1 = 1/√(2π)`.
    pub fn circle() -> Self {
        FourierLoop::from_pairs(&[(1, C64::new(1.0 / SQRT_2PI, 0.0))])
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn coeff(&self, n: i64) -> C64 {
        if n.unsigned_abs() as usize > self.n_max {
            C64::default()
        } else {
            self.coeffs[(n + self.n_max as i64) as usize]
        }
    }

    pub fn set(&mut self, n: i64, a: C64) {
        assert!(n.unsigned_abs() as usize <= self.n_max, "harmonic {n} outside the stored range");
        self.coeffs[(n + self.n_max as i64) as usize] = a;
    }

    /// `(n, a_n)` for `n = −N..=N`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, C64)> + '_ {
        let n0 = self.n_max as i64;
        self.coeffs.iter().enumerate().map(move |(k, &a)| (k as i64 - n0, a))
    }

    /// `d^order Z / ds^order` at `s`.
    pub fn eval_derivative(&self, s: f64, order: u32) -> C64 {
        let mut z = C64::default();
        for (n, a) in self.iter() {
            if a == C64::default() {
                continue;
            }
            let w = C64::new(0.0, 2.0 * PI * n as f64);
            z += a * w.powu(order) * C64::from_polar(1.0, 2.0 * PI * n as f64 * s);
        }
        z / SQRT_2PI
    }

    pub fn eval(&self, s: f64) -> C64 {
        self.eval_derivative(s, 0)
    }

    /// `m + 1` samples at `s = j/m` with `Z`, `Z'` and `q = Z''/(2iZ')`.
    pub fn sample(&self, m: usize) -> LoopSample {
        let mut out = LoopSample::default();
        for j in 0..=m {
            let s = j as f64 / m as f64;
            let d1 = self.eval_derivative(s, 1);
            let d2 = self.eval_derivative(s, 2);
            out.s.push(s);
            out.z.push(self.eval(s));
            out.dz.push(d1);
            out.q.push(d2 / d1 / C64::new(0.0, 2.0));
        }
        out
    }

    /// `∮|Z'|² ds = 2π Σ n²|a_n|²`.
    pub fn speed_integral(&self) -> f64 {
        2.0 * PI * self.iter().map(|(n, a)| (n * n) as f64 * a.norm_sqr()).sum::<f64>()
    }

    /// `e^{iθ} Z + w`.
    pub fn euclidean(&self, theta: f64, w: C64) -> Self {
        let mut l = self.clone();
        let rot = C64::from_polar(1.0, theta);
        for c in &mut l.coeffs {
            *c *= rot;
        }
        l.set(0, l.coeff(0) + w * SQRT_2PI);
        l
    }

    /// `Z(s + s0)`.
    pub fn shifted(&self, s0: f64) -> Self {
        let mut l = self.clone();
        for (k, c) in l.coeffs.iter_mut().enumerate() {
            let n = k as i64 - self.n_max as i64;
            *c *= C64::from_polar(1.0, 2.0 * PI * n as f64 * s0);
        }
        l
    }

    /// Largest `|a_n|` at the two outermost harmonics, a truncation estimate.
    pub fn tail(&self) -> f64 {
        let n = self.n_max as i64;
        self.coeff(n).norm().max(self.coeff(-n).norm())
    }
}

/// Fourier coefficients of a closed arclength sample (both period ends
/// included, uniform grid), rescaled to period 1 and unit speed.
pub fn fourier_coeffs(sample: &LoopSample, n: usize) -> Result<FourierLoop> {
    let len = sample.len();
    if len < 4 {
        return Err(Error::InvalidInput("loop sample too short".into()));
    }
    let m = len - 1;
    let scale = sample.z.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let gap = (sample.z[m] - sample.z[0]).norm();
    if gap > 1e-6 * scale {
        return Err(Error::NotClosed(gap));
    }
    let period = sample.s[m] - sample.s[0];
    if !(period > 0.0) {
        return Err(Error::InvalidInput("non-increasing loop parameter".into()));
    }
    let n = n.min((m - 1) / 2);
    let c = spectral::forward(&sample.z[..m]);
    let mut l = FourierLoop::zeros(n);
    // s_0 may be nonzero: a_n carries e^{-2πin s_0/L}
    let s0 = sample.s[0] / period;
    for k in -(n as i64)..=(n as i64) {
        let slot = k.rem_euclid(m as i64) as usize;
        let phase = C64::from_polar(1.0, -2.0 * PI * k as f64 * s0);
        l.set(k, c[slot] * phase * SQRT_2PI / period);
    }
    Ok(l)
}

/// A loop moved to `a_0 = 0` with real coefficients.
#[derive(Clone, Debug)]
pub struct NormalizedLoop {
    pub loop_: FourierLoop,
    /// The removed translation coefficient.
    pub a0: C64,
    /// Unimodular `c` with `conj(a_n) = c a_n` before normalization.
    pub c: C64,
    /// Parameter shift applied when the original origin was not symmetric.
    pub s_shift: f64,
    pub fit_residual: f64,
}

fn phase_fit(l: &FourierLoop) -> (C64, f64) {
    let mut s = C64::default();
    let mut mass = 0.0;
    for (n, a) in l.iter() {
        if n != 0 {
            s += a.conj() * a.conj();
            mass += a.norm_sqr();
        }
    }
    if s.norm() == 0.0 || mass == 0.0 {
        return (C64::new(1.0, 0.0), f64::INFINITY);
    }
    let c = s / s.norm();
    let mut err = 0.0;
    for (n, a) in l.iter() {
        if n != 0 {
            err += (a.conj() - c * a).norm_sqr();
        }
    }
    (c, (err / mass).sqrt())
}

/// Removes `a_0` and the global phase so that the coefficients become real.
///
/// When no phase fits at the given origin, the origin is searched over a grid
/// refined by golden sections.
pub fn normalize_euclidean(l: &FourierLoop) -> Result<NormalizedLoop> {
    if l.iter().all(|(n, a)| n == 0 || a.norm() == 0.0) {
        return Err(Error::InvalidInput("loop has no nonzero harmonic".into()));
    }
    let a0 = l.coeff(0);
    let mut base = l.clone();
    base.set(0, C64::default());
    let (mut c, mut res) = phase_fit(&base);
    let mut shift = 0.0;
    if res > 1e-6 {
        let grid = 8 * l.n_max().max(4);
        let mut best = (f64::INFINITY, 0.0);
        for j in 0..grid {
            let s0 = j as f64 / grid as f64;
            let r = phase_fit(&base.shifted(s0)).1;
            if r < best.0 {
                best = (r, s0);
            }
        }
        let h = 1.0 / grid as f64;
        let (mut lo, mut hi) = (best.1 - h, best.1 + h);
        let gr = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..80 {
            let x1 = hi - gr * (hi - lo);
            let x2 = lo + gr * (hi - lo);
            if phase_fit(&base.shifted(x1)).1 < phase_fit(&base.shifted(x2)).1 {
                hi = x2;
            } else {
                lo = x1;
            }
        }
        shift = 0.5 * (lo + hi);
        base = base.shifted(shift);
        let fit = phase_fit(&base);
        c = fit.0;
        res = fit.1;
        if res > 1e-6 {
            return Err(Error::NoConsistentPhase(res));
        }
    }
    let k = c.sqrt();
    let mut out = base.clone();
    for (n, a) in base.iter() {
        out.set(n, a * k);
    }
    Ok(NormalizedLoop {
        loop_: out,
        a0,
        c,
        s_shift: shift,
        fit_residual: res,
    })
}

/// `max_n |2π Σ_m m(n+m) a_m a_{n+m} − δ_{n,0}|` over the stored range.
pub fn reality_check(l: &FourierLoop) -> f64 {
    reality_bilinear(l, |_, m, nm| (m * nm) as f64)
}

/// The same sum with the weight `n(n+m)` as printed; it cannot reach `1` at `n = 0`.
pub fn reality_check_printed(l: &FourierLoop) -> f64 {
    reality_bilinear(l, |n, _, nm| (n * nm) as f64)
}

fn reality_bilinear(l: &FourierLoop, w: impl Fn(i64, i64, i64) -> f64) -> f64 {
    let big = 2 * l.n_max() as i64;
    let mut worst = 0.0f64;
    for n in -big..=big {
        let mut s = C64::default();
        for (m, a) in l.iter() {
            let b = l.coeff(n + m);
            if b != C64::default() {
                s += a * b * w(n, m, n + m);
            }
        }
        let target = if n == 0 { 1.0 } else { 0.0 };
        worst = worst.max((s * 2.0 * PI - target).norm());
    }
    worst
}

/// Curvature coefficients `κ_n` of `κ(s) = (1/i)∂_s log ∂_s Z = Σ κ_n e^{2πins}`.
#[derive(Clone, Debug)]
pub struct CurvatureComparison {
    /// `n = −N..=N`.
    pub harmonics: Vec<i64>,
    pub direct: Vec<C64>,
    /// `4π² Σ_m (n+m)² m a_m a_{n+m}`.
    pub bilinear: Vec<C64>,
    /// Overall sign relating the two, fixed on the unit circle.
    pub sign: f64,
    pub discrepancy: f64,
}

fn curvature_bilinear(l: &FourierLoop, n: i64) -> C64 {
    let mut s = C64::default();
    for (m, a) in l.iter() {
        let b = l.coeff(n + m);
        if b != C64::default() {
            s += a * b * ((n + m) * (n + m) * m) as f64;
        }
    }
    s * 4.0 * PI * PI
}

fn curvature_direct(l: &FourierLoop, grid: usize) -> Result<Vec<C64>> {
    let mut k = Vec::with_capacity(grid);
    for j in 0..grid {
        let s = j as f64 / grid as f64;
        let d1 = l.eval_derivative(s, 1);
        if d1.norm() < 1e-12 {
            return Err(Error::ZeroSpeed(d1.norm()));
        }
        k.push(l.eval_derivative(s, 2) / d1 / C64::new(0.0, 1.0));
    }
    Ok(spectral::forward(&k))
}

/// Sign between the direct and bilinear curvature coefficients on the unit circle.
pub fn curvature_sign() -> f64 {
    let c = FourierLoop::circle();
    let direct = curvature_direct(&c, 16).expect("circle has unit speed")[0];
    let bil = curvature_bilinear(&c, 0);
    if (direct / bil).re >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Compares the direct curvature coefficients with the bilinear formula on a
/// normalized unit-speed loop.
pub fn curvature_coeffs(l: &FourierLoop, grid: usize) -> Result<CurvatureComparison> {
    let grid = grid.max(4 * l.n_max() + 2);
    let c = curvature_direct(l, grid)?;
    let sign = curvature_sign();
    let n = l.n_max() as i64;
    let mut out = CurvatureComparison {
        harmonics: Vec::new(),
        direct: Vec::new(),
        bilinear: Vec::new(),
        sign,
        discrepancy: 0.0,
    };
    for k in -n..=n {
        let d = c[k.rem_euclid(grid as i64) as usize];
        let b = curvature_bilinear(l, k);
        out.discrepancy = out.discrepancy.max((d - b * sign).norm());
        out.harmonics.push(k);
        out.direct.push(d);
        out.bilinear.push(b);
    }
    Ok(out)
}

/// `Z^{(n)}(s) = Z(ns)/n`: `a_k / n` moves to harmonic `nk`.
pub fn wind(l: &FourierLoop, n: usize) -> FourierLoop {
    assert!(n >= 1, "winding number must be at least 1");
    let mut out = FourierLoop::zeros(l.n_max() * n);
    for (k, a) in l.iter() {
        out.set(k * n as i64, a / n as f64);
    }
    out
}

/// Winding on a uniform closed sample: `n·m + 1` points over the same period.
pub fn wind_sample(sample: &LoopSample, n: usize) -> LoopSample {
    assert!(n >= 1, "winding number must be at least 1");
    let m = sample.len() - 1;
    let h = (sample.s[m] - sample.s[0]) / (m * n) as f64;
    let mut out = LoopSample::default();
    for j in 0..=n * m {
        let k = if j == n * m { m } else { j % m };
        out.s.push(sample.s[0] + j as f64 * h);
        out.z.push(sample.z[k] / n as f64);
        out.dz.push(sample.dz[k]);
        out.q.push(sample.q.get(k).copied().unwrap_or_default() * n as f64);
    }
    out
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Worst residual of `Σ_j Z^{(pn)}((s+j)/p) = Z^{(n)}(s)` and
/// `p Z^{(pn)}(s) = Z^{(n)}(ps)` on a 64-point grid.
pub fn decimation_check(l: &FourierLoop, p: u64, n: usize) -> Result<f64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n == 0 {
        return Err(Error::InvalidInput("winding number must be at least 1".into()));
    }
    let wn = wind(l, n);
    let wpn = wind(l, p as usize * n);
    let mut worst = 0.0f64;
    for j in 0..64 {
        let s = j as f64 / 64.0;
        let mut sum = C64::default();
        for k in 0..p {
            sum += wpn.eval((s + k as f64) / p as f64);
        }
        worst = worst.max((sum - wn.eval(s)).norm());
        worst = worst.max((wpn.eval(s) * p as f64 - wn.eval(p as f64 * s)).norm());
    }
    Ok(worst)
}

/// Energy `∮ ½κ² ds` of a unit-speed period-1 loop, reported for total length `2π`.
pub fn loop_energy(l: &FourierLoop, grid: usize) -> Result<f64> {
    let grid = grid.max(4 * l.n_max() + 2);
    Ok(relations::energy(&l.sample(grid))? / (2.0 * PI))
}

/// Unit-speed circle of circumference `length`, `m + 1` samples.
pub fn circle_sample(m: usize, length: f64) -> LoopSample {
    let rad = length / (2.0 * PI);
    let mut out = LoopSample::default();
    for j in 0..=m {
        let s = length * j as f64 / m as f64;
        let e = C64::from_polar(1.0, s / rad);
        out.s.push(s);
        out.z.push(e * rad);
        out.dz.push(e * C64::new(0.0, 1.0));
        out.q.push(C64::new(0.5 / rad, 0.0));
    }
    out
}

/// Parameter `m = k²` closing the figure-eight elastica, `2E(m) = K(m)`,
/// found by bisection on the closure gap `8E − 4K` of one period.
pub fn figure_eight_parameter() -> f64 {
    let gap = |m: f64| 2.0 * elliptic::ellip_e(m) - elliptic::ellip_k(m);
    let (mut lo, mut hi) = (0.5, 0.99);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if gap(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-17 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Figure-eight elastica with `κ(s) = 2k cn(s, k)` over one period `4K`,
/// `m + 1` samples. `Z' = (2dn² − 1) + 2ik sn dn`, integrated spectrally.
pub fn figure_eight_sample(m: usize) -> LoopSample {
    let mm = figure_eight_parameter();
    let k = mm.sqrt();
    let len = 4.0 * elliptic::ellip_k(mm);
    let mut dz = Vec::with_capacity(m);
    let mut q = Vec::with_capacity(m);
    for j in 0..m {
        let s = len * j as f64 / m as f64;
        let (sn, cn, dn) = elliptic::jacobi(s, mm);
        dz.push(C64::new(2.0 * dn * dn - 1.0, 2.0 * k * sn * dn));
        q.push(C64::new(k * cn, 0.0));
    }
    let c = spectral::forward(&dz);
    let mut zc = vec![C64::default(); m];
    for (slot, ck) in c.iter().enumerate() {
        let f = spectral::frequency(slot, m);
        if f != 0 && !(m % 2 == 0 && slot == m / 2) {
            zc[slot] = ck / C64::new(0.0, 2.0 * PI * f as f64 / len);
        }
    }
    let z = spectral::inverse(&zc);
    let mut out = LoopSample::default();
    for j in 0..=m {
        let i = j % m;
        out.s.push(len * j as f64 / m as f64);
        out.z.push(z[i]);
        out.dz.push(dz[i]);
        out.q.push(q[i]);
    }
    out
}

/// Closed-form energy `8E(2m − 1)` of [`figure_eight_sample`] (length `4K`).
pub fn figure_eight_energy() -> f64 {
    let m = figure_eight_parameter();
    8.0 * elliptic::ellip_e(m) * (2.0 * m - 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionMode {
    Direct,
    Theta,
    Poisson,
}

#[derive(Clone, Copy, Debug)]
pub struct PartitionResult {
    pub beta: C64,
    pub e_a: f64,
    pub value_direct: C64,
    pub value_theta: C64,
    pub value_poisson: C64,
}

impl PartitionResult {
    /// Largest relative disagreement between the three modes.
    pub fn spread(&self) -> f64 {
        let v = [self.value_direct, self.value_theta, self.value_poisson];
        let scale = v.iter().map(|z| z.norm()).fold(f64::MIN_POSITIVE, f64::max);
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in i + 1..3 {
                worst = worst.max((v[i] - v[j]).norm() / scale);
            }
        }
        worst
    }
}

fn dd_c(z: C64) -> DdComplex {
    DdComplex::from_c64(z)
}

/// `Σ_{n≥1} e^{−a n²}` in double-double, `a` given as a double-double.
fn gauss_tail(a: DdComplex) -> DdComplex {
    let mut sum = DdComplex::default();
    let re = a.re.to_f64();
    let mut n: u64 = 1;
    loop {
        let n2 = Dd::from_f64((n * n) as f64);
        let t = DdComplex::new(-(a.re * n2), -(a.im * n2)).exp();
        sum = sum + t;
        let tn = t.norm_sqr().to_f64().sqrt();
        let sn = sum.norm_sqr().to_f64().sqrt();
        if (tn <= 1e-34 * sn && re * (n * n) as f64 > 1.0) || n > 100_000 {
            break;
        }
        n += 1;
    }
    sum
}

/// `Z[β] = Σ_{n≥1} e^{−βn²E_a}` in one mode.
///
/// `Theta` evaluates `½(θ(iβE_a/π) − 1)` and `Poisson` the exact transform
/// `√(π/a) (½ + Σ_{k≥1} e^{−π²k²/a}) − ½`, `a = βE_a`, both in double-double.
pub fn partition_value(e_a: f64, beta: C64, mode: PartitionMode) -> Result<C64> {
    let a = beta * e_a;
    if !(a.re > 0.0) {
        return Err(Error::DivergentSum(a.re));
    }
    Ok(match mode {
        PartitionMode::Direct => {
            let mut sum = C64::default();
            let mut n = 1u64;
            loop {
                let t = (-a * (n * n) as f64).exp();
                sum += t;
                if (t.norm() <= 1e-18 * sum.norm() && a.re * (n * n) as f64 > 1.0) || n > 100_000 {
                    break;
                }
                n += 1;
            }
            sum
        }
        PartitionMode::Theta => {
            // θ(z) = Σ e^{iπ z n²}, z = iβE_a/π; iπz = −βE_a
            let pi = DdComplex::new(Dd::PI, Dd::ZERO);
            let z = (dd_c(beta) * DdComplex::new(Dd::ZERO, Dd::from_f64(e_a))) / pi;
            let ipz = DdComplex::new(Dd::ZERO, Dd::ONE) * pi * z;
            let half_theta_minus_one = gauss_tail(-ipz);
            half_theta_minus_one.to_c64()
        }
        PartitionMode::Poisson => {
            let ad = dd_c(beta) * DdComplex::new(Dd::from_f64(e_a), Dd::ZERO);
            let pi = DdComplex::new(Dd::PI, Dd::ZERO);
            let root = (pi / ad).sqrt();
            let tail = gauss_tail(pi * pi / ad);
            let half = DdComplex::new(Dd::from_f64(0.5), Dd::ZERO);
            (root * (half + tail) - half).to_c64()
        }
    })
}

pub fn partition_sum(e_a: f64, beta: C64) -> Result<PartitionResult> {
    Ok(PartitionResult {
        beta,
        e_a,
        value_direct: partition_value(e_a, beta, PartitionMode::Direct)?,
        value_theta: partition_value(e_a, beta, PartitionMode::Theta)?,
        value_poisson: partition_value(e_a, beta, PartitionMode::Poisson)?,
    })
}

/// The Poisson display with the `π` factors dropped, for comparison only.
pub fn partition_poisson_printed(e_a: f64, beta: C64) -> C64 {
    let a = beta * e_a;
    let mut s = C64::default();
    for n in 1..200u64 {
        s += (-C64::new((n * n) as f64, 0.0) / a).exp();
    }
    (C64::new(1.0, 0.0) / a).sqrt() * s + ((C64::new(1.0, 0.0) / a.sqrt()) - 1.0) * 0.5
}

/// `max |Z[β + 2πi/E_a] − Z[β]| / |Z[β]|` over the theta mode.
pub fn modular_residual(e_a: f64, beta: C64) -> Result<f64> {
    let v0 = partition_value(e_a, beta, PartitionMode::Theta)?;
    let v1 = partition_value(e_a, beta + C64::new(0.0, 2.0 * PI / e_a), PartitionMode::Theta)?;
    Ok((v1 - v0).norm() / v0.norm())
}

/// Loop checks: reality, curvature bilinear, decimation, energy scaling and `E_0`.
pub fn fourier_reports() -> Result<Vec<IdentityReport>> {
    let circle = FourierLoop::circle();
    let fig = normalize_euclidean(&fourier_coeffs(&figure_eight_sample(512), 96)?)?.loop_;
    let mut out = vec![
        IdentityReport::upper("circle_reality", &[reality_check(&circle)], 1e-12)
            .with_meta("printed_weight", format!("{:.3e}", reality_check_printed(&circle))),
        IdentityReport::upper("figure_eight_reality", &[reality_check(&fig)], 1e-6).with_meta("tail", format!("{:.3e}", fig.tail())),
    ];
    let cc = curvature_coeffs(&fig, 512)?;
    out.push(IdentityReport::upper("curvature_bilinear", &[cc.discrepancy], 1e-6).with_meta("sign", cc.sign));
    let mut dec = Vec::new();
    for p in [2u64, 3, 5] {
        dec.push(decimation_check(&fig, p, 1)?);
        dec.push(decimation_check(&circle, p, 2)?);
    }
    out.push(IdentityReport::upper("decimation", &dec, 1e-8));
    let e_circle = loop_energy(&circle, 64)?;
    let e_fig = loop_energy(&fig, 512)?;
    let mut scaling = Vec::new();
    for n in [2usize, 3] {
        scaling.push((loop_energy(&wind(&circle, n), 64)? / (n * n) as f64 - e_circle).abs() / e_circle);
        scaling.push((loop_energy(&wind(&fig, n), 512 * n)? / (n * n) as f64 - e_fig).abs() / e_fig);
    }
    out.push(IdentityReport::upper("energy_scaling", &scaling, 1e-9));
    let e0 = relations::energy(&circle_sample(64, 2.0 * PI))?;
    out.push(IdentityReport::upper("circle_energy", &[(e0 - PI).abs()], 1e-10));
    let fig_len = 4.0 * elliptic::ellip_k(figure_eight_parameter());
    out.push(
        IdentityReport::upper("figure_eight_energy", &[(e_fig * 2.0 * PI / fig_len - figure_eight_energy()).abs() / figure_eight_energy()], 1e-8)
            .with_meta("E1_2pi", format!("{e_fig:.12}")),
    );
    Ok(out)
}

/// Partition-sum agreement over `βE ∈ [0.1, 10]` and modular periodicity.
pub fn partition_reports() -> Result<Vec<IdentityReport>> {
    let e_fig = figure_eight_energy() * 4.0 * elliptic::ellip_k(figure_eight_parameter()) / (2.0 * PI);
    let mut agree = Vec::new();
    let mut modular = Vec::new();
    for e_a in [PI, e_fig] {
        for k in 0..=20 {
            let be = 0.1 * 100f64.powf(k as f64 / 20.0);
            let beta = C64::new(be / e_a, 0.0);
            agree.push(partition_sum(e_a, beta)?.spread());
            agree.push(partition_sum(e_a, beta + C64::new(0.0, 0.3 / e_a))?.spread());
            modular.push(modular_residual(e_a, beta)?);
        }
    }
    Ok(vec![
        IdentityReport::upper("partition_modes", &agree, 1e-12),
        IdentityReport::upper("partition_modular", &modular, 1e-14),
    ])
}
