//! Quadrature rules for vector-valued complex integrands.

use crate::error::{Error, Result};
use crate::C64;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

struct Piece {
    a: f64,
    b: f64,
    value: Vec<C64>,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F>(f: &mut F, a: f64, b: f64, dim: usize, buf: &mut [C64]) -> Result<(Vec<C64>, f64)>
where
    F: FnMut(f64, &mut [C64]) -> Result<()>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut k = vec![C64::new(0.0, 0.0); dim];
    let mut g = vec![C64::new(0.0, 0.0); dim];
    f(c, buf)?;
    for d in 0..dim {
        k[d] += buf[d] * WGK[7];
        g[d] += buf[d] * WG[3];
    }
    for j in 0..7 {
        let dx = h * XGK[j];
        for x in [c - dx, c + dx] {
            f(x, buf)?;
            for d in 0..dim {
                k[d] += buf[d] * WGK[j];
                if j % 2 == 1 {
                    g[d] += buf[d] * WG[j / 2];
                }
            }
        }
    }
    let mut err = 0.0f64;
    for d in 0..dim {
        k[d] *= h;
        g[d] *= h;
        err = err.max((k[d] - g[d]).norm());
    }
    Ok((k, err))
}

/// Adaptive Gauss-Kronrod (7/15) integration of `f` over `[a, b]`.
///
/// `f(x, out)` writes `dim` values. Stops when the summed error estimate
/// falls below `max(abs_tol, rel_tol * |I|)`.
pub fn integrate<F>(
    mut f: F,
    a: f64,
    b: f64,
    dim: usize,
    abs_tol: f64,
    rel_tol: f64,
    max_pieces: usize,
) -> Result<Vec<C64>>
where
    F: FnMut(f64, &mut [C64]) -> Result<()>,
{
    let mut buf = vec![C64::new(0.0, 0.0); dim];
    let (v, e) = gk15(&mut f, a, b, dim, &mut buf)?;
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, value: v, error: e });
    let mut evaluations = 15;
    loop {
        let total_err: f64 = heap.iter().map(|p| p.error).sum();
        let mut total = vec![C64::new(0.0, 0.0); dim];
        for p in heap.iter() {
            for d in 0..dim {
                total[d] += p.value[d];
            }
        }
        let scale = total.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if total_err <= abs_tol.max(rel_tol * scale) {
            return Ok(total);
        }
        if heap.len() >= max_pieces {
            return Err(Error::QuadratureFailure {
                what: "adaptive Gauss-Kronrod".into(),
                nodes: evaluations,
                error: total_err,
            });
        }
        let worst = heap.pop().unwrap();
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            return Err(Error::QuadratureFailure {
                what: "adaptive Gauss-Kronrod (interval underflow)".into(),
                nodes: evaluations,
                error: total_err,
            });
        }
        let (v1, e1) = gk15(&mut f, worst.a, m, dim, &mut buf)?;
        let (v2, e2) = gk15(&mut f, m, worst.b, dim, &mut buf)?;
        evaluations += 30;
        heap.push(Piece { a: worst.a, b: m, value: v1, error: e1 });
        heap.push(Piece { a: m, b: worst.b, value: v2, error: e2 });
    }
}

/// Successive refinements agree to `tol`, or to the rounding floor of an
/// `n`-term sum whose terms have total magnitude `abs_scale`.
fn converged(prev: &[C64], cur: &[C64], abs_scale: f64, tol: f64, n: usize) -> bool {
    let scale = cur.iter().map(|z| z.norm()).fold(abs_scale, f64::max);
    let floor = 4.0 * f64::EPSILON * (n as f64).sqrt() * abs_scale;
    prev.iter().zip(cur).all(|(p, c)| (p - c).norm() <= (tol * scale).max(floor))
}

/// Largest change between two successive refinements.
fn max_change(prev: &[C64], cur: &[C64]) -> f64 {
    prev.iter().zip(cur).map(|(p, c)| (p - c).norm()).fold(0.0, f64::max)
}

/// Trapezoid rule for a `2π`-periodic integrand with node doubling.
pub fn periodic_trapezoid<F>(mut f: F, dim: usize, tol: f64, max_nodes: usize) -> Result<Vec<C64>>
where
    F: FnMut(f64, &mut [C64]),
{
    let two_pi = std::f64::consts::TAU;
    let mut buf = vec![C64::new(0.0, 0.0); dim];
    let mut sum = vec![C64::new(0.0, 0.0); dim];
    let mut abs_sum = 0.0;
    let mut n = 16usize;
    for j in 0..n {
        f(two_pi * j as f64 / n as f64, &mut buf);
        for d in 0..dim {
            sum[d] += buf[d];
            abs_sum += buf[d].norm();
        }
    }
    let mut prev: Vec<C64> = sum.iter().map(|s| s * (two_pi / n as f64)).collect();
    let mut change = f64::INFINITY;
    while n < max_nodes {
        for j in 0..n {
            f(two_pi * (2 * j + 1) as f64 / (2 * n) as f64, &mut buf);
            for d in 0..dim {
                sum[d] += buf[d];
                abs_sum += buf[d].norm();
            }
        }
        n *= 2;
        let h = two_pi / n as f64;
        let cur: Vec<C64> = sum.iter().map(|s| s * h).collect();
        if converged(&prev, &cur, abs_sum * h / dim as f64, tol, n) {
            return Ok(cur);
        }
        change = max_change(&prev, &cur);
        prev = cur;
    }
    Err(Error::QuadratureFailure {
        what: "periodic trapezoid".into(),
        nodes: n,
        error: change,
    })
}

/// Midpoint rule on `[0, π]` in the angle variable, doubling the node count.
///
/// With the substitution `x = c - h cos θ` this is Gauss-Chebyshev quadrature
/// for integrands carrying `1/sqrt((x-a)(b-x))` endpoint singularities.
pub fn chebyshev_midpoint<F>(mut f: F, dim: usize, tol: f64, max_nodes: usize) -> Result<Vec<C64>>
where
    F: FnMut(f64, &mut [C64]),
{
    let pi = std::f64::consts::PI;
    let mut buf = vec![C64::new(0.0, 0.0); dim];
    let mut eval = |n: usize| {
        let mut s = vec![C64::new(0.0, 0.0); dim];
        let mut a = 0.0;
        for j in 0..n {
            f(pi * (j as f64 + 0.5) / n as f64, &mut buf);
            for d in 0..dim {
                s[d] += buf[d];
                a += buf[d].norm();
            }
        }
        let h = pi / n as f64;
        (s.iter().map(|v| v * h).collect::<Vec<C64>>(), a * h / dim as f64)
    };
    let mut n = 32usize;
    let (mut prev, _) = eval(n);
    let mut change = f64::INFINITY;
    while n < max_nodes {
        n *= 2;
        let (cur, abs_scale) = eval(n);
        if converged(&prev, &cur, abs_scale, tol, n) {
            return Ok(cur);
        }
        change = max_change(&prev, &cur);
        prev = cur;
    }
    Err(Error::QuadratureFailure {
        what: "Gauss-Chebyshev midpoint".into(),
        nodes: n,
        error: change,
    })
}
