//! Kleinian sigma, zeta and wp at the Abel image of a divisor, and the two
//! routes to the al functions.

use loopsoliton::dynamics::abel_map_divisor;
use loopsoliton::kleinian::{al_divisor, GammaConvention};
use loopsoliton::{Divisor, HyperellipticCurve, Sheet, SigmaContext, C64};

fn main() -> loopsoliton::Result<()> {
    let curve = HyperellipticCurve::from_real(&[0.0, 4.0, 0.0, -5.0, 0.0, 1.0])?;
    let ctx = SigmaContext::from_curve(&curve)?;
    let d = Divisor::from_x(&curve, &[C64::new(0.5, 0.8), C64::new(-0.6, -0.9)], &[Sheet::Plus, Sheet::Plus])?;
    let u = abel_map_divisor(&curve, &d)?;
    println!("u = ({}, {})", u.u[0], u.u[1]);
    println!("sigma(u) = {}", ctx.sigma(&u.u)?);
    let z = ctx.zeta_all(&u.u)?;
    println!("zeta(u) = ({}, {})", z[0], z[1]);
    let xs = d.xs();
    println!("wp_22 = {}  (x1 + x2 = {})", ctx.wp(&u.u, 2, 2)?, xs[0] + xs[1]);
    println!("wp_12 = {}  (-x1 x2 = {})", ctx.wp(&u.u, 1, 2)?, -xs[0] * xs[1]);
    for r in 1..=5 {
        let a = ctx.al_sigma(&u.u, r)?;
        let b = al_divisor(&curve, &d, r, GammaConvention::Curve)?;
        println!("al_{r}: sigma route {a:.10}  divisor route {b:.10}  ratio {:.10}", a / b);
    }
    Ok(())
}
