//! Riemann theta values on a genus-two period matrix: parity and a lattice shift.

use loopsoliton::periods::compute_periods;
use loopsoliton::theta::{Theta, ThetaChar};
use loopsoliton::{HyperellipticCurve, C64};
use std::f64::consts::PI;

fn main() -> loopsoliton::Result<()> {
    let curve = HyperellipticCurve::from_real(&[0.0, 4.0, 0.0, -5.0, 0.0, 1.0])?;
    let tau = compute_periods(&curve)?.tau_symmetric();
    let th = Theta::new(&tau)?;
    let zero = ThetaChar::zero(2);
    let z = [C64::new(0.2, 0.1), C64::new(-0.15, 0.05)];
    let v = th.value(&z, &zero, 1e-15)?;
    let minus = th.value(&[-z[0], -z[1]], &zero, 1e-15)?;
    println!("theta(z)  = {v}");
    println!("theta(-z) = {minus}");

    // θ(z + τe_1) = exp(−iπτ_11 − 2πi z_1) θ(z)
    let w = [z[0] + tau[(0, 0)], z[1] + tau[(1, 0)]];
    let factor = (C64::new(0.0, -PI) * tau[(0, 0)] - C64::new(0.0, 2.0 * PI) * z[0]).exp();
    println!("quasi-periodicity residual {:.3e}", (th.value(&w, &zero, 1e-15)? - factor * v).norm());

    let chr = ThetaChar::sigma_char(2);
    println!("sigma characteristic parity {}", chr.parity());
    Ok(())
}
