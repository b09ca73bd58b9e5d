//! Period matrices of y² = x⁵ − 5x³ + 4x and the checks they satisfy.

use loopsoliton::periods::compute_periods;
use loopsoliton::HyperellipticCurve;

fn main() -> loopsoliton::Result<()> {
    let curve = HyperellipticCurve::from_real(&[0.0, 4.0, 0.0, -5.0, 0.0, 1.0])?;
    let p = compute_periods(&curve)?;
    let b: Vec<String> = curve.branch_points().iter().map(|z| z.to_string()).collect();
    println!("branch points {}", b.join(", "));
    println!("omega' = {}", p.omega1);
    println!("omega'' = {}", p.omega2);
    println!("eta' = {}", p.eta1);
    println!("eta'' = {}", p.eta2);
    println!("tau = {}", p.tau);
    let (leg, sign) = p.legendre_residual();
    println!("tau asymmetry {:.3e}", p.tau_asymmetry);
    println!("min eigenvalue of Im tau {:.6}", p.im_tau_min_eigenvalue);
    println!("Legendre relation residual {leg:.3e} (sign {sign})");
    Ok(())
}
