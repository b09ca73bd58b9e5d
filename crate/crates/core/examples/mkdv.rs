//! Half curvature q(s, t) of a genus-two soliton and its MKdV residual on
//! two grids, in both candidate time directions.

use loopsoliton::dynamics::{mkdv_residual, TimeDirection};
use loopsoliton::relations::mkdv_divisor;
use loopsoliton::HyperellipticCurve;

fn main() -> loopsoliton::Result<()> {
    let curve = HyperellipticCurve::from_real(&[0.0, 4.0, 0.0, -5.0, 0.0, 1.0])?;
    let d = mkdv_divisor(&curve).expect("reference divisor is clear of the branch points");
    let dt = 1e-4;
    for kind in [TimeDirection::Mkdv, TimeDirection::Literal] {
        let coarse = mkdv_residual(&curve, 5, &d, 11, 2e-3, dt, kind)?;
        let fine = mkdv_residual(&curve, 5, &d, 21, 1e-3, dt, kind)?;
        println!("{kind:?}: ds=2e-3 {coarse:.3e}  ds=1e-3 {fine:.3e}  order {:.2}", (coarse / fine).log2());
    }
    Ok(())
}
