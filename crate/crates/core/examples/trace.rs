//! Traces a loop soliton Z' = ∏(b_r − x_i) along the u_g flow. On the
//! genus-one curve x(x − 1/2)(x − 2) with b = 0 the trace is unit speed.

use loopsoliton::dynamics::{trace_soliton, FlowOptions};
use loopsoliton::{Divisor, HyperellipticCurve, Sheet, C64};

fn main() -> loopsoliton::Result<()> {
    let curve = HyperellipticCurve::from_real(&[0.0, 1.0, -2.5, 1.0])?;
    let d = Divisor::from_x(&curve, &[C64::new(-1.0, 0.0)], &[Sheet::Plus])?;
    let (sample, _) = trace_soliton(&curve, 1, &d, 4.0, 21, &FlowOptions::default())?;
    println!("{:>6} {:>22} {:>22} {:>12}", "s", "Re Z", "Im Z", "|dZ|");
    for k in 0..sample.len() {
        println!(
            "{:6.2} {:22.15e} {:22.15e} {:12.9}",
            sample.s[k],
            sample.z[k].re,
            sample.z[k].im,
            sample.dz[k].norm()
        );
    }
    Ok(())
}
