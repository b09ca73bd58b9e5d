//! Partition sums Σ exp(−βn²E) by direct summation, theta function and
//! Poisson resummation, and their periodicity in Im β.

use loopsoliton::loops::{modular_residual, partition_sum};
use loopsoliton::C64;
use std::f64::consts::PI;

fn main() -> loopsoliton::Result<()> {
    let e = PI;
    for be in [0.1, 0.3, 1.0, 3.0, 10.0] {
        let r = partition_sum(e, C64::new(be / e, 0.0))?;
        println!(
            "beta E = {be:5.1}: direct {:.16e}  theta {:.16e}  poisson {:.16e}  spread {:.1e}",
            r.value_direct.re,
            r.value_theta.re,
            r.value_poisson.re,
            r.spread()
        );
    }
    let beta = C64::new(0.4, 0.1);
    println!("beta -> beta + 2 pi i / E: residual {:.3e}", modular_residual(e, beta)?);
    Ok(())
}
