//! Winding loops Z(ns)/n: energy grows like n², and prime decimation
//! recovers the lower winding.

use loopsoliton::loops::{decimation_check, loop_energy, wind, FourierLoop};

fn main() -> loopsoliton::Result<()> {
    let circle = FourierLoop::circle();
    let e = loop_energy(&circle, 64)?;
    for n in 1..=5 {
        let w = wind(&circle, n);
        println!("n = {n}: energy {:.12}  ratio {:.12}", loop_energy(&w, 64 * n)?, loop_energy(&w, 64 * n)? / e);
    }
    for p in [2, 3, 5, 7] {
        println!("decimation p = {p}: residual {:.3e}", decimation_check(&circle, p, 2)?);
    }
    Ok(())
}
