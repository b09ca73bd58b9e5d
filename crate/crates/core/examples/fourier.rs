//! Fourier coefficients of the figure-eight elastica: normalization, the
//! reality condition, curvature coefficients and energy.

use loopsoliton::loops::{
    curvature_coeffs, figure_eight_parameter, figure_eight_sample, fourier_coeffs, loop_energy, normalize_euclidean,
    reality_check, FourierLoop,
};

fn main() -> loopsoliton::Result<()> {
    println!("figure-eight parameter m = {}", figure_eight_parameter());
    let raw = fourier_coeffs(&figure_eight_sample(1024), 128)?;
    let n = normalize_euclidean(&raw)?;
    println!("phase fit residual {:.3e}, origin shift {:.6}", n.fit_residual, n.s_shift);
    for k in [1i64, -1, 3, -3, 5, -5] {
        println!("a_{k:<3} = {:+.15e}", n.loop_.coeff(k).re);
    }
    println!("reality residual {:.3e}", reality_check(&n.loop_));
    let cc = curvature_coeffs(&n.loop_, 1024)?;
    println!("curvature bilinear discrepancy {:.3e} (sign {})", cc.discrepancy, cc.sign);
    println!("energy at length 2pi: figure-eight {:.12}", loop_energy(&n.loop_, 1024)?);
    println!("energy at length 2pi: circle       {:.12}", loop_energy(&FourierLoop::circle(), 64)?);
    Ok(())
}
