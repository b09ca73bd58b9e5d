use loopsoliton::periods::{
    compute_periods, homology_basis, integrate_differential, intersection_matrix, CycleKind, DifferentialKind,
};
use loopsoliton::theta::{theta, Theta, ThetaChar};
use loopsoliton::{CMatrix, HyperellipticCurve, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn agm(mut a: f64, mut b: f64) -> f64 {
    while (a - b).abs() > 1e-16 * a {
        (a, b) = (0.5 * (a + b), (a * b).sqrt());
    }
    a
}

/// `∫_{-1}^{0} x^k dx / sqrt(x^3 - x)` with `x = -(1 + cos θ)/2`, where the
/// integrand becomes `x^k / sqrt(1 - x)`; composite Simpson on `[0, π]`.
fn cubic_cut_moment(k: i32) -> f64 {
    let n = 20_000;
    let h = PI / n as f64;
    let f = |t: f64| {
        let x = -0.5 * (1.0 + t.cos());
        x.powi(k) / (1.0 - x).sqrt()
    };
    let mut s = f(0.0) + f(PI);
    for j in 1..n {
        s += f(j as f64 * h) * if j % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

fn cubic() -> HyperellipticCurve {
    HyperellipticCurve::from_real(&[0.0, -1.0, 0.0, 1.0]).unwrap()
}

fn quintic() -> HyperellipticCurve {
    HyperellipticCurve::from_real(&[0.0, 4.0, 0.0, -5.0, 0.0, 1.0]).unwrap()
}

#[test]
fn genus_one_periods_match_agm() {
    let p = compute_periods(&cubic()).unwrap();
    let lemniscate = PI / agm(1.0, 2f64.sqrt());
    assert!((lemniscate - 2.622_057_554_292_119_8).abs() < 1e-12);
    let w1 = p.omega1[(0, 0)];
    let w2 = p.omega2[(0, 0)];
    assert!(((2.0 * w1.norm()) / lemniscate - 1.0).abs() < 1e-10, "{w1}");
    assert!(((2.0 * w2.norm()) / lemniscate - 1.0).abs() < 1e-10, "{w2}");
    // rectangular lattice: tau purely imaginary (here i)
    let tau = p.tau[(0, 0)];
    assert!(tau.re.abs() < 1e-12 && tau.im > 0.0);
    assert!((tau - C64::new(0.0, 1.0)).norm() < 1e-10);
}

#[test]
fn genus_one_second_kind_matches_moment_ratio() {
    let p = compute_periods(&cubic()).unwrap();
    let ratio = cubic_cut_moment(1) / cubic_cut_moment(0);
    assert!((cubic_cut_moment(0) / (PI / agm(1.0, 2f64.sqrt())) - 1.0).abs() < 1e-9);
    let want = p.omega1[(0, 0)] * ratio;
    assert!((p.eta1[(0, 0)] - want).norm() < 1e-9 * want.norm(), "{} vs {want}", p.eta1[(0, 0)]);
}

#[test]
fn lemniscate_cycle_integral_and_orientation() {
    let curve = cubic();
    let basis = homology_basis(&curve);
    let alpha = &basis[0];
    assert_eq!(alpha.kind, CycleKind::Alpha);
    let v = integrate_differential(&curve, alpha, DifferentialKind::First, 1).unwrap();
    // du = dx/(2y), so a full cycle around a cut gives the lemniscate constant
    assert!((v.norm() - 2.622_057_554_292_119_8).abs() < 1e-9, "{v}");
    let back = integrate_differential(&curve, &alpha.reversed(), DifferentialKind::First, 1).unwrap();
    assert!((v + back).norm() < 1e-14);
    let r = integrate_differential(&curve, alpha, DifferentialKind::Second, 1).unwrap();
    let rb = integrate_differential(&curve, &alpha.reversed(), DifferentialKind::Second, 1).unwrap();
    assert!((r + rb).norm() < 1e-14);
    assert!(integrate_differential(&curve, alpha, DifferentialKind::First, 2).is_err());
}

#[test]
fn homology_bases_are_symplectic() {
    for lambda in [
        vec![0.0, -1.0, 0.0, 1.0],
        vec![0.0, 4.0, 0.0, -5.0, 0.0, 1.0],
        vec![1.0, 2.0, -3.0, 0.5, -1.0, 0.7, 0.2, 1.0],
    ] {
        let curve = HyperellipticCurve::from_real(&lambda).unwrap();
        let g = curve.genus();
        let basis = homology_basis(&curve);
        assert_eq!(basis.len(), 2 * g);
        let m = intersection_matrix(&basis);
        for i in 0..2 * g {
            for j in 0..2 * g {
                let want = if i < g && j == i + g {
                    1
                } else if j < g && i == j + g {
                    -1
                } else {
                    0
                };
                assert_eq!(m[i][j], want, "g={g} ({i},{j})");
            }
        }
    }
}

#[test]
fn genus_two_invariants() {
    let p = compute_periods(&quintic()).unwrap();
    assert_eq!(p.tau.nrows(), 2);
    assert!(p.tau_asymmetry <= 1e-8);
    assert!(p.im_tau_min_eigenvalue > 0.0);
    let (leg, sign) = p.legendre_residual();
    assert!(leg <= 1e-8, "{leg}");
    assert_eq!(sign, -1.0);
}

#[test]
fn random_genus_two_curves() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..3 {
        let roots: Vec<C64> = (0..5)
            .map(|k| C64::new(-2.0 + k as f64 + rng.random_range(-0.2..0.2), rng.random_range(-0.8..0.8)))
            .collect();
        let curve = HyperellipticCurve::from_branch_points(&roots).unwrap();
        let p = compute_periods(&curve).unwrap();
        assert!(p.tau_asymmetry <= 1e-8);
        assert!(p.im_tau_min_eigenvalue > 0.0);
        assert!(p.legendre_residual().0 <= 1e-8);
    }
}

#[test]
fn translating_the_curve_keeps_tau() {
    let a = compute_periods(&quintic()).unwrap();
    let shifted: Vec<C64> = [-2.0, -1.0, 0.0, 1.0, 2.0].iter().map(|b| C64::new(b + 0.37, 0.0)).collect();
    let b = compute_periods(&HyperellipticCurve::from_branch_points(&shifted).unwrap()).unwrap();
    let diff = (&a.tau - &b.tau).iter().map(|z| z.norm()).fold(0.0, f64::max);
    assert!(diff < 1e-8, "{diff}");
    let z = vec![C64::default(); 2];
    let ta = theta(&z, &a.tau_symmetric(), &ThetaChar::zero(2), 1e-14).unwrap();
    let tb = theta(&z, &b.tau_symmetric(), &ThetaChar::zero(2), 1e-14).unwrap();
    assert!((ta.norm() - tb.norm()).abs() < 1e-6);
}

fn direct_theta1(z: C64, tau: C64) -> C64 {
    (-60..=60)
        .map(|n| {
            let n = n as f64;
            (C64::new(0.0, PI) * tau * n * n + C64::new(0.0, 2.0 * PI) * n * z).exp()
        })
        .sum()
}

#[test]
fn theta_genus_one_values() {
    let tau = CMatrix::from_element(1, 1, C64::new(0.0, 1.0));
    let v = theta(&[C64::default()], &tau, &ThetaChar::zero(1), 1e-15).unwrap();
    assert!((v - C64::new(1.086_434_811_213_308, 0.0)).norm() < 1e-13, "{v}");
    let tau2 = C64::new(0.3, 0.8);
    let t = CMatrix::from_element(1, 1, tau2);
    for z in [C64::new(0.1, 0.2), C64::new(-0.4, 0.05)] {
        let got = theta(&[z], &t, &ThetaChar::zero(1), 1e-15).unwrap();
        assert!((got - direct_theta1(z, tau2)).norm() < 1e-13);
    }
}

#[test]
fn theta_parity_and_quasi_periodicity() {
    let p = compute_periods(&quintic()).unwrap();
    let tau = p.tau_symmetric();
    let th = Theta::new(&tau).unwrap();
    let zero = ThetaChar::zero(2);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let z: Vec<C64> = (0..2).map(|_| C64::new(rng.random_range(-0.5..0.5), rng.random_range(-0.3..0.3))).collect();
        let v = th.value(&z, &zero, 1e-15).unwrap();
        let neg: Vec<C64> = z.iter().map(|x| -x).collect();
        assert!((th.value(&neg, &zero, 1e-15).unwrap() - v).norm() <= 1e-12 * (1.0 + v.norm()));
        let m = [1.0, -1.0];
        let tm: Vec<C64> = (0..2).map(|i| tau[(i, 0)] * m[0] + tau[(i, 1)] * m[1]).collect();
        let shifted: Vec<C64> = z.iter().zip(&tm).map(|(a, b)| a + b).collect();
        let mtm = tm[0] * m[0] + tm[1] * m[1];
        let mz = z[0] * m[0] + z[1] * m[1];
        let factor = (C64::new(0.0, -PI) * mtm - C64::new(0.0, 2.0 * PI) * mz).exp();
        let got = th.value(&shifted, &zero, 1e-15).unwrap();
        assert!((got - factor * v).norm() <= 1e-12 * (1.0 + (factor * v).norm()));
    }
}

#[test]
fn theta_cutoff_doubling() {
    let p = compute_periods(&quintic()).unwrap();
    let th = Theta::new(&p.tau_symmetric()).unwrap();
    let z = vec![C64::new(0.2, 0.1), C64::new(-0.1, 0.3)];
    let coarse = th.value(&z, &ThetaChar::zero(2), 1e-8).unwrap();
    let fine = th.value(&z, &ThetaChar::zero(2), 1e-16).unwrap();
    assert!((coarse - fine).norm() <= 1e-8 * (1.0 + fine.norm()));
}
