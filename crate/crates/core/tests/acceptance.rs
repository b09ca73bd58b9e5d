//! Acceptance checks, one PASS/FAIL line per criterion.
//!
//! Criterion 5 asks for the Schwarzian identity in its printed form, which does
//! not hold: the Schwarzian equals `−4℘_gg(u + ω_r) − 2λ_{2g} − 2b_r` instead.
//! Its line reports FAIL with both residuals and does not abort the run; any
//! other failure makes the process exit nonzero.

use loopsoliton::dynamics::TimeDirection;
use loopsoliton::loops::{
    circle_sample, decimation_check, figure_eight_sample, fourier_coeffs, loop_energy, modular_residual,
    normalize_euclidean, partition_sum, partition_value, reality_check, wind, FourierLoop, PartitionMode,
};
use loopsoliton::periods::{compute_periods, homology_basis, integrate_differential, DifferentialKind};
use loopsoliton::relations::{
    al_ratio_spread, energy, jacobian_samples, mkdv_divisor, random_divisors, random_divisors_in_disk, theta_checks,
    verify_conjugation, verify_diff_identity, verify_log_series, verify_miura_step, verify_periodicity,
    verify_schwarz_wp, verify_schwarz_wp_shifted, verify_sum_identity, IdentityReport,
};
use loopsoliton::theta::ThetaChar;
use loopsoliton::{dynamics, HyperellipticCurve, SigmaContext, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::Instant;

const SEED: u64 = 20;
const KNOWN_UNATTAINABLE: &[u32] = &[5];

// independent reference values, mpmath at 30 digits
const LEMNISCATE: f64 = 2.622_057_554_292_119_8;
const FIGURE_EIGHT_E_2PI: f64 = 8.947_659_844_827_463;
const GAUSS_SUM_A1: f64 = 0.386_318_602_413_326_08;
const GAUSS_SUM_A01: f64 = 2.302_495_608_198_964_3;

struct Line {
    id: u32,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn agm(mut a: f64, mut b: f64) -> f64 {
    while (a - b).abs() > 1e-16 * a {
        (a, b) = (0.5 * (a + b), (a * b).sqrt());
    }
    a
}

fn cubic() -> HyperellipticCurve {
    HyperellipticCurve::from_real(&[0.0, -1.0, 0.0, 1.0]).unwrap()
}

fn quintic() -> HyperellipticCurve {
    HyperellipticCurve::from_real(&[0.0, 4.0, 0.0, -5.0, 0.0, 1.0]).unwrap()
}

fn all_pass(reps: &[IdentityReport]) -> bool {
    reps.iter().all(|r| r.pass)
}

fn summary(reps: &[IdentityReport]) -> String {
    reps.iter().map(|r| format!("{}={:.2e}", r.id, r.max_residual)).collect::<Vec<_>>().join(" ")
}

fn c1() -> Line {
    let t = Instant::now();
    let curve = cubic();
    let p = compute_periods(&curve).unwrap();
    let oracle = PI / agm(1.0, 2f64.sqrt());
    let e1 = ((2.0 * p.omega1[(0, 0)].norm()) / oracle - 1.0).abs();
    let e2 = ((2.0 * p.omega2[(0, 0)].norm()) / oracle - 1.0).abs();
    let cut = integrate_differential(&curve, &homology_basis(&curve)[0], DifferentialKind::First, 1).unwrap();
    let ec = (cut.norm() - LEMNISCATE).abs();
    let secs = t.elapsed().as_secs_f64();
    Line {
        id: 1,
        name: "genus-one periods",
        pass: e1 <= 1e-10 && e2 <= 1e-10 && ec <= 1e-9 && secs < 5.0,
        detail: format!("omega1 {e1:.2e} omega2 {e2:.2e} cut {ec:.2e} time {secs:.2}s"),
    }
}

fn c2() -> Line {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut sym, mut eig, mut leg) = (0.0f64, f64::INFINITY, 0.0f64);
    for _ in 0..5 {
        let roots: Vec<C64> = (0..5)
            .map(|k| C64::new(-2.0 + k as f64 + rng.random_range(-0.25..0.25), rng.random_range(-0.8..0.8)))
            .collect();
        let p = compute_periods(&HyperellipticCurve::from_branch_points(&roots).unwrap()).unwrap();
        sym = sym.max(p.tau_asymmetry);
        eig = eig.min(p.im_tau_min_eigenvalue);
        leg = leg.max(p.legendre_residual().0);
    }
    let secs = t.elapsed().as_secs_f64();
    Line {
        id: 2,
        name: "genus-two period invariants",
        pass: sym <= 1e-8 && eig > 0.0 && leg <= 1e-8 && secs < 60.0,
        detail: format!("tau asym {sym:.2e} min eig Im tau {eig:.3} legendre {leg:.2e} time {secs:.2}s"),
    }
}

fn c3() -> Line {
    let ctx = SigmaContext::from_curve(&quintic()).unwrap();
    let reps = theta_checks(&ctx, 100, SEED, 1e-13).unwrap();
    // evenness and quasi-periodicity of the plain theta function, computed here
    let th = ctx.theta();
    let tau = th.tau().clone();
    let zero = ThetaChar::zero(2);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut even, mut quasi) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let z: Vec<C64> = (0..2).map(|_| C64::new(rng.random_range(-0.5..0.5), rng.random_range(-0.3..0.3))).collect();
        let v = th.value(&z, &zero, 1e-15).unwrap();
        let neg: Vec<C64> = z.iter().map(|x| -x).collect();
        even = even.max((th.value(&neg, &zero, 1e-15).unwrap() - v).norm() / (1.0 + v.norm()));
        let m = [rng.random_range(-1i32..=1) as f64, rng.random_range(-1i32..=1) as f64];
        let tm: Vec<C64> = (0..2).map(|i| tau[(i, 0)] * m[0] + tau[(i, 1)] * m[1]).collect();
        let w: Vec<C64> = z.iter().zip(&tm).map(|(a, b)| a + b).collect();
        let factor = (C64::new(0.0, -PI) * (tm[0] * m[0] + tm[1] * m[1])
            - C64::new(0.0, 2.0 * PI) * (z[0] * m[0] + z[1] * m[1]))
        .exp();
        let want = factor * v;
        quasi = quasi.max((th.value(&w, &zero, 1e-15).unwrap() - want).norm() / (1.0 + want.norm()));
    }
    Line {
        id: 3,
        name: "theta engine",
        pass: all_pass(&reps) && even <= 1e-12 && quasi <= 1e-12,
        detail: format!("{} even {even:.2e} quasi {quasi:.2e}", summary(&reps)),
    }
}

fn c4() -> Line {
    let mut worst = 0.0f64;
    for curve in [cubic(), quintic()] {
        let ctx = SigmaContext::from_curve(&curve).unwrap();
        let samples = jacobian_samples(&curve, &random_divisors(&curve, 8, SEED).unwrap()).unwrap();
        for r in 1..=curve.degree() {
            worst = worst.max(al_ratio_spread(&ctx, r, &samples).unwrap().0);
        }
    }
    Line {
        id: 4,
        name: "al equivalence",
        pass: worst <= 1e-6,
        detail: format!("ratio spread {worst:.2e} (genus 1 and 2, all branch points)"),
    }
}

fn c5() -> Line {
    let mut printed = Vec::new();
    let mut shifted = Vec::new();
    for curve in [cubic(), quintic()] {
        let ctx = SigmaContext::from_curve(&curve).unwrap();
        let samples = jacobian_samples(&curve, &random_divisors(&curve, 16, SEED).unwrap()).unwrap();
        let r = curve.degree();
        printed.extend(verify_schwarz_wp(&ctx, r, &samples, 1e-6).unwrap());
        shifted.extend(verify_schwarz_wp_shifted(&ctx, r, &samples, 1e-6).unwrap());
    }
    Line {
        id: 5,
        name: "Schwarzian against wp",
        pass: all_pass(&printed),
        detail: format!("printed form: {} | shifted form: {}", summary(&printed), summary(&shifted)),
    }
}

fn c6() -> Line {
    let curve = quintic();
    let ctx = SigmaContext::from_curve(&curve).unwrap();
    let r = 5;
    let near = random_divisors_in_disk(&curve, r, 16, 0.3, SEED).unwrap();
    let near_samples = jacobian_samples(&curve, &near).unwrap();
    let samples = jacobian_samples(&curve, &random_divisors(&curve, 16, SEED).unwrap()).unwrap();
    let mut reps = vec![
        verify_log_series(&curve, &near, r, 40, 1e-10).unwrap(),
        verify_miura_step(&curve, &near, r, 40, 1e-9).unwrap(),
        verify_sum_identity(&ctx, r, &near_samples, 40, 1e-6).unwrap(),
    ];
    reps.extend(verify_diff_identity(&ctx, r, &samples, 1e-6, 1e-8).unwrap());
    Line {
        id: 6,
        name: "soliton theorem identities",
        pass: all_pass(&reps),
        detail: summary(&reps),
    }
}

fn c7() -> Line {
    let mut reps = Vec::new();
    for curve in [cubic(), quintic()] {
        let ctx = SigmaContext::from_curve(&curve).unwrap();
        let r = curve.degree();
        let samples = jacobian_samples(&curve, &random_divisors(&curve, 16, SEED).unwrap()).unwrap();
        reps.extend(verify_periodicity(&ctx, r, &samples, 1e-7).unwrap());
        if curve.genus() >= 2 {
            reps.extend(verify_conjugation(&curve, r, 16, SEED, 1e-12).unwrap());
        }
    }
    Line {
        id: 7,
        name: "periodicity and conjugation",
        pass: all_pass(&reps),
        detail: summary(&reps),
    }
}

fn c8() -> Line {
    let t = Instant::now();
    let curve = quintic();
    let d = mkdv_divisor(&curve).unwrap();
    let dt = 1e-4;
    let coarse = dynamics::mkdv_residual(&curve, 5, &d, 11, 2e-3, dt, TimeDirection::Mkdv).unwrap();
    let fine = dynamics::mkdv_residual(&curve, 5, &d, 21, 1e-3, dt, TimeDirection::Mkdv).unwrap();
    let order = (coarse / fine).log2();
    let secs = t.elapsed().as_secs_f64();
    Line {
        id: 8,
        name: "MKdV",
        pass: fine <= 1e-4 && (1.5..=2.5).contains(&order) && secs < 120.0,
        detail: format!("residual {fine:.2e} at ds=1e-3, {coarse:.2e} at 2e-3, order {order:.2}, time {secs:.2}s"),
    }
}

fn c9() -> Line {
    let circle = FourierLoop::circle();
    let fig = normalize_euclidean(&fourier_coeffs(&figure_eight_sample(512), 96).unwrap()).unwrap().loop_;
    let rc = reality_check(&circle);
    let rf = reality_check(&fig);
    let mut dec = 0.0f64;
    for p in [2, 3, 5] {
        dec = dec.max(decimation_check(&fig, p, 1).unwrap());
        dec = dec.max(decimation_check(&circle, p, 2).unwrap());
    }
    let e_c = loop_energy(&circle, 64).unwrap();
    let e_f = loop_energy(&fig, 512).unwrap();
    let mut scale = 0.0f64;
    for n in [2usize, 3, 4] {
        scale = scale.max((loop_energy(&wind(&circle, n), 64).unwrap() / (n * n) as f64 - e_c).abs() / e_c);
        scale = scale.max((loop_energy(&wind(&fig, n), 512 * n).unwrap() / (n * n) as f64 - e_f).abs() / e_f);
    }
    let e0 = (energy(&circle_sample(64, 2.0 * PI)).unwrap() - PI).abs();
    let ef = (e_f - FIGURE_EIGHT_E_2PI).abs() / FIGURE_EIGHT_E_2PI;
    Line {
        id: 9,
        name: "Fourier loops",
        pass: rc <= 1e-12 && rf <= 1e-6 && dec <= 1e-8 && scale <= 1e-9 && e0 <= 1e-10 && ef <= 1e-8,
        detail: format!(
            "circle {rc:.2e} figure-eight {rf:.2e} decimation {dec:.2e} scaling {scale:.2e} E0-pi {e0:.2e} figure-eight energy {ef:.2e}"
        ),
    }
}

fn c10() -> Line {
    let mut spread = 0.0f64;
    let mut modular = 0.0f64;
    for e_a in [PI, FIGURE_EIGHT_E_2PI] {
        for k in 0..=40 {
            let be = 0.1 * 100f64.powf(k as f64 / 40.0);
            for im in [0.0, 0.5, -2.0] {
                let beta = C64::new(be / e_a, im / e_a);
                spread = spread.max(partition_sum(e_a, beta).unwrap().spread());
                modular = modular.max(modular_residual(e_a, beta).unwrap());
            }
        }
    }
    let mut oracle = 0.0f64;
    for (a, want) in [(1.0, GAUSS_SUM_A1), (0.1, GAUSS_SUM_A01)] {
        for mode in [PartitionMode::Direct, PartitionMode::Theta, PartitionMode::Poisson] {
            let v = partition_value(1.0, C64::new(a, 0.0), mode).unwrap();
            oracle = oracle.max((v.re - want).abs() / want);
        }
    }
    Line {
        id: 10,
        name: "partition sums",
        pass: spread <= 1e-12 && modular <= 1e-14 && oracle <= 1e-13,
        detail: format!("mode spread {spread:.2e} modular {modular:.2e} reference {oracle:.2e}"),
    }
}

fn c11() -> Line {
    let dir = tempfile::TempDir::new().unwrap();
    let spec = dir.path().join("g2.spec");
    std::fs::write(&spec, "genus = 2\nlambda = 0, 4, 0, -5, 0, 1\n").unwrap();
    let mut reports = Vec::new();
    let mut codes = Vec::new();
    for name in ["a", "b"] {
        let out = dir.path().join(name);
        let status = std::process::Command::new(env!("CARGO_BIN_EXE_loopsoliton"))
            .args(["verify", "--suite", "all", "--seed", "7"])
            .arg("--curve")
            .arg(&spec)
            .arg("--out")
            .arg(&out)
            .output()
            .unwrap()
            .status;
        codes.push(status.code().unwrap_or(-1));
        reports.push(std::fs::read(out.join("verify.report")).unwrap());
    }
    let same = reports[0] == reports[1] && codes[0] == codes[1];
    Line {
        id: 11,
        name: "determinism",
        pass: same && !reports[0].is_empty(),
        detail: format!("{} bytes, identical {same}, exit codes {codes:?}", reports[0].len()),
    }
}

fn main() {
    let checks: [fn() -> Line; 11] = [c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11];
    let mut unexpected = Vec::new();
    for check in checks {
        let l = check();
        println!(
            "criterion {:>2} {:<30} {}  {}",
            l.id,
            l.name,
            if l.pass { "PASS" } else { "FAIL" },
            l.detail
        );
        if !l.pass && !KNOWN_UNATTAINABLE.contains(&l.id) {
            unexpected.push(l.id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
