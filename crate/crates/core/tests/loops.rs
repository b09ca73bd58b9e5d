use loopsoliton::loops::{
    curvature_coeffs, decimation_check, figure_eight_energy, figure_eight_parameter, figure_eight_sample,
    fourier_coeffs, loop_energy, modular_residual, normalize_euclidean, partition_poisson_printed, partition_sum,
    partition_value, reality_check, reality_check_printed, wind, wind_sample, FourierLoop, PartitionMode,
};
use loopsoliton::{Error, C64};
use proptest::prelude::*;
use std::f64::consts::PI;

// values computed independently with mpmath at 30 digits
const FIGURE_EIGHT_M: f64 = 0.826_114_765_984_970_3;
const FIGURE_EIGHT_E_4K: f64 = 6.055_428_722_909_090;
const FIGURE_EIGHT_E_2PI: f64 = 8.947_659_844_827_463;

fn real_loop() -> impl Strategy<Value = FourierLoop> {
    proptest::collection::vec(-1.0..1.0f64, 8).prop_map(|c| {
        let pairs: Vec<(i64, C64)> = [-4i64, -3, -2, -1, 1, 2, 3, 4]
            .iter()
            .zip(&c)
            .map(|(&n, &a)| (n, C64::new(a / (n * n) as f64, 0.0)))
            .collect();
        FourierLoop::from_pairs(&pairs)
    })
}

fn max_gap(a: &FourierLoop, b: &FourierLoop) -> f64 {
    let n = a.n_max().max(b.n_max()) as i64;
    (-n..=n).map(|k| (a.coeff(k) - b.coeff(k)).norm()).fold(0.0, f64::max)
}

#[test]
fn figure_eight_constants() {
    assert!((figure_eight_parameter() - FIGURE_EIGHT_M).abs() < 1e-14);
    assert!((figure_eight_energy() - FIGURE_EIGHT_E_4K).abs() < 1e-12);
}

#[test]
fn figure_eight_is_real_and_has_the_elastica_energy() {
    let l = fourier_coeffs(&figure_eight_sample(1024), 128).unwrap();
    let norm = normalize_euclidean(&l).unwrap();
    assert!(norm.fit_residual <= 1e-8);
    for (_, a) in norm.loop_.iter() {
        assert!(a.im.abs() <= 1e-8);
    }
    assert!(reality_check(&norm.loop_) <= 1e-8);
    let e = loop_energy(&norm.loop_, 1024).unwrap();
    assert!((e - FIGURE_EIGHT_E_2PI).abs() <= 1e-8 * FIGURE_EIGHT_E_2PI, "{e}");
}

#[test]
fn circle_reality_and_printed_weight() {
    let c = FourierLoop::circle();
    assert!(reality_check(&c) < 1e-14);
    assert!((reality_check_printed(&c) - 1.0).abs() < 1e-12);
    assert!((c.speed_integral() - 1.0).abs() < 1e-14);
    assert!((loop_energy(&c, 64).unwrap() - PI).abs() < 1e-10);
}

#[test]
fn curvature_bilinear_form() {
    let l = normalize_euclidean(&fourier_coeffs(&figure_eight_sample(512), 96).unwrap()).unwrap().loop_;
    let cc = curvature_coeffs(&l, 512).unwrap();
    assert_eq!(cc.sign, 1.0);
    assert!(cc.discrepancy <= 1e-6);
    // curvature of the unit-speed circle of length 1 is 2π
    let cc = curvature_coeffs(&FourierLoop::circle(), 16).unwrap();
    let zero = cc.harmonics.iter().position(|&n| n == 0).unwrap();
    assert!((cc.direct[zero] - C64::new(2.0 * PI, 0.0)).norm() < 1e-12);
    assert!((cc.bilinear[zero] - cc.direct[zero]).norm() < 1e-12);
}

#[test]
fn open_samples_are_rejected() {
    let mut s = figure_eight_sample(64);
    let last = s.z.len() - 1;
    s.z[last] += 0.01;
    assert!(matches!(fourier_coeffs(&s, 16), Err(Error::NotClosed(_))));
}

#[test]
fn winding_a_sample_matches_winding_coefficients() {
    let s = figure_eight_sample(256);
    let l = fourier_coeffs(&s, 64).unwrap();
    let direct = wind(&l, 3);
    let via = fourier_coeffs(&wind_sample(&s, 3), 192).unwrap();
    assert!(max_gap(&direct, &via) <= 1e-10);
}

#[test]
fn decimation_and_primes() {
    let l = normalize_euclidean(&fourier_coeffs(&figure_eight_sample(256), 48).unwrap()).unwrap().loop_;
    for p in [2, 3, 5, 7] {
        assert!(decimation_check(&l, p, 1).unwrap() <= 1e-10);
        assert!(decimation_check(&l, p, 2).unwrap() <= 1e-10);
    }
    for p in [0, 1, 4, 9] {
        assert!(matches!(decimation_check(&l, p, 1), Err(Error::NotPrime(_))));
    }
}

#[test]
fn partition_reference_values() {
    for (a, want) in [(0.1, 2.302_495_608_198_964_3), (1.0, 0.386_318_602_413_326_08), (10.0, 4.539_992_976_248_91e-5)] {
        for mode in [PartitionMode::Direct, PartitionMode::Theta, PartitionMode::Poisson] {
            let v = partition_value(1.0, C64::new(a, 0.0), mode).unwrap();
            assert!((v.re - want).abs() <= 1e-14 * want && v.im == 0.0, "{mode:?} a={a}: {v}");
        }
    }
    let z = partition_value(2.0, C64::new(0.25, 0.35), PartitionMode::Poisson).unwrap();
    assert!((z - C64::new(0.347_560_668_708_911_8, -0.435_928_168_258_822_6)).norm() < 1e-14, "{z}");
    assert!(matches!(partition_value(PI, C64::new(0.0, 1.0), PartitionMode::Theta), Err(Error::DivergentSum(_))));
    // dropping the π factors of the transform changes the value
    let two = C64::new(2.0, 0.0);
    let printed = partition_poisson_printed(1.0, two);
    assert!((printed - partition_value(1.0, two, PartitionMode::Direct).unwrap()).norm() > 1e-2);
}

proptest! {
    #[test]
    fn normalization_undoes_euclidean_motions(l in real_loop(), theta in -PI..PI, wr in -5.0..5.0f64, wi in -5.0..5.0f64) {
        let moved = l.euclidean(theta, C64::new(wr, wi));
        let norm = normalize_euclidean(&moved).unwrap();
        prop_assert_eq!(norm.loop_.coeff(0), C64::default());
        prop_assert!((norm.a0 / 2.506_628_274_631_000_7 - C64::new(wr, wi)).norm() <= 1e-12);
        for (_, a) in norm.loop_.iter() {
            prop_assert!((a.conj() - a).norm() <= 1e-8);
        }
        let mut neg = l.clone();
        for (n, a) in l.iter() {
            neg.set(n, -a);
        }
        prop_assert!(max_gap(&norm.loop_, &l).min(max_gap(&norm.loop_, &neg)) <= 1e-8);
    }

    #[test]
    fn sampling_and_transforming_reconstructs(l in real_loop(), theta in -PI..PI) {
        let l = l.euclidean(theta, C64::new(0.5, -0.25));
        let back = fourier_coeffs(&l.sample(64), 4).unwrap();
        prop_assert!(max_gap(&back, &l) <= 1e-12);
    }

    #[test]
    fn winding_rescales(l in real_loop(), n in 1usize..5, s in 0.0..1.0f64) {
        let w = wind(&l, n);
        prop_assert!((w.eval(s) - l.eval(n as f64 * s) / n as f64).norm() <= 1e-12);
        prop_assert!((w.speed_integral() - l.speed_integral()).abs() <= 1e-12 * (1.0 + l.speed_integral()));
    }

    #[test]
    fn partition_modes_agree(be in 0.1..10.0f64, im in -3.0..3.0f64) {
        for e_a in [PI, FIGURE_EIGHT_E_2PI] {
            let r = partition_sum(e_a, C64::new(be / e_a, im / e_a)).unwrap();
            prop_assert!(r.spread() <= 1e-12, "spread {}", r.spread());
            prop_assert!(modular_residual(e_a, C64::new(be / e_a, im / e_a)).unwrap() <= 1e-13);
        }
    }
}
