use loopsoliton::curve::newton_power_sums;
use loopsoliton::numeric::poly;
use loopsoliton::{Divisor, Error, HyperellipticCurve, Sheet, C64};
use proptest::prelude::*;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + b.norm())
}

#[test]
fn branch_points_of_known_curves() {
    let cubic = HyperellipticCurve::from_real(&[0.0, -1.0, 0.0, 1.0]).unwrap();
    let want = [-1.0, 0.0, 1.0];
    for (b, w) in cubic.branch_points().iter().zip(want) {
        assert!(close(*b, c(w), 1e-12), "{b}");
    }
    let quintic = HyperellipticCurve::from_real(&[0.0, 4.0, 0.0, -5.0, 0.0, 1.0]).unwrap();
    for (b, w) in quintic.branch_points().iter().zip([-2.0, -1.0, 0.0, 1.0, 2.0]) {
        assert!(close(*b, c(w), 1e-12), "{b}");
    }
    assert!(quintic.factorization_residual() < 1e-10);
}

#[test]
fn degenerate_and_malformed() {
    assert!(matches!(
        HyperellipticCurve::from_real(&[0.0, 0.0, 0.0, 1.0]),
        Err(Error::DegenerateCurve { .. })
    ));
    assert!(matches!(
        HyperellipticCurve::from_real(&[0.0, -1.0, 0.0, 2.0]),
        Err(Error::BadLeadingCoefficient(_))
    ));
    assert!(matches!(HyperellipticCurve::from_real(&[0.0, 1.0, 1.0]), Err(Error::BadCoefficientCount(3))));
}

#[test]
fn evaluation_and_lifting() {
    let cubic = HyperellipticCurve::from_real(&[0.0, -1.0, 0.0, 1.0]).unwrap();
    assert_eq!(cubic.eval_f(c(2.0)), c(6.0));
    assert_eq!(cubic.eval_f(c(0.0)), c(0.0));
    let quintic = HyperellipticCurve::from_real(&[0.0, 4.0, 0.0, -5.0, 0.0, 1.0]).unwrap();
    assert_eq!(quintic.eval_f(c(3.0)), c(120.0));

    let p = cubic.lift(c(2.0), Sheet::Plus);
    assert!((p.y - c(6f64.sqrt())).norm() < 1e-15);
    assert!((cubic.lift(c(2.0), Sheet::Minus).y + c(6f64.sqrt())).norm() < 1e-15);
    assert_eq!(cubic.lift(c(1.0), Sheet::Plus).y, c(0.0));
    assert_eq!(cubic.lift(c(1.0), Sheet::Minus).y.norm(), 0.0);
}

#[test]
fn symmetric_function_examples() {
    let quintic = HyperellipticCurve::from_real(&[0.0, 4.0, 0.0, -5.0, 0.0, 1.0]).unwrap();
    let d = Divisor::from_x(&quintic, &[c(2.5), c(3.0)], &[Sheet::Plus, Sheet::Minus]).unwrap();
    let f = d.f_poly();
    // (x - 2.5)(x - 3) = x^2 - 5.5x + 7.5, ascending powers
    for (a, b) in f.iter().zip([7.5, -5.5, 1.0]) {
        assert!(close(*a, c(b), 1e-14));
    }

    let xs = Divisor::from_xs_unchecked(&[c(2.0), c(3.0)]);
    assert_eq!(xs.power_sums(3), vec![c(5.0), c(13.0), c(35.0)]);
    assert_eq!(xs.elementary_symmetric(), vec![c(5.0), c(6.0)]);
    let f23 = xs.f_poly();
    assert_eq!(f23, vec![c(6.0), c(-5.0), c(1.0)]);

    let one = Divisor::from_xs_unchecked(&[c(1.0)]);
    assert_eq!(one.power_sums(4), vec![c(1.0); 4]);
    let pm = Divisor::from_xs_unchecked(&[c(1.0), c(-1.0)]);
    assert_eq!(pm.power_sums(2), vec![c(0.0), c(2.0)]);
    assert_eq!(pm.elementary_symmetric(), vec![c(0.0), c(-1.0)]);
    let three = Divisor::from_xs_unchecked(&[c(1.0), c(2.0), c(3.0)]);
    assert_eq!(three.elementary_symmetric(), vec![c(6.0), c(11.0), c(6.0)]);
    let f3 = Divisor::from_xs_unchecked(&[c(1.0), c(-1.0), c(2.0)]).f_poly();
    assert_eq!(f3, vec![c(2.0), c(-1.0), c(-2.0), c(1.0)]);
    assert_eq!(Divisor::from_xs_unchecked(&[c(0.0)]).f_poly(), vec![c(0.0), c(1.0)]);
}

#[test]
fn divisor_validation() {
    let cubic = HyperellipticCurve::from_real(&[0.0, -1.0, 0.0, 1.0]).unwrap();
    assert!(Divisor::from_x(&cubic, &[c(2.0), c(3.0)], &[Sheet::Plus, Sheet::Plus]).is_err());
    let quintic = HyperellipticCurve::from_real(&[0.0, 4.0, 0.0, -5.0, 0.0, 1.0]).unwrap();
    assert!(Divisor::from_x(&quintic, &[c(0.5), c(0.5)], &[Sheet::Plus, Sheet::Minus]).is_err());
}

fn point() -> impl Strategy<Value = C64> {
    (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(a, b)| C64::new(a, b))
}

proptest! {
    #[test]
    fn newton_identities(xs in proptest::collection::vec(point(), 1..6)) {
        let d = Divisor::from_xs_unchecked(&xs);
        let e = d.elementary_symmetric();
        let from_e = newton_power_sums(&e, xs.len());
        let direct = d.power_sums(xs.len());
        for (a, b) in from_e.iter().zip(&direct) {
            let scale = xs.iter().map(|x| x.norm()).fold(1.0, f64::max).powi(xs.len() as i32);
            prop_assert!((a - b).norm() <= 1e-12 * scale, "{a} vs {b}");
        }
    }

    #[test]
    fn f_poly_roots_recover_divisor(xs in proptest::collection::vec(point(), 1..5)) {
        for i in 0..xs.len() {
            for j in 0..i {
                prop_assume!((xs[i] - xs[j]).norm() > 0.5);
            }
        }
        let d = Divisor::from_xs_unchecked(&xs);
        let roots = poly::roots(&d.f_poly());
        for x in &xs {
            let best = roots.iter().map(|r| (r - x).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(best <= 1e-9 * (1.0 + x.norm()));
        }
    }

    #[test]
    fn lifted_points_lie_on_the_curve(x in point(), plus in any::<bool>()) {
        let curve = HyperellipticCurve::from_real(&[0.0, 4.0, 0.0, -5.0, 0.0, 1.0]).unwrap();
        let p = curve.lift(x, if plus { Sheet::Plus } else { Sheet::Minus });
        prop_assert!(curve.residual(&p) <= 1e-12);
    }
}
