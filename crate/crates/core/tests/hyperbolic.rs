use approx::assert_relative_eq;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use treelimit::hyperbolic::{
    estimate_thin_constant, triangle_thinness, HyperbolicError, Lorentz, Point, Sl2, Tangent, UpperHalfPoint,
};

fn random_point(rng: &mut impl Rng) -> Point<f64> {
    Point::from_spatial(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0))
}

fn random_sl2(rng: &mut impl Rng) -> Sl2<f64> {
    let mut z = || Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
    Sl2::normalized(z(), z(), z(), z()).unwrap()
}

#[test]
fn distance_basic_values() {
    let o = Point::<f64>::origin();
    assert_eq!(o.distance(&o).unwrap(), 0.0);
    let q = Point::new([1f64.cosh(), 1f64.sinh(), 0.0, 0.0]).unwrap();
    assert_relative_eq!(o.distance(&q).unwrap(), 1.0, epsilon = 1e-12);
}

#[test]
fn distance_agrees_with_upper_half_space() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..500 {
        let (p, q) = (random_point(&mut rng), random_point(&mut rng));
        let (hp, hq) = (UpperHalfPoint::from_hyperboloid(&p), UpperHalfPoint::from_hyperboloid(&q));
        assert!((p.distance(&q).unwrap() - hp.distance(&hq)).abs() < 1e-9);
        let back = hp.to_hyperboloid();
        assert!(back.distance(&p).unwrap() < 1e-9);
    }
}

#[test]
fn invalid_points_are_rejected() {
    assert!(matches!(Point::new([1.0, 1.0, 0.0, 0.0]), Err(HyperbolicError::InvalidPoint { .. })));
    assert!(Point::new([-1.0, 0.0, 0.0, 0.0]).is_err());
}

#[test]
fn exp_and_log() {
    let o = Point::<f64>::origin();
    assert_eq!(o.exp(&Tangent::zero()).unwrap(), o);
    let t = 2.5;
    let p = o.exp(&Tangent::new([0.0, t, 0.0, 0.0])).unwrap();
    assert_relative_eq!(p.coords()[0], t.cosh(), epsilon = 1e-12);
    assert_relative_eq!(p.coords()[1], t.sinh(), epsilon = 1e-12);
    assert!(o.log(&o).is_zero());
    let err = o.exp(&Tangent::new([1.0, 0.0, 0.0, 0.0]));
    assert!(matches!(err, Err(HyperbolicError::NotTangent { .. })));

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let (p, q) = (random_point(&mut rng), random_point(&mut rng));
        let v = p.log(&q);
        assert!(v.dot(&Tangent::new(*p.coords())).abs() < 1e-9 * p.x0() * p.x0());
        let d = p.distance(&q).unwrap();
        assert!((v.norm() - d).abs() < 1e-10 * (1.0 + d));
        let back = p.exp(&v).unwrap();
        assert!(back.distance(&q).unwrap() < 1e-9);
    }
}

#[test]
fn spinor_map_examples() {
    let id = Lorentz::from_sl2(&Sl2::<f64>::identity());
    assert!(id.max_abs_diff(&Lorentz::identity()) < 1e-15);

    // Oracle: diag(e^(1/2), e^(-1/2)) acts on the Hermitian matrix entries
    // x0 + x3 -> e (x0 + x3), x0 - x3 -> e^-1 (x0 - x3); a boost of rapidity 1.
    let a = Sl2::diagonal(Complex64::new(0.5f64.exp(), 0.0));
    let l = Lorentz::from_sl2(&a);
    let (c, s) = (1f64.cosh(), 1f64.sinh());
    let expect = [[c, 0.0, 0.0, s], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [s, 0.0, 0.0, c]];
    assert!(l.max_abs_diff(&Lorentz { m: expect }) < 1e-12);

    let u = Sl2::normalized(
        Complex64::new(0.6, 0.0),
        Complex64::new(0.0, 0.8),
        Complex64::new(0.0, 0.8),
        Complex64::new(0.6, 0.0),
    )
    .unwrap();
    let fixed = Lorentz::from_sl2(&u).apply(&Point::origin());
    assert!(fixed.distance(&Point::origin()).unwrap() < 1e-12);
}

#[test]
fn translation_length_examples() {
    let parabolic = Sl2::from_real(1.0, 1.0, 0.0, 1.0).unwrap();
    assert_eq!(parabolic.translation_length(), 0.0);
    assert_eq!(Sl2::<f64>::identity().translation_length(), 0.0);
    let elliptic = Sl2::<f64>::rotation(std::f64::consts::FRAC_PI_2);
    assert_eq!(elliptic.trace().norm() < 1e-15, true);
    assert_eq!(elliptic.translation_length(), 0.0);

    let a = Sl2::diagonal(Complex64::new(1f64.exp(), 0.0));
    assert_relative_eq!(a.translation_length(), 2.0, epsilon = 1e-12);
    // Oracle: minimize displacement over points of the x0-x3 plane and its
    // normal direction; the axis through the origin realizes 2.
    let l = Lorentz::from_sl2(&a);
    let mut best = f64::INFINITY;
    for i in -40..=40 {
        for j in 0..=40 {
            let p = Point::from_spatial(j as f64 * 0.05, 0.0, i as f64 * 0.1);
            best = best.min(p.distance(&l.apply(&p)).unwrap());
        }
    }
    assert!((best - 2.0).abs() < 1e-9);
}

#[test]
fn thin_constant_examples() {
    let o = Point::<f64>::origin();
    let line = [o, o.toward(&Point::from_spatial(1.0, 0.0, 0.0), 1.0), o.toward(&Point::from_spatial(1.0, 0.0, 0.0), 3.0)];
    assert!(triangle_thinness(&line, 6) < 1e-9);

    let r = 0.01 / 3f64.sqrt();
    let small = [0.0, 1.0, 2.0].map(|k: f64| {
        let ang = k * std::f64::consts::TAU / 3.0;
        o.toward(&Point::from_spatial(ang.cos(), ang.sin(), 0.0), r)
    });
    assert!(triangle_thinness(&small, 6) < 0.01);

    let c1 = estimate_thin_constant(10_000, 7).delta_thin;
    let c2 = estimate_thin_constant(20_000, 7).delta_thin;
    assert!(c1 > 0.0 && c2 >= c1);
    assert!((c2 - c1) / c2 < 0.1, "{c1} vs {c2}");
    assert_eq!(estimate_thin_constant(500, 3), estimate_thin_constant(500, 3));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn triangle_inequality(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (p, q, r) = (random_point(&mut rng), random_point(&mut rng), random_point(&mut rng));
        let d = |a: &Point<f64>, b: &Point<f64>| a.distance(b).unwrap();
        prop_assert!(d(&p, &r) <= d(&p, &q) + d(&q, &r) + 1e-9);
        prop_assert!((d(&p, &q) - d(&q, &p)).abs() < 1e-12);
    }

    #[test]
    fn lorentz_is_an_isometric_homomorphism(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (random_sl2(&mut rng), random_sl2(&mut rng));
        let (la, lb) = (Lorentz::from_sl2(&a), Lorentz::from_sl2(&b));
        let lab = Lorentz::from_sl2(&(a * b));
        let scale = 1.0f64.max(la.m.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()))).powi(2)
            * 1.0f64.max(lb.m.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs())));
        prop_assert!(lab.max_abs_diff(&(la * lb)) < 1e-9 * scale);
        prop_assert!(la.defect() < 1e-10 * scale);
        prop_assert!(la.m[0][0] > 0.0);
        let (p, q) = (random_point(&mut rng), random_point(&mut rng));
        let d0 = p.distance(&q).unwrap();
        let d1 = la.apply(&p).distance(&la.apply(&q)).unwrap();
        prop_assert!((d0 - d1).abs() < 1e-9 * (1.0 + d0) * scale);
    }

    #[test]
    fn translation_length_is_conjugation_invariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (random_sl2(&mut rng), random_sl2(&mut rng));
        let l0 = a.translation_length();
        let l1 = b.conjugate(&a).translation_length();
        prop_assert!((l0 - l1).abs() < 1e-9 * (1.0 + l0));
        prop_assert!(a.det_defect() < 1e-12);
    }

    #[test]
    fn trace_length_bound(tr in 1.0f64..1e4, re in -3.0f64..3.0, im in -3.0f64..3.0, bre in 0.1f64..3.0) {
        let a = Complex64::new(re, im);
        let d = Complex64::new(tr, 0.0) - a;
        let b = Complex64::new(bre, 0.5);
        let c = (a * d - 1.0) / b;
        let m = Sl2::new(a, b, c, d).unwrap();
        prop_assert!((m.translation_length() - 2.0 * tr.ln()).abs() <= 2.0 + 1e-9);
    }
}

#[test]
fn generic_over_f32() {
    let p = Point::<f32>::from_spatial(0.3, -0.2, 0.1);
    let q = Point::<f32>::origin();
    let d32 = p.distance(&q).unwrap() as f64;
    let d64 = Point::<f64>::from_spatial(0.3f32 as f64, -0.2f32 as f64, 0.1f32 as f64).distance(&Point::origin()).unwrap();
    assert!((d32 - d64).abs() < 1e-5);
    let a = Sl2::<f32>::diagonal(num_complex::Complex32::new(1f32.exp(), 0.0));
    assert!((a.translation_length() - 2.0).abs() < 1e-5);
}

#[test]
fn boost_reaches_the_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..200 {
        let p = random_point(&mut rng);
        let q = Lorentz::from_sl2(&Sl2::boost_to(&p)).apply(&Point::origin());
        assert!(p.distance(&q).unwrap() < 1e-9);
        let b = Sl2::boost_to(&p);
        assert!(b.det_defect() < 1e-9 * b.max_abs().powi(2));
    }
    let far = Point::<f64>::from_spatial(0.0, 0.0, -1e6);
    assert!(Sl2::boost_to(&far).d.re.is_finite());
}

#[test]
fn displacement_matches_distance() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..500 {
        let (m, p) = (random_sl2(&mut rng), random_point(&mut rng));
        let direct = p.distance(&Lorentz::from_sl2(&m).apply(&p)).unwrap();
        assert_relative_eq!(m.displacement_at(&p), direct, epsilon = 1e-7, max_relative = 1e-9);
        assert!(m.displacement_at(&p) >= m.translation_length() - 1e-9);
    }
    let ell = Sl2::<f64>::diagonal(Complex64::new(3f64.exp(), 0.0));
    assert_relative_eq!(ell.displacement_at_origin(), 6.0, epsilon = 1e-14);
    assert_eq!(Sl2::<f64>::identity().displacement_at(&Point::from_spatial(1.0, 2.0, 3.0)), 0.0);
    // Small rotation about an axis at distance 1: no cancellation in the tiny answer.
    let r = Sl2::<f64>::rotation(1e-9);
    let p = Point::from_spatial(1f64.sinh(), 0.0, 0.0);
    let expect = p.distance(&Lorentz::from_sl2(&r).apply(&p)).unwrap();
    assert_relative_eq!(r.displacement_at(&p), expect, max_relative = 1e-3);
    assert!(r.displacement_at(&p) > 0.0);
}
