use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use treelimit::group::{GroupError, Letter, Presentation, Representation, RepresentationFamily, Word};
use treelimit::hyperbolic::{Lorentz, Point, Sl2};

fn f2() -> Presentation {
    Presentation::free(&["a", "b"]).unwrap()
}

fn random_word(rng: &mut impl Rng, rank: usize, len: usize) -> Word {
    Word::new((0..len).map(|_| Letter::new(rng.gen_range(0..rank), if rng.gen() { 1 } else { -1 })))
}

#[test]
fn evaluate_examples() {
    let fam = RepresentationFamily::diagonal_stretch(1.0).unwrap();
    let rep = fam.at::<f64>(1.5).unwrap();
    assert!(rep.evaluate(&Word::empty()).unwrap().approx_eq(&Sl2::identity(), 0.0));
    let w = Word::from_pairs(&[(0, 1), (0, -1)]);
    assert!(w.is_empty());
    let bad = Word::generator(5);
    assert!(matches!(rep.evaluate(&bad), Err(GroupError::MalformedWord(_))));
}

#[test]
fn octagon_relator_holds_along_the_twist() {
    let fam = RepresentationFamily::octagon_twist();
    let pres = fam.presentation();
    for t in [0.0, 0.5, 2.0, 6.0] {
        let rep = fam.at::<f64>(t).unwrap();
        let m = rep.evaluate(&pres.relators()[0]).unwrap();
        assert!(m.approx_eq_projective(&Sl2::identity(), 1e-8), "t = {t}: {m:?}");
        assert!(rep.is_irreducible());
    }
    // Side pairings of a closed surface group are hyperbolic.
    let rep = fam.at::<f64>(0.0).unwrap();
    for m in rep.images() {
        assert!(m.trace().im.abs() < 1e-12 && m.trace().re.abs() > 2.0);
    }
    // The twist makes a1 a2 diverge.
    let w = pres.parse_word("a1 a2").unwrap();
    let l = |t: f64| fam.at::<f64>(t).unwrap().evaluate(&w).unwrap().translation_length();
    assert!(l(8.0) > l(4.0) && l(4.0) > l(1.0));
}

#[test]
fn irreducibility_examples() {
    let e = Complex64::new(1f64.exp(), 0.0);
    let diag = Representation::free(vec![Sl2::diagonal(e), Sl2::diagonal(e * 2.0)]);
    assert!(!diag.is_irreducible());
    assert!(!Representation::<f64>::trivial(2).is_irreducible());
    // Rotation of H^2 about i by pi/2 (matrix half-angle pi/4) moves the axis
    // endpoints {0, inf} of diag(e, 1/e) to {-1, 1}: no shared fixed point.
    let a = Sl2::diagonal(e);
    let r = Sl2::rotation(std::f64::consts::FRAC_PI_4);
    assert!(Representation::free(vec![a, r.conjugate(&a)]).is_irreducible());
    for t in [0.1, 1.0, 5.0] {
        assert!(RepresentationFamily::diagonal_stretch(1.0).unwrap().at::<f64>(t).unwrap().is_irreducible());
    }
}

#[test]
fn family_examples() {
    let fam = RepresentationFamily::diagonal_stretch(1.0).unwrap();
    let t = 2.25;
    let rep = fam.at::<f64>(t).unwrap();
    assert!((rep.images()[0].trace().re - (t.exp() + (-t).exp())).abs() < 1e-12);
    assert!(matches!(fam.at::<f64>(0.0), Err(GroupError::OutOfRange { .. })));
    assert!(matches!(fam.at::<f64>(-1.0), Err(GroupError::OutOfRange { .. })));
}

#[test]
fn length_function_examples() {
    let words = f2().word_list(2).unwrap();
    let triv = Representation::<f64>::trivial(2).length_function(&words).unwrap();
    assert!(triv.iter().all(|&x| x == 0.0));

    let fam = RepresentationFamily::diagonal_stretch(1.0).unwrap();
    for t in [0.3, 1.0, 3.0, 7.5] {
        let l = fam.at::<f64>(t).unwrap().length_function(&[Word::generator(0)]).unwrap();
        assert!((l[0] - 2.0 * t).abs() < 1e-9);
    }

    // Oracle for ab at t = 3: minimize displacement over a grid around the
    // axis-crossing region, refined by coordinate search.
    let rep = fam.at::<f64>(3.0).unwrap();
    let ab = f2().parse_word("ab").unwrap();
    let m = rep.evaluate(&ab).unwrap();
    let l = Lorentz::from_sl2(&m);
    let disp = |x: [f64; 3]| {
        let p = Point::from_spatial(x[0], x[1], x[2]);
        p.distance(&l.apply(&p)).unwrap()
    };
    let mut best = ([0.0; 3], f64::INFINITY);
    for i in -20..=20 {
        for j in -20..=20 {
            for k in -20..=20 {
                let x = [i as f64 * 0.25, j as f64 * 0.25, k as f64 * 0.25];
                let d = disp(x);
                if d < best.1 {
                    best = (x, d);
                }
            }
        }
    }
    let mut step = 0.25;
    while step > 1e-9 {
        let mut improved = false;
        for axis in 0..3 {
            for sign in [-1.0, 1.0] {
                let mut x = best.0;
                x[axis] += sign * step;
                let d = disp(x);
                if d < best.1 {
                    best = (x, d);
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    let computed = rep.length_function(&[ab]).unwrap()[0];
    assert!((computed - best.1).abs() < 1e-6, "{computed} vs {}", best.1);
}

#[test]
fn word_list_examples() {
    let pres = f2();
    let fmt = |ws: Vec<Word>| ws.iter().map(|w| pres.format_word(w)).collect::<Vec<_>>();
    assert_eq!(fmt(pres.word_list(1).unwrap()), ["a", "b"]);
    assert_eq!(fmt(pres.word_list(2).unwrap()), ["a", "b", "aa", "ab", "aB", "bb"]);
    assert!(pres.word_list(0).is_err());
}

/// Brute force: enumerate all letter strings, keep reduced ones, bucket by
/// the set of rotations of the word and its inverse.
#[test]
fn word_list_matches_exhaustive_enumeration() {
    use std::collections::BTreeSet;
    let pres = f2();
    for max_len in 1..=4 {
        let mut classes: BTreeSet<BTreeSet<Vec<(usize, bool)>>> = BTreeSet::new();
        let letters = [(0, false), (0, true), (1, false), (1, true)];
        for len in 1..=max_len {
            let total = 4usize.pow(len as u32);
            for code in 0..total {
                let s: Vec<(usize, bool)> = (0..len).map(|i| letters[(code / 4usize.pow(i as u32)) % 4]).collect();
                let cyc_reduced = (0..len).all(|i| {
                    let (x, y) = (s[i], s[(i + 1) % len]);
                    len == 1 || !(x.0 == y.0 && x.1 != y.1)
                });
                if !cyc_reduced {
                    continue;
                }
                let inv: Vec<(usize, bool)> = s.iter().rev().map(|&(g, i)| (g, !i)).collect();
                let mut class = BTreeSet::new();
                for base in [&s, &inv] {
                    for k in 0..len {
                        let mut r = base.to_vec();
                        r.rotate_left(k);
                        class.insert(r);
                    }
                }
                classes.insert(class);
            }
        }
        assert_eq!(pres.word_list(max_len).unwrap().len(), classes.len(), "max_len {max_len}");
    }
}

#[test]
fn parse_and_format_round_trip() {
    let fam = RepresentationFamily::octagon_twist();
    let pres = fam.presentation();
    let w = pres.parse_word("a1 b1 A1 B1").unwrap();
    assert_eq!(pres.format_word(&w), "a1b1A1B1");
    assert_eq!(pres.parse_word("a1b1a1^-1B1").unwrap(), w);
    assert!(pres.parse_word("zz").is_err());
    assert!(Presentation::free(&["a", "a"]).is_err());
    assert!(Presentation::free(&["A"]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluation_is_a_homomorphism(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rep = RepresentationFamily::diagonal_stretch(1.0).unwrap().at::<f64>(rng.gen_range(0.1..1.5)).unwrap();
        let (u, v) = (random_word(&mut rng, 2, 4), random_word(&mut rng, 2, 4));
        let (mu, mv) = (rep.evaluate(&u).unwrap(), rep.evaluate(&v).unwrap());
        let lhs = rep.evaluate(&u.concat(&v)).unwrap();
        // Cancellation inside u.v is exact for words but not for matrices.
        prop_assert!(lhs.approx_eq(&(mu * mv), 1e-10 * mu.max_abs() * mv.max_abs()));
    }

    #[test]
    fn lengths_are_inversion_and_conjugation_invariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rep = RepresentationFamily::diagonal_stretch(1.2).unwrap().at::<f64>(rng.gen_range(0.1..2.0)).unwrap();
        let w = random_word(&mut rng, 2, 5);
        let v = random_word(&mut rng, 2, 3);
        let l = rep.length_function(&[w.clone(), w.inverse(), v.concat(&w).concat(&v.inverse())]).unwrap();
        prop_assert!((l[0] - l[1]).abs() < 1e-10 * (1.0 + l[0]));
        let mv = rep.evaluate(&v).unwrap().max_abs();
        prop_assert!((l[0] - l[2]).abs() < 1e-9 * (1.0 + l[0]) * mv * mv);
    }

    #[test]
    fn canonical_is_a_class_invariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_word(&mut rng, 3, 6);
        let c = w.canonical();
        for r in w.rotations() {
            prop_assert_eq!(r.canonical(), c.clone());
        }
        prop_assert_eq!(w.inverse().canonical(), c);
    }
}
