use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use treelimit::degeneration::*;
use treelimit::group::{Presentation, RepresentationFamily, Word, DEFAULT_STRETCH_ANGLE};
use treelimit::harmonic::{pullback_metric, EquivariantMap, PullbackMetric, TwistedGraph};
use treelimit::rtree::gen;

/// Four-point constant straight from the Gromov-product form, over ordered quadruples:
/// `(x|y)_w >= min((x|z)_w, (y|z)_w) - delta`.
fn oracle_delta(d: &[Vec<f64>]) -> f64 {
    let n = d.len();
    let gp = |x: usize, y: usize, w: usize| 0.5 * (d[x][w] + d[y][w] - d[x][y]);
    let mut best = 0.0f64;
    for w in 0..n {
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    best = best.max(gp(x, z, w).min(gp(y, z, w)) - gp(x, y, w));
                }
            }
        }
    }
    best
}

fn leaf_metric(rng: &mut ChaCha8Rng, leaves: usize) -> Vec<Vec<f64>> {
    let (tree, ls) = gen::random_tree_with_leaves(rng, leaves);
    ls.iter().map(|&a| ls.iter().map(|&b| tree.vertex_distance(a, b)).collect()).collect()
}

fn diag(lambda: f64) -> [[f64; 2]; 4] {
    [[lambda, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0 / lambda, 0.0]]
}

fn one_generator_pullback(lambda: f64) -> (Presentation, PullbackMetric<f64>) {
    let pres = Presentation::free(&["a"]).unwrap();
    let fam = RepresentationFamily::constant(pres.clone(), vec![diag(lambda)]).unwrap();
    let rep = fam.at::<f64>(0.0).unwrap();
    let m = pullback_metric(&rep, &EquivariantMap::at_origin(1), &pres.ball(3)).unwrap();
    (pres, m)
}

fn stretch_setup(schedule: Vec<f64>) -> DegenerationSetup {
    let fam = RepresentationFamily::diagonal_stretch(DEFAULT_STRETCH_ANGLE).unwrap();
    let graph = TwistedGraph::rose(&fam.presentation(), &[1.0, 1.0]).unwrap();
    DegenerationSetup::new(fam, graph, schedule)
}

#[test]
fn rescale_divides_by_root_energy() {
    let (_, m) = one_generator_pullback(2.0);
    let same = rescale(&m, 1.0).unwrap();
    assert_eq!(same.distances, m.distances);
    let half = rescale(&m, 4.0).unwrap();
    for (r, s) in half.distances.iter().zip(&m.distances) {
        for (a, b) in r.iter().zip(s) {
            assert_eq!(*a, b / 2.0);
        }
    }
    let e = 7.3;
    let r = rescale(&m, e).unwrap();
    let orig = m.distances.iter().flatten().cloned().fold(0.0, f64::max);
    assert!((r.diameter() * e.sqrt() - orig).abs() < 1e-12);
    assert!(matches!(rescale(&m, 0.0), Err(DegenerationError::InvalidEnergy(_))));
    assert!(matches!(rescale(&m, -1.0), Err(DegenerationError::InvalidEnergy(_))));
}

#[test]
fn pseudometric_validation() {
    assert!(RescaledMetric::from_matrix(vec![vec![0.0, 1.0], vec![2.0, 0.0]]).is_err());
    assert!(RescaledMetric::from_matrix(vec![vec![1.0]]).is_err());
    let bad = vec![vec![0.0, 1.0, 3.0], vec![1.0, 0.0, 1.0], vec![3.0, 1.0, 0.0]];
    assert!(matches!(RescaledMetric::from_matrix(bad), Err(DegenerationError::InvalidMetric(_))));
}

#[test]
fn delta_examples() {
    let line: Vec<f64> = vec![0.0, 0.7, 1.5, 4.0];
    let d: Vec<Vec<f64>> = line.iter().map(|a| line.iter().map(|b| (a - b).abs()).collect()).collect();
    assert_eq!(gromov_delta(&d, 1).delta, 0.0);

    let s2 = 2f64.sqrt();
    let square = vec![
        vec![0.0, 1.0, s2, 1.0],
        vec![1.0, 0.0, 1.0, s2],
        vec![s2, 1.0, 0.0, 1.0],
        vec![1.0, s2, 1.0, 0.0],
    ];
    let r = gromov_delta(&square, 1);
    assert!((r.delta - (2.0 * s2 - 2.0) / 2.0).abs() < 1e-15);
    assert!(r.exhaustive);
    assert_eq!(gromov_delta(&square[..3].iter().map(|r| r[..3].to_vec()).collect::<Vec<_>>(), 1).delta, 0.0);
}

#[test]
fn delta_large_sample_is_seeded() {
    let pts: Vec<f64> = (0..90).map(|i| (i as f64).sqrt()).collect();
    let d: Vec<Vec<f64>> = pts.iter().map(|a| pts.iter().map(|b| (a - b).abs()).collect()).collect();
    let r = gromov_delta(&d, 3);
    assert!(!r.exhaustive);
    assert!(r.delta < 1e-12);
    let noisy: Vec<Vec<f64>> = (0..90)
        .map(|i| (0..90).map(|j| if i == j { 0.0 } else { 1.0 + ((i * 31 + j * 31) % 7) as f64 * 0.01 }).collect())
        .collect();
    assert_eq!(gromov_delta(&noisy, 9), gromov_delta(&noisy, 9));
}

#[test]
fn tripod_reconstruction() {
    let (a, b, c) = (0.4, 1.1, 2.5);
    let m = RescaledMetric::from_matrix(vec![vec![0.0, a + b, a + c], vec![a + b, 0.0, b + c], vec![a + c, b + c, 0.0]]).unwrap();
    let t = tree_from_metric(&m, 1e-9).unwrap();
    assert_eq!(t.tree.vertex_count(), 4);
    let center = (0..4).find(|&v| t.tree.incident(v).len() == 3).unwrap();
    let arms: Vec<f64> = t.sample_vertex.iter().map(|&v| t.tree.vertex_distance(center, v)).collect();
    for (got, want) in arms.iter().zip([a, b, c]) {
        assert!((got - want).abs() < 1e-12);
    }
}

#[test]
fn collinear_and_coincident_samples() {
    let pts = [0.0f64, 2.0, 2.0, 1.0, 3.5, 0.0];
    let d: Vec<Vec<f64>> = pts.iter().map(|a| pts.iter().map(|b| (a - b).abs()).collect()).collect();
    let m = RescaledMetric::from_matrix(d.clone()).unwrap();
    let t = tree_from_metric(&m, 1e-9).unwrap();
    assert_eq!(t.tree.vertex_count(), 4);
    assert_eq!(t.sample_vertex[1], t.sample_vertex[2]);
    assert_eq!(t.sample_vertex[0], t.sample_vertex[5]);
    assert!(t.max_error(&d) < 1e-12);
}

#[test]
fn random_leaf_metrics_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..50 {
        let d = leaf_metric(&mut rng, 10);
        let m = RescaledMetric::from_matrix(d.clone()).unwrap();
        assert!(oracle_delta(&d) < 1e-12);
        let t = tree_from_metric(&m, 1e-9).unwrap();
        assert!(t.max_error(&d) <= 1e-9);
    }
}

#[test]
fn non_tree_like_metric_is_rejected() {
    // Two opposite pairs at distance s, all else 1: delta = s - 1 = 0.3 s.
    let s = 1.0 / 0.7;
    let d = vec![
        vec![0.0, s, 1.0, 1.0],
        vec![s, 0.0, 1.0, 1.0],
        vec![1.0, 1.0, 0.0, s],
        vec![1.0, 1.0, s, 0.0],
    ];
    let m = RescaledMetric::from_matrix(d).unwrap();
    match tree_from_metric(&m, 0.2) {
        Err(DegenerationError::NotTreeLike { quadruple, delta, diameter }) => {
            assert_eq!(quadruple, [0, 1, 2, 3]);
            assert!((delta - 0.3 * diameter).abs() < 1e-12);
        }
        other => panic!("expected not-tree-like, got {other:?}"),
    }
    assert!(tree_from_metric(&m, 0.31).is_ok());
}

#[test]
fn line_action_translates_by_normalized_length() {
    let (pres, m) = one_generator_pullback(2f64.exp());
    // Loop weight 1 at the origin: E = l(a)^2 = 16.
    let r = rescale(&m, 16.0).unwrap();
    let tree = tree_from_metric(&r, 1e-9).unwrap();
    assert_eq!(tree.tree.vertex_count(), 7);
    let action = induced_action(tree, r.labels.clone(), 1, 1e-9).unwrap();
    assert!(action.distortion < 1e-9);
    let a = Word::generator(0);
    assert!((action.length(&a).unwrap() - 1.0).abs() < 1e-9);
    assert!((action.length(&a.pow(2)).unwrap() - 2.0).abs() < 1e-9);
    for (x, gx) in action.maps[0].iter().enumerate() {
        let w = &r.labels[x].1;
        match gx {
            Some(j) => {
                assert_eq!(r.labels[*j].1, a.concat(w));
                assert!((action.tree.sample_distance(x, *j) - 1.0).abs() < 1e-9);
            }
            None => assert_eq!(a.concat(w).len(), 4),
        }
    }
    let doc = action.to_document(&pres);
    assert_eq!(doc.actions["a"].vertex_map.len(), 6);
    assert!(doc.actions["a"].edge_map.is_empty());
}

#[test]
fn identity_generator_acts_trivially() {
    let pres = Presentation::free(&["a", "b"]).unwrap();
    let id = diag(1.0);
    let fam = RepresentationFamily::constant(pres.clone(), vec![id, diag(3.0)]).unwrap();
    let rep = fam.at::<f64>(0.0).unwrap();
    let m = pullback_metric(&rep, &EquivariantMap::at_origin(1), &pres.ball(3)).unwrap();
    let r = rescale(&m, 1.0).unwrap();
    let tree = tree_from_metric(&r, 1e-9).unwrap();
    let action = induced_action(tree, r.labels.clone(), 2, 1e-9).unwrap();
    let mut domain = 0;
    for (x, gx) in action.maps[0].iter().enumerate() {
        if let Some(j) = gx {
            assert_eq!(action.tree.sample_vertex[x], action.tree.sample_vertex[*j]);
            domain += 1;
        }
    }
    assert!(domain > 0);
    assert_eq!(action.length(&Word::generator(0)), Some(0.0));
}

#[test]
fn corrupted_sample_map_is_rejected() {
    let (_, m) = one_generator_pullback(2f64.exp());
    let r = rescale(&m, 16.0).unwrap();
    let tree = tree_from_metric(&r, 1e-9).unwrap();
    let good = induced_action(tree.clone(), r.labels.clone(), 1, 1e-9).unwrap();
    let mut maps = good.maps.clone();
    let (x, y) = {
        let dom: Vec<usize> = (0..maps[0].len()).filter(|&i| maps[0][i].is_some()).collect();
        (dom[0], dom[dom.len() - 1])
    };
    maps[0].swap(x, y);
    match SampledAction::new(tree, r.labels.clone(), maps, 1e-9) {
        Err(DegenerationError::NonIsometricAction { generator, distortion, .. }) => {
            assert_eq!(generator, 0);
            assert!(distortion > 1.0);
        }
        other => panic!("expected non-isometric action, got {other:?}"),
    }
}

#[test]
fn projective_comparison() {
    let l1 = [0.3, 1.2, 2.0, 0.9];
    let l2: Vec<f64> = l1.iter().map(|x| 7.0 * x).collect();
    assert!(projective_compare(&l1, &l2).unwrap() < 1e-15);
    let d = projective_compare(&[1.0, 1.0, 2.0], &[1.0, 1.0, 1.9]).unwrap();
    assert!((d - (1.0 / 1.9 - 0.5)).abs() < 1e-15);
    assert!((d - 0.0263).abs() < 1e-4);
    assert_eq!(projective_compare(&[0.0; 3], &[1.0, 1.0, 2.0]), Err(DegenerationError::DegenerateLengths));
    assert!(projective_compare(&[1.0], &[1.0, 2.0]).is_err());
}

#[test]
fn abelian_detection() {
    let pres = Presentation::free(&["a", "b"]).unwrap();
    let words = pres.word_list(2).unwrap();
    // Translations of a line by 1.5 and -0.5.
    let h = [1.5, -0.5];
    let line: Vec<f64> = words
        .iter()
        .map(|w| w.exponent_sums(2).iter().zip(h).map(|(&e, x)| e as f64 * x).sum::<f64>().abs())
        .collect();
    assert!(is_abelian(&words, &line, 2, 1e-9));
    let mut bent = line.clone();
    bent[3] += 0.5;
    assert!(!is_abelian(&words, &bent, 2, 0.05));
}

#[test]
fn stretch_family_degenerates() {
    let run = run_degeneration(&stretch_setup((1..=8).map(f64::from).collect())).unwrap();
    assert_eq!(run.steps.len(), 8);
    assert_eq!(run.case, DegenerationCase::Divergent);
    assert_eq!(run.abelian, Some(false));
    for w in run.steps.windows(2) {
        assert!(w[1].energy > w[0].energy);
    }
    for s in &run.steps {
        // Both generators have length 2t and their axes meet at the base point.
        assert!((s.energy - 8.0 * s.t * s.t).abs() < 1e-6 * s.energy);
    }
    let last = run.steps.last().unwrap();
    assert!(last.tree_extracted);
    assert!(last.lengths.iter().any(|&l| l > 0.0));
    let (a, b, ab) = (last.lengths[0], last.lengths[1], last.lengths[3]);
    assert!(projective_compare(&[a, b, ab], &[1.0, 1.0, 2.0]).unwrap() < 0.05);
    let action = run.final_action.as_ref().unwrap();
    assert!(action.distortion <= 6.0 * DEFAULT_DELTA_THRESHOLD * last.diameter);
}

#[test]
fn reconstruction_error_within_bound_on_run_metric() {
    let fam = RepresentationFamily::diagonal_stretch(DEFAULT_STRETCH_ANGLE).unwrap();
    let pres = fam.presentation();
    let rep = fam.at::<f64>(6.0).unwrap();
    let m = pullback_metric(&rep, &EquivariantMap::at_origin(1), &pres.ball(3)).unwrap();
    let r = rescale(&m, 288.0).unwrap();
    let delta = gromov_delta(&r.distances, 0).delta;
    let tol = delta / r.diameter();
    let t = tree_from_metric(&r, tol).unwrap();
    assert!(t.max_error(&r.distances) <= 3.0 * tol * r.diameter(), "{} vs {}", t.max_error(&r.distances), 3.0 * delta);
}

#[test]
fn constant_family_is_bounded() {
    let pres = Presentation::free(&["a", "b"]).unwrap();
    let fam = RepresentationFamily::constant(pres.clone(), vec![diag(1.5), [[1.2, 0.0], [0.5, 0.0], [0.4, 0.0], [1.0, 0.0]]]).unwrap();
    let graph = TwistedGraph::rose(&pres, &[1.0, 1.0]).unwrap();
    let run = run_degeneration(&DegenerationSetup::new(fam, graph, vec![1.0, 2.0, 3.0, 4.0])).unwrap();
    assert_eq!(run.case, DegenerationCase::Bounded);
    let e0 = run.steps[0].energy;
    assert!(run.steps.iter().all(|s| (s.energy - e0).abs() < 1e-9 * e0));
}

#[test]
fn short_schedule_fails_with_quadruple() {
    match run_degeneration(&stretch_setup(vec![1.0])) {
        Err(DegenerationError::NotTreeLike { quadruple, delta, diameter }) => {
            assert!(quadruple.iter().all(|&i| i < 53));
            assert!(delta > DEFAULT_DELTA_THRESHOLD * diameter);
        }
        other => panic!("expected not-tree-like, got {other:?}"),
    }
}

#[test]
fn run_arguments_are_validated() {
    assert!(run_degeneration(&stretch_setup(vec![])).is_err());
    assert!(run_degeneration(&stretch_setup(vec![2.0, 1.0])).is_err());
    let mut s = stretch_setup(vec![1.0, 2.0]);
    s.word_len = 4;
    assert!(run_degeneration(&s).is_err());
}

#[test]
fn runs_are_deterministic() {
    let s = stretch_setup(vec![2.0, 3.0]);
    let (r1, r2) = (run_degeneration(&s).unwrap(), run_degeneration(&s).unwrap());
    for (a, b) in r1.steps.iter().zip(&r2.steps) {
        assert_eq!(a.energy.to_bits(), b.energy.to_bits());
        assert_eq!(a.delta.to_bits(), b.delta.to_bits());
        assert_eq!(a.quadruple, b.quadruple);
        assert_eq!(a.lengths, b.lengths);
    }
}

#[test]
fn surface_family_runs() {
    let fam = RepresentationFamily::octagon_twist();
    let graph = TwistedGraph::rose(&fam.presentation(), &[1.0; 4]).unwrap();
    let run = run_degeneration(&DegenerationSetup::new(fam, graph, vec![2.0, 10.0, 20.0])).unwrap();
    assert_eq!(run.case, DegenerationCase::Divergent);
    assert!(run.steps.iter().all(|s| s.tree_extracted));
    for w in run.steps.windows(2) {
        assert!(w[1].delta_ratio() < w[0].delta_ratio());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn delta_matches_oracle(seed in any::<u64>(), n in 4usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // Random points in the plane: a genuine metric that is rarely tree-like.
        let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let d: Vec<Vec<f64>> = pts.iter().map(|a| pts.iter().map(|b| ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()).collect()).collect();
        prop_assert!((gromov_delta(&d, 0).delta - oracle_delta(&d)).abs() < 1e-12);
    }

    #[test]
    fn tree_metrics_have_zero_delta_and_round_trip(seed in any::<u64>(), leaves in 2usize..13) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = leaf_metric(&mut rng, leaves);
        prop_assert!(gromov_delta(&d, 0).delta < 1e-12);
        let t = tree_from_metric(&RescaledMetric::from_matrix(d.clone()).unwrap(), 1e-9).unwrap();
        prop_assert!(t.max_error(&d) <= 1e-9);
    }

    #[test]
    fn projective_compare_is_scale_invariant(v in prop::collection::vec(0.0f64..10.0, 1..6), k in 0.01f64..100.0) {
        prop_assume!(v.iter().any(|&x| x > 1e-3));
        let w: Vec<f64> = v.iter().map(|x| k * x).collect();
        prop_assert!(projective_compare(&v, &w).unwrap() < 1e-12);
    }
}
