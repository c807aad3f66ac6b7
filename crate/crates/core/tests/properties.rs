mod common;

use proptest::prelude::*;
use sslrank::data::{load_dataset, mask_labels, weights_in_order, write_dataset, FeatureColumn, Task};
use sslrank::ensemble::{grow_ensemble, EnsembleMethod, EnsembleParams};
use sslrank::eval::{ari, make_folds};
use sslrank::pct::{grow_tree, impurity, PctParams, SplitMode, TreeNode};
use sslrank::rank_ensemble::{genie3_scores, genie3_tree, rf_scores, symbolic_scores, symbolic_tree};
use sslrank::relief::{nearest_neighbours, ssl_relief, ReliefParams};
use sslrank::rng::{permutation, seeded};
use sslrank::{rank, Dataset, RankMethod, RankerConfig};

use common::{continuous_dataset, random_dataset, ALL_TASKS};

fn task_strategy() -> impl Strategy<Value = Task> {
    (0..ALL_TASKS.len()).prop_map(|i| ALL_TASKS[i])
}

fn method_strategy() -> impl Strategy<Value = EnsembleMethod> {
    prop_oneof![
        Just(EnsembleMethod::Bagging),
        Just(EnsembleMethod::RandomForest),
        Just(EnsembleMethod::ExtraTrees)
    ]
}

/// Walks the tree with the examples that reached each node.
fn visit(node: &TreeNode, examples: &[usize], d: &Dataset, f: &mut impl FnMut(&TreeNode, &[usize], &[usize], &[usize])) {
    if let TreeNode::Internal { test, left, right, .. } = node {
        let (l, r): (Vec<usize>, Vec<usize>) = examples.iter().partition(|&&e| test.goes_left(d.value(e, test.feature())));
        f(node, examples, &l, &r);
        visit(left, &l, d, f);
        visit(right, &r, d, f);
    } else {
        f(node, examples, &[], &[]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn heuristic_values_and_counts_are_consistent(
        task in task_strategy(),
        seed in any::<u64>(),
        w in 0.0f64..=1.0,
        mode in prop_oneof![Just(SplitMode::Exhaustive), Just(SplitMode::SingleRandom)],
    ) {
        let d = random_dataset(task, 60, 4, 0.6, seed);
        let params = PctParams { supervision: w, split_mode: mode, ..PctParams::default() };
        let examples: Vec<usize> = (0..60).collect();
        let tree = grow_tree(&examples, &d, &params, &mut seeded(seed));
        visit(&tree, &examples, &d, &mut |node, reached, l, r| {
            assert_eq!(node.n_reached(), reached.len());
            if let TreeNode::Internal { h_star, .. } = node {
                assert_eq!(l.len() + r.len(), reached.len());
                assert!(l.len() >= params.min_leaf_size && r.len() >= params.min_leaf_size);
                let n = |s: &[usize]| s.len() as f64 * impurity(s, &d, &params);
                let h = n(reached) - n(l) - n(r);
                assert!((h - h_star).abs() <= 1e-9 * (1.0 + h.abs()), "{h} vs {h_star}");
                assert!(*h_star > 0.0);
            }
        });
    }

    #[test]
    fn score_identities_hold_per_tree(
        task in task_strategy(),
        method in method_strategy(),
        seed in any::<u64>(),
    ) {
        let d = random_dataset(task, 50, 5, 0.7, seed);
        let e = grow_ensemble(&d, &EnsembleParams::new(method, 4, seed), &PctParams { supervision: 0.6, ..PctParams::default() }).unwrap();
        for tree in &e.trees {
            let (mut h_sum, mut n_sum) = (0.0, 0.0);
            tree.for_each_internal(&mut |_, h, n| {
                h_sum += h;
                n_sum += n as f64 / 50.0;
            });
            let g: f64 = genie3_tree(tree, 5).iter().sum();
            prop_assert!((g - h_sum).abs() <= 1e-9 * (1.0 + h_sum));
            let s: f64 = symbolic_tree(tree, 5, 50).iter().sum();
            prop_assert!((s - n_sum).abs() <= 1e-12 * (1.0 + n_sum));
        }
        prop_assert!(genie3_scores(&e, 5).iter().all(|&v| v >= 0.0));
        prop_assert!(symbolic_scores(&e, 5).iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn constant_feature_has_zero_rf_score(task in task_strategy(), method in method_strategy(), seed in any::<u64>()) {
        let base = random_dataset(task, 50, 3, 1.0, seed);
        let mut features = base.features().to_vec();
        features.insert(1, FeatureColumn::numeric("constant", vec![1.5; 50]));
        let d = Dataset::new(features, base.targets().clone()).unwrap();
        let e = grow_ensemble(&d, &EnsembleParams::new(method, 5, seed), &PctParams::default()).unwrap();
        if let Ok(scores) = rf_scores(&e, &d, seed) {
            prop_assert_eq!(scores[1], 0.0);
        }
        prop_assert_eq!(symbolic_scores(&e, 4)[1], 0.0);
    }

    #[test]
    fn rankings_are_deterministic(seed in any::<u64>(), method in prop_oneof![Just(RankMethod::Symbolic), Just(RankMethod::Rf), Just(RankMethod::Relief)]) {
        let d = random_dataset(Task::Str, 50, 4, 0.5, seed);
        let mut cfg = RankerConfig::new(method, seed);
        cfg.ensemble.n_trees = 5;
        let a = rank(&d, &cfg).unwrap();
        let b = rank(&d, &cfg).unwrap();
        prop_assert_eq!(a.to_csv().unwrap(), b.to_csv().unwrap());
    }

    #[test]
    fn scores_follow_feature_permutations(seed in any::<u64>(), task in task_strategy()) {
        let d = continuous_dataset(task, 40, 4, 0.6, seed);
        let order = permutation(4, &mut seeded(seed ^ 1));
        let p = d.permute_features(&order);
        // Resampling repeats examples and small nodes admit the same
        // partition through several features; such exact ties go to the
        // lowest index, which a reordering changes. Deterministic trees with
        // larger leaves keep candidate partitions distinct.
        let pp = PctParams { supervision: 0.5, min_leaf_size: 8, ..PctParams::default() };
        let all: Vec<usize> = (0..40).collect();
        let a = grow_tree(&all, &d, &pp, &mut seeded(seed));
        let b = grow_tree(&all, &p, &pp, &mut seeded(seed));
        let (sym, sym_p) = (symbolic_tree(&a, 4, 40), symbolic_tree(&b, 4, 40));
        let (gen, gen_p) = (genie3_tree(&a, 4), genie3_tree(&b, 4));
        let relief_p = ReliefParams { seed, ..ReliefParams::default() };
        let rel = ssl_relief(&d, &relief_p).unwrap().scores;
        let rel_p = ssl_relief(&p, &relief_p).unwrap().scores;
        for (new, &old) in order.iter().enumerate() {
            prop_assert!((sym_p[new] - sym[old]).abs() < 1e-12);
            prop_assert!((gen_p[new] - gen[old]).abs() < 1e-9);
            prop_assert!((rel_p[new] - rel[old]).abs() < 1e-12);
        }
    }

    #[test]
    fn positive_rescaling_keeps_scores(seed in any::<u64>(), factor in 0.5f64..8.0) {
        let d = continuous_dataset(Task::Str, 50, 3, 0.6, seed);
        let mut features = d.features().to_vec();
        let scaled: Vec<f64> = features[1].values().iter().map(|v| v * factor).collect();
        features[1] = FeatureColumn::numeric("x1", scaled);
        let s = Dataset::new(features, d.targets().clone()).unwrap();
        let ep = EnsembleParams::new(EnsembleMethod::Bagging, 3, seed);
        let pp = PctParams { supervision: 1.0, ..PctParams::default() };
        let a = grow_ensemble(&d, &ep, &pp).unwrap();
        let b = grow_ensemble(&s, &ep, &pp).unwrap();
        prop_assert_eq!(symbolic_scores(&a, 3), symbolic_scores(&b, 3));
        let (ga, gb) = (genie3_scores(&a, 3), genie3_scores(&b, 3));
        for (x, y) in ga.iter().zip(&gb) {
            prop_assert!((x - y).abs() < 1e-9);
        }
        let rp = ReliefParams { seed, ..ReliefParams::default() };
        let (ra, rb) = (ssl_relief(&d, &rp).unwrap().scores, ssl_relief(&s, &rp).unwrap().scores);
        for (x, y) in ra.iter().zip(&rb) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn relief_scores_are_bounded(seed in any::<u64>(), task in task_strategy(), w0 in 0.0f64..1.0) {
        let d = random_dataset(task, 40, 4, 0.5, seed);
        let p = ReliefParams { w0, w1: 1.0, seed, ..ReliefParams::default() };
        let r = ssl_relief(&d, &p).unwrap();
        prop_assert!(r.scores.iter().all(|s| (-1.0 - 1e-12..=1.0 + 1e-12).contains(s)));
    }

    #[test]
    fn neighbours_ignore_labels(seed in any::<u64>()) {
        let d = random_dataset(Task::Classification, 40, 4, 1.0, seed);
        let masked = mask_labels(&d, 7, seed).unwrap();
        for r in [0, 13, 39] {
            prop_assert_eq!(nearest_neighbours(&d, r, 10), nearest_neighbours(&masked, r, 10));
        }
    }

    #[test]
    fn ari_is_relabel_invariant(seed in any::<u64>(), n in 2usize..40) {
        let mut rng = seeded(seed);
        use rand::Rng as _;
        let a: Vec<usize> = (0..n).map(|_| rng.random_range(0..4)).collect();
        let b: Vec<usize> = (0..n).map(|_| rng.random_range(0..5)).collect();
        let relabel = permutation(4, &mut rng);
        let a2: Vec<usize> = a.iter().map(|&c| relabel[c]).collect();
        prop_assert!((ari(&a, &b) - ari(&a2, &b)).abs() < 1e-12);
        prop_assert_eq!(ari(&a, &a), 1.0);
    }

    #[test]
    fn masks_and_folds_nest(seed in any::<u64>(), m in 30usize..120) {
        let d = random_dataset(Task::Str, m, 2, 1.0, seed);
        let small = mask_labels(&d, m / 4, seed).unwrap();
        let large = mask_labels(&d, m / 2, seed).unwrap();
        prop_assert!((0..m).all(|e| !small.targets().is_labeled(e) || large.targets().is_labeled(e)));
        let grid = [m / 10, m / 5, m / 3];
        let plan = make_folds(&d, 5, &grid, seed).unwrap();
        for i in 0..5 {
            let sets: Vec<Vec<usize>> = grid.iter().map(|&l| plan.labeled(i, l)).collect();
            for w in sets.windows(2) {
                prop_assert!(w[0].iter().all(|e| w[1].contains(e)));
            }
            for (s, &l) in sets.iter().zip(&grid) {
                prop_assert_eq!(s.len(), l);
            }
        }
    }

    #[test]
    fn hierarchy_weights_ignore_processing_order(seed in any::<u64>(), alpha in 0.05f64..0.95) {
        // A random DAG where every label's parents have smaller indices.
        let mut rng = seeded(seed);
        use rand::Rng as _;
        let n = 8;
        let parents: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..i).filter(|_| rng.random::<f64>() < 0.3).collect())
            .collect();
        let natural: Vec<usize> = (0..n).collect();
        let reference = weights_in_order(&parents, alpha, &natural).unwrap();
        // Any order that visits parents first gives the same weights.
        let mut order = natural.clone();
        for _ in 0..20 {
            let i = rng.random_range(0..n - 1);
            if !parents[order[i + 1]].contains(&order[i]) {
                order.swap(i, i + 1);
            }
        }
        prop_assert_eq!(weights_in_order(&parents, alpha, &order).unwrap(), reference);
    }

    #[test]
    fn datasets_round_trip_through_files(task in task_strategy(), seed in any::<u64>()) {
        let d = random_dataset(task, 25, 4, 0.6, seed);
        let dir = tempfile::tempdir().unwrap();
        let (data, schema) = (dir.path().join("d.csv"), dir.path().join("s.json"));
        write_dataset(&d, &data, &schema).unwrap();
        prop_assert_eq!(load_dataset(&data, &schema).unwrap(), d);
    }
}
