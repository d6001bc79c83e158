//! Gradient-boosted decision trees on logistic loss: exact greedy trainer,
//! predictor and a versioned text format.

mod format;
mod gbdt;

pub use format::{deserialize, serialize, FORMAT_MAGIC, FORMAT_VERSION};
pub use gbdt::{
    log_loss, sigmoid, train, train_traced, Dataset, GbdtModel, LearnError, Node, TrainParams, TrainTrace, Tree,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::{FeatureConfig, FeatureVector};
    use proptest::prelude::*;

    fn cfg() -> FeatureConfig {
        FeatureConfig::new(8).unwrap()
    }

    fn fv(pairs: &[(u32, u32)]) -> FeatureVector {
        FeatureVector::from_pairs(cfg(), pairs.iter().copied())
    }

    fn dataset(rows: &[(&[(u32, u32)], bool)]) -> Dataset {
        let mut d = Dataset::new();
        for (i, (p, y)) in rows.iter().enumerate() {
            d.push(fv(p), *y, format!("r{i}"));
        }
        d
    }

    #[test]
    fn all_positive_single_round_leaf() {
        let d = dataset(&[(&[(1, 1)], true), (&[(1, 2)], true), (&[(2, 1)], true), (&[], true)]);
        let m = train(&d, &TrainParams::new(3, 1)).unwrap();
        assert_eq!(m.trees.len(), 1);
        // -(4 * (0.5 - 1)) / (4 * 0.25 + 1) = 1.0, times eta
        assert_eq!(m.trees[0].nodes, vec![Node::Leaf(0.2)]);
        assert!((m.predict_margin(&fv(&[])).unwrap() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn perfect_split_found_at_root() {
        let d = dataset(&[
            (&[(7, 1), (3, 1)], true),
            (&[(7, 2)], true),
            (&[(3, 1)], false),
            (&[(5, 4)], false),
        ]);
        let m = train(&d, &TrainParams::new(1, 1)).unwrap();
        assert_eq!(m.trees[0].root_split(), Some((7, 0)));
        assert_eq!(m.trees[0].depth(), 1);
    }

    #[test]
    fn xor_is_learnable() {
        let mut rows: Vec<(&[(u32, u32)], bool)> = Vec::new();
        for _ in 0..5 {
            rows.push((&[], false));
        }
        for _ in 0..3 {
            rows.push((&[(2, 1)], true));
        }
        for _ in 0..4 {
            rows.push((&[(1, 1)], true));
        }
        for _ in 0..2 {
            rows.push((&[(1, 1), (2, 1)], false));
        }
        let d = dataset(&rows);
        let m = train(&d, &TrainParams::new(3, 50)).unwrap();
        let correct = d
            .rows
            .iter()
            .filter(|(x, y)| (m.predict_prob(x).unwrap() >= 0.5) == *y)
            .count();
        assert!(correct as f64 / d.len() as f64 >= 0.95);
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        assert_eq!(train(&Dataset::new(), &TrainParams::new(2, 2)), Err(LearnError::EmptyDataset));
        let d = dataset(&[(&[], true)]);
        assert!(matches!(train(&d, &TrainParams::new(2, 0)), Err(LearnError::InvalidParams(_))));
        assert!(matches!(train(&d, &TrainParams::new(0, 1)), Err(LearnError::InvalidParams(_))));
        let mut mixed = d.clone();
        mixed.push(FeatureVector::empty(FeatureConfig::new(9).unwrap()), false, "x");
        assert!(matches!(train(&mixed, &TrainParams::new(1, 1)), Err(LearnError::ConfigMismatch { .. })));
    }

    #[test]
    fn prediction_basics() {
        let mut m = GbdtModel::empty(cfg());
        assert_eq!(m.predict_margin(&fv(&[(1, 1)])).unwrap(), 0.0);
        assert_eq!(m.predict_prob(&fv(&[])).unwrap(), 0.5);
        m.trees.push(Tree::leaf(0.2));
        assert_eq!(m.predict_margin(&fv(&[])).unwrap(), 0.2);
        assert!((m.predict_prob(&fv(&[])).unwrap() - 0.549_833_997_312_478).abs() < 1e-12);
        m.trees.push(Tree::leaf(0.2));
        assert!((m.predict_margin(&fv(&[])).unwrap() - 0.4).abs() < 1e-15);
        assert!(sigmoid(-700.0) > 0.0);
        let other = FeatureVector::empty(FeatureConfig::new(15).unwrap());
        assert!(matches!(m.predict_margin(&other), Err(LearnError::ConfigMismatch { expected: 8, found: 15 })));
    }

    #[test]
    fn text_format_round_trip() {
        let d = dataset(&[
            (&[(7, 1), (3, 1)], true),
            (&[(7, 2)], true),
            (&[(3, 1)], false),
            (&[(5, 4)], false),
            (&[(5, 1), (7, 3)], true),
        ]);
        let m = train(&d, &TrainParams::new(2, 7)).unwrap();
        let text = serialize(&m);
        let back = deserialize(&text).unwrap();
        assert_eq!(back, m);
        assert_eq!(serialize(&back), text);
        for (x, _) in &d.rows {
            assert_eq!(m.predict_margin(x).unwrap().to_bits(), back.predict_margin(x).unwrap().to_bits());
        }
        let cut = &text[..text.trim_end().rfind('\n').unwrap()];
        assert!(matches!(deserialize(cut), Err(LearnError::Parse { .. })));
        let v2 = text.replacen("bareprover-gbdt 1", "bareprover-gbdt 2", 1);
        assert_eq!(deserialize(&v2), Err(LearnError::VersionMismatch("2".into())));
        let bad = text.replacen("eta 0.2", "eta zero", 1);
        assert_eq!(
            deserialize(&bad),
            Err(LearnError::Parse {
                line: 3,
                message: "invalid number `zero`".into()
            })
        );
    }

    // Independent recomputation for featureless rows: every tree is one leaf.
    fn hand_leaves(labels: &[bool], rounds: usize, eta: f64, lambda: f64) -> Vec<f64> {
        let mut margin = 0.0f64;
        let mut out = Vec::new();
        for _ in 0..rounds {
            let p = 1.0 / (1.0 + (-margin).exp());
            let g: f64 = labels.iter().map(|&y| p - if y { 1.0 } else { 0.0 }).sum();
            let h = labels.len() as f64 * p * (1.0 - p);
            let leaf = -g / (h + lambda) * eta;
            out.push(leaf);
            margin += leaf;
        }
        out
    }

    fn small_dataset() -> impl Strategy<Value = Vec<(Vec<(u32, u32)>, bool)>> {
        prop::collection::vec((prop::collection::vec((0u32..6, 1u32..4), 0..4), any::<bool>()), 1..40)
    }

    fn to_dataset(rows: &[(Vec<(u32, u32)>, bool)]) -> Dataset {
        let mut d = Dataset::new();
        for (p, y) in rows {
            d.push(fv(p), *y, "p");
        }
        d
    }

    proptest! {
        #[test]
        fn single_leaf_values_match_hand_computation(labels in prop::collection::vec(any::<bool>(), 1..=8), rounds in 1usize..5, lambda in 0.5f64..3.0) {
            let mut d = Dataset::new();
            for &y in &labels {
                d.push(fv(&[]), y, "x");
            }
            let mut params = TrainParams::new(2, rounds);
            params.lambda = lambda;
            let m = train(&d, &params).unwrap();
            let expected = hand_leaves(&labels, rounds, 0.2, lambda);
            for (t, e) in m.trees.iter().zip(expected) {
                let [Node::Leaf(v)] = t.nodes[..] else { panic!("expected a single leaf") };
                prop_assert!((v - e).abs() < 1e-12);
            }
        }

        #[test]
        fn loss_monotone_depth_bounded_gains_nonnegative(rows in small_dataset(), depth in 1usize..4, trees in 1usize..8) {
            let d = to_dataset(&rows);
            let (m, trace) = train_traced(&d, &TrainParams::new(depth, trees)).unwrap();
            prop_assert_eq!(m.trees.len(), trees);
            prop_assert_eq!(trace.losses.len(), trees + 1);
            for w in trace.losses.windows(2) {
                prop_assert!(w[1] <= w[0] + 1e-9, "{:?}", trace.losses);
            }
            prop_assert!(m.trees.iter().all(|t| t.depth() <= depth));
            prop_assert!(trace.split_gains.iter().all(|g| *g >= 0.0));
            for (x, _) in &d.rows {
                prop_assert!(m.predict_margin(x).unwrap().is_finite());
            }
        }

        #[test]
        fn training_is_deterministic(rows in small_dataset()) {
            let d = to_dataset(&rows);
            let p = TrainParams::new(3, 5);
            prop_assert_eq!(serialize(&train(&d, &p).unwrap()), serialize(&train(&d, &p).unwrap()));
        }
    }
}
