use std::collections::HashMap;

use crate::features::{FeatureConfig, FeatureVector};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LearnError {
    #[error("cannot train on an empty dataset")]
    EmptyDataset,
    #[error("invalid training parameters: {0}")]
    InvalidParams(String),
    #[error("feature vector has {found} bits, model expects {expected}")]
    ConfigMismatch { expected: u8, found: u8 },
    #[error("unsupported model format version `{0}`")]
    VersionMismatch(String),
    #[error("model parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrainParams {
    pub depth: usize,
    pub trees: usize,
    pub eta: f64,
    pub lambda: f64,
    pub min_child: usize,
}

impl TrainParams {
    /// `eta = 0.2`, `lambda = 1`, `min_child = 1`.
    pub fn new(depth: usize, trees: usize) -> Self {
        TrainParams {
            depth,
            trees,
            eta: 0.2,
            lambda: 1.0,
            min_child: 1,
        }
    }

    pub fn validate(&self) -> Result<(), LearnError> {
        let bad = |m: &str| Err(LearnError::InvalidParams(m.to_string()));
        if self.depth == 0 {
            return bad("depth must be at least 1");
        }
        if self.trees == 0 {
            return bad("tree count must be at least 1");
        }
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return bad("eta must be in (0, 1]");
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return bad("lambda must be a finite non-negative number");
        }
        if self.min_child == 0 {
            return bad("min_child must be at least 1");
        }
        Ok(())
    }
}

/// Labelled feature vectors under one configuration, with a free-form tag
/// per row (source problem, loop, ...).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Dataset {
    pub rows: Vec<(FeatureVector, bool)>,
    pub tags: Vec<String>,
}

impl Dataset {
    pub fn new() -> Self {
        Dataset::default()
    }

    pub fn push(&mut self, fv: FeatureVector, label: bool, tag: impl Into<String>) {
        self.rows.push((fv, label));
        self.tags.push(tag.into());
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn positives(&self) -> usize {
        self.rows.iter().filter(|r| r.1).count()
    }

    /// The shared configuration, or an error if rows disagree.
    pub fn config(&self) -> Result<Option<FeatureConfig>, LearnError> {
        let Some(first) = self.rows.first() else { return Ok(None) };
        let cfg = first.0.config();
        for (fv, _) in &self.rows {
            if fv.bits() != cfg.bits() {
                return Err(LearnError::ConfigMismatch {
                    expected: cfg.bits(),
                    found: fv.bits(),
                });
            }
        }
        Ok(Some(cfg))
    }
}

/// Preorder node list: a split's left child is the next node, `right`
/// indexes the right child.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Node {
    Split { slot: u32, threshold: u32, right: u32 },
    Leaf(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Tree {
    pub nodes: Vec<Node>,
}

impl Tree {
    pub fn leaf(value: f64) -> Self {
        Tree {
            nodes: vec![Node::Leaf(value)],
        }
    }

    pub fn predict(&self, fv: &FeatureVector) -> f64 {
        let mut i = 0usize;
        loop {
            match self.nodes[i] {
                Node::Leaf(v) => return v,
                Node::Split { slot, threshold, right } => {
                    i = if fv.get(slot) <= threshold { i + 1 } else { right as usize };
                }
            }
        }
    }

    /// Longest root-to-leaf path, in edges.
    pub fn depth(&self) -> usize {
        fn go(nodes: &[Node], i: usize) -> (usize, usize) {
            // returns (depth, index after subtree)
            match nodes[i] {
                Node::Leaf(_) => (0, i + 1),
                Node::Split { .. } => {
                    let (l, next) = go(nodes, i + 1);
                    let (r, end) = go(nodes, next);
                    (1 + l.max(r), end)
                }
            }
        }
        go(&self.nodes, 0).0
    }

    pub fn root_split(&self) -> Option<(u32, u32)> {
        match self.nodes.first() {
            Some(Node::Split { slot, threshold, .. }) => Some((*slot, *threshold)),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GbdtModel {
    pub trees: Vec<Tree>,
    pub eta: f64,
    pub base_margin: f64,
    pub feature_bits: u8,
}

pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

impl GbdtModel {
    pub fn empty(cfg: FeatureConfig) -> Self {
        GbdtModel {
            trees: Vec::new(),
            eta: 0.2,
            base_margin: 0.0,
            feature_bits: cfg.bits(),
        }
    }

    pub fn config(&self) -> FeatureConfig {
        FeatureConfig::new(self.feature_bits as u32).expect("model bits validated on construction")
    }

    fn check(&self, fv: &FeatureVector) -> Result<(), LearnError> {
        if fv.bits() != self.feature_bits {
            return Err(LearnError::ConfigMismatch {
                expected: self.feature_bits,
                found: fv.bits(),
            });
        }
        Ok(())
    }

    pub fn predict_margin(&self, fv: &FeatureVector) -> Result<f64, LearnError> {
        self.check(fv)?;
        Ok(self.base_margin + self.trees.iter().map(|t| t.predict(fv)).sum::<f64>())
    }

    pub fn predict_prob(&self, fv: &FeatureVector) -> Result<f64, LearnError> {
        Ok(sigmoid(self.predict_margin(fv)?))
    }

    /// Copy with every leaf multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        let mut m = self.clone();
        for t in &mut m.trees {
            for n in &mut t.nodes {
                if let Node::Leaf(v) = n {
                    *v *= c;
                }
            }
        }
        m.base_margin *= c;
        m
    }

    /// Copy keeping only the first `k` trees.
    pub fn truncated(&self, k: usize) -> Self {
        let mut m = self.clone();
        m.trees.truncate(k);
        m
    }
}

/// Per-round diagnostics collected during training.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrainTrace {
    /// Mean log-loss before the first round and after each round.
    pub losses: Vec<f64>,
    /// Gain of every split that was accepted.
    pub split_gains: Vec<f64>,
}

pub fn log_loss(margins: &[f64], labels: &[bool]) -> f64 {
    let n = margins.len().max(1) as f64;
    margins
        .iter()
        .zip(labels)
        .map(|(&m, &y)| {
            // log(1 + e^{-m}) for y=1, log(1 + e^{m}) for y=0, computed stably
            let z = if y { -m } else { m };
            z.max(0.0) + (-z.abs()).exp().ln_1p()
        })
        .sum::<f64>()
        / n
}

pub fn train(data: &Dataset, params: &TrainParams) -> Result<GbdtModel, LearnError> {
    train_traced(data, params).map(|(m, _)| m)
}

pub fn train_traced(data: &Dataset, params: &TrainParams) -> Result<(GbdtModel, TrainTrace), LearnError> {
    params.validate()?;
    let cfg = data.config()?.ok_or(LearnError::EmptyDataset)?;
    let labels: Vec<bool> = data.rows.iter().map(|r| r.1).collect();
    let mut margins = vec![0.0f64; data.len()];
    let mut trace = TrainTrace {
        losses: vec![log_loss(&margins, &labels)],
        split_gains: Vec::new(),
    };
    let mut trees = Vec::with_capacity(params.trees);
    for _ in 0..params.trees {
        let (g, h): (Vec<f64>, Vec<f64>) = margins
            .iter()
            .zip(&labels)
            .map(|(&m, &y)| {
                let p = sigmoid(m);
                (p - f64::from(u8::from(y)), p * (1.0 - p))
            })
            .unzip();
        let mut builder = TreeBuilder {
            data,
            g: &g,
            h: &h,
            params,
            nodes: Vec::new(),
            gains: &mut trace.split_gains,
        };
        let all: Vec<usize> = (0..data.len()).collect();
        builder.build(&all, 0);
        let tree = Tree { nodes: builder.nodes };
        for (m, (fv, _)) in margins.iter_mut().zip(&data.rows) {
            *m += tree.predict(fv);
        }
        trace.losses.push(log_loss(&margins, &labels));
        trees.push(tree);
    }
    Ok((
        GbdtModel {
            trees,
            eta: params.eta,
            base_margin: 0.0,
            feature_bits: cfg.bits(),
        },
        trace,
    ))
}

struct TreeBuilder<'a> {
    data: &'a Dataset,
    g: &'a [f64],
    h: &'a [f64],
    params: &'a TrainParams,
    nodes: Vec<Node>,
    gains: &'a mut Vec<f64>,
}

struct Split {
    slot: u32,
    threshold: u32,
    gain: f64,
}

impl TreeBuilder<'_> {
    fn score(&self, g: f64, h: f64) -> f64 {
        let d = h + self.params.lambda;
        if d <= 0.0 {
            0.0
        } else {
            g * g / d
        }
    }

    fn leaf_value(&self, g: f64, h: f64) -> f64 {
        let d = h + self.params.lambda;
        if d <= 0.0 {
            0.0
        } else {
            -g / d * self.params.eta
        }
    }

    fn build(&mut self, rows: &[usize], depth: usize) {
        let gsum: f64 = rows.iter().map(|&i| self.g[i]).sum();
        let hsum: f64 = rows.iter().map(|&i| self.h[i]).sum();
        let split = if depth < self.params.depth {
            self.best_split(rows, gsum, hsum)
        } else {
            None
        };
        let Some(split) = split else {
            self.nodes.push(Node::Leaf(self.leaf_value(gsum, hsum)));
            return;
        };
        self.gains.push(split.gain);
        let (left, right): (Vec<usize>, Vec<usize>) = rows
            .iter()
            .partition(|&&i| self.data.rows[i].0.get(split.slot) <= split.threshold);
        let at = self.nodes.len();
        self.nodes.push(Node::Split {
            slot: split.slot,
            threshold: split.threshold,
            right: 0,
        });
        self.build(&left, depth + 1);
        let right_index = self.nodes.len() as u32;
        if let Node::Split { right, .. } = &mut self.nodes[at] {
            *right = right_index;
        }
        self.build(&right, depth + 1);
    }

    /// Exact greedy search. Slots are visited in increasing order and
    /// thresholds in increasing order; only a strictly larger gain replaces
    /// the incumbent.
    fn best_split(&self, rows: &[usize], gsum: f64, hsum: f64) -> Option<Split> {
        let mut by_slot: HashMap<u32, Vec<(u32, usize)>> = HashMap::new();
        for &i in rows {
            for &(slot, v) in self.data.rows[i].0.entries() {
                by_slot.entry(slot).or_default().push((v, i));
            }
        }
        let mut slots: Vec<u32> = by_slot.keys().copied().collect();
        slots.sort_unstable();
        let parent = self.score(gsum, hsum);
        let min_child = self.params.min_child;
        let n = rows.len();
        let mut best: Option<Split> = None;
        for slot in slots {
            let mut present = by_slot.remove(&slot).expect("slot collected above");
            present.sort_unstable();
            let zeros = n - present.len();
            let pg: f64 = present.iter().map(|&(_, i)| self.g[i]).sum();
            let ph: f64 = present.iter().map(|&(_, i)| self.h[i]).sum();
            let (mut gl, mut hl, mut nl) = (gsum - pg, hsum - ph, zeros);
            let mut threshold = 0u32;
            let mut k = 0;
            loop {
                if nl >= min_child && n - nl >= min_child && nl > 0 {
                    let gain = 0.5 * (self.score(gl, hl) + self.score(gsum - gl, hsum - hl) - parent);
                    if gain > 0.0 && best.as_ref().is_none_or(|b| gain > b.gain) {
                        best = Some(Split { slot, threshold, gain });
                    }
                }
                if k == present.len() {
                    break;
                }
                threshold = present[k].0;
                while k < present.len() && present[k].0 == threshold {
                    gl += self.g[present[k].1];
                    hl += self.h[present[k].1];
                    nl += 1;
                    k += 1;
                }
                if k == present.len() {
                    break;
                }
            }
        }
        best
    }
}
