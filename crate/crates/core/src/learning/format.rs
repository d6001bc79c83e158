//! Versioned text format for [`GbdtModel`].
//!
//! ```text
//! bareprover-gbdt 1
//! feature_bits 8
//! eta 0.2
//! base_margin 0
//! trees 1
//! tree 3
//! split 7 0
//! leaf 0.2
//! leaf -0.2
//! ```
//!
//! Each tree is a preorder dump; floats use Rust's shortest round-trip form.

use std::fmt::Write as _;

use super::gbdt::{GbdtModel, LearnError, Node, Tree};
use crate::features::FeatureConfig;

pub const FORMAT_MAGIC: &str = "bareprover-gbdt";
pub const FORMAT_VERSION: u32 = 1;

pub fn serialize(m: &GbdtModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{FORMAT_MAGIC} {FORMAT_VERSION}");
    let _ = writeln!(out, "feature_bits {}", m.feature_bits);
    let _ = writeln!(out, "eta {}", m.eta);
    let _ = writeln!(out, "base_margin {}", m.base_margin);
    let _ = writeln!(out, "trees {}", m.trees.len());
    for t in &m.trees {
        let _ = writeln!(out, "tree {}", t.nodes.len());
        write_subtree(&mut out, &t.nodes, 0);
    }
    out
}

fn write_subtree(out: &mut String, nodes: &[Node], i: usize) -> usize {
    match nodes[i] {
        Node::Leaf(v) => {
            let _ = writeln!(out, "leaf {v}");
            i + 1
        }
        Node::Split { slot, threshold, right } => {
            let _ = writeln!(out, "split {slot} {threshold}");
            let next = write_subtree(out, nodes, i + 1);
            debug_assert_eq!(next, right as usize);
            write_subtree(out, nodes, right as usize)
        }
    }
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn err(&self, message: impl Into<String>) -> LearnError {
        LearnError::Parse {
            line: self.last,
            message: message.into(),
        }
    }

    fn next(&mut self) -> Result<(usize, Vec<&'a str>), LearnError> {
        for (i, l) in self.inner.by_ref() {
            self.last = i + 1;
            let l = l.trim();
            if !l.is_empty() {
                return Ok((i + 1, l.split_whitespace().collect()));
            }
        }
        self.last += 1;
        Err(self.err("unexpected end of input"))
    }

    fn keyed(&mut self, key: &str) -> Result<&'a str, LearnError> {
        let (_, w) = self.next()?;
        match w.as_slice() {
            [k, v] if *k == key => Ok(v),
            _ => Err(self.err(format!("expected `{key} <value>`"))),
        }
    }

    fn number<T: std::str::FromStr>(&self, s: &str) -> Result<T, LearnError> {
        s.parse().map_err(|_| self.err(format!("invalid number `{s}`")))
    }
}

pub fn deserialize(text: &str) -> Result<GbdtModel, LearnError> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        last: 0,
    };
    let (_, head) = lines.next()?;
    match head.as_slice() {
        [magic, v] if *magic == FORMAT_MAGIC => {
            if *v != FORMAT_VERSION.to_string() {
                return Err(LearnError::VersionMismatch(v.to_string()));
            }
        }
        _ => return Err(lines.err(format!("expected `{FORMAT_MAGIC} {FORMAT_VERSION}` header"))),
    }
    let bits_text = lines.keyed("feature_bits")?;
    let bits: u32 = lines.number(bits_text)?;
    let cfg = FeatureConfig::new(bits).map_err(|e| lines.err(e.to_string()))?;
    let eta_text = lines.keyed("eta")?;
    let eta: f64 = lines.number(eta_text)?;
    let base_text = lines.keyed("base_margin")?;
    let base_margin: f64 = lines.number(base_text)?;
    let count_text = lines.keyed("trees")?;
    let count: usize = lines.number(count_text)?;
    let mut trees = Vec::with_capacity(count.min(1 << 16));
    for _ in 0..count {
        let size_text = lines.keyed("tree")?;
        let size: usize = lines.number(size_text)?;
        let mut nodes = Vec::with_capacity(size.min(1 << 16));
        read_subtree(&mut lines, &mut nodes)?;
        if nodes.len() != size {
            return Err(lines.err(format!("tree declares {size} nodes, found {}", nodes.len())));
        }
        trees.push(Tree { nodes });
    }
    if let Ok((line, _)) = lines.next() {
        return Err(LearnError::Parse {
            line,
            message: "trailing content after last tree".into(),
        });
    }
    Ok(GbdtModel {
        trees,
        eta,
        base_margin,
        feature_bits: cfg.bits(),
    })
}

fn read_subtree(lines: &mut Lines<'_>, nodes: &mut Vec<Node>) -> Result<(), LearnError> {
    let (_, w) = lines.next()?;
    match w.as_slice() {
        ["leaf", v] => {
            let v: f64 = lines.number(v)?;
            if !v.is_finite() {
                return Err(lines.err("leaf value must be finite"));
            }
            nodes.push(Node::Leaf(v));
        }
        ["split", s, t] => {
            let slot = lines.number(s)?;
            let threshold = lines.number(t)?;
            let at = nodes.len();
            nodes.push(Node::Split {
                slot,
                threshold,
                right: 0,
            });
            read_subtree(lines, nodes)?;
            let r = nodes.len() as u32;
            if let Node::Split { right, .. } = &mut nodes[at] {
                *right = r;
            }
            read_subtree(lines, nodes)?;
        }
        _ => return Err(lines.err("expected `leaf <value>` or `split <slot> <threshold>`")),
    }
    Ok(())
}
