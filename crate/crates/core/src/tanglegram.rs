//! Tanglegrams: two rooted binary trees plus a perfect matching of leaves.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::format;
use crate::tree::{BinaryTree, NodeId, TreeBuilder};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// A matching edge, identified by the leaf indices of its two endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatchingEdge {
    pub left: usize,
    pub right: usize,
}

/// A clade of one of the two trees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CladeRef {
    pub side: Side,
    pub node: NodeId,
}

/// A tanglegram `(L, R, M)`.
///
/// Matched leaves carry the same label in both trees; the label is the
/// edge's name in the text format.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tanglegram {
    left: BinaryTree,
    right: BinaryTree,
    /// left leaf index -> right leaf index
    matching: Vec<usize>,
    /// right leaf index -> left leaf index
    inverse: Vec<usize>,
}

impl Tanglegram {
    /// Builds a tanglegram from two trees and a bijection `matching[i] = j`
    /// from left leaf `i` to right leaf `j`. Right leaves are relabeled with
    /// the labels of their left partners.
    pub fn new(left: BinaryTree, right: BinaryTree, matching: Vec<usize>) -> Result<Self> {
        let n = left.n();
        if right.n() != n {
            return Err(Error::InvalidTanglegram(format!(
                "trees have {} and {} leaves",
                n,
                right.n()
            )));
        }
        if matching.len() != n {
            return Err(Error::InvalidTanglegram(format!(
                "matching has {} entries for {} leaves",
                matching.len(),
                n
            )));
        }
        let mut inverse = vec![usize::MAX; n];
        for (i, &j) in matching.iter().enumerate() {
            if j >= n || inverse[j] != usize::MAX {
                return Err(Error::InvalidTanglegram(
                    "matching is not a bijection".into(),
                ));
            }
            inverse[j] = i;
        }
        let right = if (0..n).all(|j| right.leaf_label(j) == left.leaf_label(inverse[j])) {
            right
        } else {
            let rename: HashMap<String, String> = (0..n)
                .map(|j| {
                    (
                        right.leaf_label(j).to_string(),
                        left.leaf_label(inverse[j]).to_string(),
                    )
                })
                .collect();
            right.relabel(|old| rename[old].clone())?
        };
        Ok(Self {
            left,
            right,
            matching,
            inverse,
        })
    }

    /// Builds a tanglegram whose matching pairs leaves with equal labels.
    pub fn from_shared_labels(left: BinaryTree, right: BinaryTree) -> Result<Self> {
        if left.n() != right.n() {
            return Err(Error::InvalidTanglegram(format!(
                "trees have {} and {} leaves",
                left.n(),
                right.n()
            )));
        }
        let index = right.label_index();
        let matching = left
            .leaf_labels()
            .map(|l| {
                index.get(l).copied().ok_or_else(|| {
                    Error::InvalidTanglegram(format!("label `{l}` missing from the right tree"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(left, right, matching)
    }

    pub fn n(&self) -> usize {
        self.matching.len()
    }

    pub fn left(&self) -> &BinaryTree {
        &self.left
    }

    pub fn right(&self) -> &BinaryTree {
        &self.right
    }

    pub fn tree(&self, side: Side) -> &BinaryTree {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    /// `matching()[i]` is the right leaf matched to left leaf `i`.
    pub fn matching(&self) -> &[usize] {
        &self.matching
    }

    /// `inverse_matching()[j]` is the left leaf matched to right leaf `j`.
    pub fn inverse_matching(&self) -> &[usize] {
        &self.inverse
    }

    pub fn edges(&self) -> impl Iterator<Item = MatchingEdge> + '_ {
        self.matching
            .iter()
            .enumerate()
            .map(|(left, &right)| MatchingEdge { left, right })
    }

    pub fn edge_by_label(&self, label: &str) -> Option<MatchingEdge> {
        let left = self.left.leaf_labels().position(|l| l == label)?;
        Some(MatchingEdge {
            left,
            right: self.matching[left],
        })
    }

    pub fn edge_label(&self, e: MatchingEdge) -> &str {
        self.left.leaf_label(e.left)
    }

    /// Same tanglegram with the roles of the two trees exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            left: self.right.clone(),
            right: self.left.clone(),
            matching: self.inverse.clone(),
            inverse: self.matching.clone(),
        }
    }

    /// Renames every edge label through `f`.
    pub fn relabel(&self, mut f: impl FnMut(&str) -> String) -> Result<Self> {
        let left = self.left.relabel(&mut f)?;
        let right = self.right.relabel(&mut f)?;
        Self::new(left, right, self.matching.clone())
    }

    /// The subtanglegram induced by `keep`: both trees are restricted to the
    /// kept endpoints, degree-two vertices are suppressed, and the surviving
    /// vertex closest to the old root becomes the new root.
    pub fn induce_subtanglegram(&self, keep: &[MatchingEdge]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::InvalidArgument(
                "cannot induce a subtanglegram on no edges".into(),
            ));
        }
        let n = self.n();
        let mut keep_left = vec![false; n];
        let mut keep_right = vec![false; n];
        for e in keep {
            if e.left >= n || self.matching[e.left] != e.right {
                return Err(Error::InvalidArgument(format!(
                    "({}, {}) is not a matching edge",
                    e.left, e.right
                )));
            }
            keep_left[e.left] = true;
            keep_right[e.right] = true;
        }
        let left = restrict(&self.left, &keep_left)?;
        let right = restrict(&self.right, &keep_right)?;
        Self::from_shared_labels(left, right)
    }

    /// `T - e`.
    pub fn remove_edge(&self, e: MatchingEdge) -> Result<Self> {
        let keep: Vec<MatchingEdge> = self.edges().filter(|&f| f != e).collect();
        if keep.len() == self.n() {
            return Err(Error::InvalidArgument(format!(
                "({}, {}) is not a matching edge",
                e.left, e.right
            )));
        }
        self.induce_subtanglegram(&keep)
    }

    /// Label-free canonical form: two tanglegrams get the same string exactly
    /// when they are isomorphic (tree isomorphisms on each side that carry
    /// matched pairs to matched pairs).
    ///
    /// Cost grows with the automorphism group of the smaller-symmetry tree,
    /// `2^s` for `s` internal nodes with isomorphic child clades.
    pub fn canonical_form(&self) -> String {
        let sym_left = symmetric_nodes(&self.left).len();
        let sym_right = symmetric_nodes(&self.right).len();
        if sym_left <= sym_right {
            format!("L{}", canonical_from_left(self))
        } else {
            format!("R{}", canonical_from_left(&self.swapped()))
        }
    }

    pub fn is_isomorphic(&self, other: &Tanglegram) -> bool {
        self.n() == other.n() && self.canonical_form() == other.canonical_form()
    }
}

impl fmt::Display for Tanglegram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format::serialize(self))
    }
}

fn restrict(tree: &BinaryTree, keep: &[bool]) -> Result<BinaryTree> {
    let mut b = TreeBuilder::new();
    let mut image: Vec<Option<usize>> = vec![None; tree.node_count()];
    for id in (0..tree.node_count()).rev() {
        image[id] = match tree.children(id) {
            None => {
                let leaf = tree.leaf_index(id).expect("leaf");
                keep[leaf].then(|| b.leaf(tree.leaf_label(leaf)))
            }
            Some([x, y]) => match (image[x], image[y]) {
                (Some(p), Some(q)) => Some(b.join(p, q)),
                (Some(p), None) | (None, Some(p)) => Some(p),
                (None, None) => None,
            },
        };
    }
    b.build()
}

fn symmetric_nodes(tree: &BinaryTree) -> Vec<NodeId> {
    let shapes = tree.canonical_strings(|_| "*".to_string());
    tree.internal_nodes()
        .iter()
        .copied()
        .filter(|&v| {
            let [a, b] = tree.children(v).expect("internal");
            shapes[a] == shapes[b]
        })
        .collect()
}

fn canonical_from_left(t: &Tanglegram) -> String {
    let left = t.left();
    let shapes = left.canonical_strings(|_| "*".to_string());
    let sym = symmetric_nodes(left);
    let mut sym_bit = vec![usize::MAX; left.node_count()];
    for (k, &v) in sym.iter().enumerate() {
        sym_bit[v] = k;
    }

    let mut best: Option<String> = None;
    let mut rank = vec![0usize; t.n()];
    let combos: u64 = 1u64 << sym.len().min(63);
    for mask in 0..combos {
        // Leaf order of the canonical drawing of L under this tie choice.
        let mut next = 0;
        let mut stack = vec![left.root()];
        while let Some(v) = stack.pop() {
            match left.children(v) {
                None => {
                    rank[left.leaf_index(v).expect("leaf")] = next;
                    next += 1;
                }
                Some([a, b]) => {
                    let (mut first, mut second) = if shapes[a] <= shapes[b] {
                        (a, b)
                    } else {
                        (b, a)
                    };
                    let k = sym_bit[v];
                    if k != usize::MAX && mask >> k & 1 == 1 {
                        std::mem::swap(&mut first, &mut second);
                    }
                    stack.push(second);
                    stack.push(first);
                }
            }
        }
        let right = t.right();
        let inv = t.inverse_matching();
        let s = right
            .canonical_strings(|id| rank[inv[right.leaf_index(id).expect("leaf")]].to_string());
        let s = std::mem::take(&mut s.into_iter().next().expect("root string"));
        if best.as_ref().is_none_or(|b| s < *b) {
            best = Some(s);
        }
    }
    format!(
        "{}|{}",
        shapes[left.root()],
        best.expect("at least one combination")
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse;

    #[test]
    fn construction_checks_bijection() {
        let l = BinaryTree::parse("(a,b)").unwrap();
        let r = BinaryTree::parse("(c,d)").unwrap();
        assert!(Tanglegram::new(l.clone(), r.clone(), vec![0, 0]).is_err());
        assert!(Tanglegram::new(l.clone(), r.clone(), vec![0]).is_err());
        let t = Tanglegram::new(l, r, vec![1, 0]).unwrap();
        assert_eq!(t.right().to_parenthesized(), "(b,a)");
        assert_eq!(t.inverse_matching(), &[1, 0]);
    }

    #[test]
    fn shared_labels_must_match() {
        let l = BinaryTree::parse("(a,b)").unwrap();
        let r = BinaryTree::parse("(a,c)").unwrap();
        assert!(Tanglegram::from_shared_labels(l, r).is_err());
    }

    #[test]
    fn full_keep_is_identity() {
        let t = parse("tgl v1\n((a,b),(c,d));\n((a,c),(b,d));\n").unwrap();
        let all: Vec<_> = t.edges().collect();
        assert_eq!(t.induce_subtanglegram(&all).unwrap(), t);
        assert!(t.induce_subtanglegram(&[]).is_err());
    }

    #[test]
    fn removal_suppresses_degree_two_nodes() {
        let t = parse("tgl v1\n((a,b),(c,d));\n((a,c),(b,d));\n").unwrap();
        let e = t.edge_by_label("a").unwrap();
        let s = t.remove_edge(e).unwrap();
        assert_eq!(s.left().to_parenthesized(), "(b,(c,d))");
        assert_eq!(s.right().to_parenthesized(), "(c,(b,d))");
        let only = t.induce_subtanglegram(&[e]).unwrap();
        assert_eq!(only.n(), 1);
    }

    #[test]
    fn canonical_form_ignores_labels_and_child_order() {
        let t = parse("tgl v1\n((a,b),(c,d));\n((a,c),(b,d));\n").unwrap();
        let u = parse("tgl v1\n((z,y),(w,x));\n((x,y),(z,w));\n").unwrap();
        assert_eq!(t.canonical_form(), u.canonical_form());
        let planar = parse("tgl v1\n((a,b),(c,d));\n((a,b),(c,d));\n").unwrap();
        assert!(!t.is_isomorphic(&planar));
    }
}
