//! Rooted binary trees stored as a flat node table.
//!
//! Every [`BinaryTree`] is normalized so that node ids follow a preorder
//! traversal (root is node 0, the first child is visited before the second).
//! Consequences the rest of the crate relies on:
//!
//! * leaf indices are assigned in preorder, so the leaves of any clade form a
//!   contiguous range of leaf indices;
//! * internal nodes are ranked in preorder, so the root has internal rank 0;
//! * a parent always has a smaller id than its children.

use std::collections::HashMap;
use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::format;

/// Index into a tree's node table.
pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Node {
    parent: Option<NodeId>,
    children: Option<[NodeId; 2]>,
    label: Option<String>,
}

impl Node {
    pub fn parent(&self) -> Option<NodeId> {
        self.parent
    }

    pub fn children(&self) -> Option<[NodeId; 2]> {
        self.children
    }

    /// Leaf label; internal nodes carry none.
    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_none()
    }
}

/// A rooted binary tree: every node has zero or two children.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryTree {
    nodes: Vec<Node>,
    /// leaf index -> node id
    leaves: Vec<NodeId>,
    /// internal rank -> node id
    internals: Vec<NodeId>,
    /// node id -> leaf index (leaves) or internal rank (internal nodes)
    rank: Vec<usize>,
    /// node id -> index of the first leaf in its clade
    first_leaf: Vec<usize>,
    /// node id -> number of leaves in its clade
    clade_size: Vec<usize>,
}

impl BinaryTree {
    /// Single-leaf tree.
    pub fn leaf(label: impl Into<String>) -> Result<Self> {
        let mut b = TreeBuilder::new();
        b.leaf(label);
        b.build()
    }

    /// Parses a parenthesization such as `((a,b),c)` (trailing `;` optional).
    pub fn parse(spec: &str) -> Result<Self> {
        build_tree(spec)
    }

    /// Number of leaves.
    pub fn n(&self) -> usize {
        self.leaves.len()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn internal_count(&self) -> usize {
        self.internals.len()
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.nodes[id].parent
    }

    pub fn children(&self, id: NodeId) -> Option<[NodeId; 2]> {
        self.nodes[id].children
    }

    pub fn is_leaf(&self, id: NodeId) -> bool {
        self.nodes[id].is_leaf()
    }

    pub fn label(&self, id: NodeId) -> Option<&str> {
        self.nodes[id].label()
    }

    /// Node id of the leaf with the given leaf index.
    pub fn leaf_node(&self, leaf: usize) -> NodeId {
        self.leaves[leaf]
    }

    /// Leaf node ids in leaf-index order.
    pub fn leaf_nodes(&self) -> &[NodeId] {
        &self.leaves
    }

    /// Internal node ids in internal-rank order.
    pub fn internal_nodes(&self) -> &[NodeId] {
        &self.internals
    }

    pub fn internal_node(&self, rank: usize) -> NodeId {
        self.internals[rank]
    }

    pub fn leaf_index(&self, id: NodeId) -> Option<usize> {
        self.is_leaf(id).then(|| self.rank[id])
    }

    pub fn internal_rank(&self, id: NodeId) -> Option<usize> {
        (!self.is_leaf(id)).then(|| self.rank[id])
    }

    pub fn leaf_label(&self, leaf: usize) -> &str {
        self.nodes[self.leaves[leaf]]
            .label
            .as_deref()
            .expect("leaves are always labeled")
    }

    pub fn leaf_labels(&self) -> impl Iterator<Item = &str> + '_ {
        (0..self.n()).map(move |i| self.leaf_label(i))
    }

    /// Map from label to leaf index.
    pub fn label_index(&self) -> HashMap<&str, usize> {
        self.leaf_labels()
            .enumerate()
            .map(|(i, l)| (l, i))
            .collect()
    }

    /// Leaf indices of the clade at `id`, always a contiguous range.
    pub fn clade_leaves(&self, id: NodeId) -> Range<usize> {
        self.first_leaf[id]..self.first_leaf[id] + self.clade_size[id]
    }

    pub fn clade_size(&self, id: NodeId) -> usize {
        self.clade_size[id]
    }

    /// Distance from the root.
    pub fn depth(&self, mut id: NodeId) -> usize {
        let mut d = 0;
        while let Some(p) = self.nodes[id].parent {
            id = p;
            d += 1;
        }
        d
    }

    /// `true` if `a` is an ancestor of `b` (or equal to it).
    pub fn is_ancestor(&self, a: NodeId, b: NodeId) -> bool {
        // Preorder numbering: descendants of `a` occupy ids a..a + subtree size.
        let subtree_nodes = 2 * self.clade_size[a] - 1;
        a <= b && b < a + subtree_nodes
    }

    /// Lowest common ancestor of two nodes.
    pub fn lca(&self, a: NodeId, b: NodeId) -> NodeId {
        let mut x = a.min(b);
        let y = a.max(b);
        while !self.is_ancestor(x, y) {
            x = self.nodes[x]
                .parent
                .expect("root is an ancestor of every node");
        }
        x
    }

    /// Returns the tree with the children of every internal node whose bit is
    /// set exchanged. `bits` is indexed by internal rank.
    pub fn with_switches(&self, bits: &[bool]) -> Result<Self> {
        if bits.len() != self.internal_count() {
            return Err(Error::InvalidLayout(format!(
                "switch vector has length {} but the tree has {} internal nodes",
                bits.len(),
                self.internal_count()
            )));
        }
        let mut b = self.to_builder();
        for (rank, &flip) in bits.iter().enumerate() {
            if flip {
                let id = self.internals[rank];
                if let Some(c) = b.children[id].as_mut() {
                    c.swap(0, 1);
                }
            }
        }
        b.build()
    }

    /// Returns the tree with every leaf label passed through `f`.
    pub fn relabel(&self, mut f: impl FnMut(&str) -> String) -> Result<Self> {
        let mut b = self.to_builder();
        for l in b.labels.iter_mut().flatten() {
            *l = f(l);
        }
        b.build()
    }

    /// A mutable copy of the node table for further editing.
    pub fn to_builder(&self) -> TreeBuilder {
        TreeBuilder {
            parents: self.nodes.iter().map(|n| n.parent).collect(),
            children: self.nodes.iter().map(|n| n.children).collect(),
            labels: self.nodes.iter().map(|n| n.label.clone()).collect(),
        }
    }

    /// Parenthesized form in stored child order, without the trailing `;`.
    pub fn to_parenthesized(&self) -> String {
        let mut out = String::new();
        self.write_clade(self.root(), &mut out, |id| {
            self.label(id).expect("leaf label").to_string()
        });
        out
    }

    pub(crate) fn write_clade(
        &self,
        root: NodeId,
        out: &mut String,
        mut leaf_text: impl FnMut(NodeId) -> String,
    ) {
        enum Step {
            Enter(NodeId),
            Text(&'static str),
        }
        let mut stack = vec![Step::Enter(root)];
        while let Some(step) = stack.pop() {
            match step {
                Step::Text(s) => out.push_str(s),
                Step::Enter(id) => match self.nodes[id].children {
                    None => out.push_str(&leaf_text(id)),
                    Some([a, b]) => {
                        out.push('(');
                        stack.push(Step::Text(")"));
                        stack.push(Step::Enter(b));
                        stack.push(Step::Text(","));
                        stack.push(Step::Enter(a));
                    }
                },
            }
        }
    }

    /// Label-free canonical string of the tree shape: children sorted so that
    /// isomorphic trees produce identical strings.
    pub fn shape_string(&self) -> String {
        self.canonical_strings(|_| "*".to_string())[self.root()].clone()
    }

    /// Canonical strings of every clade, with children sorted by their own
    /// canonical strings. Leaves are rendered with `leaf_text`.
    pub(crate) fn canonical_strings(
        &self,
        mut leaf_text: impl FnMut(NodeId) -> String,
    ) -> Vec<String> {
        let mut out = vec![String::new(); self.nodes.len()];
        for id in (0..self.nodes.len()).rev() {
            out[id] = match self.nodes[id].children {
                None => leaf_text(id),
                Some([a, b]) => {
                    let (x, y) = if out[a] <= out[b] { (a, b) } else { (b, a) };
                    format!("({},{})", out[x], out[y])
                }
            };
        }
        out
    }
}

impl fmt::Display for BinaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.to_parenthesized())
    }
}

/// Unnormalized node table used to assemble trees. Node ids handed out by the
/// builder are only meaningful until [`TreeBuilder::build`] renumbers them.
#[derive(Debug, Clone, Default)]
pub struct TreeBuilder {
    parents: Vec<Option<usize>>,
    children: Vec<Option<[usize; 2]>>,
    labels: Vec<Option<String>>,
}

impl TreeBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.children.len()
    }

    pub fn is_empty(&self) -> bool {
        self.children.is_empty()
    }

    pub fn leaf(&mut self, label: impl Into<String>) -> usize {
        self.push(None, Some(label.into()))
    }

    /// New internal node with children `a` and `b`, in that order.
    pub fn join(&mut self, a: usize, b: usize) -> usize {
        let id = self.push(Some([a, b]), None);
        self.parents[a] = Some(id);
        self.parents[b] = Some(id);
        id
    }

    /// Subdivides the edge above `below` (the virtual root edge when `below`
    /// is the root) with a new internal node and hangs a new leaf from it.
    /// The new leaf becomes the second child unless `leaf_first` is set.
    /// Returns the new leaf's builder id.
    pub fn graft(&mut self, below: usize, label: impl Into<String>, leaf_first: bool) -> usize {
        let leaf = self.leaf(label);
        let old_parent = self.parents[below];
        let kids = if leaf_first {
            [leaf, below]
        } else {
            [below, leaf]
        };
        let mid = self.join(kids[0], kids[1]);
        self.parents[mid] = old_parent;
        if let Some(p) = old_parent {
            let c = self.children[p].as_mut().expect("parent is internal");
            for slot in c.iter_mut() {
                if *slot == below {
                    *slot = mid;
                }
            }
        }
        leaf
    }

    fn push(&mut self, children: Option<[usize; 2]>, label: Option<String>) -> usize {
        self.parents.push(None);
        self.children.push(children);
        self.labels.push(label);
        self.children.len() - 1
    }

    /// Validates the node table and renumbers it into preorder.
    pub fn build(self) -> Result<BinaryTree> {
        let total = self.children.len();
        if total == 0 {
            return Err(Error::InvalidTree("empty tree".into()));
        }
        let mut roots = (0..total).filter(|&i| self.parents[i].is_none());
        let root = roots
            .next()
            .ok_or_else(|| Error::InvalidTree("no root: every node has a parent".into()))?;
        if roots.next().is_some() {
            return Err(Error::InvalidTree("more than one parentless node".into()));
        }

        // Preorder renumbering, iteratively to survive deep caterpillars.
        let mut new_id = vec![usize::MAX; total];
        let mut order = Vec::with_capacity(total);
        let mut stack = vec![root];
        while let Some(old) = stack.pop() {
            if old >= total {
                return Err(Error::InvalidTree(format!(
                    "child index {old} out of range"
                )));
            }
            if new_id[old] != usize::MAX {
                return Err(Error::InvalidTree(
                    "node reachable twice (cycle or shared child)".into(),
                ));
            }
            new_id[old] = order.len();
            order.push(old);
            if let Some([a, b]) = self.children[old] {
                if a == b {
                    return Err(Error::InvalidTree("node lists the same child twice".into()));
                }
                stack.push(b);
                stack.push(a);
            }
        }
        if order.len() != total {
            return Err(Error::InvalidTree("node table is not connected".into()));
        }

        let mut nodes = Vec::with_capacity(total);
        let mut leaves = Vec::new();
        let mut internals = Vec::new();
        let mut rank = vec![0; total];
        let mut seen = HashMap::new();
        for (id, &old) in order.iter().enumerate() {
            let children = self.children[old].map(|[a, b]| [new_id[a], new_id[b]]);
            let label = match children {
                None => {
                    let label = self.labels[old]
                        .clone()
                        .ok_or_else(|| Error::InvalidTree("leaf without a label".into()))?;
                    format::check_label(&label).map_err(Error::InvalidTree)?;
                    if seen.insert(label.clone(), id).is_some() {
                        return Err(Error::InvalidTree(format!(
                            "duplicate leaf label `{label}`"
                        )));
                    }
                    rank[id] = leaves.len();
                    leaves.push(id);
                    Some(label)
                }
                Some(_) => {
                    rank[id] = internals.len();
                    internals.push(id);
                    None
                }
            };
            nodes.push(Node {
                parent: self.parents[old].map(|p| new_id[p]),
                children,
                label,
            });
        }

        let mut clade_size = vec![0; total];
        let mut first_leaf = vec![0; total];
        for id in (0..total).rev() {
            match nodes[id].children {
                None => {
                    clade_size[id] = 1;
                    first_leaf[id] = rank[id];
                }
                Some([a, b]) => {
                    clade_size[id] = clade_size[a] + clade_size[b];
                    first_leaf[id] = first_leaf[a];
                }
            }
        }

        Ok(BinaryTree {
            nodes,
            leaves,
            internals,
            rank,
            first_leaf,
            clade_size,
        })
    }
}

/// Builds a tree from a parenthesization such as `((a,b),(c,d))`.
pub fn build_tree(spec: &str) -> Result<BinaryTree> {
    format::parse_tree(spec)
}

/// The rooted caterpillar on `n` leaves, labeled `u1..un`.
///
/// Leaf `u_i` sits at depth `i` for `i <= n-2`; `u_{n-1}` and `u_n` form the
/// deepest cherry at depth `n-1`. Leaf index `i-1` holds `u_i`.
pub fn caterpillar(n: usize) -> Result<BinaryTree> {
    caterpillar_with_labels(n, |i| format!("u{i}"))
}

pub(crate) fn caterpillar_with_labels(
    n: usize,
    label: impl Fn(usize) -> String,
) -> Result<BinaryTree> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "caterpillar needs n >= 2, got {n}"
        )));
    }
    let mut b = TreeBuilder::new();
    let a = b.leaf(label(n - 1));
    let z = b.leaf(label(n));
    let mut top = b.join(a, z);
    for i in (1..=n - 2).rev() {
        let l = b.leaf(label(i));
        top = b.join(l, top);
    }
    b.build()
}

/// A balanced tree on `n >= 1` leaves (first child gets the larger half).
pub fn balanced(n: usize, label: impl Fn(usize) -> String) -> Result<BinaryTree> {
    if n == 0 {
        return Err(Error::InvalidArgument("balanced tree needs n >= 1".into()));
    }
    fn grow(b: &mut TreeBuilder, leaves: &[usize]) -> usize {
        if leaves.len() == 1 {
            return leaves[0];
        }
        let mid = leaves.len().div_ceil(2);
        let l = grow(b, &leaves[..mid]);
        let r = grow(b, &leaves[mid..]);
        b.join(l, r)
    }
    let mut b = TreeBuilder::new();
    let leaves: Vec<usize> = (1..=n).map(|i| b.leaf(label(i))).collect();
    grow(&mut b, &leaves);
    b.build()
}
