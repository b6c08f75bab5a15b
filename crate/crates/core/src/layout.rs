//! Layouts of a tanglegram and their crossing numbers.
//!
//! A layout is a pair of switch vectors, one bit per internal node of each
//! tree (indexed by internal rank). With all leaves on two vertical lines,
//! two matching edges cross exactly when their endpoints appear in opposite
//! orders on the two sides, so every count here is computed from leaf ranks.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::tanglegram::Tanglegram;
use crate::tree::BinaryTree;

/// Default size cap for [`brute_force_crt`].
pub const BRUTE_FORCE_CAP: usize = 10;

/// One orientation bit per internal node of a tree, indexed by internal rank.
/// A set bit means the node's two children are drawn in swapped order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SwitchVector(Vec<bool>);

impl SwitchVector {
    pub fn new(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![false; len])
    }

    pub fn ones(len: usize) -> Self {
        Self(vec![true; len])
    }

    /// The vector at position `index` of the lexicographic enumeration of all
    /// vectors of length `len` (bit 0 is the most significant).
    pub fn from_lex_index(index: u64, len: usize) -> Self {
        Self((0..len).map(|i| index >> (len - 1 - i) & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn get(&self, rank: usize) -> bool {
        self.0[rank]
    }

    pub fn set(&mut self, rank: usize, value: bool) {
        self.0[rank] = value;
    }

    pub fn flip(&mut self, rank: usize) {
        self.0[rank] = !self.0[rank];
    }

    pub fn complement(&self) -> Self {
        Self(self.0.iter().map(|b| !b).collect())
    }

    pub fn parse(bits: &str) -> Result<Self> {
        bits.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                c => Err(Error::InvalidArgument(format!("bad switch bit {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    fn check(&self, tree: &BinaryTree, side: &str) -> Result<()> {
        if self.len() != tree.internal_count() {
            return Err(Error::InvalidLayout(format!(
                "{side} switch vector has length {} but the tree has {} internal nodes",
                self.len(),
                tree.internal_count()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for SwitchVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TanglegramLayout {
    pub left: SwitchVector,
    pub right: SwitchVector,
}

impl TanglegramLayout {
    /// The layout that draws both trees in stored child order.
    pub fn identity(t: &Tanglegram) -> Self {
        Self {
            left: SwitchVector::zeros(t.left().internal_count()),
            right: SwitchVector::zeros(t.right().internal_count()),
        }
    }

    pub fn validate(&self, t: &Tanglegram) -> Result<()> {
        self.left.check(t.left(), "left")?;
        self.right.check(t.right(), "right")
    }
}

/// Leaf indices listed top to bottom.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LeafOrder(Vec<usize>);

impl LeafOrder {
    pub fn new(order: Vec<usize>) -> Self {
        Self(order)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `ranks()[leaf]` is the 0-based position of `leaf` in the order.
    pub fn ranks(&self) -> Vec<usize> {
        let mut r = vec![0; self.0.len()];
        for (pos, &leaf) in self.0.iter().enumerate() {
            r[leaf] = pos;
        }
        r
    }

    /// Recovers the switch vector that produces this order, failing if the
    /// order is not a permutation or some clade is not contiguous.
    pub fn switches_for(&self, tree: &BinaryTree) -> Result<SwitchVector> {
        let n = tree.n();
        if self.0.len() != n {
            return Err(Error::InvalidLayout(format!(
                "leaf order has {} entries for {} leaves",
                self.0.len(),
                n
            )));
        }
        let mut rank = vec![usize::MAX; n];
        for (pos, &leaf) in self.0.iter().enumerate() {
            if leaf >= n || rank[leaf] != usize::MAX {
                return Err(Error::InvalidLayout(
                    "leaf order is not a permutation".into(),
                ));
            }
            rank[leaf] = pos;
        }
        // min and max rank over each clade, bottom-up
        let mut lo = vec![0; tree.node_count()];
        let mut hi = vec![0; tree.node_count()];
        let mut bits = vec![false; tree.internal_count()];
        for id in (0..tree.node_count()).rev() {
            match tree.children(id) {
                None => {
                    let r = rank[tree.leaf_index(id).expect("leaf")];
                    lo[id] = r;
                    hi[id] = r;
                }
                Some([a, b]) => {
                    lo[id] = lo[a].min(lo[b]);
                    hi[id] = hi[a].max(hi[b]);
                    if hi[id] - lo[id] + 1 != tree.clade_size(id) {
                        return Err(Error::InvalidLayout(
                            "leaf order splits a clade, no layout realizes it".into(),
                        ));
                    }
                    bits[tree.internal_rank(id).expect("internal")] = lo[b] < lo[a];
                }
            }
        }
        Ok(SwitchVector(bits))
    }
}

/// Top-to-bottom leaf order of `tree` drawn with switch vector `s`.
pub fn leaf_order(tree: &BinaryTree, s: &SwitchVector) -> Result<LeafOrder> {
    s.check(tree, "tree")?;
    Ok(LeafOrder(order_unchecked(tree, s.bits())))
}

pub(crate) fn order_unchecked(tree: &BinaryTree, bits: &[bool]) -> Vec<usize> {
    let mut out = Vec::with_capacity(tree.n());
    let mut stack = vec![tree.root()];
    while let Some(v) = stack.pop() {
        match tree.children(v) {
            None => out.push(tree.leaf_index(v).expect("leaf")),
            Some([a, b]) => {
                let swap = bits[tree.internal_rank(v).expect("internal")];
                let (first, second) = if swap { (b, a) } else { (a, b) };
                stack.push(second);
                stack.push(first);
            }
        }
    }
    out
}

/// Number of pairs `i < j` with `seq[i] > seq[j]`, for a permutation of
/// `0..seq.len()`, via a Fenwick tree in `O(n log n)`.
pub fn count_inversions(seq: &[usize]) -> u64 {
    let n = seq.len();
    let mut fen = vec![0u32; n + 1];
    let mut inversions = 0u64;
    for (seen, &x) in seq.iter().enumerate() {
        // how many earlier values are <= x
        let mut i = x + 1;
        let mut le = 0u64;
        while i > 0 {
            le += fen[i] as u64;
            i &= i - 1;
        }
        inversions += seen as u64 - le;
        let mut i = x + 1;
        while i <= n {
            fen[i] += 1;
            i += i & i.wrapping_neg();
        }
    }
    inversions
}

fn crossings_from_orders(t: &Tanglegram, left: &[usize], right_rank: &[usize]) -> u64 {
    let m = t.matching();
    let seq: Vec<usize> = left.iter().map(|&l| right_rank[m[l]]).collect();
    count_inversions(&seq)
}

/// Number of crossing pairs of matching edges in layout `d`.
pub fn crossing_count(t: &Tanglegram, d: &TanglegramLayout) -> Result<u64> {
    d.validate(t)?;
    let left = order_unchecked(t.left(), d.left.bits());
    let right = LeafOrder(order_unchecked(t.right(), d.right.bits())).ranks();
    Ok(crossings_from_orders(t, &left, &right))
}

/// Switches every internal node of the right tree. Every pair of edges that
/// crossed no longer does and vice versa, so the two layouts' crossing
/// counts sum to `C(n,2)`.
pub fn mirror_right(d: &TanglegramLayout) -> TanglegramLayout {
    TanglegramLayout {
        left: d.left.clone(),
        right: d.right.complement(),
    }
}

/// Exact crossing number by trying all `2^(n-1) * 2^(n-1)` layouts.
///
/// The witness is the lexicographically least optimal layout (left bits,
/// then right bits).
pub fn brute_force_crt(t: &Tanglegram, cap: usize) -> Result<(u64, TanglegramLayout)> {
    if t.n() > cap {
        return Err(Error::SizeCap { size: t.n(), cap });
    }
    let ln = t.left().internal_count();
    let rn = t.right().internal_count();
    let right_ranks: Vec<Vec<usize>> = (0..1u64 << rn)
        .map(|r| {
            let s = SwitchVector::from_lex_index(r, rn);
            LeafOrder(order_unchecked(t.right(), s.bits())).ranks()
        })
        .collect();
    let (count, l, r) = (0..1u64 << ln)
        .into_par_iter()
        .map(|l| {
            let s = SwitchVector::from_lex_index(l, ln);
            let left = order_unchecked(t.left(), s.bits());
            right_ranks
                .iter()
                .enumerate()
                .map(|(r, ranks)| (crossings_from_orders(t, &left, ranks), l, r as u64))
                .min()
                .expect("at least one right layout")
        })
        .min()
        .expect("at least one left layout");
    Ok((
        count,
        TanglegramLayout {
            left: SwitchVector::from_lex_index(l, ln),
            right: SwitchVector::from_lex_index(r, rn),
        },
    ))
}

impl Tanglegram {
    /// The same tanglegram with both trees redrawn according to `d`, so that
    /// the identity layout of the result draws what `d` draws here.
    pub fn with_layout(&self, d: &TanglegramLayout) -> Result<Tanglegram> {
        d.validate(self)?;
        let left = self.left().with_switches(d.left.bits())?;
        let right = self.right().with_switches(d.right.bits())?;
        Tanglegram::from_shared_labels(left, right)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::caterpillar_tanglegram;
    use crate::format::parse;
    use crate::tree::caterpillar;

    #[test]
    fn zero_vector_is_preorder() {
        let t = BinaryTree::parse("((a,b),(c,(d,e)))").unwrap();
        let o = leaf_order(&t, &SwitchVector::zeros(4)).unwrap();
        assert_eq!(o.as_slice(), &[0, 1, 2, 3, 4]);
        assert!(leaf_order(&t, &SwitchVector::zeros(3)).is_err());
    }

    #[test]
    fn root_switch_exchanges_blocks() {
        let t = BinaryTree::parse("((a,b),(c,(d,e)))").unwrap();
        let mut s = SwitchVector::zeros(4);
        s.set(0, true);
        assert_eq!(leaf_order(&t, &s).unwrap().as_slice(), &[2, 3, 4, 0, 1]);
    }

    #[test]
    fn caterpillar_all_ones() {
        // C_4 = (u1,(u2,(u3,u4))); all switched: deep cherry reversed first.
        let c = caterpillar(4).unwrap();
        let o = leaf_order(&c, &SwitchVector::ones(3)).unwrap();
        assert_eq!(o.as_slice(), &[3, 2, 1, 0]);
    }

    #[test]
    fn realizability() {
        let t = BinaryTree::parse("((a,b),(c,d))").unwrap();
        let s = SwitchVector::parse("101").unwrap();
        let o = leaf_order(&t, &s).unwrap();
        assert_eq!(o.switches_for(&t).unwrap(), s);
        assert!(LeafOrder::new(vec![0, 2, 1, 3]).switches_for(&t).is_err());
        assert!(LeafOrder::new(vec![0, 0, 1, 3]).switches_for(&t).is_err());
    }

    #[test]
    fn inversions_small() {
        assert_eq!(count_inversions(&[]), 0);
        assert_eq!(count_inversions(&[0, 1, 2]), 0);
        assert_eq!(count_inversions(&[2, 1, 0]), 3);
        assert_eq!(count_inversions(&[2, 0, 3, 1]), 3);
    }

    #[test]
    fn identity_and_reversal() {
        let t = parse("tgl v1\n((a,b),(c,d));\n((a,b),(c,d));\n").unwrap();
        let d = TanglegramLayout::identity(&t);
        assert_eq!(crossing_count(&t, &d).unwrap(), 0);
        assert_eq!(crossing_count(&t, &mirror_right(&d)).unwrap(), 6);
    }

    #[test]
    fn single_leaf() {
        let t = parse("tgl v1\na;\na;\n").unwrap();
        let d = TanglegramLayout::identity(&t);
        assert_eq!(crossing_count(&t, &d).unwrap(), 0);
        assert_eq!(crossing_count(&t, &mirror_right(&d)).unwrap(), 0);
        assert_eq!(brute_force_crt(&t, 10).unwrap().0, 0);
    }

    #[test]
    fn brute_force_small_cases() {
        let p4 = caterpillar_tanglegram(4).unwrap();
        let (c, w) = brute_force_crt(&p4, 10).unwrap();
        assert_eq!(c, 1);
        assert_eq!(crossing_count(&p4, &w).unwrap(), 1);
        assert!(brute_force_crt(&caterpillar_tanglegram(11).unwrap(), 10).is_err());
    }

    #[test]
    fn with_layout_redraws() {
        let t = caterpillar_tanglegram(5).unwrap();
        let d = TanglegramLayout {
            left: SwitchVector::parse("1010").unwrap(),
            right: SwitchVector::parse("0111").unwrap(),
        };
        let u = t.with_layout(&d).unwrap();
        assert_eq!(
            crossing_count(&u, &TanglegramLayout::identity(&u)).unwrap(),
            crossing_count(&t, &d).unwrap()
        );
    }
}
