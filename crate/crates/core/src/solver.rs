//! Exact tangle crossing number.
//!
//! Two matching edges `e`, `f` cross iff their left order disagrees with
//! their right order. The left order of the pair is decided by the switch bit
//! at the lowest common ancestor of their left endpoints, and the right order
//! by the bit at the LCA of their right endpoints. Writing `u` and `w` for
//! those two LCAs, the pair crosses iff `x_u ^ y_w ^ d = 1` for a constant
//! `d` fixed by the stored child orders.
//!
//! Once the left bits are fixed, the right bits are therefore independent of
//! each other: each right node `w` picks the orientation that uncrosses the
//! majority of the pairs whose right LCA is `w`. The exact solver enumerates
//! left vectors (root bit fixed, since switching everything is a reflection)
//! and prunes partial vectors whose already-decided pairs force at least the
//! incumbent's crossings.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::layout::{LeafOrder, SwitchVector, TanglegramLayout};
use crate::tanglegram::{MatchingEdge, Tanglegram};
use crate::tree::{BinaryTree, NodeId};

/// Default size cap for [`exact_crt`].
pub const EXACT_CAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverOptions {
    /// Largest accepted tanglegram size.
    pub cap: usize,
    /// Branch-and-bound pruning; when off, every left vector is evaluated.
    pub pruning: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            cap: EXACT_CAP,
            pruning: true,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Search-tree nodes visited (partial left vectors).
    pub nodes: u64,
    /// Complete left vectors evaluated.
    pub leaves: u64,
    /// Subtrees cut by the bound.
    pub pruned: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossingReport {
    pub crt: u64,
    pub witness: TanglegramLayout,
    pub stats: SearchStats,
    pub elapsed: Duration,
}

impl CrossingReport {
    pub fn seconds(&self) -> f64 {
        self.elapsed.as_secs_f64()
    }
}

/// Pairs of matching edges grouped by the right-tree LCA of their endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairLcaTable {
    groups: Vec<PairGroup>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairGroup {
    /// Right internal node.
    pub node: NodeId,
    /// `(e, f)` with `e`'s right endpoint under the node's first child and
    /// `f`'s under the second.
    pub pairs: Vec<(MatchingEdge, MatchingEdge)>,
}

impl PairLcaTable {
    pub fn new(t: &Tanglegram) -> Self {
        let right = t.right();
        let inv = t.inverse_matching();
        let groups = right
            .internal_nodes()
            .iter()
            .map(|&w| {
                let [a, b] = right.children(w).expect("internal");
                let mut pairs = Vec::with_capacity(right.clade_size(a) * right.clade_size(b));
                for ra in right.clade_leaves(a) {
                    for rb in right.clade_leaves(b) {
                        pairs.push((
                            MatchingEdge {
                                left: inv[ra],
                                right: ra,
                            },
                            MatchingEdge {
                                left: inv[rb],
                                right: rb,
                            },
                        ));
                    }
                }
                PairGroup { node: w, pairs }
            })
            .collect();
        Self { groups }
    }

    /// One group per right internal node, in internal-rank order.
    pub fn groups(&self) -> &[PairGroup] {
        &self.groups
    }

    pub fn total_pairs(&self) -> usize {
        self.groups.iter().map(|g| g.pairs.len()).sum()
    }
}

/// Minimum crossing count over all right switch vectors with the left leaf
/// order fixed, and a right vector achieving it (ties pick bit 0).
pub fn one_sided_optimum(t: &Tanglegram, left_order: &LeafOrder) -> Result<(u64, SwitchVector)> {
    left_order.switches_for(t.left())?;
    let rank = left_order.ranks();
    let table = PairLcaTable::new(t);
    let mut total = 0;
    let mut bits = SwitchVector::zeros(t.right().internal_count());
    for (ri, g) in table.groups().iter().enumerate() {
        // Bit 0 draws e above f on the right; they cross iff e is below f on the left.
        let c0 = g
            .pairs
            .iter()
            .filter(|(e, f)| rank[e.left] > rank[f.left])
            .count() as u64;
        let c1 = g.pairs.len() as u64 - c0;
        if c1 < c0 {
            bits.set(ri, true);
        }
        total += c0.min(c1);
    }
    Ok((total, bits))
}

/// Pair counts `W[u][w][d]`: the number of edge pairs with left LCA of rank
/// `u`, right LCA of rank `w`, and parity constant `d`.
struct CrossTable {
    rn: usize,
    weights: Vec<[u32; 2]>,
}

impl CrossTable {
    fn new(t: &Tanglegram) -> Self {
        let left = t.left();
        let right = t.right();
        let n = t.n();
        let ln = left.internal_count();
        let rn = right.internal_count();
        let lca = leaf_lca_ranks(left);
        let inv = t.inverse_matching();
        let mut weights = vec![[0u32; 2]; ln * rn];
        for (wi, &w) in right.internal_nodes().iter().enumerate() {
            let [a, b] = right.children(w).expect("internal");
            for ra in right.clade_leaves(a) {
                for rb in right.clade_leaves(b) {
                    let (la, lb) = (inv[ra], inv[rb]);
                    let u = lca[la * n + lb];
                    weights[u * rn + wi][(la > lb) as usize] += 1;
                }
            }
        }
        Self { rn, weights }
    }

    /// Adds (`sign = 1`) or removes (`sign = -1`) left node `u` set to `x`.
    fn apply(&self, acc: &mut [[i64; 2]], u: usize, x: bool, sign: i64) {
        let row = &self.weights[u * self.rn..(u + 1) * self.rn];
        let x = x as usize;
        for (a, w) in acc.iter_mut().zip(row) {
            a[0] += sign * w[1 ^ x] as i64;
            a[1] += sign * w[x] as i64;
        }
    }
}

/// Internal rank of the LCA of every pair of distinct leaves, `n * n` table.
fn leaf_lca_ranks(tree: &BinaryTree) -> Vec<usize> {
    let n = tree.n();
    let mut out = vec![usize::MAX; n * n];
    for (u, &v) in tree.internal_nodes().iter().enumerate() {
        let [a, b] = tree.children(v).expect("internal");
        for x in tree.clade_leaves(a) {
            for y in tree.clade_leaves(b) {
                out[x * n + y] = u;
                out[y * n + x] = u;
            }
        }
    }
    out
}

fn bound(acc: &[[i64; 2]]) -> u64 {
    acc.iter().map(|a| a[0].min(a[1]) as u64).sum()
}

fn right_bits(acc: &[[i64; 2]]) -> SwitchVector {
    SwitchVector::new(acc.iter().map(|a| a[1] < a[0]).collect())
}

struct Search<'a> {
    table: &'a CrossTable,
    depth_limit: usize,
    acc: Vec<[i64; 2]>,
    bits: Vec<bool>,
    best: u64,
    best_bits: Vec<bool>,
    stats: SearchStats,
}

impl Search<'_> {
    fn dfs(&mut self, depth: usize) {
        self.stats.nodes += 1;
        let lb = bound(&self.acc);
        if lb >= self.best {
            self.stats.pruned += 1;
            return;
        }
        if depth == self.depth_limit {
            self.stats.leaves += 1;
            self.best = lb;
            self.best_bits.clone_from(&self.bits);
            return;
        }
        // Root bit stays 0: switching every node on both sides is a reflection.
        let choices: &[bool] = if depth == 0 { &[false] } else { &[false, true] };
        for &x in choices {
            self.table.apply(&mut self.acc, depth, x, 1);
            self.bits[depth] = x;
            self.dfs(depth + 1);
            self.table.apply(&mut self.acc, depth, x, -1);
        }
        self.bits[depth] = false;
    }
}

/// Exact tangle crossing number with a witness layout.
///
/// The witness is the lexicographically least optimal left vector with root
/// bit 0, paired with the per-node optimal right vector.
pub fn exact_crt(t: &Tanglegram) -> Result<CrossingReport> {
    exact_crt_with(t, SolverOptions::default())
}

pub fn exact_crt_with(t: &Tanglegram, opts: SolverOptions) -> Result<CrossingReport> {
    if t.n() > opts.cap {
        return Err(Error::SizeCap {
            size: t.n(),
            cap: opts.cap,
        });
    }
    let start = Instant::now();
    let table = CrossTable::new(t);
    let ln = t.left().internal_count();
    let rn = t.right().internal_count();

    let evaluate = |bits: &[bool]| {
        let mut acc = vec![[0i64; 2]; rn];
        for (u, &x) in bits.iter().enumerate() {
            table.apply(&mut acc, u, x, 1);
        }
        acc
    };

    let (crt, left_bits, stats) = if opts.pruning {
        let zeros = vec![false; ln];
        let incumbent = bound(&evaluate(&zeros));
        let mut s = Search {
            table: &table,
            depth_limit: ln,
            acc: vec![[0i64; 2]; rn],
            bits: vec![false; ln],
            best: incumbent,
            best_bits: zeros,
            stats: SearchStats::default(),
        };
        if ln > 0 {
            s.dfs(0);
        }
        (s.best, s.best_bits, s.stats)
    } else {
        exhaustive(&table, ln, rn)
    };

    let right = right_bits(&evaluate(&left_bits));
    Ok(CrossingReport {
        crt,
        witness: TanglegramLayout {
            left: SwitchVector::new(left_bits),
            right,
        },
        stats,
        elapsed: start.elapsed(),
    })
}

/// Visits every left vector with root bit 0 in Gray-code order, updating the
/// per-node counts with one row per step.
fn exhaustive(table: &CrossTable, ln: usize, rn: usize) -> (u64, Vec<bool>, SearchStats) {
    let mut bits = vec![false; ln];
    let mut acc = vec![[0i64; 2]; rn];
    for u in 0..ln {
        table.apply(&mut acc, u, false, 1);
    }
    let mut best = bound(&acc);
    let mut best_bits = bits.clone();
    let mut stats = SearchStats {
        nodes: 1,
        leaves: 1,
        pruned: 0,
    };
    let free = ln.saturating_sub(1);
    for step in 1u64..1u64 << free {
        let u = 1 + step.trailing_zeros() as usize;
        table.apply(&mut acc, u, bits[u], -1);
        bits[u] = !bits[u];
        table.apply(&mut acc, u, bits[u], 1);
        let cost = bound(&acc);
        stats.nodes += 1;
        stats.leaves += 1;
        if cost < best || (cost == best && bits < best_bits) {
            best = cost;
            best_bits.clone_from(&bits);
        }
    }
    (best, best_bits, stats)
}

/// `true` iff the tanglegram has a crossing-free layout.
pub fn is_planar(t: &Tanglegram) -> Result<bool> {
    Ok(exact_crt(t)?.crt == 0)
}
