//! Polynomial-time lower bound on the tangle crossing number.
//!
//! Each tree's leaves are cut into maximal clades of size at most a cap `C`.
//! Any layout draws every clade as a contiguous block, so for left clades
//! `U_a, U_b` and right clades `V_c, V_d` either all `M_ac` edges cross all
//! `M_bd` edges or all `M_ad` edges cross all `M_bc` edges. Summing the
//! smaller product over all pairs of left clades and pairs of right clades
//! bounds the crossing number from below.

use std::fmt;
use std::ops::Range;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::tanglegram::{Side, Tanglegram};
use crate::tree::{BinaryTree, NodeId};

/// Clade-size cap. Comparisons against integer clade sizes are exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cap {
    Int(u64),
    /// `sqrt(m)`
    Sqrt(u64),
    /// `num / den`
    Ratio {
        num: u64,
        den: u64,
    },
    Real(f64),
}

impl Cap {
    /// `num / den`, with `den > 0`.
    pub fn ratio(num: u64, den: u64) -> Self {
        Cap::Ratio { num, den }
    }

    /// Parses `sqrt`, `half`, an integer, or a decimal number, resolving
    /// `sqrt` and `half` against tanglegram size `n`.
    pub fn parse_expr(expr: &str, n: usize) -> Result<Self> {
        let cap = match expr.trim() {
            "sqrt" => Cap::Sqrt(n as u64),
            "half" => Cap::ratio(n as u64, 2),
            s => {
                if let Ok(v) = s.parse::<u64>() {
                    Cap::Int(v)
                } else {
                    match s.parse::<f64>() {
                        Ok(v) => Cap::Real(v),
                        Err(_) => {
                            return Err(Error::InvalidArgument(format!(
                                "cap `{s}` is not an integer, a number, `sqrt` or `half`"
                            )))
                        }
                    }
                }
            }
        };
        cap.validate()?;
        Ok(cap)
    }

    /// Caps must exceed 1.
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Cap::Int(c) => c > 1,
            Cap::Sqrt(m) => m > 1,
            Cap::Ratio { num, den } => den > 0 && num > den,
            Cap::Real(x) => x.is_finite() && x > 1.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "cap {self} must be greater than 1"
            )))
        }
    }

    /// `true` if a clade of `size` leaves fits under the cap.
    pub fn admits(&self, size: usize) -> bool {
        let s = size as u128;
        match *self {
            Cap::Int(c) => s <= c as u128,
            Cap::Sqrt(m) => s * s <= m as u128,
            Cap::Ratio { num, den } => s * den as u128 <= num as u128,
            Cap::Real(x) => (size as f64) <= x,
        }
    }

    pub fn value(&self) -> f64 {
        match *self {
            Cap::Int(c) => c as f64,
            Cap::Sqrt(m) => (m as f64).sqrt(),
            Cap::Ratio { num, den } => num as f64 / den as f64,
            Cap::Real(x) => x,
        }
    }
}

impl fmt::Display for Cap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Cap::Int(c) => write!(f, "{c}"),
            Cap::Sqrt(m) => write!(f, "sqrt({m})"),
            Cap::Ratio { num, den } => write!(f, "{num}/{den}"),
            Cap::Real(x) => write!(f, "{x}"),
        }
    }
}

impl From<u64> for Cap {
    fn from(c: u64) -> Self {
        Cap::Int(c)
    }
}

impl From<f64> for Cap {
    fn from(x: f64) -> Self {
        Cap::Real(x)
    }
}

/// Partition of one tree's leaves into maximal clades of size at most `cap`.
#[derive(Debug, Clone, PartialEq)]
pub struct CladePartition {
    pub side: Side,
    pub cap: Cap,
    n: usize,
    roots: Vec<NodeId>,
    parts: Vec<Range<usize>>,
}

impl CladePartition {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Number of leaves of the partitioned tree.
    pub fn leaf_count(&self) -> usize {
        self.n
    }

    /// Defining node of each part, in preorder.
    pub fn roots(&self) -> &[NodeId] {
        &self.roots
    }

    /// Leaf indices of each part; clades are contiguous in leaf-index order.
    pub fn parts(&self) -> &[Range<usize>] {
        &self.parts
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.parts.iter().map(|p| p.len()).collect()
    }

    /// `part_of()[leaf]` is the index of the part containing `leaf`.
    pub fn part_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for (i, p) in self.parts.iter().enumerate() {
            for leaf in p.clone() {
                out[leaf] = i;
            }
        }
        out
    }
}

/// Cuts the leaves of `tree` into clades: keep the vertices whose clade size
/// is within the cap while their parent's is not (the root qualifies when its
/// own size is within the cap), and return their clades.
///
/// Clade sizes are stored on the tree. A preorder scan that jumps over the
/// `2s - 1` ids of every kept clade of size `s` visits only vertices on or
/// above the cut, so the cost is linear in the worst case and usually less.
pub fn clade_partition(tree: &BinaryTree, side: Side, cap: Cap) -> Result<CladePartition> {
    cap.validate()?;
    let total = tree.node_count();
    let mut roots = Vec::new();
    let mut parts = Vec::new();
    let mut id = 0;
    while id < total {
        let size = tree.clade_size(id);
        if cap.admits(size) {
            roots.push(id);
            parts.push(tree.clade_leaves(id));
            id += 2 * size - 1;
        } else {
            id += 1;
        }
    }
    Ok(CladePartition {
        side,
        cap,
        n: tree.n(),
        roots,
        parts,
    })
}

/// `M[i][j]`: number of matching edges from left part `i` to right part `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CladeMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl CladeMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_sums(&self) -> Vec<u64> {
        (0..self.rows).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<u64> {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.get(i, j)).sum())
            .collect()
    }

    pub fn total(&self) -> u64 {
        self.data.iter().sum()
    }
}

fn check_partition(t: &Tanglegram, p: &CladePartition, side: Side) -> Result<()> {
    let tree = t.tree(side);
    let consistent = p.side == side
        && p.n == tree.n()
        && p.roots
            .iter()
            .zip(&p.parts)
            .all(|(&r, part)| r < tree.node_count() && tree.clade_leaves(r) == *part)
        && p.parts.iter().map(|r| r.len()).sum::<usize>() == tree.n();
    if consistent {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "partition does not belong to the {side} tree of this tanglegram"
        )))
    }
}

pub fn clade_matrix(
    t: &Tanglegram,
    left: &CladePartition,
    right: &CladePartition,
) -> Result<CladeMatrix> {
    check_partition(t, left, Side::Left)?;
    check_partition(t, right, Side::Right)?;
    let right_part = right.part_of();
    let cols = right.len();
    let mut data = vec![0u64; left.len() * cols];
    for (i, part) in left.parts().iter().enumerate() {
        for leaf in part.clone() {
            data[i * cols + right_part[t.matching()[leaf]]] += 1;
        }
    }
    Ok(CladeMatrix {
        rows: left.len(),
        cols,
        data,
    })
}

/// `sum over {i1,i2}, {j1,j2} of min(M[i1][j1] M[i2][j2], M[i1][j2] M[i2][j1])`,
/// each unordered pair of rows and of columns counted once.
pub fn bound_from_matrix(m: &CladeMatrix) -> u64 {
    (0..m.rows())
        .into_par_iter()
        .map(|i1| {
            let a = m.row(i1);
            let mut sum = 0u64;
            let mut shared: Vec<(u64, u64)> = Vec::new();
            for i2 in i1 + 1..m.rows() {
                let b = m.row(i2);
                // A term vanishes unless both rows are nonzero in both columns.
                shared.clear();
                shared.extend(
                    a.iter()
                        .zip(b)
                        .filter(|(&x, &y)| x > 0 && y > 0)
                        .map(|(&x, &y)| (x, y)),
                );
                for (k, &(a1, b1)) in shared.iter().enumerate() {
                    for &(a2, b2) in &shared[k + 1..] {
                        sum += (a1 * b2).min(a2 * b1);
                    }
                }
            }
            sum
        })
        .sum()
}

/// Everything the bound computation produced.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub left: CladePartition,
    pub right: CladePartition,
    pub matrix: CladeMatrix,
    pub value: u64,
}

pub fn lower_bound_report(t: &Tanglegram, cap_left: Cap, cap_right: Cap) -> Result<BoundReport> {
    let left = clade_partition(t.left(), Side::Left, cap_left)?;
    let right = clade_partition(t.right(), Side::Right, cap_right)?;
    let matrix = clade_matrix(t, &left, &right)?;
    let value = bound_from_matrix(&matrix);
    Ok(BoundReport {
        left,
        right,
        matrix,
        value,
    })
}

/// Lower bound on the tangle crossing number for the given caps.
pub fn crossing_lower_bound(t: &Tanglegram, cap_left: Cap, cap_right: Cap) -> Result<u64> {
    Ok(lower_bound_report(t, cap_left, cap_right)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{caterpillar_tanglegram, uniform_grid};
    use crate::tree::caterpillar;

    #[test]
    fn cap_parsing_and_validation() {
        assert_eq!(Cap::parse_expr("sqrt", 9).unwrap(), Cap::Sqrt(9));
        assert_eq!(Cap::parse_expr("half", 9).unwrap(), Cap::ratio(9, 2));
        assert_eq!(Cap::parse_expr("4", 9).unwrap(), Cap::Int(4));
        assert_eq!(Cap::parse_expr("2.5", 9).unwrap(), Cap::Real(2.5));
        assert!(Cap::parse_expr("1", 9).is_err());
        assert!(Cap::parse_expr("half", 2).is_err());
        assert!(Cap::parse_expr("sqrt", 1).is_err());
        assert!(Cap::parse_expr("big", 9).is_err());
        assert!(Cap::Real(f64::NAN).validate().is_err());
    }

    #[test]
    fn exact_comparisons() {
        assert!(Cap::Sqrt(9).admits(3));
        assert!(!Cap::Sqrt(8).admits(3));
        assert!(Cap::ratio(9, 2).admits(4));
        assert!(!Cap::ratio(9, 2).admits(5));
    }

    #[test]
    fn cap_at_least_n_is_trivial() {
        let c = caterpillar(6).unwrap();
        let p = clade_partition(&c, Side::Left, Cap::Int(6)).unwrap();
        assert_eq!(p.roots(), &[0]);
        assert_eq!(p.parts(), std::slice::from_ref(&(0..6)));
    }

    #[test]
    fn caterpillar_cap_two() {
        let c = caterpillar(6).unwrap();
        let p = clade_partition(&c, Side::Left, Cap::Int(2)).unwrap();
        assert_eq!(p.parts(), &[0..1, 1..2, 2..3, 3..4, 4..6]);
    }

    #[test]
    fn grid_partition_finds_components() {
        let t = uniform_grid(&caterpillar(3).unwrap()).unwrap();
        let p = clade_partition(t.left(), Side::Left, Cap::Sqrt(9)).unwrap();
        assert_eq!(p.parts(), &[0..3, 3..6, 6..9]);
        let r = lower_bound_report(&t, Cap::Sqrt(9), Cap::Sqrt(9)).unwrap();
        assert!((0..3).all(|i| r.matrix.row(i) == [1, 1, 1]));
        assert_eq!(r.value, 9);
    }

    #[test]
    fn p4_matrix_marginals() {
        let t = caterpillar_tanglegram(4).unwrap();
        let r = lower_bound_report(&t, Cap::Int(2), Cap::Int(2)).unwrap();
        let mut rows = r.matrix.row_sums();
        let mut cols = r.matrix.col_sums();
        rows.sort_unstable();
        cols.sort_unstable();
        assert_eq!(rows, [1, 1, 2]);
        assert_eq!(cols, [1, 1, 2]);
        assert_eq!(r.matrix.total(), 4);
    }

    #[test]
    fn trivial_partition_gives_zero() {
        let t = caterpillar_tanglegram(8).unwrap();
        assert_eq!(
            crossing_lower_bound(&t, Cap::Int(8), Cap::Int(2)).unwrap(),
            0
        );
        assert_eq!(
            crossing_lower_bound(&t, Cap::Int(2), Cap::Int(8)).unwrap(),
            0
        );
        let r = lower_bound_report(&t, Cap::Int(8), Cap::Int(8)).unwrap();
        assert_eq!(
            (r.matrix.rows(), r.matrix.cols(), r.matrix.get(0, 0)),
            (1, 1, 8)
        );
    }

    #[test]
    fn mismatched_partitions_rejected() {
        let t = caterpillar_tanglegram(5).unwrap();
        let l = clade_partition(t.left(), Side::Left, Cap::Int(2)).unwrap();
        let r = clade_partition(t.right(), Side::Right, Cap::Int(2)).unwrap();
        assert!(clade_matrix(&t, &r, &l).is_err());
        let other = caterpillar_tanglegram(6).unwrap();
        let l6 = clade_partition(other.left(), Side::Left, Cap::Int(2)).unwrap();
        assert!(clade_matrix(&t, &l6, &r).is_err());
    }
}
