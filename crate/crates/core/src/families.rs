//! Constructions of extremal tanglegram families.
//!
//! * [`caterpillar_tanglegram`]: two caterpillars matched so that one edge
//!   carries all crossings; size `n`, crossing number `n - 3`.
//! * [`grid_family`]: `k` clades of size `k` on each side, every left clade
//!   matched once into every right clade; crossing number at least
//!   `C(k,2)^2`.
//! * [`extend_family`]: grows a grid member to any size below the next square.

use rand::Rng;

use crate::error::{Error, Result};
use crate::tanglegram::Tanglegram;
use crate::tree::{caterpillar, caterpillar_with_labels, BinaryTree, TreeBuilder};

/// `P_n`: two copies of the caterpillar `C_n` with `u_i` matched to
/// `v_{n-i}` for `i < n` and `u_n` matched to `v_n`.
///
/// Leaf index `i-1` of the left tree is `u_i`, leaf index `j-1` of the right
/// tree is `v_j`; the right leaves carry their partners' labels.
pub fn caterpillar_tanglegram(n: usize) -> Result<Tanglegram> {
    if n < 4 {
        return Err(Error::InvalidArgument(format!(
            "caterpillar tanglegram needs n >= 4, got {n}"
        )));
    }
    let left = caterpillar(n)?;
    let right = caterpillar_with_labels(n, |j| format!("v{j}"))?;
    let matching = (1..=n)
        .map(|i| if i == n { n - 1 } else { n - i - 1 })
        .collect();
    Tanglegram::new(left, right, matching)
}

/// Copies `tree` into `b`, calling `leaf` for each leaf index to obtain the
/// builder id that replaces it. Returns the builder id of the copy's root.
fn copy_into(
    b: &mut TreeBuilder,
    tree: &BinaryTree,
    mut leaf: impl FnMut(&mut TreeBuilder, usize) -> usize,
) -> usize {
    let mut ids = vec![0; tree.node_count()];
    for id in (0..tree.node_count()).rev() {
        ids[id] = match tree.children(id) {
            None => leaf(b, tree.leaf_index(id).expect("leaf")),
            Some([x, y]) => b.join(ids[x], ids[y]),
        };
    }
    ids[tree.root()]
}

/// Hangs `parts[i]` below leaf `i` of `top`, labeling the leaves of part `i`
/// (1-based) as `{prefix}{i}_{j}` in leaf-index order.
fn compose(top: &BinaryTree, parts: &[BinaryTree], prefix: &str) -> Result<BinaryTree> {
    let mut b = TreeBuilder::new();
    copy_into(&mut b, top, |b, i| {
        copy_into(b, &parts[i], |b, j| {
            b.leaf(format!("{prefix}{}_{}", i + 1, j + 1))
        })
    });
    b.build()
}

/// A member of the grid family `T_{k^2}` built from
/// `(L_0, ..., L_k, R_0, ..., R_k)`, all of size `k`.
///
/// The root of `L_i` replaces leaf `i` of `L_0` (leaves of `L_0` numbered in
/// leaf-index order), and the leaves of `L_i` are `v{i}_{j}`; likewise for
/// the right side with `w{i}_{j}`. The matching pairs `v{i}_{j}` with
/// `w{j}_{i}`. Left leaf `(i-1)k + (j-1)` is `v{i}_{j}`.
pub fn grid_family(subtrees: &[BinaryTree]) -> Result<Tanglegram> {
    if subtrees.len() < 6 || !subtrees.len().is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "grid family needs 2k+2 trees with k >= 2, got {}",
            subtrees.len()
        )));
    }
    let k = subtrees.len() / 2 - 1;
    if let Some((pos, t)) = subtrees.iter().enumerate().find(|(_, t)| t.n() != k) {
        return Err(Error::InvalidArgument(format!(
            "tree {pos} has {} leaves, expected {k}",
            t.n()
        )));
    }
    let (ls, rs) = subtrees.split_at(k + 1);
    let left = compose(&ls[0], &ls[1..], "v")?;
    let right = compose(&rs[0], &rs[1..], "w")?;
    let matching = (0..k * k).map(|idx| (idx % k) * k + idx / k).collect();
    Tanglegram::new(left, right, matching)
}

/// Grid family member whose `2k+2` component trees are all copies of `shape`.
pub fn uniform_grid(shape: &BinaryTree) -> Result<Tanglegram> {
    let k = shape.n();
    grid_family(&vec![shape.clone(); 2 * k + 2])
}

/// Extends a `k^2`-sized grid member to size `n` with `k^2 <= n < (k+1)^2`.
///
/// Each extra edge is added by subdividing a uniformly chosen edge of each
/// tree (the edge above the root included) and matching the two new leaves,
/// labeled `x1, x2, ...`. Removing the added edges gives back `base`.
pub fn extend_family<R: Rng + ?Sized>(
    base: &Tanglegram,
    n: usize,
    rng: &mut R,
) -> Result<Tanglegram> {
    let size = base.n();
    let k = integer_sqrt(size);
    if k < 2 || k * k != size {
        return Err(Error::InvalidArgument(format!(
            "base tanglegram must have square size k^2 with k >= 2, got {size}"
        )));
    }
    if n < size || n >= (k + 1) * (k + 1) {
        return Err(Error::InvalidArgument(format!(
            "n = {n} outside [{size}, {})",
            (k + 1) * (k + 1)
        )));
    }
    let mut left = base.left().to_builder();
    let mut right = base.right().to_builder();
    let taken: std::collections::HashSet<&str> = base.left().leaf_labels().collect();
    let mut prefix = String::from("x");
    while taken.iter().any(|l| l.starts_with(prefix.as_str())) {
        prefix.push('x');
    }
    for t in 1..=n - size {
        let label = format!("{prefix}{t}");
        let at = rng.gen_range(0..left.len() as u64) as usize;
        left.graft(at, label.clone(), false);
        let at = rng.gen_range(0..right.len() as u64) as usize;
        right.graft(at, label, false);
    }
    Tanglegram::from_shared_labels(left.build()?, right.build()?)
}

pub(crate) fn integer_sqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}
