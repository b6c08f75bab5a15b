//! Reference implementations used as oracles. They share no code with the
//! library beyond tree accessors.
#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tanglegram::sampler::{random_tanglegram, SampleConfig};
use tanglegram::{BinaryTree, SwitchVector, Tanglegram, TanglegramLayout};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Leaf indices top to bottom, by recursive descent.
pub fn order(tree: &BinaryTree, bits: &[bool]) -> Vec<usize> {
    fn walk(tree: &BinaryTree, bits: &[bool], v: usize, out: &mut Vec<usize>) {
        match tree.children(v) {
            None => out.push(tree.leaf_index(v).unwrap()),
            Some([a, b]) => {
                let flip = bits[tree.internal_rank(v).unwrap()];
                let (first, second) = if flip { (b, a) } else { (a, b) };
                walk(tree, bits, first, out);
                walk(tree, bits, second, out);
            }
        }
    }
    let mut out = Vec::new();
    walk(tree, bits, tree.root(), &mut out);
    out
}

fn positions(order: &[usize]) -> Vec<usize> {
    let mut pos = vec![0; order.len()];
    for (p, &leaf) in order.iter().enumerate() {
        pos[leaf] = p;
    }
    pos
}

/// Crossings by checking every pair of matching edges.
pub fn crossings(t: &Tanglegram, left_bits: &[bool], right_bits: &[bool]) -> u64 {
    let pl = positions(&order(t.left(), left_bits));
    let pr = positions(&order(t.right(), right_bits));
    let m = t.matching();
    let mut count = 0;
    for i in 0..t.n() {
        for j in i + 1..t.n() {
            let a = pl[i] < pl[j];
            let b = pr[m[i]] < pr[m[j]];
            if a != b {
                count += 1;
            }
        }
    }
    count
}

pub fn bits_of(index: u64, len: usize) -> Vec<bool> {
    (0..len).map(|i| index >> i & 1 == 1).collect()
}

/// Minimum over all right switch vectors for fixed left bits.
pub fn right_brute_force(t: &Tanglegram, left_bits: &[bool]) -> u64 {
    let rn = t.right().internal_count();
    (0..1u64 << rn)
        .map(|r| crossings(t, left_bits, &bits_of(r, rn)))
        .min()
        .unwrap()
}

/// Minimum over every layout.
pub fn crt(t: &Tanglegram) -> u64 {
    let ln = t.left().internal_count();
    (0..1u64 << ln)
        .map(|l| right_brute_force(t, &bits_of(l, ln)))
        .min()
        .unwrap()
}

pub fn choose2(n: usize) -> u64 {
    (n * n.saturating_sub(1) / 2) as u64
}

pub fn random_bits<R: Rng>(len: usize, rng: &mut R) -> Vec<bool> {
    (0..len).map(|_| rng.gen()).collect()
}

pub fn random_layout<R: Rng>(t: &Tanglegram, rng: &mut R) -> TanglegramLayout {
    TanglegramLayout {
        left: SwitchVector::new(random_bits(t.left().internal_count(), rng)),
        right: SwitchVector::new(random_bits(t.right().internal_count(), rng)),
    }
}

/// `count` seeded tanglegrams with sizes cycling through `sizes`.
pub fn instances(
    seed: u64,
    sizes: std::ops::RangeInclusive<usize>,
    count: usize,
) -> Vec<Tanglegram> {
    let sizes: Vec<usize> = sizes.collect();
    (0..count)
        .map(|i| {
            let n = sizes[i % sizes.len()];
            random_tanglegram(&SampleConfig::new(n, seed, count), i).unwrap()
        })
        .collect()
}

/// Unordered shape with labels, as a sorted nested string.
pub fn labeled_key(tree: &BinaryTree) -> String {
    fn walk(tree: &BinaryTree, v: usize) -> String {
        match tree.children(v) {
            None => tree.label(v).unwrap().to_string(),
            Some([a, b]) => {
                let mut parts = [walk(tree, a), walk(tree, b)];
                parts.sort();
                format!("({},{})", parts[0], parts[1])
            }
        }
    }
    walk(tree, tree.root())
}

/// Ordered shape without labels.
pub fn plane_key(tree: &BinaryTree) -> String {
    fn walk(tree: &BinaryTree, v: usize) -> String {
        match tree.children(v) {
            None => "*".into(),
            Some([a, b]) => format!("({},{})", walk(tree, a), walk(tree, b)),
        }
    }
    walk(tree, tree.root())
}

pub fn frequencies<I: IntoIterator<Item = String>>(keys: I) -> BTreeMap<String, usize> {
    let mut map = BTreeMap::new();
    for k in keys {
        *map.entry(k).or_insert(0) += 1;
    }
    map
}
