mod common;

use common::*;
use tanglegram::bound::{clade_partition, crossing_lower_bound, Cap};
use tanglegram::layout::{brute_force_crt, crossing_count, leaf_order};
use tanglegram::sampler::{random_plane_tree, random_tree, sample_rng};
use tanglegram::solver::{exact_crt, one_sided_optimum};
use tanglegram::{caterpillar_tanglegram, Side, SwitchVector, TanglegramLayout};

#[test]
fn crossing_count_matches_pairwise_check() {
    let mut r = rng(11);
    for t in instances(1, 2..=24, 300) {
        let d = random_layout(&t, &mut r);
        assert_eq!(
            crossing_count(&t, &d).unwrap(),
            crossings(&t, d.left.bits(), d.right.bits())
        );
    }
}

#[test]
fn leaf_order_matches_recursive_descent() {
    let mut r = rng(12);
    for t in instances(2, 1..=30, 100) {
        let bits = random_bits(t.left().internal_count(), &mut r);
        let got = leaf_order(t.left(), &SwitchVector::new(bits.clone())).unwrap();
        assert_eq!(got.as_slice(), order(t.left(), &bits).as_slice());
    }
}

#[test]
fn exact_and_brute_force_match_exhaustive_oracle() {
    for t in instances(3, 2..=7, 120) {
        let want = crt(&t);
        assert_eq!(exact_crt(&t).unwrap().crt, want, "{t}");
        assert_eq!(brute_force_crt(&t, 10).unwrap().0, want, "{t}");
    }
}

#[test]
fn one_sided_matches_right_enumeration() {
    let mut r = rng(14);
    for t in instances(4, 2..=8, 150) {
        let bits = random_bits(t.left().internal_count(), &mut r);
        let lo = leaf_order(t.left(), &SwitchVector::new(bits.clone())).unwrap();
        let (c, right) = one_sided_optimum(&t, &lo).unwrap();
        assert_eq!(c, right_brute_force(&t, &bits));
        assert_eq!(crossings(&t, &bits, right.bits()), c);
    }
}

#[test]
fn caterpillar_tanglegrams_small() {
    for n in 4..=8 {
        assert_eq!(crt(&caterpillar_tanglegram(n).unwrap()), n as u64 - 3);
    }
}

#[test]
fn bound_is_sound_against_oracle() {
    for t in instances(5, 2..=7, 100) {
        let c = crt(&t);
        let n = t.n() as u64;
        for cl in [Cap::Int(2), Cap::Sqrt(n), Cap::Int(n.max(2))] {
            for cr in [Cap::Int(2), Cap::Sqrt(n), Cap::Int(n.max(2))] {
                if cl.validate().is_ok() && cr.validate().is_ok() {
                    assert!(crossing_lower_bound(&t, cl, cr).unwrap() <= c);
                }
            }
        }
    }
}

fn brute_partition_roots(tree: &tanglegram::BinaryTree, cap: usize) -> Vec<usize> {
    (0..tree.node_count())
        .filter(|&v| {
            tree.clade_size(v) <= cap && tree.parent(v).is_none_or(|p| tree.clade_size(p) > cap)
        })
        .collect()
}

#[test]
fn partition_roots_match_definition() {
    let mut r = rng(15);
    for i in 0..200 {
        let n = 1 + i % 40;
        let tree = random_tree(n, &mut r).unwrap();
        for cap in 2..=n.max(2) {
            let p = clade_partition(&tree, Side::Left, Cap::Int(cap as u64)).unwrap();
            let mut roots = p.roots().to_vec();
            roots.sort();
            assert_eq!(roots, brute_partition_roots(&tree, cap));
        }
    }
}

#[test]
fn random_tree_uniform_over_labeled_trees() {
    const DRAWS: usize = 100_000;
    for (n, classes) in [(3usize, 3usize), (4, 15)] {
        let mut r = sample_rng(77, n, 0);
        let freq = frequencies((0..DRAWS).map(|_| labeled_key(&random_tree(n, &mut r).unwrap())));
        assert_eq!(freq.len(), classes);
        for (k, c) in freq {
            let p = c as f64 / DRAWS as f64;
            assert!((p - 1.0 / classes as f64).abs() <= 0.02, "n={n} {k}: {p}");
        }
    }
}

#[test]
fn plane_tree_uniform_over_plane_shapes() {
    const DRAWS: usize = 100_000;
    // Catalan numbers: 2 and 5 plane shapes with 3 and 4 leaves.
    for (n, shapes, labeled) in [(3usize, 2usize, 3usize), (4, 5, 15)] {
        let mut r = sample_rng(78, n, 0);
        let trees: Vec<_> = (0..DRAWS)
            .map(|_| random_plane_tree(n, &mut r).unwrap())
            .collect();
        let plane = frequencies(trees.iter().map(plane_key));
        assert_eq!(plane.len(), shapes);
        for (k, c) in plane {
            let p = c as f64 / DRAWS as f64;
            assert!((p - 1.0 / shapes as f64).abs() <= 0.02, "n={n} {k}: {p}");
        }
        let unordered = frequencies(trees.iter().map(labeled_key));
        assert_eq!(unordered.len(), labeled);
        for (k, c) in unordered {
            let p = c as f64 / DRAWS as f64;
            assert!((p - 1.0 / labeled as f64).abs() <= 0.02, "n={n} {k}: {p}");
        }
    }
}

#[test]
fn witness_layouts_are_optimal() {
    for t in instances(6, 2..=10, 80) {
        let r = exact_crt(&t).unwrap();
        let TanglegramLayout { left, right } = &r.witness;
        assert_eq!(crossings(&t, left.bits(), right.bits()), r.crt);
        assert!(
            !left.bits().first().copied().unwrap_or(false),
            "left root bit is fixed to 0"
        );
    }
}

/// Every drawing of `t`, as plane shapes plus the matching read top to bottom.
fn drawings(t: &tanglegram::Tanglegram) -> std::collections::BTreeSet<String> {
    let (ln, rn) = (t.left().internal_count(), t.right().internal_count());
    let mut out = std::collections::BTreeSet::new();
    for l in 0..1u64 << ln {
        for r in 0..1u64 << rn {
            let d = TanglegramLayout {
                left: SwitchVector::new(bits_of(l, ln)),
                right: SwitchVector::new(bits_of(r, rn)),
            };
            let drawn = t.with_layout(&d).unwrap();
            let lo = order(drawn.left(), &vec![false; ln]);
            let ro = order(drawn.right(), &vec![false; rn]);
            let mut pr = vec![0; t.n()];
            for (p, &leaf) in ro.iter().enumerate() {
                pr[leaf] = p;
            }
            let m: Vec<usize> = lo.iter().map(|&leaf| pr[drawn.matching()[leaf]]).collect();
            out.insert(format!(
                "{}|{}|{m:?}",
                plane_key(drawn.left()),
                plane_key(drawn.right())
            ));
        }
    }
    out
}

#[test]
fn canonical_form_matches_drawing_oracle() {
    for n in 2..=6 {
        let ts = instances(9, n..=n, 40);
        let keys: Vec<_> = ts.iter().map(drawings).collect();
        for i in 0..ts.len() {
            for j in i..ts.len() {
                let same = !keys[i].is_disjoint(&keys[j]);
                assert_eq!(ts[i].is_isomorphic(&ts[j]), same, "{}\n{}", ts[i], ts[j]);
            }
        }
    }
    for n in 4..=7 {
        let p = caterpillar_tanglegram(n).unwrap();
        assert!(p.is_isomorphic(&p.swapped()));
        assert!(p.is_isomorphic(&p.relabel(|l| format!("q{l}")).unwrap()));
    }
}
