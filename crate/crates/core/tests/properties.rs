mod common;

use common::*;
use proptest::prelude::*;
use tanglegram::bound::{clade_partition, crossing_lower_bound, Cap};
use tanglegram::layout::{crossing_count, mirror_right};
use tanglegram::sampler::{random_tanglegram, random_tree, sample_rng, Distribution, SampleConfig};
use tanglegram::solver::exact_crt;
use tanglegram::{parse, parse_tree, serialize, Side, SwitchVector, Tanglegram, TanglegramLayout};

fn tanglegram(max_n: usize) -> impl Strategy<Value = Tanglegram> {
    (1..=max_n, any::<u64>(), any::<bool>()).prop_map(|(n, seed, plane)| {
        let mut cfg = SampleConfig::new(n, seed, 1);
        if plane {
            cfg.distribution = Distribution::PlaneUniform;
        }
        random_tanglegram(&cfg, 0).unwrap()
    })
}

fn with_layout(max_n: usize) -> impl Strategy<Value = (Tanglegram, TanglegramLayout)> {
    (tanglegram(max_n), any::<u64>()).prop_map(|(t, seed)| {
        let d = random_layout(&t, &mut rng(seed));
        (t, d)
    })
}

proptest! {
    #[test]
    fn serialization_round_trips(t in tanglegram(40)) {
        let text = serialize(&t);
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(serialize(&back), text);
    }

    #[test]
    fn tree_text_round_trips(n in 1usize..60, seed: u64) {
        let tree = random_tree(n, &mut sample_rng(seed, n, 0)).unwrap();
        let text = tree.to_parenthesized();
        prop_assert_eq!(parse_tree(&text).unwrap(), tree);
    }

    #[test]
    fn mirrored_right_side_complements((t, d) in with_layout(30)) {
        let a = crossing_count(&t, &d).unwrap();
        let b = crossing_count(&t, &mirror_right(&d)).unwrap();
        prop_assert_eq!(a + b, choose2(t.n()));
    }

    #[test]
    fn redrawing_preserves_crossings((t, d) in with_layout(30)) {
        let drawn = t.with_layout(&d).unwrap();
        let id = TanglegramLayout::identity(&drawn);
        prop_assert_eq!(crossing_count(&drawn, &id).unwrap(), crossing_count(&t, &d).unwrap());
        prop_assert!(drawn.is_isomorphic(&t));
    }

    #[test]
    fn crt_invariant_under_isomorphism((t, d) in with_layout(9)) {
        let c = exact_crt(&t).unwrap().crt;
        let drawn = t.with_layout(&d).unwrap().relabel(|l| format!("z{l}")).unwrap();
        prop_assert_eq!(exact_crt(&drawn).unwrap().crt, c);
        prop_assert_eq!(exact_crt(&t.swapped()).unwrap().crt, c);
        prop_assert_eq!(t.canonical_form(), t.swapped().swapped().canonical_form());
    }

    #[test]
    fn crt_never_exceeds_any_layout((t, d) in with_layout(9)) {
        let c = exact_crt(&t).unwrap().crt;
        prop_assert!(c <= crossing_count(&t, &d).unwrap());
        prop_assert!(2 * c < choose2(t.n()).max(1));
    }

    #[test]
    fn bound_below_crt(t in tanglegram(10), cl in 2u64..12, cr in 2u64..12) {
        let b = crossing_lower_bound(&t, Cap::Int(cl), Cap::Int(cr)).unwrap();
        prop_assert!(b <= exact_crt(&t).unwrap().crt);
    }

    #[test]
    fn partitions_are_legal(n in 1usize..200, seed: u64, cap in 2u64..210) {
        let tree = random_tree(n, &mut sample_rng(seed, n, 0)).unwrap();
        let p = clade_partition(&tree, Side::Right, Cap::Int(cap)).unwrap();
        let mut covered = vec![false; n];
        for (&v, range) in p.roots().iter().zip(p.parts()) {
            prop_assert_eq!(tree.clade_leaves(v), range.clone());
            prop_assert!(range.len() as u64 <= cap);
            if let Some(parent) = tree.parent(v) {
                prop_assert!(tree.clade_size(parent) as u64 > cap);
            }
            for leaf in range.clone() {
                prop_assert!(!covered[leaf]);
                covered[leaf] = true;
            }
        }
        prop_assert!(covered.into_iter().all(|c| c));
    }

    #[test]
    fn edge_removal_changes_crt_by_at_most_n_minus_3(t in tanglegram(8), pick: usize) {
        prop_assume!(t.n() >= 3);
        let e = t.edges().nth(pick % t.n()).unwrap();
        let sub = t.remove_edge(e).unwrap();
        let (a, b) = (exact_crt(&t).unwrap().crt, exact_crt(&sub).unwrap().crt);
        prop_assert!(b <= a);
        prop_assert!(a - b <= t.n() as u64 - 3);
    }

    #[test]
    fn switch_vector_text_round_trips(bits in proptest::collection::vec(any::<bool>(), 0..40)) {
        let s = SwitchVector::new(bits);
        prop_assert_eq!(SwitchVector::parse(&s.to_string()).unwrap(), s);
    }
}
