mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use common::*;
use korb_core::aut::SearchBudget;
use korb_core::gi::{initial_partition, isomorphic, orbit_partition, refine_once, Graph, IsoAnswer, OrbitStatus};
use korb_core::korbit::{
    act_left, act_right, homogeneity_check, join, meet, orbit_rows, orbits_k, project, refines, right_translate, KSet,
    PartitionK, Subspace, DEFAULT_TUPLE_BUDGET,
};
use korb_core::{is_regular_element, PermGroup, Permutation};
use proptest::prelude::*;
use proptest::test_runner::{Config, FileFailurePersistence, RngSeed};

fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(0x6b6f_7262),
        failure_persistence: Some(Box::new(FileFailurePersistence::Off)),
        ..Config::default()
    }
}

fn perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle().prop_map(|v| Permutation::from_images(&v).unwrap())
}

/// An ordered list of `l` distinct coordinates out of `0..k`.
fn subspace(k: usize, l: usize) -> impl Strategy<Value = Subspace> {
    Just((0..k).collect::<Vec<usize>>()).prop_shuffle().prop_map(move |v| Subspace::new(v[..l].to_vec()).unwrap())
}

fn kset_from(k: usize, n: usize, rows: Vec<Vec<usize>>) -> KSet {
    let rows: BTreeSet<Vec<usize>> = rows.into_iter().map(|r| r[..k].to_vec()).collect();
    KSet::new(k, n, &rows.into_iter().collect::<Vec<_>>()).unwrap()
}

/// A set of distinct-coordinate k-tuples on n points, a permutation and a
/// subspace.
fn set_perm_subspace() -> impl Strategy<Value = (KSet, Permutation, Subspace)> {
    (3usize..=7, 1usize..=4).prop_flat_map(|(n, k)| {
        let k = k.min(n);
        (
            prop::collection::vec(Just((0..n).collect::<Vec<usize>>()).prop_shuffle(), 1..12)
                .prop_map(move |rows| kset_from(k, n, rows)),
            perm(n),
            (1..=k).prop_flat_map(move |l| subspace(k, l)),
        )
    })
}

/// A set of n-tuples on n points with a permutation of the coordinates and
/// a subspace.
fn ambient_perm_subspace() -> impl Strategy<Value = (KSet, Permutation, Subspace)> {
    (3usize..=7).prop_flat_map(|n| {
        (
            prop::collection::vec(Just((0..n).collect::<Vec<usize>>()).prop_shuffle(), 1..10)
                .prop_map(move |rows| kset_from(n, n, rows)),
            perm(n),
            (1..=n).prop_flat_map(move |l| subspace(n, l)),
        )
    })
}

fn partition_from_labels(x: &KSet, labels: &[usize]) -> PartitionK {
    let m = labels.iter().max().map_or(0, |&m| m + 1);
    let classes = (0..m)
        .map(|c| {
            let rows: Vec<Vec<usize>> = x
                .iter()
                .zip(labels)
                .filter(|(_, &l)| l == c)
                .map(|(t, _)| t.iter().map(|&v| v as usize).collect())
                .collect();
            KSet::new(x.arity(), x.degree(), &rows).unwrap()
        })
        .collect();
    PartitionK::from_classes(x.arity(), x.degree(), classes).unwrap()
}

/// A carrier of pairs with three partitions of it.
fn three_partitions() -> impl Strategy<Value = (PartitionK, PartitionK, PartitionK)> {
    (4usize..=6).prop_flat_map(|n| {
        let all: Vec<Vec<usize>> = (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| vec![a, b])).collect();
        let x = KSet::new(2, n, &all).unwrap();
        let len = x.len();
        let labels = prop::collection::vec(0usize..4, len);
        (labels.clone(), labels.clone(), labels).prop_map(move |(a, b, c)| {
            (partition_from_labels(&x, &a), partition_from_labels(&x, &b), partition_from_labels(&x, &c))
        })
    })
}

fn small_group() -> impl Strategy<Value = Arc<PermGroup>> {
    (2usize..=6).prop_flat_map(|n| prop::collection::vec(perm(n), 1..3).prop_map(move |g| Arc::new(PermGroup::new(n, g).unwrap())))
}

fn graph() -> impl Strategy<Value = Graph> {
    (1usize..=7).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let m = pairs.len();
        prop::collection::vec(any::<bool>(), m).prop_map(move |bits| {
            let e: Vec<(usize, usize)> = pairs.iter().zip(&bits).filter(|(_, &b)| b).map(|(&p, _)| p).collect();
            Graph::new(n, &e).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(config(500))]

    #[test]
    fn compose_is_associative_with_two_sided_inverse((a, b, c) in (1usize..=8).prop_flat_map(|n| (perm(n), perm(n), perm(n)))) {
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert!(a.compose(&a.inverse()).unwrap().is_identity());
        prop_assert!(a.inverse().compose(&a).unwrap().is_identity());
    }

    #[test]
    fn regular_elements_have_one_cycle_length(g in (1usize..=9).prop_flat_map(perm)) {
        let mut lens = Vec::new();
        let mut seen = vec![false; g.degree()];
        for s in 0..g.degree() {
            let mut len = 0;
            let mut v = s;
            while !seen[v] {
                seen[v] = true;
                v = g.apply(v);
                len += 1;
            }
            if len > 0 {
                lens.push(len);
            }
        }
        let uniform = lens.iter().all(|&l| l == lens[0]) && lens.first().is_some_and(|&l| l > 1);
        prop_assert_eq!(is_regular_element(&g).is_some(), uniform);
        if let Some(l) = is_regular_element(&g) {
            prop_assert_eq!(l, lens[0]);
        }
    }

    #[test]
    fn left_action_commutes_with_projection((x, g, i) in set_perm_subspace()) {
        let a = act_left(&g, &project(&x, &i).unwrap()).unwrap();
        let b = project(&act_left(&g, &x).unwrap(), &i).unwrap();
        prop_assert_eq!(&a, &b);
        let oracle: BTreeSet<Vec<usize>> =
            x.iter().map(|t| i.indices().iter().map(|&c| g.apply(t[c] as usize)).collect()).collect();
        let got: BTreeSet<Vec<usize>> = a.iter().map(|t| t.iter().map(|&v| v as usize).collect()).collect();
        prop_assert_eq!(got, oracle);
    }

    #[test]
    fn right_action_is_a_reprojection((x, g, i) in ambient_perm_subspace()) {
        let moved = project(&right_translate(&x, &g).unwrap(), &i).unwrap();
        let rp = act_right(&x, &i, &g).unwrap();
        prop_assert_eq!(&moved, &rp.set);
        let gi: Vec<usize> = i.indices().iter().map(|&c| g.apply(c)).collect();
        let oracle: BTreeSet<Vec<usize>> = x.iter().map(|t| gi.iter().map(|&c| t[c] as usize).collect()).collect();
        let got: BTreeSet<Vec<usize>> = moved.iter().map(|t| t.iter().map(|&v| v as usize).collect()).collect();
        prop_assert_eq!(got, oracle);
        let mut sorted = gi.clone();
        sorted.sort_unstable();
        prop_assert_eq!(rp.sorted.indices(), &sorted[..]);
        for t in rp.set.iter() {
            let mut u = vec![0u16; t.len()];
            for (j, &s) in rp.sorting.iter().enumerate() {
                u[s] = t[j];
            }
            prop_assert!(rp.sorted_set.contains(&u));
        }
    }

    #[test]
    fn partition_lattice_laws((p, q, r) in three_partitions()) {
        let pq = meet(&p, &q).unwrap();
        prop_assert_eq!(&pq, &meet(&q, &p).unwrap());
        prop_assert_eq!(join(&p, &q).unwrap(), join(&q, &p).unwrap());
        prop_assert_eq!(meet(&pq, &r).unwrap(), meet(&p, &meet(&q, &r).unwrap()).unwrap());
        prop_assert_eq!(
            join(&join(&p, &q).unwrap(), &r).unwrap(),
            join(&p, &join(&q, &r).unwrap()).unwrap()
        );
        prop_assert_eq!(&meet(&p, &join(&p, &q).unwrap()).unwrap(), &p);
        prop_assert_eq!(&join(&p, &pq).unwrap(), &p);
        prop_assert!(refines(&pq, &p).unwrap());
        prop_assert!(refines(&p, &join(&p, &q).unwrap()).unwrap());
        prop_assert!(pq.is_partition());
    }

    #[test]
    fn orbits_are_homogeneous_and_invariant(g in small_group()) {
        let order = g.order().unwrap();
        for k in 1..=g.degree().min(3) {
            let orbits = orbits_k(&g, k, DEFAULT_TUPLE_BUDGET).unwrap();
            let total: usize = orbits.iter().map(|o| o.len()).sum();
            prop_assert_eq!(total, (0..k).map(|i| g.degree() - i).product::<usize>());
            for o in &orbits {
                prop_assert_eq!(order % o.len() as u64, 0);
                for s in g.generators() {
                    prop_assert_eq!(&act_left(s, &o.set).unwrap(), &o.set);
                }
                for l in 1..=k {
                    for idx in subsets(k, l) {
                        let i = Subspace::new(idx).unwrap();
                        prop_assert!(homogeneity_check(&o.set, &i).unwrap());
                        let p = project(&o.set, &i).unwrap();
                        let alpha: Vec<u16> = i.indices().iter().map(|&c| o.set.tuple(0)[c]).collect();
                        let rows: BTreeSet<Vec<u16>> = orbit_rows(&g, &alpha).into_iter().collect();
                        let got: BTreeSet<Vec<u16>> = p.iter().map(|t| t.to_vec()).collect();
                        prop_assert_eq!(got, rows);
                    }
                }
            }
        }
    }

    #[test]
    fn refinement_is_sound_and_monotone(g in graph()) {
        let n = g.order();
        let auts = brute_graph_isos(&g, &g);
        let mut s = initial_partition(&g).unwrap();
        let mut steps = 0;
        loop {
            for a in &auts {
                for u in 0..n {
                    for v in 0..n {
                        prop_assert_eq!(s.color(u, v), s.color(a[u], a[v]));
                    }
                }
            }
            let next = refine_once(&s);
            prop_assert!(next.class_count() >= s.class_count());
            steps += 1;
            if next.class_count() == s.class_count() {
                break;
            }
            prop_assert!(steps <= n * n);
            s = next;
        }
    }

    #[test]
    fn orbit_partition_matches_brute_force(g in graph()) {
        let auts = brute_graph_isos(&g, &g);
        let op = orbit_partition(&g, SearchBudget::default()).unwrap();
        prop_assert!(matches!(op.status, OrbitStatus::Exact { .. }), "orbit search ran out of budget");
        let mut got = op.vertex_classes.clone();
        got.sort();
        prop_assert_eq!(got, orbits_of_maps(g.order(), &auts));
    }

    #[test]
    fn isomorphism_agrees_with_brute_force((a, b, p) in (graph(), graph()).prop_flat_map(|(a, b)| {
        let n = a.order();
        (Just(a), Just(b), perm(n))
    })) {
        let c = a.relabel(&p).unwrap();
        match isomorphic(&a, &c, SearchBudget::default()).unwrap() {
            IsoAnswer::Yes { bijection } => prop_assert!(a.is_isomorphism(&c, &bijection)),
            other => prop_assert!(false, "relabelled copy answered {:?}", other),
        }
        let expected = !brute_graph_isos(&a, &b).is_empty();
        match isomorphic(&a, &b, SearchBudget::default()).unwrap() {
            IsoAnswer::Yes { bijection } => {
                prop_assert!(expected);
                prop_assert!(a.is_isomorphism(&b, &bijection));
            }
            IsoAnswer::No { .. } => prop_assert!(!expected),
            IsoAnswer::Undecided => prop_assert!(false, "undecided at n = {}", a.order()),
        }
    }
}

fn subsets(k: usize, l: usize) -> Vec<Vec<usize>> {
    (0u32..1 << k)
        .filter(|m| m.count_ones() as usize == l)
        .map(|m| (0..k).filter(|&i| m >> i & 1 == 1).collect())
        .collect()
}
