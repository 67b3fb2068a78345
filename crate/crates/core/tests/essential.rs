mod common;

use common::*;
use meeksep::graph::{Dag, Pdag};
use meeksep::meek::{essential_graph, interventional_essential_graph, meek_closure, oriented_arcs};
use meeksep::props;
use meeksep::InterventionSet;
use proptest::prelude::*;

#[test]
fn d4_classes() {
    let d4 = Dag::complete(4);
    let e = essential_graph(&d4);
    assert!(e.arcs().is_empty());
    assert_eq!(e.num_undirected(), 6);
    let e = interventional_essential_graph(&d4, &InterventionSet::atomic([0]));
    assert_eq!(e.arcs(), vec![(0, 1), (0, 2), (0, 3)]);
    let e = interventional_essential_graph(&d4, &InterventionSet::atomic([1]));
    assert_eq!(e.undirected_edges(), vec![(2, 3)]);
}

#[test]
fn collider_is_compelled() {
    let g = Dag::new(4, [(0, 2), (1, 2), (2, 3)]).unwrap();
    let e = essential_graph(&g);
    assert_eq!(e.arcs(), vec![(0, 2), (1, 2), (2, 3)]);
}

#[test]
fn enumeration_references_agree() {
    for s in 0..60 {
        let g = meeksep::gen::er_dag(5, 0.5, s);
        for iset in small_intervention_sets(5) {
            let e = props::essential_bruteforce(&g, &iset);
            assert_eq!(split(&e), mec_oracle(&g, &iset));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn matches_order_enumeration(g in arb_dag(6), picks in proptest::collection::vec(any::<prop::sample::Index>(), 0..3)) {
        let iset = InterventionSet::atomic(picks.iter().map(|i| i.index(g.n())));
        let e = interventional_essential_graph(&g, &iset);
        prop_assert_eq!(split(&e), mec_oracle(&g, &iset));
    }

    #[test]
    fn closure_is_idempotent(g in arb_dag(9), picks in proptest::collection::vec(any::<prop::sample::Index>(), 0..4)) {
        let iset = InterventionSet::atomic(picks.iter().map(|i| i.index(g.n())));
        let e = interventional_essential_graph(&g, &iset);
        prop_assert_eq!(meek_closure(&e).unwrap(), e);
    }

    #[test]
    fn closure_ignores_input_order(g in arb_dag(9), seed in any::<u64>()) {
        let e = essential_graph(&g);
        let mut arcs = e.arcs();
        let mut und = e.undirected_edges();
        let mut rng = meeksep::seed::rng(seed);
        rand::seq::SliceRandom::shuffle(&mut arcs[..], &mut rng);
        rand::seq::SliceRandom::shuffle(&mut und[..], &mut rng);
        let und: Vec<_> = und.into_iter().enumerate().map(|(i, (u, v))| if i % 2 == 0 { (v, u) } else { (u, v) }).collect();
        let again = meek_closure(&Pdag::new(g.n(), arcs, und).unwrap()).unwrap();
        prop_assert_eq!(again, e);
    }

    #[test]
    fn invariant_under_relabeling(
        g in arb_dag(8),
        perm in Just((0..8).collect::<Vec<usize>>()).prop_shuffle(),
        picks in proptest::collection::vec(any::<prop::sample::Index>(), 0..3),
    ) {
        let perm: Vec<usize> = perm.into_iter().filter(|&v| v < g.n()).collect();
        let targets: Vec<usize> = picks.iter().map(|i| i.index(g.n())).collect();
        let h = relabel(&g, &perm);
        let mapped: Arcs = oriented_arcs(&g, &InterventionSet::atomic(targets.iter().copied()))
            .into_iter()
            .map(|(u, v)| (perm[u], perm[v]))
            .collect();
        let direct = oriented_arcs(&h, &InterventionSet::atomic(targets.iter().map(|&v| perm[v])));
        prop_assert_eq!(mapped, direct);
    }

    #[test]
    fn sound_chordal_and_monotone(g in arb_dag(12), i in arb_atomic(12, 3), j in arb_atomic(12, 3)) {
        let keep = |s: &InterventionSet| InterventionSet::atomic(s.atomic_targets().into_iter().filter(|&v| v < g.n()));
        let (i, j) = (keep(&i), keep(&j));
        let e = interventional_essential_graph(&g, &i);
        for (u, v) in e.arcs() {
            prop_assert!(g.has_arc(u, v));
        }
        prop_assert_eq!(nonchordal_components(&e), 0);
        let more = oriented_arcs(&g, &i.union(&j));
        prop_assert!(oriented_arcs(&g, &i).is_subset(&more));
    }

    #[test]
    fn moral_graphs_have_undirected_classes(g in arb_moral(2, 20)) {
        prop_assert!(colliders(g.n(), &g.arcs()).is_empty());
        let e = essential_graph(&g);
        prop_assert!(e.arcs().is_empty());
        prop_assert_eq!(undirected_components(&e).len(), 1);
    }

    #[test]
    fn decomposition_identities(g in arb_dag(8), i in arb_atomic(8, 3), j in arb_atomic(8, 3)) {
        let keep = |s: &InterventionSet| InterventionSet::atomic(s.atomic_targets().into_iter().filter(|&v| v < g.n()));
        prop_assert_eq!(props::check_decomposition(&g, &keep(&i), &keep(&j)), Ok(()));
    }

    #[test]
    fn chain_components_agree(g in arb_dag(12), i in arb_atomic(12, 2)) {
        let i = InterventionSet::atomic(i.atomic_targets().into_iter().filter(|&v| v < g.n()));
        let e = interventional_essential_graph(&g, &i);
        let mut comps = e.chain_components();
        for c in &mut comps {
            c.sort_unstable();
        }
        comps.sort();
        prop_assert_eq!(comps, undirected_components(&e));
    }
}
