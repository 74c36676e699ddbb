mod common;

use common::{arb_graph, arb_graph_vertex, planted_line, v};
use ghz_routing::graph::{Graph, VertexId};
use ghz_routing::grid::{enumerate_shortest_paths, path_between, path_vector, GridSpec};
use ghz_routing::protocols::{
    compare_costs, find_route, ghz_extract_lc_variant, ghz_extract_x_variant, repeater_protocol, x_protocol,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
enum Op {
    Lc(u32),
    Z(u32),
    Y(u32),
    X(u32, usize),
}

fn arb_ops() -> impl Strategy<Value = Vec<Op>> {
    proptest::collection::vec(
        prop_oneof![
            (1..=10u32).prop_map(Op::Lc),
            (1..=10u32).prop_map(Op::Z),
            (1..=10u32).prop_map(Op::Y),
            (1..=10u32, 0..10usize).prop_map(|(a, k)| Op::X(a, k)),
        ],
        0..12,
    )
}

// Applies the ops that refer to live vertices, skipping the rest.
fn run_ops(g: &mut Graph, ops: &[Op]) {
    for op in ops {
        match *op {
            Op::Lc(a) if g.contains(v(a)) => g.complement_at(v(a)).unwrap(),
            Op::Z(a) if g.contains(v(a)) => {
                g.apply_z(v(a)).unwrap();
            }
            Op::Y(a) if g.contains(v(a)) => {
                g.apply_y(v(a)).unwrap();
            }
            Op::X(a, k) if g.contains(v(a)) => {
                let ns: Vec<VertexId> = g.neighbors(v(a)).unwrap().iter().copied().collect();
                let w = (!ns.is_empty()).then(|| ns[k % ns.len()]);
                g.apply_x(v(a), w).unwrap();
            }
            _ => {}
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn lc_is_an_involution((g, a) in arb_graph_vertex(9)) {
        let once = g.local_complement(a).unwrap();
        prop_assert_eq!(once.local_complement(a).unwrap(), g);
    }

    #[test]
    fn lc_keeps_the_center_neighborhood((g, a) in arb_graph_vertex(9)) {
        let once = g.local_complement(a).unwrap();
        prop_assert_eq!(once.neighbors(a).unwrap(), g.neighbors(a).unwrap());
    }

    #[test]
    fn deletion_commutes_with_lc_elsewhere((g, i) in arb_graph_vertex(9), j in 1..=9u32) {
        let j = v(j);
        prop_assume!(g.contains(j) && i != j);
        let left = g.local_complement(j).unwrap().delete_vertex(i).unwrap();
        let right = g.delete_vertex(i).unwrap().local_complement(j).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn rewrites_keep_graphs_well_formed(g in arb_graph(10), ops in arb_ops()) {
        let mut h = g;
        run_ops(&mut h, &ops);
        prop_assert!(h.is_well_formed());
    }

    #[test]
    fn y_is_lc_then_delete((g, a) in arb_graph_vertex(9)) {
        let y = g.measure_y(a).unwrap();
        let composed = g.local_complement(a).unwrap().delete_vertex(a).unwrap();
        prop_assert_eq!(y, composed);
    }

    #[test]
    fn x_is_the_four_step_composition((g, a) in arb_graph_vertex(9), k in 0..9usize) {
        let ns: Vec<VertexId> = g.neighbors(a).unwrap().iter().copied().collect();
        prop_assume!(!ns.is_empty());
        let w = ns[k % ns.len()];
        let (x, rec) = g.measure_x(a, Some(w)).unwrap();
        let composed = g
            .local_complement(w).unwrap()
            .local_complement(a).unwrap()
            .delete_vertex(a).unwrap()
            .local_complement(w).unwrap();
        prop_assert_eq!(x, composed);
        prop_assert_eq!(rec.special_neighbor, Some(w));
    }

    #[test]
    fn rewrites_are_deterministic(g in arb_graph(10), ops in arb_ops()) {
        let mut a = g.clone();
        let mut b = g;
        run_ops(&mut a, &ops);
        run_ops(&mut b, &ops);
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn path_vectors_round_trip(rows in 1..=6usize, cols in 1..=6usize, seed in any::<u64>()) {
        let spec = GridSpec::new(rows, cols).unwrap();
        let n = spec.size() as u64;
        let a = VertexId((seed % n) as u32 + 1);
        let b = VertexId(((seed / n) % n) as u32 + 1);
        let paths = enumerate_shortest_paths(&spec, a, b).unwrap();
        prop_assert!(!paths.is_empty());
        let p = &paths[(seed as usize / 7) % paths.len()];
        let vector = path_vector(&spec, p).unwrap();
        prop_assert_eq!(vector.total(), spec.distance(a, b).unwrap());
        prop_assert_eq!(&path_between(&spec, a, b, &vector).unwrap(), p);
    }

    #[test]
    fn x_protocol_never_costs_more_than_repeater(g in arb_graph(10), a in 1..=10u32, b in 1..=10u32) {
        let (a, b) = (v(a), v(b));
        prop_assume!(a != b && g.contains(a) && g.contains(b));
        if let Ok(p) = find_route(&g, a, b) {
            let x = x_protocol(&g, &p).unwrap();
            let r = repeater_protocol(&g, &p).unwrap();
            prop_assert!(x.measurement_count() <= r.measurement_count());
            prop_assert!(x.final_graph.has_edge(a, b));
            prop_assert!(r.final_graph.has_edge(a, b));
        }
    }

    #[test]
    fn isolation_does_not_change_the_target_graph(seed in any::<u64>(), n in 2..=6usize, extra in 0..12usize) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let len = if n == 2 { 2 } else { 2 * n - 3 };
        let (g, rl) = planted_line(&mut rng, n, len + extra, 0.25);
        let t = rl.target_set();
        let induced = |h: &Graph| h.induced_subgraph(&t).unwrap();
        let lc_iso = ghz_extract_lc_variant(&g, &rl, true).unwrap();
        let lc_raw = ghz_extract_lc_variant(&g, &rl, false).unwrap();
        prop_assert_eq!(induced(&lc_iso.final_graph), induced(&lc_raw.final_graph));
        let x_iso = ghz_extract_x_variant(&g, &rl, true, true).unwrap();
        let x_raw = ghz_extract_x_variant(&g, &rl, false, true).unwrap();
        prop_assert_eq!(induced(&x_iso.final_graph), induced(&x_raw.final_graph));
        prop_assert_eq!(induced(&x_iso.final_graph), induced(&lc_iso.final_graph));
    }

    #[test]
    fn skipping_isolation_never_costs_more(seed in any::<u64>(), n in 3..=6usize, extra in 0..20usize) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, rl) = planted_line(&mut rng, n, 2 * n - 3 + extra, 0.2);
        let c = compare_costs(&g, &rl).unwrap();
        prop_assert!(c.without_isolation <= c.with_isolation, "{:?}", c);
        prop_assert!(c.formulas_agree(), "{:?}", c);
    }
}
