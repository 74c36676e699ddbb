#![allow(dead_code)]

use std::collections::BTreeSet;

use ghz_routing::graph::{Graph, Path, VertexId};
use ghz_routing::protocols::RepeaterLine;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn v(x: u32) -> VertexId {
    VertexId(x)
}

pub fn set(xs: impl IntoIterator<Item = u32>) -> BTreeSet<VertexId> {
    xs.into_iter().map(VertexId).collect()
}

pub fn line_graph(len: u32) -> Graph {
    if len == 1 {
        return Graph::with_vertices([1u32]).unwrap();
    }
    Graph::from_edges((1..len).map(|i| (i, i + 1))).unwrap()
}

/// Connected random graph on `total` vertices containing an induced
/// canonical line for `n` targets on randomly chosen labels.
pub fn planted_line<R: Rng>(rng: &mut R, n: usize, total: usize, p: f64) -> (Graph, RepeaterLine) {
    let len = if n == 2 { 2 } else { 2 * n - 3 };
    assert!(total >= len);
    let mut labels: Vec<u32> = (1..=total as u32).collect();
    labels.shuffle(rng);
    let (line, rest) = labels.split_at(len);
    let mut g = Graph::with_vertices(labels.iter().copied()).unwrap();
    for w in line.windows(2) {
        g.add_edge(v(w[0]), v(w[1])).unwrap();
    }
    // every extra vertex hooks onto something earlier, which keeps g connected
    for (i, &x) in rest.iter().enumerate() {
        let earlier = &labels[..len + i];
        let anchor = earlier[rng.gen_range(0..earlier.len())];
        g.add_edge(v(x), v(anchor)).unwrap();
        for &y in earlier {
            if y != anchor && rng.gen_bool(p) {
                g.add_edge(v(x), v(y)).unwrap();
            }
        }
    }
    let rl = RepeaterLine::canonical(Path::new(line.iter().copied())).unwrap();
    (g, rl)
}

/// Graphs on labels `1..=n` for `n` in the given range.
pub fn arb_graph(max_n: u32) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = (n * (n - 1) / 2) as usize;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut g = Graph::with_vertices(1..=n).unwrap();
            let mut k = 0;
            for a in 1..=n {
                for b in a + 1..=n {
                    if bits[k] {
                        g.add_edge(v(a), v(b)).unwrap();
                    }
                    k += 1;
                }
            }
            g
        })
    })
}

/// A graph together with one of its vertices.
pub fn arb_graph_vertex(max_n: u32) -> impl Strategy<Value = (Graph, VertexId)> {
    arb_graph(max_n).prop_flat_map(|g| {
        let n = g.num_vertices() as u32;
        (Just(g), (1..=n).prop_map(VertexId))
    })
}
