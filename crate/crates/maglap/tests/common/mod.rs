//! Shared helpers for integration tests: seeded random multigraph
//! generation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use maglap::graph::{ArcInput, MwGraph};

/// Connected random multigraph: up to `max_v` vertices and `max_e` arcs,
/// weights in [0.1, 10], angles in [0, 2π). A random spanning tree guarantees
/// connectivity; extra arcs (parallels and occasional loops) are sprinkled on
/// top.
pub fn random_graph(seed: u64, max_v: usize, max_e: usize) -> MwGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=max_v);
    let vertices: Vec<(String, f64)> = (0..n)
        .map(|i| (format!("v{i}"), rng.gen_range(0.1..10.0)))
        .collect();
    let mut arcs = Vec::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        arcs.push(arc_input(arcs.len(), i, j, &mut rng));
    }
    let extra = rng.gen_range(0..=max_e.saturating_sub(arcs.len()));
    for _ in 0..extra {
        let i = rng.gen_range(0..n);
        let j = if rng.gen_bool(0.1) {
            i // loop
        } else {
            rng.gen_range(0..n)
        };
        arcs.push(arc_input(arcs.len(), i, j, &mut rng));
    }
    MwGraph::new(vertices, arcs).expect("generated graph is valid")
}

fn arc_input(k: usize, tail: usize, head: usize, rng: &mut ChaCha8Rng) -> ArcInput {
    ArcInput {
        id: format!("e{k}"),
        tail: format!("v{tail}"),
        head: format!("v{head}"),
        weight: rng.gen_range(0.1..10.0),
        alpha: rng.gen_range(0.0..std::f64::consts::TAU),
    }
}

/// Random connected bipartite graph, loop-free, rewritten to standard weights
/// (`m(v) = deg(v)`, `m_e = 1`).
pub fn random_bipartite_standard(seed: u64, max_side: usize, max_e: usize) -> MwGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_b19a);
    let a = rng.gen_range(1..=max_side);
    let b = rng.gen_range(1..=max_side);
    let n = a + b;
    // Spanning tree: visit vertices with the two sides interleaved
    // (vertices 0..a are side A, a..n side B) and attach each new vertex to a
    // random already-visited vertex of the opposite side.
    let mut order: Vec<usize> = Vec::with_capacity(n);
    for k in 0..a.max(b) {
        if k < a {
            order.push(k);
        }
        if k < b {
            order.push(a + k);
        }
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for t in 1..n {
        let v = order[t];
        let opposite: Vec<usize> = order[..t]
            .iter()
            .copied()
            .filter(|&u| (u >= a) != (v >= a))
            .collect();
        pairs.push((v, opposite[rng.gen_range(0..opposite.len())]));
    }
    let extra = rng.gen_range(0..=max_e.saturating_sub(pairs.len()));
    for _ in 0..extra {
        pairs.push((rng.gen_range(0..a), a + rng.gen_range(0..b)));
    }
    let mut degree = vec![0usize; n];
    for &(i, j) in &pairs {
        degree[i] += 1;
        degree[j] += 1;
    }
    let vertices: Vec<(String, f64)> = (0..n)
        .map(|i| (format!("v{i}"), degree[i].max(1) as f64))
        .collect();
    let arcs: Vec<ArcInput> = pairs
        .iter()
        .enumerate()
        .map(|(k, &(i, j))| ArcInput {
            id: format!("e{k}"),
            tail: format!("v{i}"),
            head: format!("v{j}"),
            weight: 1.0,
            alpha: rng.gen_range(0.0..std::f64::consts::TAU),
        })
        .collect();
    MwGraph::new(vertices, arcs).expect("generated bipartite graph is valid")
}
