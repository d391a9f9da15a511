//! Weighted directed multigraphs with per-arc magnetic potentials.
//!
//! The central object is [`MwGraph`]: a finite directed multigraph with
//! positive weights on vertices and arcs and an angle `alpha` in `[0, 2π)` on
//! every arc. Loops and parallel arcs are allowed, and arc orientation is part
//! of the data (the magnetic Laplacian depends on it).
//!
//! The module also provides the two virtualization operations: removing arcs
//! while keeping vertex weights ([`MwGraph::virtualize_arcs`]) and compressing
//! onto functions vanishing on a vertex set ([`MwGraph::virtualize_vertices`],
//! producing a [`DirichletGraph`]), together with gauge/cohomology utilities
//! (spanning-tree reduction of the potential and cycle fluxes).

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Reduce an angle into `[0, 2π)`.
pub fn normalize_angle(a: f64) -> f64 {
    let mut t = a.rem_euclid(TAU);
    if t >= TAU {
        t -= TAU;
    }
    t
}

/// Distance between two angles on the circle.
pub fn circle_distance(a: f64, b: f64) -> f64 {
    let d = (normalize_angle(a) - normalize_angle(b)).abs();
    d.min(TAU - d)
}

#[derive(Clone, Debug)]
pub struct Vertex {
    pub id: String,
    pub weight: f64,
}

/// An arc of the multigraph. `tail` and `head` are indices into the owning
/// graph's vertex list; `alpha` is stored reduced into `[0, 2π)`.
#[derive(Clone, Debug)]
pub struct Arc {
    pub id: String,
    pub tail: usize,
    pub head: usize,
    pub weight: f64,
    pub alpha: f64,
}

impl Arc {
    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }
}

/// Arc description used when building a graph, with endpoints given by id.
#[derive(Clone, Debug)]
pub struct ArcInput {
    pub id: String,
    pub tail: String,
    pub head: String,
    pub weight: f64,
    pub alpha: f64,
}

#[derive(Clone, Debug)]
pub struct MwGraph {
    vertices: Vec<Vertex>,
    arcs: Vec<Arc>,
    v_by_id: HashMap<String, usize>,
    a_by_id: HashMap<String, usize>,
}

/// A gauge transformation `phi` together with the reduced potential
/// `alpha + d phi` it produces. The reduced potential vanishes on a spanning
/// tree and is supported on the tree chords (`support`), so it lives on at
/// most `Betti` arcs.
#[derive(Clone, Debug)]
pub struct GaugeResult {
    pub phi: BTreeMap<String, f64>,
    pub reduced_alpha: BTreeMap<String, f64>,
    pub support: BTreeSet<String>,
}

impl MwGraph {
    pub fn new(
        vertices: impl IntoIterator<Item = (String, f64)>,
        arcs: impl IntoIterator<Item = ArcInput>,
    ) -> Result<Self> {
        let mut g = MwGraph {
            vertices: Vec::new(),
            arcs: Vec::new(),
            v_by_id: HashMap::new(),
            a_by_id: HashMap::new(),
        };
        for (id, weight) in vertices {
            if weight <= 0.0 || !weight.is_finite() {
                return Err(Error::NonpositiveWeight(id, weight));
            }
            if g.v_by_id.insert(id.clone(), g.vertices.len()).is_some() {
                return Err(Error::DuplicateId(id));
            }
            g.vertices.push(Vertex { id, weight });
        }
        for a in arcs {
            if a.weight <= 0.0 || !a.weight.is_finite() {
                return Err(Error::NonpositiveWeight(a.id, a.weight));
            }
            let tail = g.vertex_index(&a.tail)?;
            let head = g.vertex_index(&a.head)?;
            if g.a_by_id.insert(a.id.clone(), g.arcs.len()).is_some() {
                return Err(Error::DuplicateId(a.id));
            }
            g.arcs.push(Arc {
                id: a.id,
                tail,
                head,
                weight: a.weight,
                alpha: normalize_angle(a.alpha),
            });
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn vertex_index(&self, id: &str) -> Result<usize> {
        self.v_by_id
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn arc_index(&self, id: &str) -> Result<usize> {
        self.a_by_id
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownArc(id.to_string()))
    }

    pub fn vertex(&self, id: &str) -> Result<&Vertex> {
        Ok(&self.vertices[self.vertex_index(id)?])
    }

    pub fn arc(&self, id: &str) -> Result<&Arc> {
        Ok(&self.arcs[self.arc_index(id)?])
    }

    /// Copy of the graph with `alpha` replaced arc-wise by `f`.
    pub fn with_alpha(&self, f: impl Fn(&Arc) -> f64) -> MwGraph {
        let mut g = self.clone();
        for a in &mut g.arcs {
            a.alpha = normalize_angle(f(a));
        }
        g
    }

    /// Number of arc ends at `v`; a loop contributes 2.
    pub fn degree(&self, v: &str) -> Result<usize> {
        let vi = self.vertex_index(v)?;
        Ok(self.degree_by_index(vi))
    }

    pub fn degree_by_index(&self, vi: usize) -> usize {
        self.arcs
            .iter()
            .map(|a| (a.tail == vi) as usize + (a.head == vi) as usize)
            .sum()
    }

    /// `rho(v) = m(E_v) / m(v)`, with loop weights counted twice.
    pub fn relative_weight(&self, v: &str) -> Result<f64> {
        let vi = self.vertex_index(v)?;
        Ok(self.relative_weight_by_index(vi))
    }

    pub fn relative_weight_by_index(&self, vi: usize) -> f64 {
        let incident: f64 = self
            .arcs
            .iter()
            .map(|a| {
                let ends = (a.tail == vi) as usize + (a.head == vi) as usize;
                ends as f64 * a.weight
            })
            .sum();
        incident / self.vertices[vi].weight
    }

    /// Maximum relative weight; the spectrum of the magnetic Laplacian lies in
    /// `[0, 2 * rho_infinity]`.
    pub fn rho_infinity(&self) -> Result<f64> {
        if self.vertices.is_empty() {
            return Err(Error::EmptyGraph);
        }
        Ok((0..self.vertices.len())
            .map(|i| self.relative_weight_by_index(i))
            .fold(f64::NEG_INFINITY, f64::max))
    }

    /// `|E| - |V| + 1` for a connected graph.
    pub fn betti(&self) -> Result<usize> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(self.arcs.len() + 1 - self.vertices.len())
    }

    /// Undirected connectivity. The empty graph counts as disconnected.
    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let adj = self.undirected_adjacency();
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &(w, _) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.vertices.len()
    }

    /// Two-coloring with no monochromatic arc, if one exists. Any loop rules
    /// it out.
    pub fn is_bipartite(&self) -> Option<(Vec<String>, Vec<String>)> {
        if self.arcs.iter().any(|a| a.is_loop()) {
            return None;
        }
        let adj = self.undirected_adjacency();
        let mut color = vec![None::<bool>; self.vertices.len()];
        for start in 0..self.vertices.len() {
            if color[start].is_some() {
                continue;
            }
            color[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                let c = color[v].unwrap();
                for &(w, _) in &adj[v] {
                    match color[w] {
                        None => {
                            color[w] = Some(!c);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == c => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        let mut sides = (Vec::new(), Vec::new());
        for (i, v) in self.vertices.iter().enumerate() {
            if color[i] == Some(false) {
                sides.0.push(v.id.clone());
            } else {
                sides.1.push(v.id.clone());
            }
        }
        Some(sides)
    }

    /// True when `m(v) = deg(v)` and all arc weights are 1 (to 1e-12).
    pub fn has_standard_weights(&self) -> bool {
        self.arcs.iter().all(|a| (a.weight - 1.0).abs() <= 1e-12)
            && (0..self.vertices.len())
                .all(|i| (self.vertices[i].weight - self.degree_by_index(i) as f64).abs() <= 1e-12)
    }

    /// True when all vertex and arc weights are 1 (to 1e-12).
    pub fn has_combinatorial_weights(&self) -> bool {
        self.vertices.iter().all(|v| (v.weight - 1.0).abs() <= 1e-12)
            && self.arcs.iter().all(|a| (a.weight - 1.0).abs() <= 1e-12)
    }

    fn undirected_adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for (ai, a) in self.arcs.iter().enumerate() {
            adj[a.tail].push((a.head, ai));
            if !a.is_loop() {
                adj[a.head].push((a.tail, ai));
            }
        }
        adj
    }

    /// BFS spanning tree from vertex 0. Returns the set of tree arc indices.
    /// Errors on disconnected input.
    fn spanning_tree(&self) -> Result<Vec<usize>> {
        if self.vertices.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let adj = self.undirected_adjacency();
        let mut seen = vec![false; self.vertices.len()];
        let mut tree = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &(w, ai) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    tree.push(ai);
                    queue.push_back(w);
                }
            }
        }
        if seen.iter().all(|&s| s) {
            Ok(tree)
        } else {
            Err(Error::Disconnected)
        }
    }

    /// Gauge transformation making the potential vanish on a BFS spanning
    /// tree. The chord values of the reduced potential equal the fluxes of the
    /// corresponding fundamental cycles.
    pub fn gauge_reduce(&self) -> Result<GaugeResult> {
        let tree = self.spanning_tree()?;
        let tree_set: BTreeSet<usize> = tree.iter().copied().collect();
        // phi so that alpha + d phi = 0 on tree arcs, found by walking the
        // tree from the root.
        let mut phi = vec![f64::NAN; self.vertices.len()];
        phi[0] = 0.0;
        let mut changed = true;
        while changed {
            changed = false;
            for &ai in &tree {
                let a = &self.arcs[ai];
                if phi[a.tail].is_nan() && !phi[a.head].is_nan() {
                    // 0 = alpha + phi(head) - phi(tail)
                    phi[a.tail] = normalize_angle(a.alpha + phi[a.head]);
                    changed = true;
                } else if phi[a.head].is_nan() && !phi[a.tail].is_nan() {
                    phi[a.head] = normalize_angle(phi[a.tail] - a.alpha);
                    changed = true;
                }
            }
        }
        let mut reduced = BTreeMap::new();
        let mut support = BTreeSet::new();
        for (ai, a) in self.arcs.iter().enumerate() {
            let val = normalize_angle(a.alpha + phi[a.head] - phi[a.tail]);
            if tree_set.contains(&ai) {
                reduced.insert(a.id.clone(), 0.0);
            } else {
                reduced.insert(a.id.clone(), val);
                support.insert(a.id.clone());
            }
        }
        let phi_map = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id.clone(), phi[i]))
            .collect();
        Ok(GaugeResult {
            phi: phi_map,
            reduced_alpha: reduced,
            support,
        })
    }

    /// Signed flux of the fundamental cycle of every spanning-tree chord,
    /// reduced mod 2π. A cohomology invariant of the potential.
    pub fn cycle_fluxes(&self) -> Result<BTreeMap<String, f64>> {
        let gauge = self.gauge_reduce()?;
        Ok(gauge
            .support
            .iter()
            .map(|id| (id.clone(), gauge.reduced_alpha[id]))
            .collect())
    }

    /// Remove the arcs `e0` keeping all vertices and their weights.
    pub fn virtualize_arcs(&self, e0: &[&str]) -> Result<MwGraph> {
        let mut remove = BTreeSet::new();
        for id in e0 {
            remove.insert(self.arc_index(id)?);
        }
        let mut g = MwGraph {
            vertices: self.vertices.clone(),
            arcs: Vec::new(),
            v_by_id: self.v_by_id.clone(),
            a_by_id: HashMap::new(),
        };
        for (ai, a) in self.arcs.iter().enumerate() {
            if !remove.contains(&ai) {
                g.a_by_id.insert(a.id.clone(), g.arcs.len());
                g.arcs.push(a.clone());
            }
        }
        Ok(g)
    }

    /// Compress onto functions vanishing on `v0`. Arcs lying entirely inside
    /// `v0` (loops included) are dropped; arcs joining `v0` to its complement
    /// are retained as Dirichlet contributions.
    pub fn virtualize_vertices(&self, v0: &[&str]) -> Result<DirichletGraph> {
        let mut excluded = BTreeSet::new();
        for id in v0 {
            excluded.insert(self.vertex_index(id)?);
        }
        if excluded.len() == self.vertices.len() {
            return Err(Error::EmptyActiveSet);
        }
        let inner: Vec<&str> = self
            .arcs
            .iter()
            .filter(|a| excluded.contains(&a.tail) && excluded.contains(&a.head))
            .map(|a| a.id.as_str())
            .collect();
        let base = self.virtualize_arcs(&inner)?;
        Ok(DirichletGraph { base, excluded })
    }

    /// True iff every arc of `e0` has an endpoint in `v0`.
    pub fn is_neighborhood(&self, e0: &[&str], v0: &[&str]) -> Result<bool> {
        let mut vset = BTreeSet::new();
        for id in v0 {
            vset.insert(self.vertex_index(id)?);
        }
        for id in e0 {
            let a = self.arc(id)?;
            if !vset.contains(&a.tail) && !vset.contains(&a.head) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Deterministic greedy vertex cover of `e0`: repeatedly take the vertex
    /// covering the most uncovered arcs, ties broken by vertex id.
    pub fn minimal_neighborhood(&self, e0: &[&str]) -> Result<Vec<String>> {
        let mut remaining = BTreeSet::new();
        for id in e0 {
            remaining.insert(self.arc_index(id)?);
        }
        let mut cover = Vec::new();
        while !remaining.is_empty() {
            let mut best: Option<(usize, &str, usize)> = None; // (count, id, index)
            for (vi, v) in self.vertices.iter().enumerate() {
                let count = remaining
                    .iter()
                    .filter(|&&ai| self.arcs[ai].tail == vi || self.arcs[ai].head == vi)
                    .count();
                if count == 0 {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bc, bid, _)) => count > bc || (count == bc && v.id.as_str() < bid),
                };
                if better {
                    best = Some((count, v.id.as_str(), vi));
                }
            }
            let (_, id, vi) = best.expect("uncovered arc with no endpoints");
            cover.push(id.to_string());
            remaining.retain(|&ai| self.arcs[ai].tail != vi && self.arcs[ai].head != vi);
        }
        cover.sort();
        Ok(cover)
    }
}

/// A graph together with an excluded vertex set: the operator attached to it
/// is the principal compression of the magnetic Laplacian onto functions
/// vanishing on the excluded set.
#[derive(Clone, Debug)]
pub struct DirichletGraph {
    base: MwGraph,
    excluded: BTreeSet<usize>,
}

impl DirichletGraph {
    pub fn base(&self) -> &MwGraph {
        &self.base
    }

    pub fn excluded_indices(&self) -> &BTreeSet<usize> {
        &self.excluded
    }

    pub fn excluded_ids(&self) -> Vec<String> {
        self.excluded
            .iter()
            .map(|&i| self.base.vertices()[i].id.clone())
            .collect()
    }

    /// Indices of the active (non-excluded) vertices, in vertex order.
    pub fn active_indices(&self) -> Vec<usize> {
        (0..self.base.vertex_count())
            .filter(|i| !self.excluded.contains(i))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(id: &str, t: &str, h: &str, w: f64, alpha: f64) -> ArcInput {
        ArcInput {
            id: id.into(),
            tail: t.into(),
            head: h.into(),
            weight: w,
            alpha,
        }
    }

    fn single_edge() -> MwGraph {
        MwGraph::new(
            [("v1".into(), 1.0), ("v2".into(), 1.0)],
            [arc("e1", "v1", "v2", 1.0, 0.0)],
        )
        .unwrap()
    }

    #[test]
    fn degree_counts_loops_twice() {
        let g = single_edge();
        assert_eq!(g.degree("v1").unwrap(), 1);
        assert_eq!(g.degree("v2").unwrap(), 1);

        let lg = MwGraph::new([("v".into(), 1.0)], [arc("l", "v", "v", 1.0, 0.0)]).unwrap();
        assert_eq!(lg.degree("v").unwrap(), 2);
        assert!((lg.relative_weight("v").unwrap() - 2.0).abs() < 1e-15);
        assert!((lg.rho_infinity().unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn unknown_ids_error() {
        let g = single_edge();
        assert!(matches!(g.degree("zz"), Err(Error::UnknownVertex(_))));
        assert!(matches!(g.arc("zz"), Err(Error::UnknownArc(_))));
    }

    #[test]
    fn betti_requires_connected() {
        let g = MwGraph::new([("a".into(), 1.0), ("b".into(), 1.0)], []).unwrap();
        assert!(matches!(g.betti(), Err(Error::Disconnected)));
        let tree = MwGraph::new(
            [("a".into(), 1.0), ("b".into(), 1.0), ("c".into(), 1.0)],
            [arc("e1", "a", "b", 1.0, 0.0), arc("e2", "b", "c", 1.0, 0.0)],
        )
        .unwrap();
        assert_eq!(tree.betti().unwrap(), 0);
    }

    #[test]
    fn bipartite_loop_and_cycles() {
        let c4 = MwGraph::new(
            (1..=4).map(|i| (format!("v{i}"), 1.0)),
            [
                arc("e1", "v1", "v2", 1.0, 0.0),
                arc("e2", "v2", "v3", 1.0, 0.0),
                arc("e3", "v3", "v4", 1.0, 0.0),
                arc("e4", "v4", "v1", 1.0, 0.0),
            ],
        )
        .unwrap();
        assert!(c4.is_bipartite().is_some());
        let lg = MwGraph::new([("v".into(), 1.0)], [arc("l", "v", "v", 1.0, 0.0)]).unwrap();
        assert!(lg.is_bipartite().is_none());
    }

    #[test]
    fn gauge_reduce_tree_is_zero() {
        let tree = MwGraph::new(
            [("a".into(), 1.0), ("b".into(), 1.0), ("c".into(), 1.0)],
            [arc("e1", "a", "b", 1.0, 1.3), arc("e2", "b", "c", 1.0, 2.1)],
        )
        .unwrap();
        let gr = tree.gauge_reduce().unwrap();
        for (_, &v) in &gr.reduced_alpha {
            assert!(circle_distance(v, 0.0) <= 1e-12);
        }
        assert!(tree.cycle_fluxes().unwrap().is_empty());
    }

    #[test]
    fn cycle_flux_spread_over_arcs() {
        let s = 1.234;
        let c3 = MwGraph::new(
            (1..=3).map(|i| (format!("v{i}"), 1.0)),
            [
                arc("e1", "v1", "v2", 1.0, s / 3.0),
                arc("e2", "v2", "v3", 1.0, s / 3.0),
                arc("e3", "v3", "v1", 1.0, s / 3.0),
            ],
        )
        .unwrap();
        let fluxes = c3.cycle_fluxes().unwrap();
        assert_eq!(fluxes.len(), 1);
        let flux = *fluxes.values().next().unwrap();
        assert!(circle_distance(flux, s) <= 1e-12);
    }

    #[test]
    fn minimal_neighborhood_tie_break_and_star() {
        let g = single_edge();
        assert_eq!(g.minimal_neighborhood(&["e1"]).unwrap(), vec!["v1"]);
        assert!(g.minimal_neighborhood(&[]).unwrap().is_empty());

        let star = MwGraph::new(
            [
                ("c".into(), 1.0),
                ("x".into(), 1.0),
                ("y".into(), 1.0),
                ("z".into(), 1.0),
            ],
            [
                arc("e1", "c", "x", 1.0, 0.0),
                arc("e2", "c", "y", 1.0, 0.0),
                arc("e3", "c", "z", 1.0, 0.0),
            ],
        )
        .unwrap();
        assert_eq!(
            star.minimal_neighborhood(&["e1", "e2", "e3"]).unwrap(),
            vec!["c"]
        );
        assert!(star.is_neighborhood(&["e1"], &["c"]).unwrap());
        assert!(!star.is_neighborhood(&["e1"], &["y"]).unwrap());
    }

    #[test]
    fn virtualize_vertices_rejects_full_set() {
        let g = single_edge();
        assert!(matches!(
            g.virtualize_vertices(&["v1", "v2"]),
            Err(Error::EmptyActiveSet)
        ));
        let dg = g.virtualize_vertices(&[]).unwrap();
        assert_eq!(dg.active_indices().len(), 2);
    }
}
