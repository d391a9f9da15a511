//! Built-in model graphs: the polyacetylene chain, armchair and zigzag
//! nanoribbons, finite cycles, and the plain Z lattice, each with standard or
//! combinatorial weights and a one-parameter constant-flux potential family
//! `s ↦ β(s)` that puts flux `s` through every independent cycle of the
//! covering graph.
//!
//! Orientations are fixed by construction order; all reported spectra are
//! gauge invariant, so only cycle fluxes matter.

use std::collections::BTreeMap;

use crate::covering::PeriodicGraph;
use crate::error::{Error, Result};
use crate::graph::{ArcInput, MwGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weights {
    /// `m(v) = deg(v)`, `m_e = 1`; spectrum in `[0, 2]`.
    Standard,
    /// All weights 1; spectrum in `[0, 2·max deg]`.
    Combinatorial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelKind {
    /// Polyacetylene chain quotient: carbons v1, v2 with a double bond
    /// (parallel arcs), a period-closing bond, and hydrogen pendants h1, h2.
    Polyacetylene,
    /// Armchair nanoribbon of width N: a 2N-ring plus the period-closing
    /// chord. N = 3 is the hexagon-plus-chord poly-para-phenylene quotient.
    Agnr(usize),
    /// Zigzag nanoribbon of width N: N zigzag chains joined by rungs.
    Zgnr(usize),
    /// Finite n-cycle with flux s on one arc (not periodic).
    Cycle(usize),
    /// The integer lattice Z: one vertex with an index-1 loop.
    ZLattice,
}

#[derive(Clone, Debug)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub weights: Weights,
    /// Constant flux through every independent cycle, in radians.
    pub flux: f64,
}

/// Built model: the finite cycle stays a plain graph, everything else is
/// periodic.
#[derive(Clone, Debug)]
pub enum Model {
    Finite(MwGraph),
    Periodic(PeriodicGraph),
}

impl Model {
    pub fn quotient(&self) -> &MwGraph {
        match self {
            Model::Finite(g) => g,
            Model::Periodic(p) => &p.quotient,
        }
    }

    pub fn periodic(&self) -> Result<&PeriodicGraph> {
        match self {
            Model::Periodic(p) => Ok(p),
            Model::Finite(_) => Err(Error::InvalidModel(
                "operation requires a periodic model".into(),
            )),
        }
    }
}

struct Topology {
    /// (arc id, tail, head, index vector)
    arcs: Vec<(String, String, String, Vec<i64>)>,
    vertex_order: Vec<String>,
    rank: usize,
    /// Designated constant-flux arcs with their integer multiple of s.
    flux_arcs: Vec<(String, i64)>,
}

fn vertex_weights(t: &Topology, weights: Weights) -> Vec<(String, f64)> {
    t.vertex_order
        .iter()
        .map(|v| {
            let w = match weights {
                Weights::Combinatorial => 1.0,
                Weights::Standard => t
                    .arcs
                    .iter()
                    .map(|(_, tail, head, _)| {
                        (tail == v) as usize as f64 + (head == v) as usize as f64
                    })
                    .sum(),
            };
            (v.clone(), w)
        })
        .collect()
}

fn assemble(t: Topology, weights: Weights, flux: f64) -> Result<PeriodicGraph> {
    let mult: BTreeMap<&str, i64> = t.flux_arcs.iter().map(|(id, k)| (id.as_str(), *k)).collect();
    let vertices = vertex_weights(&t, weights);
    let arcs: Vec<ArcInput> = t
        .arcs
        .iter()
        .map(|(id, tail, head, _)| ArcInput {
            id: id.clone(),
            tail: tail.clone(),
            head: head.clone(),
            weight: 1.0,
            alpha: mult.get(id.as_str()).map_or(0.0, |&k| k as f64 * flux),
        })
        .collect();
    let index: BTreeMap<String, Vec<i64>> = t
        .arcs
        .iter()
        .map(|(id, _, _, ind)| (id.clone(), ind.clone()))
        .collect();
    let g = MwGraph::new(vertices, arcs)?;
    let mut p = PeriodicGraph::new(g, index, t.rank)?;
    p.flux_arcs = t.flux_arcs;
    Ok(p)
}

fn polyacetylene_topology() -> Topology {
    let s = |x: &str| x.to_string();
    Topology {
        arcs: vec![
            (s("e1"), s("v2"), s("v1"), vec![1]),
            (s("e2"), s("v1"), s("v2"), vec![0]),
            (s("e3"), s("v1"), s("v2"), vec![0]),
            (s("p1"), s("v1"), s("h1"), vec![0]),
            (s("p2"), s("v2"), s("h2"), vec![0]),
        ],
        vertex_order: vec![s("v1"), s("v2"), s("h1"), s("h2")],
        rank: 1,
        flux_arcs: vec![(s("e2"), 1)],
    }
}

fn agnr_topology(n: usize) -> Topology {
    let m = 2 * n;
    let mut arcs = Vec::new();
    for i in 1..=m {
        let j = if i == m { 1 } else { i + 1 };
        arcs.push((format!("r{i}"), format!("v{i}"), format!("v{j}"), vec![0]));
    }
    arcs.push(("e1".to_string(), "v1".to_string(), format!("v{m}"), vec![1]));
    Topology {
        arcs,
        vertex_order: (1..=m).map(|i| format!("v{i}")).collect(),
        rank: 1,
        // One ring arc per hexagon carries the flux; the bridging chord stays
        // at zero.
        flux_arcs: vec![("r1".to_string(), 1)],
    }
}

fn zgnr_topology(n: usize) -> Topology {
    let mut arcs = Vec::new();
    let mut flux_arcs = Vec::new();
    for j in 1..=n {
        arcs.push((format!("z{j}0"), format!("a{j}"), format!("b{j}"), vec![0]));
        arcs.push((format!("z{j}1"), format!("a{j}"), format!("b{j}"), vec![1]));
        // Hexagon faces between adjacent chains pick up the difference of the
        // chain multipliers, so cumulative multipliers give every face the
        // same flux s.
        flux_arcs.push((format!("z{j}1"), (j - 1) as i64));
        if j < n {
            arcs.push((format!("c{j}"), format!("b{j}"), format!("a{}", j + 1), vec![0]));
        }
    }
    let mut vertex_order = Vec::new();
    for j in 1..=n {
        vertex_order.push(format!("a{j}"));
        vertex_order.push(format!("b{j}"));
    }
    Topology {
        arcs,
        vertex_order,
        rank: 1,
        flux_arcs,
    }
}

fn z_lattice_topology() -> Topology {
    Topology {
        arcs: vec![("l".to_string(), "v".to_string(), "v".to_string(), vec![1])],
        vertex_order: vec!["v".to_string()],
        rank: 1,
        flux_arcs: vec![("l".to_string(), 1)],
    }
}

fn cycle_graph(n: usize, weights: Weights, flux: f64) -> Result<MwGraph> {
    if n < 3 {
        return Err(Error::InvalidModel(format!(
            "cycle needs at least 3 vertices, got {n}"
        )));
    }
    let w = match weights {
        Weights::Standard => 2.0,
        Weights::Combinatorial => 1.0,
    };
    let vertices = (1..=n).map(|i| (format!("v{i}"), w));
    let arcs = (1..=n).map(|i| {
        let j = if i == n { 1 } else { i + 1 };
        ArcInput {
            id: format!("e{i}"),
            tail: format!("v{i}"),
            head: format!("v{j}"),
            weight: 1.0,
            alpha: if i == 1 { flux } else { 0.0 },
        }
    });
    MwGraph::new(vertices, arcs)
}

pub fn build(spec: &ModelSpec) -> Result<Model> {
    match spec.kind {
        ModelKind::Polyacetylene => Ok(Model::Periodic(assemble(
            polyacetylene_topology(),
            spec.weights,
            spec.flux,
        )?)),
        ModelKind::Agnr(n) => {
            if n < 1 {
                return Err(Error::InvalidModel("armchair width must be >= 1".into()));
            }
            Ok(Model::Periodic(assemble(
                agnr_topology(n),
                spec.weights,
                spec.flux,
            )?))
        }
        ModelKind::Zgnr(n) => {
            if n < 1 {
                return Err(Error::InvalidModel("zigzag width must be >= 1".into()));
            }
            Ok(Model::Periodic(assemble(
                zgnr_topology(n),
                spec.weights,
                spec.flux,
            )?))
        }
        ModelKind::Cycle(n) => Ok(Model::Finite(cycle_graph(n, spec.weights, spec.flux)?)),
        ModelKind::ZLattice => Ok(Model::Periodic(assemble(
            z_lattice_topology(),
            spec.weights,
            spec.flux,
        )?)),
    }
}

/// Re-derive the constant-flux potential on an already-built periodic model.
pub fn constant_flux_potential(p: &PeriodicGraph, s: f64) -> Result<PeriodicGraph> {
    p.with_constant_flux(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::circle_distance;

    fn spec(kind: ModelKind, weights: Weights, flux: f64) -> ModelSpec {
        ModelSpec { kind, weights, flux }
    }

    #[test]
    fn polyacetylene_counts_and_weights() {
        let m = build(&spec(ModelKind::Polyacetylene, Weights::Standard, 0.0)).unwrap();
        let g = m.quotient();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.arc_count(), 5);
        assert_eq!(g.betti().unwrap(), 2);
        assert_eq!(g.degree("v1").unwrap(), 4);
        assert!((g.vertex("v1").unwrap().weight - 4.0).abs() < 1e-15);
        assert!((g.vertex("h1").unwrap().weight - 1.0).abs() < 1e-15);
        assert!(g.is_bipartite().is_some());
        assert!((g.rho_infinity().unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn polyacetylene_flux_placement() {
        let s = 1.3;
        let m = build(&spec(ModelKind::Polyacetylene, Weights::Standard, s)).unwrap();
        let g = m.quotient();
        assert!(circle_distance(g.arc("e2").unwrap().alpha, s) < 1e-12);
        for id in ["e1", "e3", "p1", "p2"] {
            assert!(circle_distance(g.arc(id).unwrap().alpha, 0.0) < 1e-12);
        }
        // Digon cycle flux equals s.
        let fluxes = g.cycle_fluxes().unwrap();
        assert!(fluxes.values().any(|&f| circle_distance(f, s) < 1e-12));
    }

    #[test]
    fn agnr3_counts() {
        let m = build(&spec(ModelKind::Agnr(3), Weights::Combinatorial, 0.0)).unwrap();
        let g = m.quotient();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.arc_count(), 7);
        assert_eq!(g.betti().unwrap(), 2);
        assert_eq!(g.degree("v1").unwrap(), 3);
        assert!(g.is_bipartite().is_some());
        let p = m.periodic().unwrap();
        assert_eq!(p.connecting_arc_classes(), vec!["e1".to_string()]);
    }

    #[test]
    fn zgnr_counts_and_bipartite() {
        for n in 1..=6 {
            let m = build(&spec(ModelKind::Zgnr(n), Weights::Standard, 0.0)).unwrap();
            let g = m.quotient();
            assert_eq!(g.vertex_count(), 2 * n);
            assert_eq!(g.arc_count(), 3 * n - 1);
            assert!(g.is_bipartite().is_some(), "zgnr({n}) not bipartite");
            assert!(g.is_connected());
        }
    }

    #[test]
    fn agnr_bipartite_family() {
        for n in 1..=6 {
            let m = build(&spec(ModelKind::Agnr(n), Weights::Standard, 0.0)).unwrap();
            assert!(m.quotient().is_bipartite().is_some(), "agnr({n}) not bipartite");
        }
    }

    #[test]
    fn truncation_cycle_fluxes_are_constant() {
        // Every face of the unfolded graph must carry flux s (or 0 for
        // flux-free models); fundamental cycles of the truncation are checked
        // to carry an integer multiple of s, with at least one cycle seeing s
        // itself.
        let s = 0.77;
        for kind in [ModelKind::Polyacetylene, ModelKind::Agnr(3), ModelKind::Zgnr(3)] {
            let m = build(&spec(kind.clone(), Weights::Standard, s)).unwrap();
            let t = m.periodic().unwrap().unfold_truncation(2).unwrap();
            let fluxes = t.cycle_fluxes().unwrap();
            let mut saw_s = false;
            for (id, &f) in &fluxes {
                let mut ok = false;
                for k in -6i32..=6 {
                    if circle_distance(f, k as f64 * s) < 1e-9 {
                        if k.abs() == 1 {
                            saw_s = true;
                        }
                        ok = true;
                        break;
                    }
                }
                assert!(ok, "{kind:?}: cycle {id} flux {f} not an integer multiple of s");
            }
            assert!(saw_s, "{kind:?}: no cycle carries flux s");
        }
    }

    #[test]
    fn cycle_model_closed_form() {
        let n = 6;
        let s = std::f64::consts::FRAC_PI_3;
        let m = build(&spec(ModelKind::Cycle(n), Weights::Combinatorial, s)).unwrap();
        let spec_vals = crate::spectra::spectrum_of(m.quotient()).unwrap().values;
        let mut expected: Vec<f64> = (0..n)
            .map(|k| 2.0 - 2.0 * ((std::f64::consts::TAU * k as f64 + s) / n as f64).cos())
            .collect();
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in spec_vals.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn flux_arc_choice_is_spectrally_irrelevant() {
        // Moving the designated flux arc around the digon changes the
        // potential only within its cohomology class.
        let s = 2.1;
        let m = build(&spec(ModelKind::Polyacetylene, Weights::Standard, s)).unwrap();
        let g = m.quotient();
        // Gauge shift φ(v2) = −s: moves s off e2 onto the other arcs while
        // keeping every cycle flux.
        let alt = g.with_alpha(|a| match a.id.as_str() {
            "e2" => 0.0,
            "e3" => -s,
            "e1" => s,
            "p2" => s,
            _ => a.alpha,
        });
        let s1 = crate::spectra::spectrum_of(g).unwrap().values;
        let s2 = crate::spectra::spectrum_of(&alt).unwrap().values;
        for (a, b) in s1.iter().zip(&s2) {
            assert!((a - b).abs() < 1e-9);
        }
    }
}
