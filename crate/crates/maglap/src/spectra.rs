//! Magnetic Laplacian assembly and the spectral machinery on top of it:
//! eigenvalue lists, the "spectrally smaller" order, bracketing intervals from
//! arc/vertex virtualization, gap sets, the bipartite κ refinement, the δ
//! gap-existence criterion, and its trace-identity cross-check.
//!
//! The magnetic Laplacian `Δ_α = M_V⁻¹ d* M_E d` is self-adjoint only in the
//! weighted inner product, so the matrix actually stored is the symmetrized
//! form `D^{1/2} Δ_α D^{-1/2}` (D the vertex-weight diagonal), which is
//! plainly Hermitian and has the same spectrum.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::eig::HermitianMatrix;
use crate::error::{Error, Result};
use crate::graph::{DirichletGraph, MwGraph};
use crate::interval::{self, Interval};

/// Sorted eigenvalue list with the ambient interval `[0, 2ρ∞]` it lives in.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub ambient_max: f64,
}

/// Bracketing interval family `J_k = [λ_k(Δ⁻), λ_k(Δ⁺)]` with the padding
/// bookkeeping and the derived union/gap sets.
#[derive(Clone, Debug)]
pub struct Bracketing {
    /// λ(Δ⁻), one per active dimension of the original graph.
    pub lower: Vec<f64>,
    /// λ(Δ⁺) before padding.
    pub upper: Vec<f64>,
    /// J_k for k = 1..n; beyond `padded_from` the upper endpoint is padding.
    pub intervals: Vec<Interval>,
    /// First 0-based index whose upper endpoint is the padding value `2ρ∞`.
    pub padded_from: usize,
    /// Merged union of the J_k (κ-refined when `kappa_refined`).
    pub union: Vec<Interval>,
    /// Complement of the union in `[0, ambient_max]`.
    pub gaps: Vec<Interval>,
    /// Zero-length members of the union, reported separately.
    pub isolated_points: Vec<f64>,
    pub ambient_max: f64,
    /// Whether the κ refinement applies (bipartite, standard weights).
    pub kappa_ok: bool,
    pub kappa_refined: bool,
}

/// Rows of the twisted derivative `d_α` (one per arc) over the vertex basis,
/// plus the arc and vertex weight vectors.
pub struct TwistedDerivative {
    pub rows: Vec<Vec<Complex64>>,
    pub arc_weights: Vec<f64>,
    pub vertex_weights: Vec<f64>,
}

/// `(d_α f)_e = e^{iα_e/2} f(∂₊e) − e^{−iα_e/2} f(∂₋e)`; for a loop the two
/// terms combine additively into the single endpoint column.
pub fn assemble_twisted_derivative(g: &MwGraph) -> TwistedDerivative {
    let n = g.vertex_count();
    let mut rows = Vec::with_capacity(g.arc_count());
    for a in g.arcs() {
        let mut row = vec![Complex64::new(0.0, 0.0); n];
        let half = Complex64::new(0.0, a.alpha / 2.0).exp();
        row[a.head] += half;
        row[a.tail] -= half.conj();
        rows.push(row);
    }
    TwistedDerivative {
        rows,
        arc_weights: g.arcs().iter().map(|a| a.weight).collect(),
        vertex_weights: g.vertices().iter().map(|v| v.weight).collect(),
    }
}

/// Symmetrized magnetic Laplacian `M_V^{-1/2} d* M_E d M_V^{-1/2}`, assembled
/// arc by arc from the factorization.
pub fn assemble_dml(g: &MwGraph) -> HermitianMatrix {
    let n = g.vertex_count();
    let mut h = HermitianMatrix::zeros(n);
    for a in g.arcs() {
        let half = Complex64::new(0.0, a.alpha / 2.0).exp();
        if a.is_loop() {
            let d = half - half.conj(); // 2i sin(α/2)
            let v = a.weight * d.norm_sqr() / g.vertices()[a.tail].weight;
            h.add(a.tail, a.tail, Complex64::new(v, 0.0));
        } else {
            let wu = g.vertices()[a.tail].weight;
            let wv = g.vertices()[a.head].weight;
            h.add(a.tail, a.tail, Complex64::new(a.weight / wu, 0.0));
            h.add(a.head, a.head, Complex64::new(a.weight / wv, 0.0));
            // conj(row[tail]) * row[head] = conj(-e^{-iα/2}) e^{iα/2} = -e^{iα}
            let off = -(half * half) * (a.weight / (wu * wv).sqrt());
            h.add(a.tail, a.head, off);
            h.add(a.head, a.tail, off.conj());
        }
    }
    h
}

/// Principal compression of the magnetic Laplacian onto the active vertices.
pub fn assemble_dirichlet_dml(dg: &DirichletGraph) -> Result<HermitianMatrix> {
    let active = dg.active_indices();
    if active.is_empty() {
        return Err(Error::EmptyActiveSet);
    }
    Ok(assemble_dml(dg.base()).principal_submatrix(&active))
}

/// Sorted eigenvalues of a Hermitian matrix, tagged with an ambient interval.
pub fn eigenvalues(h: &HermitianMatrix, ambient_max: f64) -> Result<Spectrum> {
    Ok(Spectrum {
        values: h.eigenvalues()?,
        ambient_max,
    })
}

/// Spectrum of the magnetic Laplacian of `g` in its natural ambient interval.
pub fn spectrum_of(g: &MwGraph) -> Result<Spectrum> {
    eigenvalues(&assemble_dml(g), 2.0 * g.rho_infinity()?)
}

/// The "spectrally smaller" partial order: `λ_k(a) ≤ λ_k(b)` for all k, with
/// `b` padded by `ambient_max` beyond its length. Requires `len(a) ≥ len(b)`.
pub fn spectrally_leq(a: &[f64], b: &[f64], ambient_max: f64) -> Result<bool> {
    if a.len() < b.len() {
        return Err(Error::SpectralOrderArity(a.len(), b.len()));
    }
    Ok(a.iter().enumerate().all(|(k, &lo)| {
        let hi = b.get(k).copied().unwrap_or(ambient_max);
        lo <= hi + 1e-12
    }))
}

/// Bracketing intervals from virtualizing the arcs `e0` (lower operator) and
/// the vertices `v0` (upper operator). `v0` must be a neighborhood of `e0`.
pub fn bracketing(g: &MwGraph, e0: &[&str], v0: &[&str]) -> Result<Bracketing> {
    if !g.is_neighborhood(e0, v0)? {
        return Err(Error::NotNeighborhood);
    }
    let ambient_max = 2.0 * g.rho_infinity()?;
    let lower_g = g.virtualize_arcs(e0)?;
    let upper_g = g.virtualize_vertices(v0)?;
    let lower = assemble_dml(&lower_g).eigenvalues()?;
    let upper = assemble_dirichlet_dml(&upper_g)?.eigenvalues()?;

    let n = lower.len();
    let mut intervals = Vec::with_capacity(n);
    for k in 0..n {
        let lo = lower[k];
        let hi = upper.get(k).copied().unwrap_or(ambient_max);
        if lo > hi + 1e-10 {
            return Err(Error::SandwichViolation {
                index: k + 1,
                lower: lo,
                upper: hi,
            });
        }
        intervals.push(Interval::new(lo.min(hi), hi));
    }
    let union = interval::merge(&intervals);
    let gaps = interval::gaps(&union, ambient_max);
    let (_, isolated_points) = interval::split_points(&union);
    Ok(Bracketing {
        lower,
        upper: upper.clone(),
        intervals,
        padded_from: upper.len(),
        union,
        gaps,
        isolated_points,
        ambient_max,
        kappa_ok: g.has_standard_weights() && g.is_bipartite().is_some(),
        kappa_refined: false,
    })
}

/// Intersect the bracketing union with its mirror under `κ(λ) = 2 − λ`.
/// Valid only for bipartite graphs with standard weights, whose spectra are
/// symmetric under κ.
pub fn kappa_refine(b: &Bracketing) -> Result<Bracketing> {
    if !b.kappa_ok {
        return Err(Error::KappaNotApplicable);
    }
    let mirror = interval::kappa_mirror(&b.union);
    let union = interval::intersect(&b.union, &mirror);
    let gaps = interval::gaps(&union, b.ambient_max);
    let (_, isolated_points) = interval::split_points(&union);
    Ok(Bracketing {
        union,
        gaps,
        isolated_points,
        kappa_refined: true,
        ..b.clone()
    })
}

/// Maximal open subintervals of the ambient interval free of the spectrum.
pub fn gap_set_of_spectrum(s: &Spectrum) -> Vec<Interval> {
    let points: Vec<Interval> = s
        .values
        .iter()
        .map(|&v| Interval::new(v, v))
        .collect();
    interval::gaps(&interval::merge(&points), s.ambient_max)
}

/// Spectral gaps persisting for *every* magnetic potential: the potential is
/// gauge-reduced onto the spanning-tree chords (Betti many), the chord torus
/// is swept on a uniform `grid`-per-dimension lattice, and the complement of
/// the sampled union is returned. Gaps shorter than the sweep's resolution
/// bound are discarded, making the result an outer approximation that shrinks
/// as `grid` grows.
pub fn magnetic_gap_set(g: &MwGraph, grid: usize) -> Result<Vec<Interval>> {
    if grid < 2 {
        return Err(Error::InvalidInput("grid must be at least 2".into()));
    }
    let ambient_max = 2.0 * g.rho_infinity()?;
    let gauge = g.gauge_reduce()?;
    let chords: Vec<String> = gauge.support.iter().cloned().collect();
    let b = chords.len();
    if b > 4 {
        return Err(Error::CostGuard(format!(
            "magnetic sweep over a rank-{b} torus (Betti > 4) rejected"
        )));
    }
    if b == 0 {
        // Tree: every potential is cohomologous to zero.
        return Ok(gap_set_of_spectrum(&spectrum_of(g)?));
    }

    // Movement bound of any eigenvalue per radian of a single chord angle.
    let mut per_chord = Vec::with_capacity(b);
    for id in &chords {
        let a = g.arc(id)?;
        let c = if a.is_loop() {
            2.0 * a.weight / g.vertices()[a.tail].weight
        } else {
            let wu = g.vertices()[a.tail].weight;
            let wv = g.vertices()[a.head].weight;
            a.weight / (wu * wv).sqrt()
        };
        per_chord.push(c);
    }
    let step = std::f64::consts::TAU / grid as f64;
    let resolution = step * per_chord.iter().sum::<f64>();

    let total = grid.pow(b as u32);
    let spectra: Vec<Result<Vec<f64>>> = (0..total)
        .into_par_iter()
        .map(|mut idx| {
            let mut angles = std::collections::HashMap::new();
            for id in &chords {
                angles.insert(id.clone(), (idx % grid) as f64 * step);
                idx /= grid;
            }
            let fiber = g.with_alpha(|a| angles.get(&a.id).copied().unwrap_or(0.0));
            assemble_dml(&fiber).eigenvalues()
        })
        .collect();

    let mut points = Vec::new();
    for s in spectra {
        for v in s? {
            points.push(Interval::new(v, v));
        }
    }
    let union = interval::merge(&points);
    Ok(interval::gaps(&union, ambient_max)
        .into_iter()
        .filter(|iv| iv.length() >= resolution)
        .collect())
}

/// Weight regime a δ computation is phrased in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightVariant {
    General,
    Standard,
    Combinatorial,
}

fn check_delta_args(g: &MwGraph, v0: &str, b_arcs: &[&str]) -> Result<usize> {
    let vi = g.vertex_index(v0)?;
    for id in b_arcs {
        let a = g.arc(id)?;
        if a.is_loop() {
            return Err(Error::LoopInArcSet(id.to_string()));
        }
        if a.tail != vi && a.head != vi {
            return Err(Error::ArcNotIncident {
                arc: id.to_string(),
                vertex: v0.to_string(),
            });
        }
    }
    Ok(vi)
}

/// δ gap-existence criterion at vertex `v0` with bridge set `B ⊂ E_{v0}`:
/// a positive δ certifies a spectral gap of the periodic operator above the
/// first bracketing band. The lower operator is `g` with the arcs of `B`
/// removed.
pub fn delta_criterion(
    g: &MwGraph,
    v0: &str,
    b_arcs: &[&str],
    variant: WeightVariant,
) -> Result<f64> {
    let vi = check_delta_args(g, v0, b_arcs)?;
    match variant {
        WeightVariant::Standard if !g.has_standard_weights() => {
            return Err(Error::InvalidInput(
                "standard δ variant requires standard weights".into(),
            ));
        }
        WeightVariant::Combinatorial if !g.has_combinatorial_weights() => {
            return Err(Error::InvalidInput(
                "combinatorial δ variant requires combinatorial weights".into(),
            ));
        }
        _ => {}
    }
    let lower = g.virtualize_arcs(b_arcs)?;
    let lambda1 = assemble_dml(&lower)
        .eigenvalues()?
        .first()
        .copied()
        .ok_or(Error::EmptyGraph)?;

    let other_end = |id: &str| -> Result<usize> {
        let a = g.arc(id)?;
        Ok(if a.tail == vi { a.head } else { a.tail })
    };
    let delta = match variant {
        WeightVariant::General => {
            let mut d = g.relative_weight_by_index(vi);
            let mut mb = 0.0;
            for id in b_arcs {
                let a = g.arc(id)?;
                d -= a.weight / g.vertices()[other_end(id)?].weight;
                mb += a.weight;
            }
            d - mb / g.vertices()[vi].weight - lambda1
        }
        WeightVariant::Standard => {
            let mut d = 1.0;
            for id in b_arcs {
                d -= 1.0 / g.degree_by_index(other_end(id)?) as f64;
            }
            d - b_arcs.len() as f64 / g.degree_by_index(vi) as f64 - lambda1
        }
        WeightVariant::Combinatorial => {
            g.degree_by_index(vi) as f64 - 2.0 * b_arcs.len() as f64 - lambda1
        }
    };
    Ok(delta)
}

/// Cross-check of the δ closed form against the trace identity
/// `Tr Δ⁻ − Tr Δ⁺ − λ₁(Δ⁻) = δ`. Returns the discrepancy; errors if it
/// exceeds 1e-9.
pub fn trace_identity_check(g: &MwGraph, v0: &str, b_arcs: &[&str]) -> Result<f64> {
    check_delta_args(g, v0, b_arcs)?;
    let delta = delta_criterion(g, v0, b_arcs, WeightVariant::General)?;

    let lower = g.virtualize_arcs(b_arcs)?;
    let lower_eigs = assemble_dml(&lower).eigenvalues()?;
    let tr_lower: f64 = lower_eigs.iter().sum();
    let lambda1 = lower_eigs[0];
    let upper = g.virtualize_vertices(&[v0])?;
    let tr_upper: f64 = assemble_dirichlet_dml(&upper)?.eigenvalues()?.iter().sum();

    let discrepancy = (tr_lower - tr_upper - lambda1 - delta).abs();
    if discrepancy > 1e-9 {
        return Err(Error::TraceIdentity(discrepancy));
    }
    Ok(discrepancy)
}
