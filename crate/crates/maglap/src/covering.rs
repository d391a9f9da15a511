//! Z^d-periodic covering graphs, represented implicitly by a finite quotient
//! graph plus an integer index vector per arc (how the arc shifts between
//! copies of the fundamental domain).
//!
//! The covering operator is never materialized: its spectrum is the union of
//! the spectra of the Floquet fiber operators, which are quotient Laplacians
//! with potential `β + θ·ind` for characters `θ ∈ [0, 2π)^d` (convention
//! `χ_θ(γ) = e^{iθ·γ}`). Band structures sample the character torus on a
//! uniform lattice; a rank-1 truncation oracle provides an independent
//! brute-force check.

use rayon::prelude::*;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{ArcInput, MwGraph};
use crate::interval::{self, Interval};
use crate::spectra::{self, Bracketing, Spectrum};

/// Cost-guard cap (in units of `grid points × n³`); overridable through the
/// `MAGLAP_COST_CAP` environment variable.
pub fn cost_cap() -> f64 {
    std::env::var("MAGLAP_COST_CAP")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(2e10)
}

fn guard(points: f64, n: usize, what: &str) -> Result<()> {
    let cost = points * (n as f64).powi(3);
    let cap = cost_cap();
    if cost > cap {
        return Err(Error::CostGuard(format!(
            "{what}: estimated cost {cost:.3e} exceeds cap {cap:.3e}"
        )));
    }
    Ok(())
}

/// A Z^d-periodic graph: quotient with the induced periodic potential `β`
/// (stored as the quotient's `alpha`) plus per-arc index vectors.
#[derive(Clone, Debug)]
pub struct PeriodicGraph {
    pub quotient: MwGraph,
    pub index: BTreeMap<String, Vec<i64>>,
    pub rank: usize,
    /// Model metadata: arcs carrying the constant-flux potential, with the
    /// integer multiple of `s` each receives. Empty when the graph was not
    /// built by a model constructor.
    pub flux_arcs: Vec<(String, i64)>,
}

impl PeriodicGraph {
    pub fn new(
        quotient: MwGraph,
        index: BTreeMap<String, Vec<i64>>,
        rank: usize,
    ) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidInput("group rank must be at least 1".into()));
        }
        if !quotient.is_connected() {
            return Err(Error::Disconnected);
        }
        let mut vectors = Vec::new();
        for a in quotient.arcs() {
            let v = index
                .get(&a.id)
                .ok_or_else(|| Error::InvalidInput(format!("arc `{}` has no index", a.id)))?;
            if v.len() != rank {
                return Err(Error::InvalidInput(format!(
                    "index of arc `{}` has length {}, expected {}",
                    a.id,
                    v.len(),
                    rank
                )));
            }
            vectors.push(v.clone());
        }
        if integer_rank(&vectors, rank) != rank {
            return Err(Error::DegenerateIndexLattice(rank));
        }
        Ok(PeriodicGraph {
            quotient,
            index,
            rank,
            flux_arcs: Vec::new(),
        })
    }

    /// Arc classes with nonzero index — the connecting arcs of the covering.
    pub fn connecting_arc_classes(&self) -> Vec<String> {
        self.quotient
            .arcs()
            .iter()
            .filter(|a| self.index[&a.id].iter().any(|&z| z != 0))
            .map(|a| a.id.clone())
            .collect()
    }

    /// Quotient graph with potential `α_e = (β_e + θ·ind(e)) mod 2π`.
    pub fn fiber_potential(&self, theta: &[f64]) -> Result<MwGraph> {
        if theta.len() != self.rank {
            return Err(Error::InvalidInput(format!(
                "character has {} components, expected {}",
                theta.len(),
                self.rank
            )));
        }
        Ok(self.quotient.with_alpha(|a| {
            let dot: f64 = self.index[&a.id]
                .iter()
                .zip(theta)
                .map(|(&z, &t)| z as f64 * t)
                .sum();
            a.alpha + dot
        }))
    }

    /// Spectrum of the fiber operator at character `θ`.
    pub fn fiber_spectrum(&self, theta: &[f64]) -> Result<Spectrum> {
        spectra::eigenvalues(
            &spectra::assemble_dml(&self.fiber_potential(theta)?),
            2.0 * self.quotient.rho_infinity()?,
        )
    }

    /// Coarse Lipschitz bound on band functions: eigenvalue movement per unit
    /// of θ in any single coordinate.
    pub fn lipschitz_bound(&self) -> Result<f64> {
        let rho = self.quotient.rho_infinity()?;
        let max_ind = self
            .index
            .values()
            .flat_map(|v| v.iter().map(|z| z.unsigned_abs()))
            .max()
            .unwrap_or(0) as f64;
        let max_me = self
            .quotient
            .arcs()
            .iter()
            .map(|a| a.weight)
            .fold(0.0, f64::max);
        let min_mv = self
            .quotient
            .vertices()
            .iter()
            .map(|v| v.weight)
            .fold(f64::INFINITY, f64::min);
        Ok(2.0 * rho * max_ind * (max_me / min_mv))
    }

    /// Constant-flux potential family: multiplies the model's designated flux
    /// arcs by `s` (each arc carries an integer multiple), zero elsewhere.
    pub fn with_constant_flux(&self, s: f64) -> Result<PeriodicGraph> {
        if self.flux_arcs.is_empty() {
            return Err(Error::InvalidModel(
                "graph carries no constant-flux metadata (not built by a model constructor)"
                    .into(),
            ));
        }
        let mult: BTreeMap<&str, i64> = self
            .flux_arcs
            .iter()
            .map(|(id, k)| (id.as_str(), *k))
            .collect();
        let mut out = self.clone();
        out.quotient = self
            .quotient
            .with_alpha(|a| mult.get(a.id.as_str()).map_or(0.0, |&k| k as f64 * s));
        Ok(out)
    }

    /// Uniform `grid`-per-dimension sampling of the character torus.
    pub fn band_structure(&self, grid: usize) -> Result<BandStructure> {
        if grid < 2 {
            return Err(Error::InvalidInput("grid must be at least 2".into()));
        }
        let n = self.quotient.vertex_count();
        let total = (grid as f64).powi(self.rank as i32);
        guard(total, n, "band structure")?;
        let total = grid.pow(self.rank as u32);
        let step = std::f64::consts::TAU / grid as f64;

        let thetas: Vec<Vec<f64>> = (0..total)
            .map(|mut idx| {
                (0..self.rank)
                    .map(|_| {
                        let t = (idx % grid) as f64 * step;
                        idx /= grid;
                        t
                    })
                    .collect()
            })
            .collect();
        let spectra_by_point: Vec<Vec<f64>> = thetas
            .par_iter()
            .map(|theta| self.fiber_spectrum(theta).map(|s| s.values))
            .collect::<Result<_>>()?;

        let ambient_max = 2.0 * self.quotient.rho_infinity()?;
        let mut bands = vec![Vec::with_capacity(total); n];
        for point in &spectra_by_point {
            for (k, &v) in point.iter().enumerate() {
                bands[k].push(v);
            }
        }
        let band_intervals: Vec<Interval> = bands
            .iter()
            .map(|b| {
                let lo = b.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = b.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                Interval::new(lo, hi)
            })
            .collect();
        let union = interval::merge(&band_intervals);
        let gaps = interval::gaps(&union, ambient_max);
        Ok(BandStructure {
            theta_grid: thetas,
            bands,
            band_intervals,
            union,
            gaps,
            ambient_max,
        })
    }

    /// Bracketing of the covering spectrum: virtualize the connecting arc
    /// classes (lower operator) and a neighborhood `V0` of them (upper
    /// operator, default: greedy minimal neighborhood). The result never
    /// consults a character, so it is θ-independent by construction.
    pub fn covering_bracketing(&self, v0: Option<&[&str]>) -> Result<Bracketing> {
        let e0 = self.connecting_arc_classes();
        let e0_refs: Vec<&str> = e0.iter().map(String::as_str).collect();
        let owned;
        let v0_refs: Vec<&str> = match v0 {
            Some(v) => v.to_vec(),
            None => {
                owned = self.quotient.minimal_neighborhood(&e0_refs)?;
                owned.iter().map(String::as_str).collect()
            }
        };
        spectra::bracketing(&self.quotient, &e0_refs, &v0_refs)
    }

    /// Band/gap rows over a uniform flux grid of `[0, 2π)`, using the model's
    /// constant-flux family. Rows are computed independently (in parallel)
    /// and reported in grid order.
    pub fn flux_sweep(&self, s_grid: usize, theta_grid: usize) -> Result<FluxDiagram> {
        if s_grid < 2 || theta_grid < 2 {
            return Err(Error::InvalidInput("grids must be at least 2".into()));
        }
        let n = self.quotient.vertex_count();
        let points = s_grid as f64 * (theta_grid as f64).powi(self.rank as i32);
        guard(points, n, "flux sweep")?;
        let s_values: Vec<f64> = (0..s_grid)
            .map(|i| i as f64 * std::f64::consts::TAU / s_grid as f64)
            .collect();
        let rows: Vec<FluxRow> = s_values
            .par_iter()
            .map(|&s| {
                let bs = self.with_constant_flux(s)?.band_structure(theta_grid)?;
                Ok(FluxRow {
                    band_intervals: bs.band_intervals,
                    gaps: bs.gaps,
                })
            })
            .collect::<Result<_>>()?;
        Ok(FluxDiagram {
            s_values,
            rows,
            ambient_max: 2.0 * self.quotient.rho_infinity()?,
            n_bands: n,
        })
    }

    /// Finite truncation of the rank-1 covering graph: layers
    /// `j = -radius ..= radius`, vertex ids `"{v}@{j}"`, an arc class of index
    /// `z` connecting layer `j` to layer `j+z`. Arcs whose far layer is
    /// missing are dropped (free boundary).
    pub fn unfold_truncation(&self, radius: usize) -> Result<MwGraph> {
        if self.rank != 1 {
            return Err(Error::RankUnsupported(self.rank));
        }
        let r = radius as i64;
        let mut vertices = Vec::new();
        for j in -r..=r {
            for v in self.quotient.vertices() {
                vertices.push((format!("{}@{}", v.id, j), v.weight));
            }
        }
        let mut arcs = Vec::new();
        for j in -r..=r {
            for a in self.quotient.arcs() {
                let z = self.index[&a.id][0];
                let jt = j + z;
                if jt < -r || jt > r {
                    continue;
                }
                arcs.push(ArcInput {
                    id: format!("{}@{}", a.id, j),
                    tail: format!("{}@{}", self.quotient.vertices()[a.tail].id, j),
                    head: format!("{}@{}", self.quotient.vertices()[a.head].id, jt),
                    weight: a.weight,
                    alpha: a.alpha,
                });
            }
        }
        MwGraph::new(vertices, arcs)
    }
}

/// Sorted fiber spectra over a θ lattice together with the per-band extent
/// intervals and the derived union/gap sets.
#[derive(Clone, Debug)]
pub struct BandStructure {
    pub theta_grid: Vec<Vec<f64>>,
    /// `bands[k][i]` = λ_{k+1} at grid point `i`.
    pub bands: Vec<Vec<f64>>,
    pub band_intervals: Vec<Interval>,
    pub union: Vec<Interval>,
    pub gaps: Vec<Interval>,
    pub ambient_max: f64,
}

/// One band/gap row per sampled flux value — the columns of a band/gap
/// diagram.
#[derive(Clone, Debug)]
pub struct FluxDiagram {
    pub s_values: Vec<f64>,
    pub rows: Vec<FluxRow>,
    pub ambient_max: f64,
    pub n_bands: usize,
}

#[derive(Clone, Debug)]
pub struct FluxRow {
    pub band_intervals: Vec<Interval>,
    pub gaps: Vec<Interval>,
}

/// Rank over Q of a set of integer vectors, by fraction-free elimination.
fn integer_rank(vectors: &[Vec<i64>], dim: usize) -> usize {
    let mut rows: Vec<Vec<i128>> = vectors
        .iter()
        .filter(|v| v.iter().any(|&z| z != 0))
        .map(|v| v.iter().map(|&z| z as i128).collect())
        .collect();
    let mut rank = 0;
    for col in 0..dim {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][col];
        for r in (rank + 1)..rows.len() {
            if rows[r][col] != 0 {
                let factor = rows[r][col];
                for c in 0..dim {
                    rows[r][c] = rows[r][c] * pivot - rows[rank][c] * factor;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}
