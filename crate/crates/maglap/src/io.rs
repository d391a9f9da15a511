//! Serialization: the JSON graph format (finite and periodic, with the
//! standard/combinatorial weight shorthand), Spectrum and Bracketing JSON,
//! and CSV emitters for band structures and flux diagrams.
//!
//! All reals are emitted with 12 significant digits; JSON numbers are rounded
//! to that precision before printing so they parse back bit-for-bit.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::covering::{BandStructure, FluxDiagram, PeriodicGraph};
use crate::error::{Error, Result};
use crate::graph::{ArcInput, MwGraph};
use crate::models::Model;
use crate::spectra::{Bracketing, Spectrum};

/// Round to 12 significant digits (the artifact-wide output precision).
pub fn round12(x: f64) -> f64 {
    format!("{x:.11e}").parse().expect("rounded float reparses")
}

/// 12-significant-digit decimal string, used for CSV cells.
pub fn fmt12(x: f64) -> String {
    format!("{x:.11e}")
}

#[derive(Serialize, Deserialize)]
struct RawVertex {
    id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    weight: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawArc {
    id: String,
    tail: String,
    head: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    weight: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    index: Option<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    vertices: Vec<RawVertex>,
    arcs: Vec<RawArc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    weights: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    group_rank: Option<usize>,
}

/// Parse the JSON graph format. `index`/`group_rank` present ⇒ periodic; a
/// `"weights": "standard" | "combinatorial"` shorthand replaces explicit
/// weight numbers.
pub fn parse_graph_json(text: &str) -> Result<Model> {
    let raw: RawGraph = serde_json::from_str(text)?;
    let shorthand = match raw.weights.as_deref() {
        None => None,
        Some("standard") => Some(true),
        Some("combinatorial") => Some(false),
        Some(other) => {
            return Err(Error::Format(format!(
                "unknown weights shorthand `{other}` (expected standard|combinatorial)"
            )))
        }
    };

    let mut degree: BTreeMap<&str, usize> = BTreeMap::new();
    for a in &raw.arcs {
        *degree.entry(a.tail.as_str()).or_insert(0) += 1;
        *degree.entry(a.head.as_str()).or_insert(0) += 1;
    }

    let mut vertices = Vec::new();
    for v in &raw.vertices {
        let w = match (shorthand, v.weight) {
            (Some(true), _) => *degree.get(v.id.as_str()).unwrap_or(&0) as f64,
            (Some(false), _) => 1.0,
            (None, Some(w)) => w,
            (None, None) => {
                return Err(Error::Format(format!(
                    "vertex `{}` has no weight and no weights shorthand is set",
                    v.id
                )))
            }
        };
        vertices.push((v.id.clone(), w));
    }
    let mut arcs = Vec::new();
    for a in &raw.arcs {
        let w = match (shorthand, a.weight) {
            (Some(_), _) => 1.0,
            (None, Some(w)) => w,
            (None, None) => {
                return Err(Error::Format(format!(
                    "arc `{}` has no weight and no weights shorthand is set",
                    a.id
                )))
            }
        };
        arcs.push(ArcInput {
            id: a.id.clone(),
            tail: a.tail.clone(),
            head: a.head.clone(),
            weight: w,
            alpha: a.alpha.unwrap_or(0.0),
        });
    }
    let g = MwGraph::new(vertices, arcs)?;

    let any_index = raw.arcs.iter().any(|a| a.index.is_some());
    if raw.group_rank.is_none() && !any_index {
        return Ok(Model::Finite(g));
    }
    let rank = match raw.group_rank {
        Some(r) => r,
        None => raw
            .arcs
            .iter()
            .filter_map(|a| a.index.as_ref().map(Vec::len))
            .max()
            .unwrap_or(1),
    };
    let index: BTreeMap<String, Vec<i64>> = raw
        .arcs
        .iter()
        .map(|a| {
            (
                a.id.clone(),
                a.index.clone().unwrap_or_else(|| vec![0; rank]),
            )
        })
        .collect();
    Ok(Model::Periodic(PeriodicGraph::new(g, index, rank)?))
}

/// Serialize a graph back to the JSON format with explicit weights.
pub fn graph_to_json(model: &Model) -> String {
    let (g, periodic) = match model {
        Model::Finite(g) => (g, None),
        Model::Periodic(p) => (&p.quotient, Some(p)),
    };
    let raw = RawGraph {
        vertices: g
            .vertices()
            .iter()
            .map(|v| RawVertex {
                id: v.id.clone(),
                weight: Some(round12(v.weight)),
            })
            .collect(),
        arcs: g
            .arcs()
            .iter()
            .map(|a| RawArc {
                id: a.id.clone(),
                tail: g.vertices()[a.tail].id.clone(),
                head: g.vertices()[a.head].id.clone(),
                weight: Some(round12(a.weight)),
                alpha: Some(round12(a.alpha)),
                index: periodic.map(|p| p.index[&a.id].clone()),
            })
            .collect(),
        weights: None,
        group_rank: periodic.map(|p| p.rank),
    };
    serde_json::to_string_pretty(&raw).expect("graph serializes")
}

fn num(x: f64) -> serde_json::Value {
    serde_json::Number::from_f64(round12(x))
        .map(serde_json::Value::Number)
        .unwrap_or(serde_json::Value::Null)
}

fn interval_list(ivs: &[crate::interval::Interval]) -> serde_json::Value {
    serde_json::Value::Array(
        ivs.iter()
            .map(|iv| serde_json::Value::Array(vec![num(iv.lo), num(iv.hi)]))
            .collect(),
    )
}

pub fn spectrum_to_json(s: &Spectrum) -> String {
    let v = serde_json::json!({
        "values": s.values.iter().map(|&x| num(x)).collect::<Vec<_>>(),
        "ambient": [num(0.0), num(s.ambient_max)],
    });
    serde_json::to_string_pretty(&v).expect("spectrum serializes")
}

pub fn bracketing_to_json(b: &Bracketing) -> String {
    let v = serde_json::json!({
        "intervals": interval_list(&b.intervals),
        "union": interval_list(&b.union),
        "gaps": interval_list(&b.gaps),
        "isolated_points": b.isolated_points.iter().map(|&x| num(x)).collect::<Vec<_>>(),
    });
    serde_json::to_string_pretty(&v).expect("bracketing serializes")
}

/// CSV with header `theta_1..theta_d, lambda_1..lambda_n`, one row per grid
/// point.
pub fn band_structure_to_csv(bs: &BandStructure) -> String {
    let d = bs.theta_grid.first().map_or(0, Vec::len);
    let n = bs.bands.len();
    let mut out = String::new();
    let mut header: Vec<String> = (1..=d).map(|i| format!("theta_{i}")).collect();
    header.extend((1..=n).map(|k| format!("lambda_{k}")));
    out.push_str(&header.join(","));
    out.push('\n');
    for (i, theta) in bs.theta_grid.iter().enumerate() {
        let mut row: Vec<String> = theta.iter().map(|&t| fmt12(t)).collect();
        row.extend((0..n).map(|k| fmt12(bs.bands[k][i])));
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// CSV with header `s, band_lo_1, band_hi_1, ..., band_lo_n, band_hi_n`.
pub fn flux_diagram_to_csv(fd: &FluxDiagram) -> String {
    let mut out = String::new();
    let mut header = vec!["s".to_string()];
    for k in 1..=fd.n_bands {
        header.push(format!("band_lo_{k}"));
        header.push(format!("band_hi_{k}"));
    }
    out.push_str(&header.join(","));
    out.push('\n');
    for (s, row) in fd.s_values.iter().zip(&fd.rows) {
        let mut cells = vec![fmt12(*s)];
        for iv in &row.band_intervals {
            cells.push(fmt12(iv.lo));
            cells.push(fmt12(iv.hi));
        }
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Parse a flux-diagram CSV back (for the standalone SVG renderer).
pub fn flux_diagram_from_csv(text: &str) -> Result<FluxDiagram> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Format("empty CSV".into()))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols.first() != Some(&"s") || cols.len() < 3 || (cols.len() - 1) % 2 != 0 {
        return Err(Error::Format(
            "expected header `s,band_lo_1,band_hi_1,...`".into(),
        ));
    }
    let n_bands = (cols.len() - 1) / 2;
    let mut s_values = Vec::new();
    let mut rows = Vec::new();
    let mut ambient_max = 0.0f64;
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<f64> = line
            .split(',')
            .map(|c| {
                c.trim()
                    .parse()
                    .map_err(|_| Error::Format(format!("bad number on data row {}", lineno + 1)))
            })
            .collect::<Result<_>>()?;
        if cells.len() != cols.len() {
            return Err(Error::Format(format!(
                "row {} has {} cells, expected {}",
                lineno + 1,
                cells.len(),
                cols.len()
            )));
        }
        s_values.push(cells[0]);
        let mut band_intervals = Vec::with_capacity(n_bands);
        for k in 0..n_bands {
            let (lo, hi) = (cells[1 + 2 * k], cells[2 + 2 * k]);
            if lo > hi {
                return Err(Error::Format(format!(
                    "band {} endpoints out of order on row {}",
                    k + 1,
                    lineno + 1
                )));
            }
            ambient_max = ambient_max.max(hi);
            band_intervals.push(crate::interval::Interval::new(lo, hi));
        }
        rows.push(crate::covering::FluxRow {
            band_intervals,
            gaps: Vec::new(),
        });
    }
    if rows.is_empty() {
        return Err(Error::Format("CSV has no data rows".into()));
    }
    // Gaps are relative to the global ambient interval, known only after all
    // rows are read.
    for row in &mut rows {
        let union = crate::interval::merge(&row.band_intervals);
        row.gaps = crate::interval::gaps(&union, ambient_max);
    }
    Ok(FluxDiagram {
        s_values,
        rows,
        ambient_max,
        n_bands,
    })
}
