//! Spectra, spectral-gap bracketing, and flux-dependent band/gap diagrams of
//! discrete magnetic Laplacians on finite and Z^d-periodic weighted
//! multigraphs.
//!
//! The core objects are weighted directed multigraphs carrying a per-arc
//! magnetic potential ([`graph::MwGraph`]) and their magnetic Laplacians
//! `Δ_α = d_α* d_α` ([`spectra::assemble_dml`]). Two virtualization moves —
//! deleting arcs (spectrally smaller) and compressing away vertices
//! (spectrally larger) — sandwich every eigenvalue into a bracketing interval
//! ([`spectra::bracketing`]), which localizes the spectrum of an infinite
//! periodic covering graph without ever building it. Periodic graphs are
//! represented by a quotient plus integer arc indices
//! ([`covering::PeriodicGraph`]); their spectra come from Floquet fiber
//! operators sampled over the character torus, and a one-parameter constant
//! flux family produces Hofstadter-style band/gap diagrams
//! ([`covering::PeriodicGraph::flux_sweep`], rendered by
//! [`render::render_svg`]).
//!
//! The closed-form δ criterion ([`spectra::delta_criterion`]) certifies
//! spectral gaps from a single vertex's weight data, cross-checked against a
//! trace identity. Built-in models (polyacetylene, armchair/zigzag
//! nanoribbons, cycles, the Z lattice) live in [`models`].

pub mod covering;
pub mod eig;
pub mod error;
pub mod graph;
pub mod interval;
pub mod io;
pub mod models;
pub mod render;
pub mod spectra;

pub use error::{Error, Result};
