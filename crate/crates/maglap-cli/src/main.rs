//! `maglap` — spectra, gap bracketing, and band/gap diagrams of discrete
//! magnetic Laplacians, from built-in models or JSON graph files.
//!
//! Exit codes: 0 success, 1 invalid input (machine-readable JSON error on
//! stderr), 2 computation rejected by the cost guard (cap configurable via
//! the `MAGLAP_COST_CAP` environment variable).

use std::f64::consts::TAU;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use maglap::error::Error;
use maglap::models::{self, Model, ModelKind, ModelSpec, Weights};
use maglap::spectra::{self, WeightVariant};
use maglap::{io, render};

#[derive(Parser)]
#[command(name = "maglap", version, about = "Discrete magnetic Laplacian spectra and band/gap diagrams")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the spectrum of a finite graph or of a Floquet fiber.
    Spectrum(SpectrumArgs),
    /// Sample the band structure of a periodic graph over the character torus.
    Bands(BandsArgs),
    /// Sweep the constant-flux family and emit a band/gap diagram.
    Sweep(SweepArgs),
    /// Bracketing intervals from arc/vertex virtualization.
    Bracket(BracketArgs),
    /// δ gap-existence criterion at a vertex.
    Delta(DeltaArgs),
    /// Render a flux-diagram CSV as an SVG image.
    Render(RenderArgs),
}

#[derive(Args)]
struct Source {
    /// Built-in model: polyacetylene | agnr | zgnr | cycle | z-lattice.
    #[arg(long, conflicts_with = "graph")]
    model: Option<String>,
    /// JSON graph file (finite, or periodic when indices are present).
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Ribbon width N for agnr/zgnr.
    #[arg(long)]
    width: Option<usize>,
    /// Cycle length n for the cycle model.
    #[arg(long)]
    n: Option<usize>,
    /// Weight convention for built-in models.
    #[arg(long, default_value = "standard", value_parser = ["standard", "combinatorial"])]
    weights: String,
    /// Constant flux s in radians.
    #[arg(long, conflicts_with = "flux_turns")]
    flux: Option<f64>,
    /// Constant flux as a fraction of 2π.
    #[arg(long)]
    flux_turns: Option<f64>,
}

impl Source {
    fn load(&self) -> Result<Model, Error> {
        let flux = match (self.flux, self.flux_turns) {
            (Some(f), _) => f,
            (None, Some(t)) => t * TAU,
            (None, None) => 0.0,
        };
        match (&self.model, &self.graph) {
            (Some(name), None) => {
                let kind = match name.as_str() {
                    "polyacetylene" => ModelKind::Polyacetylene,
                    "agnr" => ModelKind::Agnr(self.width.ok_or_else(|| {
                        Error::InvalidInput("agnr requires --width".into())
                    })?),
                    "zgnr" => ModelKind::Zgnr(self.width.ok_or_else(|| {
                        Error::InvalidInput("zgnr requires --width".into())
                    })?),
                    "cycle" => ModelKind::Cycle(
                        self.n
                            .ok_or_else(|| Error::InvalidInput("cycle requires --n".into()))?,
                    ),
                    "z-lattice" => ModelKind::ZLattice,
                    other => {
                        return Err(Error::InvalidInput(format!("unknown model `{other}`")))
                    }
                };
                let weights = match self.weights.as_str() {
                    "combinatorial" => Weights::Combinatorial,
                    _ => Weights::Standard,
                };
                models::build(&ModelSpec { kind, weights, flux })
            }
            (None, Some(path)) => {
                if self.flux.is_some() || self.flux_turns.is_some() {
                    return Err(Error::InvalidInput(
                        "--flux applies to built-in models only; set alpha in the JSON".into(),
                    ));
                }
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::InvalidInput(format!("cannot read {path:?}: {e}")))?;
                io::parse_graph_json(&text)
            }
            _ => Err(Error::InvalidInput(
                "exactly one of --model or --graph is required".into(),
            )),
        }
    }
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    source: Source,
    /// Character components θ (radians, one per lattice dimension) for the
    /// fiber of a periodic graph.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    theta: Option<Vec<f64>>,
    /// Output file (default stdout).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BandsArgs {
    #[command(flatten)]
    source: Source,
    /// Grid points per torus dimension.
    #[arg(long, default_value_t = 128)]
    grid: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    source: Source,
    /// Flux samples over [0, 2π).
    #[arg(long, default_value_t = 128)]
    s_grid: usize,
    /// Character samples per dimension for each flux value.
    #[arg(long, default_value_t = 128)]
    theta_grid: usize,
    /// CSV output file (default stdout).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Additionally render the diagram to this SVG file.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct BracketArgs {
    #[command(flatten)]
    source: Source,
    /// Arcs to virtualize (lower operator). Defaults to the connecting arc
    /// classes for periodic sources.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    virtualize_arcs: Option<Vec<String>>,
    /// Vertices to virtualize (upper operator). Defaults to a minimal
    /// neighborhood of the virtualized arcs.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    virtualize_vertices: Option<Vec<String>>,
    /// Intersect the union with its mirror under κ(λ) = 2 − λ (bipartite,
    /// standard weights only).
    #[arg(long)]
    kappa: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DeltaArgs {
    #[command(flatten)]
    source: Source,
    /// The vertex v0 the criterion is evaluated at.
    #[arg(long)]
    vertex: String,
    /// Bridge arcs B ⊂ E_{v0}. Defaults to the connecting arc classes for
    /// periodic sources.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    bridges: Option<Vec<String>>,
    /// Formula variant; defaults to the model's weight convention.
    #[arg(long, value_parser = ["general", "standard", "combinatorial"])]
    variant: Option<String>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    /// Flux-diagram CSV produced by `maglap sweep`.
    #[arg(long)]
    input: PathBuf,
    /// SVG output file (default stdout).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn write_out(path: &Option<PathBuf>, content: &str) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, content)
            .map_err(|e| Error::InvalidInput(format!("cannot write {p:?}: {e}"))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.cmd {
        Cmd::Spectrum(args) => {
            let model = args.source.load()?;
            let spectrum = match (&model, &args.theta) {
                (Model::Finite(g), None) => spectra::spectrum_of(g)?,
                (Model::Finite(_), Some(_)) => {
                    return Err(Error::InvalidInput(
                        "--theta only applies to periodic graphs".into(),
                    ))
                }
                (Model::Periodic(p), theta) => {
                    let zero = vec![0.0; p.rank];
                    p.fiber_spectrum(theta.as_deref().unwrap_or(&zero))?
                }
            };
            write_out(&args.output, &(io::spectrum_to_json(&spectrum) + "\n"))
        }
        Cmd::Bands(args) => {
            let model = args.source.load()?;
            let bs = model.periodic()?.band_structure(args.grid)?;
            write_out(&args.output, &io::band_structure_to_csv(&bs))
        }
        Cmd::Sweep(args) => {
            let model = args.source.load()?;
            let fd = model.periodic()?.flux_sweep(args.s_grid, args.theta_grid)?;
            write_out(&args.output, &io::flux_diagram_to_csv(&fd))?;
            if let Some(svg_path) = &args.svg {
                let svg = render::render_svg(&fd)?;
                std::fs::write(svg_path, svg)
                    .map_err(|e| Error::InvalidInput(format!("cannot write {svg_path:?}: {e}")))?;
            }
            Ok(())
        }
        Cmd::Bracket(args) => {
            let model = args.source.load()?;
            let arcs: Vec<String> = match (&args.virtualize_arcs, &model) {
                (Some(a), _) => a.clone(),
                (None, Model::Periodic(p)) => p.connecting_arc_classes(),
                (None, Model::Finite(_)) => {
                    return Err(Error::InvalidInput(
                        "--virtualize-arcs is required for finite graphs".into(),
                    ))
                }
            };
            let g = model.quotient();
            let arc_refs: Vec<&str> = arcs.iter().map(String::as_str).collect();
            let verts: Vec<String> = match &args.virtualize_vertices {
                Some(v) => v.clone(),
                None => g.minimal_neighborhood(&arc_refs)?,
            };
            let vert_refs: Vec<&str> = verts.iter().map(String::as_str).collect();
            let mut b = spectra::bracketing(g, &arc_refs, &vert_refs)?;
            if args.kappa {
                b = spectra::kappa_refine(&b)?;
            }
            write_out(&args.output, &(io::bracketing_to_json(&b) + "\n"))
        }
        Cmd::Delta(args) => {
            let model = args.source.load()?;
            let g = model.quotient();
            let bridges: Vec<String> = match (&args.bridges, &model) {
                (Some(b), _) => b.clone(),
                (None, Model::Periodic(p)) => p.connecting_arc_classes(),
                (None, Model::Finite(_)) => {
                    return Err(Error::InvalidInput(
                        "--bridges is required for finite graphs".into(),
                    ))
                }
            };
            let bridge_refs: Vec<&str> = bridges.iter().map(String::as_str).collect();
            let variant = match args.variant.as_deref() {
                Some("general") => WeightVariant::General,
                Some("standard") => WeightVariant::Standard,
                Some("combinatorial") => WeightVariant::Combinatorial,
                None if g.has_combinatorial_weights() => WeightVariant::Combinatorial,
                None if g.has_standard_weights() => WeightVariant::Standard,
                None => WeightVariant::General,
                Some(_) => unreachable!("clap validates the variant"),
            };
            let delta = spectra::delta_criterion(g, &args.vertex, &bridge_refs, variant)?;
            let discrepancy = spectra::trace_identity_check(g, &args.vertex, &bridge_refs)?;
            let verdict = if delta > 0.0 {
                "gap certified"
            } else {
                "inconclusive"
            };
            let out = serde_json::json!({
                "delta": io::round12(delta),
                "verdict": verdict,
                "trace_discrepancy": io::round12(discrepancy),
            });
            write_out(
                &args.output,
                &(serde_json::to_string_pretty(&out).expect("serializes") + "\n"),
            )
        }
        Cmd::Render(args) => {
            let text = std::fs::read_to_string(&args.input)
                .map_err(|e| Error::InvalidInput(format!("cannot read {:?}: {e}", args.input)))?;
            let fd = io::flux_diagram_from_csv(&text)?;
            write_out(&args.output, &render::render_svg(&fd)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let (kind, code) = match &err {
                Error::CostGuard(_) => ("cost_guard", 2),
                _ => ("invalid_input", 1),
            };
            let msg = serde_json::json!({ "error": err.to_string(), "kind": kind });
            eprintln!("{msg}");
            ExitCode::from(code)
        }
    }
}
