//! Command-line front end.
//!
//! Exit codes: 0 success, 1 partial result (a limit was hit), 2 unreadable or
//! malformed input, 3 well-formed input that is semantically unusable.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::bounds::{Bounds, BoundsConfig, DEFAULT_MARGIN};
use crate::movegraph::{self, BuildError, BuildOptions, Limits, Provenance};
use crate::moves::{CatalogSphere, Move, MoveSet, SphereCatalog};
use crate::oracle;
use crate::surface::{Classification, SurfaceEncoding};
use crate::triangulation::Triangulation;

/// Environment variable supplying the default worker count.
pub const WORKERS_ENV: &str = "HEEGRAPH_WORKERS";

#[derive(Debug, Parser)]
#[command(
    name = "heegraph",
    version,
    about = "Graphs of crudely almost normal surfaces and their loop generators"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a triangulation and optionally a surface on it.
    Validate {
        /// Gluing-table file.
        triangulation: PathBuf,
        /// Surface file.
        surface: Option<PathBuf>,
    },
    /// Compute C, delta and the weight budget W from geometric inputs.
    Bounds(BoundsArgs),
    /// Build the move graph of a seed surface and export it.
    Graph(GraphArgs),
    /// Build the move graph and emit its generator loops.
    Generators(GraphArgs),
    /// Replay generator loops from the seed.
    Replay {
        triangulation: PathBuf,
        seed: PathBuf,
        /// Loop file: `loop <i>: <moves>` lines, or bare moves forming one loop.
        loops: PathBuf,
        /// Extra catalog spheres (surface files), after the vertex links.
        #[arg(long = "sphere")]
        spheres: Vec<PathBuf>,
    },
    /// Brute-force reference computations.
    #[command(hide = true, subcommand)]
    Oracle(OracleCommand),
}

#[derive(Debug, Subcommand)]
enum OracleCommand {
    Matchings {
        a: usize,
        b: usize,
        c: usize,
    },
    Surfaces {
        triangulation: PathBuf,
        #[arg(long)]
        max_weight: usize,
        #[arg(long)]
        print: bool,
    },
    Closure {
        triangulation: PathBuf,
        seed: PathBuf,
        #[arg(long)]
        budget: usize,
        #[arg(long, default_value = "E1")]
        moves: String,
    },
}

#[derive(Debug, Args)]
struct BoundsArgs {
    /// TOML file with the fields below; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    genus: Option<u32>,
    #[arg(long)]
    sweepout_max_area: Option<f64>,
    #[arg(long = "k")]
    k: Option<f64>,
    #[arg(long)]
    injectivity_radius: Option<f64>,
    #[arg(long)]
    compression_diameter_floor: Option<f64>,
    #[arg(long)]
    margin: Option<f64>,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct GraphArgs {
    triangulation: PathBuf,
    seed: PathBuf,
    /// Weight budget W.
    #[arg(long, conflicts_with = "bounds")]
    budget: Option<usize>,
    /// Bounds config; W is computed from it.
    #[arg(long)]
    bounds: Option<PathBuf>,
    /// Move kinds, comma separated; empty for none.
    #[arg(long, default_value = "V0,E1,F2',PINCH,UNPINCH")]
    moves: String,
    /// Extra catalog spheres (surface files), after the vertex links.
    #[arg(long = "sphere")]
    spheres: Vec<PathBuf>,
    #[arg(long)]
    max_vertices: Option<usize>,
    #[arg(long)]
    max_seconds: Option<f64>,
    #[arg(long, env = WORKERS_ENV, default_value_t = 1)]
    workers: usize,
    #[arg(long)]
    out_json: Option<PathBuf>,
    #[arg(long)]
    out_dot: Option<PathBuf>,
    /// Generator loops file (the `generators` command prints them when absent).
    #[arg(long)]
    loops: Option<PathBuf>,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Semantic(String),
    #[error("{0}")]
    Partial(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Partial(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Semantic(_) | CliError::Failed(_) => 3,
        }
    }
}

type Res<T> = Result<T, CliError>;

fn read(path: &Path) -> Res<Vec<u8>> {
    std::fs::read(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn read_text(path: &Path) -> Res<String> {
    String::from_utf8(read(path)?)
        .map_err(|_| CliError::Parse(format!("{}: not UTF-8", path.display())))
}

fn write(path: &Path, contents: &str) -> Res<()> {
    std::fs::write(path, contents).map_err(|e| CliError::Failed(format!("{}: {e}", path.display())))
}

fn sha256(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn load_triangulation(path: &Path) -> Res<(Arc<Triangulation>, Vec<u8>)> {
    let bytes = read(path)?;
    let text = String::from_utf8_lossy(&bytes);
    match Triangulation::parse(&text) {
        Ok(t) => Ok((Arc::new(t), bytes)),
        Err(e) if e.is_syntax() => Err(CliError::Parse(format!("{}: {e}", path.display()))),
        Err(e) => Err(CliError::Semantic(format!("{}: {e}", path.display()))),
    }
}

fn load_surface(tri: &Arc<Triangulation>, path: &Path) -> Res<(SurfaceEncoding, Vec<u8>)> {
    let bytes = read(path)?;
    let text = String::from_utf8_lossy(&bytes);
    match SurfaceEncoding::parse(tri.clone(), &text) {
        Ok(s) => Ok((s, bytes)),
        Err(e) if e.is_syntax() => Err(CliError::Parse(format!("{}: {e}", path.display()))),
        Err(e) => Err(CliError::Semantic(format!("{}: {e}", path.display()))),
    }
}

fn load_catalog(
    tri: &Arc<Triangulation>,
    spheres: &[PathBuf],
) -> Res<(SphereCatalog, Vec<(String, String)>)> {
    let mut catalog = SphereCatalog::vertex_links(tri);
    let mut hashes = Vec::new();
    for path in spheres {
        let (enc, bytes) = load_surface(tri, path)?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        let sphere = CatalogSphere::custom(name.clone(), enc)
            .map_err(|e| CliError::Semantic(e.to_string()))?;
        catalog.push(sphere);
        hashes.push((name, sha256(&bytes)));
    }
    Ok((catalog, hashes))
}

/// Parses `std::env::args` and runs the command.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let result = run(cli, &mut out);
    print!("{out}");
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

/// Runs a parsed command, appending its standard output to `out`.
pub fn run(cli: Cli, out: &mut String) -> Res<()> {
    match cli.command {
        Command::Validate {
            triangulation,
            surface,
        } => cmd_validate(&triangulation, surface.as_deref(), out),
        Command::Bounds(args) => cmd_bounds(&args, out),
        Command::Graph(args) => cmd_graph(&args, false, out),
        Command::Generators(args) => cmd_graph(&args, true, out),
        Command::Replay {
            triangulation,
            seed,
            loops,
            spheres,
        } => cmd_replay(&triangulation, &seed, &loops, &spheres, out),
        Command::Oracle(cmd) => cmd_oracle(cmd, out),
    }
}

fn cmd_validate(tri_path: &Path, surface: Option<&Path>, out: &mut String) -> Res<()> {
    let (tri, _) = load_triangulation(tri_path)?;
    let _ = writeln!(
        out,
        "triangulation: {} tetrahedra, {} vertices, {} edges, {} faces, χ {}",
        tri.tet_count(),
        tri.vertex_count(),
        tri.edge_count(),
        tri.face_count(),
        tri.euler_characteristic()
    );
    let Some(path) = surface else {
        return Ok(());
    };
    let (enc, _) = load_surface(&tri, path)?;
    let class = enc.validate();
    if let Classification::Invalid(v) = class {
        let _ = writeln!(out, "invalid ({})", v.reason());
        return Err(CliError::Semantic(format!(
            "{}: {}",
            path.display(),
            v.reason()
        )));
    }
    let _ = writeln!(
        out,
        "{class}, weight {}, χ {}, genus {}, components {}",
        enc.weight(),
        enc.euler_characteristic(),
        enc.genus(),
        enc.components()
    );
    Ok(())
}

fn bounds_config(args: &BoundsArgs) -> Res<BoundsConfig> {
    let base = match &args.config {
        Some(path) => Some(
            BoundsConfig::parse(&read_text(path)?)
                .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?,
        ),
        None => None,
    };
    let missing = |name: &str| CliError::Semantic(format!("missing bounds input `{name}`"));
    Ok(BoundsConfig {
        genus: args
            .genus
            .or(base.as_ref().map(|b| b.genus))
            .ok_or_else(|| missing("genus"))?,
        sweepout_max_area: args
            .sweepout_max_area
            .or(base.as_ref().map(|b| b.sweepout_max_area))
            .ok_or_else(|| missing("sweepout_max_area"))?,
        k: args
            .k
            .or(base.as_ref().map(|b| b.k))
            .ok_or_else(|| missing("K"))?,
        injectivity_radius: args
            .injectivity_radius
            .or(base.as_ref().map(|b| b.injectivity_radius))
            .ok_or_else(|| missing("injectivity_radius"))?,
        compression_diameter_floor: args
            .compression_diameter_floor
            .or(base.as_ref().map(|b| b.compression_diameter_floor))
            .ok_or_else(|| missing("compression_diameter_floor"))?,
        margin: args
            .margin
            .or(base.as_ref().map(|b| b.margin))
            .unwrap_or(DEFAULT_MARGIN),
    })
}

fn cmd_bounds(args: &BoundsArgs, out: &mut String) -> Res<()> {
    let cfg = bounds_config(args)?;
    let b = cfg
        .compute()
        .map_err(|e| CliError::Semantic(e.to_string()))?;
    if args.json {
        out.push_str(&serde_json::to_string(&b).expect("bounds serialize"));
        out.push('\n');
    } else {
        let _ = writeln!(out, "C = {:.12}\ndelta = {:.12}\nW = {}", b.c, b.delta, b.w);
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct InputRecord {
    path: String,
    sha256: String,
}

#[derive(Debug, Serialize)]
struct LimitsRecord {
    max_vertices: Option<usize>,
    max_seconds: Option<f64>,
}

#[derive(Debug, Serialize)]
struct ParametersRecord {
    budget: usize,
    bounds: Option<BoundsConfig>,
    derived: Option<Bounds>,
    move_set: String,
    catalog: Vec<String>,
    limits: LimitsRecord,
    workers: usize,
}

#[derive(Debug, Serialize)]
struct ResultRecord {
    status: &'static str,
    vertices: usize,
    edges: usize,
    rank: i64,
    rejected_by_budget: usize,
    digests: BTreeMap<String, String>,
}

/// Everything needed to reproduce a graph run, and digests of what it wrote.
#[derive(Debug, Serialize)]
struct RunManifest {
    tool: &'static str,
    version: &'static str,
    inputs: BTreeMap<String, InputRecord>,
    parameters: ParametersRecord,
    result: ResultRecord,
    wall_time_seconds: f64,
}

fn cmd_graph(args: &GraphArgs, emit_loops: bool, out: &mut String) -> Res<()> {
    let start = Instant::now();
    let (tri, tri_bytes) = load_triangulation(&args.triangulation)?;
    let (seed, seed_bytes) = load_surface(&tri, &args.seed)?;
    let (catalog, sphere_hashes) = load_catalog(&tri, &args.spheres)?;
    let move_set: MoveSet = args
        .moves
        .parse()
        .map_err(|e| CliError::Parse(format!("--moves: {e}")))?;
    let (budget, bounds_cfg, derived) = match (&args.budget, &args.bounds) {
        (Some(w), _) => (*w, None, None),
        (None, Some(path)) => {
            let cfg = BoundsConfig::parse(&read_text(path)?)
                .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
            let b = cfg
                .compute()
                .map_err(|e| CliError::Semantic(e.to_string()))?;
            (b.w, Some(cfg), Some(b))
        }
        (None, None) => {
            return Err(CliError::Semantic(
                "either --budget or --bounds is required".into(),
            ))
        }
    };
    let limits = Limits {
        max_vertices: args.max_vertices,
        max_time: args.max_seconds.map(Duration::from_secs_f64),
    };
    let options = BuildOptions {
        budget,
        move_set: move_set.clone(),
        workers: args.workers,
        limits,
    };

    let (graph, partial) = match movegraph::build(&seed, &catalog, &options) {
        Ok(g) => (g, None),
        Err(BuildError::LimitExceeded { limit, partial }) => (*partial, Some(limit)),
        Err(e @ BuildError::Workers(_)) => return Err(CliError::Failed(e.to_string())),
        Err(e) => return Err(CliError::Semantic(e.to_string())),
    };

    let mut provenance = Provenance::from_inputs(&tri_bytes, &seed_bytes);
    provenance.catalog = catalog.iter().map(|(_, s)| s.name().to_string()).collect();
    let params = &mut provenance.parameters;
    params.insert("budget".into(), budget.to_string());
    params.insert("move_set".into(), move_set.to_string());
    if let (Some(cfg), Some(b)) = (&bounds_cfg, &derived) {
        params.insert("K".into(), cfg.k.to_string());
        params.insert("margin".into(), cfg.margin.to_string());
        params.insert("C".into(), b.c.to_string());
        params.insert("delta".into(), b.delta.to_string());
    }
    if let Some(n) = limits.max_vertices {
        params.insert("max_vertices".into(), n.to_string());
    }
    if let Some(s) = args.max_seconds {
        params.insert("max_seconds".into(), s.to_string());
    }
    for (name, hash) in &sphere_hashes {
        params.insert(format!("sphere_sha256.{name}"), hash.clone());
    }

    let mut digests = BTreeMap::new();
    let json = graph.to_document(provenance).to_json();
    digests.insert("graph_json".to_string(), sha256(json.as_bytes()));
    if let Some(path) = &args.out_json {
        write(path, &json)?;
    }
    let dot = graph.to_dot();
    digests.insert("graph_dot".to_string(), sha256(dot.as_bytes()));
    if let Some(path) = &args.out_dot {
        write(path, &dot)?;
    }

    let stats = graph.stats();
    let _ = writeln!(
        out,
        "{}: vertices {}, edges {}, rank {}, rejected by budget {}, wall time {:.3}s",
        if partial.is_some() {
            "PARTIAL"
        } else {
            "complete"
        },
        stats.vertices,
        stats.edges,
        stats.rank,
        stats.rejected_by_budget,
        stats.wall_time.as_secs_f64()
    );

    if emit_loops || args.loops.is_some() {
        if partial.is_none() {
            let set =
                movegraph::generators(&graph).map_err(|e| CliError::Semantic(e.to_string()))?;
            let text = set.to_text();
            digests.insert("loops".to_string(), sha256(text.as_bytes()));
            match &args.loops {
                Some(path) => write(path, &text)?,
                None => out.push_str(&text),
            }
        } else {
            let _ = writeln!(out, "no generators for a partial graph");
        }
    }

    if let Some(path) = &args.manifest {
        let mut inputs = BTreeMap::new();
        inputs.insert(
            "triangulation".to_string(),
            InputRecord {
                path: args.triangulation.display().to_string(),
                sha256: sha256(&tri_bytes),
            },
        );
        inputs.insert(
            "seed".to_string(),
            InputRecord {
                path: args.seed.display().to_string(),
                sha256: sha256(&seed_bytes),
            },
        );
        for (p, (name, hash)) in args.spheres.iter().zip(&sphere_hashes) {
            inputs.insert(
                format!("sphere.{name}"),
                InputRecord {
                    path: p.display().to_string(),
                    sha256: hash.clone(),
                },
            );
        }
        let manifest = RunManifest {
            tool: "heegraph",
            version: env!("CARGO_PKG_VERSION"),
            inputs,
            parameters: ParametersRecord {
                budget,
                bounds: bounds_cfg,
                derived,
                move_set: move_set.to_string(),
                catalog: catalog.iter().map(|(_, s)| s.name().to_string()).collect(),
                limits: LimitsRecord {
                    max_vertices: limits.max_vertices,
                    max_seconds: args.max_seconds,
                },
                workers: args.workers,
            },
            result: ResultRecord {
                status: if partial.is_some() {
                    "partial"
                } else {
                    "complete"
                },
                vertices: stats.vertices,
                edges: stats.edges,
                rank: stats.rank,
                rejected_by_budget: stats.rejected_by_budget,
                digests,
            },
            wall_time_seconds: start.elapsed().as_secs_f64(),
        };
        let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        text.push('\n');
        write(path, &text)?;
    }

    match partial {
        Some(limit) => Err(CliError::Partial(format!(
            "{limit} limit exceeded; outputs are marked partial"
        ))),
        None => Ok(()),
    }
}

/// Reads a loop file: `loop <i>: <moves>` lines, or bare moves forming one loop.
/// `#` starts a comment.
pub fn parse_loops(text: &str) -> Result<Vec<Vec<Move>>, String> {
    let lines: Vec<&str> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .collect();
    let moves = |s: &str| -> Result<Vec<Move>, String> {
        s.split_whitespace()
            .map(|m| m.parse::<Move>().map_err(|e| e.to_string()))
            .collect()
    };
    if lines.iter().any(|l| l.starts_with("loop")) {
        lines
            .iter()
            .map(|l| {
                let rest = l
                    .strip_prefix("loop")
                    .and_then(|r| r.split_once(':'))
                    .ok_or_else(|| format!("expected `loop <i>: ...`, found `{l}`"))?;
                moves(rest.1)
            })
            .collect()
    } else {
        Ok(vec![moves(&lines.join(" "))?])
    }
}

fn cmd_replay(
    tri_path: &Path,
    seed_path: &Path,
    loops_path: &Path,
    spheres: &[PathBuf],
    out: &mut String,
) -> Res<()> {
    let (tri, _) = load_triangulation(tri_path)?;
    let (seed, _) = load_surface(&tri, seed_path)?;
    let (catalog, _) = load_catalog(&tri, spheres)?;
    let loops = parse_loops(&read_text(loops_path)?)
        .map_err(|e| CliError::Parse(format!("{}: {e}", loops_path.display())))?;
    let mut failed = 0;
    for (i, l) in loops.iter().enumerate() {
        match movegraph::replay(&seed, l, &catalog) {
            Ok(()) => {
                let _ = writeln!(out, "loop {i}: ok ({} moves)", l.len());
            }
            Err(e) => {
                failed += 1;
                let _ = writeln!(out, "loop {i}: fail, {e}");
            }
        }
    }
    if failed > 0 {
        return Err(CliError::Semantic(format!(
            "{failed} of {} loops failed",
            loops.len()
        )));
    }
    Ok(())
}

fn cmd_oracle(cmd: OracleCommand, out: &mut String) -> Res<()> {
    let oracle_err = |e: oracle::OracleError| CliError::Semantic(e.to_string());
    match cmd {
        OracleCommand::Matchings { a, b, c } => {
            let all = oracle::oracle_matchings((a, b, c)).map_err(oracle_err)?;
            let _ = writeln!(out, "{}", all.len());
        }
        OracleCommand::Surfaces {
            triangulation,
            max_weight,
            print,
        } => {
            let all = oracle::oracle_surfaces(&read_text(&triangulation)?, max_weight)
                .map_err(oracle_err)?;
            let _ = writeln!(out, "{}", all.len());
            if print {
                all.iter().for_each(|s| out.push_str(s));
            }
        }
        OracleCommand::Closure {
            triangulation,
            seed,
            budget,
            moves,
        } => {
            let all = oracle::oracle_closure(
                &read_text(&triangulation)?,
                &read_text(&seed)?,
                budget,
                &moves,
            )
            .map_err(oracle_err)?;
            let _ = writeln!(out, "{}", all.len());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn loop_files() {
        let loops = parse_loops("# none\nloop 0:\nloop 1: E1+@e2[0,f1.2,3-4] E1-@e2[0,f1.2,3-4]\n")
            .unwrap();
        assert_eq!(loops.len(), 2);
        assert!(loops[0].is_empty());
        assert_eq!(loops[1].len(), 2);
        assert_eq!(parse_loops("").unwrap(), vec![Vec::new()]);
        assert_eq!(parse_loops("E1+@e2[0,f1.2,3-4]\n").unwrap()[0].len(), 1);
        assert!(parse_loops("loop 0: nonsense").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Partial(String::new()).code(), 1);
        assert_eq!(CliError::Parse(String::new()).code(), 2);
        assert_eq!(CliError::Semantic(String::new()).code(), 3);
    }
}
