//! The `faircut` command line.
//!
//! Every command prints one JSON document on stdout. Exit code 0 means
//! success, 2 a failed search or certificate, 1 anything wrong with the
//! input.

use crate::busolver::SolverOptions;
use crate::chessboard::{self, ChessboardColouring, ChessboardSpec};
use crate::counterexamples::{self, OneOneParams, OrthantParams};
use crate::error::{FaircutError, Result};
use crate::io::svg::{render_svg, Drawing};
use crate::io::{envelope, error_envelope, parse_json, read_box_measures, read_json};
use crate::measures::{monte_carlo_mass, BoxMeasure, Measure};
use crate::necklace1d::{self, BeadString, NecklaceSplit};
use crate::nested::{self, CompositeSplit, NestedPartition, SchemeJson, SchemeTree};
use crate::oracle;
use crate::stairpath::{self, CutVector, StairPartition, StairPath};
use crate::voronoifair::{self, CellFunctions, Cells, FairPartition};
use crate::Side;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(name = "faircut", version, about = "Fair mass partitions with few, fixed-direction cuts")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

/// Options shared by all commands.
#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Residual tolerance (default 1e-9 in one dimension, 1e-6 otherwise).
    #[arg(long, global = true, env = "FAIRCUT_TOL", allow_negative_numbers = true)]
    pub tol: Option<f64>,
    /// Seed for audits and sampling.
    #[arg(long, global = true, env = "FAIRCUT_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Finest lattice resolution of the zero search.
    #[arg(long, global = true)]
    pub resolution: Option<usize>,
}

impl RunConfig {
    fn options(&self, dim: usize) -> Result<SolverOptions> {
        let tol = self.tol.unwrap_or(if dim <= 1 { 1e-9 } else { 1e-6 });
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(FaircutError::Input(format!("tolerance must be positive, got {tol}")));
        }
        let mut o = SolverOptions::with_tol(tol);
        o.seed = self.seed;
        if let Some(r) = self.resolution {
            o.max_resolution = r.max(1);
            o.initial_resolution = o.initial_resolution.min(o.max_resolution);
        }
        Ok(o)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Split interval measures among thieves with few cuts.
    Necklace {
        #[arg(long)]
        measures: PathBuf,
        #[arg(long)]
        thieves: usize,
    },
    /// Fewest-cut fair split of a string of beads.
    NecklaceDiscrete {
        #[arg(long)]
        beads: String,
        #[arg(long)]
        thieves: usize,
    },
    /// Halve planar measures with a staircase path.
    Stairpath {
        #[arg(long)]
        measures: PathBuf,
        /// Strip layout as 0/1 digits, e.g. "1,1,0"; the halving layout by default.
        #[arg(long)]
        cut_vector: Option<String>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Nested hyperplane partition following a scheme file.
    Nested {
        #[arg(long)]
        measures: PathBuf,
        #[arg(long)]
        scheme: PathBuf,
        #[arg(long)]
        thieves: usize,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Chessboard colouring halving all measures.
    Chessboard {
        #[arg(long)]
        measures: PathBuf,
        /// Hyperplanes per direction, e.g. "1,2".
        #[arg(long)]
        counts: String,
        /// JSON array of directions.
        #[arg(long)]
        dirs: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Weighted Voronoi cells distributed fairly.
    Voronoi {
        #[arg(long)]
        measures: PathBuf,
        #[arg(long)]
        functions: PathBuf,
        #[arg(long)]
        thieves: usize,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Non-existence certificate for one of the built-in instances.
    Refute {
        #[arg(long, value_enum)]
        claim: Claim,
        #[arg(long)]
        step: Option<f64>,
        /// Box half-width (orthant claim).
        #[arg(long)]
        radius: Option<f64>,
        /// Dimension (orthant claim).
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Square side approximating the segments (one-one claim).
        #[arg(long)]
        width: Option<f64>,
        /// Distance between the segments (one-one claim).
        #[arg(long)]
        offset: Option<f64>,
    },
    /// Run a command and check its result independently.
    Verify {
        #[arg(long = "against-oracle", required = true)]
        against_oracle: bool,
        #[arg(trailing_var_arg = true, allow_hyphen_values = true, required = true)]
        args: Vec<String>,
    },
    /// Draw a saved result.
    Render {
        #[arg(long)]
        result: PathBuf,
        #[arg(long)]
        measures: PathBuf,
        #[arg(long)]
        svg: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Claim {
    OneOne,
    Orthant,
}

/// Runs the command line `args` (program name first), writing the JSON
/// document to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let name = command_name(&cli.command);
    match execute(&cli.command, &cli.config) {
        Ok(doc) => {
            let _ = writeln!(out, "{doc}");
            0
        }
        Err(Failure::Mismatch(doc)) => {
            let _ = writeln!(out, "{doc}");
            let _ = writeln!(err, "error: result disagrees with the independent check");
            2
        }
        Err(Failure::Error(e)) => {
            let _ = writeln!(out, "{}", error_envelope(name, &e));
            let _ = writeln!(err, "error: {e}");
            if e.is_search_failure() {
                2
            } else {
                1
            }
        }
    }
}

enum Failure {
    Error(FaircutError),
    Mismatch(String),
}

impl From<FaircutError> for Failure {
    fn from(e: FaircutError) -> Self {
        Failure::Error(e)
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Necklace { .. } => "necklace",
        Command::NecklaceDiscrete { .. } => "necklace-discrete",
        Command::Stairpath { .. } => "stairpath",
        Command::Nested { .. } => "nested",
        Command::Chessboard { .. } => "chessboard",
        Command::Voronoi { .. } => "voronoi",
        Command::Refute { .. } => "refute",
        Command::Verify { .. } => "verify",
        Command::Render { .. } => "render",
    }
}

#[derive(Serialize)]
struct Residuals {
    max_deviation: f64,
    tol: f64,
}

fn one_based(labels: &[usize]) -> Vec<usize> {
    labels.iter().map(|l| l + 1).collect()
}

fn zero_based(labels: &[usize]) -> Result<Vec<usize>> {
    labels
        .iter()
        .map(|&l| l.checked_sub(1).ok_or_else(|| FaircutError::Input("labels are numbered from 1".into())))
        .collect()
}

fn dim_of(ms: &[BoxMeasure]) -> usize {
    ms.first().map_or(1, |m| m.dim())
}

fn write_svg(path: &Path, drawing: &Drawing, ms: &[BoxMeasure]) -> Result<()> {
    let doc = render_svg(drawing, ms)?;
    std::fs::write(path, doc).map_err(|e| FaircutError::Input(format!("{}: {e}", path.display())))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct NecklaceResult {
    pub cuts: Vec<f64>,
    pub labels: Vec<usize>,
    pub shares: Vec<Vec<f64>>,
    pub normalization: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DiscreteResult {
    pub cuts: Vec<f64>,
    pub labels: Vec<usize>,
    /// Beads of each type per thief.
    pub shares: Vec<Vec<usize>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct StairResult {
    pub cut_vector: Vec<u8>,
    pub partition: StairPartition,
    pub path: Option<StairPath>,
    /// Mass of side A per measure.
    pub shares: Vec<f64>,
    pub normalization: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NestedJson {
    Prime {
        scheme: Option<SchemeJson>,
        #[serde(with = "crate::io::ext_real::vec")]
        offsets: Vec<f64>,
        labels: Vec<usize>,
    },
    Composed {
        outer: Box<NestedJson>,
        classes: Vec<NestedJson>,
        inner_k: usize,
    },
}

impl NestedJson {
    pub fn from_split(s: &CompositeSplit) -> Self {
        match s {
            CompositeSplit::Prime(p) => NestedJson::Prime {
                scheme: SchemeJson::from_tree(&p.scheme),
                offsets: p.offsets.clone(),
                labels: one_based(&p.labels),
            },
            CompositeSplit::Composed { outer, classes, inner_k } => NestedJson::Composed {
                outer: Box::new(NestedJson::from_split(&CompositeSplit::Prime(outer.clone()))),
                classes: classes.iter().map(NestedJson::from_split).collect(),
                inner_k: *inner_k,
            },
        }
    }

    pub fn to_split(&self) -> Result<CompositeSplit> {
        match self {
            NestedJson::Prime { scheme, offsets, labels } => Ok(CompositeSplit::Prime(NestedPartition {
                scheme: SchemeJson::to_tree(scheme.as_ref())?,
                offsets: offsets.clone(),
                labels: zero_based(labels)?,
            })),
            NestedJson::Composed { outer, classes, inner_k } => {
                let CompositeSplit::Prime(o) = outer.to_split()? else {
                    return Err(FaircutError::Input("outer split must be a single scheme".into()));
                };
                Ok(CompositeSplit::Composed {
                    outer: o,
                    classes: classes.iter().map(|c| c.to_split()).collect::<Result<_>>()?,
                    inner_k: *inner_k,
                })
            }
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct NestedResult {
    pub split: NestedJson,
    pub cuts: usize,
    pub shares: Vec<Vec<f64>>,
    pub normalization: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ChessboardResult {
    pub counts: Vec<u32>,
    pub colouring: ChessboardColouring,
    pub shares: Vec<f64>,
    pub normalization: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct VoronoiResult {
    pub functions: CellFunctions,
    #[serde(with = "crate::io::ext_real::vec")]
    pub weights: Vec<f64>,
    pub capacities: Vec<f64>,
    pub labels: Vec<usize>,
    pub shares: Vec<Vec<f64>>,
    pub normalization: Vec<f64>,
}

fn normalization(ms: &[BoxMeasure]) -> Vec<f64> {
    ms.iter().map(|m| m.normalization()).collect()
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|p| p.trim().parse::<T>().map_err(|_| FaircutError::Input(format!("bad {what} entry {p:?}"))))
        .collect()
}

fn thieves_ok(k: usize) -> Result<()> {
    if k < 2 {
        return Err(FaircutError::Input("need at least two thieves".into()));
    }
    Ok(())
}

fn execute(cmd: &Command, cfg: &RunConfig) -> std::result::Result<String, Failure> {
    let name = command_name(cmd);
    match cmd {
        Command::Necklace { measures, thieves } => {
            thieves_ok(*thieves)?;
            let ms = read_box_measures(measures)?;
            let opts = cfg.options(dim_of(&ms))?;
            let s = necklace1d::split(&ms, *thieves, &opts)?;
            let dev = s.max_deviation(&ms, *thieves);
            let r = NecklaceResult {
                cuts: s.cuts.clone(),
                labels: one_based(&s.labels),
                shares: s.shares(&ms, *thieves),
                normalization: normalization(&ms),
            };
            Ok(envelope(name, &r, &Residuals { max_deviation: dev, tol: opts.tol }))
        }
        Command::NecklaceDiscrete { beads, thieves } => {
            thieves_ok(*thieves)?;
            let b = BeadString::parse(beads)?;
            let s = necklace1d::discrete_split(&b, *thieves)?;
            let shares = bead_shares(&b, &s, *thieves);
            let r = DiscreteResult { cuts: s.cuts.clone(), labels: one_based(&s.labels), shares };
            Ok(envelope(name, &r, &Residuals { max_deviation: 0.0, tol: 0.0 }))
        }
        Command::Stairpath { measures, cut_vector, svg } => {
            let ms = read_box_measures(measures)?;
            let opts = cfg.options(2)?;
            let (m, part, path) = match cut_vector {
                None => {
                    let (p, path) = stairpath::halve_with_path(&ms, &opts)?;
                    (CutVector::for_halving(ms.len()), p, Some(path))
                }
                Some(bits) => {
                    let m = CutVector::from_bits(&parse_list::<u8>(bits, "cut vector")?);
                    let p = stairpath::solve_equipartition(&ms, &m, &opts)?;
                    let path = stairpath::to_path(&p, &m).ok();
                    (m, p, path)
                }
            };
            let shares: Vec<f64> = ms.iter().map(|mu| part.mass(mu, Side::A)).collect();
            let dev = shares.iter().map(|s| (s - 0.5).abs()).fold(0.0, f64::max);
            if let Some(p) = svg {
                write_svg(p, &Drawing::stair(&part, path.as_ref()), &ms)?;
            }
            let r = StairResult { cut_vector: m.0.iter().map(|b| *b as u8).collect(), partition: part, path, shares, normalization: normalization(&ms) };
            Ok(envelope(name, &r, &Residuals { max_deviation: dev, tol: opts.tol }))
        }
        Command::Nested { measures, scheme, thieves, svg } => {
            thieves_ok(*thieves)?;
            let ms = read_box_measures(measures)?;
            let opts = cfg.options(dim_of(&ms))?;
            let sj: SchemeJson = read_json(scheme)?;
            let tree = SchemeJson::to_tree(Some(&sj))?;
            let split = solve_nested_any(&ms, &tree, *thieves, &opts)?;
            let dev = split.max_deviation(&ms, *thieves);
            if let Some(p) = svg {
                write_svg(p, &Drawing::nested(&split), &ms)?;
            }
            let r = NestedResult { split: NestedJson::from_split(&split), cuts: split.cuts(), shares: split.shares(&ms, *thieves), normalization: normalization(&ms) };
            Ok(envelope(name, &r, &Residuals { max_deviation: dev, tol: opts.tol }))
        }
        Command::Chessboard { measures, counts, dirs, svg } => {
            let counts = parse_list::<u32>(counts, "count")?;
            if !chessboard::admissible(&counts) {
                return Err(FaircutError::Inadmissible(counts).into());
            }
            let ms = read_box_measures(measures)?;
            let directions: Vec<Vec<f64>> = read_json(dirs)?;
            let opts = cfg.options(dim_of(&ms))?;
            let spec = ChessboardSpec { counts: counts.clone(), directions };
            let c = chessboard::solve_chessboard(&ms, &spec, &opts)?;
            let shares: Vec<f64> = ms.iter().map(|m| c.mass(m, Side::A)).collect();
            let dev = shares.iter().map(|s| (s - 0.5).abs()).fold(0.0, f64::max);
            if let Some(p) = svg {
                write_svg(p, &Drawing::chessboard(&c), &ms)?;
            }
            let r = ChessboardResult { counts, colouring: c, shares, normalization: normalization(&ms) };
            Ok(envelope(name, &r, &Residuals { max_deviation: dev, tol: opts.tol }))
        }
        Command::Voronoi { measures, functions, thieves, svg } => {
            thieves_ok(*thieves)?;
            let ms = read_box_measures(measures)?;
            let fns: CellFunctions = read_json(functions)?;
            let opts = cfg.options(dim_of(&ms))?;
            let p = voronoifair::solve_fair(&fns, &ms, *thieves, &opts)?;
            let cells = Cells::new(&fns)?;
            let dev = p.max_deviation(&cells, &ms);
            if let Some(path) = svg {
                write_svg(path, &Drawing::voronoi(&cells, &p), &ms)?;
            }
            let r = VoronoiResult {
                functions: fns,
                weights: p.weights.clone(),
                capacities: p.capacities.clone(),
                labels: one_based(&p.labels),
                shares: p.shares(&cells, &ms),
                normalization: normalization(&ms),
            };
            Ok(envelope(name, &r, &Residuals { max_deviation: dev, tol: opts.tol }))
        }
        Command::Refute { claim, step, radius, dim, width, offset } => {
            let cert = match claim {
                Claim::OneOne => {
                    let d = OneOneParams::default();
                    let p = OneOneParams {
                        width: width.unwrap_or(d.width),
                        offset: offset.unwrap_or(d.offset),
                        step: step.unwrap_or(d.step),
                        seed: cfg.seed,
                        ..d
                    };
                    counterexamples::refute_one_one(&p)?
                }
                Claim::Orthant => {
                    let d = OrthantParams::new(*dim);
                    let p = OrthantParams {
                        radius: radius.unwrap_or(d.radius),
                        step: step.unwrap_or(d.step),
                        seed: cfg.seed,
                        ..d
                    };
                    counterexamples::refute_orthant(&p)?
                }
            };
            #[derive(Serialize)]
            struct CertResiduals {
                delta: f64,
                slack: f64,
                validated_min: f64,
            }
            let res = CertResiduals { delta: cert.delta, slack: cert.slack, validated_min: cert.validated_min };
            Ok(envelope(name, &cert, &res))
        }
        Command::Verify { args, .. } => verify(args, cfg),
        Command::Render { result, measures, svg } => {
            let ms = read_box_measures(measures)?;
            let text = std::fs::read_to_string(result).map_err(|e| FaircutError::Input(format!("{}: {e}", result.display())))?;
            let doc: Value = parse_json(&text, &result.display().to_string())?;
            let drawing = drawing_from_result(&doc)?;
            write_svg(svg, &drawing, &ms)?;
            #[derive(Serialize)]
            struct Rendered {
                svg: String,
            }
            Ok(envelope(name, &Rendered { svg: svg.display().to_string() }, &Value::Null))
        }
    }
}

fn solve_nested_any(ms: &[BoxMeasure], tree: &SchemeTree, k: usize, opts: &SolverOptions) -> Result<CompositeSplit> {
    if crate::busolver::is_prime(k) {
        Ok(CompositeSplit::Prime(nested::solve_nested(ms, tree, k, opts)?))
    } else {
        nested::solve_nested_composite(ms, &tree.directions(), &necklace1d::prime_factors(k), opts)
    }
}

fn bead_shares(b: &BeadString, s: &NecklaceSplit, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![0; b.types]; k];
    for (i, &t) in b.beads.iter().enumerate() {
        out[s.label_of(i as f64 + 0.5)][t] += 1;
    }
    out
}

fn drawing_from_result(doc: &Value) -> Result<Drawing> {
    let command = doc.get("command").and_then(Value::as_str).ok_or_else(|| FaircutError::Input("result has no \"command\" field".into()))?;
    let result = doc.get("result").cloned().ok_or_else(|| FaircutError::Input("result has no \"result\" field".into()))?;
    let bad = |e: serde_json::Error| FaircutError::Input(format!("malformed {command} result: {e}"));
    match command {
        "stairpath" => {
            let r: StairResult = serde_json::from_value(result).map_err(bad)?;
            Ok(Drawing::stair(&r.partition, r.path.as_ref()))
        }
        "nested" => {
            let r: NestedResult = serde_json::from_value(result).map_err(bad)?;
            Ok(Drawing::nested(&r.split.to_split()?))
        }
        "chessboard" => {
            let r: ChessboardResult = serde_json::from_value(result).map_err(bad)?;
            Ok(Drawing::chessboard(&r.colouring))
        }
        "voronoi" => {
            let r: VoronoiResult = serde_json::from_value(result).map_err(bad)?;
            let cells = Cells::new(&r.functions)?;
            let k = r.labels.iter().copied().max().unwrap_or(1);
            let p = FairPartition { weights: r.weights, capacities: r.capacities, labels: zero_based(&r.labels)?, k };
            Ok(Drawing::voronoi(&cells, &p))
        }
        other => Err(FaircutError::Input(format!("cannot render a {other} result"))),
    }
}

const VERIFY_SAMPLES: usize = 200_000;

#[derive(Serialize)]
struct VerifyReport {
    command: String,
    solver: f64,
    oracle: f64,
    allowance: f64,
    agree: bool,
}

/// Re-runs a solver command and checks it against a brute-force oracle or
/// an independent sampled mass evaluation.
fn verify(args: &[String], cfg: &RunConfig) -> std::result::Result<String, Failure> {
    let mut argv = vec!["faircut".to_string()];
    argv.extend(args.iter().cloned());
    let inner = Cli::try_parse_from(&argv).map_err(|e| FaircutError::Input(e.to_string()))?;
    let cfg = RunConfig {
        tol: inner.config.tol.or(cfg.tol),
        seed: if inner.config.seed != 0 { inner.config.seed } else { cfg.seed },
        resolution: inner.config.resolution.or(cfg.resolution),
    };
    let name = command_name(&inner.command).to_string();
    let report = match &inner.command {
        Command::NecklaceDiscrete { beads, thieves } => {
            let b = BeadString::parse(beads)?;
            let s = necklace1d::discrete_split(&b, *thieves)?;
            let max_cuts = b.types * (thieves - 1);
            let o = oracle::oracle_necklace(&b, *thieves, max_cuts)?;
            let solver = s.cuts.len() as f64;
            VerifyReport { command: name, solver, oracle: o.best, allowance: 0.0, agree: solver == o.best }
        }
        Command::Necklace { measures, thieves } => {
            let ms = read_box_measures(measures)?;
            let opts = cfg.options(1)?;
            let s = necklace1d::split(&ms, *thieves, &opts)?;
            let (solver, sampled, allowance) = sampled_check(&ms, *thieves, &|x| s.label_of(x[0]), &s.shares(&ms, *thieves), opts.tol);
            VerifyReport { command: name, solver, oracle: sampled, allowance, agree: (solver - sampled).abs() <= allowance }
        }
        Command::Stairpath { measures, cut_vector, .. } => {
            let ms = read_box_measures(measures)?;
            let opts = cfg.options(2)?;
            let part = match cut_vector {
                None => stairpath::halve_with_path(&ms, &opts)?.0,
                Some(bits) => stairpath::solve_equipartition(&ms, &CutVector::from_bits(&parse_list::<u8>(bits, "cut vector")?), &opts)?,
            };
            let shares: Vec<Vec<f64>> = [Side::A, Side::B].iter().map(|s| ms.iter().map(|m| part.mass(m, *s)).collect()).collect();
            let label = |x: &[f64]| if part.side_of(x) == Side::A { 0 } else { 1 };
            let (solver, sampled, allowance) = sampled_check(&ms, 2, &label, &shares, opts.tol);
            VerifyReport { command: name, solver, oracle: sampled, allowance, agree: (solver - sampled).abs() <= allowance }
        }
        Command::Nested { measures, scheme, thieves, .. } => {
            let ms = read_box_measures(measures)?;
            let opts = cfg.options(dim_of(&ms))?;
            let sj: SchemeJson = read_json(scheme)?;
            let split = solve_nested_any(&ms, &SchemeJson::to_tree(Some(&sj))?, *thieves, &opts)?;
            let (solver, sampled, allowance) = sampled_check(&ms, *thieves, &|x| split.label_of(x), &split.shares(&ms, *thieves), opts.tol);
            VerifyReport { command: name, solver, oracle: sampled, allowance, agree: (solver - sampled).abs() <= allowance }
        }
        Command::Chessboard { measures, counts, dirs, .. } => {
            let counts = parse_list::<u32>(counts, "count")?;
            let ms = read_box_measures(measures)?;
            let directions: Vec<Vec<f64>> = read_json(dirs)?;
            let opts = cfg.options(dim_of(&ms))?;
            let c = chessboard::solve_chessboard(&ms, &ChessboardSpec { counts, directions }, &opts)?;
            let shares: Vec<Vec<f64>> = [Side::A, Side::B].iter().map(|s| ms.iter().map(|m| c.mass(m, *s)).collect()).collect();
            let label = |x: &[f64]| if c.colour_of(x) == Ok(Side::B) { 1 } else { 0 };
            let (solver, sampled, allowance) = sampled_check(&ms, 2, &label, &shares, opts.tol);
            VerifyReport { command: name, solver, oracle: sampled, allowance, agree: (solver - sampled).abs() <= allowance }
        }
        Command::Voronoi { measures, functions, thieves, .. } => {
            let ms = read_box_measures(measures)?;
            let fns: CellFunctions = read_json(functions)?;
            let opts = cfg.options(dim_of(&ms))?;
            let p = voronoifair::solve_fair(&fns, &ms, *thieves, &opts)?;
            let cells = Cells::new(&fns)?;
            let label = |x: &[f64]| cells.cell_of(&p.weights, x).map_or(usize::MAX, |i| p.labels[i]);
            let (solver, sampled, allowance) = sampled_check(&ms, *thieves, &label, &p.shares(&cells, &ms), opts.tol);
            VerifyReport { command: name, solver, oracle: sampled, allowance, agree: (solver - sampled).abs() <= allowance }
        }
        _ => return Err(FaircutError::Unsupported(format!("no oracle for {name}")).into()),
    };
    let doc = envelope("verify", &report, &Value::Null);
    if report.agree {
        Ok(doc)
    } else {
        Err(Failure::Mismatch(doc))
    }
}

/// Worst share deviation from exact masses and from stratified sampling of
/// the labelling predicate, with the allowed gap between the two.
fn sampled_check(ms: &[BoxMeasure], k: usize, label: &(dyn Fn(&[f64]) -> usize + Sync), exact: &[Vec<f64>], tol: f64) -> (f64, f64, f64) {
    let target = 1.0 / k as f64;
    let solver = exact.iter().flatten().map(|s| (s - target).abs()).fold(0.0, f64::max);
    let mut sampled = 0.0f64;
    let mut err = 0.0f64;
    for l in 0..k {
        for (j, m) in ms.iter().enumerate() {
            let est = monte_carlo_mass(m, |x| label(x) == l, VERIFY_SAMPLES, (l * ms.len() + j) as u64);
            sampled = sampled.max((est.value - target).abs());
            err = err.max(est.std_error);
        }
    }
    (solver, sampled, tol + 6.0 * err.max(1.0 / VERIFY_SAMPLES as f64))
}
