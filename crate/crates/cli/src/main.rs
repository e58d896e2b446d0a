mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cgstp_core::admissibility::SelectionFile;
use cgstp_core::complex::parse_candidates;
use cgstp_core::ilp::{parse_assignment, ExternalReport};
use cgstp_core::{
    boundary, check_admissible, check_boundary_identity, decode_tour, delaunay_candidates, emit_lp, fan_encode,
    full_complex, net_weight, parse_tsplib, restricted_complex, solve_exact, tour_length, tsp_oracle_bruteforce,
    tsp_oracle_held_karp, validate_external, Complex, Edge, Error, Instance, ObjectiveBreakdown, SolveOptions,
    SolveStatus, Tour, Verdict,
};

#[derive(Parser)]
#[command(name = "cgstp", version, about = "Exact tours as triangle selections on the triangle-edge incidence graph")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random Euclidean instance (TSPLIB, or JSON with a .json output).
    Gen(GenArgs),
    /// Solve exactly over a candidate complex and write a solve report.
    Solve(SolveArgs),
    /// Check a selection against C1-C5 and report its net weight.
    Verify(VerifyArgs),
    /// Fan-triangulate a tour into a selection.
    Encode(EncodeArgs),
    /// Recover the boundary tour of a selection.
    Decode(DecodeArgs),
    /// Exact TSP by an independent method.
    Oracle(OracleArgs),
    /// Write the binary program in LP format.
    EmitLp(EmitLpArgs),
    /// Audit an external 0/1 assignment, C4 included.
    Validate(ValidateArgs),
    /// Draw the instance with an optional selection or tour as SVG.
    Render(RenderArgs),
}

#[derive(Args)]
struct Output {
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ComplexArg {
    /// Candidate triangles: `full`, `delaunay` or `file:PATH`.
    #[arg(long, default_value = "full")]
    complex: String,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Coordinates are drawn from [0, range]^2.
    #[arg(long, default_value_t = 1000)]
    range: i64,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Tsplib,
    Json,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    #[command(flatten)]
    complex: ComplexArg,
    /// Prune with the lower bound (default).
    #[arg(long, overrides_with = "no_bound")]
    bound: bool,
    #[arg(long)]
    no_bound: bool,
    #[arg(long)]
    node_limit: Option<u64>,
    #[command(flatten)]
    output: Output,
    /// Also draw the best selection.
    #[arg(long)]
    svg_out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    selection: PathBuf,
    #[command(flatten)]
    complex: ComplexArg,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct EncodeArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Whitespace-separated city indices.
    #[arg(long)]
    tour: PathBuf,
    /// Position in the tour of the fan apex.
    #[arg(long, default_value_t = 0)]
    apex: usize,
    #[command(flatten)]
    complex: ComplexArg,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct DecodeArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    selection: PathBuf,
    #[command(flatten)]
    complex: ComplexArg,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    method: Method,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Method {
    /// Brute force up to its size limit, Held-Karp above.
    Auto,
    BruteForce,
    HeldKarp,
}

#[derive(Args)]
struct EmitLpArgs {
    #[arg(long)]
    instance: PathBuf,
    #[command(flatten)]
    complex: ComplexArg,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    instance: PathBuf,
    /// `name value` lines or a JSON object.
    #[arg(long)]
    assignment: PathBuf,
    #[command(flatten)]
    complex: ComplexArg,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    selection: Option<PathBuf>,
    #[arg(long)]
    tour: Option<PathBuf>,
    #[command(flatten)]
    complex: ComplexArg,
    #[arg(long)]
    svg_out: Option<PathBuf>,
}

/// Finished without an IO or usage error; `Rejected` maps to exit code 1.
enum Outcome {
    Done,
    Rejected,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Rejected) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Gen(a) => gen(a),
        Command::Solve(a) => solve(a),
        Command::Verify(a) => verify(a),
        Command::Encode(a) => encode(a),
        Command::Decode(a) => decode(a),
        Command::Oracle(a) => oracle(a),
        Command::EmitLp(a) => emit(a),
        Command::Validate(a) => validate(a),
        Command::Render(a) => render_cmd(a),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_json(out: &Option<PathBuf>, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_out(out, &text)
}

/// JSON when the text starts with `{`, TSPLIB otherwise.
fn load_instance(path: &Path) -> Result<Instance> {
    let text = read(path)?;
    let inst = if text.trim_start().starts_with('{') {
        serde_json::from_str(&text).map_err(Error::from)
    } else {
        parse_tsplib(&text)
    };
    inst.with_context(|| format!("loading instance {}", path.display()))
}

fn load_complex(mode: &str, inst: &Instance) -> Result<Complex> {
    let n = inst.n();
    let complex = match mode {
        "full" => full_complex(n)?,
        "delaunay" => restricted_complex(n, &delaunay_candidates(inst)?)?,
        _ => match mode.strip_prefix("file:") {
            Some(p) => restricted_complex(n, &parse_candidates(&read(Path::new(p))?)?)?,
            None => bail!("unknown complex mode '{mode}' (expected full, delaunay or file:PATH)"),
        },
    };
    Ok(complex)
}

fn load_selection_file(path: &Path) -> Result<SelectionFile> {
    serde_json::from_str(&read(path)?).with_context(|| format!("parsing selection {}", path.display()))
}

fn load_tour(path: &Path, n: usize) -> Result<Tour> {
    let order: Vec<usize> = read(path)?
        .split_whitespace()
        .map(|t| t.parse().with_context(|| format!("bad city index '{t}'")))
        .collect::<Result<_>>()?;
    Ok(Tour::with_n(order, n)?)
}

fn gen(a: GenArgs) -> Result<Outcome> {
    let inst = Instance::random_euclidean(a.n, a.seed, a.range)?;
    let json = match a.format {
        Some(f) => matches!(f, Format::Json),
        None => a.output.out.as_ref().is_some_and(|p| p.extension().is_some_and(|e| e == "json")),
    };
    if json {
        write_json(&a.output.out, &inst)?;
    } else {
        write_out(&a.output.out, &inst.to_tsplib(&format!("rand{}_{}", a.n, a.seed)))?;
    }
    Ok(Outcome::Done)
}

fn solve(a: SolveArgs) -> Result<Outcome> {
    let inst = load_instance(&a.instance)?;
    let complex = load_complex(&a.complex.complex, &inst)?;
    let opts = SolveOptions { use_bound: !a.no_bound, node_limit: a.node_limit };
    let report = solve_exact(&inst, &complex, opts)?;
    write_json(&a.output.out, &report)?;
    if let Some(svg_path) = &a.svg_out {
        let sel = cgstp_core::induce_selection(&complex, report.best_k.iter().copied())?;
        let scene = render::Scene {
            instance: &inst,
            triangles: &report.best_k,
            highlight: boundary(&sel).into_iter().collect(),
            tour: None,
        };
        write_out(&Some(svg_path.clone()), &render::svg(&scene)?)?;
    }
    Ok(match report.status {
        SolveStatus::Infeasible => Outcome::Rejected,
        _ => Outcome::Done,
    })
}

#[derive(Serialize)]
struct VerifyReport {
    verdict: Verdict,
    objective: ObjectiveBreakdown,
    /// `-net == boundary length`; null when C1 or C2 fails.
    boundary_identity: Option<bool>,
    tour: Option<Tour>,
}

fn verify(a: VerifyArgs) -> Result<Outcome> {
    let inst = load_instance(&a.instance)?;
    let complex = load_complex(&a.complex.complex, &inst)?;
    let sel = load_selection_file(&a.selection)?.to_selection(&complex)?;
    let verdict = check_admissible(&sel);
    let boundary_identity = match check_boundary_identity(&sel, &inst) {
        Ok(b) => Some(b),
        Err(Error::IdentityPrecondition(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let tour = if verdict.admissible { Some(decode_tour(&sel)?) } else { None };
    let admissible = verdict.admissible;
    let report = VerifyReport { verdict, objective: net_weight(&sel, &inst)?, boundary_identity, tour };
    write_json(&a.output.out, &report)?;
    Ok(if admissible { Outcome::Done } else { Outcome::Rejected })
}

fn encode(a: EncodeArgs) -> Result<Outcome> {
    let inst = load_instance(&a.instance)?;
    let complex = load_complex(&a.complex.complex, &inst)?;
    let tour = load_tour(&a.tour, inst.n())?;
    match fan_encode(&tour, a.apex, &complex) {
        Ok(sel) => {
            write_json(&a.output.out, &SelectionFile::from_selection(&sel))?;
            Ok(Outcome::Done)
        }
        Err(e @ Error::FanNotContained(_)) => {
            eprintln!("error: {e}");
            Ok(Outcome::Rejected)
        }
        Err(e) => Err(e.into()),
    }
}

fn decode(a: DecodeArgs) -> Result<Outcome> {
    let inst = load_instance(&a.instance)?;
    let complex = load_complex(&a.complex.complex, &inst)?;
    let sel = load_selection_file(&a.selection)?.to_selection(&complex)?;
    match decode_tour(&sel) {
        Ok(tour) => {
            write_out(&a.output.out, &format!("{tour}\n"))?;
            Ok(Outcome::Done)
        }
        Err(e @ Error::NotHamiltonian(_)) => {
            eprintln!("error: {e}");
            Ok(Outcome::Rejected)
        }
        Err(e) => Err(e.into()),
    }
}

#[derive(Serialize)]
struct OracleReport {
    method: Method,
    tour: Tour,
    length: i64,
}

fn oracle(a: OracleArgs) -> Result<Outcome> {
    let inst = load_instance(&a.instance)?;
    let method = match a.method {
        Method::Auto if inst.n() <= cgstp_core::solver::BRUTEFORCE_MAX_N => Method::BruteForce,
        Method::Auto => Method::HeldKarp,
        m => m,
    };
    let (tour, length) = match method {
        Method::HeldKarp => tsp_oracle_held_karp(&inst)?,
        _ => tsp_oracle_bruteforce(&inst)?,
    };
    debug_assert_eq!(tour_length(&tour, &inst)?, length);
    write_json(&a.output.out, &OracleReport { method, tour, length })?;
    Ok(Outcome::Done)
}

fn emit(a: EmitLpArgs) -> Result<Outcome> {
    let inst = load_instance(&a.instance)?;
    let complex = load_complex(&a.complex.complex, &inst)?;
    write_out(&a.output.out, &emit_lp(&inst, &complex)?)?;
    Ok(Outcome::Done)
}

fn validate(a: ValidateArgs) -> Result<Outcome> {
    let inst = load_instance(&a.instance)?;
    let complex = load_complex(&a.complex.complex, &inst)?;
    let assignment = parse_assignment(&read(&a.assignment)?)?;
    let report: ExternalReport = validate_external(&assignment, &inst, &complex)?;
    write_json(&a.output.out, &report)?;
    Ok(if report.verdict.admissible { Outcome::Done } else { Outcome::Rejected })
}

fn render_cmd(a: RenderArgs) -> Result<Outcome> {
    let inst = load_instance(&a.instance)?;
    let tour = a.tour.as_ref().map(|p| load_tour(p, inst.n())).transpose()?;
    let (triangles, highlight) = match &a.selection {
        Some(p) => {
            let complex = load_complex(&a.complex.complex, &inst)?;
            let sel = load_selection_file(p)?.to_selection(&complex)?;
            let edges: Vec<Edge> = boundary(&sel).into_iter().collect();
            (sel.triangles().iter().copied().collect(), edges)
        }
        None => (vec![], tour.as_ref().map(|t| t.edges().collect()).unwrap_or_default()),
    };
    let scene = render::Scene { instance: &inst, triangles: &triangles, highlight, tour: tour.as_ref() };
    write_out(&a.svg_out, &render::svg(&scene)?)?;
    Ok(Outcome::Done)
}
