//! `goodsets`: analyze point sets in Cartesian products and check the
//! counterexample family from the command line.
//!
//! Exit status: 0 when the analysis ran (a set that is not good is still a
//! result), 1 when a family check failed, 2 for usage, input and cap errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_traits::{One, Signed};
use serde_json::{json, Value};

use goodsets::analysis::{decompose, decompose_default, find_boundary, is_full};
use goodsets::components::{full_components, geodesic, related_components, ComponentsError};
use goodsets::family::{self, gen_family, FamilyError, FamilyInstance};
use goodsets::io;
use goodsets::linalg::{self, format_rational};
use goodsets::components::MAX_ENUMERATION_CAP;
use goodsets::{analyze_goodness, PointSet, DEFAULT_ENUMERATION_CAP};

#[derive(Parser)]
#[command(name = "goodsets", version, about = "Good sets, boundaries and full components")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Largest set the exhaustive searches will accept.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_CAP, value_parser = parse_cap)]
    cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Goodness, fullness, a boundary, and a dependence certificate if any.
    Analyze { file: PathBuf },
    /// Split a function on the set into one-variable parts.
    Decompose {
        file: PathBuf,
        #[arg(long)]
        function: PathBuf,
        /// Boundary coordinates and their pinned values; defaults to the
        /// canonical boundary pinned at zero.
        #[arg(long)]
        boundary: Option<PathBuf>,
    },
    /// Full components, computed twice by independent routes.
    Components { file: PathBuf },
    /// A smallest full subset containing two points (0-based indices).
    Geodesic {
        file: PathBuf,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
    },
    /// Generate and check the counterexample family.
    Family {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum)]
        emit: Option<Emit>,
        #[arg(long, value_enum)]
        verify: Option<Verify>,
        /// Remove the closing point before verifying (should fail).
        #[arg(long, hide = true)]
        drop_closing_point: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Points,
    Matrix,
    Inverse,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Verify {
    All,
    Fullness,
    Boundary,
    Blocks,
    Subsets,
    Geodesic,
    Rowsums,
}

/// A rendered result plus whether it counts as a verification failure.
struct Outcome {
    json: Value,
    text: String,
    failed: bool,
}

impl Outcome {
    fn ok(json: Value, text: String) -> Self {
        Self { json, text, failed: false }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("json")),
                Format::Text => print!("{}", out.text),
            }
            if out.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<ComponentsError>().is_some_and(|c| matches!(c, ComponentsError::SetTooLarge { .. })) {
                eprintln!("hint: pass a larger --cap (at most {MAX_ENUMERATION_CAP}) to enumerate bigger sets");
            }
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Analyze { file } => analyze(&load_set(file)?),
        Command::Decompose { file, function, boundary } => {
            run_decompose(&load_set(file)?, function, boundary.as_deref())
        }
        Command::Components { file } => components(&load_set(file)?, cli.cap),
        Command::Geodesic { file, from, to } => run_geodesic(&load_set(file)?, *from, *to, cli.cap),
        Command::Family { n, emit, verify, drop_closing_point } => {
            let mut inst = gen_family(*n as i64)?;
            if *drop_closing_point {
                inst = inst.without_closing_point();
            }
            match (emit, verify) {
                (Some(_), Some(_)) => bail!("--emit and --verify cannot be combined"),
                (_, Some(v)) => Ok(verify_family(&inst, *v, cli.cap)),
                (e, None) => emit_family(&inst, e.unwrap_or(Emit::Points)),
            }
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_set(path: &Path) -> Result<PointSet> {
    io::parse_point_set(&read(path)?).with_context(|| format!("invalid point set in {}", path.display()))
}

fn goodness_text(set: &PointSet) -> (Value, String, bool) {
    let report = analyze_goodness(set);
    let full = is_full(set).ok();
    let boundary = if report.is_good { find_boundary(set).ok() } else { None };
    let json = io::goodness_json(&report, boundary.as_ref(), full);
    let mut text = format!(
        "points: {}, coordinates: {}, rank: {}, kernel dimension: {}\ngood: {}\n",
        report.point_count,
        report.coordinate_count,
        report.rank,
        report.kernel_dim,
        yes(report.is_good)
    );
    if let Some(full) = full {
        text += &format!("full: {}\n", yes(full));
    }
    if let Some(b) = &boundary {
        text += &format!("boundary: {}\n", join(b.coords.iter().map(|c| c.to_string())));
    }
    if let Some(c) = &report.certificate {
        let mut relation = String::new();
        for (k, (i, w)) in c.weights.iter().enumerate() {
            let sign = if w.is_negative() { "-" } else if k > 0 { "+" } else { "" };
            let size = w.abs();
            let coef = if size.is_one() { String::new() } else { format!("{} ", format_rational(&size)) };
            relation += &format!("{}{sign} {coef}p{i}", if k > 0 { " " } else { "" });
        }
        text += &format!("dependence: {} = 0\n", relation.trim_start());
    }
    (json, text, report.is_good)
}

fn analyze(set: &PointSet) -> Result<Outcome> {
    let (json, text, _) = goodness_text(set);
    Ok(Outcome::ok(json, text))
}

/// For a set that is not good, the goodness report is the answer.
fn not_good(set: &PointSet) -> Option<Outcome> {
    let (json, text, good) = goodness_text(set);
    (!good).then(|| Outcome::ok(json, text))
}

fn run_decompose(set: &PointSet, function: &Path, boundary: Option<&Path>) -> Result<Outcome> {
    let f = io::parse_function(&read(function)?, set)
        .with_context(|| format!("invalid function in {}", function.display()))?;
    if let Some(out) = not_good(set) {
        return Ok(out);
    }
    let d = match boundary {
        Some(path) => {
            let (b, u) = io::parse_boundary(&read(path)?)
                .with_context(|| format!("invalid boundary in {}", path.display()))?;
            decompose(set, &f, &b, &u)?
        }
        None => decompose_default(set, &f)?,
    };
    let mut text = String::new();
    for axis in 1..=set.dimension() {
        let parts = d.axis(axis).map(|(c, v)| format!("{}={}", c.symbol(), format_rational(v)));
        text += &format!("u{axis}: {}\n", join(parts));
    }
    Ok(Outcome::ok(io::decomposition_json(&d, set.dimension()), text))
}

fn components(set: &PointSet, cap: usize) -> Result<Outcome> {
    if let Some(out) = not_good(set) {
        return Ok(out);
    }
    let full = full_components(set, cap)?;
    let related = related_components(set, cap)?;
    if full != related {
        bail!("full and related components disagree: {:?} vs {:?}", full.blocks, related.blocks);
    }
    let mut text = format!("{} components\n", full.len());
    for block in &full.blocks {
        text += &format!("{{{}}}\n", join(block.iter().map(usize::to_string)));
    }
    Ok(Outcome::ok(io::partition_json(&full), text))
}

fn run_geodesic(set: &PointSet, from: usize, to: usize, cap: usize) -> Result<Outcome> {
    for i in [from, to] {
        if i >= set.len() {
            bail!("point index {i} is out of range for {} points", set.len());
        }
    }
    let g = geodesic(set, set.point(from), set.point(to), cap)?;
    let text = match &g.subset {
        None => format!("no full subset contains points {from} and {to}\n"),
        Some(s) => format!(
            "geodesic: {{{}}} ({} points, {} other minimal witnesses, minimal: {})\n",
            join(s.iter().map(usize::to_string)),
            s.len(),
            g.alternatives(),
            yes(g.minimal)
        ),
    };
    Ok(Outcome::ok(io::geodesic_json(&g), text))
}

fn emit_family(inst: &FamilyInstance, emit: Emit) -> Result<Outcome> {
    match emit {
        Emit::Points => {
            let set = inst.full_set().unwrap_or(inst.prefix());
            let text = io::point_set_json(set);
            Ok(Outcome::ok(serde_json::from_str(&text)?, text))
        }
        Emit::Matrix | Emit::Inverse => {
            let reduced = family::reduced_matrix(inst)?;
            let m = if emit == Emit::Matrix {
                reduced.matrix
            } else {
                linalg::invert(&reduced.matrix)?
            };
            let json = io::matrix_json(&m);
            let text = (0..m.rows())
                .map(|r| join(m.row(r).iter().map(format_rational)) + "\n")
                .collect();
            Ok(Outcome::ok(json, text))
        }
    }
}

enum Status {
    Pass(Value),
    Fail(String),
    Skipped(String),
}

fn check<T>(result: Result<T, FamilyError>, describe: impl FnOnce(T) -> Value) -> Status {
    match result {
        Ok(r) => Status::Pass(describe(r)),
        Err(FamilyError::Components(ComponentsError::SetTooLarge { size, cap })) => {
            Status::Skipped(format!("{size} points exceed the enumeration cap {cap}"))
        }
        Err(FamilyError::FamilyTooSmall { needed, .. }) => Status::Skipped(format!("needs n >= {needed}")),
        Err(e) => Status::Fail(e.to_string()),
    }
}

fn verify_family(inst: &FamilyInstance, which: Verify, cap: usize) -> Outcome {
    let n = inst.n();
    let wanted = |v: Verify| which == Verify::All || which == v;
    let mut checks: Vec<(&str, Status)> = Vec::new();
    if wanted(Verify::Fullness) {
        checks.push((
            "fullness",
            check(family::verify_full_via_inverse(inst), |r| {
                json!({
                    "size": r.size,
                    "coordinatesMinusPoints": r.coordinates_minus_points,
                    "inverseFirstRow": r.inverse.row(0).iter().map(format_rational).collect::<Vec<_>>(),
                })
            }),
        ));
    }
    if wanted(Verify::Boundary) {
        checks.push((
            "boundary",
            check(family::verify_prefix_boundary(inst), |r| {
                json!({
                    "kernelDim": r.kernel_dim,
                    "oldCoordinates": r.old_coordinates,
                    "restrictedRank": r.restricted_rank,
                    "triplesScanned": r.exhaustive_checked,
                    "boundary": io::boundary_json(&r.boundary, None),
                })
            }),
        ));
    }
    if wanted(Verify::Blocks) {
        let blocks: Result<Vec<Value>, FamilyError> = (1..=n)
            .map(|m| {
                family::verify_block_properties(inst, m).map(|r| {
                    json!({
                        "block": r.m,
                        "newCoordinates": r.new_coordinates.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                        "subsets": r.subsets_checked,
                        "earlierPoints": r.singletons_checked,
                    })
                })
            })
            .collect();
        checks.push(("blocks", check(blocks, Value::Array)));
    }
    if wanted(Verify::Subsets) {
        checks.push((
            "subsets",
            check(family::verify_no_full_subsets(inst, cap), |r| {
                json!({ "points": r.points, "fullSubsets": r.full_subsets })
            }),
        ));
    }
    if wanted(Verify::Geodesic) {
        checks.push((
            "geodesic",
            check(family::verify_geodesic(inst, cap), |r| {
                json!({ "from": r.from, "to": r.to, "size": r.size, "alternatives": r.alternatives })
            }),
        ));
    }
    if wanted(Verify::Rowsums) {
        // the fit needs at least two sizes of M_n
        let n_max = n.max(2);
        let status = if inst.full_set().map(PointSet::len) != Some(5 * n + 4) {
            Status::Skipped("needs the closing point".into())
        } else {
            check(family::row_sum_bound_report(n_max), |fit| {
                let rows = |v: &Vec<Vec<_>>| -> Vec<Vec<String>> {
                    v.iter().map(|r| r.iter().map(format_rational).collect()).collect()
                };
                let exceeded = fit
                    .block_sums
                    .iter()
                    .flat_map(|row| row.iter().enumerate())
                    .any(|(m, s)| *s > fit.bound(m + 1));
                json!({
                    "nMax": fit.n_max,
                    "c1": format_rational(&fit.c1),
                    "c2": format_rational(&fit.c2),
                    "stable": fit.stable,
                    "boundHolds": !exceeded,
                    "blockSums": rows(&fit.block_sums),
                    "signedBlockSums": rows(&fit.signed_block_sums),
                    "rowCoordinates": fit.row_coordinates.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                })
            })
        };
        checks.push(("rowsums", status));
    }

    let mut failed = false;
    let mut text = format!("family n = {n}\n");
    let mut items = Vec::new();
    for (name, status) in checks {
        let (label, json) = match status {
            Status::Pass(detail) => ("pass", json!({ "name": name, "status": "pass", "detail": detail })),
            Status::Fail(why) => {
                failed = true;
                ("FAIL", json!({ "name": name, "status": "fail", "reason": why }))
            }
            Status::Skipped(why) => ("skipped", json!({ "name": name, "status": "skipped", "reason": why })),
        };
        text += &format!("{name}: {label}");
        if let Some(reason) = json["reason"].as_str() {
            text += &format!(" ({reason})");
        }
        text.push('\n');
        items.push(json);
    }
    Outcome {
        json: json!({ "n": n, "passed": !failed, "checks": items }),
        text,
        failed,
    }
}

fn parse_cap(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(k) if (1..=MAX_ENUMERATION_CAP).contains(&k) => Ok(k),
        _ => Err(format!("expected an integer from 1 to {MAX_ENUMERATION_CAP}")),
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn join(items: impl Iterator<Item = String>) -> String {
    items.collect::<Vec<_>>().join(", ")
}

