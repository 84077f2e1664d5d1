//! The `tomo` command line.
//!
//! Every row and column index printed here is 1-based and refers to the
//! caller's original ordering of the line sums.

use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::construct::{diverge_with, BatchCase, DivergeOptions, DivergentPair, RowChoicePolicy};
use crate::error::TomoError;
use crate::image::BinaryImage;
use crate::neighbour::{build_neighbour, neighbour_column_sums};
use crate::oracle::{self, enumeration_report, make_family, FamilyTag};
use crate::pairs::{analyze_pairs, Condition, FinalRule};
use crate::profile::{ProfileSpec, ProjectionProfile};

#[derive(Debug, Parser)]
#[command(
    name = "tomo",
    version,
    about = "Ambiguity analysis for binary images given by row and column sums"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub io: IoArgs,
}

#[derive(Debug, Clone, Args)]
pub struct IoArgs {
    /// Input file (`-` for stdin). Profiles are `{"rows":[...],"cols":[...]}`.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,

    /// Inline input instead of a file.
    #[arg(long, global = true, conflicts_with = "input")]
    pub json: Option<String>,

    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,

    /// Seed for a random row choice when building the first image (diverge).
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Maximum number of solutions to enumerate.
    #[arg(long, global = true, default_value_t = oracle::DEFAULT_CAP)]
    pub cap: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Pbm,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report whether any image has these line sums.
    Check,
    /// Print the left-justified neighbour image.
    Neighbour,
    /// Print alpha and the neighbour's column sums.
    Alpha,
    /// Print the column pairs, their groups and final columns.
    Pairs,
    /// Construct two solutions differing in at least 2*alpha + 2 cells.
    Diverge,
    /// Count all solutions and their largest pairwise difference.
    Enumerate,
    /// Enumerate and check every bound.
    Verify,
    /// Emit a profile from a known instance family.
    Generate {
        #[command(subcommand)]
        family: FamilyCommand,
    },
    /// Convert a `#`/`.` grid (or PBM) to PBM.
    Render,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum FamilyCommand {
    /// (s+1) x (s+1) with every line sum 1.
    Sharp { s: usize },
    /// n x n with every line sum k, k <= n/2.
    Uniform { n: usize, k: usize },
}

#[derive(Debug)]
pub enum CliError {
    /// Well-formed input the requested operation cannot be applied to.
    Domain(TomoError),
    /// Unreadable or malformed input.
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Input(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Domain(e) => write!(f, "{e}"),
            CliError::Input(msg) => f.write_str(msg),
        }
    }
}

impl From<TomoError> for CliError {
    fn from(e: TomoError) -> Self {
        if e.is_domain() {
            CliError::Domain(e)
        } else {
            CliError::Input(e.to_string())
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read_input(io: &IoArgs, stdin: &mut dyn Read) -> CliResult<String> {
    if let Some(inline) = &io.json {
        return Ok(inline.clone());
    }
    let mut buf = String::new();
    match io.input.as_deref() {
        Some(path) if path.as_os_str() != "-" => {
            buf = std::fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        }
        _ => {
            stdin
                .read_to_string(&mut buf)
                .map_err(|e| CliError::Input(format!("cannot read stdin: {e}")))?;
        }
    }
    Ok(buf)
}

fn parse_profile(text: &str) -> CliResult<ProjectionProfile> {
    serde_json::from_str::<ProfileSpec>(text)
        .map(ProjectionProfile::from)
        .map_err(|e| CliError::Input(format!("invalid profile JSON: {e}")))
}

fn parse_grid(text: &str) -> CliResult<BinaryImage> {
    let parsed = if text.trim_start().starts_with("P1") {
        BinaryImage::parse_pbm(text)
    } else {
        BinaryImage::parse_text(text)
    };
    parsed.map_err(|e| CliError::Input(e.to_string()))
}

fn require_consistent(p: &ProjectionProfile) -> CliResult<()> {
    if p.is_consistent() {
        Ok(())
    } else {
        Err(CliError::Domain(TomoError::Inconsistent))
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn render_image(img: &BinaryImage, format: Format) -> String {
    match format {
        Format::Text => img.to_text(),
        Format::Pbm => img.to_pbm(),
        Format::Json => to_json(img),
    }
}

fn list(values: &[usize]) -> String {
    let parts: Vec<String> = values.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

/// Execute one command and return what it prints on stdout.
pub fn run(cli: &Cli, stdin: &mut dyn Read) -> CliResult<String> {
    let io = &cli.io;
    match &cli.command {
        Command::Generate { family } => {
            return generate(*family, io.format.unwrap_or(Format::Text))
        }
        Command::Render => {
            let img = parse_grid(&read_input(io, stdin)?)?;
            return Ok(render_image(&img, io.format.unwrap_or(Format::Pbm)));
        }
        _ => {}
    }
    let profile = parse_profile(&read_input(io, stdin)?)?;
    let format = io.format.unwrap_or(Format::Text);
    match &cli.command {
        Command::Check => check(&profile, format),
        Command::Neighbour => {
            require_consistent(&profile)?;
            let f1 = profile.to_original(&build_neighbour(&profile))?;
            Ok(render_image(&f1, format))
        }
        Command::Alpha => alpha(&profile, format),
        Command::Pairs => pairs(&profile, format),
        Command::Diverge => {
            let opts = DivergeOptions {
                f2_policy: io
                    .seed
                    .map_or(RowChoicePolicy::Lowest, RowChoicePolicy::Seeded),
                ..DivergeOptions::default()
            };
            let pair = diverge_with(&profile, &opts)?;
            diverge_output(&profile, &pair, format)
        }
        Command::Enumerate => enumerate(&profile, io.cap, format),
        Command::Verify => verify(&profile, io.cap, format),
        Command::Generate { .. } | Command::Render => unreachable!("handled above"),
    }
}

#[derive(Serialize)]
struct CheckReport {
    consistent: bool,
    total: usize,
}

fn check(p: &ProjectionProfile, format: Format) -> CliResult<String> {
    let report = CheckReport {
        consistent: p.is_consistent(),
        total: p.total(),
    };
    Ok(match format {
        Format::Json => to_json(&report),
        _ => format!(
            "{}\n",
            if report.consistent {
                "consistent"
            } else {
                "inconsistent"
            }
        ),
    })
}

#[derive(Serialize)]
struct AlphaReport {
    alpha: usize,
    /// Canonical (descending) column sums of the neighbour.
    v: Vec<usize>,
    /// Canonical (descending) given column sums.
    c: Vec<usize>,
}

fn alpha(p: &ProjectionProfile, format: Format) -> CliResult<String> {
    require_consistent(p)?;
    let na = neighbour_column_sums(p);
    let report = AlphaReport {
        alpha: na.alpha,
        v: na.v,
        c: na.c,
    };
    Ok(match format {
        Format::Json => to_json(&report),
        _ => format!(
            "alpha = {}\nV = {}\nC = {}\n",
            report.alpha,
            list(&report.v),
            list(&report.c)
        ),
    })
}

#[derive(Serialize)]
struct GroupReport {
    source: usize,
    target: usize,
    multiplicity: usize,
    #[serde(rename = "final")]
    final_column: usize,
    rule: FinalRule,
}

fn group_reports(p: &ProjectionProfile) -> CliResult<Vec<GroupReport>> {
    require_consistent(p)?;
    let pa = analyze_pairs(&neighbour_column_sums(p)).map_err(|e| match e {
        TomoError::EmptyAmbiguity => CliError::Domain(TomoError::NotAmbiguous),
        other => other.into(),
    })?;
    let col = |j: usize| p.original_col(j) + 1;
    Ok(pa
        .groups
        .iter()
        .map(|g| GroupReport {
            source: col(g.pair.source),
            target: col(g.pair.target),
            multiplicity: g.multiplicity,
            final_column: col(g.final_column().expect("designated")),
            rule: g.rule.expect("designated"),
        })
        .collect())
}

fn pairs(p: &ProjectionProfile, format: Format) -> CliResult<String> {
    let groups = group_reports(p)?;
    Ok(match format {
        Format::Json => to_json(&groups),
        _ => {
            let mut out = String::new();
            for (h, g) in groups.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "P{}: {} -> {} x{}  final {}",
                    h + 1,
                    g.source,
                    g.target,
                    g.multiplicity,
                    g.final_column
                );
            }
            out
        }
    })
}

#[derive(Serialize)]
struct MoveReport {
    row: usize,
    source: usize,
    target: usize,
    group: usize,
}

#[derive(Serialize)]
struct BatchReport {
    group: usize,
    source: usize,
    target: usize,
    multiplicity: usize,
    final_column: usize,
    condition: Condition,
    case: BatchCase,
    r: Vec<usize>,
    r_prime: Vec<usize>,
    l0: Option<usize>,
    r_double_prime: Vec<usize>,
}

#[derive(Serialize)]
struct ColumnReport {
    column: usize,
    difference: usize,
    required: usize,
}

#[derive(Serialize)]
struct Trace {
    f2_moves: Vec<MoveReport>,
    f3_batches: Vec<BatchReport>,
    f3_moves: Vec<MoveReport>,
    columns: Vec<ColumnReport>,
}

#[derive(Serialize)]
struct DivergeReport {
    alpha: usize,
    guarantee: usize,
    diff_size: usize,
    f2: BinaryImage,
    f3: BinaryImage,
    trace: Trace,
}

fn diverge_report(p: &ProjectionProfile, d: &DivergentPair) -> CliResult<DivergeReport> {
    let row = |i: usize| p.original_row(i) + 1;
    let col = |j: usize| p.original_col(j) + 1;
    let rows = |v: &[usize]| {
        let mut out: Vec<usize> = v.iter().map(|&i| row(i)).collect();
        out.sort_unstable();
        out
    };
    let moves = |ms: &[crate::construct::MoveRecord]| {
        ms.iter()
            .map(|m| MoveReport {
                row: row(m.row),
                source: col(m.source),
                target: col(m.target),
                group: m.batch + 1,
            })
            .collect()
    };
    Ok(DivergeReport {
        alpha: d.alpha,
        guarantee: d.guarantee,
        diff_size: d.diff.size,
        f2: p.to_original(&d.f2)?,
        f3: p.to_original(&d.f3)?,
        trace: Trace {
            f2_moves: moves(&d.f2_moves),
            f3_batches: d
                .f3_batches
                .iter()
                .map(|b| BatchReport {
                    group: b.batch + 1,
                    source: col(b.pair.source),
                    target: col(b.pair.target),
                    multiplicity: b.multiplicity,
                    final_column: col(b.final_column),
                    condition: b.condition,
                    case: b.case,
                    r: rows(&b.r),
                    r_prime: rows(&b.r_prime),
                    l0: b.l0.map(row),
                    r_double_prime: rows(&b.r_double_prime),
                })
                .collect(),
            f3_moves: moves(&d.f3_moves),
            columns: d
                .accounting
                .iter()
                .map(|a| ColumnReport {
                    column: col(a.column),
                    difference: a.difference,
                    required: a.required,
                })
                .collect(),
        },
    })
}

fn diverge_output(p: &ProjectionProfile, d: &DivergentPair, format: Format) -> CliResult<String> {
    let report = diverge_report(p, d)?;
    Ok(match format {
        Format::Json => to_json(&report),
        Format::Pbm => format!("{}{}", report.f2.to_pbm(), report.f3.to_pbm()),
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "alpha = {}", report.alpha);
            let _ = writeln!(out, "guarantee = {}", report.guarantee);
            let _ = writeln!(out, "symmetric difference = {}", report.diff_size);
            let _ = write!(out, "\nF2:\n{}\nF3:\n{}\n", report.f2, report.f3);
            let _ = writeln!(out, "F2 moves:");
            for m in &report.trace.f2_moves {
                let _ = writeln!(out, "  row {}: {} -> {}", m.row, m.source, m.target);
            }
            let _ = writeln!(out, "F3 batches:");
            for b in &report.trace.f3_batches {
                let _ = write!(
                    out,
                    "  P{}: {} -> {} x{}, final {}, condition {:?}, {:?}, R = {}",
                    b.group,
                    b.source,
                    b.target,
                    b.multiplicity,
                    b.final_column,
                    b.condition,
                    b.case,
                    list(&b.r)
                );
                if let Some(l0) = b.l0 {
                    let _ = write!(out, ", R' = {}, l0 = {l0}", list(&b.r_prime));
                }
                let _ = writeln!(out, ", moved {}", list(&b.r_double_prime));
            }
            let _ = writeln!(out, "column differences:");
            for c in &report.trace.columns {
                let _ = writeln!(
                    out,
                    "  column {}: {} (needs {})",
                    c.column, c.difference, c.required
                );
            }
            out
        }
    })
}

#[derive(Serialize)]
struct EnumerateReport {
    solution_count: usize,
    max_pairwise_symdiff: usize,
    alpha: usize,
    truncated: bool,
}

fn enumerate(p: &ProjectionProfile, cap: usize, format: Format) -> CliResult<String> {
    let r = enumeration_report(p, cap)?;
    let report = EnumerateReport {
        solution_count: r.solution_count,
        max_pairwise_symdiff: r.max_pairwise_symdiff,
        alpha: r.alpha,
        truncated: r.truncated,
    };
    Ok(match format {
        Format::Json => to_json(&report),
        _ => format!(
            "solutions = {}{}\nmax symmetric difference = {}\nalpha = {}\n",
            report.solution_count,
            if report.truncated { " (truncated)" } else { "" },
            report.max_pairwise_symdiff,
            report.alpha
        ),
    })
}

fn verify(p: &ProjectionProfile, cap: usize, format: Format) -> CliResult<String> {
    let report = oracle::audit(p, cap)?;
    let out = match format {
        Format::Json => to_json(&report),
        _ => {
            let mut out = format!(
                "solutions = {}\nmax symmetric difference = {}\nalpha = {}\n",
                report.solution_count, report.max_pairwise_symdiff, report.alpha
            );
            for c in &report.bound_checks {
                let _ = writeln!(
                    out,
                    "{:<14} bound {:>10.3}  {}",
                    format!("{:?}", c.kind),
                    c.bound,
                    if c.satisfied { "ok" } else { "VIOLATED" }
                );
            }
            out
        }
    };
    if report.all_satisfied() {
        Ok(out)
    } else {
        Err(CliError::Domain(TomoError::ConstructionInvariantViolated(
            format!("bound violated: {:?}\n{out}", report.violations()),
        )))
    }
}

fn generate(family: FamilyCommand, format: Format) -> CliResult<String> {
    let tag = match family {
        FamilyCommand::Sharp { s } => FamilyTag::SharpAllOnes { s },
        FamilyCommand::Uniform { n, k } => FamilyTag::UniformK { n, k },
    };
    let fam = make_family(tag)?;
    Ok(match format {
        Format::Json => to_json(&fam),
        _ => {
            let mut s = serde_json::to_string(&fam.profile.spec()).expect("profile serializes");
            s.push('\n');
            s
        }
    })
}

/// Parse `args`, run, and return `(exit code, stdout, stderr)`.
pub fn run_from_args<I, T>(args: I, stdin: &mut dyn Read) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                (0, text, String::new())
            } else {
                (2, String::new(), text)
            };
        }
    };
    match run(&cli, stdin) {
        Ok(out) => (0, out, String::new()),
        Err(e) => (e.exit_code(), String::new(), format!("error: {e}\n")),
    }
}
