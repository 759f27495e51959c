//! Subcommand implementations. Each returns the process exit status and
//! writes human-readable output to the given sink.

use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gagc_core::codes::sampling_seed;
use gagc_core::constructions::{
    construct_elliptic, construct_hyper_elliptic, construct_line, construct_t3, construct_t7, embed,
    line_generic_eval_set, search_params, verify_code, Construction, ConstructionError, ConstructionReport,
    DistanceChoice, MdsChoice, T5Variant, T7Case, T7Params, Theorem, TheoremFilter, VerifyOptions,
};
use gagc_core::gf::{make_field, Fe, FieldCtx};

use crate::io::{write_text, IoError, MatrixFile};
use crate::selftest::{run_selftest, Level};

/// Exit statuses.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "gagc",
    version,
    about = "Construct and verify Galois self-orthogonal AG codes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a code from one of the constructions and verify it.
    Construct(ConstructArgs),
    /// Re-check a matrix file.
    Verify(VerifyArgs),
    /// Extend a GRS-form matrix file by one row.
    Embed(EmbedArgs),
    /// List admissible parameters for a field.
    Search(SearchArgs),
    /// Run the invariant suites.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TheoremArg {
    T3,
    T5a,
    T5b,
    T6,
    T7,
    Line,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Auto,
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Table,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    /// MDS check mode.
    #[arg(long, value_enum)]
    pub mds_mode: Option<ModeArg>,
    /// Distance check mode for non-MDS codes.
    #[arg(long, value_enum, default_value = "auto")]
    pub distance_mode: ModeArg,
    /// Subsets or codewords drawn by the sampled modes.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
}

impl CheckArgs {
    fn apply(&self, opts: &mut VerifyOptions) {
        opts.mds = match self.mds_mode.unwrap_or(ModeArg::Auto) {
            ModeArg::Auto => MdsChoice::Auto,
            ModeArg::Exhaustive => MdsChoice::Exhaustive,
            ModeArg::Sampled => MdsChoice::Sampled { count: self.samples },
        };
        opts.distance = match self.distance_mode {
            ModeArg::Auto => DistanceChoice::Auto,
            ModeArg::Exhaustive => DistanceChoice::Exhaustive,
            ModeArg::Sampled => DistanceChoice::Sampled { samples: self.samples },
        };
    }
}

#[derive(Debug, Clone, Args)]
pub struct ConstructArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub h: u32,
    #[arg(long)]
    pub e: u32,
    #[arg(long, value_enum)]
    pub theorem: TheoremArg,
    /// Hermitian evaluation-set case, 1 to 6.
    #[arg(long)]
    pub case: Option<u32>,
    #[arg(long)]
    pub t: Option<u32>,
    /// Number of x-coordinates (t5, t6).
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub k: u64,
    /// Subfield degree for Hermitian case 1.
    #[arg(long)]
    pub a: Option<u32>,
    /// Subspace dimension for Hermitian case 1.
    #[arg(long)]
    pub w: Option<u32>,
    /// Add zero to the evaluation set (Hermitian cases 4 to 6).
    #[arg(long)]
    pub zero: bool,
    #[arg(long)]
    pub r: Option<u64>,
    #[arg(long)]
    pub x1: Option<u64>,
    #[arg(long)]
    pub x2: Option<u64>,
    #[arg(long)]
    pub m: Option<u64>,
    /// Comma-separated node encodings for `--theorem line`.
    #[arg(long, value_delimiter = ',')]
    pub nodes: Vec<u32>,
    /// Matrix file to write.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Report JSON to write.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[command(flatten)]
    pub checks: CheckArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Galois parameter; defaults to the one in the header.
    #[arg(long)]
    pub e: Option<u32>,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[command(flatten)]
    pub checks: CheckArgs,
}

#[derive(Debug, Clone, Args)]
pub struct EmbedArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub e: Option<u32>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[command(flatten)]
    pub checks: CheckArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub h: u32,
    #[arg(long)]
    pub e: u32,
    /// all, t3, t5, t6, t7 or embed.
    #[arg(long, default_value = "all")]
    pub theorem: TheoremFilter,
    #[arg(long, value_enum, default_value = "table")]
    pub format: FormatArg,
}

#[derive(Debug, Clone, Args)]
pub struct SelftestArgs {
    #[arg(long, value_enum, default_value = "quick")]
    pub level: Level,
}

pub fn run(cli: Cli, out: &mut dyn Write) -> i32 {
    match cli.command {
        Command::Construct(a) => cmd_construct(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Embed(a) => cmd_embed(&a, out),
        Command::Search(a) => cmd_search(&a, out),
        Command::Selftest(a) => run_selftest(a.level, out),
    }
}

fn construction_exit(err: &ConstructionError, out: &mut dyn Write) -> i32 {
    if err.is_precondition() {
        let _ = writeln!(out, "error: {err}");
        EXIT_PRECONDITION
    } else {
        let _ = writeln!(out, "verification error: {err}");
        EXIT_FAIL
    }
}

fn io_exit(err: &IoError, out: &mut dyn Write) -> i32 {
    let _ = writeln!(out, "error: {err}");
    EXIT_IO
}

fn field(p: u64, h: u32, out: &mut dyn Write) -> Result<Arc<FieldCtx>, i32> {
    make_field(p, h).map(Arc::new).map_err(|err| {
        let _ = writeln!(out, "error: {err}");
        EXIT_PRECONDITION
    })
}

fn require<T>(v: Option<T>, flag: &str, theorem: &str) -> Result<T, ConstructionError> {
    v.ok_or_else(|| ConstructionError::Precondition(format!("{theorem} needs --{flag}")))
}

fn print_report(report: &ConstructionReport, out: &mut dyn Write) {
    let theorem = report.theorem.map(|t| t.to_string()).unwrap_or_else(|| "loaded".into());
    let bound = report
        .design_distance_bound
        .map(|d| format!(" design distance {d}"))
        .unwrap_or_default();
    let _ = writeln!(
        out,
        "{theorem} GF({}^{}) e={} [{},{}]{bound}",
        report.field.p, report.field.h, report.e, report.length, report.dimension
    );
    let c = &report.checks;
    for (name, check) in [
        ("galois_so", &c.galois_so),
        ("dimension", &c.dimension),
        ("mds", &c.mds),
        ("criterion", &c.criterion),
    ] {
        let verdict = serde_json::to_value(check.verdict).expect("verdict serializes");
        let _ = writeln!(
            out,
            "  {name:<10} {:<12} {} ({} ms){}",
            verdict.as_str().unwrap_or_default(),
            check.mode,
            check.millis,
            check.note.as_ref().map(|n| format!(" {n}")).unwrap_or_default()
        );
    }
    let _ = writeln!(out, "  result     {}", if report.passed() { "pass" } else { "fail" });
}

/// Writes the optional artifacts and maps the report to an exit status.
fn finish(
    report: &ConstructionReport,
    file: Option<(&MatrixFile, &Option<PathBuf>)>,
    report_path: &Option<PathBuf>,
    out: &mut dyn Write,
) -> i32 {
    print_report(report, out);
    if let Some((m, Some(path))) = file {
        if let Err(err) = m.write(path) {
            return io_exit(&err, out);
        }
    }
    if let Some(path) = report_path {
        if let Err(err) = write_text(path, &(report.to_json() + "\n")) {
            return io_exit(&err, out);
        }
    }
    if report.passed() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn build(a: &ConstructArgs, ctx: &Arc<FieldCtx>, opts: &VerifyOptions) -> Result<Construction, ConstructionError> {
    match a.theorem {
        TheoremArg::T3 => construct_t3(ctx, a.e, require(a.t, "t", "t3")?, a.k, opts),
        TheoremArg::T5a | TheoremArg::T5b => {
            let variant = if a.theorem == TheoremArg::T5a {
                T5Variant::U1
            } else {
                T5Variant::U2
            };
            let n = require(a.n, "n", "t5")?;
            construct_elliptic(ctx, a.e, variant, n as usize, a.k, opts)
        }
        TheoremArg::T6 => construct_hyper_elliptic(ctx, a.e, require(a.n, "n", "t6")?, a.k, opts),
        TheoremArg::T7 => {
            let case = match require(a.case, "case", "t7")? {
                1 => T7Case::SubspaceCosets {
                    a: require(a.a, "a", "t7 case 1")?,
                    w: require(a.w, "w", "t7 case 1")?,
                    t: require(a.t, "t", "t7 case 1")?,
                },
                2 => T7Case::TraceFibers {
                    t: require(a.t, "t", "t7 case 2")?,
                },
                3 => T7Case::CyclotomicCosets {
                    t: require(a.t, "t", "t7 case 3")?,
                },
                4 => T7Case::NormFibers {
                    t: require(a.t, "t", "t7 case 4")?,
                    zero: a.zero,
                },
                5 => T7Case::CyclicProducts {
                    x1: require(a.x1, "x1", "t7 case 5")?,
                    x2: require(a.x2, "x2", "t7 case 5")?,
                    r: require(a.r, "r", "t7 case 5")?,
                    zero: a.zero,
                },
                6 => T7Case::SubgroupCosets {
                    m: require(a.m, "m", "t7 case 6")?,
                    r: require(a.r, "r", "t7 case 6")?,
                    zero: a.zero,
                },
                c => return Err(ConstructionError::Precondition(format!("case must be 1..6, got {c}"))),
            };
            construct_t7(ctx, T7Params { e: a.e, case }, a.k, opts)
        }
        TheoremArg::Line => {
            let nodes = a.nodes.iter().map(|&x| Fe(x)).collect();
            let set = line_generic_eval_set(ctx, nodes)?;
            construct_line(ctx, set, a.k, a.e, Theorem::LineGeneric, opts)
        }
    }
}

pub fn cmd_construct(a: &ConstructArgs, out: &mut dyn Write) -> i32 {
    let ctx = match field(a.p, a.h, out) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let mut opts = VerifyOptions::new(a.e, sampling_seed());
    a.checks.apply(&mut opts);
    let c = match build(a, &ctx, &opts) {
        Ok(c) => c,
        Err(err) => return construction_exit(&err, out),
    };
    let file = MatrixFile::from_code(&c.code, a.e, c.report.design_distance_bound);
    finish(&c.report, Some((&file, &a.out)), &a.report, out)
}

pub fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> i32 {
    let m = match MatrixFile::read(&a.input) {
        Ok(m) => m,
        Err(err) => return io_exit(&err, out),
    };
    let e = a.e.unwrap_or(m.e);
    let code = m.code();
    let mut opts = VerifyOptions::new(e, sampling_seed());
    a.checks.apply(&mut opts);
    opts.expect_mds = m.grs.is_some() || a.checks.mds_mode.is_some();
    opts.design_bound = m.bound;
    let checks = match verify_code(&code, &opts) {
        Ok(c) => c,
        Err(err) => return construction_exit(&err, out),
    };
    let mut params = serde_json::Map::new();
    params.insert("input".into(), a.input.display().to_string().into());
    let report = ConstructionReport {
        field: gagc_core::constructions::FieldInfo::of(&m.ctx),
        e,
        theorem: None,
        params,
        length: code.n(),
        dimension: code.k(),
        design_distance_bound: m.bound.or(opts.expect_mds.then(|| code.n() + 1 - code.k())),
        divisors: None,
        checks,
        seed: opts.seed,
    };
    finish(&report, None, &a.report, out)
}

pub fn cmd_embed(a: &EmbedArgs, out: &mut dyn Write) -> i32 {
    let m = match MatrixFile::read(&a.input) {
        Ok(m) => m,
        Err(err) => return io_exit(&err, out),
    };
    if m.grs.is_none() {
        let _ = writeln!(
            out,
            "error: precondition failed: input has no alpha=/v= GRS description"
        );
        return EXIT_PRECONDITION;
    }
    let e = a.e.unwrap_or(m.e);
    let mut opts = VerifyOptions::new(e, sampling_seed());
    a.checks.apply(&mut opts);
    let emb = match embed(&m.code(), e, &opts) {
        Ok(x) => x,
        Err(err) => return construction_exit(&err, out),
    };
    let _ = writeln!(out, "embedding case {}", emb.case as u8);
    let file = MatrixFile::from_code(&emb.code, e, emb.report.design_distance_bound);
    finish(&emb.report, Some((&file, &a.out)), &a.report, out)
}

pub fn cmd_search(a: &SearchArgs, out: &mut dyn Write) -> i32 {
    let ctx = match field(a.p, a.h, out) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let rows = search_params(&ctx, a.e, a.theorem);
    match a.format {
        FormatArg::Table => {
            for r in &rows {
                let _ = writeln!(out, "{r}");
            }
        }
        FormatArg::Json => {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&rows).expect("rows serialize"));
        }
    }
    EXIT_PASS
}
