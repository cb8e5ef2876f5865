//! `sumprod`: statistics, verification suites and subgroup scans from the
//! command line.
//!
//! Exit codes: 0 ok, 1 an exact check failed, 2 usage error, 3 a size guard
//! was exceeded.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use sumprod::families::FamilySpec;
use sumprod::harness::{
    self, emit_report, expand_checks, rect_decompose, run_suite, sum_construction_stats, verify_rect, Format, Input,
    Options, Report, RectProfile, Subject, GAP_EXPONENT,
};
use sumprod::incidence::{self, TripleConvention};
use sumprod::setops::{self, combine_support, parse_set_text, Op};
use sumprod::subgroups::{self, ScanSpec};
use sumprod::{energy, spectral, Error, GSet, Ground};

#[derive(Parser)]
#[command(name = "sumprod", version, about = "Exact sum-product statistics and inequality checks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sizes, energies and moment sums of one set.
    Stats {
        #[command(flatten)]
        input: InputArgs,
        /// Also count collinear triples of A×A.
        #[arg(long)]
        triples: bool,
        #[arg(long, default_value_t = incidence::GRID_GUARD)]
        max_grid: usize,
    },
    /// Run checks on one input and emit a report.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Subgroup statistics: cosets, gaps, window counts, character sums.
    Subgroup {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        t: u64,
        /// Print H_p(t) with its witness.
        #[arg(long)]
        gaps: bool,
        /// Print the window counts N_{j,t}(h) and N(Γ,h).
        #[arg(long)]
        h: Option<u64>,
        /// Print the character sums S_j and the fourth-moment bound.
        #[arg(long)]
        sums: bool,
        /// Runs may not wrap through 0.
        #[arg(long)]
        linear: bool,
    },
    /// Gap scan over a (p, t) range, flushing one CSV row per case.
    Scan {
        /// For example "p in [3,10000], t | p-1, t in [sqrt(p), p-1]".
        #[arg(long)]
        range: String,
        /// Stop after this many seconds; rows written so far are kept.
        #[arg(long)]
        budget: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        linear: bool,
    },
    /// Eigenvalue chain for one set.
    Spectral {
        #[command(flatten)]
        input: InputArgs,
        /// Threshold Δ; defaults to max r.
        #[arg(long)]
        delta: Option<u64>,
    },
    /// Rectangle decomposition and the sum-set construction.
    Rect {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value = "desk")]
        profile: String,
    },
    /// Run checks over a built-in corpus.
    Report {
        #[arg(long, value_enum, default_value_t = Corpus::Standard)]
        corpus: Corpus,
        #[command(flatten)]
        run: RunArgs,
        /// Write log-log slopes per check and family here (JSON).
        #[arg(long)]
        trends: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Corpus {
    /// Geometric, arithmetic, random sets and small subgroups.
    Standard,
    /// Sets with n = 8..64 and a subgroup scan up to 10^5; ratio-only checks.
    Ratio,
}

#[derive(Args)]
struct InputArgs {
    /// Set file: `rational` or `mod p` header line, then one element per line.
    #[arg(long, conflicts_with = "family")]
    set: Option<PathBuf>,
    /// Family DSL, e.g. geo(q=2,n=16), ap(n=10), rand(n=20,seed=1,max=1000), subgroup(p=13,t=4).
    #[arg(long)]
    family: Option<String>,
}

#[derive(Args)]
struct RunArgs {
    /// Comma-separated check ids, or all, all-exact, all-ratio.
    #[arg(long, default_value = "all")]
    checks: String,
    #[arg(long, default_value = "desk")]
    profile: String,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Drop the timestamp and zero the timings.
    #[arg(long)]
    deterministic: bool,
    #[arg(long, default_value_t = incidence::GRID_GUARD)]
    max_grid: usize,
    /// Count degenerate triples in ratio checks that report 𝒯.
    #[arg(long)]
    repeats: bool,
    #[arg(long)]
    linear: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

/// Errors carry their exit code.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::TooLarge { .. } => 3,
            Error::CrossCheckMismatch { .. } => 1,
            _ => 2,
        };
        Fail(code, e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Fail {
    Fail(2, msg.into())
}

fn load(args: &InputArgs) -> Result<Input, Fail> {
    match (&args.set, &args.family) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read set file {}: {e}", path.display())))?;
            let set = parse_set_text(&text)?;
            Ok(Input::from_set(path.display().to_string(), set))
        }
        (None, Some(dsl)) => Ok(Input::from_family(&dsl.parse::<FamilySpec>()?)?),
        _ => Err(usage("give exactly one of --set FILE or --family DSL")),
    }
}

fn options(run: &RunArgs) -> Result<Options, Fail> {
    Ok(Options {
        max_grid: run.max_grid,
        profile: run.profile.parse::<RectProfile>()?,
        triple: if run.repeats { TripleConvention::WithRepeats } else { TripleConvention::Distinct },
        circular: !run.linear,
    })
}

fn print_json(v: &serde_json::Value) -> Result<(), Fail> {
    let text = serde_json::to_string_pretty(v).map_err(|e| Fail(2, e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn to_value<S: serde::Serialize>(x: &S) -> serde_json::Value {
    serde_json::to_value(x).expect("serializable")
}

/// Dispatches a closure on the element type of a set input.
macro_rules! with_set {
    ($input:expr, |$a:ident| $body:expr) => {
        match &$input.subject {
            Subject::Rational($a) => $body,
            Subject::Residue($a) => $body,
            Subject::Subgroup(ctx) => {
                let $a = &ctx.gamma_set();
                $body
            }
        }
    };
}

fn stats<T: incidence::Incidence>(a: &GSet<T>, triples: bool, max_grid: usize) -> Result<serde_json::Value, Fail> {
    let size = |op| combine_support(a, a, op).map(|s| s.len());
    let profile = energy::energy_profile(a, &[2, 3])?;
    let mut v = json!({
        "size": a.len(),
        "universe": a.universe().to_string(),
        "sum_set": size(Op::Add)?,
        "difference_set": size(Op::Sub)?,
        "product_set": size(Op::Mul)?,
        "ratio_set": setops::product_set(a, a, Op::Div)?.len(),
        "energy": to_value(&profile),
    });
    if triples {
        let t = incidence::collinear_triples_with(a, TripleConvention::Distinct, max_grid)?;
        let r = incidence::collinear_triples_with(a, TripleConvention::WithRepeats, max_grid)?;
        v["collinear_triples"] = json!({"distinct": t.to_string(), "with_repeats": r.to_string()});
    }
    Ok(v)
}

fn spectral_json<T: Ground>(a: &GSet<T>, delta: Option<u64>) -> Result<serde_json::Value, Fail> {
    let delta = delta.unwrap_or_else(|| energy::difference_table(a).max_count());
    let chain: sumprod::SpectralChain = spectral::spectral_chain_check(a, delta)?;
    Ok(to_value(&chain))
}

fn rect_json<T: Ground>(a: &GSet<T>, profile: RectProfile) -> Result<(serde_json::Value, bool), Fail> {
    let cover = rect_decompose(a, profile)?;
    let verified = verify_rect(a, &cover);
    let mut v = json!({ "cover": to_value(&cover), "verified": verified.is_ok() });
    if let Err(e) = &verified {
        v["verify_error"] = json!(e.to_string());
    }
    let mut ok = verified.is_ok();
    match sum_construction_stats(a, Some(&cover)) {
        Ok(s) => {
            ok &= s.all_hold();
            v["sum_construction"] = to_value(&s);
        }
        Err(e) if e.is_guard() => v["sum_construction"] = json!({ "skipped": e.to_string() }),
        Err(e) => return Err(e.into()),
    }
    Ok((v, ok))
}

/// Writes the report and maps results to an exit code.
fn finish_report(report: &Report, run: &RunArgs) -> Result<u8, Fail> {
    let text = emit_report(report, run.format.into(), run.out.as_deref())?;
    if run.out.is_none() {
        print!("{text}");
        if !text.ends_with('\n') {
            println!();
        }
    }
    let t = &report.totals;
    eprintln!(
        "{} results: {} proved-exact, {} ratio-only, {} failed; {} errors",
        report.results.len(),
        t.proved_exact,
        t.ratio_only,
        t.failed,
        t.errors
    );
    for r in report.results.iter().filter(|r| r.pass == harness::Pass::Failed) {
        eprintln!("FAILED {} on {}: {} vs {}", r.check_id, r.input, r.lhs, r.rhs);
    }
    for e in &report.errors {
        eprintln!("error {} on {}: {}", e.check_id, e.input, e.error);
    }
    Ok(if report.has_failures() {
        1
    } else if report.errors.iter().any(|e| e.error.contains("exceeds guard")) {
        3
    } else if !report.errors.is_empty() {
        2
    } else {
        0
    })
}

fn scan(range: &str, budget: Option<f64>, out: Option<PathBuf>, jobs: usize, circular: bool) -> Result<u8, Fail> {
    let spec = ScanSpec::parse(range)?;
    let cases = spec.cases();
    let start = Instant::now();
    let limit = budget.map(Duration::from_secs_f64);
    let mut sink: Box<dyn Write> = match &out {
        Some(p) => Box::new(std::fs::File::create(p).map_err(|e| usage(format!("cannot create {}: {e}", p.display())))?),
        None => Box::new(std::io::stdout().lock()),
    };
    let io = |e: std::io::Error| Fail(2, e.to_string());
    writeln!(sink, "p,t,h,exponent").map_err(io)?;
    let mut best: Option<harness::GapRow> = None;
    let mut done = 0usize;
    // Chunks keep the budget responsive while still using the pool.
    let chunk = 64 * jobs.max(1);
    for group in cases.chunks(chunk) {
        if limit.is_some_and(|l| start.elapsed() >= l) {
            break;
        }
        let rows = harness::gap_rows(group, circular, jobs)?;
        for r in rows {
            writeln!(sink, "{},{},{},{}", r.p, r.t, r.h, r.exponent).map_err(io)?;
            if best.is_none_or(|b| r.exponent > b.exponent) {
                best = Some(r);
            }
        }
        sink.flush().map_err(io)?;
        done += group.len();
    }
    eprintln!("{done} of {} cases in {:.1}s", cases.len(), start.elapsed().as_secs_f64());
    if let Some(b) = best {
        eprintln!(
            "max log H/log p = {:.6} at p={}, t={} (H={}); reference 437/480 = {:.6}",
            b.exponent, b.p, b.t, b.h, GAP_EXPONENT
        );
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Fail> {
    match cli.cmd {
        Cmd::Stats { input, triples, max_grid } => {
            let input = load(&input)?;
            let v = with_set!(input, |a| stats(a, triples, max_grid)?);
            print_json(&json!({ "input": input.label, "stats": v }))?;
            Ok(0)
        }
        Cmd::Verify { input, run } => {
            let input = load(&input)?;
            let opts = options(&run)?;
            let ids = expand_checks(&run.checks)?;
            let outcomes = run_suite(&ids, std::slice::from_ref(&input), &opts, run.jobs)?;
            let report = Report::new(input.label.clone(), &ids, outcomes, run.deterministic);
            finish_report(&report, &run)
        }
        Cmd::Subgroup { p, t, gaps, h, sums, linear } => {
            let ctx = subgroups::subgroup_context(p, t)?;
            println!("p={} t={} cosets={} generator={}", ctx.p(), ctx.t(), ctx.n(), ctx.g());
            println!("gamma={:?}", ctx.gamma());
            if gaps {
                let g = subgroups::gap_h(&ctx, !linear)?;
                println!("H={}", g.h);
                println!(
                    "witness: coset {} avoids {}..{} (mod p)",
                    g.witness_coset,
                    (g.witness_start + 1) % p,
                    (g.witness_start + g.h) % p
                );
            }
            if let Some(h) = h {
                let w = subgroups::window_counts(&ctx, h)?;
                println!("N_j(h)={:?}", w.per_coset);
                println!("N(Gamma,h)={}", w.n_gamma_h);
            }
            if sums {
                let c = subgroups::char_sums(&ctx)?;
                let s: Vec<String> = c.abs.iter().map(|x| format!("{x:.6}")).collect();
                println!("|S_j|=[{}]", s.join(", "));
                println!("sum |S_j|^4 = {:.6} < (p/t)E = {:.6}: {}", c.fourth_moment, c.bound, c.holds);
            }
            Ok(0)
        }
        Cmd::Scan { range, budget, out, jobs, linear } => scan(&range, budget, out, jobs, !linear),
        Cmd::Spectral { input, delta } => {
            let input = load(&input)?;
            let v = with_set!(input, |a| spectral_json(a, delta)?);
            print_json(&json!({ "input": input.label, "spectral": v }))?;
            Ok(0)
        }
        Cmd::Rect { input, profile } => {
            let input = load(&input)?;
            let profile: RectProfile = profile.parse()?;
            let (v, ok) = with_set!(input, |a| rect_json(a, profile)?);
            print_json(&json!({ "input": input.label, "profile": profile.to_string(), "rect": v }))?;
            Ok(if ok { 0 } else { 1 })
        }
        Cmd::Report { corpus, run, trends } => {
            let opts = options(&run)?;
            let (label, inputs, ids, outcomes) = match corpus {
                Corpus::Standard => {
                    let ids = expand_checks(&run.checks)?;
                    let inputs = harness::standard_corpus()?;
                    let outcomes = run_suite(&ids, &inputs, &opts, run.jobs)?;
                    ("standard", inputs, ids, outcomes)
                }
                Corpus::Ratio => {
                    let ids = expand_checks("all-ratio")?;
                    let (inputs, outcomes) = harness::run_ratio_suite(&opts, run.jobs)?;
                    ("ratio", inputs, ids, outcomes)
                }
            };
            let report = Report::new(label, &ids, outcomes, run.deterministic);
            if let Some(path) = trends {
                let t = harness::trends(&report.results, &inputs);
                let text = serde_json::to_string_pretty(&t).map_err(|e| Fail(2, e.to_string()))?;
                std::fs::write(&path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
            }
            finish_report(&report, &run)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

