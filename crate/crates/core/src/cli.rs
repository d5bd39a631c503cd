//! The `lowdisc` command line.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::config::{ExperimentConfig, Format, NGrid};
use crate::discrepancy::{gap_based_bound, pc_based_bound_with_k, star_discrepancy_md};
use crate::error::{Error, Result};
use crate::gaps::{classify_spectra, gap_spectrum, GapLabel, DEFAULT_GROUPING_TOLERANCE};
use crate::pair_correlation::{deviation_statistic, pair_correlation_with, Comparison};
use crate::report::{emit_report, fmt_float, SuiteReport, Table, SCHEMA_VERSION};
use crate::sequences::{generate_with, GenerateOptions, PointSet, SequenceSpec};
use crate::verify::{run_suite, SuiteId, SuiteOptions, VerificationSuiteResult};

pub const THREADS_ENV: &str = "LOWDISC_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "lowdisc", version, about = "Gap structure, pair correlations and discrepancy of low-discrepancy sequences")]
struct Cli {
    /// JSON file with default values for any flag
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write data here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// csv or json
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Include wall-clock timings (output is then no longer reproducible)
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct DataArgs {
    /// kronecker:phi, kronecker:z=<x>[,<y>...], vdc:b=<int>[,zero], random:seed=<int>[,d=<k>]
    #[arg(long)]
    seq: Option<SequenceSpec>,
    /// N, N1,N2,..., a:b:steps or fib:MAX
    #[arg(long)]
    n: Option<NGrid>,
    /// Prepend 0 to van der Corput sequences
    #[arg(long)]
    vdc_zero: bool,
    /// Allow N beyond the double-double precision guard
    #[arg(long)]
    extended_precision: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the first N points
    Generate {
        #[command(flatten)]
        data: DataArgs,
    },
    /// Circle-gap spectrum for each N
    Gaps {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        alpha: Option<f64>,
        /// Grouping tolerance for gap lengths
        #[arg(long)]
        tolerance: Option<f64>,
        /// Label gap families as small, intermediate or large
        #[arg(long)]
        classify: bool,
    },
    /// Pair correlation values for each N and s
    Paircorr {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        alpha: Option<f64>,
        /// Comma-separated s values
        #[arg(long, value_delimiter = ',')]
        s: Option<Vec<f64>>,
        /// Count distances strictly below the radius
        #[arg(long)]
        strict: bool,
        /// Emit the deviation statistic F(K, N) instead
        #[arg(long, value_name = "K")]
        deviation: Option<usize>,
    },
    /// Star and extreme discrepancy, or one of the bounds
    Discrepancy {
        #[command(flatten)]
        data: DataArgs,
        /// Gap-structure bound on the star discrepancy
        #[arg(long)]
        gap_bound: bool,
        /// Pair-correlation bound, given as alpha=<a>
        #[arg(long, value_name = "alpha=A")]
        pc_bound: Option<String>,
        /// K for the pair-correlation bound (default floor(N^(2 alpha/5)))
        #[arg(long)]
        k: Option<u64>,
    },
    /// Run a verification suite, or `all`
    Verify {
        suite: String,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Combine suite result files into one report
    Report { inputs: Vec<PathBuf> },
}

struct Outcome {
    data: String,
    summary: String,
    failed: bool,
}

impl Outcome {
    fn data(data: String, summary: String) -> Self {
        Self {
            data,
            summary,
            failed: false,
        }
    }
}

/// Runs the CLI with the process stdout and stderr.
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_command_io(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_command_io<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    configure_threads(err);
    match execute(cli, err) {
        Ok((outcome, target)) => {
            let written = match &target {
                Some(path) => std::fs::write(path, &outcome.data)
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
                    .map(|_| writeln!(out, "{}", outcome.summary)),
                None => Ok(out.write_all(outcome.data.as_bytes())),
            };
            match written {
                Ok(_) if outcome.failed => EXIT_FAILURE,
                Ok(_) => EXIT_OK,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    EXIT_FAILURE
                }
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Io(_) => EXIT_FAILURE,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn configure_threads(err: &mut dyn Write) {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        match v.parse::<usize>() {
            Ok(n) if n > 0 => {
                // a pool built earlier in the same process stays in place
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                let _ = writeln!(err, "warning: ignoring {THREADS_ENV}={v:?}, expected a positive integer");
            }
        }
    }
}

fn flags_config(cli: &Cli, data: Option<&DataArgs>) -> ExperimentConfig {
    let mut c = ExperimentConfig {
        out: cli.out.clone(),
        format: cli.format,
        timings: cli.timings,
        ..Default::default()
    };
    if let Some(d) = data {
        c.seq = d.seq.clone();
        c.n = d.n.clone();
        c.vdc_zero = d.vdc_zero;
        c.extended_precision = d.extended_precision;
    }
    match &cli.command {
        Command::Gaps { alpha, tolerance, .. } => {
            c.alpha = *alpha;
            c.tolerance = *tolerance;
        }
        Command::Paircorr { alpha, s, strict, .. } => {
            c.alpha = *alpha;
            c.s = s.clone();
            c.strict = *strict;
        }
        Command::Verify { seed, .. } => c.seed = *seed,
        _ => {}
    }
    c
}

fn execute(cli: Cli, err: &mut dyn Write) -> Result<(Outcome, Option<PathBuf>)> {
    let data = match &cli.command {
        Command::Generate { data }
        | Command::Gaps { data, .. }
        | Command::Paircorr { data, .. }
        | Command::Discrepancy { data, .. } => Some(data),
        _ => None,
    };
    let file = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    let cfg = file.merged(&flags_config(&cli, data));
    let started = Instant::now();
    let outcome = match &cli.command {
        Command::Generate { .. } => cmd_generate(&cfg, err)?,
        Command::Gaps { classify, .. } => cmd_gaps(&cfg, *classify, err)?,
        Command::Paircorr { deviation, .. } => cmd_paircorr(&cfg, *deviation, err)?,
        Command::Discrepancy { gap_bound, pc_bound, k, .. } => {
            cmd_discrepancy(&cfg, *gap_bound, pc_bound.as_deref(), *k, err)?
        }
        Command::Verify { suite, trials, max_n, .. } => cmd_verify(&cfg, suite, *trials, *max_n, err)?,
        Command::Report { inputs } => cmd_report(&cfg, inputs)?,
    };
    let mut outcome = outcome;
    if cfg.timings {
        let _ = writeln!(err, "runtime_ms={}", started.elapsed().as_millis());
        outcome.summary = format!("{} ({} ms)", outcome.summary, started.elapsed().as_millis());
    }
    Ok((outcome, cfg.out.clone()))
}

fn points_for(cfg: &ExperimentConfig, n: usize, err: &mut dyn Write) -> Result<(SequenceSpec, PointSet)> {
    let spec = cfg.sequence()?;
    for w in spec.warnings() {
        let _ = writeln!(err, "warning: {w}");
    }
    let ps = generate_with(
        &spec,
        n,
        GenerateOptions {
            extended_precision: cfg.extended_precision,
        },
    )?;
    Ok((spec, ps))
}

fn max_n(ns: &[usize]) -> usize {
    *ns.last().expect("grids are non-empty")
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    command: &'static str,
    sequence: String,
    rows: &'a T,
}

fn json<T: Serialize>(command: &'static str, spec: &SequenceSpec, rows: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&Envelope {
        schema_version: SCHEMA_VERSION,
        command,
        sequence: spec.to_string(),
        rows,
    })
    .map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn cmd_generate(cfg: &ExperimentConfig, err: &mut dyn Write) -> Result<Outcome> {
    let ns = cfg.n_values()?;
    if ns.len() != 1 {
        return Err(Error::InvalidArgument("generate takes a single N".into()));
    }
    let (spec, ps) = points_for(cfg, ns[0], err)?;
    let data = match cfg.format() {
        Format::Csv => {
            let mut buf = Vec::new();
            ps.write_csv(&mut buf)?;
            String::from_utf8(buf).expect("utf-8")
        }
        Format::Json => {
            let rows: Vec<&[f64]> = ps.points().collect();
            json("generate", &spec, &rows)?
        }
    };
    Ok(Outcome::data(data, format!("generated {} points of {spec}", ps.len())))
}

fn cmd_gaps(cfg: &ExperimentConfig, classify: bool, err: &mut dyn Write) -> Result<Outcome> {
    let ns = cfg.n_values()?;
    let alpha = cfg.alpha();
    let tol = cfg.tolerance.unwrap_or(DEFAULT_GROUPING_TOLERANCE);
    let (spec, full) = points_for(cfg, max_n(&ns), err)?;
    let spectra = ns
        .iter()
        .map(|&n| gap_spectrum(&full.prefix(n), tol))
        .collect::<Result<Vec<_>>>()?;
    let labels: Option<Vec<Vec<GapLabel>>> = if classify {
        let c = classify_spectra(alpha, &spectra)?;
        Some(
            spectra
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    s.classes()
                        .iter()
                        .map(|class| {
                            c.families
                                .iter()
                                .find(|f| f.lengths[i] == Some(class.length))
                                .map_or(GapLabel::Undetermined, |f| f.label)
                        })
                        .collect()
                })
                .collect(),
        )
    } else {
        None
    };
    let mut header = vec!["N", "k", "L_k", "N_k", "N^alpha*L_k"];
    if classify {
        header.push("label");
    }
    let mut table = Table::new(header);
    #[derive(Serialize)]
    struct Row {
        n: usize,
        k: usize,
        length: f64,
        multiplicity: usize,
        scaled: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        label: Option<GapLabel>,
    }
    let mut rows = Vec::new();
    for (i, s) in spectra.iter().enumerate() {
        for (k, class) in s.classes().iter().enumerate() {
            let scaled = (s.n() as f64).powf(alpha) * class.length;
            let label = labels.as_ref().map(|l| l[i][k]);
            let mut row = vec![
                s.n().to_string(),
                (k + 1).to_string(),
                fmt_float(class.length),
                class.multiplicity.to_string(),
                fmt_float(scaled),
            ];
            if let Some(l) = label {
                row.push(l.as_str().to_string());
            }
            table.push(row);
            rows.push(Row {
                n: s.n(),
                k: k + 1,
                length: class.length,
                multiplicity: class.multiplicity,
                scaled,
                label,
            });
        }
    }
    let data = match cfg.format() {
        Format::Csv => table.to_csv(),
        Format::Json => json("gaps", &spec, &rows)?,
    };
    Ok(Outcome::data(data, format!("gap spectra of {spec} for {} values of N", ns.len())))
}

fn cmd_paircorr(cfg: &ExperimentConfig, deviation: Option<usize>, err: &mut dyn Write) -> Result<Outcome> {
    let ns = cfg.n_values()?;
    let alpha = cfg.alpha();
    let (spec, full) = points_for(cfg, max_n(&ns), err)?;
    if let Some(k) = deviation {
        let stats = ns
            .iter()
            .map(|&n| deviation_statistic(&full.prefix(n), k, alpha))
            .collect::<Result<Vec<_>>>()?;
        let mut table = Table::new(vec!["N", "alpha", "K", "F", "argmax_s"]);
        for d in &stats {
            table.push(vec![
                d.n.to_string(),
                fmt_float(d.alpha),
                d.k.to_string(),
                fmt_float(d.value),
                d.argmax.to_string(),
            ]);
        }
        let data = match cfg.format() {
            Format::Csv => table.to_csv(),
            Format::Json => json("paircorr_deviation", &spec, &stats)?,
        };
        return Ok(Outcome::data(data, format!("F(K={k}, N) of {spec} for {} values of N", ns.len())));
    }
    let s_values = cfg.s.clone().unwrap_or_else(|| vec![1.0]);
    let cmp = Comparison::from_strict(cfg.strict);
    let mut points = Vec::new();
    for &n in &ns {
        let ps = full.prefix(n);
        for &s in &s_values {
            let p = pair_correlation_with(&ps, s, alpha, cmp)?;
            if p.saturated {
                let _ = writeln!(err, "warning: N={n} s={s}: radius {} reaches 1/2, the statistic saturates", p.radius);
            }
            points.push(p);
        }
    }
    let mut table = Table::new(vec!["N", "s", "alpha", "raw_count", "value"]);
    for p in &points {
        table.push(vec![
            p.n.to_string(),
            fmt_float(p.s),
            fmt_float(p.alpha),
            p.raw_count.to_string(),
            fmt_float(p.value),
        ]);
    }
    let data = match cfg.format() {
        Format::Csv => table.to_csv(),
        Format::Json => json("paircorr", &spec, &points)?,
    };
    Ok(Outcome::data(data, format!("{} pair-correlation rows of {spec}", points.len())))
}

fn parse_pc_alpha(arg: &str) -> Result<f64> {
    let v = arg.strip_prefix("alpha=").unwrap_or(arg);
    v.parse::<f64>()
        .map_err(|_| Error::parse("--pc-bound", arg, "expected alpha=<number>, e.g. alpha=0.8"))
}

fn cmd_discrepancy(
    cfg: &ExperimentConfig,
    gap_bound: bool,
    pc_bound: Option<&str>,
    k: Option<u64>,
    err: &mut dyn Write,
) -> Result<Outcome> {
    if gap_bound && pc_bound.is_some() {
        return Err(Error::InvalidArgument("choose one of --gap-bound and --pc-bound".into()));
    }
    let ns = cfg.n_values()?;
    let (spec, full) = points_for(cfg, max_n(&ns), err)?;
    let summary = format!("discrepancy of {spec} for {} values of N", ns.len());
    let data = if gap_bound {
        let reports = ns
            .iter()
            .map(|&n| gap_based_bound(&full.prefix(n)))
            .collect::<Result<Vec<_>>>()?;
        let mut t = Table::new(vec!["N", "K", "R", "epsilon", "sum_L", "bound", "measured_star", "satisfied"]);
        for r in &reports {
            t.push(vec![
                r.n.to_string(),
                r.k.to_string(),
                fmt_float(r.r),
                fmt_float(r.epsilon),
                fmt_float(r.lengths.iter().sum()),
                fmt_float(r.bound),
                fmt_float(r.measured_star),
                r.satisfied.to_string(),
            ]);
        }
        match cfg.format() {
            Format::Csv => t.to_csv(),
            Format::Json => json("discrepancy_gap_bound", &spec, &reports)?,
        }
    } else if let Some(arg) = pc_bound {
        let alpha = parse_pc_alpha(arg)?;
        let reports = ns
            .iter()
            .map(|&n| pc_based_bound_with_k(&full.prefix(n), alpha, k))
            .collect::<Result<Vec<_>>>()?;
        let mut t = Table::new(vec![
            "N", "alpha", "K", "K_squared", "F", "bound", "measured", "satisfied", "below_n0_candidate",
        ]);
        for r in &reports {
            t.push(vec![
                r.n.to_string(),
                fmt_float(r.alpha),
                r.k.to_string(),
                r.k_squared.to_string(),
                fmt_float(r.f_value),
                fmt_float(r.bound),
                fmt_float(r.measured),
                r.satisfied.to_string(),
                r.below_n0_candidate.to_string(),
            ]);
        }
        match cfg.format() {
            Format::Csv => t.to_csv(),
            Format::Json => json("discrepancy_pc_bound", &spec, &reports)?,
        }
    } else {
        let reports = ns
            .iter()
            .map(|&n| star_discrepancy_md(&full.prefix(n)))
            .collect::<Result<Vec<_>>>()?;
        let mut t = Table::new(vec!["N", "star", "extreme", "witness"]);
        for r in &reports {
            t.push(vec![
                r.n.to_string(),
                fmt_float(r.star),
                r.extreme.map(fmt_float).unwrap_or_default(),
                r.witness.describe(),
            ]);
        }
        match cfg.format() {
            Format::Csv => t.to_csv(),
            Format::Json => json("discrepancy", &spec, &reports)?,
        }
    };
    Ok(Outcome::data(data, summary))
}

fn cmd_verify(
    cfg: &ExperimentConfig,
    suite: &str,
    trials: Option<usize>,
    max_n: Option<usize>,
    err: &mut dyn Write,
) -> Result<Outcome> {
    let ids: Vec<SuiteId> = if suite == "all" {
        SuiteId::ALL.to_vec()
    } else {
        vec![suite.parse()?]
    };
    let opts = SuiteOptions {
        trials: trials.unwrap_or(SuiteOptions::default().trials),
        max_n,
        seed: cfg.seed(),
        timings: cfg.timings,
    };
    let results = ids
        .iter()
        .map(|&id| run_suite(id, &opts))
        .collect::<Result<Vec<VerificationSuiteResult>>>()?;
    report_outcome(cfg, results, err)
}

fn report_outcome(cfg: &ExperimentConfig, results: Vec<VerificationSuiteResult>, err: &mut dyn Write) -> Result<Outcome> {
    let format = cfg.format.unwrap_or(Format::Json);
    let data = emit_report(&results, format)?;
    let report = SuiteReport::new(results);
    if report.inconclusive > 0 {
        let _ = writeln!(err, "warning: {} inconclusive cases", report.inconclusive);
    }
    Ok(Outcome {
        data,
        summary: report.summary_line(),
        failed: report.failures > 0,
    })
}

fn read_results(path: &Path) -> Result<Vec<VerificationSuiteResult>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    if let Ok(r) = SuiteReport::from_json(&text) {
        return Ok(r.suites);
    }
    serde_json::from_str::<VerificationSuiteResult>(&text)
        .map(|r| vec![r])
        .map_err(|e| Error::parse("suite results", &path.display().to_string(), e.to_string()))
}

fn cmd_report(cfg: &ExperimentConfig, inputs: &[PathBuf]) -> Result<Outcome> {
    if inputs.is_empty() {
        return Err(Error::InvalidArgument("report needs at least one results file".into()));
    }
    let mut results = Vec::new();
    for p in inputs {
        // counts are recomputed from the cases in case a file was edited
        results.extend(read_results(p)?.into_iter().map(|r| {
            let runtime_ms = r.runtime_ms;
            VerificationSuiteResult { runtime_ms, ..VerificationSuiteResult::new(r.suite, r.cases) }
        }));
    }
    report_outcome(cfg, results, &mut std::io::sink())
}
