mod records;

use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use wopkit::construct::construct;
use wopkit::discover::{enumerate_templates, facet_scan, infer_rhs, ScanReport};
use wopkit::enumerate::{enumerate_weak_orders_with_guard, ENUMERATION_GUARD};
use wopkit::exec::Execution;
use wopkit::inequalities::{instantiate, lift, ClassTag};
use wopkit::verify::{check_validity, facet_report, order_affine_rank, Exhaustive, VERIFY_GUARD};

use records::{
    porta_line, InequalityRecord, RunReport, ScanRecord, ScanRowRecord, ScanSummary, Timings, SCAN_SCHEMA,
};

const GUARD_VAR: &str = "WOPKIT_GUARD_N";

#[derive(Parser)]
#[command(name = "wopkit", version, about = "Weak order polytope inequalities: build, construct, verify, discover")]
struct Cli {
    /// Worker threads for the exhaustive scans (1 runs sequentially).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List every weak order on n alternatives.
    Enumerate {
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Ranks)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit an inequality record.
    Vi {
        #[arg(long)]
        class: String,
        #[arg(long)]
        n: usize,
        /// Comma-separated fixed alternatives.
        #[arg(long, value_delimiter = ',', default_value = "")]
        fixed: Vec<String>,
        /// Zero-pad to this many alternatives.
        #[arg(long)]
        lift: Option<usize>,
        /// Also write the inequality as a text line to this path.
        #[arg(long)]
        porta: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check validity, tight set and facet rank of records.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        /// Include the per-structure census of the tight set.
        #[arg(long)]
        structures: bool,
        /// Include wall-clock timings (output is then not reproducible).
        #[arg(long)]
        timings: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the tight characteristic vectors built by the construction procedures.
    Construct {
        #[arg(long)]
        class: String,
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        fixed: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scan coefficient templates for valid inequalities and facets.
    Discover {
        #[arg(long)]
        fixed_count: usize,
        #[arg(long)]
        n: usize,
        /// Sizes used to fit a right-hand-side law per template.
        #[arg(long, value_delimiter = ',')]
        fit: Vec<usize>,
        /// Sizes used to confirm the fitted laws.
        #[arg(long, value_delimiter = ',')]
        holdout: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Ranks,
    Bits,
    Partitions,
}

/// Input that could not be read as a valid record.
#[derive(Debug)]
struct Malformed(String);

impl fmt::Display for Malformed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "malformed input: {}", self.0)
    }
}

impl std::error::Error for Malformed {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.chain().any(|e| e.is::<Malformed>()) {
        return 4;
    }
    let guard = err
        .chain()
        .any(|e| matches!(e.downcast_ref::<wopkit::error::Error>(), Some(wopkit::error::Error::ResourceLimit { .. })));
    if guard {
        3
    } else {
        2
    }
}

fn guard(default: usize) -> anyhow::Result<usize> {
    match std::env::var(GUARD_VAR) {
        Ok(v) => v.trim().parse().with_context(|| format!("{GUARD_VAR}={v:?} is not a number")),
        Err(_) => Ok(default),
    }
}

fn parse_list(items: &[String]) -> anyhow::Result<Vec<usize>> {
    items
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse().with_context(|| format!("bad alternative {s:?}")))
        .collect()
}

fn parse_class(s: &str) -> anyhow::Result<ClassTag> {
    s.parse().map_err(|e| anyhow!("{e}"))
}

fn open_out(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn execution(jobs: Option<usize>) -> anyhow::Result<Execution> {
    match jobs {
        Some(0) => bail!("--jobs must be at least 1"),
        Some(1) => Ok(Execution::Sequential),
        #[cfg(feature = "parallel")]
        Some(j) => {
            rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build_global()
                .context("cannot start the worker pool")?;
            Ok(Execution::Parallel)
        }
        #[cfg(not(feature = "parallel"))]
        Some(_) => Ok(Execution::Sequential),
        None => Ok(Execution::default()),
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let exec = execution(cli.jobs)?;
    match cli.command {
        Command::Enumerate { n, format, out } => cmd_enumerate(n, format, out.as_deref()),
        Command::Vi {
            class,
            n,
            fixed,
            lift,
            porta,
            out,
        } => cmd_vi(&class, n, &parse_list(&fixed)?, lift, porta.as_deref(), out.as_deref()),
        Command::Verify {
            input,
            structures,
            timings,
            out,
        } => {
            let mode = Exhaustive {
                guard: guard(VERIFY_GUARD)?,
                execution: exec,
            };
            cmd_verify(&input, structures, timings, out.as_deref(), &mode)
        }
        Command::Construct { class, n, fixed, out } => {
            cmd_construct(&class, n, &parse_list(&fixed)?, out.as_deref(), exec)
        }
        Command::Discover {
            fixed_count,
            n,
            fit,
            holdout,
            out,
        } => {
            let mode = Exhaustive {
                guard: guard(VERIFY_GUARD)?,
                execution: exec,
            };
            cmd_discover(fixed_count, n, &fit, &holdout, out.as_deref(), &mode)
        }
    }
}

fn cmd_enumerate(n: usize, format: Format, out: Option<&Path>) -> anyhow::Result<()> {
    if n == 0 {
        bail!("n must be at least 1");
    }
    let stream = enumerate_weak_orders_with_guard(n, guard(ENUMERATION_GUARD)?)?;
    let mut w = open_out(out)?;
    for order in stream {
        match format {
            Format::Ranks => {
                let r: Vec<String> = order.to_ranking().ranks().iter().map(|r| r.to_string()).collect();
                writeln!(w, "{}", r.join(","))?;
            }
            Format::Bits => {
                let bits: String = order.to_vector().iter().map(|&b| if b == 1 { '1' } else { '0' }).collect();
                writeln!(w, "{bits}")?;
            }
            Format::Partitions => {
                let parts: Vec<String> = order
                    .to_partition()
                    .buckets()
                    .iter()
                    .map(|b| {
                        let items: Vec<String> = b.iter().map(|a| a.to_string()).collect();
                        format!("{{{}}}", items.join(","))
                    })
                    .collect();
                writeln!(w, "{}", parts.join("|"))?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn cmd_vi(
    class: &str,
    n: usize,
    fixed: &[usize],
    lift_to: Option<usize>,
    porta: Option<&Path>,
    out: Option<&Path>,
) -> anyhow::Result<()> {
    let class = parse_class(class)?;
    let mut q = instantiate(class, n, fixed)?;
    if let Some(m) = lift_to {
        q = lift(&q, m)?;
    }
    let mut w = open_out(out)?;
    writeln!(w, "{}", serde_json::to_string(&InequalityRecord::from_inequality(&q))?)?;
    w.flush()?;
    if let Some(p) = porta {
        let mut t = open_out(Some(p))?;
        writeln!(t, "{}", porta_line(&q))?;
        t.flush()?;
    }
    Ok(())
}

fn cmd_verify(
    input: &Path,
    structures: bool,
    timings: bool,
    out: Option<&Path>,
    mode: &Exhaustive,
) -> anyhow::Result<()> {
    let file = File::open(input)
        .map_err(|e| Malformed(e.to_string()))
        .with_context(|| format!("cannot read {}", input.display()))?;
    let mut records = Vec::new();
    for (k, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Malformed(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: InequalityRecord =
            serde_json::from_str(&line).map_err(|e| Malformed(format!("line {}: {e}", k + 1)))?;
        let q = rec.to_inequality().map_err(|e| Malformed(format!("line {}: {e}", k + 1)))?;
        records.push(q);
    }
    if records.is_empty() {
        return Err(Malformed("no records".into()).into());
    }
    let mut w = open_out(out)?;
    for q in &records {
        let start = Instant::now();
        let validity_ms = if timings {
            let t = Instant::now();
            check_validity(q, mode)?;
            t.elapsed().as_secs_f64() * 1e3
        } else {
            0.0
        };
        let mut report = RunReport::new(q, facet_report(q, mode)?, structures);
        if timings {
            report.timings = Some(Timings {
                validity_ms,
                total_ms: start.elapsed().as_secs_f64() * 1e3,
            });
        }
        writeln!(w, "{}", serde_json::to_string(&report)?)?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_construct(class: &str, n: usize, fixed: &[usize], out: Option<&Path>, exec: Execution) -> anyhow::Result<()> {
    let class = parse_class(class)?;
    let x = construct(class, n, fixed)?;
    let rank = order_affine_rank(&x.orders(), exec)?;
    let list: Vec<String> = fixed.iter().map(|a| a.to_string()).collect();
    let summary = format!(
        "# class {class} n {n} fixed {} rows {} affine_rank {rank} full {}",
        list.join(","),
        x.len(),
        n * (n - 1)
    );
    let mut w = open_out(out)?;
    writeln!(w, "{summary}")?;
    for v in x.to_vectors() {
        let row: Vec<String> = v.iter().map(|b| b.to_string()).collect();
        writeln!(w, "{}", row.join(" "))?;
    }
    w.flush()?;
    eprintln!("{}", &summary[2..]);
    Ok(())
}

fn cmd_discover(
    fixed_count: usize,
    n: usize,
    fit: &[usize],
    holdout: &[usize],
    out: Option<&Path>,
    mode: &Exhaustive,
) -> anyhow::Result<()> {
    if fixed_count == 3 {
        bail!("three fixed alternatives are only available as the T3 classes; use `wopkit vi --class T3-<1..8>`");
    }
    if fit.is_empty() && !holdout.is_empty() {
        bail!("--holdout needs --fit");
    }
    let report: ScanReport = facet_scan(fixed_count, n, mode)?;
    let laws = if fit.is_empty() {
        None
    } else {
        let templates = enumerate_templates(fixed_count)?;
        let mut laws = Vec::with_capacity(templates.len());
        for t in &templates {
            laws.push(infer_rhs(t, fit, holdout, mode)?);
        }
        let mut extra = Vec::new();
        for row in &report.extra {
            extra.push(infer_rhs(&row.template, fit, holdout, mode)?);
        }
        Some((laws, extra))
    };
    let rows = report
        .rows
        .iter()
        .enumerate()
        .map(|(k, r)| ScanRowRecord::new(r, laws.as_ref().map(|(l, _)| &l[k])))
        .collect();
    let extra = report
        .extra
        .iter()
        .enumerate()
        .map(|(k, r)| ScanRowRecord::new(r, laws.as_ref().map(|(_, l)| &l[k])))
        .collect();
    let record = ScanRecord {
        schema: SCAN_SCHEMA.into(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        fixed_count,
        n,
        rows,
        extra,
        summary: ScanSummary {
            facet_templates: report.facet_indices(),
            featured: report.featured().into_iter().map(|(c, f)| (c.to_string(), f)).collect(),
            unfeatured_facets: report.unfeatured_facets().len(),
        },
    };
    let mut w = open_out(out)?;
    writeln!(w, "{}", serde_json::to_string_pretty(&record)?)?;
    w.flush()?;
    Ok(())
}
