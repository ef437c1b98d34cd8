//! `textclust`: vectorize, cluster, evaluate and benchmark document corpora.

mod input;

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use textclust::bench::{self, BenchConfig, Method, RPolicy};
use textclust::datasets;
use textclust::evaluation;
use textclust::numfmt::fixed6;
use textclust::refinement::{self, DEFAULT_MAX_ITERS};
use textclust::{RefineOptions, Report};

use input::{InputArgs, SyntheticArgs};

const THREADS_ENV: &str = "TEXTCLUST_THREADS";

#[derive(Debug, Parser)]
#[command(name = "textclust", version, about = "Partitional document clustering over tf-idf vectors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write unit-length document vectors in CLUTO format.
    Vectorize {
        #[command(flatten)]
        input: InputArgs,
        /// Output `.mat`; `.rclass` and `.rlabel` files are written beside it.
        #[arg(long)]
        out: PathBuf,
    },
    /// Cluster one corpus and write `<doc_id> <cluster>` lines.
    Cluster {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        k: usize,
        /// Seeding candidate pool size; defaults to max(1, ceil(N / 10K)).
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "proposed", value_parser = parse_method)]
        method: Method,
        #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
        max_iters: usize,
        /// Assignment file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the entropy report as CSV.
        #[arg(long)]
        csv: bool,
    },
    /// Entropy of an assignment file against class labels.
    Eval {
        #[arg(long)]
        assignment: PathBuf,
        #[arg(long)]
        rclass: PathBuf,
        #[arg(long)]
        csv: bool,
    },
    /// Repeated paired-seed runs over several K, as CSV.
    Bench {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        synthetic: SyntheticArgs,
        /// Name used in the dataset column.
        #[arg(long)]
        name: Option<String>,
        #[arg(long, value_delimiter = ',', default_values_t = bench::DEFAULT_K_VALUES)]
        k_list: Vec<usize>,
        #[arg(long, default_value_t = bench::DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long)]
        r: Option<usize>,
        /// Base seed; trial t uses seed + t for every method.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_delimiter = ',', default_value = "proposed,baseline", value_parser = parse_method)]
        methods: Vec<Method>,
        #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
        max_iters: usize,
        /// Per-run CSV; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Aggregate CSV; printed after the per-run rows when omitted.
        #[arg(long)]
        summary: Option<PathBuf>,
        /// Add a wall_time_ms column to the per-run CSV.
        #[arg(long)]
        timings: bool,
    },
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: textclust::Error| e.to_string())
}

fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .with_context(|| format!("{THREADS_ENV}={v} is not a count"))?;
            if n == 0 {
                bail!("{THREADS_ENV} must be at least 1");
            }
            Ok(Some(n))
        }
        Err(_) => Ok(None),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

fn print_report(report: &Report, csv: bool, out: impl Write) -> Result<()> {
    if csv {
        report.write_csv(out)?;
    } else {
        report.write_text(out)?;
    }
    Ok(())
}

fn cmd_vectorize(input: &InputArgs, out: &Path) -> Result<bool> {
    let (name, m) = input.load_matrix()?;
    let prepared = input::weigh(name, &m, input.no_tfidf, input.drop_empty)?;
    let vectors = textclust::Matrix::new(
        prepared.docs,
        prepared.doc_ids,
        prepared.labels,
        prepared.n_terms,
        None,
    )?;
    datasets::save_cluto(&vectors, out).with_context(|| format!("writing {}", out.display()))?;
    eprintln!("wrote {} documents x {} terms to {}", vectors.n_docs(), vectors.n_terms, out.display());
    Ok(true)
}

#[allow(clippy::too_many_arguments)]
fn cmd_cluster(
    input: &InputArgs,
    k: usize,
    r: Option<usize>,
    seed: u64,
    method: Method,
    max_iters: usize,
    out: Option<&Path>,
    csv: bool,
) -> Result<bool> {
    let data = input.prepare()?;
    let run = refinement::cluster(&data.docs, k, r, seed, method, RefineOptions { max_iters })?;
    let assignment = run.solution.assignment();

    let mut sink: Box<dyn Write> = match out {
        Some(p) => Box::new(create(p)?),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    for (id, c) in data.doc_ids.iter().zip(assignment) {
        writeln!(sink, "{id} {c}")?;
    }
    sink.flush()?;
    drop(sink);

    // Summary goes to stdout only when the assignments went to a file.
    let mut info: Box<dyn Write> = match out {
        Some(_) => Box::new(io::stdout().lock()),
        None => Box::new(io::stderr().lock()),
    };
    writeln!(info, "method\t{method}")?;
    writeln!(info, "k\t{k}")?;
    writeln!(info, "seeds\t{}", join(&run.seeds))?;
    writeln!(info, "initial_T\t{}", fixed6(run.initial_t))?;
    writeln!(info, "T\t{}", fixed6(run.solution.criterion()))?;
    writeln!(info, "iterations\t{}", run.stats.iterations)?;
    writeln!(info, "moves\t{}", run.stats.moves_accepted)?;
    writeln!(info, "converged\t{}", run.stats.converged)?;
    if let Some(labels) = &data.labels {
        let report: Report = evaluation::solution_entropy(&run.solution, labels)?;
        print_report(&report, csv, &mut info)?;
    }
    info.flush()?;
    Ok(true)
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn read_assignment(path: &Path) -> Result<Vec<usize>> {
    let reader = BufReader::new(File::open(path).with_context(|| format!("opening {}", path.display()))?);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let (Some(_id), Some(c), None) = (fields.next(), fields.next(), fields.next()) else {
            bail!("{}:{}: expected `<doc_id> <cluster>`", path.display(), i + 1);
        };
        out.push(
            c.parse()
                .with_context(|| format!("{}:{}: bad cluster index `{c}`", path.display(), i + 1))?,
        );
    }
    Ok(out)
}

fn cmd_eval(assignment: &Path, rclass: &Path, csv: bool) -> Result<bool> {
    let clusters = read_assignment(assignment)?;
    let labels = datasets::read_lines(rclass).with_context(|| format!("reading {}", rclass.display()))?;
    if clusters.len() != labels.len() {
        bail!(
            "{} has {} documents but {} has {} labels",
            assignment.display(),
            clusters.len(),
            rclass.display(),
            labels.len()
        );
    }
    let report: Report = evaluation::total_entropy(&clusters, &labels)?;
    print_report(&report, csv, io::stdout().lock())?;
    Ok(true)
}

#[allow(clippy::too_many_arguments)]
fn cmd_bench(
    input: &InputArgs,
    synthetic: &SyntheticArgs,
    name: Option<String>,
    k_values: Vec<usize>,
    trials: usize,
    r: Option<usize>,
    seed: u64,
    methods: Vec<Method>,
    max_iters: usize,
    out: Option<&Path>,
    summary: Option<&Path>,
    timings: bool,
) -> Result<bool> {
    let data = if synthetic.synthetic {
        let m = datasets::generate_synthetic(&synthetic.spec())?;
        input::weigh("synthetic".to_owned(), &m, input.no_tfidf, input.drop_empty)?
    } else {
        input.prepare()?
    };
    let Some(labels) = &data.labels else {
        bail!("bench needs class labels (--rclass, a corpus directory, or --synthetic)");
    };
    let cfg = BenchConfig {
        dataset: name.unwrap_or(data.name.clone()),
        k_values,
        trials,
        r: r.map_or(RPolicy::Auto, RPolicy::Fixed),
        base_seed: seed,
        methods,
        max_iters,
        threads: threads_from_env()?,
    };
    let result = bench::run_bench(&data.docs, labels, &cfg)?;

    match out {
        Some(p) => {
            let mut w = create(p)?;
            result.write_rows_csv(&mut w, timings)?;
            w.flush()?;
        }
        None => result.write_rows_csv(io::stdout().lock(), timings)?,
    }
    match summary {
        Some(p) => {
            let mut w = create(p)?;
            result.write_aggregates_csv(&mut w)?;
            w.flush()?;
        }
        None => {
            if out.is_none() {
                println!();
            }
            result.write_aggregates_csv(io::stdout().lock())?;
        }
    }
    let failed = result.failures();
    if failed > 0 {
        for row in result.rows.iter().filter(|r| r.error.is_some()) {
            eprintln!(
                "run failed: method={} k={} trial={}: {}",
                row.method,
                row.k,
                row.trial,
                row.error.as_deref().unwrap_or_default()
            );
        }
    }
    Ok(failed == 0)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Vectorize { input, out } => cmd_vectorize(&input, &out),
        Command::Cluster {
            input,
            k,
            r,
            seed,
            method,
            max_iters,
            out,
            csv,
        } => cmd_cluster(&input, k, r, seed, method, max_iters, out.as_deref(), csv),
        Command::Eval { assignment, rclass, csv } => cmd_eval(&assignment, &rclass, csv),
        Command::Bench {
            input,
            synthetic,
            name,
            k_list,
            trials,
            r,
            seed,
            methods,
            max_iters,
            out,
            summary,
            timings,
        } => cmd_bench(
            &input,
            &synthetic,
            name,
            k_list,
            trials,
            r,
            seed,
            methods,
            max_iters,
            out.as_deref(),
            summary.as_deref(),
            timings,
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;
    use std::fs;

    #[test]
    fn cli_definition_is_valid() {
        Cli::command().debug_assert();
    }

    #[test]
    fn assignment_parsing() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.txt");
        fs::write(&p, "d0 1\nd1 0\n\n").unwrap();
        assert_eq!(read_assignment(&p).unwrap(), vec![1, 0]);
        fs::write(&p, "d0 1 extra\n").unwrap();
        assert!(read_assignment(&p).is_err());
        fs::write(&p, "d0 x\n").unwrap();
        assert!(read_assignment(&p).is_err());
    }
}
