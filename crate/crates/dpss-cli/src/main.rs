//! `dpss` — corpus generation, benchmarking, and verification for
//! distinguishing-prefix-aware string sorting.
//!
//! Subcommands: `generate` writes corpora, `bench` runs a pipeline and emits
//! one machine-readable report, `sort` emits the sorted permutation, and
//! `oracle` prints the exact relevant prefix lengths.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 verification failure.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dpss::approx::{approximate, approximate_relaxed, ApproxConfig, ApproxLengths};
use dpss::fingerprint::FingerprintParams;
use dpss::io as set_io;
use dpss::oracle;
use dpss::pipeline::{baseline_sort, reduce_alphabet, sort_truncated};
use dpss::semisort::SemisortStrategy;
use dpss::strings::{truncate, SortPermutation, StringSet, WorkStats};

const CSV_COLUMNS: &str = "variant,semisort,seed,confirm_boundaries,reduce_alphabet,threads,\
k,n,sigma,oracle_distinguishing_prefix_size,oracle_max_relevant_prefix,symbols_inspected,\
approx_symbols,truncate_symbols,sort_symbols,rounds_executed,per_round_active,\
approximate_ms,truncate_ms,sort_ms,total_ms,permutation_checksum,verified";

#[derive(Parser)]
#[command(
    name = "dpss",
    version,
    about = "Distinguishing-prefix-aware string sorting benchmarks",
    after_long_help = format!("CSV column order (--format=csv):\n  {CSV_COLUMNS}\n\nExit codes: 0 ok, 1 usage/IO error, 2 verification failure.")
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a corpus file (binary by default, text on request).
    Generate(GenerateArgs),
    /// Run one sorting pipeline over an input file and emit a report.
    Bench(BenchArgs),
    /// Sort an input file; --emit-order prints the permutation.
    Sort(SortArgs),
    /// Print exact relevant prefix lengths, D, and d as JSON.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Profile {
    /// Independent random strings of `--tail` symbols each.
    Random,
    /// `--clusters` groups share a length-`--prefix-len` prefix, diverge on
    /// one symbol, then carry position-hashed random tails: D stays fixed
    /// while `--tail` scales N.
    Clustered,
    /// Copy strings from `--dict-file` (any supported input format).
    Dict,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Encoding {
    Bin,
    Text,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    output: PathBuf,
    /// Number of strings (defaults to the dictionary size for --profile=dict).
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_enum, default_value = "random")]
    profile: Profile,
    #[arg(long, default_value_t = 2)]
    clusters: usize,
    #[arg(long, default_value_t = 4)]
    prefix_len: usize,
    /// Tail symbols per string (the whole length for --profile=random).
    #[arg(long, default_value_t = 16)]
    tail: usize,
    #[arg(long, default_value_t = 26)]
    sigma: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    dict_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "bin")]
    encoding: Encoding,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    /// Approximate from round 0, prune, sort: reads O(D) symbols.
    Full,
    /// Skip the first ⌈lg lg k⌉ rounds: reads O(k lg k + D) symbols.
    Relaxed,
    /// Sort the raw input with the positional radix baseline: reads N symbols.
    Baseline,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    /// Multikey comparison sort on prefix symbols.
    Compare,
    /// Sort (fingerprint, index) pairs.
    Fpsort,
    /// Hash-bucket grouping of fingerprints.
    Fpgroup,
    /// fpgroup while many strings are active, fpsort otherwise.
    Hybrid,
}

impl StrategyArg {
    fn to_strategy(self) -> SemisortStrategy {
        match self {
            StrategyArg::Compare => SemisortStrategy::PrefixCompare,
            StrategyArg::Fpsort => SemisortStrategy::FingerprintSort,
            StrategyArg::Fpgroup => SemisortStrategy::FingerprintGroup,
            StrategyArg::Hybrid => SemisortStrategy::Hybrid,
        }
    }

    fn name(self) -> &'static str {
        match self {
            StrategyArg::Compare => "compare",
            StrategyArg::Fpsort => "fpsort",
            StrategyArg::Fpgroup => "fpgroup",
            StrategyArg::Hybrid => "hybrid",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Toggle {
    On,
    Off,
}

impl Toggle {
    fn is_on(self) -> bool {
        self == Toggle::On
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Csv,
}

#[derive(Args)]
struct PipelineArgs {
    #[arg(long, value_enum, default_value = "full")]
    variant: VariantArg,
    #[arg(long, value_enum, default_value = "hybrid")]
    semisort: StrategyArg,
    /// Seed for the fingerprint base; echoed in reports for replay.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 0 means hardware parallelism.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Confirm group boundaries with direct prefix comparisons (exact) or
    /// trust fingerprints alone (correct w.h.p.).
    #[arg(long, value_enum, default_value = "on")]
    confirm_boundaries: Toggle,
    /// Rewrite the pruned strings over a dense alphabet before sorting.
    #[arg(long, value_enum, default_value = "off")]
    reduce_alphabet: Toggle,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    input: PathBuf,
    /// Report destination; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: ReportFormat,
    /// Also run the oracle: assert the permutation and the length bounds,
    /// exit 2 on any violation.
    #[arg(long)]
    verify: bool,
    /// Print the permutation (1-based, one index per line) to stdout;
    /// requires --output so the report does not interleave.
    #[arg(long)]
    emit_order: bool,
    #[command(flatten)]
    pipeline: PipelineArgs,
}

#[derive(Args)]
struct SortArgs {
    #[arg(long)]
    input: PathBuf,
    /// Permutation destination; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Print the permutation as newline-delimited 1-based indices.
    #[arg(long)]
    emit_order: bool,
    #[command(flatten)]
    pipeline: PipelineArgs,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let outcome = match cli.command {
        Command::Generate(args) => run_generate(&args).map(|()| ExitCode::SUCCESS),
        Command::Bench(args) => run_bench(&args),
        Command::Sort(args) => run_sort(&args).map(|()| ExitCode::SUCCESS),
        Command::Oracle(args) => run_oracle(&args).map(|()| ExitCode::SUCCESS),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

// ---------------------------------------------------------------- generate

/// Stateless position hash: extending a string appends symbols without
/// resampling earlier positions, which keeps D fixed while tails grow.
fn symbol_at(seed: u64, stream: u64, pos: u64, sigma: u32) -> u32 {
    let mut z = seed
        ^ stream.wrapping_mul(0xa076_1d64_78bd_642f)
        ^ pos.wrapping_mul(0xe703_7ed1_a0b4_28db);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    1 + ((z ^ (z >> 31)) % sigma as u64) as u32
}

fn generate_set(args: &GenerateArgs) -> Result<StringSet> {
    if args.sigma == 0 {
        bail!("--sigma must be at least 1");
    }
    match args.profile {
        Profile::Random => {
            let k = args.k.context("--k is required for --profile=random")?;
            let len = args.tail.max(1);
            let rows: Vec<Vec<u32>> = (0..k)
                .map(|i| {
                    (0..len)
                        .map(|pos| symbol_at(args.seed, i as u64, pos as u64, args.sigma))
                        .collect()
                })
                .collect();
            Ok(StringSet::from_rows(&rows, args.sigma)?)
        }
        Profile::Clustered => {
            let k = args.k.context("--k is required for --profile=clustered")?;
            let clusters = args.clusters.max(1);
            if clusters > args.sigma as usize {
                bail!("--clusters must not exceed --sigma (cluster ids are encoded in the first symbol)");
            }
            if k.div_ceil(clusters) > args.sigma as usize {
                bail!(
                    "cluster size {} exceeds --sigma {}; strings inside a cluster could not diverge on one symbol",
                    k.div_ceil(clusters),
                    args.sigma
                );
            }
            let rows: Vec<Vec<u32>> = (0..k)
                .map(|i| {
                    let cluster = (i % clusters) as u64;
                    let member = (i / clusters) as u32;
                    let mut row = Vec::with_capacity(args.prefix_len + 1 + args.tail);
                    for pos in 0..args.prefix_len {
                        row.push(if pos == 0 {
                            1 + cluster as u32
                        } else {
                            symbol_at(args.seed, 1 << 62 | cluster, pos as u64, args.sigma)
                        });
                    }
                    row.push(1 + member % args.sigma);
                    for pos in 0..args.tail {
                        let at = (args.prefix_len + 1 + pos) as u64;
                        row.push(symbol_at(args.seed, i as u64, at, args.sigma));
                    }
                    row
                })
                .collect();
            Ok(StringSet::from_rows(&rows, args.sigma)?)
        }
        Profile::Dict => {
            let path = args
                .dict_file
                .as_ref()
                .context("--dict-file is required for --profile=dict")?;
            let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
            let set = set_io::parse(&bytes)?;
            match args.k {
                Some(k) if k < set.k() => {
                    let rows: Vec<Vec<u32>> =
                        (0..k).map(|i| set.string(i).to_vec()).collect();
                    Ok(StringSet::from_rows(&rows, set.sigma())?)
                }
                _ => Ok(set),
            }
        }
    }
}

fn run_generate(args: &GenerateArgs) -> Result<()> {
    let set = generate_set(args)?;
    let mut bytes = Vec::new();
    match args.encoding {
        Encoding::Bin => set_io::write_binary(&set, &mut bytes)?,
        Encoding::Text => set_io::write_text(&set, &mut bytes)
            .context("corpus is not text-representable; use --encoding=bin")?,
    }
    fs::write(&args.output, bytes)
        .with_context(|| format!("writing {}", args.output.display()))?;
    Ok(())
}

// ------------------------------------------------------------------ bench

#[derive(Serialize)]
struct ConfigEcho {
    variant: String,
    semisort: String,
    seed: u64,
    confirm_boundaries: bool,
    reduce_alphabet: bool,
    threads: usize,
    input: String,
}

#[derive(Serialize)]
struct RunReport {
    config: ConfigEcho,
    k: usize,
    n: u64,
    sigma: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_distinguishing_prefix_size: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_max_relevant_prefix: Option<usize>,
    symbols_inspected: u64,
    approx_symbols: u64,
    truncate_symbols: u64,
    sort_symbols: u64,
    rounds_executed: usize,
    per_round_active: Vec<u64>,
    threads: usize,
    approximate_ms: f64,
    truncate_ms: f64,
    sort_ms: f64,
    total_ms: f64,
    permutation_checksum: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    verified: Option<bool>,
}

impl RunReport {
    fn csv_row(&self) -> String {
        let opt_u64 = |v: &Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
        let rounds: Vec<String> =
            self.per_round_active.iter().map(u64::to_string).collect();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{:.3},{:.3},{:.3},{:.3},{},{}",
            self.config.variant,
            self.config.semisort,
            self.config.seed,
            self.config.confirm_boundaries,
            self.config.reduce_alphabet,
            self.threads,
            self.k,
            self.n,
            self.sigma,
            opt_u64(&self.oracle_distinguishing_prefix_size),
            self.oracle_max_relevant_prefix
                .map(|x| x.to_string())
                .unwrap_or_default(),
            self.symbols_inspected,
            self.approx_symbols,
            self.truncate_symbols,
            self.sort_symbols,
            self.rounds_executed,
            rounds.join(";"),
            self.approximate_ms,
            self.truncate_ms,
            self.sort_ms,
            self.total_ms,
            self.permutation_checksum,
            self.verified.map(|v| v.to_string()).unwrap_or_default(),
        )
    }
}

struct Execution {
    permutation: SortPermutation,
    approx: Option<ApproxLengths>,
    approx_symbols: u64,
    truncate_symbols: u64,
    sort_symbols: u64,
    approximate_ms: f64,
    truncate_ms: f64,
    sort_ms: f64,
}

fn ms(from: Instant) -> f64 {
    from.elapsed().as_secs_f64() * 1e3
}

fn execute(set: &StringSet, args: &PipelineArgs) -> Execution {
    if args.variant == VariantArg::Baseline {
        let stats = WorkStats::new();
        let start = Instant::now();
        let permutation = baseline_sort(set, &stats);
        return Execution {
            permutation,
            approx: None,
            approx_symbols: 0,
            truncate_symbols: 0,
            sort_symbols: stats.symbols_inspected(),
            approximate_ms: 0.0,
            truncate_ms: 0.0,
            sort_ms: ms(start),
        };
    }

    let config = ApproxConfig {
        strategy: args.semisort.to_strategy(),
        params: FingerprintParams::from_seed(args.seed),
        confirm_boundaries: args.confirm_boundaries.is_on(),
    };
    let start = Instant::now();
    let approx = match args.variant {
        VariantArg::Full => approximate(set, &config),
        VariantArg::Relaxed => approximate_relaxed(set, &config),
        VariantArg::Baseline => unreachable!(),
    };
    let approximate_ms = ms(start);

    let start = Instant::now();
    let pruned = truncate(set, approx.lengths()).expect("approximation lengths fit");
    let truncate_symbols = pruned.total_len() as u64;
    let truncate_ms = ms(start);

    let sort_stats = WorkStats::new();
    let start = Instant::now();
    let permutation = if args.reduce_alphabet.is_on() {
        let (reduced, _) = reduce_alphabet(&pruned, &sort_stats);
        sort_truncated(&reduced, &sort_stats)
    } else {
        sort_truncated(&pruned, &sort_stats)
    };
    let sort_ms = ms(start);

    Execution {
        approx_symbols: approx.stats().symbols_inspected(),
        approx: Some(approx),
        permutation,
        truncate_symbols,
        sort_symbols: sort_stats.symbols_inspected(),
        approximate_ms,
        truncate_ms,
        sort_ms,
    }
}

/// Oracle checks behind --verify. Returns an explanation of the first
/// violation, if any.
fn verify(set: &StringSet, args: &PipelineArgs, exec: &Execution) -> Option<String> {
    let reference = oracle::reference_sort(set);
    if exec.permutation != reference {
        let at = exec
            .permutation
            .order()
            .iter()
            .zip(reference.order())
            .position(|(a, b)| a != b)
            .unwrap_or(0);
        return Some(format!(
            "permutation differs from the oracle at rank {at}: got string {}, expected {} (seed {})",
            exec.permutation.order()[at],
            reference.order()[at],
            args.seed
        ));
    }
    let Some(approx) = &exec.approx else {
        return None;
    };
    let info = oracle::relevant_prefixes(set);
    let k = set.k();
    let lg_k = (k.max(1) as f64).log2();
    let mut total = 0f64;
    for i in 0..k {
        let l = approx.lengths()[i];
        total += l as f64;
        if l < info.ell[i] || l > set.len_of(i) {
            return Some(format!(
                "L[{i}] = {l} below ℓ = {} or beyond |s| = {} (seed {})",
                info.ell[i],
                set.len_of(i),
                args.seed
            ));
        }
        if info.ell[i] == 0 {
            continue;
        }
        let bound = if approx.relaxed() && k >= 2 {
            2.0 * lg_k.max(info.ell[i] as f64)
        } else {
            2.0 * info.ell[i] as f64
        };
        if (l as f64) >= bound {
            return Some(format!(
                "L[{i}] = {l} reaches the bound {bound} (ℓ = {}, seed {})",
                info.ell[i], args.seed
            ));
        }
    }
    if approx.relaxed() && k >= 2 {
        let bound = 2.0 * k as f64 * lg_k + 2.0 * info.total as f64;
        if total >= bound {
            return Some(format!(
                "Σ L' = {total} reaches 2k·lg k + 2D = {bound} (seed {})",
                args.seed
            ));
        }
    }
    None
}

fn build_pool(threads: usize) -> Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(threads).build()?)
}

fn read_set(path: &Path) -> Result<StringSet> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(set_io::parse(&bytes)?)
}

fn write_or_stdout(path: Option<&PathBuf>, payload: &str) -> Result<()> {
    match path {
        Some(path) => fs::write(path, payload)
            .with_context(|| format!("writing {}", path.display()))?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(payload.as_bytes())?;
        }
    }
    Ok(())
}

fn order_lines(permutation: &SortPermutation) -> String {
    let mut lines = String::with_capacity(permutation.len() * 8);
    for &i in permutation.order() {
        lines.push_str(&(i + 1).to_string());
        lines.push('\n');
    }
    lines
}

fn run_bench(args: &BenchArgs) -> Result<ExitCode> {
    if args.emit_order && args.output.is_none() {
        bail!("--emit-order prints the permutation to stdout; route the report with --output");
    }
    let set = read_set(&args.input)?;
    let pool = build_pool(args.pipeline.threads)?;
    let threads = pool.current_num_threads();

    let total_start = Instant::now();
    let exec = pool.install(|| execute(&set, &args.pipeline));
    let total_ms = ms(total_start);

    let (oracle_info, verified, violation) = if args.verify {
        let violation = verify(&set, &args.pipeline, &exec);
        (Some(oracle::relevant_prefixes(&set)), Some(violation.is_none()), violation)
    } else {
        (None, None, None)
    };

    let variant_name = match args.pipeline.variant {
        VariantArg::Full => "full",
        VariantArg::Relaxed => "relaxed",
        VariantArg::Baseline => "baseline",
    };
    let report = RunReport {
        config: ConfigEcho {
            variant: variant_name.into(),
            semisort: args.pipeline.semisort.name().into(),
            seed: args.pipeline.seed,
            confirm_boundaries: args.pipeline.confirm_boundaries.is_on(),
            reduce_alphabet: args.pipeline.reduce_alphabet.is_on(),
            threads,
            input: args.input.display().to_string(),
        },
        k: set.k(),
        n: set.total_len() as u64,
        sigma: set.sigma(),
        oracle_distinguishing_prefix_size: oracle_info.as_ref().map(|i| i.total),
        oracle_max_relevant_prefix: oracle_info.as_ref().map(|i| i.longest),
        symbols_inspected: exec.approx_symbols + exec.truncate_symbols + exec.sort_symbols,
        approx_symbols: exec.approx_symbols,
        truncate_symbols: exec.truncate_symbols,
        sort_symbols: exec.sort_symbols,
        rounds_executed: exec
            .approx
            .as_ref()
            .map(|a| a.stats().rounds_executed())
            .unwrap_or(0),
        per_round_active: exec
            .approx
            .as_ref()
            .map(|a| a.stats().per_round_active())
            .unwrap_or_default(),
        threads,
        approximate_ms: exec.approximate_ms,
        truncate_ms: exec.truncate_ms,
        sort_ms: exec.sort_ms,
        total_ms,
        permutation_checksum: exec.permutation.checksum(),
        verified,
    };

    let payload = match args.format {
        ReportFormat::Json => format!("{}\n", serde_json::to_string(&report)?),
        ReportFormat::Csv => format!("{CSV_COLUMNS}\n{}\n", report.csv_row()),
    };
    write_or_stdout(args.output.as_ref(), &payload)?;

    if args.emit_order {
        print!("{}", order_lines(&exec.permutation));
    }
    if let Some(reason) = violation {
        eprintln!("verification failed: {reason}");
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn run_sort(args: &SortArgs) -> Result<()> {
    let set = read_set(&args.input)?;
    let pool = build_pool(args.pipeline.threads)?;
    let exec = pool.install(|| execute(&set, &args.pipeline));
    if args.emit_order {
        write_or_stdout(args.output.as_ref(), &order_lines(&exec.permutation))?;
    } else {
        let summary = format!(
            "sorted {} strings ({} symbols), {} symbol reads, checksum {}\n",
            set.k(),
            set.total_len(),
            exec.approx_symbols + exec.truncate_symbols + exec.sort_symbols,
            exec.permutation.checksum()
        );
        write_or_stdout(args.output.as_ref(), &summary)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct OracleReport {
    k: usize,
    ell: Vec<usize>,
    distinguishing_size: u64,
    longest_relevant: usize,
}

fn run_oracle(args: &OracleArgs) -> Result<()> {
    let set = read_set(&args.input)?;
    let info = oracle::relevant_prefixes(&set);
    let report = OracleReport {
        k: set.k(),
        ell: info.ell,
        distinguishing_size: info.total,
        longest_relevant: info.longest,
    };
    write_or_stdout(args.output.as_ref(), &format!("{}\n", serde_json::to_string(&report)?))?;
    Ok(())
}
