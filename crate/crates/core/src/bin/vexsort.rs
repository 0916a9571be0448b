use std::io;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};

use vexsort::bench::{parse_sizes, resolve_width, run_suite, Algo, BenchConfig, ElementKind, InputKind};

/// Sorts generated inputs, verifies every run and prints one CSV row per
/// (algorithm, size) with the median time over repetitions.
#[derive(Parser, Debug)]
#[command(name = "vexsort", version)]
struct Cli {
    /// Algorithms, comma separated: small-sort, partition, qs, qs-par, baseline-std.
    #[arg(long, value_delimiter = ',', default_value = "qs")]
    algo: Vec<Algo>,

    /// Element kind: i32, f64, kv-soa, kv-aos.
    #[arg(long, default_value = "i32")]
    kind: ElementKind,

    /// Input shape: uniform, sorted, reverse, constant, sawtooth.
    #[arg(long, default_value = "uniform")]
    input: InputKind,

    /// Sizes: `n`, `lo:hi:xF`, `lo:hi:+S`, comma separated. Defaults to every
    /// size up to 16 vectors for small-sort and 1000:1000000:x10 otherwise.
    #[arg(long)]
    sizes: Option<String>,

    #[arg(long, default_value_t = 5)]
    reps: usize,

    /// Lanes per vector. Falls back to VEXSORT_WIDTH, then to a 512-bit register.
    #[arg(long)]
    width: Option<usize>,

    #[arg(long, default_value_t = 1)]
    workers: usize,

    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Count the bytes moved by vector loads and stores.
    #[arg(long)]
    count_traffic: bool,

    /// Enable the min/max and already-sorted shortcuts in the Bitonic kernels.
    #[arg(long)]
    enable_skip_opt: bool,
}

fn config(cli: &Cli) -> vexsort::Result<BenchConfig> {
    Ok(BenchConfig {
        algos: cli.algo.clone(),
        element: cli.kind,
        input: cli.input,
        sizes: cli.sizes.as_deref().map(parse_sizes).transpose()?,
        reps: cli.reps,
        width: resolve_width(cli.width, cli.kind)?,
        workers: cli.workers,
        seed: cli.seed,
        count_traffic: cli.count_traffic,
        enable_skip_opt: cli.enable_skip_opt,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match config(&cli).and_then(|c| c.validate().map(|_| c)) {
        Ok(c) => c,
        Err(e) => Cli::command().error(ErrorKind::ValueValidation, e).exit(),
    };

    let mut out = csv::Writer::from_writer(io::stdout());
    let mut failures = 0;
    let result = run_suite(&config, |row| {
        if !row.verified {
            failures += 1;
            eprintln!("verification failed: {} {} n={}", row.algo, row.element_kind, row.n);
        }
        out.serialize(row)
            .and_then(|_| out.flush().map_err(csv::Error::from))
            .map_err(|e| vexsort::Error::InvalidConfig(format!("cannot write CSV: {e}")))
    });
    match result {
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Ok(_) if failures > 0 => ExitCode::FAILURE,
        Ok(_) => ExitCode::SUCCESS,
    }
}
