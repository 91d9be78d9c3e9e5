use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use g2frob_cli::{run, selftest, Fault, RunConfig, Scan};

/// Verification scans for Frobenius pull-backs of rank-2 bundles on genus-2
/// curves in characteristic 2.
#[derive(Parser, Debug)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// Curve file (field degree, modulus, h, f).
    #[arg(long)]
    curve: Option<PathBuf>,
    /// Degree of the base change on which classes are enumerated.
    #[arg(long, default_value_t = 1)]
    ext: u32,
    /// Which verification to run.
    #[arg(long, value_enum, default_value_t = Scan::All)]
    scan: Scan,
    /// Where to write the JSON report.
    #[arg(long, default_value = "report.json")]
    out: PathBuf,
    /// Seed for randomized polynomial factoring (results do not depend on it).
    #[arg(long, default_value_t = g2frob::poly::DEFAULT_FACTOR_SEED)]
    seed: u64,
    /// Worker threads (0: one per core).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the built-in property suites on the reference curves.
    Selftest {
        #[arg(long, default_value_t = g2frob::selftest::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<Fault>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global() {
            eprintln!("input error: {e}");
            return ExitCode::from(2);
        }
    }
    let code = match cli.command {
        Some(Command::Selftest { seed, inject_fault }) => selftest(seed, inject_fault),
        None => {
            let Some(curve_path) = cli.curve else {
                eprintln!("input error: --curve is required");
                return ExitCode::from(2);
            };
            run(&RunConfig { curve_path, field_ext: cli.ext, scan: cli.scan, out_path: cli.out, seed: cli.seed })
        }
    };
    ExitCode::from(code as u8)
}
