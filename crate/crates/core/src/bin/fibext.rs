use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use fibext::cli::{export, run, Command, ExperimentConfig};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cmd {
    /// Build x_1..x_N and certify every row.
    Construct,
    /// Brute-force minimal points and the c1 scan.
    Oracle,
    /// Construct, then check ratios, exponents and the cover inequality.
    Verify,
    /// Dump convergents p_j / q_j.
    Convergents,
}

#[derive(Parser, Debug)]
#[command(name = "fibext", version, about = "Extremal numbers from Fibonacci-word continued fractions")]
struct Args {
    #[arg(value_enum)]
    command: Cmd,
    /// JSON experiment config
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides output.dir).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for the oracle search (output does not depend on it)
    #[arg(long)]
    threads: Option<usize>,
    /// Working-precision cap in bits
    #[arg(long = "precision-cap")]
    precision_cap: Option<u64>,
    /// Treat unknown certificates as failures.
    #[arg(long)]
    strict: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let command = match args.command {
        Cmd::Construct => Command::Construct,
        Cmd::Oracle => Command::Oracle,
        Cmd::Verify => Command::Verify,
        Cmd::Convergents => Command::Convergents,
    };
    let work = || -> fibext::Result<i32> {
        let config = ExperimentConfig::load(&args.config)?;
        let dir = args.out.clone().or_else(|| config.output.dir.clone()).unwrap_or_else(|| PathBuf::from("out"));
        let ex = config.validate(args.precision_cap)?;
        let report = run(command, &ex)?;
        for p in export(&report, &dir)? {
            println!("wrote {}", p.display());
        }
        let s = report.summary;
        println!("{}: {} pass, {} unknown, {} fail", command.name(), s.pass, s.unknown, s.fail);
        Ok(s.exit_code(args.strict))
    };
    let outcome = match args.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(work),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(3);
            }
        },
        None => work(),
    };
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
