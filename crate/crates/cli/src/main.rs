use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use fracalderon_cli::commands::{self, Failure, Run, COMMANDS, CONVERGED};
use fracalderon_cli::config;

/// Fractional parabolic Calderon experiments.
#[derive(Parser, Debug)]
#[command(name = "fracalderon", version)]
struct Cli {
    /// One of forward, dnmap, alessandrini, extension, reconstruct, runge, selftest.
    #[arg(value_parser = clap::builder::PossibleValuesParser::new(COMMANDS))]
    command: String,
    #[arg(long)]
    config: PathBuf,
    /// Every output file goes under this directory.
    #[arg(long, default_value = "fracalderon-out")]
    out: PathBuf,
    /// Worker threads; 1 gives bitwise reproducible runs.
    #[arg(long)]
    threads: Option<usize>,
    /// Overrides `seed` from the config.
    #[arg(long)]
    seed: Option<u64>,
}

fn fail(f: &Failure) -> ExitCode {
    eprintln!("fracalderon: {f}");
    ExitCode::from(f.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            return fail(&Failure::Config("--threads must be at least 1".into()));
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            return fail(&Failure::Config(format!("thread pool: {e}")));
        }
    }
    let (mut cfg, text) = match config::load(&cli.config) {
        Ok(c) => c,
        Err(e) => return fail(&Failure::Config(e.to_string())),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }

    let start = Instant::now();
    let mut run = match Run::new(&cli.command, &cfg, &text, &cli.out) {
        Ok(r) => r,
        Err(f) => return fail(&f),
    };
    let outcome = commands::dispatch(&cli.command, &mut run);
    run.report.wall_time_seconds = start.elapsed().as_secs_f64();
    let report_path = cli.out.join("report.txt");
    run.report.output("report", &report_path);
    let text = run.report.to_text();
    if let Err(e) = std::fs::write(&report_path, &text) {
        return fail(&Failure::Config(format!("cannot write {}: {e}", report_path.display())));
    }
    print!("{text}");
    if let Err(f) = outcome {
        return fail(&f);
    }
    let failed: Vec<&str> = run
        .report
        .checks
        .iter()
        .filter(|(_, p)| !p)
        .map(|(k, _)| k.as_str())
        .collect();
    if failed.contains(&CONVERGED) {
        eprintln!("fracalderon: solver did not reach the requested tolerance");
        ExitCode::from(3)
    } else if !failed.is_empty() {
        eprintln!("fracalderon: failed checks: {}", failed.join(", "));
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
