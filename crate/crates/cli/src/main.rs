use std::process::ExitCode;

use clap::Parser;

use helixlab::{run, Cli, CliError, RunConfig, SEED_ENV};

fn write_report(path: &std::path::Path, json: &str) -> Result<(), CliError> {
    std::fs::write(path, json).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let env_seed = std::env::var(SEED_ENV).ok();
    let outcome = RunConfig::resolve(cli.command, &cli.options, env_seed.as_deref())
        .and_then(|cfg| run(&cfg).map(|report| (cfg, report)));
    let (cfg, report) = match outcome {
        Ok(v) => v,
        Err(e) => {
            eprintln!("helixlab: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let json = report.to_json();
    if let Some(path) = &cfg.out {
        if let Err(e) = write_report(path, &json) {
            eprintln!("helixlab: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    }
    if cli.options.json {
        println!("{json}");
    } else {
        print!("{}", report.table());
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
