use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use helixlab_core::numerics::DEFAULT_SEED;

use crate::CliError;

pub const SEED_ENV: &str = "HELIXLAB_SEED";

#[derive(Debug, Parser)]
#[command(name = "helixlab", version, about = "Numerical checks for helix submanifolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Extrinsic and helix report for one chart and direction
    Analyze,
    /// Offset formulas against the offset chart, and the constancy corollary
    Offsets,
    /// Randomized run of the rational trace lemma
    LemmaLa,
    /// Connection, curvature and Ricci table of Sol
    Sol,
    /// Graph over a base chart: minimality criterion and metric comparison
    Project,
    /// Every acceptance criterion
    Suite,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Offsets => "offsets",
            Command::LemmaLa => "lemma-la",
            Command::Sol => "sol",
            Command::Project => "project",
            Command::Suite => "suite",
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// Builtin chart selector, e.g. `cone:k=2` or `tilted_plane:theta=0.4`
    #[arg(long, global = true, conflicts_with = "spec")]
    pub chart: Option<String>,
    /// Polynomial immersion JSON file
    #[arg(long, global = true)]
    pub spec: Option<PathBuf>,
    /// Helix direction as comma-separated components
    #[arg(long, global = true, allow_hyphen_values = true, value_delimiter = ',')]
    pub direction: Option<Vec<f64>>,
    /// Scalar function for `project`, e.g. `radial:k=1` or `linear:c=1;0.5`
    #[arg(long, global = true)]
    pub function: Option<String>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Overridden by HELIXLAB_SEED when set
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Grid `a:b:n` of `n` evenly spaced values
    #[arg(long = "t-grid", global = true, allow_hyphen_values = true)]
    pub t_grid: Option<String>,
    /// Matrix size for `lemma-la`
    #[arg(long, global = true)]
    pub k: Option<usize>,
    /// Random trials for `lemma-la` and fields for `offsets`
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Write the JSON report here
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print JSON instead of a table
    #[arg(long, global = true)]
    pub json: bool,
}

/// Fully resolved, validated run configuration. Echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub chart: Option<String>,
    pub spec: Option<PathBuf>,
    pub direction: Option<Vec<f64>>,
    pub function: Option<String>,
    pub samples: usize,
    pub tol: f64,
    pub seed: u64,
    pub t_grid: Option<Vec<f64>>,
    pub k: usize,
    pub trials: usize,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn defaults(command: Command) -> RunConfig {
        RunConfig {
            command,
            chart: None,
            spec: None,
            direction: None,
            function: None,
            samples: 40,
            tol: match command {
                Command::Sol => 1e-8,
                Command::Project => 1e-5,
                Command::LemmaLa => 1e-9,
                _ => 1e-6,
            },
            seed: DEFAULT_SEED,
            t_grid: None,
            k: 4,
            trials: match command {
                Command::Offsets => 50,
                _ => 200,
            },
            out: None,
        }
    }

    /// Applies `options` over the defaults; `env_seed` is the raw value of
    /// HELIXLAB_SEED, if any.
    pub fn resolve(
        command: Command,
        options: &Options,
        env_seed: Option<&str>,
    ) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::defaults(command);
        cfg.chart = options.chart.clone();
        cfg.spec = options.spec.clone();
        cfg.direction = options.direction.clone();
        cfg.function = options.function.clone();
        cfg.out = options.out.clone();
        if let Some(n) = options.samples {
            cfg.samples = n;
        }
        if let Some(t) = options.tol {
            cfg.tol = t;
        }
        if let Some(k) = options.k {
            cfg.k = k;
        }
        if let Some(n) = options.trials {
            cfg.trials = n;
        }
        if let Some(s) = options.seed {
            cfg.seed = s;
        }
        if let Some(raw) = env_seed {
            cfg.seed = raw.trim().parse().map_err(|_| {
                CliError::Config(format!("{SEED_ENV}=`{raw}` is not an unsigned integer"))
            })?;
        }
        if let Some(g) = &options.t_grid {
            cfg.t_grid = Some(parse_grid(g)?);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.samples == 0 {
            return Err(CliError::Config("--samples must be at least 1".into()));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::Config("--tol must be positive and finite".into()));
        }
        if self.k == 0 || self.k > helixlab_core::trace_lemma::MAX_K {
            return Err(CliError::Config(format!(
                "--k must be in 1..={}",
                helixlab_core::trace_lemma::MAX_K
            )));
        }
        if self.trials == 0 {
            return Err(CliError::Config("--trials must be at least 1".into()));
        }
        if let Some(d) = &self.direction {
            if d.iter().any(|x| !x.is_finite()) || d.iter().all(|x| *x == 0.0) {
                return Err(CliError::Config("--direction must be finite and nonzero".into()));
            }
        }
        Ok(())
    }
}

/// Parses `a:b:n` into `n` evenly spaced values from `a` to `b`.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Config(format!("--t-grid `{text}` is not of the form a:b:n"));
    let parts: Vec<&str> = text.split(':').collect();
    let [a, b, n] = parts.as_slice() else {
        return Err(bad());
    };
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    if n == 0 || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    Ok((0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect())
}
