use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "barron-lab", version, about = "Barron-function approximation and classification experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a shallow ReLU approximant of a Barron function spec.
    SynthBarron(SynthBarron),
    /// Disagreement of the constructive classifier against the set, per N and seed.
    RateSweep(RateSweep),
    /// Estimation experiment: width rule, approximate ERM and risk, per m and seed.
    ErmSweep(ErmSweep),
    /// Small self-contained demonstrations.
    #[command(subcommand)]
    Demo(Demo),
}

#[derive(Debug, Args)]
pub struct SynthBarron {
    /// Barron function spec (JSON).
    #[arg(long)]
    pub spec: PathBuf,
    /// Sample count; the hidden layer has 8N neurons.
    #[arg(long = "N")]
    pub n: usize,
    /// Candidate draws for best-of-K selection.
    #[arg(long = "K", default_value_t = 8)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output network file (JSON).
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RateSweep {
    /// Barron-boundary set (JSON).
    #[arg(long)]
    pub omega: PathBuf,
    /// Measure file (JSON) or preset name: uniform, product, tilted.
    #[arg(long)]
    pub measure: String,
    /// Comma-separated widths.
    #[arg(long = "N", value_delimiter = ',', num_args = 1..)]
    pub n: Vec<usize>,
    /// Monte-Carlo points per estimate.
    #[arg(long, default_value_t = 100_000)]
    pub mc: usize,
    /// Comma-separated seeds.
    #[arg(long, value_delimiter = ',', num_args = 1.., default_value = "0")]
    pub seeds: Vec<u64>,
    #[arg(long = "K", default_value_t = 8)]
    pub k: usize,
    /// Output threshold counted as "inside".
    #[arg(long, default_value_t = 0.5)]
    pub threshold: f64,
    /// Output CSV.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ErmSweep {
    /// Barron-boundary set (JSON) supplying the labels.
    #[arg(long)]
    pub omega: PathBuf,
    /// Measure file (JSON) or preset name: uniform, product, tilted.
    #[arg(long)]
    pub measure: String,
    /// Comma-separated sample sizes.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub m: Vec<usize>,
    #[arg(long, value_delimiter = ',', num_args = 1.., default_value = "0")]
    pub seeds: Vec<u64>,
    #[arg(long, default_value_t = 100_000)]
    pub mc: usize,
    #[arg(long, default_value_t = 8)]
    pub restarts: usize,
    #[arg(long, default_value_t = 5000)]
    pub steps: usize,
    #[arg(long, default_value_t = 0.1)]
    pub initial_step: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub decay: f64,
    /// Output CSV.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Demo {
    /// Count labelings of n points realized by bump-boundary horizon sets.
    Shatter {
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Curvature versus spectral norm for modulated cutoffs.
    Gap {
        #[arg(long, value_delimiter = ',', num_args = 1.., default_value = "1,2,4,8")]
        n: Vec<u32>,
        #[arg(long, default_value_t = 0.25)]
        eps: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// ReLU-to-Heaviside conversion of a single atom rho(x) on [-1, 1].
    Heaviside {
        #[arg(long = "Q", default_value_t = 10_000)]
        q: usize,
        #[arg(long = "R", default_value_t = 1.0)]
        r: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}
