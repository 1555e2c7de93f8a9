//! `slabshear`: punching shear capacities, model training and comparison
//! from a slab-test CSV.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "slabshear",
    version,
    about = "Punching shear prediction for slab-column connections"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct Global {
    /// Seed for every random choice; required by `train` and `synthesize`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Root of the output tree; runs land in `<out>/<command>/<label>/`.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Run directory name. Defaults to a name derived from the arguments.
    #[arg(long, global = true)]
    label: Option<String>,
    /// Also write the command's main JSON file to this directory.
    #[arg(long, global = true, value_name = "DIR")]
    json: Option<PathBuf>,
    /// Worker threads for population evaluation (results do not change).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Parameter ranges and correlation matrix of a dataset.
    Stats { csv: PathBuf },
    /// Closed-form capacities per sample.
    Predict {
        csv: PathBuf,
        /// Methods to evaluate.
        #[arg(long, value_delimiter = ',', default_values_t = [CodeArg::Aci, CodeArg::Ec2, CodeArg::Cfp])]
        methods: Vec<CodeArg>,
        /// Cap the EC2 size term at 2.
        #[arg(long)]
        ec2_cap: bool,
    },
    /// Train FNN, PSO-FNN or BAT-FNN on one feature combination.
    Train(TrainArgs),
    /// Evaluate code methods and trained models on one dataset.
    Compare(CompareArgs),
    /// Write a synthetic dataset drawn inside the reference ranges.
    Synthesize {
        #[arg(long, default_value_t = 145)]
        n: usize,
        /// Relative noise amplitude on the load.
        #[arg(long, default_value_t = 0.02)]
        noise: f64,
        /// JSON range spec to draw from instead of the reference database.
        #[arg(long)]
        ranges: Option<PathBuf>,
    },
}

#[derive(Args)]
pub struct TrainArgs {
    csv: PathBuf,
    /// Feature combination 1..=7.
    #[arg(long)]
    combo: Option<u8>,
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
    /// JSON training spec; flags given alongside override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    train_fraction: Option<f64>,
    /// Optimizer iterations.
    #[arg(long)]
    iterations: Option<usize>,
    /// Swarm or bat population.
    #[arg(long)]
    population: Option<usize>,
    #[arg(long)]
    weight_bound: Option<f64>,
    /// Backprop epochs.
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    learning_rate: Option<f64>,
}

#[derive(Args)]
pub struct CompareArgs {
    csv: PathBuf,
    /// Trained model files (at most one per model kind).
    #[arg(long = "model")]
    models: Vec<PathBuf>,
    /// Code methods to include.
    #[arg(long, value_delimiter = ',', default_values_t = [CodeArg::Aci, CodeArg::Ec2, CodeArg::Cfp])]
    codes: Vec<CodeArg>,
    /// Evaluate on all samples or on the models' held-out split.
    #[arg(long, value_enum, default_value_t = Subset::All)]
    subset: Subset,
    /// Ratio deviation band for scatter flags.
    #[arg(long, default_value_t = 0.25)]
    band: f64,
    #[arg(long)]
    ec2_cap: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CodeArg {
    Aci,
    Ec2,
    Cfp,
}

impl std::fmt::Display for CodeArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let v = self.to_possible_value().expect("no skipped variants");
        f.write_str(v.get_name())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Fnn,
    Psofnn,
    Batfnn,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Subset {
    All,
    Test,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = cli.global;
    let result = match cli.command {
        Command::Stats { csv } => commands::stats(&g, &csv),
        Command::Predict {
            csv,
            methods,
            ec2_cap,
        } => commands::predict(&g, &csv, &methods, ec2_cap),
        Command::Train(args) => commands::train(&g, &args),
        Command::Compare(args) => commands::compare(&g, &args),
        Command::Synthesize { n, noise, ranges } => {
            commands::synthesize(&g, n, noise, ranges.as_deref())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
