use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gre::cli::{self, DimArg, EstimateOptions, ScreeOptions, SimulateOptions};
use gre::io::GraphFileFormat;
use gre::model::WeightFamily;
use gre::pipeline::Augmentation;

#[derive(Parser)]
#[command(name = "gre", version, about = "Robust low-rank estimation for populations of weighted graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Edgelist,
    Dense,
}

impl From<Format> for GraphFileFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Edgelist => GraphFileFormat::EdgeListCsv,
            Format::Dense => GraphFileFormat::DenseMatrixTsv,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Exponential,
    Poisson,
}

impl From<Family> for WeightFamily {
    fn from(f: Family) -> Self {
        match f {
            Family::Exponential => WeightFamily::Exponential,
            Family::Poisson => WeightFamily::Poisson,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte Carlo experiment and write mse.csv plus a manifest.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        replicates: Option<usize>,
        /// Write the first sampled population as dense graph files.
        #[arg(long)]
        dump_graphs: Option<PathBuf>,
    },
    /// Estimate the edge-parameter matrix from a directory of graphs.
    Estimate {
        graph_dir: PathBuf,
        #[arg(long, value_enum, default_value = "dense")]
        format: Format,
        #[arg(long, value_enum, default_value = "exponential")]
        family: Family,
        #[arg(long, default_value_t = 1.0)]
        q: f64,
        /// `auto` or a fixed embedding dimension.
        #[arg(long, default_value = "auto")]
        dim: String,
        #[arg(long, default_value_t = gre::pipeline::DEFAULT_ELBOW)]
        elbow: usize,
        /// Upper bound R for the optional truncation step.
        #[arg(long)]
        truncate: Option<f64>,
        /// Keep negative entries of the low-rank approximation.
        #[arg(long)]
        no_clamp: bool,
        /// Skip diagonal augmentation.
        #[arg(long)]
        no_augment: bool,
        /// Write the entry-wise estimate instead of the low-rank one.
        #[arg(long)]
        entrywise: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the scree of the augmented mean graph.
    Scree {
        graph_dir: PathBuf,
        #[arg(long, value_enum, default_value = "dense")]
        format: Format,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> gre::Result<()> {
    let threads = cli::threads_from_env();
    match cli.command {
        Command::Simulate {
            config,
            out,
            seed,
            replicates,
            dump_graphs,
        } => {
            let report = cli::simulate(&SimulateOptions {
                config,
                out_dir: out,
                seed,
                replicates,
                threads,
                dump_graphs,
            })?;
            println!("wrote {} ({} rows)", report.mse_csv.display(), report.rows);
        }
        Command::Estimate {
            graph_dir,
            format,
            family,
            q,
            dim,
            elbow,
            truncate,
            no_clamp,
            no_augment,
            entrywise,
            out,
        } => {
            let mut opts = EstimateOptions::new(graph_dir, format.into(), out);
            opts.family = family.into();
            opts.q = q;
            opts.dim = dim.parse::<DimArg>()?;
            opts.elbow = elbow;
            opts.truncate = truncate;
            opts.clamp_negative = !no_clamp;
            if no_augment {
                opts.augmentation = Augmentation::None;
            }
            opts.entrywise = entrywise;
            opts.threads = threads;
            let (est, sel) = cli::estimate(&opts)?;
            println!(
                "wrote {} ({}x{}, dimension {})",
                opts.out.display(),
                est.n(),
                est.n(),
                sel.chosen
            );
        }
        Command::Scree {
            graph_dir,
            format,
            out,
        } => {
            let eigs = cli::scree(&ScreeOptions {
                graph_dir,
                format: format.into(),
                out: out.clone(),
                threads,
            })?;
            println!("wrote {} ({} eigenvalues)", out.display(), eigs.len());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
