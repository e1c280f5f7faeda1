use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rwgm::harness::{
    generate_instance, run_algorithm, sweep, write_sweep_csv, Family, GeneratorSpec, DEFAULT_EPISODES,
};
use rwgm::hst::{frt_embed, lambda_for_n, EmbeddingParams};
use rwgm::metric::Instance;
use rwgm::online::{write_trace_csv, Algorithm};
use rwgm::Error;

#[derive(Parser)]
#[command(
    name = "rwgm-harness",
    version,
    about = "Online matching experiments on finite metrics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated instance as JSON.
    Generate {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 1.0)]
        range: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Run one algorithm on an instance.
    Run {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        algorithm: Algorithm,
        #[arg(long, default_value_t = DEFAULT_EPISODES)]
        episodes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Per-decision trace CSV.
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        /// Ratio report JSON; printed to stdout when omitted.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Mean ratios over a range of instance sizes.
    Sweep {
        #[arg(long)]
        family: Family,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "rwgm,greedy")]
        algorithms: Vec<Algorithm>,
        #[arg(long, default_value_t = DEFAULT_EPISODES)]
        episodes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 1.0)]
        range: f64,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Sample one tree over the instance's server points and dump it.
    Embed {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        dump_tree: Option<PathBuf>,
    },
}

fn writer(path: Option<&Path>) -> Result<Box<dyn Write>, Error> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn write_json<T: serde::Serialize>(path: Option<&Path>, value: &T) -> Result<(), Error> {
    let mut w = writer(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn read_instance(path: &Path) -> Result<Instance, Error> {
    let file = io::BufReader::new(File::open(path)?);
    Ok(serde_json::from_reader(file)?)
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Generate {
            family,
            n,
            dim,
            range,
            seed,
            output,
        } => {
            let inst = generate_instance(&GeneratorSpec {
                family,
                n,
                seed,
                dim,
                range,
            })?;
            write_json(output.as_deref(), &inst)
        }
        Command::Run {
            instance,
            algorithm,
            episodes,
            seed,
            output,
            report,
        } => {
            let inst = read_instance(&instance)?;
            let out = run_algorithm(&inst, algorithm, seed, episodes)?;
            if let Some(path) = output.as_deref() {
                write_trace_csv(writer(Some(path))?, &out.traces)?;
            }
            write_json(report.as_deref(), &out.report)
        }
        Command::Sweep {
            family,
            sizes,
            algorithms,
            episodes,
            seed,
            dim,
            range,
            output,
        } => {
            let template = GeneratorSpec {
                family,
                n: 1,
                seed: 0,
                dim,
                range,
            };
            let rows = sweep(&template, &sizes, &algorithms, episodes, seed)?;
            write_sweep_csv(writer(output.as_deref())?, &rows)?;
            Ok(())
        }
        Command::Embed {
            instance,
            seed,
            lambda,
            dump_tree,
        } => {
            let inst = read_instance(&instance)?;
            let (sub, mapping) = inst.submetric_of_servers()?;
            let lambda = match lambda {
                Some(l) => l,
                None => lambda_for_n(inst.size())?,
            };
            let tree = frt_embed(&sub, EmbeddingParams::new(lambda, seed)?)?.attach_servers(&inst, &mapping)?;
            write_json(dump_tree.as_deref(), &tree.dump_mapped(Some(&mapping.to_parent)))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", serde_json::json!({ "error": e.to_string() }));
            ExitCode::FAILURE
        }
    }
}
