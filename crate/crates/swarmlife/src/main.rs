use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use swarmlife::config::ExperimentConfig;
use swarmlife::{genome_io, replay, run, Rayon};
use swarmlife_core::seed::{self, Stream};

#[derive(Parser)]
#[command(name = "swarmlife", version, about = "Lifelong neuroevolution of swarm foraging controllers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct ConfigArgs {
    /// TOML experiment configuration; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a key, e.g. `--set neat.elitism=3` or `--set seeds=[1,2]`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

impl ConfigArgs {
    fn load(&self) -> Result<ExperimentConfig, swarmlife::ConfigError> {
        match &self.config {
            Some(p) => ExperimentConfig::load(p, &self.overrides),
            None => ExperimentConfig::with_overrides("", &self.overrides),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the lifelong schedule once per configured seed.
    Evolve {
        #[command(flatten)]
        config: ConfigArgs,
        /// Continue from each run's latest checkpoint when present.
        #[arg(long)]
        resume: bool,
    },
    /// Repeat the experiment for each regularization coefficient.
    SweepLambda {
        #[command(flatten)]
        config: ConfigArgs,
        /// Comma-separated coefficients, e.g. 5,10,15.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        lambdas: Vec<f64>,
    },
    /// Score a genome file on one or more tasks.
    Eval {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        genome: PathBuf,
        /// Task id (target color); repeat for several tasks.
        #[arg(long, required = true)]
        task: Vec<String>,
        #[arg(long, default_value_t = 100)]
        n_envs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print every episode total as well as the mean.
        #[arg(long)]
        episodes: bool,
    },
    /// Record one episode as a trajectory log and PNG frames.
    Replay {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        genome: PathBuf,
        #[arg(long)]
        task: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Write only the trajectory log.
        #[arg(long)]
        no_frames: bool,
    },
}

fn execute(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Evolve { config, resume } => {
            let cfg = config.load()?;
            let root = run::output_dir(&cfg);
            let evolved = run::evolve(&cfg, &root, resume, &Rayon)?;
            for r in &evolved.runs {
                let last = r.metrics().generations.last();
                println!(
                    "seed {} lambda {} generations {} final best {}",
                    r.master_seed(),
                    r.config().regularizer.lambda,
                    r.metrics().generations.len(),
                    last.map_or("-".into(), |g| g.best_fitness.to_string())
                );
            }
            println!("manifest {}", root.join("manifest.json").display());
        }
        Command::SweepLambda { config, lambdas } => {
            let cfg = config.load()?;
            let root = run::output_dir(&cfg);
            let rows = run::sweep_lambda(&cfg, &lambdas, &root, &Rayon)?;
            println!("lambda\ttask\tC\tprevious\tR_pop\tR_top\tF_pop\tF_top");
            for r in rows {
                println!(
                    "{}\t{}\t{:.2}\t{}\t{:.2}\t{:.2}\t{:.2}\t{:.2}",
                    r.lambda, r.task_id, r.c, r.previous_task_id, r.r_pop, r.r_top, r.f_pop, r.f_top
                );
            }
            println!("table {}", root.join("sweep.csv").display());
        }
        Command::Eval {
            config,
            genome,
            task,
            n_envs,
            seed,
            episodes,
        } => {
            let cfg = config.load()?;
            let g = genome_io::read(&genome)?;
            for t in &task {
                let spec = cfg.task_by_id(t)?;
                let report = run::evaluate_genome(&g, &cfg, &spec, n_envs, seed, &Rayon)?;
                println!("task {} n_envs {} mean {}", report.task_id, n_envs, report.mean);
                if episodes {
                    for (i, e) in report.episodes.iter().enumerate() {
                        println!("  episode {i} {e}");
                    }
                }
            }
        }
        Command::Replay {
            config,
            genome,
            task,
            seed: s,
            out,
            no_frames,
        } => {
            let cfg = config.load()?;
            let g = genome_io::read(&genome)?;
            let spec = cfg.task_by_id(&task)?;
            let episode = seed::derive(s, Stream::Replay, &[seed::label_hash(&spec.id)]);
            let (rep, log) = replay::replay_to_dir(&g, &cfg.arena(), &spec, episode, &out, !no_frames)?;
            println!(
                "steps {} reward {} log {}",
                rep.records.len(),
                rep.total_reward,
                log.display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
