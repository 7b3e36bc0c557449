use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use online_pca::eigen::EigenConfig;
use online_pca::harness::io::{manifest_entries, manifest_path, with_sweep, write_manifest, write_records, write_sweep};
use online_pca::harness::verify::{verify, VerifyOptions};
use online_pca::harness::{run, sweep, ExperimentConfig, LearnerKind, LearnerParams, Sigma2, SweepAxis};
use online_pca::perturb::NoiseMode;
use online_pca::streams::{StreamKind, StreamSpec};

#[derive(Parser)]
#[command(name = "online-pca", version, about = "Online PCA regret experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write the regret curve.
    Run(RunArgs),
    /// Repeat an experiment over one axis and write final regrets.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// One of T, n, sigma2.
        #[arg(long)]
        axis: SweepAxis,
        /// Comma-separated axis values.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
    },
    /// Run the verification suite.
    Verify {
        /// Only checks whose id contains this substring.
        #[arg(long)]
        filter: Option<String>,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value = "fpl")]
    learner: LearnerKind,
    /// sparse-iid, dense-iid, adversarial, diagonal or file:PATH.
    #[arg(long, default_value = "sparse-iid")]
    stream: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long = "t-horizon")]
    t_horizon: usize,
    /// A number or "auto".
    #[arg(long, default_value = "auto")]
    sigma2: Sigma2,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long = "noise-mode", default_value = "fixed")]
    noise_mode: NoiseMode,
    #[arg(long, default_value_t = 20)]
    seeds: u64,
    #[arg(long = "seed-base", default_value_t = 0)]
    seed_base: u64,
    #[arg(long = "stream-seed", default_value_t = 0)]
    stream_seed: u64,
    #[arg(long, default_value_t = 1.0)]
    spike: f64,
    #[arg(long = "report-every")]
    report_every: Option<usize>,
    #[arg(long = "tie-break-seed", default_value_t = 0)]
    tie_break_seed: u64,
    #[arg(long)]
    out: PathBuf,
}

impl RunArgs {
    fn config(&self) -> Result<ExperimentConfig, String> {
        let eigen = EigenConfig::default().with_seed(self.tie_break_seed);
        let kind = match self.stream.as_str() {
            "sparse-iid" => StreamKind::SparseIid { spike: self.spike },
            "dense-iid" => StreamKind::DenseIid {
                profile: None,
                rotate_each_trial: false,
            },
            "adversarial" => StreamKind::AdversarialAlternating { tie_break: eigen },
            "diagonal" => StreamKind::DiagonalExpert { weights: None },
            s => match s.strip_prefix("file:") {
                Some(p) => StreamKind::FromFile { path: p.into() },
                None => return Err(format!("unknown stream '{s}'")),
            },
        };
        let learner = LearnerParams {
            sigma2: self.sigma2,
            eta: self.eta,
            eigen,
            noise_mode: self.noise_mode,
            ..LearnerParams::new(self.learner)
        };
        let stream = StreamSpec::new(kind, self.n, self.t_horizon, self.stream_seed);
        let mut cfg = ExperimentConfig::new(learner, stream, self.k)
            .with_seeds(self.seed_base..self.seed_base + self.seeds);
        if let Some(r) = self.report_every {
            cfg.report_every = r;
        }
        Ok(cfg)
    }
}

fn execute(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Run(args) => {
            let cfg = args.config()?;
            let out = run(&cfg).map_err(|e| e.to_string())?;
            write_records(&args.out, &out.records).map_err(|e| e.to_string())?;
            write_manifest(&manifest_path(&args.out), &manifest_entries(&cfg, &out.resolved))
                .map_err(|e| e.to_string())?;
            let last = out.last();
            println!(
                "t={} regret={:.4} ± {:.4} comparator={:.4}",
                last.t, last.regret_mean, last.regret_stderr, last.comparator
            );
            Ok(true)
        }
        Command::Sweep { run: args, axis, values } => {
            let cfg = args.config()?;
            let resolved = cfg.resolve().map_err(|e| e.to_string())?;
            let rows = sweep(&cfg, axis, &values).map_err(|e| e.to_string())?;
            write_sweep(&args.out, &rows).map_err(|e| e.to_string())?;
            let entries = with_sweep(manifest_entries(&cfg, &resolved), axis, &values);
            write_manifest(&manifest_path(&args.out), &entries).map_err(|e| e.to_string())?;
            for r in &rows {
                println!("{}={} regret={:.4} ± {:.4}", axis, r.value, r.regret_mean, r.regret_stderr);
            }
            Ok(true)
        }
        Command::Verify { filter } => {
            let report = verify(&VerifyOptions {
                filter,
                sparse_sigma2: None,
            });
            Ok(report.all_passed())
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
