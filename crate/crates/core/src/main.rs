use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use delayed_erasure::codebook::{
    load_codebook, save_codebook, validate_coherence, validate_list_decodability, CoherenceMode, ListDecodability,
    DEFAULT_MAX_CHECKS,
};
use delayed_erasure::harness::{
    build_codebook, read_records, run_on, summary_path_for, sweep, verify_summary, write_sweep, write_trace,
    ExperimentConfig, HarnessError, SweepAxis, TrialContext,
};
use delayed_erasure::Codebook;

#[derive(Parser)]
#[command(name = "delayed-erasure", version, about = "Erasure channels with a one-bit-delayed adversary")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a codebook and write it to a file.
    GenCode {
        #[command(flatten)]
        exp: ExperimentArgs,
    },
    /// Check coherence and, optionally, list-decodability of a codebook file.
    ValidateCode(ValidateArgs),
    /// Run the stochastic code against an eraser.
    Simulate {
        #[command(flatten)]
        exp: ExperimentArgs,
    },
    /// Run the wait-and-push attack against a deterministic code.
    Attack {
        #[command(flatten)]
        exp: ExperimentArgs,
    },
    /// Run one experiment per value of a parameter.
    Sweep {
        #[command(flatten)]
        exp: ExperimentArgs,
        /// p, epsilon, delta, n or num_messages
        #[arg(long)]
        axis: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        values: Vec<f64>,
    },
    /// Recompute a summary from its records file and compare.
    VerifySummary {
        #[arg(long)]
        records: PathBuf,
        /// Defaults to the summary written next to the records.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
}

#[derive(Args, Clone, Default)]
struct ExperimentArgs {
    /// Starting preset: stochastic or attack.
    #[arg(long)]
    preset: Option<String>,
    /// key=value settings file, applied after the preset.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    code_seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    /// A count, `all` for the full 2^(nR), or `default`.
    #[arg(long)]
    messages: Option<String>,
    /// high (1-2p+δ), low (1-2p-δ), a number, or none.
    #[arg(long)]
    code_rate: Option<String>,
    /// null, random, prefix or wait-push.
    #[arg(long)]
    strategy: Option<String>,
    #[arg(long)]
    random_q: Option<f64>,
    /// stochastic or deterministic.
    #[arg(long)]
    encoder: Option<String>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    wait1_len: Option<usize>,
    #[arg(long)]
    upper: Option<f64>,
    #[arg(long)]
    lower: Option<f64>,
    /// Record per-trial wall time (makes output non-reproducible).
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    zero_noise: bool,
    /// Use this codebook file instead of generating one.
    #[arg(long)]
    code: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the channel trace of one trial to this CSV file.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    trace_trial: u64,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    code: PathBuf,
    /// Defaults to K/2 - 1.
    #[arg(long)]
    eta1: Option<f64>,
    /// Defaults to ε/2.
    #[arg(long)]
    eta2: Option<f64>,
    /// Enumerate every pair and set instead of sampling.
    #[arg(long)]
    exhaustive: bool,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also check (w_u, w_e, s)-list-decodability, given as `w_u,w_e,s`.
    #[arg(long, value_delimiter = ',')]
    list: Option<Vec<usize>>,
    #[arg(long, default_value_t = DEFAULT_MAX_CHECKS)]
    max_checks: u64,
}

impl ExperimentArgs {
    fn resolve(&self, default_preset: &str) -> Result<ExperimentConfig, HarnessError> {
        let mut config = ExperimentConfig::preset(self.preset.as_deref().unwrap_or(default_preset))?;
        if let Some(path) = &self.config {
            config.apply_file(path)?;
        }
        let flags: [(&str, Option<String>); 17] = [
            ("seed", self.seed.map(|v| v.to_string())),
            ("code_seed", self.code_seed.map(|v| v.to_string())),
            ("trials", self.trials.map(|v| v.to_string())),
            ("n", self.n.map(|v| v.to_string())),
            ("p", self.p.map(|v| v.to_string())),
            ("epsilon", self.epsilon.map(|v| v.to_string())),
            ("delta", self.delta.map(|v| v.to_string())),
            ("c", self.c.map(|v| v.to_string())),
            ("messages", self.messages.clone()),
            ("code_rate", self.code_rate.clone()),
            ("strategy", self.strategy.clone()),
            ("random_q", self.random_q.map(|v| v.to_string())),
            ("encoder", self.encoder.clone()),
            ("workers", self.workers.map(|v| v.to_string())),
            ("wait1_len", self.wait1_len.map(|v| v.to_string())),
            ("upper", self.upper.map(|v| v.to_string())),
            ("lower", self.lower.map(|v| v.to_string())),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                config.set(key, &v)?;
            }
        }
        config.record_timing |= self.timing;
        config.zero_noise |= self.zero_noise;
        config.validate()?;
        Ok(config)
    }

    fn codebook(&self, config: &ExperimentConfig) -> Result<Codebook, HarnessError> {
        match &self.code {
            Some(path) => Ok(load_codebook(path)?),
            None => build_codebook(config),
        }
    }
}

fn run_command(exp: &ExperimentArgs, preset: &str) -> Result<(), HarnessError> {
    let config = exp.resolve(preset)?;
    let cb = exp.codebook(&config)?;
    let out = exp.out.clone().unwrap_or_else(|| PathBuf::from("records.csv"));
    let experiment = run_on(&cb, &config)?;
    let summary_path = experiment.write(&config, &out)?;
    if let Some(trace_path) = &exp.trace {
        let run = TrialContext::new(&cb, &config)?.run(exp.trace_trial)?;
        write_trace(&run.trace, BufWriter::new(File::create(trace_path)?))?;
    }
    print!("{}", experiment.summary_text(&config));
    eprintln!("records: {}\nsummary: {}", out.display(), summary_path.display());
    Ok(())
}

fn gen_code(exp: &ExperimentArgs) -> Result<(), HarnessError> {
    let mut config = exp.resolve("stochastic")?;
    if let Some(seed) = exp.seed {
        config.code_seed = seed;
    }
    let cb = build_codebook(&config)?;
    let out = exp.out.clone().unwrap_or_else(|| PathBuf::from("codebook.txt"));
    save_codebook(&cb, &out)?;
    println!("wrote {} messages of length {} to {}", cb.num_messages(), cb.n(), out.display());
    Ok(())
}

fn validate_code(args: &ValidateArgs) -> Result<bool, HarnessError> {
    let cb = load_codebook(&args.code)?;
    let eta1 = args.eta1.unwrap_or(cb.levels() as f64 / 2.0 - 1.0);
    let eta2 = args.eta2.unwrap_or(cb.params().epsilon() / 2.0);
    let mode = if args.exhaustive {
        CoherenceMode::Exhaustive { max_checks: args.max_checks }
    } else {
        CoherenceMode::Sampled { samples: args.samples, seed: args.seed }
    };
    let coherence = validate_coherence(&cb, eta1, eta2, mode)?;
    println!("coherence eta1={eta1} eta2={eta2}: {} checks, {} violations", coherence.checks, coherence.violations.len());
    for v in coherence.violations.iter().take(5) {
        println!("  pair ({}, {}) |T|={} stat={} bound={}", v.pair.0, v.pair.1, v.set.len(), v.stat, v.bound);
    }
    let mut ok = coherence.passed();
    if let Some(list) = &args.list {
        let &[w_u, w_e, s] = list.as_slice() else {
            return Err(HarnessError::Config("--list takes exactly three values: w_u,w_e,s".into()));
        };
        match validate_list_decodability(&cb, w_u, w_e, s, args.max_checks)? {
            ListDecodability::Pass { checks } => println!("list-decodability ({w_u},{w_e},{s}): pass ({checks} balls)"),
            ListDecodability::Fail(w) => {
                ok = false;
                let ids: Vec<String> = w.messages.iter().map(|m| m.to_string()).collect();
                println!("list-decodability ({w_u},{w_e},{s}): fail at T'={} centre={} messages {}", w.set, w.center, ids.join(","));
            }
        }
    }
    Ok(ok)
}

fn verify(records: &Path, summary: Option<&Path>) -> Result<(), HarnessError> {
    let rows = read_records(File::open(records)?)?;
    let summary_path = summary.map(Path::to_path_buf).unwrap_or_else(|| summary_path_for(records));
    verify_summary(&rows, &std::fs::read_to_string(&summary_path)?)?;
    println!("summary {} matches {} records", summary_path.display(), rows.len());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::GenCode { exp } => gen_code(exp),
        Command::ValidateCode(args) => match validate_code(args) {
            Ok(true) => Ok(()),
            Ok(false) => return ExitCode::from(1),
            Err(e) => Err(e),
        },
        Command::Simulate { exp } => run_command(exp, "stochastic"),
        Command::Attack { exp } => run_command(exp, "attack"),
        Command::Sweep { exp, axis, values } => (|| {
            let base = exp.resolve("stochastic")?;
            let axis: SweepAxis = axis.parse()?;
            let points = sweep(&base, axis, values)?;
            let out = exp.out.clone().unwrap_or_else(|| PathBuf::from("sweep.csv"));
            write_sweep(axis, &points, BufWriter::new(File::create(&out)?))?;
            for p in &points {
                println!("{}={} success_rate={} attack_success_rate={}", axis.name(), p.value, p.summary.success_rate, p.summary.attack_success_rate);
            }
            Ok(())
        })(),
        Command::VerifySummary { records, summary } => verify(records, summary.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
