use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use imgchain::chain::{Chain, ChainError};
use imgchain::harness::{
    classify_rows, read_csv, render_entries, run_suite, write_attacks, write_dataset, write_results,
    Config, HarnessError, LogEntry, TruthMap, DEFAULT_SIZE,
};
use imgchain::imagecore::{read_image, SuiteKind};
use imgchain::network::{enroll_dataset, Network, NetworkError, ReplicaVerdict};
use imgchain::phash::AlgorithmId;
use imgchain::Verdict;

#[derive(Parser)]
#[command(name = "imgchain", version, about = "Perceptual-hash image ledger")]
struct Cli {
    /// key=value configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enroll every image of a directory into a new chain.
    Build {
        dataset: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Leading hex zeros required of every block hash.
        #[arg(long)]
        difficulty: Option<u32>,
    },
    /// Check a chain file's integrity.
    Verify { chain: PathBuf },
    /// Write the attack suite of one image.
    Attack {
        image: PathBuf,
        #[arg(long, value_parser = parse_kind)]
        kind: SuiteKind,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Find the enrolled image closest to an image.
    Query {
        chain: PathBuf,
        image: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Query every attack image of a directory and write logs and CSVs.
    Bench {
        chain: PathBuf,
        suite_dir: PathBuf,
        #[arg(long)]
        truth: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Label the attack behind a suite CSV.
    Classify { csv: PathBuf },
    /// Write the synthetic twelve-image dataset.
    Dataset {
        output: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SIZE)]
        size: u32,
    },
}

fn parse_kind(s: &str) -> Result<SuiteKind, String> {
    s.parse().map_err(|_| format!("expected one of blur, rotate, crop, flip; got `{s}`"))
}

/// Why a command failed, which decides the exit code.
enum Failure {
    /// Unreadable or malformed input.
    Data(String),
    /// A chain or replica that does not verify.
    Integrity(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Data(_) => 2,
            Failure::Integrity(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Data(m) | Failure::Integrity(m) => m,
        }
    }
}

fn is_integrity(err: &NetworkError) -> bool {
    matches!(
        err,
        NetworkError::ReplicaInvalid { .. }
            | NetworkError::Diverged { .. }
            | NetworkError::Chain(ChainError::Invalid(_))
    )
}

impl From<HarnessError> for Failure {
    fn from(err: HarnessError) -> Self {
        match &err {
            HarnessError::Network(n) if is_integrity(n) => Failure::Integrity(err.to_string()),
            _ => Failure::Data(err.to_string()),
        }
    }
}

impl From<NetworkError> for Failure {
    fn from(err: NetworkError) -> Self {
        HarnessError::from(err).into()
    }
}

impl From<ChainError> for Failure {
    fn from(err: ChainError) -> Self {
        match err {
            ChainError::Invalid(_) => Failure::Integrity(err.to_string()),
            _ => Failure::Data(err.to_string()),
        }
    }
}

impl From<imgchain::ImageError> for Failure {
    fn from(err: imgchain::ImageError) -> Self {
        Failure::Data(err.to_string())
    }
}

fn load_config(path: Option<&Path>) -> Result<Config, Failure> {
    match path {
        Some(p) => Ok(Config::load(p)?),
        None => Ok(Config::default()),
    }
}

fn load_chain(path: &Path) -> Result<Chain, Failure> {
    let chain = Chain::load(path)?;
    match chain.verify() {
        Verdict::Valid => Ok(chain),
        v => Err(Failure::Integrity(format!("{}: {v}", path.display()))),
    }
}

fn load_network(path: &Path, cfg: &Config) -> Result<Network, Failure> {
    let chain = load_chain(path)?;
    let algos = chain.algorithms().to_vec();
    let network = Network::from_chain(chain, &algos, cfg.replicas)?;
    match network.verify_replicas() {
        ReplicaVerdict::Consistent => Ok(network),
        v => Err(Failure::Integrity(format!("replicas disagree: {v:?}"))),
    }
}

fn truth_path(chain: &Path) -> PathBuf {
    let mut name = chain.as_os_str().to_owned();
    name.push(".truth");
    PathBuf::from(name)
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::Build {
            dataset,
            output,
            difficulty,
        } => {
            let difficulty = difficulty.unwrap_or(cfg.difficulty);
            let chain = enroll_dataset(&dataset, difficulty, &AlgorithmId::ALL)?;
            chain
                .save(&output)
                .map_err(|e| Failure::Data(format!("{}: {e}", output.display())))?;
            let truth = truth_path(&output);
            std::fs::write(&truth, TruthMap::from_chain(&chain).to_text())
                .map_err(|e| Failure::Data(format!("{}: {e}", truth.display())))?;
            println!(
                "enrolled {} images at difficulty {difficulty} into {} (ground truth: {})",
                chain.len() - 1,
                output.display(),
                truth.display()
            );
        }
        Command::Verify { chain } => {
            let loaded = load_chain(&chain)?;
            println!("{}: valid ({} blocks)", chain.display(), loaded.len());
        }
        Command::Attack {
            image,
            kind,
            output,
        } => {
            let img = read_image(&image)?;
            let stem = image
                .file_stem()
                .and_then(|s| s.to_str())
                .ok_or_else(|| Failure::Data(format!("{}: no file stem", image.display())))?;
            let written = write_attacks(&img, stem, kind, &cfg.transform, &output)?;
            println!("wrote {} {kind} attacks to {}", written.len(), output.display());
        }
        Command::Query { chain, image, json } => {
            let network = load_network(&chain, &cfg)?;
            let report = network.query(&read_image(&image)?)?;
            if json {
                let text = serde_json::to_string_pretty(&report)
                    .map_err(|e| Failure::Data(e.to_string()))?;
                println!("{text}");
            } else {
                let name = image.file_name().unwrap_or_default().to_string_lossy();
                let entry = LogEntry {
                    test_name: name.into_owned(),
                    best_score: report.winner.score.value(),
                    best_algo: report.winner.algo,
                    image_found: report.winner.image_ref.clone(),
                    found_block: report.winner.found_block,
                    per_algo: report
                        .per_device
                        .iter()
                        .map(|r| (r.algo, r.found_block, r.score.value()))
                        .collect(),
                };
                print!("{}", render_entries([entry]));
            }
        }
        Command::Bench {
            chain,
            suite_dir,
            truth,
            output,
        } => {
            let network = load_network(&chain, &cfg)?;
            let truth = TruthMap::load(&truth)?;
            let suites = run_suite(&network, &suite_dir, &truth)?;
            write_results(&output, &suites)?;
            for s in &suites {
                println!("{}: {}/{} correct", s.name(), s.correct_count(), s.records.len());
            }
        }
        Command::Classify { csv } => {
            let text = std::fs::read_to_string(&csv)
                .map_err(|e| Failure::Data(format!("{}: {e}", csv.display())))?;
            let sig = classify_rows(&read_csv(&text)?, &cfg.classifier)?;
            let e = sig.evidence;
            println!(
                "{}  (tests {}, min {:?}, max {:?}, range {:?}, slope {:?}, error rate {:?}, monotone {}, rising over first {} correct: {})",
                sig.label,
                e.count,
                e.min,
                e.max,
                e.range,
                e.slope,
                e.error_rate,
                e.monotone,
                e.correct_run,
                e.rising_until_miss
            );
        }
        Command::Dataset { output, size } => {
            let written = write_dataset(&output, size)?;
            println!("wrote {} images to {}", written.len(), output.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
