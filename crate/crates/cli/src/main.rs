use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use bareprover::features::FeatureConfig;
use bareprover::guidance::GuidanceMode;
use bareprover::harness::{
    builtin_schedule, evaluate_corpus, load_corpus, merge, parse_report_csv, report_csv, report_svg, run_loop,
    DataFile, LoopMode, RunConfig, TrainingStore,
};
use bareprover::learning::{deserialize, serialize, train, TrainParams};
use bareprover::logic::parse_problem_file;
use bareprover::saturation::{proof_listing, saturate, verify_proof, Limits};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bareprover", version, about = "Saturation prover with learned clause selection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(multiple = false)]
struct LimitArgs {
    /// Stop after this many given-clause selections (default 1000)
    #[arg(long)]
    max_selections: Option<usize>,
    /// Stop after this many seconds of wall time
    #[arg(long)]
    wall_secs: Option<f64>,
}

impl LimitArgs {
    fn limits(&self) -> Limits {
        Limits {
            max_selections: self.max_selections,
            wall_seconds: self.wall_secs,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyName {
    E0,
    Solo,
    Coop,
}

#[derive(Subcommand)]
enum Command {
    /// Run the prover on one TPTP CNF file
    Prove {
        file: PathBuf,
        #[arg(long, value_enum, conflicts_with_all = ["solo", "coop"])]
        strategy: Option<StrategyName>,
        /// Model file for solo or coop selection
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long, requires = "model", conflicts_with = "coop")]
        solo: bool,
        #[arg(long, requires = "model")]
        coop: bool,
        #[command(flatten)]
        limits: LimitArgs,
        /// Print the proof after an Unsatisfiable result
        #[arg(long)]
        proof: bool,
    },
    /// Run E0 over a corpus and write the harvested training examples
    Featurize {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value_t = 15)]
        bits: u32,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        limits: LimitArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Train a boosted-tree model from training-data files
    Train {
        #[arg(long, num_args = 1.., required = true)]
        data: Vec<PathBuf>,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        trees: usize,
        #[arg(long, default_value_t = 0.2)]
        eta: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        /// Feature bits to train under (default: those of the first file)
        #[arg(long)]
        bits: Option<u32>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the proving/learning loop over a corpus
    Loop {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        schedule: String,
        #[arg(long)]
        loops: usize,
        #[arg(long, value_enum, default_value = "solo")]
        mode: ModeName,
        #[arg(long, num_args = 1..)]
        boost: Vec<PathBuf>,
        #[arg(long, default_value_t = 4)]
        boost_cutoff: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        limits: LimitArgs,
        /// Parallel prover instances (default: available cores)
        #[arg(long)]
        workers: Option<usize>,
        /// Record wall-clock seconds in the reports
        #[arg(long)]
        timings: bool,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Render loop reports
    Report {
        #[arg(long = "in", num_args = 1.., required = true)]
        dirs: Vec<PathBuf>,
        #[arg(long, conflicts_with = "svg", required_unless_present = "svg")]
        csv: bool,
        #[arg(long)]
        svg: bool,
        /// Write to a file instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeName {
    Solo,
    Coop,
}

enum Failure {
    Usage(String),
    Internal(String),
}

fn internal(e: impl std::fmt::Display) -> Failure {
    Failure::Internal(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Internal(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Failure::Internal(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, text).map_err(|e| Failure::Internal(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Prove {
            file,
            strategy,
            model,
            solo,
            coop,
            limits,
            proof,
        } => {
            let problem = parse_problem_file(&file).map_err(internal)?;
            let name = match (strategy, solo, coop) {
                (Some(StrategyName::Solo), ..) | (None, true, _) => "solo",
                (Some(StrategyName::Coop), ..) | (None, _, true) => "coop",
                (Some(StrategyName::E0), ..) => "e0",
                (None, false, false) if model.is_some() => "coop",
                _ => "e0",
            };
            let model = match &model {
                Some(p) => Some(Arc::new(deserialize(&read(p)?).map_err(internal)?)),
                None => None,
            };
            let mode = GuidanceMode::from_name(name, model).map_err(|e| Failure::Usage(e.to_string()))?;
            let strategy = mode.strategy_for(&problem).map_err(internal)?;
            let result = saturate(&problem, &strategy, &limits.limits());
            println!("# SZS status {} for {}", result.status.szs(), problem.name);
            println!(
                "# selections: {}, generated: {}, tautologies: {}, subsumed: {}",
                result.stats.selections,
                result.stats.generated,
                result.stats.discarded_tautology,
                result.stats.discarded_subsumed
            );
            if proof {
                if let Some(dag) = result.proof() {
                    verify_proof(&dag, &problem).map_err(|e| Failure::Internal(format!("proof check failed: {e:?}")))?;
                    println!("# SZS output start CNFRefutation for {}", problem.name);
                    print!("{}", proof_listing(&dag, &problem));
                    println!("# SZS output end CNFRefutation for {}", problem.name);
                }
            }
            Ok(())
        }
        Command::Featurize {
            corpus,
            bits,
            out,
            limits,
            seed,
        } => {
            let cfg = FeatureConfig::new(bits).map_err(|e| Failure::Usage(e.to_string()))?;
            let corpus = load_corpus(&corpus).map_err(internal)?;
            let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
            let runs = evaluate_corpus(&corpus, &GuidanceMode::Baseline, &limits.limits(), seed, workers).map_err(internal)?;
            let mut store = TrainingStore::new();
            store.add_runs(&runs, -1);
            write(&out, &store.to_data_text(cfg))?;
            let solved = runs.iter().filter(|r| r.solved()).count();
            println!("solved {solved}/{}; {} examples ({} positive)", runs.len(), store.len(), store.positives());
            Ok(())
        }
        Command::Train {
            data,
            depth,
            trees,
            eta,
            lambda,
            bits,
            out,
        } => {
            let files: Vec<DataFile> = data.iter().map(|p| DataFile::load(p)).collect::<Result<_, _>>().map_err(internal)?;
            let cfg = match bits {
                Some(b) => FeatureConfig::new(b).map_err(|e| Failure::Usage(e.to_string()))?,
                None => files[0].config,
            };
            let params = TrainParams {
                depth,
                trees,
                eta,
                lambda,
                min_child: 1,
            };
            params.validate().map_err(|e| Failure::Usage(e.to_string()))?;
            let merged = merge(&TrainingStore::new(), &files, 0, 1, cfg).map_err(internal)?;
            let model = train(&merged.dataset, &params).map_err(internal)?;
            write(&out, &serialize(&model))?;
            println!(
                "trained {trees} trees of depth <= {depth} on {} rows ({} positive)",
                merged.dataset.len(),
                merged.dataset.positives()
            );
            Ok(())
        }
        Command::Loop {
            corpus,
            schedule,
            loops,
            mode,
            boost,
            boost_cutoff,
            seed,
            limits,
            workers,
            timings,
            out_dir,
        } => {
            let entries = builtin_schedule(&schedule, loops).map_err(|e| Failure::Usage(e.to_string()))?;
            let mode = match mode {
                ModeName::Solo => LoopMode::Solo,
                ModeName::Coop => LoopMode::Coop,
            };
            let mut cfg = RunConfig::new(mode, entries);
            cfg.limits = limits.limits();
            cfg.boost = boost;
            cfg.boost_cutoff = boost_cutoff;
            cfg.seed = seed;
            if let Some(w) = workers {
                cfg.workers = w;
            }
            cfg.timings = timings;
            cfg.out_dir = Some(out_dir.clone());
            let outcome = run_loop(&corpus, &cfg).map_err(internal)?;
            print!("{}", report_csv(&outcome.report));
            Ok(())
        }
        Command::Report { dirs, csv, svg: _, out } => {
            let mut series = Vec::new();
            for d in &dirs {
                let report = parse_report_csv(&read(&d.join("report.csv"))?).map_err(internal)?;
                let label = d.file_name().map_or_else(|| d.display().to_string(), |n| n.to_string_lossy().into_owned());
                series.push((label, report));
            }
            let text = if csv {
                series.iter().map(|(_, r)| report_csv(r)).collect::<Vec<_>>().join("\n")
            } else {
                report_svg(&series)
            };
            match out {
                Some(p) => write(&p, &text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
