use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use updsum_cli::experiments::{cmd_noise, cmd_sweep_nf, format_value, parse_grid, ExperimentRow};
use updsum_cli::run::{cmd_evaluate, cmd_summarize};
use updsum_cli::{CliError, CliResult, ConfigLayer, RunConfig};
use updsum_core::synth::{generate, SynthSpec, Vocabulary};
use updsum_core::Scorer;

#[derive(Parser)]
#[command(name = "updsum", version, about = "Query-oriented multi-document update summarizer")]
struct Cli {
    /// Log more (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Summarize set A then set B of every topic.
    Summarize(RunArgs),
    /// Score the summaries in the output directory with ROUGE.
    Evaluate {
        #[command(flatten)]
        run: RunArgs,
        /// Reference directory (default: <data-root>/refs).
        #[arg(long)]
        refs: Option<PathBuf>,
    },
    /// Rerun with foreign documents injected into every cluster.
    Noise {
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated noise shares in [0, 1).
        #[arg(long, default_value = "0,0.17,0.29,0.5")]
        fractions: String,
    },
    /// Rerun set B for every novelty factor in a grid.
    #[command(name = "sweep-nf")]
    SweepNf {
        #[command(flatten)]
        run: RunArgs,
        /// `start:stop:step` or a comma-separated list.
        #[arg(long, default_value = "0:1:0.04")]
        grid: String,
    },
    /// Write a seeded synthetic corpus.
    #[command(name = "gen-corpus")]
    GenCorpus {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 48)]
        topics: usize,
        /// Documents per set.
        #[arg(long, default_value_t = 10)]
        docs: usize,
        #[arg(long, default_value_t = 30)]
        sentences: usize,
        #[arg(long, value_enum, default_value_t = VocabularyArg::Shared)]
        vocabulary: VocabularyArg,
        #[arg(long, default_value_t = 2008)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VocabularyArg {
    Shared,
    Disjoint,
}

#[derive(Args)]
struct RunArgs {
    /// Flat `key = value` configuration file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    data_root: Option<PathBuf>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Fixed novelty factor (default 1/c).
    #[arg(long)]
    nf: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    redundancy_threshold: Option<f64>,
    #[arg(long, value_parser = parse_scorer)]
    scorer: Option<Scorer>,
    #[arg(long)]
    stoplist: Option<PathBuf>,
    #[arg(long)]
    lexicon: Option<PathBuf>,
    #[arg(long)]
    temporal_rules: Option<PathBuf>,
    #[arg(long)]
    markers: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: available cores).
    #[arg(long)]
    jobs: Option<usize>,
}

fn parse_scorer(s: &str) -> Result<Scorer, String> {
    s.parse().map_err(|e: updsum_core::Error| e.to_string())
}

impl RunArgs {
    fn resolve(self) -> CliResult<RunConfig> {
        let file = match &self.config {
            Some(path) => ConfigLayer::load(path)?,
            None => ConfigLayer::default(),
        };
        let flags = ConfigLayer {
            data_root: self.data_root,
            output_dir: self.output_dir,
            alpha: self.alpha,
            nf_override: self.nf.map(Some),
            lambda: self.lambda,
            budget: self.budget,
            redundancy_threshold: self.redundancy_threshold,
            scorer: self.scorer,
            stoplist: self.stoplist,
            lexicon: self.lexicon,
            temporal_rules: self.temporal_rules,
            markers: self.markers,
            seed: self.seed,
            jobs: self.jobs,
        };
        file.merged(flags).resolve()
    }
}

fn print_rows(label: &str, rows: &[ExperimentRow]) {
    println!("{label:>8} {:>9} {:>7} {:>9} {:>9} {:>9}", "summaries", "failed", "ROUGE-1", "ROUGE-2", "ROUGE-SU4");
    for r in rows {
        let scores = r.means.map_or_else(
            || format!("{:>9} {:>9} {:>9}", "-", "-", "-"),
            |m| format!("{:>9.5} {:>9.5} {:>9.5}", m.rouge1, m.rouge2, m.rouge_su4),
        );
        println!(
            "{:>8} {:>9} {:>7} {scores}",
            format_value(r.value),
            r.tally.summaries,
            r.tally.failures
        );
    }
}

fn partial(rows: &[ExperimentRow]) -> i32 {
    i32::from(rows.iter().any(|r| r.tally.failures > 0))
}

fn run(cli: Cli) -> CliResult<i32> {
    match cli.command {
        Command::Summarize(args) => {
            let tally = cmd_summarize(args.resolve()?)?;
            println!("{} summaries written, {} failed", tally.summaries, tally.failures);
            Ok(tally.exit_code())
        }
        Command::Evaluate { run, refs } => {
            let report = cmd_evaluate(&run.resolve()?, refs)?;
            print!("{}", report.to_table());
            Ok(0)
        }
        Command::Noise { run, fractions } => {
            let fractions = parse_grid(&fractions)?;
            let rows = cmd_noise(run.resolve()?, &fractions)?;
            print_rows("noise", &rows);
            Ok(partial(&rows))
        }
        Command::SweepNf { run, grid } => {
            let grid = parse_grid(&grid)?;
            let rows = cmd_sweep_nf(run.resolve()?, &grid)?;
            print_rows("nf", &rows);
            Ok(partial(&rows))
        }
        Command::GenCorpus {
            out,
            topics,
            docs,
            sentences,
            vocabulary,
            seed,
        } => {
            let spec = SynthSpec {
                topics,
                docs_per_set: docs,
                sentences_per_doc: sentences,
                vocabulary: match vocabulary {
                    VocabularyArg::Shared => Vocabulary::Shared,
                    VocabularyArg::Disjoint => Vocabulary::Disjoint,
                },
                seed,
                ..SynthSpec::default()
            };
            generate(&spec)?.write(&out)?;
            println!("wrote {topics} topics to {}", out.display());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(CliError::exit_code(&e) as u8)
        }
    }
}
