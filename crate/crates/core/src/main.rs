use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use modsearch::adversary::{mod_lower_bound, Adversary};
use modsearch::cli::replay::{replay_strategy, replay_transcript};
use modsearch::cli::{
    emit_bound_table, generate_random_tournament, run_experiment, serve, write_rows,
    AlgorithmName, ExperimentConfig, Format, OracleKind, OrderKind,
};
use modsearch::exact::{exact_complexity, SolverOptions, StrategyTree, Task};
use modsearch::oracle::{OracleSession, Transcript};
use modsearch::tournament::{pair_count, Tournament};

#[derive(Parser)]
#[command(name = "modsearch", version, about = "Inquiry-cost experiments for MOD vertices and kings in tournaments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a seeded random tournament fixture.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an algorithm against an oracle for a number of trials.
    Run {
        #[command(flatten)]
        oracle: OracleArgs,
        #[arg(long, value_enum)]
        algorithm: AlgorithmName,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, value_enum, default_value_t = OrderKind::Lex)]
        order: OrderKind,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the inquiry game exactly for a tiny tournament.
    Exact {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "mod-found")]
        task: String,
        /// Also print an optimal strategy tree.
        #[arg(long)]
        tree: bool,
        #[arg(long)]
        allow_n6: bool,
        #[arg(long)]
        parallel: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Answer inquiries over stdin/stdout.
    Serve {
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// Print pair counts, the MOD lower bound and the gap for n = 1..=N.
    Table {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-run a stored transcript against an oracle, or a strategy tree
    /// against every tournament of its size.
    Replay {
        #[arg(long, conflicts_with = "strategy")]
        transcript: Option<PathBuf>,
        #[arg(long)]
        strategy: Option<PathBuf>,
        #[command(flatten)]
        oracle: OracleArgs,
    },
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum, default_value_t = OracleKind::Adversary)]
    oracle: OracleKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Tournament fixture for the static-file oracle.
    #[arg(long)]
    file: Option<PathBuf>,
}

impl OracleArgs {
    fn n(&self) -> Result<usize> {
        match (self.n, &self.file) {
            (Some(n), _) => Ok(n),
            (None, Some(_)) => Ok(self.fixture()?.n()),
            (None, None) => bail!("--n is required"),
        }
    }

    fn fixture(&self) -> Result<Tournament> {
        let path = self.file.as_ref().context("the static-file oracle needs --file")?;
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Ok(text.parse()?)
    }

    fn session(&self) -> Result<OracleSession> {
        let n = self.n()?;
        if n == 0 {
            bail!("--n must be at least 1");
        }
        Ok(match self.oracle {
            OracleKind::Adversary => OracleSession::open_adversary(Adversary::new(n)?, None)?,
            OracleKind::StaticRandom => {
                OracleSession::open_static(generate_random_tournament(n, self.seed), None)?
            }
            OracleKind::StaticFile => {
                let t = self.fixture()?;
                if t.n() != n {
                    bail!("fixture has n = {} but --n is {n}", t.n());
                }
                OracleSession::open_static(t, None)?
            }
        })
    }
}

fn output(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            fs::File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Gen { n, seed, out } => {
            let mut w = output(&out)?;
            write!(w, "{}", generate_random_tournament(n, seed))?;
            w.flush()?;
        }
        Command::Run {
            oracle,
            algorithm,
            trials,
            order,
            format,
            out,
        } => {
            let cfg = ExperimentConfig {
                n: oracle.n()?,
                algorithm,
                oracle: oracle.oracle,
                file: oracle.file.clone(),
                seed: oracle.seed,
                trials,
                format,
                order,
            };
            let rows = run_experiment(&cfg)?;
            let mut w = output(&out)?;
            write_rows(&rows, format, &mut w)?;
            w.flush()?;
        }
        Command::Exact {
            n,
            task,
            tree,
            allow_n6,
            parallel,
            out,
        } => {
            let task: Task = task.parse()?;
            let opts = SolverOptions {
                memo: true,
                parallel,
                allow_n6,
                with_tree: tree,
            };
            let v = exact_complexity(n, task, &opts)?;
            let mut w = output(&out)?;
            writeln!(
                w,
                "n={n} task={task} value={} pairs={} bound={}",
                v.value,
                pair_count(n),
                mod_lower_bound(n)
            )?;
            if let Some(tree) = &v.tree {
                write!(w, "{tree}")?;
            }
            w.flush()?;
        }
        Command::Serve { oracle } => {
            let session = oracle.session()?;
            serve(session, io::stdin().lock(), io::stdout().lock())?;
        }
        Command::Table { n, format, out } => {
            if n == 0 {
                bail!("--n must be at least 1");
            }
            let mut w = output(&out)?;
            w.write_all(emit_bound_table(n, format).as_bytes())?;
            w.flush()?;
        }
        Command::Replay {
            transcript,
            strategy,
            oracle,
        } => match (transcript, strategy) {
            (Some(path), None) => {
                let transcript: Transcript = fs::read_to_string(&path)
                    .with_context(|| format!("reading {}", path.display()))?
                    .parse()?;
                let mut session = oracle.session()?;
                let report = replay_transcript(&transcript, &mut session)?;
                for (e, recorded, fresh) in &report.mismatches {
                    println!("mismatch {} {} recorded {recorded} got {fresh}", e.u, e.v);
                }
                println!("q={}", report.q);
                if !report.mismatches.is_empty() {
                    bail!("{} answers differ", report.mismatches.len());
                }
            }
            (None, Some(path)) => {
                let tree: StrategyTree = fs::read_to_string(&path)
                    .with_context(|| format!("reading {}", path.display()))?
                    .parse()?;
                let n = oracle.n()?;
                let report = replay_strategy(&tree, n)?;
                println!(
                    "tournaments={} worst_q={} failures={}",
                    report.tournaments,
                    report.worst_q,
                    report.failures.len()
                );
                if !report.failures.is_empty() {
                    bail!("strategy answered {} tournaments wrongly", report.failures.len());
                }
            }
            _ => bail!("pass exactly one of --transcript or --strategy"),
        },
    }
    Ok(())
}
