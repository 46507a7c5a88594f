use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ivffmd::report::{render_copras, render_ranking, render_robustness, render_weights, to_machine};
use ivffmd::{
    copras_rank, derive_weights, leave_one_out_with_weights, load_problem, perturb_weights_with, run,
    weights_report, CoprasOptions, DecisionProblem, DmWeightModel, Error, MdOptions, Operator, Ranker,
    RemovalMode, ScoreMode,
};

/// Rank alternatives from interval-valued Fermatean fuzzy group judgments.
#[derive(Debug, Parser)]
#[command(name = "ivffmd", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Per-decision-maker and group criterion weights.
    Weights {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = DmWeights::Eq13)]
        dm_weights: DmWeights,
    },
    /// Maximizing-deviation ranking.
    Rank {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        md: MdArgs,
    },
    /// COPRAS ranking with the group weights; needs benefit/cost kinds.
    Copras {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        md: MdArgs,
        #[arg(long, value_enum, default_value_t = Score::Normalized)]
        score: Score,
    },
    /// Leave-one-out and weight-perturbation analysis.
    Robustness {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        md: MdArgs,
        #[arg(long, value_enum, default_value_t = Score::Normalized)]
        score: Score,
        #[arg(long, value_enum, default_value_t = RankerArg::Copras)]
        ranker: RankerArg,
        /// Remove one alternative per scenario instead of cumulatively.
        #[arg(long)]
        one_at_a_time: bool,
        /// Relative half-width of the weight noise, in (0, 1).
        #[arg(long, default_value_t = 0.10)]
        pct: f64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Parse and validate a problem file.
    Validate {
        /// Problem file, or `case_study` for the bundled example.
        file: String,
        #[arg(long)]
        strict_labels: bool,
    },
}

#[derive(Debug, Args)]
struct Input {
    /// Problem file, or `case_study` for the bundled example.
    file: String,
    /// Reject unknown labels instead of repairing them.
    #[arg(long)]
    strict_labels: bool,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
}

#[derive(Debug, Args)]
struct MdArgs {
    #[arg(long, value_enum, default_value_t = DmWeights::Eq13)]
    dm_weights: DmWeights,
    #[arg(long, value_enum, default_value_t = Op::Wa)]
    collapse: Op,
    #[arg(long, value_enum, default_value_t = Op::Wg)]
    prefer: Op,
}

impl MdArgs {
    fn options(&self) -> MdOptions {
        MdOptions {
            dm_weights: self.dm_weights.into(),
            collapse: self.collapse.into(),
            prefer: self.prefer.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Human,
    Machine,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DmWeights {
    /// Closed form on the cubic constraint surface.
    Eq13,
    /// Closed form on the Euclidean unit sphere.
    Euclidean,
    /// Vertex of the simplex-constrained linear program.
    Lp,
}

impl From<DmWeights> for DmWeightModel {
    fn from(d: DmWeights) -> Self {
        match d {
            DmWeights::Eq13 => DmWeightModel::Cubic,
            DmWeights::Euclidean => DmWeightModel::Euclidean,
            DmWeights::Lp => DmWeightModel::Linear,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Op {
    Wa,
    Wg,
}

impl From<Op> for Operator {
    fn from(o: Op) -> Self {
        match o {
            Op::Wa => Operator::Wa,
            Op::Wg => Operator::Wg,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Score {
    Raw,
    Normalized,
}

impl From<Score> for ScoreMode {
    fn from(s: Score) -> Self {
        match s {
            Score::Raw => ScoreMode::Raw,
            Score::Normalized => ScoreMode::Normalized,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RankerArg {
    Md,
    Copras,
}

fn emit<T: serde::Serialize>(format: Format, report: &T, human: impl Fn(&T) -> String) -> Result<(), Error> {
    match format {
        Format::Machine => print!("{}", to_machine(report)?),
        Format::Human => print!("{}", human(report)),
    }
    Ok(())
}

fn load(input: &Input) -> Result<DecisionProblem, Error> {
    load_problem(&input.file, input.strict_labels)
}

fn execute(command: Command) -> Result<(), Error> {
    match command {
        Command::Weights { input, dm_weights } => {
            let report = weights_report(&load(&input)?, dm_weights.into())?;
            emit(input.format, &report, render_weights)
        }
        Command::Rank { input, md } => {
            let report = run(&load(&input)?, &md.options())?;
            emit(input.format, &report, render_ranking)
        }
        Command::Copras { input, md, score } => {
            let problem = load(&input)?;
            let weights = derive_weights(&problem, md.dm_weights.into())?.1.weights;
            let options = CoprasOptions {
                collapse: md.collapse.into(),
                score: score.into(),
            };
            let report = copras_rank(&problem, &weights, &options)?;
            emit(input.format, &report, render_copras)
        }
        Command::Robustness {
            input,
            md,
            score,
            ranker,
            one_at_a_time,
            pct,
            trials,
            seed,
        } => {
            let problem = load(&input)?;
            let ranker = match ranker {
                RankerArg::Md => Ranker::Md(md.options()),
                RankerArg::Copras => Ranker::Copras(CoprasOptions {
                    collapse: md.collapse.into(),
                    score: score.into(),
                }),
            };
            let mode = if one_at_a_time {
                RemovalMode::OneAtATime
            } else {
                RemovalMode::Cumulative
            };
            // reject a bad percentage before any scenario work
            if !(pct > 0.0 && pct < 1.0) {
                return Err(Error::BadPercentage(pct));
            }
            let weights = derive_weights(&problem, md.dm_weights.into())?.1.weights;
            let mut report = leave_one_out_with_weights(&problem, ranker, mode, weights.clone())?;
            report.stability = perturb_weights_with(&problem, ranker, weights, pct, trials, seed)?.stability;
            emit(input.format, &report, render_robustness)
        }
        Command::Validate { file, strict_labels } => load_problem(&file, strict_labels).map(|_| ()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_internal() { 3 } else { 2 })
        }
    }
}
