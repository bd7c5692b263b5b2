//! `qitw`: command-line front end. Every subcommand prints a JSON report on
//! stdout and exits with status 1 when any check in it fails, 2 on errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "qitw", version, about = "Centred decompositions and quasi-isometries to bounded treewidth")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest instance the exact solvers accept.
    #[arg(long, global = true, default_value_t = qitw_core::exact::DEFAULT_CAP)]
    pub cap: usize,
    /// Shape of input decompositions; `path` rejects non-path trees.
    #[arg(long, global = true, value_enum, default_value_t = ShapeArg::Tree)]
    pub shape: ShapeArg,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ShapeArg {
    Tree,
    Path,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Layering,
    Exact,
    Best,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Heuristic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Path,
    Cycle,
    RandomTree,
    KTree,
    KPath,
    SubdividedKTree,
    GridSlice,
    RandomBranchDecomposition,
}

#[derive(Args, Debug)]
pub struct GraphTd {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub td: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check that a decomposition is a valid tree-decomposition.
    ValidateTd(GraphTd),
    /// Width and exact independence and domination numbers of every bag.
    Metrics(GraphTd),
    /// Decide whether every bag (or one set) is (k,d)-centred.
    CentredCheck {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, required_unless_present = "set")]
        td: Option<PathBuf>,
        /// Comma-separated vertex ids, checked instead of a decomposition.
        #[arg(long, value_delimiter = ',')]
        set: Option<Vec<usize>>,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: u32,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
    },
    /// Add every edge between bag-mates at distance at most d.
    Augment {
        #[command(flatten)]
        input: GraphTd,
        #[arg(long)]
        d: u32,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Contract the parts of a partition.
    Quotient {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        part: PathBuf,
        /// Require every part to have weak diameter below this.
        #[arg(long)]
        d: Option<u32>,
        #[arg(short, long)]
        output: PathBuf,
        /// Also write the vertex-to-part map.
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Partition into connected parts with a bipartite quotient.
    BipartitePartition {
        #[command(flatten)]
        input: GraphTd,
        #[arg(long, value_enum, default_value_t = StrategyArg::Layering)]
        strategy: StrategyArg,
        #[arg(long)]
        budget: Option<u32>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Push a decomposition through a partition onto the quotient.
    PushTd {
        #[command(flatten)]
        input: GraphTd,
        #[arg(long)]
        part: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Full forward pipeline; writes h.gr, h.td, map.map and report.json.
    Pipeline {
        #[command(flatten)]
        input: GraphTd,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        budget: Option<u32>,
        #[arg(long, value_enum, default_value_t = StrategyArg::Layering)]
        strategy: StrategyArg,
        /// Skip certifying that the input is (k,d)-centred.
        #[arg(long)]
        waive_centred_check: bool,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Pull a host decomposition back along a c-quasi-isometry.
    Pullback {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        host_td: PathBuf,
        #[arg(long)]
        c: u32,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Smallest q for which the map is a q-quasi-isometry.
    QiConstant {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long, default_value_t = 1000)]
        qmax: u32,
    },
    /// Compose two maps and check the composite against q(c+2).
    Compose {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        mid: PathBuf,
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        map1: PathBuf,
        #[arg(long)]
        map2: PathBuf,
        #[arg(long, default_value_t = 1000)]
        qmax: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Largest induced matching across the cut (set, rest).
    Simval {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        set: Vec<usize>,
    },
    /// Tree-decomposition from a branch decomposition.
    SimToTd {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        bd: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Branch decomposition to tree-decomposition, then the forward pipeline.
    SimPipeline {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        bd: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Exact treewidth with a witness decomposition.
    ExactTw {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = qitw_core::exact::DEFAULT_TW_CAP)]
        tw_cap: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generate a corpus instance into a directory.
    Gen {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        s: usize,
        #[arg(long, default_value_t = 3)]
        rows: usize,
        #[arg(long, default_value_t = 4)]
        cols: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(report) => {
            print!("{}", report.to_json());
            if report.passed {
                ExitCode::SUCCESS
            } else {
                for c in report.failed() {
                    eprintln!("check failed: {} = {} > {} ({})", c.name, c.measured, c.bound, c.source);
                }
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
