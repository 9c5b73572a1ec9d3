//! `twosub`: classify two-subspace systems from a JSON config.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use twosub::cli::{self, CliError, ConfigFile, Options, RelationKind, Report, EXIT_ERROR};
use twosub::seqclassify::Budgets;

#[derive(Parser)]
#[command(name = "twosub", version, about = "Classify two-subspace systems in Hilbert space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Emit JSON instead of aligned text.
    #[arg(long)]
    json: bool,
    /// Singular values compared in the ratio scan.
    #[arg(long = "budget-N")]
    budget_n: Option<usize>,
    /// Largest dilation constant K tried by the counting search.
    #[arg(long = "budget-K")]
    budget_k: Option<u64>,
    /// Angle threshold for finite intersections.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether two systems are isomorphic.
    Classify {
        config: PathBuf,
        id1: String,
        id2: String,
        #[arg(long, default_value = "bounded")]
        relation: RelationKind,
        #[command(flatten)]
        common: Common,
    },
    /// List the invariants of one system.
    Invariants {
        config: PathBuf,
        id: String,
        #[command(flatten)]
        common: Common,
    },
    /// Build an explicit isomorphism between two finite systems.
    Witness {
        config: PathBuf,
        id1: String,
        id2: String,
        /// Write the witness matrix here as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Singular values of a compact diagonal system as CSV.
    MuCsv {
        config: PathBuf,
        id: String,
        /// Number of rows.
        n: usize,
        /// Add a ratio column against this system.
        #[arg(long)]
        against: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the built-in reproduction suite.
    Selftest {
        #[command(flatten)]
        common: Common,
    },
}

fn options(common: &Common, budgets: Budgets, relation: RelationKind) -> Options {
    let mut opts = Options { relation, budgets, ..Options::default() };
    if let Some(n) = common.budget_n {
        opts.budgets.mu_terms = n;
    }
    if let Some(k) = common.budget_k {
        opts.budgets.k_max = k;
    }
    if let Some(t) = common.tol {
        opts.tol = t;
    }
    opts
}

fn emit(report: &Report, json: bool) -> i32 {
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    cli::exit_code(report)
}

fn run(cmd: Command) -> Result<i32, CliError> {
    match cmd {
        Command::Classify { config, id1, id2, relation, common } => {
            let cfg = ConfigFile::load(&config)?;
            let opts = options(&common, cfg.budgets, relation);
            Ok(emit(&cli::cmd_classify(&cfg, &id1, &id2, &opts)?, common.json))
        }
        Command::Invariants { config, id, common } => {
            let cfg = ConfigFile::load(&config)?;
            let opts = options(&common, cfg.budgets, RelationKind::Bounded);
            Ok(emit(&cli::cmd_invariants(&cfg, &id, &opts)?, common.json))
        }
        Command::Witness { config, id1, id2, out, common } => {
            let cfg = ConfigFile::load(&config)?;
            let opts = options(&common, cfg.budgets, RelationKind::Bounded);
            Ok(emit(&cli::cmd_witness(&cfg, &id1, &id2, out.as_deref(), &opts)?, common.json))
        }
        Command::MuCsv { config, id, n, against, common: _ } => {
            let cfg = ConfigFile::load(&config)?;
            print!("{}", cli::cmd_mu_csv(&cfg, &id, n, against.as_deref())?);
            Ok(cli::EXIT_DECIDED)
        }
        Command::Selftest { common } => {
            let opts = options(&common, Budgets::default(), RelationKind::Bounded);
            Ok(emit(&cli::cmd_selftest(&opts), common.json))
        }
    }
}

fn main() -> ExitCode {
    let args = match Cli::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR as u8 } else { 0 });
        }
    };
    match run(args.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
