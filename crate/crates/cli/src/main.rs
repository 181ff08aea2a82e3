//! `basesem`: batch verification and reports over atomic-rule bases.
//!
//! Exit status: 0 for verified / true / derivable outcomes, 1 for refuted /
//! false, 2 for unknown, 64 for usage errors, 65 for malformed input and
//! 66 for unreadable files. `consistency` exits 0 when `bot` is refuted.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "basesem", version, about = "Base-extension semantics over atomic-rule bases, applied to arithmetic")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Clone, Debug)]
pub struct BaseArgs {
    /// Builtin base: EQ, A, A_PLUS or A_EXT k.
    #[arg(long, num_args = 1..=2, value_name = "BASE")]
    pub base: Vec<String>,
    /// Read the base from a rule file instead.
    #[arg(long, value_name = "FILE", conflicts_with = "base")]
    pub rules: Option<PathBuf>,
}

#[derive(Args, Clone, Debug)]
pub struct SearchArgs {
    /// Backward unfolding depth.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub depth: Option<u64>,
    /// Maximum number of rule instances.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub nodes: Option<u64>,
}

#[derive(Subcommand)]
pub enum Command {
    /// Parse a term or formula and print it back.
    Parse { input: String },
    /// Weight of a closed term.
    Weight { term: String },
    /// Standard value of a closed term.
    Eval { term: String },
    /// Search for a derivation of a closed atom.
    Derive {
        goal: String,
        /// Open premise (repeatable).
        #[arg(long = "premise")]
        premises: Vec<String>,
        #[command(flatten)]
        base: BaseArgs,
        #[command(flatten)]
        search: SearchArgs,
        /// Write the certificate here when one is found.
        #[arg(long, value_name = "FILE")]
        cert: Option<PathBuf>,
    },
    /// Check a derivation certificate against a base.
    CheckDerivation {
        #[arg(long, value_name = "FILE", required = true)]
        cert: PathBuf,
        /// Open leaf the certificate may use (repeatable).
        #[arg(long = "premise")]
        premises: Vec<String>,
        #[command(flatten)]
        base: BaseArgs,
    },
    /// Decide a closed equation, with a certificate when it holds.
    DecideEq {
        lhs: String,
        rhs: String,
        #[command(flatten)]
        base: BaseArgs,
    },
    /// Normalize a closed term to a numeral, with a certificate.
    Normalize {
        term: String,
        #[command(flatten)]
        base: BaseArgs,
    },
    /// Bounded support of a closed arithmetic formula.
    Support {
        formula: String,
        #[command(flatten)]
        base: BaseArgs,
        /// Closed-term size bound for universal clauses.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        term_size: Option<u64>,
        /// Numerals 0..=n join the universal instances.
        #[arg(long)]
        n_max: Option<u64>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Replay omega-completeness for an equation schema in one variable.
    OmegaCheck {
        phi: String,
        #[command(flatten)]
        base: BaseArgs,
        #[arg(long)]
        n_max: Option<u64>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        term_size: Option<u64>,
    },
    /// Replay induction for an equation schema in one variable.
    InductionCheck {
        phi: String,
        #[command(flatten)]
        base: BaseArgs,
        #[arg(long)]
        n_max: Option<u64>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        term_size: Option<u64>,
    },
    /// Check natural-deduction proofs: a corpus entry, a bare proof, or a
    /// directory of entries.
    NdCheck { path: PathBuf },
    /// Refute support for bot with a weight witness.
    Consistency {
        #[command(flatten)]
        base: BaseArgs,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Exact support over a finite universe of 0-ary atoms.
    ToySupport {
        formula: String,
        /// Universe atoms, comma separated (default: the atoms mentioned).
        #[arg(long, value_delimiter = ',')]
        atoms: Vec<String>,
        /// Rule file holding the base (default: empty base).
        #[arg(long, value_name = "FILE")]
        rules: Option<PathBuf>,
        /// Assumption, for entailment (repeatable).
        #[arg(long = "assume")]
        assumptions: Vec<String>,
    },
    /// Run the natural-deduction corpus through the toy semantics.
    SoundnessDemo {
        /// Corpus directory (default: the builtin corpus).
        #[arg(long, value_name = "DIR")]
        corpus: Option<PathBuf>,
        /// Atom pool for the universes, comma separated (at most 3).
        #[arg(long, value_delimiter = ',', default_value = "p,q,r")]
        atoms: Vec<String>,
    },
    /// Report normalization goals `t = N` the base fails to derive.
    ProbeFidelity {
        #[command(flatten)]
        base: BaseArgs,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        term_size: Option<u64>,
        #[command(flatten)]
        search: SearchArgs,
        /// Extra random closed terms to probe.
        #[arg(long, default_value_t = 0)]
        samples: u64,
        /// Seed for the random terms.
        #[arg(long, default_value_t = commands::DEFAULT_SEED)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}
