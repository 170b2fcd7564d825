//! The `congruent` command line: solve one area, scan a range, classify a
//! range with Tunnell's criterion, or re-check a certificate file.

pub mod commands;
pub mod record;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use congruent_core::solver::{Method, SearchConfig};

pub use record::CertificateRecord;

pub const EXIT_SOLVED: u8 = 0;
pub const EXIT_UNSOLVED: u8 = 1;
pub const EXIT_NOT_CONGRUENT: u8 = 2;
pub const EXIT_INVALID: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "congruent", version, about = "Rational right triangles of a given area")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Find a triangle of area N.
    Solve {
        /// A positive integer.
        n: String,
        #[command(flatten)]
        common: Common,
    },
    /// Solve every Tunnell candidate in [A, B].
    Batch {
        #[command(flatten)]
        range: Range,
        #[command(flatten)]
        common: Common,
    },
    /// Classify every squarefree n in [A, B].
    Tunnell {
        #[command(flatten)]
        range: Range,
        #[command(flatten)]
        common: Common,
    },
    /// Re-verify every record of a JSONL certificate file.
    Verify {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Args)]
pub struct Range {
    #[arg(long = "from", value_name = "A")]
    pub from: u64,
    #[arg(long = "to", value_name = "B")]
    pub to: u64,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Search height bound |p| + q (default 9999).
    #[arg(long, value_name = "L")]
    pub limit: Option<u64>,
    /// Comma-separated methods, tried in order.
    #[arg(long, value_name = "m1,m2,...", value_delimiter = ',')]
    pub methods: Option<Vec<Method>>,
    /// Wall-clock budget per method, in seconds.
    #[arg(long, value_name = "SECONDS")]
    pub budget: Option<f64>,
    /// Print serialized records instead of a summary.
    #[arg(long)]
    pub json: bool,
    /// JSONL file that solved records are appended to.
    #[arg(long, value_name = "FILE")]
    pub cache: Option<PathBuf>,
    #[arg(long)]
    pub no_tunnell_screen: bool,
}

impl Common {
    pub fn config(&self) -> Result<SearchConfig, String> {
        let mut cfg = SearchConfig::default();
        if let Some(l) = self.limit {
            if l == 0 {
                return Err("--limit must be positive".into());
            }
            cfg = cfg.with_limit(l);
        }
        if let Some(ms) = &self.methods {
            if ms.is_empty() {
                return Err("--methods is empty".into());
            }
            cfg = cfg.with_methods(ms);
        }
        if let Some(b) = self.budget {
            cfg.budget = Duration::try_from_secs_f64(b).map_err(|_| format!("bad --budget {b}"))?;
        }
        cfg.tunnell_screen = !self.no_tunnell_screen;
        Ok(cfg)
    }
}

/// Parses arguments and runs. Argument errors exit with code 3.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INVALID } else { EXIT_SOLVED });
        }
    };
    ExitCode::from(commands::dispatch(cli.command))
}
