//! `s2t`: bootstrap a tower from a config, extend it, verify it on finite
//! balls, and inspect or replay its certificates.
//!
//! Exit codes: 0 ok, 1 a check or replay failed, 2 bad input or a violated
//! hypothesis, 3 a search ran out of budget.

mod commands;
mod files;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "s2t", version, about = "Sharply 2-transitive towers in SL(n, Q)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the hypotheses on H and A and realize ⟨H, t⟩ ≅ H ∗ Z/2
    Bootstrap {
        #[arg(long)]
        config: PathBuf,
        /// output directory, overriding the config's
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Extend the tower until it has taken `--stages` steps in total
    Tower {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        state: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        stages: Option<u64>,
        /// continue a state that already has extension steps
        #[arg(long)]
        resume: bool,
    },
    /// Run every check on a state and write report.json
    Verify {
        #[arg(long)]
        state: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// use this radius for every check instead of the defaults
        #[arg(long)]
        radius: Option<usize>,
    },
    /// Inspect or re-verify a certificate file
    Cert {
        #[command(subcommand)]
        action: CertAction,
    },
}

#[derive(Subcommand)]
enum CertAction {
    Show { path: PathBuf },
    Replay { path: PathBuf },
}

pub struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    pub fn new(code: u8, error: anyhow::Error) -> Self {
        Failure { code, error }
    }
}

pub type Outcome = Result<(), Failure>;

pub trait WithCode<T> {
    fn code(self, code: u8) -> Result<T, Failure>;
}

impl<T, E: Into<anyhow::Error>> WithCode<T> for Result<T, E> {
    fn code(self, code: u8) -> Result<T, Failure> {
        self.map_err(|e| Failure::new(code, e.into()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Bootstrap { config, out, seed } => commands::bootstrap(&config, out, seed),
        Command::Tower { config, state, out, stages, resume } => {
            commands::tower(commands::TowerArgs { config, state, out, stages, resume })
        }
        Command::Verify { state, out, radius } => commands::verify(state, out, radius),
        Command::Cert { action: CertAction::Show { path } } => commands::cert_show(&path),
        Command::Cert { action: CertAction::Replay { path } } => commands::cert_replay(&path),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
