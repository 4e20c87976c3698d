//! The finite-stage tower: bootstrap `⟨H, t⟩`, classify candidates `v`,
//! adjoin free or HNN letters, and keep the ledger `A·t·f = A·v`.

pub mod classify;
#[cfg(test)]
pub(crate) mod fixtures;
pub mod membership;
pub mod run;
pub mod state;
pub mod steps;

pub use classify::{classify, classify_in, Classification};
pub use membership::{alias, expand, member, MembershipAnswer, SubgroupBall};
pub use run::{run_tower, Budget, Handled, TowerReport};
pub use state::{LedgerCase, LedgerEntry, Skip, StepCase, StepRecord, TowerParams, TowerState};
pub use steps::{bootstrap, step_free, step_hnn, step_seed, unipotent};

use crate::embed::EmbedError;
use crate::words::WordError;

#[derive(Debug, thiserror::Error)]
pub enum TowerError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("step for v = {v} failed: {source}")]
    Step { v: String, source: Box<TowerError> },
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("could not persist the state: {0}")]
    Persist(String),
}

impl TowerError {
    /// Hypothesis failures, as opposed to exhausted searches.
    pub fn is_precondition(&self) -> bool {
        match self {
            TowerError::Precondition(_) | TowerError::Word(_) => true,
            TowerError::Embed(e) => e.is_precondition(),
            TowerError::Step { source, .. } => source.is_precondition(),
            TowerError::Persist(_) => false,
        }
    }
}
