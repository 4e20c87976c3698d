use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::classify::{classify_in, Classification};
use super::membership::{fingerprint, SubgroupBall};
use super::state::{LedgerCase, LedgerEntry, Skip, TowerState};
use super::steps::{apply_free, apply_hnn};
use super::TowerError;
use crate::exactlin::Matrix;
use crate::words::{Ball, BallGen, Metric, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Budget {
    /// total number of extension steps the state should reach
    pub stages: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Handled {
    pub v: Word,
    pub case: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub letter: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TowerReport {
    pub stages_requested: u64,
    pub stage_reached: u64,
    pub handled: Vec<Handled>,
    pub skipped: Vec<Skip>,
    /// letters whose certificates were produced in this run
    pub certificates: Vec<String>,
    /// the candidate ball ran out before the budget
    pub exhausted: bool,
}

/// Candidates of the current stage: word-ball elements not yet processed,
/// in length-lex order.
fn candidates(state: &TowerState, done: &HashSet<Matrix>) -> Vec<(Word, Matrix)> {
    let ball = Ball::build_with(
        &BallGen::from_table(state.table()),
        state.params.enum_radius,
        Metric::Word,
        fingerprint(state.n),
        false,
    );
    ball.reps().iter().map(|&node| (ball.word(node), ball.exact(node))).filter(|(_, m)| !done.contains(m)).collect()
}

/// Enumerates candidates `v` and applies the matching step until
/// `budget.stages` extension steps exist. `persist` sees every new state.
///
/// On a step failure the last persisted state stays valid and the run can be
/// resumed.
pub fn run_tower<P>(state: &mut TowerState, budget: Budget, mut persist: P) -> Result<TowerReport, TowerError>
where
    P: FnMut(&TowerState) -> Result<(), String>,
{
    let mut report = TowerReport { stages_requested: budget.stages, ..TowerReport::default() };
    let mut done: HashSet<Matrix> = state.processed.iter().map(|w| state.evaluate(w)).collect::<Result<_, _>>()?;
    'stages: while state.stage < budget.stages {
        let a = SubgroupBall::new(state.table(), &state.a_gens, state.params.class_radius)?;
        for (v, vm) in candidates(state, &done) {
            let class = classify_in(state.t.matrix(), &vm, &a);
            let mut letter = String::new();
            match &class {
                Classification::AlreadyWitnessed { f, witness } => {
                    state.ledger.push(LedgerEntry {
                        v: v.clone(),
                        f: f.clone(),
                        witness: witness.clone(),
                        case: LedgerCase::Witnessed,
                    });
                    state.processed.push(v.clone());
                }
                Classification::NeedsReduction { reason } => {
                    let skip = Skip { v: v.clone(), reason: reason.clone() };
                    state.skipped.push(skip.clone());
                    state.processed.push(v.clone());
                    report.skipped.push(skip);
                }
                Classification::FreeCase | Classification::HnnCase => {
                    let next = if class == Classification::FreeCase {
                        apply_free(state, &v)
                    } else {
                        apply_hnn(state, &v, &vm)
                    }
                    .map_err(|e| TowerError::Step { v: v.to_string(), source: Box::new(e) })?;
                    *state = next;
                    letter = state.history.last().map(|h| h.letter.clone()).unwrap_or_default();
                    report.certificates.push(letter.clone());
                }
            }
            done.insert(vm);
            report.handled.push(Handled { v, case: class.label().to_string(), letter: letter.clone() });
            persist(state).map_err(TowerError::Persist)?;
            if !letter.is_empty() {
                // the table and A changed: enumerate afresh
                continue 'stages;
            }
        }
        report.exhausted = true;
        break;
    }
    report.stage_reached = state.stage;
    Ok(report)
}
