//! Independent bounded-radius checks of a tower state. Every check reads the
//! serialized state only and reports its radii and exact witnesses.

pub mod action;
pub mod checks;
pub mod report;

pub use action::{build_action_ball, build_state_action_ball, check_embedded_action, check_pchar2, ActionBall};
pub use checks::{check_commuting_normal_ball, check_malnormal, check_no_involutions, check_sharp2trans_witnesses};
pub use report::{VerificationReport, Witness};

use serde::{Deserialize, Serialize};

use crate::tower::TowerState;
use crate::words::WordError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerifyRadii {
    pub malnormal_g: usize,
    pub malnormal_a: usize,
    pub involutions: usize,
    pub cosets: usize,
    /// defaults to twice the coset radius
    pub membership: usize,
    pub commuting: usize,
    pub coverage: usize,
    pub embedded: usize,
}

impl Default for VerifyRadii {
    fn default() -> Self {
        VerifyRadii {
            malnormal_g: 4,
            malnormal_a: 4,
            involutions: 4,
            cosets: 3,
            membership: 6,
            commuting: 2,
            coverage: 2,
            embedded: 4,
        }
    }
}

impl VerifyRadii {
    /// Every radius set to `r`, cosets to `r − 1` and membership to twice that.
    pub fn uniform(r: usize) -> Self {
        let c = r.saturating_sub(1).max(1);
        VerifyRadii {
            malnormal_g: r,
            malnormal_a: r,
            involutions: r,
            cosets: c,
            membership: 2 * c,
            commuting: r.min(2),
            coverage: r.min(2),
            embedded: r,
        }
    }
}

/// Every recorded certificate replays to agreement.
pub fn check_certificates(state: &TowerState) -> VerificationReport {
    let mut report = VerificationReport::new("certificates replay", &[]);
    for rec in &state.history {
        let label = if rec.letter.is_empty() { "bootstrap".to_string() } else { rec.letter.clone() };
        match rec.certificate.replay() {
            Ok(r) if r.agree => {}
            Ok(r) => report.fail(Witness {
                detail: format!("{label}: {}", r.mismatches.join("; ")),
                words: Vec::new(),
                matrices: vec![rec.certificate.ell.clone()],
            }),
            Err(e) => report.fail(Witness { detail: format!("{label}: {e}"), words: Vec::new(), matrices: Vec::new() }),
        }
    }
    report.note(format!("{} certificates", state.history.len()));
    report
}

/// The full suite, in a fixed order.
pub fn run_all(state: &TowerState, radii: &VerifyRadii) -> Result<Vec<VerificationReport>, WordError> {
    let table = state.table();
    let action = build_state_action_ball(state, radii.cosets, radii.membership)?;
    Ok(vec![
        check_certificates(state),
        check_sharp2trans_witnesses(state, radii.coverage)?,
        check_malnormal(table, &state.a_gens, radii.malnormal_g, radii.malnormal_a)?,
        check_no_involutions(table, &state.a_gens, radii.involutions)?,
        check_pchar2(table, &action)?,
        check_embedded_action(state, &action, radii.embedded)?,
        check_commuting_normal_ball(table, radii.commuting)?,
    ])
}

#[cfg(test)]
mod tests;
