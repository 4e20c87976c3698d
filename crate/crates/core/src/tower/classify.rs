use serde::{Deserialize, Serialize};

use super::membership::SubgroupBall;
use super::state::TowerState;
use super::TowerError;
use crate::exactlin::Matrix;
use crate::words::Word;

/// Routing of a candidate `v`, decided by bounded searches of the A-ball.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "camelCase")]
pub enum Classification {
    /// `f` in `A` with `t·f·v⁻¹ = witness` in `A`; both words over `a0, a1, …`
    AlreadyWitnessed {
        f: Word,
        witness: Word,
    },
    FreeCase,
    HnnCase,
    NeedsReduction {
        reason: String,
    },
}

impl Classification {
    pub fn label(&self) -> &'static str {
        match self {
            Classification::AlreadyWitnessed { .. } => "alreadyWitnessed",
            Classification::FreeCase => "freeCase",
            Classification::HnnCase => "hnnCase",
            Classification::NeedsReduction { .. } => "needsReduction",
        }
    }
}

/// Classification against a prebuilt A-ball.
///
/// Order of tests: `v ∈ A`; `v ∈ A·t·A` (witnessed); `v⁻¹ ∈ A·t·A`;
/// `v` an involution; `v⁻¹ ∈ A·v·A`, i.e. `v·a·v ∈ A`.
pub fn classify_in(t: &Matrix, v: &Matrix, a: &SubgroupBall) -> Classification {
    let need = |r: &str| Classification::NeedsReduction { reason: r.to_string() };
    if a.find(v).is_some() {
        return need("v lies in A");
    }
    let vi = v.inverse().expect("determinant one");
    if let Some((f, w)) = a.sandwich(t, &vi) {
        return Classification::AlreadyWitnessed { f: a.word(f), witness: a.word(w) };
    }
    if a.sandwich(t, v).is_some() {
        return need("v⁻¹ lies in A·t·A");
    }
    if v.mul(v).is_identity() {
        return Classification::HnnCase;
    }
    if a.sandwich(v, v).is_some() {
        return need("v⁻¹ lies in A·v·A");
    }
    Classification::FreeCase
}

/// Classifies `v` using the A-ball of word radius `radius`.
pub fn classify(state: &TowerState, v: &Word, radius: usize) -> Result<Classification, TowerError> {
    let vm = state.evaluate(v)?;
    let a = SubgroupBall::new(state.table(), &state.a_gens, radius)?;
    Ok(classify_in(state.t.matrix(), &vm, &a))
}
