use serde::{Deserialize, Serialize};

use super::construct::{Evaluation, Setting};
use super::scan::Violation;
use super::{EmbedError, EmbedParams};
use crate::exactlin::{Involution, Matrix, Rational};
use crate::proximal::{ConditionReport, PingPongScheme};
use crate::words::{GeneratorTable, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertKind {
    Free,
    Hnn,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvolutionWitness {
    pub word: Word,
    /// `c` with `c⁻¹·w·c = t`, as a word in the extended table
    pub conjugator: Option<Word>,
}

/// Finite evidence for one embedding, replayable from its own fields.
///
/// For `kind = free`, `ell` is the conjugating element `f(L)` and the
/// attached generators are realized as `f·h·f⁻¹`. For `kind = hnn`, `ell` is
/// the image of the new letter and satisfies `ell⁻¹·t·ell = v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EmbeddingCertificate {
    pub kind: CertKind,
    pub timestamp: u64,
    pub seed: u64,
    pub config_hash: String,
    pub scheme: PingPongScheme,
    pub ell: Matrix,
    pub radius: usize,
    pub exponent_cap: u32,
    pub alphabet_radius: usize,
    pub injective_radius: usize,
    pub checked_words: usize,
    pub aux: bool,
    pub violations: Vec<Violation>,
    pub involution_conjugacy_radius: usize,
    pub involutions: Vec<InvolutionWitness>,
    /// no power `ell^j`, `1 ≤ j ≤ infiniteOrderBound`, is the identity
    pub infinite_order_bound: usize,
    pub basis_draws: u32,
    pub conditions: ConditionReport,
    pub t: Involution,
    pub base: GeneratorTable,
    #[serde(default, skip_serializing_if = "GeneratorTable::is_empty")]
    pub attached: GeneratorTable,
    #[serde(default, skip_serializing_if = "Vec::is_empty", with = "crate::exactlin::rational::serde_vec")]
    pub x: Vec<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Matrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjugator: Option<Word>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub letter: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayReport {
    pub agree: bool,
    pub mismatches: Vec<String>,
}

impl EmbeddingCertificate {
    pub(crate) fn assemble(
        setting: &Setting,
        params: &EmbedParams,
        scheme: PingPongScheme,
        x: Vec<Rational>,
        eval: Evaluation,
        involutions: Vec<InvolutionWitness>,
        basis_draws: u32,
    ) -> Self {
        EmbeddingCertificate {
            kind: setting.kind,
            timestamp: params.timestamp,
            seed: params.seed,
            config_hash: params.config_hash.clone(),
            scheme,
            ell: eval.ell,
            radius: setting.radius,
            exponent_cap: setting.cap,
            alphabet_radius: setting.alphabet_radius,
            injective_radius: setting.radius / 2,
            checked_words: eval.scan.visited + 1,
            aux: eval.scan.violations.is_empty(),
            violations: eval.scan.violations,
            involution_conjugacy_radius: setting.conj_radius,
            involutions,
            infinite_order_bound: 2 * setting.radius,
            basis_draws,
            conditions: eval.conditions,
            t: setting.t.clone(),
            base: setting.base.clone(),
            attached: setting.attached.clone(),
            x,
            v: setting.v.clone(),
            conjugator: setting.conjugator.as_ref().map(|(w, _)| w.clone()),
            letter: setting.letter.clone(),
        }
    }

    fn setting(&self) -> Result<Setting, EmbedError> {
        let conjugator = match &self.conjugator {
            Some(w) => Some((w.clone(), self.base.evaluate(w)?)),
            None => None,
        };
        Ok(Setting::new(
            self.kind,
            self.t.clone(),
            self.base.clone(),
            self.attached.clone(),
            self.v.clone(),
            conjugator,
            self.letter.clone(),
            self.radius,
            self.exponent_cap,
            self.alphabet_radius,
            self.involution_conjugacy_radius,
        ))
    }

    /// The generator table of the realized extension.
    pub fn extended_table(&self) -> Result<GeneratorTable, EmbedError> {
        self.setting()?.extended_table(&self.ell)
    }

    /// Re-executes every recorded check from the certificate's own data.
    pub fn replay(&self) -> Result<ReplayReport, EmbedError> {
        let setting = self.setting()?;
        let mut bad = Vec::new();
        if let Err(e) = setting.preconditions() {
            bad.push(format!("precondition: {e}"));
        }
        let eval = setting.evaluate(&self.scheme, &self.x, true, false)?;
        if eval.ell != self.ell {
            bad.push("ell differs from the matrix rebuilt from the scheme".into());
        }
        if !setting.hnn_relation_ok(&self.ell) {
            bad.push("ell⁻¹·t·ell ≠ v".into());
        }
        if eval.conditions != self.conditions {
            bad.push("basis condition report differs".into());
        }
        if !eval.conditions.all_pass() {
            bad.push(format!("basis conditions fail: {}", eval.conditions.failed().join(", ")));
        }
        if eval.scan.visited + 1 != self.checked_words {
            bad.push(format!("checked {} words, certificate records {}", eval.scan.visited + 1, self.checked_words));
        }
        if eval.scan.violations != self.violations {
            bad.push(format!(
                "{} violations found, certificate records {}",
                eval.scan.violations.len(),
                self.violations.len()
            ));
        }
        if self.aux != eval.scan.violations.is_empty() || !self.aux {
            bad.push("auxiliary condition does not hold on the ball".into());
        }
        if self.injective_radius != self.radius / 2 || self.infinite_order_bound != 2 * self.radius {
            bad.push("recorded radii are inconsistent".into());
        }
        if !setting.infinite_order_ok(&self.ell) {
            bad.push("the realized generator has finite order within the checked bound".into());
        }
        let invs = setting.involution_witnesses(&self.ell, &eval.scan.involutions)?;
        if invs != self.involutions {
            bad.push("involution witnesses differ".into());
        }
        if invs.iter().any(|w| w.conjugator.is_none()) {
            bad.push("an involution has no conjugator to t".into());
        }
        Ok(ReplayReport { agree: bad.is_empty(), mismatches: bad })
    }
}
