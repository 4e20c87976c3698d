use serde::{Deserialize, Serialize};

use super::membership::expand;
use crate::embed::{EmbedParams, EmbeddingCertificate};
use crate::exactlin::{Involution, Matrix};
use crate::words::{GeneratorTable, Word, WordError};

/// Radii and search budgets shared by every step of a tower.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TowerParams {
    /// syllable radius of every embedding certificate
    pub cert_radius: usize,
    pub exponent_cap: u32,
    pub alphabet_radius: usize,
    pub lmax_exp: u32,
    pub retry_cap: u32,
    pub height_bound: i64,
    pub max_draws: usize,
    /// conjugacy radius of the bootstrap certificate
    pub conj_radius: usize,
    /// conjugacy radius of the step certificates
    pub step_conj_radius: usize,
    /// word radius of the candidate enumeration
    pub enum_radius: usize,
    /// word radius of the A-ball used by classification
    pub class_radius: usize,
}

impl Default for TowerParams {
    fn default() -> Self {
        TowerParams {
            cert_radius: 4,
            exponent_cap: 3,
            alphabet_radius: 1,
            lmax_exp: 10,
            retry_cap: 4,
            height_bound: 10,
            max_draws: 500,
            conj_radius: 4,
            step_conj_radius: 2,
            enum_radius: 2,
            class_radius: 3,
        }
    }
}

impl TowerParams {
    pub fn embed(&self, conj_radius: usize, seed: u64, timestamp: u64, config_hash: &str) -> EmbedParams {
        EmbedParams {
            radius: self.cert_radius,
            exponent_cap: self.exponent_cap,
            alphabet_radius: self.alphabet_radius,
            lmax_exp: self.lmax_exp,
            retry_cap: self.retry_cap,
            height: self.height_bound,
            max_draws: self.max_draws,
            conj_radius,
            seed,
            timestamp,
            config_hash: config_hash.to_string(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LedgerCase {
    Witnessed,
    Free,
    Hnn,
}

/// `A·t·f = A·v`, certified by `witness = t·f·v⁻¹` as a word over `A`.
///
/// `f` and `witness` are words over the A-generators `a0, a1, …`; `v` is a
/// word over the table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LedgerEntry {
    pub v: Word,
    pub f: Word,
    pub witness: Word,
    pub case: LedgerCase,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepCase {
    Bootstrap,
    Free,
    Hnn,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StepRecord {
    pub stage: u64,
    pub case: StepCase,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Word>,
    /// generator added to the table (the stable letter, or the new free factor)
    pub letter: String,
    pub certificate: EmbeddingCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skip {
    pub v: Word,
    pub reason: String,
}

/// A finite stage `(G_i, A_i)` of the tower with its witness ledger.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TowerState {
    pub n: usize,
    pub t: Involution,
    /// `t`, the realized `H`, then one letter per extension step
    pub generator_table: GeneratorTable,
    pub h_names: Vec<String>,
    /// generators of `A ≤ H` as given
    pub a_original: Vec<Word>,
    #[serde(rename = "Agens")]
    pub a_gens: Vec<Word>,
    pub ledger: Vec<LedgerEntry>,
    pub history: Vec<StepRecord>,
    /// candidates already handled, in order
    pub processed: Vec<Word>,
    pub skipped: Vec<Skip>,
    /// number of extension steps applied
    pub stage: u64,
    pub seed: u64,
    pub config_hash: String,
    pub params: TowerParams,
}

impl TowerState {
    pub fn table(&self) -> &GeneratorTable {
        &self.generator_table
    }

    pub fn evaluate(&self, w: &Word) -> Result<Matrix, WordError> {
        self.generator_table.evaluate(w)
    }

    /// A word over `a0, a1, …` as a table word.
    pub fn expand(&self, w: &Word) -> Result<Word, WordError> {
        expand(w, &self.a_gens).ok_or_else(|| WordError::MissingAssignment(w.to_string()))
    }

    /// The subtable of the realized `H`.
    pub fn h_table(&self) -> Result<GeneratorTable, WordError> {
        let mut out = GeneratorTable::new();
        for name in &self.h_names {
            let g = self.generator_table.get(name)?;
            out.push(name, g.factor(), g.matrix().clone())?;
        }
        Ok(out)
    }

    pub fn letters_added(&self) -> usize {
        self.history.iter().filter(|h| h.case != StepCase::Bootstrap).count()
    }

    /// Fresh name for the next adjoined letter.
    pub fn next_letter(&self) -> String {
        let mut k = self.letters_added() + 1;
        loop {
            let name = format!("f{k}");
            if self.generator_table.index_of(&name).is_none() {
                return name;
            }
            k += 1;
        }
    }

    /// `t·f·v⁻¹` and the stored witness, both evaluated.
    pub fn ledger_values(&self, e: &LedgerEntry) -> Result<(Matrix, Matrix), WordError> {
        let f = self.evaluate(&self.expand(&e.f)?)?;
        let v = self.evaluate(&e.v)?;
        let lhs = self.t.matrix().mul(&f).mul(&v.inverse().map_err(|_| WordError::NotUnimodular(e.v.to_string()))?);
        let w = self.evaluate(&self.expand(&e.witness)?)?;
        Ok((lhs, w))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state serializes")
    }

    pub fn from_json(text: &str) -> Result<TowerState, serde_json::Error> {
        serde_json::from_str(text)
    }
}
