use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::exactlin::Matrix;
use crate::words::Word;

/// A replayable counterexample: table words and their exact values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub detail: String,
    pub words: Vec<Word>,
    pub matrices: Vec<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub pass: bool,
    pub radii: BTreeMap<String, usize>,
    pub witnesses: Vec<Witness>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(check: &str, radii: &[(&str, usize)]) -> Self {
        VerificationReport {
            check: check.to_string(),
            pass: true,
            radii: radii.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            witnesses: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn fail(&mut self, w: Witness) {
        self.pass = false;
        self.witnesses.push(w);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }
}

/// Witnesses kept per report; the count of all failures goes into a note.
pub(crate) const MAX_WITNESSES: usize = 16;
