//! Run configuration: the group `H`, the subgroup `A`, search budgets and the
//! master seed. Validated before any work, hashed into every artifact.

use num_traits::One;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::exactlin::Matrix;
use crate::tower::{bootstrap, TowerError, TowerParams, TowerState};
use crate::words::{Factor, GeneratorTable, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedMatrix {
    pub name: String,
    pub matrix: Matrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Budgets {
    pub stages: usize,
    pub enum_radius: usize,
    pub cert_radius: usize,
    pub exponent_cap: u32,
    pub lmax_exp: u32,
    pub retry_cap: u32,
    pub height_bound: i64,
}

impl Default for Budgets {
    fn default() -> Self {
        let p = TowerParams::default();
        Budgets {
            stages: 3,
            enum_radius: p.enum_radius,
            cert_radius: p.cert_radius,
            exponent_cap: p.exponent_cap,
            lmax_exp: p.lmax_exp,
            retry_cap: p.retry_cap,
            height_bound: p.height_bound,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RunConfig {
    pub n: usize,
    /// dimension of the `+1` eigenspace of `t`
    pub r: usize,
    pub h: Vec<NamedMatrix>,
    /// generators of `A` as words in the `H` generators
    #[serde(default)]
    pub a: Vec<Word>,
    #[serde(default)]
    pub budgets: Budgets,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("invalid config JSON: {0}")]
    Parse(String),
    #[error("invalid config: {0}")]
    Invalid(String),
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes") + "\n"
    }

    /// SHA-256 of the compact serialization, so formatting of the source file
    /// does not matter. The output directory is not part of the run.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.out = None;
        hex::encode(Sha256::digest(serde_json::to_vec(&c).expect("config serializes")))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |s: String| Err(ConfigError::Invalid(s));
        let (n, r) = (self.n, self.r);
        if r >= n || (n - r) % 2 != 0 {
            return bad(format!(
                "n − r = {} must be positive and even for t to have determinant 1",
                n as i64 - r as i64
            ));
        }
        if r < n - r + 2 {
            return bad(format!("r = {r} is smaller than (n − r) + 2 = {}", n - r + 2));
        }
        let b = &self.budgets;
        for (name, v) in [
            ("stages", b.stages as i64),
            ("enumRadius", b.enum_radius as i64),
            ("certRadius", b.cert_radius as i64),
            ("exponentCap", b.exponent_cap as i64),
            ("lmaxExp", b.lmax_exp as i64),
            ("retryCap", b.retry_cap as i64),
            ("heightBound", b.height_bound),
        ] {
            if v <= 0 {
                return bad(format!("budget {name} must be positive"));
            }
        }
        if self.h.is_empty() {
            return bad("H has no generators".into());
        }
        for g in &self.h {
            if g.matrix.dim() != n {
                return bad(format!("generator {} is {}×{}, expected {n}×{n}", g.name, g.matrix.dim(), g.matrix.dim()));
            }
            if !g.matrix.det().is_one() {
                return bad(format!("generator {} has determinant {}, not 1", g.name, g.matrix.det()));
            }
        }
        self.h_table()?;
        Ok(())
    }

    pub fn h_table(&self) -> Result<GeneratorTable, ConfigError> {
        let mut t = GeneratorTable::new();
        for g in &self.h {
            t.push(&g.name, Factor::Base, g.matrix.clone()).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        }
        Ok(t)
    }

    pub fn tower_params(&self) -> TowerParams {
        let b = &self.budgets;
        TowerParams {
            cert_radius: b.cert_radius,
            exponent_cap: b.exponent_cap,
            lmax_exp: b.lmax_exp,
            retry_cap: b.retry_cap,
            height_bound: b.height_bound,
            enum_radius: b.enum_radius,
            ..TowerParams::default()
        }
    }

    /// Validates, then bootstraps the tower state `⟨H, t⟩`.
    pub fn bootstrap(&self) -> Result<TowerState, TowerError> {
        self.validate().map_err(|e| TowerError::Precondition(e.to_string()))?;
        let h = self.h_table().map_err(|e| TowerError::Precondition(e.to_string()))?;
        bootstrap(&h, &self.a, self.r, self.tower_params(), self.seed, &self.hash())
    }
}
