//! Certified realizations of free products and HNN extensions: a seeded
//! search over ping-pong schemes and scales, with every claim re-checked
//! exactly on a finite word ball.

pub mod certificate;
pub mod checks;
pub mod construct;
pub mod scan;

pub use certificate::{CertKind, EmbeddingCertificate, InvolutionWitness, ReplayReport};
pub use checks::{ball_involutions, check_involutions_conjugate_ball, verify_aux_condition};
pub use construct::{embed_free_product, embed_hnn, STABLE};
pub use scan::Violation;

use crate::proximal::ProximalError;
use crate::words::WordError;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum EmbedError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("missing conjugator: {0}")]
    MissingConjugator(String),
    #[error("no admissible scheme: {0}")]
    Basis(String),
    #[error("embedding search failed after {attempts} bases and L up to 2^{lmax_exp}: first violating word {word}: {reason}")]
    SearchFailure { attempts: u32, lmax_exp: u32, word: String, reason: String },
    #[error("involution {0} is not conjugate to t within the conjugacy radius")]
    InvolutionNotConjugate(String),
    #[error(transparent)]
    Word(#[from] WordError),
}

impl EmbedError {
    /// Failures of the hypotheses, as opposed to exhausted searches.
    pub fn is_precondition(&self) -> bool {
        matches!(self, EmbedError::Precondition(_) | EmbedError::MissingConjugator(_) | EmbedError::Word(_))
    }
}

impl From<ProximalError> for EmbedError {
    fn from(e: ProximalError) -> Self {
        match e {
            ProximalError::Precondition(s) => EmbedError::Precondition(s),
            ProximalError::InvalidScheme(s) => EmbedError::Basis(s),
            e @ ProximalError::SearchFailure { .. } => EmbedError::Basis(e.to_string()),
        }
    }
}

/// Search budgets and bookkeeping for one embedding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbedParams {
    /// syllable radius `N` of the certified word ball
    pub radius: usize,
    pub exponent_cap: u32,
    /// radius of the factor balls whose elements are the syllables
    pub alphabet_radius: usize,
    pub lmax_exp: u32,
    pub retry_cap: u32,
    pub height: i64,
    pub max_draws: usize,
    pub conj_radius: usize,
    pub seed: u64,
    pub timestamp: u64,
    pub config_hash: String,
}

impl Default for EmbedParams {
    fn default() -> Self {
        EmbedParams {
            radius: 4,
            exponent_cap: 3,
            alphabet_radius: 1,
            lmax_exp: 10,
            retry_cap: 4,
            height: 10,
            max_draws: 500,
            conj_radius: 4,
            seed: 0,
            timestamp: 0,
            config_hash: String::new(),
        }
    }
}
