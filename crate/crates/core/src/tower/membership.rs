use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::exactlin::modp::{Fingerprint, ModMatrix};
use crate::exactlin::Matrix;
use crate::words::{Ball, BallGen, GeneratorTable, Metric, Word, WordError};

const FINGERPRINT_SEED: u64 = 0xa5a5;

/// Name of the `i`-th subgroup generator in words over the subgroup.
pub fn alias(i: usize) -> String {
    format!("a{i}")
}

/// Expands a word over `a0, a1, …` into table letters.
pub fn expand(word: &Word, gens: &[Word]) -> Option<Word> {
    word.substitute(|name| name.strip_prefix('a')?.parse::<usize>().ok().and_then(|i| gens.get(i).cloned()))
}

/// Bounded membership: a witness is definitive, its absence is not.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "status", content = "value")]
pub enum MembershipAnswer {
    /// a word over `a0, a1, …` evaluating exactly to the element
    FoundWitness(Word),
    NoWitnessWithin(usize),
}

impl MembershipAnswer {
    pub fn witness(&self) -> Option<&Word> {
        match self {
            MembershipAnswer::FoundWitness(w) => Some(w),
            MembershipAnswer::NoWitnessWithin(_) => None,
        }
    }
}

pub(crate) fn fingerprint(n: usize) -> Fingerprint {
    Fingerprint::new(n, &mut ChaCha8Rng::seed_from_u64(FINGERPRINT_SEED))
}

/// The word-metric ball of a subgroup given by words in a table, with
/// residue matrices kept for fingerprint lookups of products.
pub struct SubgroupBall {
    ball: Ball,
    gens: Vec<Word>,
}

impl SubgroupBall {
    pub fn new(table: &GeneratorTable, gens: &[Word], radius: usize) -> Result<SubgroupBall, WordError> {
        let n = table.dim().ok_or(WordError::EmptyTable)?;
        let bg = gens
            .iter()
            .enumerate()
            .map(|(i, w)| Ok(BallGen::new(alias(i), table.evaluate(w)?)))
            .collect::<Result<Vec<_>, WordError>>()?;
        // the identity generates nothing new
        let bg: Vec<BallGen> = bg.into_iter().filter(|g| !g.matrix.is_identity()).collect();
        let ball = Ball::build_with(&bg, radius, Metric::Word, fingerprint(n), true);
        Ok(SubgroupBall { ball, gens: gens.to_vec() })
    }

    pub fn ball(&self) -> &Ball {
        &self.ball
    }

    pub fn radius(&self) -> usize {
        self.ball.radius()
    }

    pub fn gens(&self) -> &[Word] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.ball.reps().len()
    }

    pub fn is_empty(&self) -> bool {
        self.ball.reps().is_empty()
    }

    pub fn find(&self, g: &Matrix) -> Option<u32> {
        self.ball.find(g)
    }

    /// The element with fingerprint `key`, if it equals `g` exactly.
    pub fn confirm(&self, key: u64, g: impl FnOnce() -> Matrix) -> Option<u32> {
        if self.ball.candidates(key).is_empty() {
            return None;
        }
        self.ball.confirm(key, &g())
    }

    pub fn member(&self, g: &Matrix) -> MembershipAnswer {
        match self.find(g) {
            Some(node) => MembershipAnswer::FoundWitness(self.ball.word(node)),
            None => MembershipAnswer::NoWitnessWithin(self.radius()),
        }
    }

    /// Word over `a0, a1, …`.
    pub fn word(&self, node: u32) -> Word {
        self.ball.word(node)
    }

    pub fn table_word(&self, node: u32) -> Word {
        expand(&self.ball.word(node), &self.gens).expect("aliases index the generator list")
    }

    pub fn exact(&self, node: u32) -> Matrix {
        self.ball.exact(node)
    }

    pub fn modp(&self, node: u32) -> &ModMatrix {
        self.ball.modp(node).expect("subgroup balls keep residue matrices")
    }

    pub fn reps(&self) -> &[u32] {
        self.ball.reps()
    }

    pub fn fingerprint(&self) -> &Fingerprint {
        self.ball.fingerprint()
    }

    /// First `a` in length-lex order with `l·a·r` in the ball, as `(a, l·a·r)`.
    pub fn sandwich(&self, l: &Matrix, r: &Matrix) -> Option<(u32, u32)> {
        let fp = self.fingerprint();
        let (lm, rm) = (ModMatrix::from_matrix(l)?, ModMatrix::from_matrix(r)?);
        let row = lm.left_apply(&fp.z);
        let col = rm.apply(&fp.x);
        self.reps().iter().find_map(|&a| {
            let key = crate::exactlin::modp::dot_mod(&row, &self.modp(a).apply(&col));
            self.confirm(key, || l.mul(&self.exact(a)).mul(r)).map(|b| (a, b))
        })
    }
}

/// Exhaustive word-metric search of the subgroup generated by `gens` for `g`.
pub fn member(table: &GeneratorTable, gens: &[Word], g: &Matrix, radius: usize) -> Result<MembershipAnswer, WordError> {
    Ok(SubgroupBall::new(table, gens, radius)?.member(g))
}
