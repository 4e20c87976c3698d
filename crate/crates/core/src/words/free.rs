use serde::{Deserialize, Serialize};

use super::table::{GeneratorTable, Word};
use super::WordError;
use crate::exactlin::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// One factor element, written as a word in that factor's generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorLetter {
    pub side: Side,
    pub word: Word,
}

impl FactorLetter {
    pub fn left(word: Word) -> Self {
        FactorLetter { side: Side::Left, word }
    }

    pub fn right(word: Word) -> Self {
        FactorLetter { side: Side::Right, word }
    }
}

/// Alternating product of nontrivial factor elements.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FreeWord {
    letters: Vec<FactorLetter>,
}

impl FreeWord {
    pub fn letters(&self) -> &[FactorLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn to_word(&self) -> Word {
        self.letters.iter().fold(Word::empty(), |acc, l| acc.concat(&l.word))
    }

    pub fn evaluate(&self, table: &GeneratorTable) -> Result<Matrix, WordError> {
        table.evaluate(&self.to_word())
    }

    /// Alternating sides and no letter evaluating to the identity.
    pub fn is_reduced(&self, table: &GeneratorTable) -> Result<bool, WordError> {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 && self.letters[i - 1].side == l.side {
                return Ok(false);
            }
            if table.evaluate(&l.word)?.is_identity() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Normal form in a free product.
///
/// Factor elements are compared through their matrices in `table`, so the
/// table must be faithful on each factor (true for any conjugate of the
/// factor, in particular for the image of an embedding).
pub fn reduce_free(raw: &[FactorLetter], table: &GeneratorTable) -> Result<FreeWord, WordError> {
    let mut stack: Vec<FactorLetter> = Vec::with_capacity(raw.len());
    for l in raw {
        if table.evaluate(&l.word)?.is_identity() {
            continue;
        }
        match stack.last_mut() {
            Some(top) if top.side == l.side => {
                let merged = table.reduce(&top.word.concat(&l.word));
                if table.evaluate(&merged)?.is_identity() {
                    stack.pop();
                } else {
                    top.word = merged;
                }
            }
            _ => stack.push(l.clone()),
        }
    }
    Ok(FreeWord { letters: stack })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::table::Factor;

    fn table() -> GeneratorTable {
        let mut t = GeneratorTable::new();
        t.push("g", Factor::Base, Matrix::from_int_rows(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap()).unwrap();
        t.push("f", Factor::Free, Matrix::from_int_rows(&[&[1, 0, 0], &[0, 1, 0], &[2, 0, 1]]).unwrap()).unwrap();
        t
    }

    #[test]
    fn cancels_inverse_pair() {
        let t = table();
        let g = Word::gen("g", 1);
        let w = reduce_free(&[FactorLetter::left(g.clone()), FactorLetter::left(g.inverse())], &t).unwrap();
        assert!(w.is_empty());
    }

    #[test]
    fn drops_identity_and_merges() {
        let t = table();
        let raw = [
            FactorLetter::left(Word::gen("g", 1)),
            FactorLetter::left(Word::empty()),
            FactorLetter::left(Word::gen("g", 2)),
        ];
        let w = reduce_free(&raw, &t).unwrap();
        assert_eq!(w.letters(), &[FactorLetter::left(Word::gen("g", 3))]);
        let raw = [
            FactorLetter::left(Word::gen("g", 1)),
            FactorLetter::right(Word::gen("f", 2)),
            FactorLetter::right(Word::gen("f", -2)),
            FactorLetter::left(Word::gen("g", -1)),
        ];
        assert!(reduce_free(&raw, &t).unwrap().is_empty());
    }

    #[test]
    fn normal_form_is_reduced_and_idempotent() {
        let t = table();
        let raw = [
            FactorLetter::right(Word::gen("f", 1)),
            FactorLetter::left(Word::gen("g", 2)),
            FactorLetter::left(Word::gen("g", -1)),
            FactorLetter::right(Word::gen("f", -3)),
        ];
        let w = reduce_free(&raw, &t).unwrap();
        assert_eq!(w.len(), 3);
        assert!(w.is_reduced(&t).unwrap());
        assert_eq!(reduce_free(w.letters(), &t).unwrap(), w);
    }
}
