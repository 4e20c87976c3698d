use serde::{Deserialize, Serialize};

use super::table::{GeneratorTable, Word};
use super::WordError;
use crate::exactlin::Matrix;

/// `stable⁻¹ · from · stable = to`, where `from` and `to` are involutions of
/// the base group. The k-form of an extension has `from = to = t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HnnRelation {
    pub stable: String,
    pub from: Word,
    pub to: Word,
}

impl HnnRelation {
    pub fn k_form(stable: &str, t: Word) -> Self {
        HnnRelation { stable: stable.to_string(), from: t.clone(), to: t }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HnnToken {
    Base(Word),
    Stable(i8),
}

/// `g₁ k^{δ₁} g₂ … k^{δ_m} g_{m+1}` stored as `head = g₁` and the pairs
/// `(δ_i, g_{i+1})`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HnnWord {
    pub head: Word,
    pub tail: Vec<(i8, Word)>,
}

struct PinchData {
    from: Matrix,
    to: Matrix,
}

impl PinchData {
    fn new(rel: &HnnRelation, table: &GeneratorTable) -> Result<Self, WordError> {
        Ok(PinchData { from: table.evaluate(&rel.from)?, to: table.evaluate(&rel.to)? })
    }

    /// Replacement for `k^{first} g k^{-first}`, if that is a pinch.
    fn pinch(&self, first: i8, g: &Matrix, rel: &HnnRelation) -> Option<Word> {
        // k⁻¹·from·k = to and k·to·k⁻¹ = from
        let (src, dst_word) = if first < 0 { (&self.from, &rel.to) } else { (&self.to, &rel.from) };
        if g.is_identity() {
            Some(Word::empty())
        } else if g == src {
            Some(dst_word.clone())
        } else {
            None
        }
    }
}

impl HnnWord {
    pub fn stable_count(&self) -> usize {
        self.tail.len()
    }

    pub fn to_word(&self, stable: &str) -> Word {
        let mut w = self.head.clone();
        for (d, g) in &self.tail {
            w = w.concat(&Word::gen(stable, *d as i64)).concat(g);
        }
        w
    }

    pub fn evaluate(&self, rel: &HnnRelation, table: &GeneratorTable) -> Result<Matrix, WordError> {
        table.evaluate(&self.to_word(&rel.stable))
    }

    /// First index `i` such that `k^{δ_i} g_{i+1} k^{δ_{i+1}}` is a pinch.
    pub fn find_pinch(&self, rel: &HnnRelation, table: &GeneratorTable) -> Result<Option<usize>, WordError> {
        let data = PinchData::new(rel, table)?;
        for i in 0..self.tail.len().saturating_sub(1) {
            let (d, g) = &self.tail[i];
            if self.tail[i + 1].0 == -d && data.pinch(*d, &table.evaluate(g)?, rel).is_some() {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    pub fn has_pinch(&self, rel: &HnnRelation, table: &GeneratorTable) -> Result<bool, WordError> {
        Ok(self.find_pinch(rel, table)?.is_some())
    }
}

/// Britton normal form: removes every pinch, preserving the value under the
/// defining relation.
pub fn britton_reduce(raw: &[HnnToken], rel: &HnnRelation, table: &GeneratorTable) -> Result<HnnWord, WordError> {
    let data = PinchData::new(rel, table)?;
    let mut out = HnnWord::default();
    for tok in raw {
        match tok {
            HnnToken::Base(w) => {
                let last = match out.tail.last_mut() {
                    Some((_, g)) => g,
                    None => &mut out.head,
                };
                *last = table.reduce(&last.concat(w));
            }
            HnnToken::Stable(d) => {
                let d = d.signum();
                let replacement = match out.tail.last() {
                    Some((prev, g)) if *prev == -d => data.pinch(*prev, &table.evaluate(g)?, rel),
                    _ => None,
                };
                match replacement {
                    Some(r) => {
                        out.tail.pop();
                        let last = match out.tail.last_mut() {
                            Some((_, g)) => g,
                            None => &mut out.head,
                        };
                        *last = table.reduce(&last.concat(&r));
                    }
                    None => out.tail.push((d, Word::empty())),
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::int;
    use crate::words::table::Factor;

    fn setup() -> (GeneratorTable, HnnRelation) {
        let mut t = GeneratorTable::new();
        t.push("t", Factor::Base, Matrix::diagonal(&[int(1), int(1), int(-1), int(-1)])).unwrap();
        t.push(
            "g",
            Factor::Base,
            Matrix::from_int_rows(&[&[1, 1, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]).unwrap(),
        )
        .unwrap();
        t.push("k", Factor::Stable, Matrix::diagonal(&[int(2), crate::exactlin::rat(1, 2), int(1), int(1)])).unwrap();
        (t, HnnRelation::k_form("k", Word::gen("t", 1)))
    }

    fn toks(text: &str) -> Vec<HnnToken> {
        Word::parse(text)
            .unwrap()
            .syllables()
            .iter()
            .flat_map(|s| {
                if s.gen == "k" {
                    vec![HnnToken::Stable(s.pow.signum() as i8); s.pow.unsigned_abs() as usize]
                } else {
                    vec![HnnToken::Base(Word(vec![s.clone()]))]
                }
            })
            .collect()
    }

    #[test]
    fn pinch_of_t_collapses() {
        let (tab, rel) = setup();
        let w = britton_reduce(&toks("k^-1 t k"), &rel, &tab).unwrap();
        assert_eq!(w, HnnWord { head: Word::gen("t", 1), tail: vec![] });
        assert_eq!(w.evaluate(&rel, &tab).unwrap(), tab.evaluate(&Word::parse("k^-1 t k").unwrap()).unwrap());
    }

    #[test]
    fn trivial_pinch_and_non_pinch() {
        let (tab, rel) = setup();
        assert_eq!(britton_reduce(&toks("k^-1 k"), &rel, &tab).unwrap(), HnnWord::default());
        let w = britton_reduce(&toks("k^-1 g k"), &rel, &tab).unwrap();
        assert_eq!(w.stable_count(), 2);
        assert!(!w.has_pinch(&rel, &tab).unwrap());
    }

    #[test]
    fn nested_pinches_cascade() {
        let (tab, rel) = setup();
        let w = britton_reduce(&toks("g k t k^-1 t k t k^-1 g"), &rel, &tab).unwrap();
        // k t k^-1 = t twice, then t t t = t
        assert_eq!(w, HnnWord { head: Word::parse("g t g").unwrap(), tail: vec![] });
        let same_sign = britton_reduce(&toks("k k"), &rel, &tab).unwrap();
        assert_eq!(same_sign.stable_count(), 2);
    }
}
