use std::fmt;

use serde::{Deserialize, Serialize};

use super::WordError;
use crate::exactlin::{int, Matrix};

/// Which part of an extension a generator belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Factor {
    Base,
    Free,
    Stable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GeneratorRepr", into = "GeneratorRepr")]
pub struct Generator {
    name: String,
    factor: Factor,
    matrix: Matrix,
    inverse: Matrix,
    order2: bool,
}

#[derive(Serialize, Deserialize)]
struct GeneratorRepr {
    name: String,
    factor: Factor,
    matrix: Matrix,
}

impl TryFrom<GeneratorRepr> for Generator {
    type Error = WordError;

    fn try_from(r: GeneratorRepr) -> Result<Self, WordError> {
        Generator::new(&r.name, r.factor, r.matrix)
    }
}

impl From<Generator> for GeneratorRepr {
    fn from(g: Generator) -> Self {
        GeneratorRepr { name: g.name, factor: g.factor, matrix: g.matrix }
    }
}

impl Generator {
    pub fn new(name: &str, factor: Factor, matrix: Matrix) -> Result<Self, WordError> {
        if name.is_empty() || name.chars().any(|c| c.is_whitespace() || c == '^') {
            return Err(WordError::BadName(name.to_string()));
        }
        if matrix.det() != int(1) {
            return Err(WordError::NotUnimodular(name.to_string()));
        }
        let inverse = matrix.inverse().map_err(|_| WordError::NotUnimodular(name.to_string()))?;
        let order2 = matrix == inverse && !matrix.is_identity();
        Ok(Generator { name: name.to_string(), factor, matrix, inverse, order2 })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn factor(&self) -> Factor {
        self.factor
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn inverse(&self) -> &Matrix {
        &self.inverse
    }

    pub fn is_order2(&self) -> bool {
        self.order2
    }

    /// Exact `g^p`.
    pub fn power(&self, p: i64) -> Matrix {
        let base = if p < 0 { &self.inverse } else { &self.matrix };
        if p.unsigned_abs() == 1 {
            return base.clone();
        }
        base.pow(p.abs()).expect("nonnegative power")
    }
}

/// Named determinant-one matrices in adjunction order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GeneratorTable {
    gens: Vec<Generator>,
}

impl GeneratorTable {
    pub fn new() -> Self {
        GeneratorTable::default()
    }

    pub fn from_generators(gens: Vec<Generator>) -> Result<Self, WordError> {
        let mut table = GeneratorTable::new();
        for g in gens {
            table.push_generator(g)?;
        }
        Ok(table)
    }

    pub fn push(&mut self, name: &str, factor: Factor, matrix: Matrix) -> Result<usize, WordError> {
        self.push_generator(Generator::new(name, factor, matrix)?)
    }

    fn push_generator(&mut self, g: Generator) -> Result<usize, WordError> {
        if self.index_of(g.name()).is_some() {
            return Err(WordError::DuplicateName(g.name().to_string()));
        }
        if let Some(first) = self.gens.first() {
            if first.matrix().dim() != g.matrix().dim() {
                return Err(WordError::DimensionMismatch(g.name().to_string()));
            }
        }
        self.gens.push(g);
        Ok(self.gens.len() - 1)
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn dim(&self) -> Option<usize> {
        self.gens.first().map(|g| g.matrix().dim())
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn generator(&self, i: usize) -> &Generator {
        &self.gens[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name() == name)
    }

    pub fn get(&self, name: &str) -> Result<&Generator, WordError> {
        self.index_of(name).map(|i| &self.gens[i]).ok_or_else(|| WordError::MissingAssignment(name.to_string()))
    }

    /// Table restricted to the first `k` generators.
    pub fn prefix(&self, k: usize) -> GeneratorTable {
        GeneratorTable { gens: self.gens[..k].to_vec() }
    }

    pub fn evaluate(&self, w: &Word) -> Result<Matrix, WordError> {
        let n = self.dim().ok_or(WordError::EmptyTable)?;
        let mut acc = Matrix::identity(n);
        for s in w.syllables() {
            acc = acc.mul(&self.get(&s.gen)?.power(s.pow));
        }
        Ok(acc)
    }

    /// Free reduction of syllables, reading powers of order-2 generators
    /// modulo 2.
    pub fn reduce(&self, w: &Word) -> Word {
        let order2 = |g: &str| self.get(g).map(Generator::is_order2).unwrap_or(false);
        let mut out: Vec<Syllable> = Vec::with_capacity(w.len());
        for s in w.syllables() {
            let mut s = s.clone();
            if let Some(last) = out.last() {
                if last.gen == s.gen {
                    s.pow += last.pow;
                    out.pop();
                }
            }
            if order2(&s.gen) {
                s.pow = s.pow.rem_euclid(2);
            }
            if s.pow != 0 {
                out.push(s);
            }
        }
        Word(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Syllable {
    pub gen: String,
    pub pow: i64,
}

/// A word as a list of generator powers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<Syllable>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn gen(name: &str, pow: i64) -> Self {
        Word(vec![Syllable { gen: name.to_string(), pow }])
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|s| Syllable { gen: s.gen.clone(), pow: -s.pow }).collect())
    }

    /// Concatenation, merging equal generators at the seam.
    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        for s in &other.0 {
            match out.last_mut() {
                Some(last) if last.gen == s.gen => {
                    last.pow += s.pow;
                    if last.pow == 0 {
                        out.pop();
                    }
                }
                _ => out.push(s.clone()),
            }
        }
        Word(out)
    }

    /// Replaces each generator by a word, e.g. to expand a word over
    /// subgroup generators into table letters.
    pub fn substitute(&self, images: impl Fn(&str) -> Option<Word>) -> Option<Word> {
        let mut out = Word::empty();
        for s in &self.0 {
            let img = images(&s.gen)?;
            let piece = if s.pow < 0 { img.inverse() } else { img };
            for _ in 0..s.pow.unsigned_abs() {
                out = out.concat(&piece);
            }
        }
        Some(out)
    }

    pub fn parse(text: &str) -> Result<Word, WordError> {
        let text = text.trim();
        if text.is_empty() || text == "1" {
            return Ok(Word::empty());
        }
        let mut out = Vec::new();
        for tok in text.split(|c: char| c == '·' || c == '*' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            let (gen, pow) = match tok.split_once('^') {
                Some((g, p)) => (g, p.parse::<i64>().map_err(|_| WordError::Parse(tok.to_string()))?),
                None => (tok, 1),
            };
            if gen.is_empty() || pow == 0 {
                return Err(WordError::Parse(tok.to_string()));
            }
            out.push(Syllable { gen: gen.to_string(), pow });
        }
        Ok(Word(out))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "·")?;
            }
            if s.pow == 1 {
                write!(f, "{}", s.gen)?;
            } else {
                write!(f, "{}^{}", s.gen, s.pow)?;
            }
        }
        Ok(())
    }
}
