use std::collections::HashSet;
use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;

use super::table::{GeneratorTable, Word};
use crate::exactlin::Matrix;

/// Letter order used everywhere: generators in table order, powers
/// `1, −1, 2, −2, …, cap, −cap`; order-2 generators only take power 1.
pub fn syllable_letters(table: &GeneratorTable, gens: &[usize], cap: u32) -> Vec<(usize, i64)> {
    let mut out = Vec::new();
    for &g in gens {
        if table.generator(g).is_order2() {
            out.push((g, 1));
            continue;
        }
        for p in 1..=cap as i64 {
            out.push((g, p));
            out.push((g, -p));
        }
    }
    out
}

/// Distinct nontrivial group elements, each with its length-lex first word.
#[derive(Clone, Debug, Default)]
pub struct Alphabet {
    pub elements: Vec<(Word, Matrix)>,
}

impl Alphabet {
    /// Elements of the ball of syllable radius `radius` over `gens`, deduplicated
    /// by exact matrix equality.
    pub fn ball(table: &GeneratorTable, gens: &[usize], radius: usize, cap: u32) -> Alphabet {
        let letters: Vec<(usize, i64, Matrix)> =
            syllable_letters(table, gens, cap).into_iter().map(|(g, p)| (g, p, table.generator(g).power(p))).collect();
        let n = table.dim().unwrap_or(0);
        let mut seen: HashSet<Matrix> = HashSet::new();
        seen.insert(Matrix::identity(n));
        let mut elements = Vec::new();
        // (last generator, word, matrix)
        let mut level: Vec<(Option<usize>, Word, Matrix)> = vec![(None, Word::empty(), Matrix::identity(n))];
        for _ in 0..radius {
            let mut next = Vec::new();
            for (last, w, m) in &level {
                for (g, p, lm) in &letters {
                    if Some(*g) == *last {
                        continue;
                    }
                    let nw = w.concat(&Word::gen(table.generator(*g).name(), *p));
                    let nm = m.mul(lm);
                    if seen.insert(nm.clone()) {
                        elements.push((nw.clone(), nm.clone()));
                    }
                    next.push((Some(*g), nw, nm));
                }
            }
            level = next;
        }
        Alphabet { elements }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LetterKind {
    Left,
    Right,
    Base,
    Stable(i8),
}

#[derive(Clone, Debug)]
pub struct Letter {
    pub word: Word,
    pub matrix: Matrix,
    pub kind: LetterKind,
    /// base letter equal to the relation's `from` (forbidden in `k⁻¹·g·k`)
    pub pinch_from: bool,
    /// base letter equal to the relation's `to` (forbidden in `k·g·k⁻¹`)
    pub pinch_to: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Form {
    Free,
    Hnn,
}

/// Reduced words encoded as sequences of letter indices.
#[derive(Clone, Debug)]
pub struct CodeSpace {
    letters: Vec<Letter>,
    form: Form,
}

type Hits<R> = Vec<(Vec<u32>, R)>;

#[derive(Debug)]
pub struct Scan<R> {
    /// nonempty words visited
    pub visited: usize,
    /// hits sorted by length, then code
    pub hits: Hits<R>,
    pub stopped_early: bool,
}

impl CodeSpace {
    /// Alternating words over two factors.
    pub fn free(left: &Alphabet, right: &Alphabet) -> CodeSpace {
        let mk = |(w, m): &(Word, Matrix), kind| Letter {
            word: w.clone(),
            matrix: m.clone(),
            kind,
            pinch_from: false,
            pinch_to: false,
        };
        let letters = left
            .elements
            .iter()
            .map(|e| mk(e, LetterKind::Left))
            .chain(right.elements.iter().map(|e| mk(e, LetterKind::Right)))
            .collect();
        CodeSpace { letters, form: Form::Free }
    }

    /// Britton-reduced words `g₁ k^{δ₁} g₂ …` with `g_i` from `base`.
    ///
    /// Between two stable letters of the same sign the base element may be
    /// trivial, so `k²` appears as two consecutive stable letters.
    pub fn hnn(base: &Alphabet, stable: &str, k: &Matrix, from: &Matrix, to: &Matrix) -> CodeSpace {
        let mut letters: Vec<Letter> = base
            .elements
            .iter()
            .map(|(w, m)| Letter {
                word: w.clone(),
                matrix: m.clone(),
                kind: LetterKind::Base,
                pinch_from: m == from,
                pinch_to: m == to,
            })
            .collect();
        let kinv = k.inverse().expect("stable letter is invertible");
        for (d, m) in [(1i8, k.clone()), (-1, kinv)] {
            letters.push(Letter {
                word: Word::gen(stable, d as i64),
                matrix: m,
                kind: LetterKind::Stable(d),
                pinch_from: false,
                pinch_to: false,
            });
        }
        CodeSpace { letters, form: Form::Hnn }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn allowed(&self, prefix: &[u32], next: u32) -> bool {
        let Some(&last) = prefix.last() else {
            return true;
        };
        let nk = self.letters[next as usize].kind;
        let lk = self.letters[last as usize].kind;
        match self.form {
            Form::Free => lk != nk,
            Form::Hnn => match (lk, nk) {
                (LetterKind::Stable(e), LetterKind::Stable(d)) => e == d,
                (LetterKind::Stable(_), _) => true,
                (_, LetterKind::Stable(d)) => {
                    if prefix.len() < 2 {
                        return true;
                    }
                    let g = &self.letters[last as usize];
                    match self.letters[prefix[prefix.len() - 2] as usize].kind {
                        LetterKind::Stable(e) if e == -d => !(if e < 0 { g.pinch_from } else { g.pinch_to }),
                        _ => true,
                    }
                }
                _ => false,
            },
        }
    }

    /// Every reduced code of length ≤ `radius`, in length-lex order, the
    /// empty code first.
    pub fn codes(&self, radius: usize) -> Vec<Vec<u32>> {
        let mut all = vec![Vec::new()];
        let mut level: Vec<Vec<u32>> = vec![Vec::new()];
        for _ in 0..radius {
            let mut next = Vec::new();
            for c in &level {
                for l in 0..self.letters.len() as u32 {
                    if self.allowed(c, l) {
                        let mut nc = c.clone();
                        nc.push(l);
                        next.push(nc);
                    }
                }
            }
            all.extend(next.iter().cloned());
            level = next;
        }
        all
    }

    pub fn word(&self, code: &[u32]) -> Word {
        code.iter().fold(Word::empty(), |acc, &l| acc.concat(&self.letters[l as usize].word))
    }

    /// Depth-first walk over all nonempty reduced codes of length ≤ `radius`
    /// carrying prefix products, so each word costs one multiplication.
    ///
    /// `images[i]` is the value of letter `i`. With `stop_on_first` the walk
    /// ends at the first hit, and which hit is found is then unspecified.
    pub fn scan<T, R, M, C>(&self, radius: usize, images: &[T], mul: M, check: C, stop_on_first: bool) -> Scan<R>
    where
        T: Clone + Send + Sync,
        R: Send,
        M: Fn(&T, &T) -> T + Sync,
        C: Fn(&[u32], &T) -> Option<R> + Sync,
    {
        assert_eq!(images.len(), self.letters.len());
        let stop = AtomicBool::new(false);
        if radius == 0 {
            return Scan { visited: 0, hits: Vec::new(), stopped_early: false };
        }
        let parts: Vec<(usize, Hits<R>)> = (0..self.letters.len() as u32)
            .into_par_iter()
            .map(|first| {
                let mut visited = 0;
                let mut hits = Vec::new();
                let mut code = vec![first];
                self.dfs(
                    radius,
                    images,
                    &mul,
                    &check,
                    stop_on_first,
                    &stop,
                    &mut code,
                    &images[first as usize],
                    &mut visited,
                    &mut hits,
                );
                (visited, hits)
            })
            .collect();
        let mut visited = 0;
        let mut hits = Vec::new();
        for (v, h) in parts {
            visited += v;
            hits.extend(h);
        }
        hits.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
        Scan { visited, hits, stopped_early: stop.load(Ordering::Relaxed) }
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs<T, R, M, C>(
        &self,
        radius: usize,
        images: &[T],
        mul: &M,
        check: &C,
        stop_on_first: bool,
        stop: &AtomicBool,
        code: &mut Vec<u32>,
        value: &T,
        visited: &mut usize,
        hits: &mut Vec<(Vec<u32>, R)>,
    ) where
        M: Fn(&T, &T) -> T,
        C: Fn(&[u32], &T) -> Option<R>,
    {
        if stop.load(Ordering::Relaxed) {
            return;
        }
        *visited += 1;
        if let Some(r) = check(code, value) {
            hits.push((code.clone(), r));
            if stop_on_first {
                stop.store(true, Ordering::Relaxed);
                return;
            }
        }
        if code.len() == radius {
            return;
        }
        for l in 0..self.letters.len() as u32 {
            if self.allowed(code, l) {
                let next = mul(value, &images[l as usize]);
                code.push(l);
                self.dfs(radius, images, mul, check, stop_on_first, stop, code, &next, visited, hits);
                code.pop();
            }
        }
    }
}

/// Words of the code space up to `radius`, in length-lex order.
pub fn enumerate_reduced(space: &CodeSpace, radius: usize) -> Vec<Word> {
    space.codes(radius).iter().map(|c| space.word(c)).collect()
}
