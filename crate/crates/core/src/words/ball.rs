use std::collections::HashMap;

use super::table::{GeneratorTable, Syllable, Word};
use crate::exactlin::modp::{Fingerprint, ModMatrix};
use crate::exactlin::Matrix;

const ROOT: u32 = u32::MAX;

/// A named ball generator; names need not be unique.
#[derive(Clone, Debug)]
pub struct BallGen {
    pub name: String,
    pub matrix: Matrix,
}

impl BallGen {
    pub fn new(name: impl Into<String>, matrix: Matrix) -> Self {
        BallGen { name: name.into(), matrix }
    }

    pub fn from_table(table: &GeneratorTable) -> Vec<BallGen> {
        table.generators().iter().map(|g| BallGen::new(g.name(), g.matrix().clone())).collect()
    }
}

/// How words are measured: syllables `g^p` with `|p| ≤ cap` and adjacent
/// syllables on distinct generators, or single letters `g^{±1}` freely reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    Syllable(u32),
    Word,
}

struct BallLetter {
    gen: u32,
    order2: bool,
    pow: i64,
    exact: Matrix,
    modp: ModMatrix,
}

/// All reduced syllable words up to a radius over a list of generators,
/// built breadth first by left multiplication.
///
/// Nodes are words; words are grouped into elements through the fingerprint
/// `zᵀ·M·x (mod p)`, and every merge is confirmed by exact multiplication.
/// Representatives are the length-lex first word of each element.
pub struct Ball {
    n: usize,
    radius: usize,
    fp: Fingerprint,
    gens: Vec<String>,
    letters: Vec<BallLetter>,
    parent: Vec<u32>,
    letter: Vec<u32>,
    level_start: Vec<usize>,
    keys: Vec<u64>,
    rep_of: Vec<u32>,
    reps: Vec<u32>,
    index: HashMap<u64, Vec<u32>>,
    mats: Option<Vec<ModMatrix>>,
}

impl Ball {
    /// `keep_matrices` stores every node's full residue matrix, which scans
    /// over conjugates need; otherwise only the image of `x` is tracked.
    pub fn build(gens: &[BallGen], radius: usize, cap: u32, fp: Fingerprint, keep_matrices: bool) -> Ball {
        Ball::build_with(gens, radius, Metric::Syllable(cap), fp, keep_matrices)
    }

    pub fn build_with(gens: &[BallGen], radius: usize, metric: Metric, fp: Fingerprint, keep_matrices: bool) -> Ball {
        let n = fp.x.len();
        let (cap, syllable) = match metric {
            Metric::Syllable(c) => (c, true),
            Metric::Word => (1, false),
        };
        let order2: Vec<bool> =
            gens.iter().map(|g| g.matrix.mul(&g.matrix).is_identity() && !g.matrix.is_identity()).collect();
        let mut letters = Vec::new();
        for (gi, g) in gens.iter().enumerate() {
            let inv = g.matrix.inverse().expect("ball generator is invertible");
            let pows: Vec<i64> = if order2[gi] { vec![1] } else { (1..=cap as i64).flat_map(|p| [p, -p]).collect() };
            for p in pows {
                let base = if p < 0 { &inv } else { &g.matrix };
                let exact = base.pow(p.abs()).expect("power");
                let modp = ModMatrix::from_matrix(&exact).expect("denominator prime to p");
                letters.push(BallLetter { gen: gi as u32, order2: order2[gi], pow: p, exact, modp });
            }
        }

        let mut ball = Ball {
            n,
            radius,
            gens: gens.iter().map(|g| g.name.clone()).collect(),
            letters,
            parent: vec![ROOT],
            letter: vec![ROOT],
            level_start: vec![0, 1],
            keys: Vec::new(),
            rep_of: vec![0],
            reps: vec![0],
            index: HashMap::new(),
            mats: keep_matrices.then(|| vec![ModMatrix::identity(n)]),
            fp,
        };
        let root_key = ball.fp.key_of_image(&ball.fp.x);
        ball.keys.push(root_key);
        ball.index.insert(root_key, vec![0]);

        let mut images: Vec<u64> = ball.fp.x.clone();
        let mut exact_cache: HashMap<u32, Matrix> = HashMap::new();
        exact_cache.insert(0, Matrix::identity(n));
        for level in 0..radius {
            let (lo, hi) = (ball.level_start[level], ball.level_start[level + 1]);
            let last_level = level + 1 == radius;
            let mut next_images = Vec::new();
            for li in 0..ball.letters.len() {
                for p in lo..hi {
                    let pl = ball.letter[p];
                    if pl != ROOT {
                        let (prev, cur) = (&ball.letters[pl as usize], &ball.letters[li]);
                        if prev.gen == cur.gen && (syllable || cur.order2 || prev.pow != cur.pow) {
                            continue;
                        }
                    }
                    let off = (p - lo) * n;
                    let img = ball.letters[li].modp.apply(&images[off..off + n]);
                    let key = ball.fp.key_of_image(&img);
                    let id = ball.parent.len() as u32;
                    ball.parent.push(p as u32);
                    ball.letter.push(li as u32);
                    ball.keys.push(key);
                    if let Some(mats) = ball.mats.as_mut() {
                        let m = ball.letters[li].modp.mul(&mats[p]);
                        mats.push(m);
                    }
                    let rep = ball.merge_target(id, key, &mut exact_cache);
                    match rep {
                        Some(r) => ball.rep_of.push(r),
                        None => {
                            ball.rep_of.push(id);
                            ball.reps.push(id);
                            ball.index.entry(key).or_default().push(id);
                        }
                    }
                    if !last_level {
                        next_images.extend_from_slice(&img);
                    }
                }
            }
            ball.level_start.push(ball.parent.len());
            images = next_images;
        }
        ball
    }

    fn merge_target(&self, id: u32, key: u64, cache: &mut HashMap<u32, Matrix>) -> Option<u32> {
        let cands = self.index.get(&key)?;
        let mine = self.exact(id);
        for &c in cands {
            let theirs = cache.entry(c).or_insert_with(|| self.exact(c));
            if *theirs == mine {
                return Some(c);
            }
        }
        None
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn fingerprint(&self) -> &Fingerprint {
        &self.fp
    }

    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    /// Distinct elements, as representative nodes in length-lex order.
    pub fn reps(&self) -> &[u32] {
        &self.reps
    }

    pub fn rep_of(&self, node: u32) -> u32 {
        self.rep_of[node as usize]
    }

    pub fn level(&self, node: u32) -> usize {
        self.level_start.iter().rposition(|&s| s <= node as usize).unwrap_or(0)
    }

    pub fn key(&self, node: u32) -> u64 {
        self.keys[node as usize]
    }

    pub fn modp(&self, node: u32) -> Option<&ModMatrix> {
        self.mats.as_ref().map(|m| &m[node as usize])
    }

    pub fn word(&self, mut node: u32) -> Word {
        let mut out = Vec::new();
        while self.letter[node as usize] != ROOT {
            let l = &self.letters[self.letter[node as usize] as usize];
            match out.last_mut() {
                Some(Syllable { gen, pow }) if *gen == self.gens[l.gen as usize] => *pow += l.pow,
                _ => out.push(Syllable { gen: self.gens[l.gen as usize].clone(), pow: l.pow }),
            }
            node = self.parent[node as usize];
        }
        Word(out)
    }

    pub fn exact(&self, mut node: u32) -> Matrix {
        let mut acc = Matrix::identity(self.n);
        while self.letter[node as usize] != ROOT {
            acc = acc.mul(&self.letters[self.letter[node as usize] as usize].exact);
            node = self.parent[node as usize];
        }
        acc
    }

    /// Representatives whose fingerprint equals `key`; equality still has to
    /// be confirmed.
    pub fn candidates(&self, key: u64) -> &[u32] {
        self.index.get(&key).map(Vec::as_slice).unwrap_or(&[])
    }

    /// The representative equal to `g`, confirmed exactly.
    pub fn find(&self, g: &Matrix) -> Option<u32> {
        let key = self.fp.key(&ModMatrix::from_matrix(g)?);
        self.confirm(key, g)
    }

    pub fn confirm(&self, key: u64, g: &Matrix) -> Option<u32> {
        self.candidates(key).iter().copied().find(|&c| self.exact(c) == *g)
    }

    pub fn contains(&self, g: &Matrix) -> bool {
        self.find(g).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn fp(n: usize) -> Fingerprint {
        Fingerprint::new(n, &mut rand_chacha::ChaCha8Rng::seed_from_u64(11))
    }

    #[test]
    fn cyclic_unipotent_ball() {
        let u = Matrix::from_int_rows(&[&[1, 1], &[0, 1]]).unwrap();
        let ball = Ball::build(&[BallGen::new("u", u.clone())], 1, 3, fp(2), false);
        assert_eq!(ball.node_count(), 7);
        assert_eq!(ball.reps().len(), 7);
        assert_eq!(ball.word(ball.find(&u.pow(-2).unwrap()).unwrap()).to_string(), "u^-2");
        assert!(ball.find(&u.pow(4).unwrap()).is_none());
        assert_eq!(ball.find(&Matrix::identity(2)), Some(0));
    }

    #[test]
    fn relations_merge_words() {
        // s and r generate the dihedral group of order 8
        let s = Matrix::from_int_rows(&[&[1, 0], &[0, -1]]).unwrap();
        let r = Matrix::from_int_rows(&[&[0, -1], &[1, 0]]).unwrap();
        let ball = Ball::build(&[BallGen::new("s", s), BallGen::new("r", r)], 6, 1, fp(2), true);
        assert_eq!(ball.reps().len(), 8);
        for &node in ball.reps() {
            let w = ball.word(node);
            assert!(ball.level(node) == w.len());
        }
        for node in 0..ball.node_count() as u32 {
            let rep = ball.rep_of(node);
            assert_eq!(ball.exact(node), ball.exact(rep));
            assert!(rep <= node);
            assert_eq!(ball.modp(node), Some(&ModMatrix::from_matrix(&ball.exact(node)).unwrap()));
        }
    }

    #[test]
    fn word_metric_ball() {
        let a = Matrix::from_int_rows(&[&[1, 2], &[0, 1]]).unwrap();
        let b = Matrix::from_int_rows(&[&[1, 0], &[2, 1]]).unwrap();
        let gens = [BallGen::new("a", a.clone()), BallGen::new("b", b)];
        let ball = Ball::build_with(&gens, 3, Metric::Word, fp(2), false);
        // free group of rank 2: 1 + 4 + 12 + 36
        assert_eq!(ball.reps().len(), 53);
        assert_eq!(ball.word(ball.find(&a.pow(3).unwrap()).unwrap()).to_string(), "a^3");
        let s = Matrix::from_int_rows(&[&[0, -1], &[1, 0]]).unwrap();
        let t = Matrix::from_int_rows(&[&[-1, 0], &[0, -1]]).unwrap().mul(&s).mul(&s).mul(&s);
        let cyc =
            Ball::build_with(&[BallGen::new("s", s.clone()), BallGen::new("t", t)], 2, Metric::Word, fp(2), false);
        assert_eq!(cyc.reps().len(), 4);
    }

    #[test]
    fn representatives_are_length_lex() {
        let a = Matrix::from_int_rows(&[&[1, 2], &[0, 1]]).unwrap();
        let b = Matrix::from_int_rows(&[&[1, 0], &[2, 1]]).unwrap();
        let ball = Ball::build(&[BallGen::new("a", a), BallGen::new("b", b)], 3, 1, fp(2), false);
        // syllables alternate between a^±1 and b^±1: 1 + 4 + 8 + 16, all distinct
        assert_eq!(ball.reps().len(), 29);
        let words: Vec<Word> = ball.reps().iter().map(|&r| ball.word(r)).collect();
        assert_eq!(words[1].to_string(), "a");
        assert_eq!(words[2].to_string(), "a^-1");
        assert_eq!(words[5].to_string(), "a·b");
    }
}
