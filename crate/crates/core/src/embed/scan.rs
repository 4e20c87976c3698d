use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::EmbedError;
use crate::exactlin::modp::ModMatrix;
use crate::exactlin::{format_rational, Involution, Matrix, Rational};
use crate::words::{Ball, CodeSpace, Word};

/// Coordinates in which `t = diag(1,…,1,−1,…,−1)`: columns are `W⁺` then `W⁻`.
///
/// In these coordinates `Pr_t·M` restricted to `W⁺` is the top-left `r×r`
/// block of `M`, so the auxiliary test is a block-scalar test.
#[derive(Clone, Debug)]
pub(crate) struct Frame {
    c: Matrix,
    c_inv: Matrix,
    pub r: usize,
}

impl Frame {
    pub fn new(t: &Involution) -> Frame {
        let cols: Vec<Vec<Rational>> = t.w_plus().iter().chain(t.w_minus()).cloned().collect();
        let c = Matrix::from_columns(&cols).expect("eigenbasis of an involution");
        let c_inv = c.inverse().expect("eigenbasis of an involution");
        Frame { c, c_inv, r: t.w_plus().len() }
    }

    pub fn to_frame(&self, m: &Matrix) -> Matrix {
        self.c_inv.mul(m).mul(&self.c)
    }

    /// Residues of `c⁻¹` and `c`.
    pub fn modp(&self) -> Option<(ModMatrix, ModMatrix)> {
        Some((ModMatrix::from_matrix(&self.c_inv)?, ModMatrix::from_matrix(&self.c)?))
    }
}

pub(crate) fn block_scalar_mod(m: &ModMatrix, r: usize) -> bool {
    let d = m.get(0, 0);
    (0..r).all(|i| (0..r).all(|j| m.get(i, j) == if i == j { d } else { 0 }))
}

pub(crate) fn block_scalar_exact(m: &Matrix, r: usize) -> Option<Rational> {
    let d = m.get(0, 0);
    let ok = (0..r).all(|i| (0..r).all(|j| if i == j { m.get(i, j) == d } else { m.get(i, j).is_zero() }));
    ok.then_some(d)
}

fn mod_images(mats: &[Matrix]) -> Result<Vec<ModMatrix>, EmbedError> {
    mats.iter()
        .map(|m| {
            ModMatrix::from_matrix(m)
                .ok_or_else(|| EmbedError::Precondition("denominator divisible by the fingerprint prime".into()))
        })
        .collect()
}

/// A certified failure: the word and the exact reason.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub word: Word,
    pub reason: String,
}

#[derive(Debug)]
pub(crate) struct WordScan {
    pub visited: usize,
    pub violations: Vec<Violation>,
    /// exact values of nontrivial involution words, in length-lex order
    pub involutions: Vec<(Word, Matrix)>,
}

/// Walks every reduced code of length ≤ `radius` and reports, confirmed
/// exactly, the codes not `excluded` on which `Pr_t·M` is scalar on `W⁺`, and
/// optionally all codes whose value is an involution.
///
/// `images` are the letter values in ambient coordinates.
pub(crate) fn scan_space<E>(
    space: &CodeSpace,
    images: &[Matrix],
    frame: &Frame,
    radius: usize,
    excluded: E,
    involutions: bool,
    stop_on_first: bool,
) -> Result<WordScan, EmbedError>
where
    E: Fn(&[u32]) -> bool + Sync,
{
    let framed: Vec<Matrix> = images.iter().map(|m| frame.to_frame(m)).collect();
    let mods = mod_images(&framed)?;
    let r = frame.r;
    let exact =
        |code: &[u32]| code.iter().fold(Matrix::identity(framed[0].dim()), |acc, &l| acc.mul(&framed[l as usize]));
    let scan = space.scan(
        radius,
        &mods,
        |a, b| a.mul(b),
        |code, m| {
            let mut hit = (None, false);
            if !excluded(code) && block_scalar_mod(m, r) {
                if let Some(l) = block_scalar_exact(&exact(code), r) {
                    hit.0 = Some(l);
                }
            }
            if involutions && m.mul(m).is_identity() && !m.is_identity() {
                let e = exact(code);
                hit.1 = e.mul(&e).is_identity() && !e.is_identity();
            }
            (hit.0.is_some() || hit.1).then_some(hit)
        },
        stop_on_first,
    );
    let mut violations = Vec::new();
    let mut invs = Vec::new();
    for (code, (lambda, inv)) in scan.hits {
        let word = space.word(&code);
        if let Some(l) = lambda {
            violations.push(Violation {
                word: word.clone(),
                reason: format!("Pr_t·Φ(w) acts on W⁺ as the scalar {}", format_rational(&l)),
            });
        }
        if inv {
            let m = code.iter().fold(Matrix::identity(images[0].dim()), |acc, &l| acc.mul(&images[l as usize]));
            invs.push((word, m));
        }
    }
    Ok(WordScan { visited: scan.visited, violations, involutions: invs })
}

/// A ball element `c` with `c⁻¹·w·c = target`, found through the residue
/// test `w·c·x = c·target·x` and confirmed exactly. The ball must keep its
/// residue matrices.
pub(crate) fn find_conjugator(ball: &Ball, w: &Matrix, target: &Matrix) -> Option<u32> {
    let (wm, tm) = (ModMatrix::from_matrix(w)?, ModMatrix::from_matrix(target)?);
    let x = &ball.fingerprint().x;
    let tx = tm.apply(x);
    ball.reps().iter().copied().find(|&c| {
        let cm = ball.modp(c).expect("ball keeps residue matrices");
        wm.apply(&cm.apply(x)) == cm.apply(&tx) && {
            let ce = ball.exact(c);
            w.mul(&ce) == ce.mul(target)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::int;

    #[test]
    fn frame_diagonalizes() {
        let c = Matrix::from_int_rows(&[&[1, 1, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 1], &[1, 0, 0, 1]]).unwrap();
        let d = Matrix::diagonal(&[int(1), int(1), int(-1), int(-1)]);
        let t = Involution::new(c.mul(&d).mul(&c.inverse().unwrap())).unwrap();
        let f = Frame::new(&t);
        assert_eq!(f.to_frame(t.matrix()), d);
        let pr = t.projector();
        // block test agrees with the subspace test
        let g = Matrix::from_int_rows(&[&[1, 2, 0, 1], &[0, 1, 0, 0], &[3, 0, 1, 0], &[0, 0, 0, 1]]).unwrap();
        for m in [g.clone(), Matrix::identity(4), t.matrix().clone(), g.mul(t.matrix())] {
            let sub = crate::exactlin::scalar_on_subspace(&pr.mul(&m), t.w_plus()).unwrap();
            assert_eq!(block_scalar_exact(&f.to_frame(&m), 2), sub);
        }
    }
}
