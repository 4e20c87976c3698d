use serde::Serialize;

use super::checks::word_ball;
use super::report::{VerificationReport, Witness, MAX_WITNESSES};
use crate::exactlin::modp::{dot_mod, ModMatrix};
use crate::exactlin::Matrix;
use crate::tower::membership::SubgroupBall;
use crate::tower::TowerState;
use crate::words::{GeneratorTable, Word, WordError};

/// Partial Schreier graph of the right cosets `A\G` met by the G-ball.
///
/// `Ag = Ag′` is decided by `g′·g⁻¹` in the A-ball of the membership radius,
/// so two representatives may still name the same coset beyond that radius.
#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ActionBall {
    pub radius_cosets: usize,
    pub radius_membership: usize,
    /// `g` and `g⁻¹` per table generator, `g` alone for involutions
    pub letters: Vec<Word>,
    /// length-lex minimal representatives
    pub cosets: Vec<Word>,
    /// `edges[x][s]` is the coset `x·s`, when it is met
    pub edges: Vec<Vec<Option<u32>>>,
    #[serde(skip)]
    reps: Vec<Matrix>,
    #[serde(skip)]
    rep_inv: Vec<Matrix>,
    #[serde(skip)]
    rep_inv_x: Vec<Vec<u64>>,
    #[serde(skip)]
    letter_values: Vec<Matrix>,
    #[serde(skip)]
    a: SubgroupBall,
}

impl ActionBall {
    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    pub fn rep(&self, i: usize) -> &Matrix {
        &self.reps[i]
    }

    pub fn letter_value(&self, s: usize) -> &Matrix {
        &self.letter_values[s]
    }

    /// The first representative `r` with `g·r⁻¹` in the A-ball.
    pub fn coset_of(&self, g: &Matrix) -> Option<usize> {
        let row = ModMatrix::from_matrix(g)?.left_apply(&self.a.fingerprint().z);
        (0..self.reps.len()).find(|&j| {
            let key = dot_mod(&row, &self.rep_inv_x[j]);
            self.a.confirm(key, || g.mul(&self.rep_inv[j])).is_some()
        })
    }

    fn push(&mut self, word: Word, g: Matrix) {
        let gi = g.inverse().expect("determinant one");
        let x = ModMatrix::from_matrix(&gi).expect("p-integral").apply(&self.a.fingerprint().x);
        self.cosets.push(word);
        self.reps.push(g);
        self.rep_inv.push(gi);
        self.rep_inv_x.push(x);
    }
}

/// Cosets of the G-ball of word radius `radius_cosets`, identified at
/// membership radius `radius_membership`, with all generator edges.
pub fn build_action_ball(
    table: &GeneratorTable,
    a_gens: &[Word],
    radius_cosets: usize,
    radius_membership: usize,
) -> Result<ActionBall, WordError> {
    let a = SubgroupBall::new(table, a_gens, radius_membership)?;
    let g = word_ball(table, radius_cosets, false)?;
    let mut letters = Vec::new();
    let mut letter_values = Vec::new();
    for gen in table.generators() {
        letters.push(Word::gen(gen.name(), 1));
        letter_values.push(gen.matrix().clone());
        if !gen.is_order2() {
            letters.push(Word::gen(gen.name(), -1));
            letter_values.push(gen.inverse().clone());
        }
    }
    let mut ball = ActionBall {
        radius_cosets,
        radius_membership,
        letters,
        cosets: Vec::new(),
        edges: Vec::new(),
        reps: Vec::new(),
        rep_inv: Vec::new(),
        rep_inv_x: Vec::new(),
        letter_values,
        a,
    };
    for &node in g.reps() {
        let m = g.exact(node);
        if ball.coset_of(&m).is_none() {
            ball.push(g.word(node), m);
        }
    }
    ball.edges = (0..ball.len())
        .map(|x| {
            (0..ball.letters.len())
                .map(|s| ball.coset_of(&ball.reps[x].mul(&ball.letter_values[s])).map(|c| c as u32))
                .collect()
        })
        .collect();
    Ok(ball)
}

pub fn build_state_action_ball(
    state: &TowerState,
    radius_cosets: usize,
    radius_membership: usize,
) -> Result<ActionBall, WordError> {
    build_action_ball(state.table(), &state.a_gens, radius_cosets, radius_membership)
}

/// Order of `m` up to `bound`.
fn order(m: &Matrix, bound: usize) -> Option<usize> {
    let mut p = m.clone();
    for k in 1..=bound {
        if p.is_identity() {
            return Some(k);
        }
        p = p.mul(m);
    }
    None
}

/// No involution of the G-ball fixes a coset of the action ball.
///
/// On failure the notes carry the p-characteristic diagnostic: the order of
/// `σ·τ` for the first two distinct involutions that fix points.
pub fn check_pchar2(table: &GeneratorTable, ball: &ActionBall) -> Result<VerificationReport, WordError> {
    let mut report = VerificationReport::new(
        "permutational characteristic 2",
        &[("cosets", ball.radius_cosets), ("membership", ball.radius_membership)],
    );
    let g = word_ball(table, ball.radius_cosets, true)?;
    let mut involutions = Vec::new();
    for &node in &g.reps()[1..] {
        let m = g.modp(node).expect("kept");
        if m.mul(m).is_identity() {
            let e = g.exact(node);
            if e.mul(&e).is_identity() {
                involutions.push((g.word(node), e));
            }
        }
    }
    let mut found = Vec::new();
    let mut fixing: Vec<Matrix> = Vec::new();
    for (w, m) in &involutions {
        for x in 0..ball.len() {
            if ball.coset_of(&ball.reps[x].mul(m)) == Some(x) {
                found.push(Witness {
                    detail: format!("{w} fixes the coset A·{}", ball.cosets[x]),
                    words: vec![ball.cosets[x].clone(), w.clone()],
                    matrices: vec![ball.reps[x].clone(), m.clone()],
                });
                if !fixing.contains(m) {
                    fixing.push(m.clone());
                }
            }
        }
    }
    report.note(format!("{} involutions against {} cosets", involutions.len(), ball.len()));
    if !found.is_empty() {
        if ball.len() == 1 {
            report.note("split-type diagnostic: a single coset, fixed by every element");
        }
        if fixing.len() >= 2 {
            match order(&fixing[0].mul(&fixing[1]), 64) {
                Some(k) => report.note(format!("diagnostic: σ·τ has order {k} for two point-fixing involutions")),
                None => report.note("diagnostic: σ·τ has order beyond 64 for two point-fixing involutions"),
            }
        }
    }
    if found.len() > MAX_WITNESSES {
        report.note(format!("{} failures, first {} kept", found.len(), MAX_WITNESSES));
    }
    for w in found.into_iter().take(MAX_WITNESSES) {
        report.fail(w);
    }
    Ok(report)
}

/// `H`-ball ∩ `A₁`-ball equals `H`-ball ∩ `A`-ball, and the cosets of
/// `A\H` embed equivariantly into the action ball of `A₁\G`.
pub fn check_embedded_action(
    state: &TowerState,
    ball: &ActionBall,
    radius: usize,
) -> Result<VerificationReport, WordError> {
    let mut report = VerificationReport::new(
        "embedded action",
        &[("H", radius), ("A", radius), ("cosets", ball.radius_cosets), ("membership", ball.radius_membership)],
    );
    let h = state.h_table()?;
    let hb = word_ball(&h, radius, false)?;
    let a1 = SubgroupBall::new(state.table(), &state.a_gens, radius)?;
    let a0 = SubgroupBall::new(&h, &state.a_original, radius)?;
    for &node in hb.reps() {
        let m = hb.exact(node);
        let (in1, in0) = (a1.find(&m).is_some(), a0.find(&m).is_some());
        if in1 != in0 {
            let side = if in1 { "A₁ but not in A" } else { "A but not in A₁" };
            report.fail(Witness {
                detail: format!("{} lies in {side}", hb.word(node)),
                words: vec![hb.word(node)],
                matrices: vec![m],
            });
        }
    }
    report.note(format!("{} H-ball elements compared", hb.reps().len()));

    let hball = build_action_ball(&h, &state.a_original, ball.radius_cosets, ball.radius_membership)?;
    let iota: Vec<Option<usize>> = (0..hball.len()).map(|y| ball.coset_of(hball.rep(y))).collect();
    for (y, img) in iota.iter().enumerate() {
        match img {
            None => report.fail(Witness {
                detail: format!("the coset A·{} has no image", hball.cosets[y]),
                words: vec![hball.cosets[y].clone()],
                matrices: vec![hball.rep(y).clone()],
            }),
            Some(x) => {
                if let Some(z) = iota[..y].iter().position(|o| *o == Some(*x)) {
                    report.fail(Witness {
                        detail: format!("A·{} and A·{} have the same image", hball.cosets[z], hball.cosets[y]),
                        words: vec![hball.cosets[z].clone(), hball.cosets[y].clone()],
                        matrices: vec![hball.rep(z).clone(), hball.rep(y).clone()],
                    });
                }
            }
        }
    }
    let mut chased = 0;
    for y in 0..hball.len() {
        for s in 0..hball.letters.len() {
            let (Some(ys), Some(x)) = (hball.edges[y][s], iota[y]) else { continue };
            let Some(target) = iota[ys as usize] else { continue };
            let image = ball.coset_of(&ball.rep(x).mul(hball.letter_value(s)));
            chased += 1;
            if image != Some(target) {
                report.fail(Witness {
                    detail: format!(
                        "ι(A·{}·{}) ≠ ι(A·{})·{}",
                        hball.cosets[y], hball.letters[s], hball.cosets[y], hball.letters[s]
                    ),
                    words: vec![hball.cosets[y].clone(), hball.letters[s].clone()],
                    matrices: vec![hball.rep(y).clone()],
                });
            }
        }
    }
    report.note(format!("{} cosets of A\\H, {chased} edges chased", hball.len()));
    Ok(report)
}
