use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::scan::{block_scalar_exact, block_scalar_mod, find_conjugator, Frame};
use crate::exactlin::modp::Fingerprint;
use crate::exactlin::{format_rational, Involution, Matrix};
use crate::proximal::{ConditionReport, ConditionResult};
use crate::words::{Ball, BallGen, GeneratorTable};

fn ball(table: &GeneratorTable, radius: usize, cap: u32) -> Ball {
    let n = table.dim().unwrap_or(0);
    let fp = Fingerprint::new(n, &mut ChaCha8Rng::seed_from_u64(0xba11));
    Ball::build(&BallGen::from_table(table), radius, cap, fp, true)
}

fn report(name: &str, witnesses: Vec<String>) -> ConditionReport {
    ConditionReport {
        conditions: vec![ConditionResult { name: name.to_string(), pass: witnesses.is_empty(), witnesses }],
    }
}

/// For every element `g ∉ {1, t}` of the table's ball, `W⁺(t)` is not
/// contained in an eigenspace of `Pr_t ∘ g`.
pub fn verify_aux_condition(table: &GeneratorTable, t: &Involution, radius: usize, cap: u32) -> ConditionReport {
    if table.is_empty() {
        return report("auxiliary condition", Vec::new());
    }
    let b = ball(table, radius, cap);
    let frame = Frame::new(t);
    let (ci, c) = frame.modp().expect("eigenbasis residues");
    let mut witnesses = Vec::new();
    for &node in &b.reps()[1..] {
        let m = ci.mul(b.modp(node).expect("kept")).mul(&c);
        if !block_scalar_mod(&m, frame.r) {
            continue;
        }
        let e = b.exact(node);
        if e == *t.matrix() {
            continue;
        }
        if let Some(l) = block_scalar_exact(&frame.to_frame(&e), frame.r) {
            witnesses.push(format!("{} acts on W⁺ as {}", b.word(node), format_rational(&l)));
        }
    }
    report("auxiliary condition", witnesses)
}

/// Every involution of the table's ball of radius `radius` is conjugate to
/// `t` by an element of the ball of radius `conj_radius`.
pub fn check_involutions_conjugate_ball(
    table: &GeneratorTable,
    t: &Involution,
    radius: usize,
    conj_radius: usize,
    cap: u32,
) -> ConditionReport {
    if table.is_empty() {
        return report("involutions conjugate to t", Vec::new());
    }
    let b = ball(table, radius, cap);
    let conj = if conj_radius == radius { None } else { Some(ball(table, conj_radius, cap)) };
    let cb = conj.as_ref().unwrap_or(&b);
    let mut witnesses = Vec::new();
    for &node in &b.reps()[1..] {
        let m = b.modp(node).expect("kept");
        if !m.mul(m).is_identity() {
            continue;
        }
        let e = b.exact(node);
        if !e.mul(&e).is_identity() {
            continue;
        }
        if find_conjugator(cb, &e, t.matrix()).is_none() {
            witnesses.push(format!("{}", b.word(node)));
        }
    }
    report("involutions conjugate to t", witnesses)
}

/// All involutions of the table's ball, as exact matrices with their words.
pub fn ball_involutions(table: &GeneratorTable, radius: usize, cap: u32) -> Vec<(crate::words::Word, Matrix)> {
    if table.is_empty() {
        return Vec::new();
    }
    let b = ball(table, radius, cap);
    b.reps()[1..]
        .iter()
        .filter(|&&node| {
            let m = b.modp(node).expect("kept");
            m.mul(m).is_identity()
        })
        .map(|&node| (b.word(node), b.exact(node)))
        .filter(|(_, e)| e.mul(e).is_identity())
        .collect()
}
