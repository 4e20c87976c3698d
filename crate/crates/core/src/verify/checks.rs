use rayon::prelude::*;

use super::report::{VerificationReport, Witness, MAX_WITNESSES};
use crate::exactlin::modp::{apply_form, ModMatrix};
use crate::exactlin::Matrix;
use crate::tower::membership::{fingerprint, SubgroupBall};
use crate::tower::TowerState;
use crate::words::{Ball, BallGen, GeneratorTable, Metric, Word, WordError};

/// Word-metric ball of the whole table.
pub(crate) fn word_ball(table: &GeneratorTable, radius: usize, keep: bool) -> Result<Ball, WordError> {
    let n = table.dim().ok_or(WordError::EmptyTable)?;
    Ok(Ball::build_with(&BallGen::from_table(table), radius, Metric::Word, fingerprint(n), keep))
}

fn truncate(report: &mut VerificationReport, all: Vec<Witness>) {
    if all.len() > MAX_WITNESSES {
        report.note(format!("{} failures, first {} kept", all.len(), MAX_WITNESSES));
    }
    for w in all.into_iter().take(MAX_WITNESSES) {
        report.fail(w);
    }
}

/// For `g` in the G-ball with no A-witness and nontrivial `a` in the A-ball,
/// `g·a·g⁻¹` must not lie in the A-ball.
pub fn check_malnormal(
    table: &GeneratorTable,
    a_gens: &[Word],
    radius_g: usize,
    radius_a: usize,
) -> Result<VerificationReport, WordError> {
    let mut report = VerificationReport::new("malnormal", &[("G", radius_g), ("A", radius_a)]);
    let a = SubgroupBall::new(table, a_gens, radius_a)?;
    let g = word_ball(table, radius_g, true)?;
    if a.len() == 1 {
        report.note("A is trivial within the ball");
        return Ok(report);
    }
    // both balls share one fingerprint, so G-keys look up A directly
    let outside: Vec<u32> =
        g.reps().iter().copied().filter(|&x| a.confirm(g.key(x), || g.exact(x)).is_none()).collect();
    if outside.is_empty() {
        report.note("degenerate: every G-ball element lies in A");
        return Ok(report);
    }
    let fp = a.fingerprint().clone();
    let nontrivial = &a.reps()[1..];
    let found: Vec<Witness> = outside
        .par_iter()
        .flat_map_iter(|&x| {
            let gm = g.modp(x).expect("kept");
            let form = fp.conjugation_form(gm, &gm.inverse().expect("determinant one"));
            let mut hits = Vec::new();
            for &y in nontrivial {
                let key = apply_form(&form, a.modp(y));
                if a.ball().candidates(key).is_empty() {
                    continue;
                }
                let (ge, ae) = (g.exact(x), a.exact(y));
                let c = ge.mul(&ae).mul(&ge.inverse().expect("determinant one"));
                if a.ball().confirm(key, &c).is_some() {
                    hits.push(Witness {
                        detail: format!("g = {} is outside A but g·a·g⁻¹ ∈ A for a = {}", g.word(x), a.table_word(y)),
                        words: vec![g.word(x), a.table_word(y)],
                        matrices: vec![ge, ae, c],
                    });
                }
            }
            hits
        })
        .collect();
    report.note(format!(
        "{} G-ball elements outside A, {} nontrivial A-ball elements",
        outside.len(),
        nontrivial.len()
    ));
    truncate(&mut report, found);
    Ok(report)
}

/// No A-ball element squares to the identity except the identity.
pub fn check_no_involutions(
    table: &GeneratorTable,
    a_gens: &[Word],
    radius: usize,
) -> Result<VerificationReport, WordError> {
    let mut report = VerificationReport::new("no involutions in A", &[("A", radius)]);
    let a = SubgroupBall::new(table, a_gens, radius)?;
    let mut found = Vec::new();
    for &y in &a.reps()[1..] {
        let m = a.modp(y);
        if !m.mul(m).is_identity() {
            continue;
        }
        let e = a.exact(y);
        if e.mul(&e).is_identity() {
            found.push(Witness {
                detail: format!("{} is an involution in A", a.table_word(y)),
                words: vec![a.table_word(y)],
                matrices: vec![e],
            });
        }
    }
    report.note(format!("{} A-ball elements squared", a.len()));
    truncate(&mut report, found);
    Ok(report)
}

/// Every ledger entry replays `t·f·v⁻¹ = witness` exactly, with `f` and the
/// witness words over the A-generators. Coverage: the share of G-ball
/// elements outside A that have an A-ball witness `f`.
pub fn check_sharp2trans_witnesses(
    state: &TowerState,
    coverage_radius: usize,
) -> Result<VerificationReport, WordError> {
    let radius_a = state.params.class_radius;
    let mut report =
        VerificationReport::new("sharp 2-transitivity witnesses", &[("coverage", coverage_radius), ("A", radius_a)]);
    if state.ledger.is_empty() {
        report.note("the ledger is empty");
    }
    let a = SubgroupBall::new(state.table(), &state.a_gens, radius_a)?;
    let t = state.t.matrix();
    let mut found = Vec::new();
    for e in &state.ledger {
        let bad = |detail: String, mats: Vec<Matrix>| Witness {
            detail,
            words: vec![e.v.clone(), e.f.clone(), e.witness.clone()],
            matrices: mats,
        };
        match state.ledger_values(e) {
            Ok((lhs, w)) if lhs == w => {
                if a.find(&lhs).is_none() {
                    report.note(format!("witness for v = {} lies beyond the A-ball of radius {radius_a}", e.v));
                }
            }
            Ok((lhs, w)) => found
                .push(bad(format!("v = {}: t·f·v⁻¹ differs from the stored witness {}", e.v, e.witness), vec![lhs, w])),
            Err(err) => found.push(bad(format!("v = {}: {err}", e.v), Vec::new())),
        }
    }
    let g = word_ball(state.table(), coverage_radius, false)?;
    let (mut total, mut covered) = (0usize, 0usize);
    for &x in g.reps() {
        let v = g.exact(x);
        if a.find(&v).is_some() {
            continue;
        }
        total += 1;
        let vi = v.inverse().expect("determinant one");
        if a.sandwich(t, &vi).is_some() {
            covered += 1;
        }
    }
    report.note(format!("coverage {covered}/{total} of G-ball elements outside A"));
    truncate(&mut report, found);
    Ok(report)
}

/// `y = x^k` for some `1 ≤ |k| ≤ bound`.
fn is_power(x: &Matrix, y: &Matrix, bound: usize) -> bool {
    let xi = x.inverse().expect("determinant one");
    let (mut p, mut q) = (x.clone(), xi.clone());
    for _ in 0..bound {
        if p == *y || q == *y {
            return true;
        }
        p = p.mul(x);
        q = q.mul(&xi);
    }
    false
}

/// Diagnostic for a split structure: commuting pairs `x, y ≠ 1` with distinct
/// cyclic closures whose ball-conjugacy classes commute elementwise.
pub fn check_commuting_normal_ball(table: &GeneratorTable, radius: usize) -> Result<VerificationReport, WordError> {
    let mut report = VerificationReport::new("commuting normal closures", &[("G", radius)]);
    let g = word_ball(table, radius, true)?;
    let exact: Vec<Matrix> = g.reps().iter().map(|&x| g.exact(x)).collect();
    let inverses: Vec<Matrix> = exact.iter().map(|m| m.inverse().expect("determinant one")).collect();
    let commute_mod = |a: &ModMatrix, b: &ModMatrix| a.mul(b) == b.mul(a);
    let closure = |i: usize| -> Vec<Matrix> {
        let mut out: Vec<Matrix> = Vec::new();
        for (c, ci) in exact.iter().zip(&inverses) {
            let m = c.mul(&exact[i]).mul(ci);
            if !out.contains(&m) {
                out.push(m);
            }
        }
        out
    };
    let mut found = Vec::new();
    let reps = g.reps();
    for xi in 1..reps.len() {
        for yi in xi + 1..reps.len() {
            let (x, y) = (reps[xi], reps[yi]);
            if !commute_mod(g.modp(x).expect("kept"), g.modp(y).expect("kept")) || !exact[xi].commutes_with(&exact[yi])
            {
                continue;
            }
            if is_power(&exact[xi], &exact[yi], 2 * radius) || is_power(&exact[yi], &exact[xi], 2 * radius) {
                continue;
            }
            let (cx, cy) = (closure(xi), closure(yi));
            if cx.iter().all(|p| cy.iter().all(|q| p.commutes_with(q))) {
                found.push(Witness {
                    detail: format!("the ball closures of {} and {} commute", g.word(x), g.word(y)),
                    words: vec![g.word(x), g.word(y)],
                    matrices: vec![exact[xi].clone(), exact[yi].clone()],
                });
            }
        }
    }
    truncate(&mut report, found);
    Ok(report)
}
