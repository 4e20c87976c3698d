use super::checks::word_ball;
use super::*;
use crate::exactlin::{int, rat, Involution, Matrix};
use crate::tower::fixtures::{boot, three};
use crate::tower::{step_free, SubgroupBall};
use crate::words::{Factor, GeneratorTable, Word};

fn w(s: &str) -> Word {
    Word::parse(s).unwrap()
}

fn table3(gens: &[(&str, Matrix)]) -> GeneratorTable {
    let mut t = GeneratorTable::new();
    for (name, m) in gens {
        t.push(name, Factor::Base, m.clone()).unwrap();
    }
    t
}

fn u3() -> Matrix {
    Matrix::from_int_rows(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap()
}

fn w3() -> Matrix {
    Matrix::from_int_rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 2, 1]]).unwrap()
}

/// Affine maps `x ↦ a·x + b` of Q as `[[a, b, 0], [0, 1, 0], [0, 0, 1/a]]`;
/// `A` is the stabilizer `⟨x ↦ −x⟩` of 0.
fn affine() -> GeneratorTable {
    let s = Matrix::diagonal(&[int(-1), int(1), int(-1)]);
    table3(&[("s", s), ("p", u3())])
}

#[test]
fn malnormal_trivial_and_degenerate() {
    let t = table3(&[("u", u3()), ("w", w3())]);
    let r = check_malnormal(&t, &[], 3, 3).unwrap();
    assert!(r.pass && r.notes.iter().any(|n| n.contains("trivial")));
    let g = table3(&[("u", u3())]);
    let r = check_malnormal(&g, &[w("u")], 3, 3).unwrap();
    assert!(r.pass && r.notes.iter().any(|n| n.contains("degenerate")), "{r:?}");
}

#[test]
fn malnormal_failure_has_a_replayable_witness() {
    // w commutes with u, so w·u·w⁻¹ = u ∈ ⟨u⟩
    let t = table3(&[("u", u3()), ("w", w3())]);
    let r = check_malnormal(&t, &[w("u")], 2, 2).unwrap();
    assert!(!r.pass);
    let wit = &r.witnesses[0];
    let (g, a) = (t.evaluate(&wit.words[0]).unwrap(), t.evaluate(&wit.words[1]).unwrap());
    assert_eq!(g, wit.matrices[0]);
    assert_eq!(g.mul(&a).mul(&g.inverse().unwrap()), wit.matrices[2]);
    // still failing at larger radii
    assert!(!check_malnormal(&t, &[w("u")], 3, 3).unwrap().pass);
}

#[test]
fn malnormal_after_a_free_step() {
    let s1 = step_free(boot(), &w("u")).unwrap();
    let r = check_malnormal(s1.table(), &s1.a_gens, 3, 3).unwrap();
    assert!(r.pass, "{r:?}");
}

#[test]
fn involutions_in_a() {
    let t = Involution::diagonal(4, 2).unwrap();
    let u = Matrix::from_int_rows(&[&[1, 1, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 1], &[0, 0, 0, 1]]).unwrap();
    let g = table3(&[("t", t.matrix().clone()), ("u", u)]);
    assert!(check_no_involutions(&g, &[w("u")], 4).unwrap().pass);
    let r = check_no_involutions(&g, &[w("u"), w("t")], 2).unwrap();
    assert!(!r.pass);
    assert!(r.witnesses.iter().any(|x| x.words[0] == w("t")));
}

#[test]
fn ledger_witnesses_and_tampering() {
    let s = three();
    let r = check_sharp2trans_witnesses(s, 2).unwrap();
    assert!(r.pass, "{r:?}");
    assert!(r.notes.iter().any(|n| n.starts_with("coverage")));
    let mut bad = s.clone();
    let i = bad.ledger.iter().position(|e| e.v == w("u")).unwrap();
    bad.ledger[i].f = w("a0^2");
    let r = check_sharp2trans_witnesses(&bad, 2).unwrap();
    assert!(!r.pass);
    assert_eq!(r.witnesses[0].words[0], w("u"));
}

#[test]
fn action_ball_extremes() {
    let g = table3(&[("u", u3()), ("w", w3())]);
    // A = G: one coset, every edge a loop
    let b = build_action_ball(&g, &[w("u"), w("w")], 2, 4).unwrap();
    assert_eq!(b.len(), 1);
    assert!(b.edges[0].iter().all(|e| *e == Some(0)));
    // A = 1: cosets are the ball elements
    let b = build_action_ball(&g, &[], 2, 4).unwrap();
    assert_eq!(b.len(), word_ball(&g, 2, false).unwrap().reps().len());
}

/// Greedy dedup by exact quotient membership, without fingerprints of products.
fn brute_cosets(table: &GeneratorTable, a_gens: &[Word], rc: usize, rm: usize) -> usize {
    let a = SubgroupBall::new(table, a_gens, rm).unwrap();
    let g = word_ball(table, rc, false).unwrap();
    let elems: Vec<Matrix> = g.reps().iter().map(|&x| g.exact(x)).collect();
    let mut reps: Vec<&Matrix> = Vec::new();
    for e in &elems {
        if !reps.iter().any(|r| a.find(&e.mul(&r.inverse().unwrap())).is_some()) {
            reps.push(e);
        }
    }
    reps.len()
}

#[test]
fn coset_count_matches_pairwise_dedup() {
    let s = boot();
    let b = build_state_action_ball(s, 3, 6).unwrap();
    assert_eq!(b.len(), brute_cosets(s.table(), &s.a_gens, 3, 6));
    let s1 = step_free(s, &w("u")).unwrap();
    let b = build_state_action_ball(&s1, 2, 4).unwrap();
    assert_eq!(b.len(), brute_cosets(s1.table(), &s1.a_gens, 2, 4));
    assert!(b.len() < word_ball(s1.table(), 2, false).unwrap().reps().len());
}

#[test]
fn action_edges_are_consistent() {
    let s1 = step_free(boot(), &w("u")).unwrap();
    let b = build_state_action_ball(&s1, 2, 4).unwrap();
    for x in 0..b.len() {
        for s in 0..b.letters.len() {
            let inv = b
                .letters
                .iter()
                .position(|l| *l == b.letters[s].inverse() || (l == &b.letters[s] && l.to_string() == "t"))
                .unwrap();
            if let Some(y) = b.edges[x][s] {
                if let Some(back) = b.edges[y as usize][inv] {
                    assert_eq!(back as usize, x);
                }
            }
        }
    }
}

#[test]
fn pchar2_on_the_bootstrap() {
    let s = boot();
    let b = build_state_action_ball(s, 3, 6).unwrap();
    let r = check_pchar2(s.table(), &b).unwrap();
    assert!(r.pass, "{r:?}");
}

#[test]
fn pchar2_fails_on_the_trivial_action() {
    let t = Involution::diagonal(4, 2).unwrap();
    let g = table3(&[("t", t.matrix().clone())]);
    let b = build_action_ball(&g, &[w("t")], 1, 2).unwrap();
    let r = check_pchar2(&g, &b).unwrap();
    assert!(!r.pass);
    assert!(r.notes.iter().any(|n| n.contains("split-type")));
}

#[test]
fn pchar2_fails_on_the_split_affine_fixture() {
    let g = affine();
    let b = build_action_ball(&g, &[w("s")], 3, 6).unwrap();
    let r = check_pchar2(&g, &b).unwrap();
    assert!(!r.pass);
    // s fixes the base coset A
    assert!(r.witnesses.iter().any(|x| x.words == [Word::empty(), w("s")]));
    // two point reflections compose to a translation
    assert!(r.notes.iter().any(|n| n.contains("beyond 64")), "{:?}", r.notes);
}

#[test]
fn commuting_closures() {
    let d1 = Matrix::diagonal(&[int(2), rat(1, 2), int(1)]);
    let d2 = Matrix::diagonal(&[int(1), int(3), rat(1, 3)]);
    let ab = table3(&[("x", d1), ("y", d2)]);
    let r = check_commuting_normal_ball(&ab, 2).unwrap();
    assert!(!r.pass);
    assert_eq!(r.witnesses[0].words, [w("x"), w("y")]);
    assert!(check_commuting_normal_ball(boot().table(), 2).unwrap().pass);
    // ⟨u⟩ is abelian and reported, but never through a pair of powers
    let cyc = table3(&[("u", u3())]);
    let r = check_commuting_normal_ball(&cyc, 3).unwrap();
    assert!(!r.pass);
    assert!(r.witnesses.iter().all(|x| x.words != [w("u"), w("u^2")] && x.words != [w("u"), w("u^-1")]));
    assert!(
        r.witnesses.iter().any(|x| x.words == [w("u^2"), w("u^3")] || x.words == [w("u^3"), w("u^2")]),
        "{:?}",
        r.witnesses
    );
}

#[test]
fn embedded_action_at_stage_zero() {
    let s = boot();
    let b = build_state_action_ball(s, 3, 6).unwrap();
    let r = check_embedded_action(s, &b, 4).unwrap();
    assert!(r.pass, "{r:?}");
    // A = 1: the H-orbit is the Cayley ball of ⟨u⟩ of radius 3
    assert!(r.notes.iter().any(|n| n.starts_with("7 cosets")), "{:?}", r.notes);
}

#[test]
fn full_suite_on_three_stages_small_radii() {
    let reports = run_all(three(), &VerifyRadii::uniform(2)).unwrap();
    assert_eq!(reports.len(), 7);
    for r in &reports {
        assert!(r.pass, "{r:?}");
    }
}
