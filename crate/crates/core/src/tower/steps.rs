use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::classify::{classify_in, Classification};
use super::membership::{alias, fingerprint, SubgroupBall};
use super::state::{LedgerCase, LedgerEntry, StepCase, StepRecord, TowerParams, TowerState};
use super::TowerError;
use crate::embed::{embed_free_product, embed_hnn};
use crate::exactlin::{Involution, Matrix};
use crate::verify::check_malnormal;
use crate::words::{Ball, BallGen, Factor, GeneratorTable, Word};

/// Seed of the embedding search at a given stage.
pub fn step_seed(seed: u64, stage: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stage);
    rng.next_u64()
}

/// `1 + E₁₂ + E₂₃ + …`, the generator of the adjoined free factor.
pub fn unipotent(n: usize) -> Matrix {
    let mut m = Matrix::identity(n);
    for i in 0..n.saturating_sub(1) {
        m = m.add(&unit(n, i, i + 1));
    }
    m
}

fn unit(n: usize, i: usize, j: usize) -> Matrix {
    let mut e = vec![crate::exactlin::int(0); n * n];
    e[i * n + j] = crate::exactlin::int(1);
    Matrix::from_entries(n, &e).expect("square")
}

/// Rejects `H` with an involution or a nontrivial scalar in its syllable ball.
fn check_h(h: &GeneratorTable, radius: usize, cap: u32) -> Result<(), TowerError> {
    let n = h.dim().ok_or_else(|| TowerError::Precondition("H has no generators".into()))?;
    let ball = Ball::build(&BallGen::from_table(h), radius, cap, fingerprint(n), true);
    for &node in &ball.reps()[1..] {
        let m = ball.modp(node).expect("kept");
        if m.is_scalar() {
            let e = ball.exact(node);
            if e.is_scalar() {
                return Err(TowerError::Precondition(format!("H contains the nontrivial scalar {}", ball.word(node))));
            }
        }
        if m.mul(m).is_identity() {
            let e = ball.exact(node);
            if e.mul(&e).is_identity() {
                return Err(TowerError::Precondition(format!("H contains the involution {}", ball.word(node))));
            }
        }
    }
    Ok(())
}

/// `G = ⟨H, t⟩ ≅ H ∗ Z/2` with `t = diag(1^r, (−1)^{n−r})` and `H` conjugated
/// by the certified free-product realization.
pub fn bootstrap(
    h: &GeneratorTable,
    a_words: &[Word],
    r: usize,
    params: TowerParams,
    seed: u64,
    config_hash: &str,
) -> Result<TowerState, TowerError> {
    let n = h.dim().ok_or_else(|| TowerError::Precondition("H has no generators".into()))?;
    if r >= n || !(n - r).is_multiple_of(2) {
        return Err(TowerError::Precondition(format!(
            "n − r = {} must be positive and even for t to have determinant 1",
            n as i64 - r as i64
        )));
    }
    if r < (n - r) + 2 {
        return Err(TowerError::Precondition(format!("r = {r} is smaller than (n − r) + 2 = {}", n - r + 2)));
    }
    if h.index_of("t").is_some() {
        return Err(TowerError::Precondition("the name t is reserved for the involution".into()));
    }
    check_h(h, params.cert_radius, params.exponent_cap)?;
    for w in a_words {
        h.evaluate(w)?;
    }
    let mal = check_malnormal(h, a_words, params.cert_radius, params.cert_radius)?;
    if !mal.pass {
        return Err(TowerError::Precondition(format!(
            "A is not malnormal in H: {}",
            mal.witnesses.first().map(|w| w.detail.clone()).unwrap_or_default()
        )));
    }

    let t = Involution::diagonal(n, r).map_err(|e| TowerError::Precondition(e.to_string()))?;
    let mut left = GeneratorTable::new();
    left.push("t", Factor::Base, t.matrix().clone())?;
    let ep = params.embed(params.conj_radius, step_seed(seed, 0), 0, config_hash);
    let (_, cert) = embed_free_product(&left, h, &t, &ep)?;
    let table = cert.extended_table()?;
    Ok(TowerState {
        n,
        t,
        generator_table: table,
        h_names: h.generators().iter().map(|g| g.name().to_string()).collect(),
        a_original: a_words.to_vec(),
        a_gens: a_words.to_vec(),
        ledger: Vec::new(),
        history: vec![StepRecord {
            stage: 0,
            case: StepCase::Bootstrap,
            v: None,
            letter: String::new(),
            certificate: cert,
        }],
        processed: Vec::new(),
        skipped: Vec::new(),
        stage: 0,
        seed,
        config_hash: config_hash.to_string(),
        params,
    })
}

fn expect_case(state: &TowerState, v: &Word, vm: &Matrix, want: Classification) -> Result<(), TowerError> {
    let a = SubgroupBall::new(state.table(), &state.a_gens, state.params.class_radius)?;
    let got = classify_in(state.t.matrix(), vm, &a);
    if got != want {
        return Err(TowerError::Precondition(format!("v = {v} classifies as {}", got.label())));
    }
    Ok(())
}

/// `G₁ = G ∗ ⟨f⟩`, `A₁ = ⟨A, f, t·f·v⁻¹⟩`, with `f` realized through
/// [`embed_free_product`]. The state is unchanged on failure.
pub fn step_free(state: &TowerState, v: &Word) -> Result<TowerState, TowerError> {
    let vm = state.evaluate(v)?;
    expect_case(state, v, &vm, Classification::FreeCase)?;
    apply_free(state, v)
}

/// `G₁ = ⟨G, f | f⁻¹·t·f = v⟩`, `A₁ = ⟨A, f⟩`, with `f` realized through
/// [`embed_hnn`].
pub fn step_hnn(state: &TowerState, v: &Word) -> Result<TowerState, TowerError> {
    let vm = state.evaluate(v)?;
    expect_case(state, v, &vm, Classification::HnnCase)?;
    apply_hnn(state, v, &vm)
}

fn embed_params(state: &TowerState) -> crate::embed::EmbedParams {
    let stage = state.stage + 1;
    state.params.embed(state.params.step_conj_radius, step_seed(state.seed, stage), stage, &state.config_hash)
}

pub(crate) fn apply_free(state: &TowerState, v: &Word) -> Result<TowerState, TowerError> {
    let letter = state.next_letter();
    let mut attached = GeneratorTable::new();
    attached.push(&letter, Factor::Free, unipotent(state.n))?;
    let (_, cert) = embed_free_product(state.table(), &attached, &state.t, &embed_params(state))?;
    let mut next = state.clone();
    next.generator_table = cert.extended_table()?;
    let m = next.a_gens.len();
    let f = Word::gen(&letter, 1);
    next.a_gens.push(f.clone());
    let w = next.generator_table.reduce(&Word::gen("t", 1).concat(&f).concat(&v.inverse()));
    next.a_gens.push(w);
    next.ledger.push(LedgerEntry {
        v: v.clone(),
        f: Word::gen(&alias(m), 1),
        witness: Word::gen(&alias(m + 1), 1),
        case: LedgerCase::Free,
    });
    next.stage += 1;
    next.history.push(StepRecord {
        stage: next.stage,
        case: StepCase::Free,
        v: Some(v.clone()),
        letter,
        certificate: cert,
    });
    next.processed.push(v.clone());
    Ok(next)
}

pub(crate) fn apply_hnn(state: &TowerState, v: &Word, vm: &Matrix) -> Result<TowerState, TowerError> {
    let letter = state.next_letter();
    let (_, cert) = embed_hnn(state.table(), &state.t, vm, &letter, &embed_params(state))?;
    let mut next = state.clone();
    next.generator_table = cert.extended_table()?;
    let m = next.a_gens.len();
    next.a_gens.push(Word::gen(&letter, 1));
    // t·f = f·v, so t·f·v⁻¹ = f
    next.ledger.push(LedgerEntry {
        v: v.clone(),
        f: Word::gen(&alias(m), 1),
        witness: Word::gen(&alias(m), 1),
        case: LedgerCase::Hnn,
    });
    next.stage += 1;
    next.history.push(StepRecord {
        stage: next.stage,
        case: StepCase::Hnn,
        v: Some(v.clone()),
        letter,
        certificate: cert,
    });
    next.processed.push(v.clone());
    Ok(next)
}
