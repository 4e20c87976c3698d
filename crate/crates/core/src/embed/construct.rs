use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::certificate::{CertKind, EmbeddingCertificate, InvolutionWitness};
use super::scan::{find_conjugator, scan_space, Frame, Violation, WordScan};
use super::{EmbedError, EmbedParams};
use crate::exactlin::modp::Fingerprint;
use crate::exactlin::{int, Involution, Matrix, Rational};
use crate::proximal::{
    build_hnn_scaled, build_scaled, check_free_conditions, check_hnn_conditions, choose_basis_free, choose_basis_hnn,
    ConditionReport, PingPongScheme,
};
use crate::words::{Alphabet, Ball, BallGen, CodeSpace, Factor, GeneratorTable, LetterKind, Word};

/// Name of the stable letter of the k-form `⟨G, k | k⁻¹tk = t⟩`.
pub const STABLE: &str = "k";

/// Everything a certificate is checked against, except the scheme.
pub(crate) struct Setting {
    pub kind: CertKind,
    pub t: Involution,
    pub base: GeneratorTable,
    pub attached: GeneratorTable,
    pub v: Option<Matrix>,
    pub conjugator: Option<(Word, Matrix)>,
    pub letter: String,
    pub radius: usize,
    pub cap: u32,
    pub alphabet_radius: usize,
    pub conj_radius: usize,
    base_alpha: Alphabet,
    attached_alpha: Alphabet,
    frame: Frame,
}

pub(crate) struct Evaluation {
    pub ell: Matrix,
    pub conditions: ConditionReport,
    pub scan: WordScan,
}

fn all(table: &GeneratorTable) -> Vec<usize> {
    (0..table.len()).collect()
}

/// `h^j ≠ 1` for `1 ≤ j ≤ bound`.
fn no_small_power(h: &Matrix, bound: usize) -> bool {
    let mut p = Matrix::identity(h.dim());
    (0..bound).all(|_| {
        p = p.mul(h);
        !p.is_identity()
    })
}

impl Setting {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        kind: CertKind,
        t: Involution,
        base: GeneratorTable,
        attached: GeneratorTable,
        v: Option<Matrix>,
        conjugator: Option<(Word, Matrix)>,
        letter: String,
        radius: usize,
        cap: u32,
        alphabet_radius: usize,
        conj_radius: usize,
    ) -> Setting {
        let base_alpha = Alphabet::ball(&base, &all(&base), alphabet_radius, cap);
        let attached_alpha = Alphabet::ball(&attached, &all(&attached), alphabet_radius, cap);
        let frame = Frame::new(&t);
        Setting {
            kind,
            t,
            base,
            attached,
            v,
            conjugator,
            letter,
            radius,
            cap,
            alphabet_radius,
            conj_radius,
            base_alpha,
            attached_alpha,
            frame,
        }
    }

    fn base_letters(&self) -> Vec<Matrix> {
        self.base_alpha.elements.iter().map(|(_, m)| m.clone()).collect()
    }

    fn attached_letters(&self) -> Vec<Matrix> {
        self.attached_alpha.elements.iter().map(|(_, m)| m.clone()).collect()
    }

    /// Base letters other than `t`: the set `S₀` of the HNN step.
    fn s0(&self) -> Vec<Matrix> {
        self.base_letters().into_iter().filter(|m| m != self.t.matrix()).collect()
    }

    pub fn preconditions(&self) -> Result<(), EmbedError> {
        let n = self.t.dim();
        if n < 3 {
            return Err(EmbedError::Precondition("dimension must be at least 3".into()));
        }
        for table in [&self.base, &self.attached] {
            if let Some(d) = table.dim() {
                if d != n {
                    return Err(EmbedError::Precondition(format!("generator dimension {d} differs from {n}")));
                }
            }
        }
        for (label, alpha) in [("base", &self.base_alpha), ("attached", &self.attached_alpha)] {
            if let Some((w, _)) = alpha.elements.iter().find(|(_, m)| m.is_scalar()) {
                return Err(EmbedError::Precondition(format!("{label} group contains the nontrivial scalar {w}")));
            }
        }
        if self.kind == CertKind::Hnn {
            if !self.base_alpha.elements.iter().any(|(_, m)| m == self.t.matrix()) {
                return Err(EmbedError::Precondition("t is not a letter of the base group".into()));
            }
            let v = self.v.as_ref().expect("hnn setting has v");
            if v.mul(v) != Matrix::identity(n) || v.is_identity() || v.det() != int(1) {
                return Err(EmbedError::Precondition("v is not an involution of determinant 1".into()));
            }
            if v == self.t.matrix() {
                return Err(EmbedError::Precondition("v = t is the k-form, handled without a new letter".into()));
            }
        }
        Ok(())
    }

    pub fn choose(
        &self,
        seed: u64,
        height: i64,
        max_draws: usize,
    ) -> Result<(PingPongScheme, Vec<Rational>), EmbedError> {
        match self.kind {
            CertKind::Free => {
                let pr = self.t.projector();
                let (s, x, _) =
                    choose_basis_free(&self.base_letters(), &self.attached_letters(), &pr, seed, height, max_draws)?;
                Ok((s, x))
            }
            CertKind::Hnn => {
                let (s, _) = choose_basis_hnn(&self.s0(), &self.t, seed, height, max_draws)?;
                Ok((s, Vec::new()))
            }
        }
    }

    /// The realized generator and the word scan at one scheme.
    pub fn evaluate(
        &self,
        scheme: &PingPongScheme,
        x: &[Rational],
        involutions: bool,
        stop_on_first: bool,
    ) -> Result<Evaluation, EmbedError> {
        let base = self.base_letters();
        match self.kind {
            CertKind::Free => {
                let f = build_scaled(scheme);
                let fi = f.inverse().expect("det 1");
                let right: Vec<Matrix> = self.attached_letters().iter().map(|h| f.mul(h).mul(&fi)).collect();
                let conditions = check_free_conditions(scheme, x, &base, &self.attached_letters(), &self.t.projector());
                let space = CodeSpace::free(&self.base_alpha, &self.attached_alpha);
                let images: Vec<Matrix> = base.into_iter().chain(right).collect();
                let letters = space.letters();
                let excluded = |code: &[u32]| code.len() == 1 && letters[code[0] as usize].kind == LetterKind::Left;
                let scan = if images.is_empty() {
                    WordScan { visited: 0, violations: Vec::new(), involutions: Vec::new() }
                } else {
                    scan_space(&space, &images, &self.frame, self.radius, excluded, involutions, stop_on_first)?
                };
                Ok(Evaluation { ell: f, conditions, scan })
            }
            CertKind::Hnn => {
                let u = build_hnn_scaled(&self.t, scheme)?;
                let ui = u.inverse().expect("det 1");
                let (_, h) = self.conjugator.as_ref().expect("hnn setting has a conjugator");
                let ell = u.mul(h);
                let conditions = check_hnn_conditions(scheme, &self.t, &self.s0());
                let tm = self.t.matrix();
                let space = CodeSpace::hnn(&self.base_alpha, STABLE, &u, tm, tm);
                let images: Vec<Matrix> = base.into_iter().chain([u, ui]).collect();
                let letters = space.letters();
                let excluded = |code: &[u32]| code.len() == 1 && letters[code[0] as usize].matrix == *tm;
                let scan = scan_space(&space, &images, &self.frame, self.radius, excluded, involutions, stop_on_first)?;
                Ok(Evaluation { ell, conditions, scan })
            }
        }
    }

    /// The extended table: base letters, then the attached letters conjugated
    /// by `f` (free) or the new letter `ℓ` (hnn).
    pub fn extended_table(&self, ell: &Matrix) -> Result<GeneratorTable, EmbedError> {
        let mut table = self.base.clone();
        match self.kind {
            CertKind::Free => {
                let fi = ell.inverse().expect("det 1");
                for g in self.attached.generators() {
                    table.push(g.name(), Factor::Free, ell.mul(g.matrix()).mul(&fi))?;
                }
            }
            CertKind::Hnn => {
                table.push(&self.letter, Factor::Stable, ell.clone())?;
            }
        }
        Ok(table)
    }

    /// Conjugators to `t` for every involution word, searched in the ball of
    /// the extended table.
    pub fn involution_witnesses(
        &self,
        ell: &Matrix,
        invs: &[(Word, Matrix)],
    ) -> Result<Vec<InvolutionWitness>, EmbedError> {
        if invs.is_empty() {
            return Ok(Vec::new());
        }
        let table = self.extended_table(ell)?;
        let fp = Fingerprint::new(self.t.dim(), &mut ChaCha8Rng::seed_from_u64(0x5eed));
        let ball = Ball::build(&BallGen::from_table(&table), self.conj_radius, self.cap, fp, true);
        Ok(invs
            .iter()
            .map(|(w, m)| InvolutionWitness {
                word: w.clone(),
                conjugator: find_conjugator(&ball, m, self.t.matrix()).map(|c| ball.word(c)),
            })
            .collect())
    }

    pub fn infinite_order_ok(&self, ell: &Matrix) -> bool {
        match self.kind {
            CertKind::Free => {
                let fi = ell.inverse().expect("det 1");
                self.attached
                    .generators()
                    .iter()
                    .all(|g| no_small_power(&ell.mul(g.matrix()).mul(&fi), 2 * self.radius))
            }
            CertKind::Hnn => no_small_power(ell, 2 * self.radius),
        }
    }

    pub fn hnn_relation_ok(&self, ell: &Matrix) -> bool {
        match &self.v {
            Some(v) => ell.inverse().map(|li| li.mul(self.t.matrix()).mul(ell) == *v).unwrap_or(false),
            None => true,
        }
    }
}

pub(crate) fn attempt_seed(seed: u64, attempt: u32) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = rng.next_u64();
    for _ in 0..attempt {
        s = rng.next_u64();
    }
    s
}

/// Ladder `L = 2, 4, …, 2^{LmaxExp}` over fresh bases until the word scan is
/// clean, then the certificate.
pub(crate) fn search(setting: &Setting, params: &EmbedParams) -> Result<EmbeddingCertificate, EmbedError> {
    setting.preconditions()?;
    let mut last: Option<(PingPongScheme, Vec<Rational>)> = None;
    for attempt in 0..params.retry_cap.max(1) {
        let (scheme, x) = setting.choose(attempt_seed(params.seed, attempt), params.height, params.max_draws)?;
        for e in 1..=params.lmax_exp {
            let s = scheme.with_scale(int(1i64 << e))?;
            let eval = setting.evaluate(&s, &x, false, true)?;
            if !eval.scan.violations.is_empty() || !setting.infinite_order_ok(&eval.ell) {
                last = Some((s, x.clone()));
                continue;
            }
            let full = setting.evaluate(&s, &x, true, false)?;
            let involutions = setting.involution_witnesses(&full.ell, &full.scan.involutions)?;
            if let Some(bad) = involutions.iter().find(|w| w.conjugator.is_none()) {
                return Err(EmbedError::InvolutionNotConjugate(bad.word.to_string()));
            }
            return Ok(EmbeddingCertificate::assemble(setting, params, s, x, full, involutions, attempt + 1));
        }
    }
    let (s, x) = last.expect("ladder ran at least once");
    let eval = setting.evaluate(&s, &x, false, false)?;
    let first = eval.scan.violations.first().cloned().unwrap_or(Violation {
        word: Word::empty(),
        reason: "the realized generator has finite order within the checked bound".into(),
    });
    Err(EmbedError::SearchFailure {
        attempts: params.retry_cap.max(1),
        lmax_exp: params.lmax_exp,
        word: first.word.to_string(),
        reason: first.reason,
    })
}

/// Realizes `G ∗ H` as `⟨G, f·H·f⁻¹⟩` with `f = f(L)` from a ping-pong
/// scheme adapted to `Pr_t`, and certifies on the ball of radius
/// `params.radius` that no word outside `G` has `W⁺(t)` inside an eigenspace
/// of `Pr_t ∘ Φ_f(ω)`. Returns `f`.
pub fn embed_free_product(
    left: &GeneratorTable,
    right: &GeneratorTable,
    t: &Involution,
    params: &EmbedParams,
) -> Result<(Matrix, EmbeddingCertificate), EmbedError> {
    let setting = Setting::new(
        CertKind::Free,
        t.clone(),
        left.clone(),
        right.clone(),
        None,
        None,
        String::new(),
        params.radius,
        params.exponent_cap,
        params.alphabet_radius,
        params.conj_radius,
    );
    let cert = search(&setting, params)?;
    Ok((cert.ell.clone(), cert))
}

/// Realizes `⟨G, f | f⁻¹tf = v⟩` with `f ↦ ℓ = u(L)·h`, where `h⁻¹th = v`
/// is found in the base ball and `u(L)` commutes with `t`. The word scan runs
/// over Britton-reduced words of the k-form `⟨G, k | k⁻¹tk = t⟩`, `k = f·h⁻¹`.
pub fn embed_hnn(
    base: &GeneratorTable,
    t: &Involution,
    v: &Matrix,
    letter: &str,
    params: &EmbedParams,
) -> Result<(Matrix, EmbeddingCertificate), EmbedError> {
    let n = t.dim();
    if v.dim() != n {
        return Err(EmbedError::Precondition("v has the wrong dimension".into()));
    }
    if v.mul(v) != Matrix::identity(n) || v.is_identity() || v.det() != int(1) {
        return Err(EmbedError::Precondition("v is not an involution of determinant 1".into()));
    }
    if v == t.matrix() {
        return Err(EmbedError::Precondition("v = t is the k-form, handled without a new letter".into()));
    }
    let fp = Fingerprint::new(n, &mut ChaCha8Rng::seed_from_u64(0x5eed));
    let ball = Ball::build(&BallGen::from_table(base), params.conj_radius, params.exponent_cap, fp, true);
    let h = find_conjugator(&ball, t.matrix(), v).ok_or_else(|| {
        EmbedError::MissingConjugator(format!(
            "no h with h⁻¹·t·h = v in the base ball of radius {}",
            params.conj_radius
        ))
    })?;
    let setting = Setting::new(
        CertKind::Hnn,
        t.clone(),
        base.clone(),
        GeneratorTable::new(),
        Some(v.clone()),
        Some((ball.word(h), ball.exact(h))),
        letter.to_string(),
        params.radius,
        params.exponent_cap,
        params.alphabet_radius,
        params.conj_radius,
    );
    let cert = search(&setting, params)?;
    Ok((cert.ell.clone(), cert))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn jordan(n: usize) -> Matrix {
        let mut rows = vec![vec![0i64; n]; n];
        for i in 0..n {
            rows[i][i] = 1;
            if i + 1 < n {
                rows[i][i + 1] = 1;
            }
        }
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        Matrix::from_int_rows(&refs).unwrap()
    }

    fn tables() -> (GeneratorTable, GeneratorTable, Involution) {
        let t = Involution::diagonal(6, 4).unwrap();
        let mut left = GeneratorTable::new();
        left.push("t", Factor::Base, t.matrix().clone()).unwrap();
        let mut right = GeneratorTable::new();
        right.push("u", Factor::Free, jordan(6)).unwrap();
        (left, right, t)
    }

    #[test]
    fn bootstrap_free_product_certifies() {
        let (left, right, t) = tables();
        let params = EmbedParams::default();
        let (f, cert) = embed_free_product(&left, &right, &t, &params).unwrap();
        assert_eq!(f, cert.ell);
        assert!(cert.aux && cert.violations.is_empty());
        assert!(cert.scheme.scale() <= &int(1024));
        assert!(cert.involutions.iter().all(|w| w.conjugator.is_some()));
        assert!(cert.involutions.iter().any(|w| w.word.to_string() == "t"));
        // 1 + 7 + 12 + 42 + 72 reduced words at radius 4 over {t} and {u^±1..±3}
        assert_eq!(cert.checked_words, 1 + 7 + 12 + 42 + 72);
        let replay = cert.replay().unwrap();
        assert!(replay.agree, "{:?}", replay.mismatches);
    }

    #[test]
    fn altered_scale_breaks_replay() {
        let (left, right, t) = tables();
        let (_, cert) = embed_free_product(&left, &right, &t, &EmbedParams::default()).unwrap();
        let mut bad = cert.clone();
        bad.scheme = cert.scheme.with_scale(cert.scheme.scale() * int(2)).unwrap();
        assert!(!bad.replay().unwrap().agree);
    }

    #[test]
    fn scalar_factor_rejected() {
        let (left, _, t) = tables();
        let mut right = GeneratorTable::new();
        right.push("m", Factor::Free, Matrix::scalar(6, &int(-1))).unwrap();
        let err = embed_free_product(&left, &right, &t, &EmbedParams::default()).unwrap_err();
        assert!(err.is_precondition(), "{err}");
    }

    #[test]
    fn hnn_relation_is_exact() {
        let (left, right, t) = tables();
        let (_, cert) = embed_free_product(&left, &right, &t, &EmbedParams::default()).unwrap();
        let g = cert.extended_table().unwrap();
        let c = g.evaluate(&Word::parse("u t").unwrap()).unwrap();
        let v = c.inverse().unwrap().mul(t.matrix()).mul(&c);
        let params = EmbedParams { alphabet_radius: 2, ..EmbedParams::default() };
        let (ell, hc) = embed_hnn(&g, &t, &v, "f1", &params).unwrap();
        assert_eq!(ell.inverse().unwrap().mul(t.matrix()).mul(&ell), v);
        assert!(hc.aux);
        assert!(hc.replay().unwrap().agree);
        assert!(matches!(embed_hnn(&g, &t, t.matrix(), "f1", &params), Err(EmbedError::Precondition(_))));
    }
}
