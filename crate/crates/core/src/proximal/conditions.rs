use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::scheme::PingPongScheme;
use super::ProximalError;
use crate::exactlin::projective::parallel;
use crate::exactlin::{int, is_zero_vector, rank_of_rows, Involution, Matrix, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionResult {
    pub name: String,
    pub pass: bool,
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub conditions: Vec<ConditionResult>,
}

impl ConditionReport {
    fn check(&mut self, name: &str, witnesses: Vec<String>) {
        self.conditions.push(ConditionResult { name: name.to_string(), pass: witnesses.is_empty(), witnesses });
    }

    pub fn all_pass(&self) -> bool {
        self.conditions.iter().all(|c| c.pass)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.conditions.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&ConditionResult> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

fn eigen(m: &Matrix, v: &[Rational]) -> bool {
    parallel(&m.apply(v), v)
}

/// The ping-pong conditions for a free product `G * H` with `G` fixed and
/// `H` conjugated by `f(L)`: `left` lists the letters of `G`, `right` those of
/// `H`, and `x` is the distinguished vector of `im(Pr)`.
pub fn check_free_conditions(
    scheme: &PingPongScheme,
    x: &[Rational],
    left: &[Matrix],
    right: &[Matrix],
    pr: &Matrix,
) -> ConditionReport {
    let mut rep = ConditionReport::default();
    let (v1, v2) = (scheme.vector(0), scheme.vector(1));
    let (hp, hm) = (scheme.h_plus(), scheme.h_minus());
    let mut w = Vec::new();
    if is_zero_vector(x) || pr.apply(x) != x {
        w.push("x is not a nonzero vector of im(Pr)".to_string());
    }
    rep.check("x-in-image", w);

    let w = left.iter().enumerate().filter(|(_, g)| eigen(g, &v1)).map(|(i, _)| format!("left letter {i}")).collect();
    rep.check("v1-not-eigenvector", w);
    let w = right.iter().enumerate().filter(|(_, h)| eigen(h, &v2)).map(|(i, _)| format!("right letter {i}")).collect();
    rep.check("v2-not-eigenvector", w);

    let mut w = Vec::new();
    if hm.contains_vector(x) {
        w.push("identity".to_string());
    }
    for (i, g) in left.iter().enumerate() {
        if hm.contains_vector(&g.apply(x)) {
            w.push(format!("left letter {i}"));
        }
    }
    rep.check("g(x) avoids H-", w);

    let w = left
        .iter()
        .enumerate()
        .filter(|(_, g)| hm.contains_vector(&g.apply(&v1)))
        .map(|(i, _)| format!("left letter {i}"))
        .collect();
    rep.check("g(a+) avoids H-", w);

    let w = right
        .iter()
        .enumerate()
        .filter(|(_, h)| hp.contains_vector(&h.apply(&v2)))
        .map(|(i, _)| format!("right letter {i}"))
        .collect();
    rep.check("h(a-) avoids H+", w);

    let differs = |v: Vec<Rational>| is_zero_vector(&v) || !parallel(&v, x);
    let mut w = Vec::new();
    if !differs(pr.apply(&v1)) {
        w.push("identity".to_string());
    }
    for (i, g) in left.iter().enumerate() {
        if !differs(pr.apply(&g.apply(&v1))) {
            w.push(format!("left letter {i}"));
        }
    }
    rep.check("Pr g(a+) differs from x", w);
    rep
}

/// Conditions on a scheme for the HNN step: `v₁, v₂ ∈ Ω`, `v₂` off the lines
/// `Pr_t·g(v₁)`, and `g(a±) ∉ H⁺ ∪ H⁻` for `g ∈ S₀`.
pub fn check_hnn_conditions(scheme: &PingPongScheme, t: &Involution, s0: &[Matrix]) -> ConditionReport {
    let mut rep = ConditionReport::default();
    let r = t.w_plus().len();
    let tm = t.matrix();
    let pr = t.projector();
    let mut w = Vec::new();
    for i in 0..scheme.dim() {
        let v = scheme.vector(i);
        let tv = tm.apply(&v);
        let ok = if i < r { tv == v } else { tv.iter().zip(&v).all(|(a, b)| (a + b).is_zero()) };
        if !ok {
            w.push(format!("basis vector {}", i + 1));
        }
    }
    rep.check("basis-compatible", w);

    let (v1, v2) = (scheme.vector(0), scheme.vector(1));
    let prg: Vec<Matrix> = s0.iter().map(|g| pr.mul(g)).collect();
    let mut w = Vec::new();
    for (i, m) in prg.iter().enumerate() {
        if eigen(m, &v1) {
            w.push(format!("v1, letter {i}"));
        }
        if eigen(m, &v2) {
            w.push(format!("v2, letter {i}"));
        }
    }
    rep.check("omega", w);

    let w = prg
        .iter()
        .enumerate()
        .filter(|(_, m)| {
            let img = m.apply(&v1);
            !is_zero_vector(&img) && parallel(&v2, &img)
        })
        .map(|(i, _)| format!("letter {i}"))
        .collect();
    rep.check("span-avoidance", w);

    let (hp, hm) = (scheme.h_plus(), scheme.h_minus());
    let mut w = Vec::new();
    for (i, g) in s0.iter().enumerate() {
        for (label, a) in [("a+", &v1), ("a-", &v2)] {
            let ga = g.apply(a);
            if hp.contains_vector(&ga) || hm.contains_vector(&ga) {
                w.push(format!("letter {i} at {label}"));
            }
        }
    }
    rep.check("g(a±) avoids H+ and H-", w);
    rep
}

fn draw_coeffs(rng: &mut ChaCha8Rng, k: usize, height: i64) -> Vec<i64> {
    loop {
        let v: Vec<i64> = (0..k).map(|_| rng.gen_range(-height..=height)).collect();
        if v.iter().any(|&c| c != 0) {
            return v;
        }
    }
}

fn combine(coeffs: &[i64], basis: &[Vec<Rational>], n: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); n];
    for (c, b) in coeffs.iter().zip(basis) {
        for (o, x) in out.iter_mut().zip(b) {
            *o += int(*c) * x;
        }
    }
    out
}

fn standard_basis(n: usize) -> Vec<Vec<Rational>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { int(1) } else { int(0) }).collect()).collect()
}

fn validate_letters(letters: &[Matrix], label: &str) -> Result<(), ProximalError> {
    if let Some(i) = letters.iter().position(Matrix::is_scalar) {
        return Err(ProximalError::Precondition(format!("{label} letter {i} is scalar")));
    }
    Ok(())
}

/// Seeded rejection sampling of a basis and a point `x ∈ im(Pr)` meeting
/// [`check_free_conditions`]. The returned scheme carries `L = 2`.
pub fn choose_basis_free(
    left: &[Matrix],
    right: &[Matrix],
    pr: &Matrix,
    seed: u64,
    height: i64,
    max_draws: usize,
) -> Result<(PingPongScheme, Vec<Rational>, ConditionReport), ProximalError> {
    let n = pr.dim();
    validate_letters(left, "left")?;
    validate_letters(right, "right")?;
    let rank = pr.rank();
    if rank < 2 || 2 * rank < n + 2 {
        return Err(ProximalError::Precondition(format!(
            "dim im(Pr) − dim ker(Pr) = {} is below 2",
            2 * rank as i64 - n as i64
        )));
    }
    let image = pr.column_space();
    let std = standard_basis(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = Vec::new();
    for _ in 0..max_draws {
        let cols: Vec<Vec<Rational>> = (0..n).map(|_| combine(&draw_coeffs(&mut rng, n, height), &std, n)).collect();
        let x = combine(&draw_coeffs(&mut rng, image.len(), height), &image, n);
        let Ok(basis) = Matrix::from_columns(&cols) else { continue };
        let Ok(scheme) = PingPongScheme::new(basis, int(2)) else {
            last = vec!["singular basis".to_string()];
            continue;
        };
        let report = check_free_conditions(&scheme, &x, left, right, pr);
        if report.all_pass() {
            return Ok((scheme, x, report));
        }
        last = report.failed().iter().map(|s| s.to_string()).collect();
    }
    Err(ProximalError::SearchFailure { draws: max_draws, last: last.join(", ") })
}

/// Seeded rejection sampling of a scheme adapted to `W⁺(t) ⊕ W⁻(t)` meeting
/// [`check_hnn_conditions`]. `s0` must avoid `1` and `t`.
pub fn choose_basis_hnn(
    s0: &[Matrix],
    t: &Involution,
    seed: u64,
    height: i64,
    max_draws: usize,
) -> Result<(PingPongScheme, ConditionReport), ProximalError> {
    let n = t.dim();
    let r = t.w_plus().len();
    if r < n - r + 2 {
        return Err(ProximalError::Precondition(format!("dim W⁺ = {r} is below dim W⁻ + 2 = {}", n - r + 2)));
    }
    let pr = t.projector();
    if let Some(i) = s0.iter().position(|g| {
        let m = pr.mul(g);
        crate::exactlin::scalar_on_subspace(&m, t.w_plus()).ok().flatten().is_some()
    }) {
        return Err(ProximalError::Precondition(format!("Pr_t·g is scalar on W⁺ for letter {i}")));
    }
    let wp = t.w_plus().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = Vec::new();
    for _ in 0..max_draws {
        let mut cols: Vec<Vec<Rational>> = (0..r).map(|_| combine(&draw_coeffs(&mut rng, r, height), &wp, n)).collect();
        if rank_of_rows(cols.clone()) < r {
            last = vec!["dependent W⁺ vectors".to_string()];
            continue;
        }
        cols.extend(t.w_minus().iter().cloned());
        let Ok(basis) = Matrix::from_columns(&cols) else { continue };
        let Ok(scheme) = PingPongScheme::new(basis, int(2)) else { continue };
        let report = check_hnn_conditions(&scheme, t, s0);
        if report.all_pass() {
            return Ok((scheme, report));
        }
        last = report.failed().iter().map(|s| s.to_string()).collect();
    }
    Err(ProximalError::SearchFailure { draws: max_draws, last: last.join(", ") })
}
