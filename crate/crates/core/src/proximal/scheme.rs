use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::ProximalError;
use crate::exactlin::{Involution, Matrix, ProjectiveHyperplane, ProjectivePoint, Rational};

/// Basis `v₁…v_n` (the columns of `basis`) with scale `L > 1`.
///
/// `a⁺ = [v₁]`, `a⁻ = [v₂]`, `H⁺ = [span(v₂,…,v_n)]`, `H⁻ = [span(v₁,v₃,…,v_n)]`.
/// The hyperplane normals are the first two rows of `basis⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SchemeRepr", into = "SchemeRepr")]
pub struct PingPongScheme {
    basis: Matrix,
    basis_inv: Matrix,
    scale: Rational,
}

#[derive(Serialize, Deserialize)]
struct SchemeRepr {
    basis: Matrix,
    #[serde(rename = "L", with = "crate::exactlin::rational::serde_str")]
    scale: Rational,
}

impl TryFrom<SchemeRepr> for PingPongScheme {
    type Error = ProximalError;

    fn try_from(r: SchemeRepr) -> Result<Self, ProximalError> {
        PingPongScheme::new(r.basis, r.scale)
    }
}

impl From<PingPongScheme> for SchemeRepr {
    fn from(s: PingPongScheme) -> Self {
        SchemeRepr { basis: s.basis, scale: s.scale }
    }
}

impl PingPongScheme {
    pub fn new(basis: Matrix, scale: Rational) -> Result<Self, ProximalError> {
        if basis.dim() < 2 {
            return Err(ProximalError::InvalidScheme("dimension must be at least 2".into()));
        }
        if scale <= Rational::one() {
            return Err(ProximalError::InvalidScheme(format!("scale must exceed 1, got {scale}")));
        }
        let basis_inv = basis.inverse().map_err(|_| ProximalError::InvalidScheme("basis is singular".into()))?;
        Ok(PingPongScheme { basis, basis_inv, scale })
    }

    pub fn with_scale(&self, scale: Rational) -> Result<Self, ProximalError> {
        PingPongScheme::new(self.basis.clone(), scale)
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn vector(&self, i: usize) -> Vec<Rational> {
        self.basis.column(i)
    }

    pub fn a_plus(&self) -> ProjectivePoint {
        ProjectivePoint::new(&self.vector(0)).expect("basis vector")
    }

    pub fn a_minus(&self) -> ProjectivePoint {
        ProjectivePoint::new(&self.vector(1)).expect("basis vector")
    }

    pub fn h_plus(&self) -> ProjectiveHyperplane {
        ProjectiveHyperplane::new(&self.basis_inv.row(0)).expect("row of an invertible matrix")
    }

    pub fn h_minus(&self) -> ProjectiveHyperplane {
        ProjectiveHyperplane::new(&self.basis_inv.row(1)).expect("row of an invertible matrix")
    }
}

/// `c·diag(L, 1/L, 1, …, 1)·c⁻¹` for the basis matrix `c`.
pub(crate) fn scaled_in_basis(basis: &Matrix, basis_inv: &Matrix, scale: &Rational) -> Matrix {
    let n = basis.dim();
    let mut d = vec![Rational::one(); n];
    d[0] = scale.clone();
    d[1] = scale.recip();
    basis.mul(&Matrix::diagonal(&d)).mul(basis_inv)
}

/// `f(L)`: scales `v₁` by `L`, `v₂` by `1/L`, fixes the other basis vectors.
pub fn build_scaled(scheme: &PingPongScheme) -> Matrix {
    scaled_in_basis(&scheme.basis, &scheme.basis_inv, &scheme.scale)
}

/// `u(L)` for a scheme adapted to `W⁺(t) ⊕ W⁻(t)`: the first `r` basis vectors
/// must lie in `W⁺` and the rest in `W⁻`, so `u` is the identity on `W⁻` and
/// commutes with `t`.
pub fn build_hnn_scaled(t: &Involution, scheme: &PingPongScheme) -> Result<Matrix, ProximalError> {
    let r = t.w_plus().len();
    if r < 2 || scheme.dim() != t.dim() {
        return Err(ProximalError::InvalidScheme("scheme does not fit the involution".into()));
    }
    let tm = t.matrix();
    for i in 0..scheme.dim() {
        let v = scheme.vector(i);
        let tv = tm.apply(&v);
        let ok = if i < r { tv == v } else { tv.iter().zip(&v).all(|(a, b)| (a + b).is_zero()) };
        if !ok {
            let side = if i < r { "W⁺" } else { "W⁻" };
            return Err(ProximalError::InvalidScheme(format!("basis vector {} is not in {side}", i + 1)));
        }
    }
    Ok(build_scaled(scheme))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{int, rat};

    #[test]
    fn standard_basis_scaling() {
        let s = PingPongScheme::new(Matrix::identity(6), int(3)).unwrap();
        let f = build_scaled(&s);
        assert_eq!(f, Matrix::diagonal(&[int(3), rat(1, 3), int(1), int(1), int(1), int(1)]));
        assert_eq!(f.det(), int(1));
        assert!(PingPongScheme::new(Matrix::identity(3), int(1)).is_err());
        let id = Matrix::identity(3);
        assert!(scaled_in_basis(&id, &id, &int(1)).is_identity());
    }

    #[test]
    fn hyperplanes_and_points() {
        let c = Matrix::from_int_rows(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 2]]).unwrap();
        let s = PingPongScheme::new(c, int(5)).unwrap();
        assert!(!s.h_plus().contains(&s.a_plus()));
        assert!(!s.h_minus().contains(&s.a_minus()));
        assert!(s.h_minus().contains(&s.a_plus()));
        assert!(s.h_plus().contains(&s.a_minus()));
    }

    #[test]
    fn hnn_block_structure() {
        let t = Involution::diagonal(6, 4).unwrap();
        let s = PingPongScheme::new(Matrix::identity(6), int(2)).unwrap();
        let u = build_hnn_scaled(&t, &s).unwrap();
        assert_eq!(u, Matrix::diagonal(&[int(2), rat(1, 2), int(1), int(1), int(1), int(1)]));
        assert!(u.commutes_with(t.matrix()));
        let bad = Matrix::from_int_rows(&[
            &[1, 0, 0, 0, 1, 0],
            &[0, 1, 0, 0, 0, 0],
            &[0, 0, 1, 0, 0, 0],
            &[0, 0, 0, 1, 0, 0],
            &[1, 0, 0, 0, 0, 0],
            &[0, 0, 0, 0, 0, 1],
        ])
        .unwrap();
        let s = PingPongScheme::new(bad, int(2)).unwrap();
        assert!(build_hnn_scaled(&t, &s).is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = PingPongScheme::new(Matrix::identity(2), rat(7, 2)).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains(r#""L":"7/2""#));
        assert_eq!(serde_json::from_str::<PingPongScheme>(&text).unwrap(), s);
    }
}
