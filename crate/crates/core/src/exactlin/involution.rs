use serde::{Deserialize, Serialize};

use super::matrix::{kernel, Matrix};
use super::rational::{int, rat, Rational};
use super::LinAlgError;

/// A determinant-one involution together with bases of its ±1 eigenspaces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "InvolutionRepr", into = "InvolutionRepr")]
pub struct Involution {
    matrix: Matrix,
    w_plus: Vec<Vec<Rational>>,
    w_minus: Vec<Vec<Rational>>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct InvolutionRepr {
    matrix: Matrix,
    #[serde(with = "vec_of_vecs")]
    w_plus: Vec<Vec<Rational>>,
    #[serde(with = "vec_of_vecs")]
    w_minus: Vec<Vec<Rational>>,
}

mod vec_of_vecs {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::exactlin::rational::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(v: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        let text: Vec<Vec<String>> = v.iter().map(|r| r.iter().map(format_rational).collect()).collect();
        text.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
        let text = Vec::<Vec<String>>::deserialize(d)?;
        text.iter().map(|r| r.iter().map(|t| parse_rational(t).map_err(serde::de::Error::custom)).collect()).collect()
    }
}

impl TryFrom<InvolutionRepr> for Involution {
    type Error = LinAlgError;

    fn try_from(repr: InvolutionRepr) -> Result<Self, LinAlgError> {
        let t = Involution::new(repr.matrix)?;
        let consistent = repr.w_plus.len() == t.w_plus.len()
            && repr.w_minus.len() == t.w_minus.len()
            && repr.w_plus.iter().all(|v| t.matrix.apply(v) == *v)
            && repr.w_minus.iter().all(|v| t.matrix.apply(v).iter().zip(v).all(|(a, b)| *a == -b));
        if !consistent {
            return Err(LinAlgError::InvalidInvolution("stored eigenspaces do not match the matrix".into()));
        }
        Ok(Involution { w_plus: repr.w_plus, w_minus: repr.w_minus, ..t })
    }
}

impl From<Involution> for InvolutionRepr {
    fn from(t: Involution) -> Self {
        InvolutionRepr { matrix: t.matrix, w_plus: t.w_plus, w_minus: t.w_minus }
    }
}

impl Involution {
    pub fn new(matrix: Matrix) -> Result<Self, LinAlgError> {
        let n = matrix.dim();
        if !matrix.mul(&matrix).is_identity() {
            return Err(LinAlgError::InvalidInvolution("t² ≠ 1".into()));
        }
        if matrix.is_identity() {
            return Err(LinAlgError::InvalidInvolution("t is the identity".into()));
        }
        if matrix.det() != int(1) {
            return Err(LinAlgError::InvalidInvolution("det(t) ≠ 1".into()));
        }
        let id = Matrix::identity(n);
        let w_plus = kernel(matrix.sub(&id).to_rows());
        let w_minus = kernel(matrix.add(&id).to_rows());
        debug_assert_eq!(w_plus.len() + w_minus.len(), n);
        Ok(Involution { matrix, w_plus, w_minus })
    }

    /// `diag(1,…,1,−1,…,−1)` with `r` ones.
    pub fn diagonal(n: usize, r: usize) -> Result<Self, LinAlgError> {
        let d: Vec<Rational> = (0..n).map(|i| if i < r { int(1) } else { int(-1) }).collect();
        Involution::new(Matrix::diagonal(&d))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn w_plus(&self) -> &[Vec<Rational>] {
        &self.w_plus
    }

    pub fn w_minus(&self) -> &[Vec<Rational>] {
        &self.w_minus
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `(1+t)/2`, the projection onto W⁺ along W⁻.
    pub fn projector(&self) -> Matrix {
        Matrix::identity(self.dim()).add(&self.matrix).scale(&rat(1, 2))
    }
}

/// Projector of a matrix that must be a valid involution.
pub fn projector(t: &Matrix) -> Result<Matrix, LinAlgError> {
    Ok(Involution::new(t.clone())?.projector())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_projector() {
        let t = Involution::diagonal(6, 4).unwrap();
        let p = t.projector();
        assert_eq!(p, Matrix::diagonal(&[int(1), int(1), int(1), int(1), int(0), int(0)]));
        assert_eq!(t.w_plus().len(), 4);
        assert_eq!(t.w_minus().len(), 2);
        assert_eq!(p.mul(&p), p);
    }

    #[test]
    fn rejects_non_involutions() {
        assert!(Involution::new(Matrix::identity(3)).is_err());
        assert!(Involution::new(Matrix::diagonal(&[int(1), int(1), int(-1)])).is_err());
        assert!(Involution::new(Matrix::diagonal(&[int(2), rat(1, 2)])).is_err());
        assert!(projector(&Matrix::diagonal(&[int(1), int(2)])).is_err());
    }

    #[test]
    fn minus_identity_projects_to_zero() {
        let t = Involution::new(Matrix::scalar(4, &int(-1))).unwrap();
        assert_eq!(t.projector(), Matrix::zeros(4));
    }

    #[test]
    fn json_round_trip_validates() {
        let t = Involution::diagonal(4, 2).unwrap();
        let text = serde_json::to_string(&t).unwrap();
        let back: Involution = serde_json::from_str(&text).unwrap();
        assert_eq!(back, t);
        let broken = text.replacen("\"-1\"", "\"1\"", 1);
        assert!(serde_json::from_str::<Involution>(&broken).is_err());
    }
}
