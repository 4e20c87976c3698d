use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::matrix::{rank_of_rows, Matrix};
use super::rational::{format_rational, parse_rational, Rational};
use super::{dot, is_zero_vector, LinAlgError};

fn canonicalize(v: &[Rational]) -> Result<Vec<Rational>, LinAlgError> {
    let lead = v.iter().find(|x| !x.is_zero()).ok_or(LinAlgError::ZeroVector)?.clone();
    Ok(v.iter().map(|x| x / &lead).collect())
}

/// A point of projective space, stored with its first nonzero coordinate
/// equal to 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjectivePoint {
    coords: Vec<Rational>,
}

impl ProjectivePoint {
    pub fn new(v: &[Rational]) -> Result<Self, LinAlgError> {
        Ok(ProjectivePoint { coords: canonicalize(v)? })
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Image under `m`; fails when `m` kills the representative.
    pub fn image(&self, m: &Matrix) -> Result<ProjectivePoint, LinAlgError> {
        ProjectivePoint::new(&m.apply(&self.coords))
    }
}

/// A projective hyperplane `{x : <normal, x> = 0}`, normal canonicalized the
/// same way as points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjectiveHyperplane {
    normal: Vec<Rational>,
}

impl ProjectiveHyperplane {
    pub fn new(normal: &[Rational]) -> Result<Self, LinAlgError> {
        Ok(ProjectiveHyperplane { normal: canonicalize(normal)? })
    }

    pub fn normal(&self) -> &[Rational] {
        &self.normal
    }

    pub fn contains(&self, x: &ProjectivePoint) -> bool {
        self.contains_vector(x.coords())
    }

    pub fn contains_vector(&self, v: &[Rational]) -> bool {
        dot(&self.normal, v).is_zero()
    }
}

macro_rules! vector_serde {
    ($ty:ident, $field:ident) => {
        impl Serialize for $ty {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let v: Vec<String> = self.$field.iter().map(format_rational).collect();
                v.serialize(s)
            }
        }

        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                use serde::de::Error;
                let text = Vec::<String>::deserialize(d)?;
                let v =
                    text.iter().map(|t| parse_rational(t)).collect::<Result<Vec<_>, _>>().map_err(D::Error::custom)?;
                $ty::new(&v).map_err(D::Error::custom)
            }
        }
    };
}

vector_serde!(ProjectivePoint, coords);
vector_serde!(ProjectiveHyperplane, normal);

/// Squared projective distance `|v∧w|² / (|v|²|w|²)`.
///
/// Computed through Lagrange's identity `|v∧w|² = |v|²|w|² − <v,w>²`.
pub fn proj_distance_sq(x: &ProjectivePoint, y: &ProjectivePoint) -> Rational {
    assert_eq!(x.dim(), y.dim(), "dimension mismatch");
    distance_sq_vectors(x.coords(), y.coords())
}

pub(crate) fn distance_sq_vectors(v: &[Rational], w: &[Rational]) -> Rational {
    let vv = dot(v, v);
    let ww = dot(w, w);
    let vw = dot(v, w);
    Rational::one() - &vw * &vw / (vv * ww)
}

pub fn in_neighborhood(x: &ProjectivePoint, set: &[ProjectivePoint], eps_sq: &Rational) -> Result<bool, LinAlgError> {
    if set.is_empty() {
        return Err(LinAlgError::EmptySet);
    }
    Ok(set.iter().any(|s| proj_distance_sq(x, s) < *eps_sq))
}

/// `true` iff `Mv ∧ v = 0`, which includes the eigenvalue 0.
pub fn is_eigenvector(m: &Matrix, v: &[Rational]) -> Result<bool, LinAlgError> {
    if is_zero_vector(v) {
        return Err(LinAlgError::ZeroVector);
    }
    Ok(parallel(&m.apply(v), v))
}

/// `w ∧ v = 0` for a nonzero `v`.
pub(crate) fn parallel(w: &[Rational], v: &[Rational]) -> bool {
    let p = v.iter().position(|x| !x.is_zero()).expect("nonzero vector");
    (0..v.len()).all(|i| (&w[i] * &v[p] - &w[p] * &v[i]).is_zero())
}

/// Eigenvalue of `m` at `v` if `v` is an eigenvector.
fn eigenvalue_at(m: &Matrix, v: &[Rational]) -> Option<Rational> {
    let mv = m.apply(v);
    let p = v.iter().position(|x| !x.is_zero())?;
    let lambda = &mv[p] / &v[p];
    mv.iter().zip(v).all(|(a, b)| *a == &lambda * b).then_some(lambda)
}

/// The common eigenvalue of `m` on `span(basis)`, if `m` acts there as a
/// scalar. A zero action counts, with value 0.
pub fn scalar_on_subspace(m: &Matrix, basis: &[Vec<Rational>]) -> Result<Option<Rational>, LinAlgError> {
    if basis.is_empty() {
        return Err(LinAlgError::InvalidBasis("empty basis".into()));
    }
    if rank_of_rows(basis.to_vec()) != basis.len() {
        return Err(LinAlgError::InvalidBasis("vectors are linearly dependent".into()));
    }
    let mut value: Option<Rational> = None;
    for w in basis {
        let Some(l) = eigenvalue_at(m, w) else {
            return Ok(None);
        };
        match &value {
            Some(prev) if *prev != l => return Ok(None),
            _ => value = Some(l),
        }
    }
    Ok(value)
}

/// `r+1` vectors in dimension `r`, every `i ≤ r` of which are independent.
///
/// Every `r`-subset being a basis is equivalent, since subsets of an
/// independent set are independent.
pub fn general_position(vectors: &[Vec<Rational>]) -> Result<bool, LinAlgError> {
    let r = vectors.first().map_or(0, Vec::len);
    if r == 0 || vectors.len() != r + 1 || vectors.iter().any(|v| v.len() != r) {
        return Err(LinAlgError::Shape(format!("need r+1 vectors of length r, got {}", vectors.len())));
    }
    for skip in 0..=r {
        let rows: Vec<Vec<Rational>> =
            vectors.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, v)| v.clone()).collect();
        if Matrix::from_rows(&rows)?.det().is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// If all `vectors` are eigenvectors of `b`, the general-position hypothesis
/// forces `b = λ·I`; returns that `λ`.
pub fn scalar_from_eigenvectors(b: &Matrix, vectors: &[Vec<Rational>]) -> Result<Option<Rational>, LinAlgError> {
    if !general_position(vectors)? {
        return Err(LinAlgError::Precondition("vectors are not in general position".into()));
    }
    if vectors[0].len() != b.dim() {
        return Err(LinAlgError::Shape("vector length differs from matrix dimension".into()));
    }
    for v in vectors {
        if !is_eigenvector(b, v)? {
            return Ok(None);
        }
    }
    let lambda = eigenvalue_at(b, &vectors[0]).expect("checked eigenvector");
    debug_assert!(b.scalar_value().as_ref() == Some(&lambda));
    Ok(Some(lambda))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rational::{int, rat};

    fn e(n: usize, i: usize) -> Vec<Rational> {
        (0..n).map(|j| if i == j { int(1) } else { int(0) }).collect()
    }

    #[test]
    fn distances() {
        let e1 = ProjectivePoint::new(&e(2, 0)).unwrap();
        let e2 = ProjectivePoint::new(&e(2, 1)).unwrap();
        let d = ProjectivePoint::new(&[int(1), int(1)]).unwrap();
        assert_eq!(proj_distance_sq(&e1, &e2), int(1));
        assert_eq!(proj_distance_sq(&e1, &e1), int(0));
        assert_eq!(proj_distance_sq(&e1, &d), rat(1, 2));
        assert!(!in_neighborhood(&e2, std::slice::from_ref(&e1), &int(1)).unwrap());
        assert!(in_neighborhood(&d, &[e1], &rat(3, 4)).unwrap());
        assert_eq!(in_neighborhood(&d, &[], &int(1)), Err(LinAlgError::EmptySet));
    }

    #[test]
    fn canonical_points() {
        let p = ProjectivePoint::new(&[int(0), int(-3), int(6)]).unwrap();
        assert_eq!(p.coords(), &[int(0), int(1), int(-2)]);
        assert_eq!(p, ProjectivePoint::new(&[int(0), rat(1, 5), rat(-2, 5)]).unwrap());
        assert!(ProjectivePoint::new(&[int(0), int(0)]).is_err());
        let h = ProjectiveHyperplane::new(&[int(2), int(0), int(2)]).unwrap();
        assert!(h.contains(&ProjectivePoint::new(&[int(1), int(5), int(-1)]).unwrap()));
    }

    #[test]
    fn eigen_tests() {
        let d = Matrix::diagonal(&[int(2), int(3)]);
        assert!(is_eigenvector(&d, &e(2, 0)).unwrap());
        assert!(!is_eigenvector(&d, &[int(1), int(1)]).unwrap());
        assert!(is_eigenvector(&d, &[int(0), int(0)]).is_err());
        let m = Matrix::diagonal(&[int(2), int(2), int(5)]);
        assert_eq!(scalar_on_subspace(&m, &[e(3, 0), e(3, 1)]).unwrap(), Some(int(2)));
        let m = Matrix::diagonal(&[int(2), int(3), int(5)]);
        assert_eq!(scalar_on_subspace(&m, &[e(3, 0), e(3, 1)]).unwrap(), None);
        let z = Matrix::diagonal(&[int(0), int(0), int(5)]);
        assert_eq!(scalar_on_subspace(&z, &[e(3, 0), e(3, 1)]).unwrap(), Some(int(0)));
        let k = Matrix::diagonal(&[int(0), int(1), int(5)]);
        assert_eq!(scalar_on_subspace(&k, &[e(3, 0), e(3, 1)]).unwrap(), None);
        assert!(scalar_on_subspace(&m, &[e(3, 0), e(3, 0)]).is_err());
    }

    #[test]
    fn lemma_examples() {
        let fam = vec![e(2, 0), e(2, 1), vec![int(1), int(1)]];
        assert!(general_position(&fam).unwrap());
        assert!(!general_position(&[e(2, 0), e(2, 0), e(2, 1)]).unwrap());
        assert!(general_position(&fam[..2]).is_err());
        assert_eq!(scalar_from_eigenvectors(&Matrix::scalar(2, &int(3)), &fam).unwrap(), Some(int(3)));
        assert_eq!(scalar_from_eigenvectors(&Matrix::diagonal(&[int(2), int(3)]), &fam).unwrap(), None);
        assert!(scalar_from_eigenvectors(&Matrix::identity(2), &[e(2, 0), e(2, 0), e(2, 1)]).is_err());
    }
}
