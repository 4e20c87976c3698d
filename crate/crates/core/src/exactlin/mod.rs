//! Exact rational linear algebra and projective geometry.

pub mod involution;
pub mod matrix;
pub mod modp;
pub mod projective;
pub mod rational;

pub use involution::{projector, Involution};
pub use matrix::{kernel, rank_of_rows, rref, Matrix, UnreducedMatrix};
pub use projective::{
    general_position, in_neighborhood, is_eigenvector, proj_distance_sq, scalar_from_eigenvectors, scalar_on_subspace,
    ProjectiveHyperplane, ProjectivePoint,
};
pub use rational::{format_rational, int, parse_rational, rat, Rational};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("cannot parse rational {0:?}")]
    Parse(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    Singular,
    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,
    #[error("invalid involution: {0}")]
    InvalidInvolution(String),
    #[error("invalid basis: {0}")]
    InvalidBasis(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("empty set")]
    EmptySet,
}

/// Dot product of two rational vectors.
pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).fold(Rational::from_integer(0.into()), |acc, t| acc + t)
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(|x| x.numer().sign() == num_bigint::Sign::NoSign)
}
