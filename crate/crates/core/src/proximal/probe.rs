use super::scheme::{build_scaled, PingPongScheme};
use super::ProximalError;
use crate::exactlin::{proj_distance_sq, ProjectivePoint, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `f(L)` acting on `x ∉ H⁺`, measured against `a⁺`.
    Plus,
    /// `f(L)⁻¹` acting on `x ∉ H⁻`, measured against `a⁻`.
    Minus,
}

/// Squared projective distance from `f(L)^{±1}·x` to `a^{±}` for each `L`.
pub fn proximality_probe(
    scheme: &PingPongScheme,
    x: &ProjectivePoint,
    scales: &[Rational],
    dir: Direction,
) -> Result<Vec<Rational>, ProximalError> {
    let (hyper, target) = match dir {
        Direction::Plus => (scheme.h_plus(), scheme.a_plus()),
        Direction::Minus => (scheme.h_minus(), scheme.a_minus()),
    };
    if hyper.contains(x) {
        return Err(ProximalError::Precondition("x lies on the repelling hyperplane".into()));
    }
    scales
        .iter()
        .map(|l| {
            let f = build_scaled(&scheme.with_scale(l.clone())?);
            let f = match dir {
                Direction::Plus => f,
                Direction::Minus => f.inverse().expect("det 1"),
            };
            let y = x.image(&f).expect("invertible");
            Ok(proj_distance_sq(&y, &target))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{int, rat, Matrix};

    fn ladder() -> Vec<Rational> {
        [2, 4, 8, 16].into_iter().map(int).collect()
    }

    #[test]
    fn two_dimensional_closed_form() {
        let s = PingPongScheme::new(Matrix::identity(2), int(2)).unwrap();
        let x = ProjectivePoint::new(&[int(1), int(1)]).unwrap();
        let d = proximality_probe(&s, &x, &ladder(), Direction::Plus).unwrap();
        assert_eq!(d[0], rat(1, 17));
        for (l, v) in [2i64, 4, 8, 16].iter().zip(&d) {
            assert_eq!(*v, rat(1, l.pow(4) + 1));
        }
        let back = proximality_probe(&s, &x, &ladder(), Direction::Minus).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn attractor_is_fixed() {
        let s = PingPongScheme::new(Matrix::identity(4), int(2)).unwrap();
        let d = proximality_probe(&s, &s.a_plus(), &ladder(), Direction::Plus).unwrap();
        assert!(d.iter().all(|v| *v == int(0)));
    }

    #[test]
    fn repelling_hyperplane_rejected() {
        let s = PingPongScheme::new(Matrix::identity(3), int(2)).unwrap();
        let x = ProjectivePoint::new(&[int(0), int(1), int(1)]).unwrap();
        assert!(matches!(proximality_probe(&s, &x, &ladder(), Direction::Plus), Err(ProximalError::Precondition(_))));
        assert!(proximality_probe(&s, &x, &ladder(), Direction::Minus).is_ok());
    }
}
