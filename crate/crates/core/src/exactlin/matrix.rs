#![allow(clippy::needless_range_loop)]

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{format_rational, parse_rational, Rational};
use super::LinAlgError;

/// Square rational matrix stored as an integer matrix over one common
/// denominator.
///
/// The representation is canonical: the denominator is positive and shares
/// no factor with all numerators at once, so structural equality and hashing
/// coincide with equality of the rational matrices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    n: usize,
    num: Vec<BigInt>,
    den: BigInt,
}

fn normalize(num: &mut [BigInt], den: &mut BigInt) {
    if den.is_negative() {
        *den = -&*den;
        for x in num.iter_mut() {
            *x = -&*x;
        }
    }
    let mut g = den.clone();
    for x in num.iter() {
        if g.is_one() {
            return;
        }
        if !x.is_zero() {
            g = g.gcd(x);
        }
    }
    if num.iter().all(Zero::is_zero) {
        *den = BigInt::one();
        return;
    }
    if !g.is_one() {
        for x in num.iter_mut() {
            *x = &*x / &g;
        }
        *den = &*den / &g;
    }
}

fn int_matmul(n: usize, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        let row = &a[i * n..(i + 1) * n];
        for j in 0..n {
            let mut acc = BigInt::zero();
            for (k, x) in row.iter().enumerate() {
                let y = &b[k * n + j];
                if !x.is_zero() && !y.is_zero() {
                    acc += x * y;
                }
            }
            out.push(acc);
        }
    }
    out
}

impl Matrix {
    fn from_parts(n: usize, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        debug_assert_eq!(num.len(), n * n);
        normalize(&mut num, &mut den);
        Matrix { n, num, den }
    }

    pub fn identity(n: usize) -> Self {
        let mut num = vec![BigInt::zero(); n * n];
        for i in 0..n {
            num[i * n + i] = BigInt::one();
        }
        Matrix { n, num, den: BigInt::one() }
    }

    pub fn zeros(n: usize) -> Self {
        Matrix { n, num: vec![BigInt::zero(); n * n], den: BigInt::one() }
    }

    /// Builds a matrix from `n*n` row-major entries.
    pub fn from_entries(n: usize, entries: &[Rational]) -> Result<Self, LinAlgError> {
        if entries.len() != n * n || n == 0 {
            return Err(LinAlgError::Shape(format!("expected {} entries, got {}", n * n, entries.len())));
        }
        let den = entries.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let num = entries.iter().map(|r| r.numer() * (&den / r.denom())).collect();
        Ok(Matrix::from_parts(n, num, den))
    }

    pub fn from_rows(rows: &[Vec<Rational>]) -> Result<Self, LinAlgError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(LinAlgError::Shape("rows must form a square matrix".into()));
        }
        let flat: Vec<Rational> = rows.iter().flatten().cloned().collect();
        Matrix::from_entries(n, &flat)
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Result<Self, LinAlgError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(LinAlgError::Shape("rows must form a square matrix".into()));
        }
        let num = rows.iter().flat_map(|r| r.iter().map(|&x| BigInt::from(x))).collect();
        Ok(Matrix::from_parts(n, num, BigInt::one()))
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[Vec<Rational>]) -> Result<Self, LinAlgError> {
        let n = columns.len();
        if columns.iter().any(|c| c.len() != n) {
            return Err(LinAlgError::Shape("columns must form a square matrix".into()));
        }
        let mut flat = Vec::with_capacity(n * n);
        for i in 0..n {
            for col in columns {
                flat.push(col[i].clone());
            }
        }
        Matrix::from_entries(n, &flat)
    }

    pub fn diagonal(diag: &[Rational]) -> Self {
        let n = diag.len();
        let mut entries = vec![Rational::zero(); n * n];
        for (i, d) in diag.iter().enumerate() {
            entries[i * n + i] = d.clone();
        }
        Matrix::from_entries(n, &entries).expect("diagonal is square")
    }

    pub fn scalar(n: usize, value: &Rational) -> Self {
        Matrix::diagonal(&vec![value.clone(); n])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        Rational::new(self.num[i * self.n + j].clone(), self.den.clone())
    }

    pub fn row(&self, i: usize) -> Vec<Rational> {
        (0..self.n).map(|j| self.get(i, j)).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.n).map(|i| self.row(i)).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let num = int_matmul(self.n, &self.num, &other.num);
        Matrix::from_parts(self.n, num, &self.den * &other.den)
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let num = self.num.iter().zip(&other.num).map(|(a, b)| a * &other.den + b * &self.den).collect();
        Matrix::from_parts(self.n, num, &self.den * &other.den)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, factor: &Rational) -> Matrix {
        let num = self.num.iter().map(|x| x * factor.numer()).collect();
        Matrix::from_parts(self.n, num, &self.den * factor.denom())
    }

    pub fn transpose(&self) -> Matrix {
        let n = self.n;
        let mut num = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                num.push(self.num[i * n + j].clone());
            }
        }
        Matrix { n, num, den: self.den.clone() }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.n, "dimension mismatch");
        (0..self.n)
            .map(|i| {
                let mut acc = Rational::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = &self.num[i * self.n + j];
                    if !a.is_zero() && !x.is_zero() {
                        acc += x * Rational::from_integer(a.clone());
                    }
                }
                acc / Rational::from_integer(self.den.clone())
            })
            .collect()
    }

    /// Determinant via fraction-free Bareiss elimination on the numerators.
    pub fn det(&self) -> Rational {
        let n = self.n;
        let mut a = self.num.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i * n + k].is_zero()) else {
                    return Rational::zero();
                };
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                    a[i * n + j] = v / &prev;
                }
            }
            prev = a[k * n + k].clone();
        }
        let det_num = sign * &a[n * n - 1];
        Rational::new(det_num, num_traits::pow(self.den.clone(), n))
    }

    pub fn inverse(&self) -> Result<Matrix, LinAlgError> {
        let n = self.n;
        let mut rows: Vec<Vec<Rational>> = self
            .to_rows()
            .into_iter()
            .enumerate()
            .map(|(i, mut r)| {
                r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                r
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&i| !rows[i][col].is_zero()).ok_or(LinAlgError::Singular)?;
            rows.swap(col, pivot);
            let inv = rows[col][col].recip();
            for x in rows[col].iter_mut() {
                *x *= &inv;
            }
            for i in 0..n {
                if i != col && !rows[i][col].is_zero() {
                    let factor = rows[i][col].clone();
                    for j in 0..2 * n {
                        let delta = &factor * &rows[col][j];
                        rows[i][j] -= delta;
                    }
                }
            }
        }
        let flat: Vec<Rational> = rows.into_iter().flat_map(|r| r.into_iter().skip(n)).collect();
        Matrix::from_entries(n, &flat)
    }

    /// Integer power; negative exponents go through the inverse.
    pub fn pow(&self, e: i64) -> Result<Matrix, LinAlgError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut result = Matrix::identity(self.n);
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        Ok(result)
    }

    pub fn is_identity(&self) -> bool {
        self.den.is_one() && self.scalar_value().map(|v| v.is_one()).unwrap_or(false)
    }

    /// `Some(λ)` iff the matrix equals `λ·I`.
    pub fn scalar_value(&self) -> Option<Rational> {
        let n = self.n;
        let d = &self.num[0];
        for i in 0..n {
            for j in 0..n {
                let x = &self.num[i * n + j];
                if (i == j && x != d) || (i != j && !x.is_zero()) {
                    return None;
                }
            }
        }
        Some(Rational::new(d.clone(), self.den.clone()))
    }

    pub fn is_scalar(&self) -> bool {
        self.scalar_value().is_some()
    }

    pub fn commutes_with(&self, other: &Matrix) -> bool {
        self.mul(other) == other.mul(self)
    }

    pub fn rank(&self) -> usize {
        rank_of_rows(self.to_rows())
    }

    /// Basis of the column space (pivot columns).
    pub fn column_space(&self) -> Vec<Vec<Rational>> {
        let (_, pivots) = rref(self.to_rows());
        pivots.into_iter().map(|j| self.column(j)).collect()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[")?;
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(format_rational).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Row-reduced echelon form and pivot columns.
pub fn rref(mut rows: Vec<Vec<Rational>>) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let m = rows.len();
    let width = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..width {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m {
            if i != r && !rows[i][col].is_zero() {
                let factor = rows[i][col].clone();
                for j in col..width {
                    let delta = &factor * &rows[r][j];
                    rows[i][j] -= delta;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    (rows, pivots)
}

pub fn rank_of_rows(rows: Vec<Vec<Rational>>) -> usize {
    rref(rows).1.len()
}

/// Null space basis of the linear map given by `rows`.
pub fn kernel(rows: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let width = rows.first().map_or(0, Vec::len);
    let (reduced, pivots) = rref(rows);
    let free: Vec<usize> = (0..width).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Rational::zero(); width];
            v[fc] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -reduced[r][fc].clone();
            }
            v
        })
        .collect()
}

/// Matrix product without renormalizing the common denominator.
///
/// Scalar-ness and eigenvector tests are invariant under positive rescaling,
/// so word scans accumulate products in this form and skip the gcd pass.
#[derive(Clone, Debug)]
pub struct UnreducedMatrix {
    n: usize,
    num: Vec<BigInt>,
    den: BigInt,
}

impl UnreducedMatrix {
    pub fn identity(n: usize) -> Self {
        let m = Matrix::identity(n);
        UnreducedMatrix { n, num: m.num, den: m.den }
    }

    pub fn mul(&self, other: &UnreducedMatrix) -> UnreducedMatrix {
        UnreducedMatrix { n: self.n, num: int_matmul(self.n, &self.num, &other.num), den: &self.den * &other.den }
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn is_scalar(&self) -> bool {
        let n = self.n;
        let d = &self.num[0];
        (0..n).all(|i| {
            (0..n).all(|j| {
                let x = &self.num[i * n + j];
                if i == j {
                    x == d
                } else {
                    x.is_zero()
                }
            })
        })
    }

    pub fn is_identity(&self) -> bool {
        self.is_scalar() && self.num[0] == self.den
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_parts(self.n, self.num.clone(), self.den.clone())
    }
}

impl From<&Matrix> for UnreducedMatrix {
    fn from(m: &Matrix) -> Self {
        UnreducedMatrix { n: m.n, num: m.num.clone(), den: m.den.clone() }
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    n: usize,
    entries: Vec<Vec<String>>,
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let entries = self.to_rows().iter().map(|r| r.iter().map(format_rational).collect()).collect();
        MatrixRepr { n: self.n, entries }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = MatrixRepr::deserialize(d)?;
        if repr.entries.len() != repr.n || repr.entries.iter().any(|r| r.len() != repr.n) {
            return Err(D::Error::custom(format!("matrix entries do not match n = {}", repr.n)));
        }
        let flat = repr
            .entries
            .iter()
            .flatten()
            .map(|t| parse_rational(t))
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        Matrix::from_entries(repr.n, &flat).map_err(D::Error::custom)
    }
}
