//! Reduction of rational matrices modulo the Mersenne prime 2^61 − 1.
//!
//! Reduction mod p is a ring homomorphism on matrices whose denominators are
//! prime to p, so distinct residues prove distinct rationals. Equal residues
//! only nominate candidates; callers confirm them exactly.

use num_bigint::{BigInt, Sign};
use rand::Rng;

use super::matrix::Matrix;
use super::rational::Rational;

pub const P: u64 = (1 << 61) - 1;

#[inline]
pub fn reduce128(x: u128) -> u64 {
    let lo = (x as u64) & P;
    let hi = (x >> 61) as u64;
    // two folds: the first leaves at most 68 bits
    let s = lo as u128 + (hi as u128);
    let lo = (s as u64) & P;
    let hi = (s >> 61) as u64;
    let r = lo + hi;
    if r >= P {
        r - P
    } else {
        r
    }
}

#[inline]
pub fn mulmod(a: u64, b: u64) -> u64 {
    reduce128(a as u128 * b as u128)
}

#[inline]
pub fn addmod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

#[inline]
pub fn negmod(a: u64) -> u64 {
    if a == 0 {
        0
    } else {
        P - a
    }
}

pub fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

/// Inverse by Fermat; `None` for 0.
pub fn invmod(a: u64) -> Option<u64> {
    (a != 0).then(|| powmod(a, P - 2))
}

pub fn bigint_mod(x: &BigInt) -> u64 {
    let (sign, digits) = x.to_u64_digits();
    let mut acc: u64 = 0;
    for d in digits.iter().rev() {
        acc = reduce128((acc as u128) << 64 | *d as u128);
    }
    if sign == Sign::Minus {
        negmod(acc)
    } else {
        acc
    }
}

pub fn rational_mod(x: &Rational) -> Option<u64> {
    let d = invmod(bigint_mod(x.denom()))?;
    Some(mulmod(bigint_mod(x.numer()), d))
}

/// Sum of products with one reduction per 32 terms.
#[inline]
pub fn dot_mod(a: &[u64], b: &[u64]) -> u64 {
    let mut acc: u128 = 0;
    let mut out = 0u64;
    for (i, (x, y)) in a.iter().zip(b).enumerate() {
        acc += *x as u128 * *y as u128;
        if i % 32 == 31 {
            out = addmod(out, reduce128(acc));
            acc = 0;
        }
    }
    addmod(out, reduce128(acc))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModMatrix {
    n: usize,
    data: Vec<u64>,
}

impl ModMatrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        ModMatrix { n, data }
    }

    /// `None` when the denominator is divisible by p.
    pub fn from_matrix(m: &Matrix) -> Option<Self> {
        let dinv = invmod(bigint_mod(m.denominator()))?;
        let data = m.numerators().iter().map(|x| mulmod(bigint_mod(x), dinv)).collect();
        Some(ModMatrix { n: m.dim(), data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[u64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.n + j]
    }

    pub fn mul(&self, other: &ModMatrix) -> ModMatrix {
        let n = self.n;
        let mut data = vec![0u64; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc: u128 = 0;
                for k in 0..n {
                    acc += self.data[i * n + k] as u128 * other.data[k * n + j] as u128;
                    if k % 32 == 31 {
                        acc = reduce128(acc) as u128;
                    }
                }
                data[i * n + j] = reduce128(acc);
            }
        }
        ModMatrix { n, data }
    }

    /// Gauss–Jordan inverse over the prime field; `None` when singular mod p.
    pub fn inverse(&self) -> Option<ModMatrix> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut inv = ModMatrix::identity(n).data;
        for c in 0..n {
            let p = (c..n).find(|&r| a[r * n + c] != 0)?;
            if p != c {
                for j in 0..n {
                    a.swap(p * n + j, c * n + j);
                    inv.swap(p * n + j, c * n + j);
                }
            }
            let d = invmod(a[c * n + c])?;
            for j in 0..n {
                a[c * n + j] = mulmod(a[c * n + j], d);
                inv[c * n + j] = mulmod(inv[c * n + j], d);
            }
            for r in 0..n {
                let f = a[r * n + c];
                if r == c || f == 0 {
                    continue;
                }
                let nf = negmod(f);
                for j in 0..n {
                    a[r * n + j] = addmod(a[r * n + j], mulmod(nf, a[c * n + j]));
                    inv[r * n + j] = addmod(inv[r * n + j], mulmod(nf, inv[c * n + j]));
                }
            }
        }
        Some(ModMatrix { n, data: inv })
    }

    /// `M·v`.
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        (0..self.n).map(|i| dot_mod(&self.data[i * self.n..(i + 1) * self.n], v)).collect()
    }

    /// `zᵀ·M`.
    pub fn left_apply(&self, z: &[u64]) -> Vec<u64> {
        let n = self.n;
        (0..n)
            .map(|j| {
                let col: Vec<u64> = (0..n).map(|i| self.data[i * n + j]).collect();
                dot_mod(z, &col)
            })
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == ModMatrix::identity(self.n)
    }

    pub fn is_scalar(&self) -> bool {
        let n = self.n;
        let d = self.data[0];
        (0..n).all(|i| (0..n).all(|j| self.data[i * n + j] == if i == j { d } else { 0 }))
    }
}

/// Random bilinear fingerprint `key(M) = zᵀ·M·x`.
#[derive(Clone, Debug)]
pub struct Fingerprint {
    pub z: Vec<u64>,
    pub x: Vec<u64>,
}

impl Fingerprint {
    pub fn new<R: Rng>(n: usize, rng: &mut R) -> Self {
        let mut draw = || (0..n).map(|_| rng.gen_range(1..P)).collect::<Vec<_>>();
        let z = draw();
        let x = draw();
        Fingerprint { z, x }
    }

    pub fn key(&self, m: &ModMatrix) -> u64 {
        dot_mod(&self.z, &m.apply(&self.x))
    }

    /// Key of a matrix whose image `M·x` is already known.
    pub fn key_of_image(&self, mx: &[u64]) -> u64 {
        dot_mod(&self.z, mx)
    }

    /// Key of `g·a·g⁻¹` for all `a`, as the table `K` with
    /// `key = Σ a_ij·K_ij`.
    pub fn conjugation_form(&self, g: &ModMatrix, g_inv: &ModMatrix) -> Vec<u64> {
        let row = g.left_apply(&self.z);
        let col = g_inv.apply(&self.x);
        let mut k = Vec::with_capacity(row.len() * col.len());
        for r in &row {
            for c in &col {
                k.push(mulmod(*r, *c));
            }
        }
        k
    }
}

/// `Σ a_ij·K_ij` for a form returned by [`Fingerprint::conjugation_form`].
#[inline]
pub fn apply_form(form: &[u64], a: &ModMatrix) -> u64 {
    dot_mod(form, a.data())
}
