//! Word coefficients of the exact solution operator.
//!
//! For splitting the exact flow is `exp(A + B)` and the coefficient of a word
//! depends only on its length. For the Magnus alphabet the coefficients come
//! from a closed nested sum over signed binomials; an independent route via
//! iterated integrals of shifted Legendre polynomials is provided as well.

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freealg::{sign, AlphabetKind, Word};
use crate::polyring::{rat, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExactKind {
    Splitting,
    Magnus,
}

impl ExactKind {
    pub fn alphabet_kind(self) -> AlphabetKind {
        match self {
            ExactKind::Splitting => AlphabetKind::Splitting,
            ExactKind::Magnus => AlphabetKind::Magnus,
        }
    }

    pub fn of(kind: AlphabetKind) -> ExactKind {
        match kind {
            AlphabetKind::Splitting => ExactKind::Splitting,
            AlphabetKind::Magnus => ExactKind::Magnus,
        }
    }
}

impl std::fmt::Display for ExactKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.alphabet_kind().fmt(f)
    }
}

fn binom(n: u32, k: u32) -> Rational {
    Rational::from_integer(binomial(BigInt::from(n), BigInt::from(k)))
}

fn factorial(n: usize) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

/// Coefficient of `w` in the exact solution operator.
pub fn exact_coeff(kind: ExactKind, w: &Word) -> Result<Rational> {
    if w.kind() != kind.alphabet_kind() {
        return Err(Error::AlphabetMismatch { expected: kind.to_string(), found: w.kind().to_string() });
    }
    Ok(match kind {
        ExactKind::Splitting => Rational::new(BigInt::one(), factorial(w.len())),
        ExactKind::Magnus => magnus_coeff(w),
    })
}

fn magnus_coeff(w: &Word) -> Rational {
    let d: Vec<u32> = w.letters().iter().map(|&g| g as u32 + 1).collect();
    if d.is_empty() {
        return Rational::one();
    }
    // Per-letter factor tables: weight[j][k-1] for 1 <= k <= d_j.
    let weight: Vec<Vec<Rational>> = d
        .iter()
        .map(|&dj| (1..=dj).map(|k| sign(dj + k) * binom(dj - 1, k - 1) * binom(dj + k - 2, k - 1)).collect())
        .collect();
    let mut total = Rational::zero();
    let mut ks = vec![1u32; d.len()];
    loop {
        let mut term = Rational::one();
        let mut tail = 0u32;
        for j in (0..d.len()).rev() {
            tail += ks[j];
            term *= &weight[j][ks[j] as usize - 1];
            term /= rat(tail as i64);
        }
        total += term;
        // Odometer over 1 <= k_j <= d_j.
        let mut j = d.len();
        loop {
            if j == 0 {
                return total;
            }
            j -= 1;
            if ks[j] < d[j] {
                ks[j] += 1;
                break;
            }
            ks[j] = 1;
        }
    }
}

/// Ascending coefficients of the shifted Legendre polynomial `P_k` on `[0, 1]`.
pub fn shifted_legendre(k: u32) -> Vec<Rational> {
    (0..=k).map(|j| sign(k + j) * binom(k, j) * binom(k + j, j)).collect()
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn antiderivative(a: &[Rational]) -> Vec<Rational> {
    std::iter::once(Rational::zero()).chain(a.iter().enumerate().map(|(i, x)| x / rat(i as i64 + 1))).collect()
}

/// Iterated integral over `1 >= x_1 >= ... >= x_l >= 0` of
/// `P_{d_1-1}(x_1) ... P_{d_l-1}(x_l)`.
pub fn exact_coeff_integral_oracle(w: &Word) -> Rational {
    let mut inner = vec![Rational::one()];
    for &g in w.letters().iter().rev() {
        inner = antiderivative(&poly_mul(&shifted_legendre(g as u32), &inner));
    }
    inner.iter().fold(Rational::zero(), |acc, x| acc + x)
}

/// Some index exceeds the sum of all others by at least two.
pub fn vanishes_by_orthogonality(w: &Word) -> bool {
    let d: Vec<u32> = w.letters().iter().map(|&g| g as u32 + 1).collect();
    let total: u32 = d.iter().sum();
    d.iter().any(|&dj| 2 * dj >= total + 2)
}

/// The condition for `w` at order `p` holds automatically for a scheme whose
/// largest generator is `A{d_max}`.
pub fn condition_is_trivial(w: &Word, p: u32, d_max: u32) -> bool {
    w.letters().iter().any(|&g| {
        let d = g as u32 + 1;
        2 * d >= p + 2 && d > d_max
    })
}
