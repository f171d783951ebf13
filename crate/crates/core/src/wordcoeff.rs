//! Word-coefficient extraction through the homomorphisms `phi_w`.
//!
//! For a word `w` of length `l`, `phi_w` maps an expression `X` to an upper
//! triangular `(l+1) x (l+1)` matrix whose entry `(i, j)` is the coefficient
//! of the subword `w[i..j]` in `X`. The matrix is never formed; instead the
//! action on a vector is evaluated recursively over the expression tree, so
//! that the last column, i.e. the coefficients of all right factors of `w`,
//! costs one pass.

use crate::error::{Error, Result};
use crate::freealg::{Expr, Word};
use crate::polyring::{rat, Polynomial, Rational};

pub type PhiVector = Vec<Polynomial>;

/// Dense upper triangular matrix of polynomials.
pub type PhiMatrix = Vec<Vec<Polynomial>>;

/// `phi_w(X) * y`.
pub fn phi_apply(w: &Word, x: &Expr, y: &[Polynomial]) -> Result<PhiVector> {
    let n = w.len() + 1;
    if y.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: y.len() });
    }
    apply(w.letters(), x, y.to_vec())
}

fn apply(w: &[u8], x: &Expr, y: PhiVector) -> Result<PhiVector> {
    match x {
        Expr::Identity => Ok(y),
        Expr::Generator(g) => {
            let mut out = Vec::with_capacity(y.len());
            for (j, &letter) in w.iter().enumerate() {
                out.push(if letter == *g { y[j + 1].clone() } else { Polynomial::zero() });
            }
            out.push(Polynomial::zero());
            Ok(out)
        }
        Expr::Scalar(c, inner) => {
            if c.is_zero() {
                return Ok(vec![Polynomial::zero(); y.len()]);
            }
            let v = apply(w, inner, y)?;
            Ok(match c.as_constant() {
                Some(k) => v.iter().map(|p| p.scale(&k)).collect(),
                None => v.iter().map(|p| c * p).collect(),
            })
        }
        Expr::Sum(a, b) => {
            let mut u = apply(w, a, y.clone())?;
            let v = apply(w, b, y)?;
            for (ui, vi) in u.iter_mut().zip(&v) {
                *ui += vi;
            }
            Ok(u)
        }
        Expr::Product(a, b) => {
            let v = apply(w, b, y)?;
            apply(w, a, v)
        }
        Expr::Commutator(a, b) => {
            let ab = apply(w, a, apply(w, b, y.clone())?)?;
            let ba = apply(w, b, apply(w, a, y)?)?;
            Ok(ab.iter().zip(&ba).map(|(p, q)| p - q).collect())
        }
        Expr::Exponential(inner) => exp_apply(w, inner, y),
    }
}

/// Coefficient of the empty word; cheap, since `phi_Id` is 1x1.
fn identity_coeff(x: &Expr) -> Result<Polynomial> {
    Ok(apply(&[], x, vec![Polynomial::one()])?.pop().unwrap())
}

fn exp_apply(w: &[u8], inner: &Expr, y: PhiVector) -> Result<PhiVector> {
    if !identity_coeff(inner)?.is_zero() {
        return Err(Error::IdentityInExponent);
    }
    let mut h = y.clone();
    let mut z = y;
    let mut lambda = Rational::from_integer(1.into());
    for j in 1..=w.len() {
        lambda /= rat(j as i64);
        h = apply(w, inner, h)?;
        for (zi, hi) in z.iter_mut().zip(&h) {
            zi.add_scaled(hi, &lambda);
        }
    }
    Ok(z)
}

/// `exp(phi_w(Y)) * y`, evaluated by the terminating series.
pub fn phi_exp(w: &Word, y_expr: &Expr, y: &[Polynomial]) -> Result<PhiVector> {
    let n = w.len() + 1;
    if y.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: y.len() });
    }
    exp_apply(w.letters(), y_expr, y.to_vec())
}

fn last_unit(n: usize) -> PhiVector {
    let mut y = vec![Polynomial::zero(); n];
    y[n - 1] = Polynomial::one();
    y
}

/// Coefficient of `w` in the formal expansion of `x`.
pub fn coeff_word(w: &Word, x: &Expr) -> Result<Polynomial> {
    let v = apply(w.letters(), x, last_unit(w.len() + 1))?;
    Ok(v.into_iter().next().unwrap())
}

/// Coefficients of every right factor of `w`, longest first, ending with `Id`.
pub fn coeff_right_factors(w: &Word, x: &Expr) -> Result<Vec<(Word, Polynomial)>> {
    let v = apply(w.letters(), x, last_unit(w.len() + 1))?;
    Ok(v.into_iter().enumerate().map(|(j, p)| (w.suffix(j), p)).collect())
}

/// The full matrix `phi_w(x)`, assembled column by column.
pub fn phi_matrix(w: &Word, x: &Expr) -> Result<PhiMatrix> {
    let n = w.len() + 1;
    let mut m = vec![vec![Polynomial::zero(); n]; n];
    for j in 0..n {
        let mut e = vec![Polynomial::zero(); n];
        e[j] = Polynomial::one();
        let col = apply(w.letters(), x, e)?;
        for (i, p) in col.into_iter().enumerate() {
            m[i][j] = p;
        }
    }
    Ok(m)
}

/// Numeric coefficient of a word, for expressions without free parameters.
pub fn coeff_word_exact(w: &Word, x: &Expr) -> Result<Rational> {
    let p = coeff_word(w, x)?;
    p.as_constant().ok_or_else(|| Error::NonNumericScheme(p.parameters().join(", ")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::AlphabetKind;
    use crate::polyring::ratio;

    fn w(s: &str) -> Word {
        Word::parse(s, AlphabetKind::Splitting).unwrap()
    }

    fn c(r: Rational) -> Polynomial {
        Polynomial::constant(r)
    }

    fn strang() -> Expr {
        let half_b = Expr::exp(Expr::scalar(c(ratio(1, 2)), Expr::generator(1)));
        Expr::product_of([half_b.clone(), Expr::exp(Expr::generator(0)), half_b])
    }

    fn exp_a_plus_b() -> Expr {
        Expr::exp(Expr::sum(Expr::generator(0), Expr::generator(1)))
    }

    fn consts(v: &[(i64, i64)]) -> PhiVector {
        v.iter().map(|&(n, d)| c(ratio(n, d))).collect()
    }

    #[test]
    fn apply_on_last_unit() {
        let y = consts(&[(0, 1), (0, 1), (0, 1), (1, 1)]);
        assert_eq!(phi_apply(&w("AAB"), &strang(), &y).unwrap(), consts(&[(1, 4), (1, 2), (1, 1), (1, 1)]));
        assert_eq!(phi_apply(&w("AAB"), &Expr::Identity, &y).unwrap(), y);
        assert_eq!(phi_apply(&w("AAB"), &Expr::generator(0), &y).unwrap(), consts(&[(0, 1); 4]));
    }

    #[test]
    fn apply_checks_length() {
        let y = consts(&[(1, 1)]);
        assert_eq!(phi_apply(&w("AB"), &Expr::Identity, &y), Err(Error::LengthMismatch { expected: 3, found: 1 }));
    }

    #[test]
    fn exp_examples() {
        let a_plus_b = Expr::sum(Expr::generator(0), Expr::generator(1));
        let y = consts(&[(0, 1), (0, 1), (0, 1), (1, 1)]);
        assert_eq!(phi_exp(&w("AAB"), &a_plus_b, &y).unwrap(), consts(&[(1, 6), (1, 2), (1, 1), (1, 1)]));
        assert_eq!(phi_exp(&w("AAB"), &Expr::zero(), &y).unwrap(), y);
        let half_b = Expr::scalar(c(ratio(1, 2)), Expr::generator(1));
        let y3 = consts(&[(0, 1), (0, 1), (1, 1)]);
        assert_eq!(phi_exp(&w("AB"), &half_b, &y3).unwrap(), consts(&[(0, 1), (1, 2), (1, 1)]));
    }

    #[test]
    fn exp_rejects_identity_component() {
        let x = Expr::exp(Expr::sum(Expr::Identity, Expr::generator(0)));
        assert_eq!(coeff_word(&w("A"), &x), Err(Error::IdentityInExponent));
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(coeff_word(&w("AAB"), &strang()).unwrap(), c(ratio(1, 4)));
        assert_eq!(coeff_word(&Word::identity(AlphabetKind::Splitting), &exp_a_plus_b()).unwrap(), Polynomial::one());
        let factor = |b: &str, a: &str| {
            [
                Expr::exp(Expr::scalar(Polynomial::var(b), Expr::generator(1))),
                Expr::exp(Expr::scalar(Polynomial::var(a), Expr::generator(0))),
            ]
        };
        let s = Expr::product_of(factor("b3", "a3").into_iter().chain(factor("b2", "a2")).chain(factor("b1", "a1")));
        assert_eq!(coeff_word(&w("AB"), &s).unwrap(), "a2*b1+a3*b1+a3*b2".parse().unwrap());
    }

    #[test]
    fn right_factor_examples() {
        let rf = coeff_right_factors(&w("AAB"), &strang()).unwrap();
        let expect = [("AAB", (1, 4)), ("AB", (1, 2)), ("B", (1, 1)), ("Id", (1, 1))];
        for ((word, p), (ew, (n, d))) in rf.iter().zip(expect) {
            assert_eq!(word, &w(ew));
            assert_eq!(p, &c(ratio(n, d)));
        }
        let rf = coeff_right_factors(&w("AAB"), &exp_a_plus_b()).unwrap();
        assert_eq!(rf[0].1, c(ratio(1, 6)));
        let rf = coeff_right_factors(&w("B"), &exp_a_plus_b()).unwrap();
        assert_eq!(rf.len(), 2);
        assert_eq!(rf[1].0, Word::identity(AlphabetKind::Splitting));
    }

    #[test]
    fn matrix_examples() {
        let m = phi_matrix(&w("AAB"), &exp_a_plus_b()).unwrap();
        assert_eq!(m[0], consts(&[(1, 1), (1, 1), (1, 2), (1, 6)]));
        assert_eq!(m[1], consts(&[(0, 1), (1, 1), (1, 1), (1, 2)]));
        let m = phi_matrix(&w("AAB"), &strang()).unwrap();
        assert_eq!(m[0], consts(&[(1, 1), (1, 1), (1, 2), (1, 4)]));
        assert_eq!(m[2], consts(&[(0, 1), (0, 1), (1, 1), (1, 1)]));
        let id = phi_matrix(&w("AB"), &Expr::Identity).unwrap();
        for (i, row) in id.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                assert_eq!(p.as_constant().unwrap(), rat((i == j) as i64));
            }
        }
    }
}
