//! Shared test oracles: a truncated noncommutative series expansion and
//! random expression generators.

#![allow(dead_code)]

use std::collections::BTreeMap;

use expocon::polyring::{rat, ratio, Polynomial, Rational};
use expocon::{AlphabetKind, Expr};
use rand::Rng;

/// Truncated element of the free algebra: word letters to coefficient.
pub type Series = BTreeMap<Vec<u8>, Polynomial>;

fn grade(kind: AlphabetKind, w: &[u8]) -> u32 {
    w.iter().map(|&g| kind.grade_of(g)).sum()
}

fn add_into(acc: &mut Series, other: &Series, factor: &Polynomial) {
    for (w, c) in other {
        let e = acc.entry(w.clone()).or_default();
        *e += &(c * factor);
    }
    acc.retain(|_, c| !c.is_zero());
}

fn mul(kind: AlphabetKind, a: &Series, b: &Series, max_grade: u32) -> Series {
    let mut out = Series::new();
    for (u, cu) in a {
        let gu = grade(kind, u);
        for (v, cv) in b {
            if gu + grade(kind, v) > max_grade {
                continue;
            }
            let mut w = u.clone();
            w.extend_from_slice(v);
            *out.entry(w).or_default() += &(cu * cv);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Expands `x` as a formal series, keeping words up to `max_grade`.
pub fn expand(kind: AlphabetKind, x: &Expr, max_grade: u32) -> Series {
    let one = Polynomial::one();
    match x {
        Expr::Identity => Series::from([(vec![], one)]),
        Expr::Generator(g) => {
            if kind.grade_of(*g) <= max_grade {
                Series::from([(vec![*g], one)])
            } else {
                Series::new()
            }
        }
        Expr::Scalar(c, inner) => {
            let mut s = Series::new();
            add_into(&mut s, &expand(kind, inner, max_grade), c);
            s
        }
        Expr::Sum(a, b) => {
            let mut s = expand(kind, a, max_grade);
            add_into(&mut s, &expand(kind, b, max_grade), &one);
            s
        }
        Expr::Product(a, b) => mul(kind, &expand(kind, a, max_grade), &expand(kind, b, max_grade), max_grade),
        Expr::Commutator(a, b) => {
            let (ea, eb) = (expand(kind, a, max_grade), expand(kind, b, max_grade));
            let mut s = mul(kind, &ea, &eb, max_grade);
            add_into(&mut s, &mul(kind, &eb, &ea, max_grade), &-Polynomial::one());
            s
        }
        Expr::Exponential(inner) => {
            let y = expand(kind, inner, max_grade);
            assert!(!y.contains_key(&vec![]), "identity component inside exponential");
            let mut total = Series::from([(vec![], one.clone())]);
            let mut power = total.clone();
            // Every factor has grade >= 1, so max_grade powers suffice.
            for k in 1..=max_grade as i64 {
                power = mul(kind, &power, &y, max_grade);
                add_into(&mut total, &power, &Polynomial::constant(ratio(1, 1) / factorial(k)));
            }
            total
        }
    }
}

fn factorial(k: i64) -> Rational {
    (1..=k).fold(rat(1), |acc, j| acc * rat(j))
}

pub fn coeff_of(series: &Series, w: &[u8]) -> Polynomial {
    series.get(w).cloned().unwrap_or_default()
}

/// Random rational with small numerator and denominator.
pub fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4))
}

/// Random expression with no identity component at the top level unless
/// `allow_identity`; exponentials always get an admissible argument.
pub fn random_expr<R: Rng>(rng: &mut R, letters: u8, depth: u32) -> Expr {
    if depth == 0 {
        return match rng.gen_range(0..6) {
            0 => Expr::Identity,
            _ => Expr::generator(rng.gen_range(0..letters)),
        };
    }
    let sub = |rng: &mut R| random_expr(rng, letters, depth - 1);
    match rng.gen_range(0..7) {
        0 => Expr::generator(rng.gen_range(0..letters)),
        1 => Expr::scalar(Polynomial::constant(small_rational(rng)), sub(rng)),
        2 => {
            let a = sub(rng);
            Expr::sum(a, sub(rng))
        }
        3 => {
            let a = sub(rng);
            Expr::product(a, sub(rng))
        }
        4 => {
            let a = sub(rng);
            Expr::commutator(a, sub(rng))
        }
        _ => Expr::exp(without_identity(sub(rng))),
    }
}

/// `x - coeff(Id, x) Id`.
pub fn without_identity(x: Expr) -> Expr {
    let c = expocon::coeff_word(&expocon::Word::identity(AlphabetKind::Splitting), &x).unwrap();
    if c.is_zero() {
        x
    } else {
        Expr::sum(x, Expr::scalar(-c, Expr::Identity))
    }
}

pub type PolyMatrix = Vec<Vec<Polynomial>>;

pub fn mat_mul(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).fold(Polynomial::zero(), |acc, k| &acc + &(&a[i][k] * &b[k][j]))).collect())
        .collect()
}

pub fn mat_identity(n: usize) -> PolyMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { Polynomial::one() } else { Polynomial::zero() }).collect()).collect()
}

/// `exp(m)` by the series, truncated after `terms` powers.
pub fn mat_exp(m: &PolyMatrix, terms: usize) -> PolyMatrix {
    let n = m.len();
    let mut total = mat_identity(n);
    let mut power = mat_identity(n);
    for k in 1..=terms {
        power = mat_mul(&power, m);
        let f = Polynomial::constant(ratio(1, 1) / factorial(k as i64));
        for i in 0..n {
            for j in 0..n {
                total[i][j] += &(&power[i][j] * &f);
            }
        }
    }
    total
}

pub fn is_zero_matrix(m: &PolyMatrix) -> bool {
    m.iter().flatten().all(Polynomial::is_zero)
}
