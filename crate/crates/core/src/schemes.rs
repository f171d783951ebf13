//! Schemes as products of exponentials, the built-in catalog, and the
//! substitution of Legendre generators by Gauss-point evaluations.
//!
//! Exponents are listed left to right as the product is written; the
//! rightmost exponential acts first.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactsol::shifted_legendre;
use crate::freealg::{expand_bracket, exponent_expr, Alphabet, AlphabetKind, Expr, LieElement, LieTerm};
use crate::polyring::{parse_rational, rat, ratio, rational_to_f64, Polynomial, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct Scheme {
    pub alphabet: Alphabet,
    pub exponents: Vec<Vec<LieTerm>>,
    /// Free parameters, sorted by name.
    pub parameters: Vec<String>,
}

impl Scheme {
    pub fn new(alphabet: Alphabet, exponents: Vec<Vec<LieTerm>>) -> Self {
        let mut parameters: Vec<String> = exponents.iter().flatten().flat_map(|t| t.coeff.parameters()).collect();
        parameters.sort();
        parameters.dedup();
        Scheme { alphabet, exponents, parameters }
    }

    pub fn to_expr(&self) -> Expr {
        Expr::product_of(self.exponents.iter().map(|e| Expr::exp(exponent_expr(e))))
    }

    pub fn is_numeric(&self) -> bool {
        self.parameters.is_empty()
    }

    /// Largest generator index in use, 1-based (`3` for a scheme using `A3`).
    pub fn max_generator(&self) -> u32 {
        self.exponents.iter().flatten().map(|t| t.element.max_letter() as u32 + 1).max().unwrap_or(0)
    }

    pub fn substitute(&self, values: &BTreeMap<String, Rational>) -> Scheme {
        let exponents = self
            .exponents
            .iter()
            .map(|e| e.iter().map(|t| LieTerm::new(t.coeff.substitute(values), t.element.clone())).collect())
            .collect();
        Scheme::new(self.alphabet, exponents)
    }

    fn validate(&self) -> Result<()> {
        for t in self.exponents.iter().flatten() {
            if !self.alphabet.contains(t.element.max_letter()) {
                return Err(Error::AlphabetMismatch {
                    expected: self.alphabet.to_string(),
                    found: t.element.to_string_in(self.alphabet.kind),
                });
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Scheme> {
        let file: SchemeFile = serde_json::from_str(text)?;
        let alphabet = match file.alphabet.kind.as_str() {
            "splitting" => Alphabet::splitting(),
            "magnus" => {
                Alphabet::magnus(file.alphabet.size.ok_or_else(|| Error::Invalid("magnus alphabet needs `K`".into()))?)
            }
            other => return Err(Error::Invalid(format!("unknown alphabet kind `{other}`"))),
        };
        let exponents = file
            .exponents
            .iter()
            .map(|e| {
                e.iter()
                    .map(|t| Ok(LieTerm::new(t.coeff.parse()?, LieElement::parse(&t.element, alphabet.kind)?)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let scheme = Scheme::new(alphabet, exponents);
        scheme.validate()?;
        if let Some(declared) = file.parameters {
            if let Some(p) = scheme.parameters.iter().find(|p| !declared.contains(p)) {
                return Err(Error::Invalid(format!("parameter `{p}` is not declared")));
            }
        }
        Ok(scheme)
    }

    pub fn to_json(&self) -> String {
        let kind = self.alphabet.kind;
        let file = SchemeFile {
            alphabet: AlphabetFile {
                kind: kind.to_string(),
                size: (kind == AlphabetKind::Magnus).then_some(self.alphabet.size),
            },
            exponents: self
                .exponents
                .iter()
                .map(|e| {
                    e.iter()
                        .map(|t| TermFile { coeff: t.coeff.to_string(), element: t.element.to_string_in(kind) })
                        .collect()
                })
                .collect(),
            parameters: Some(self.parameters.clone()),
        };
        serde_json::to_string_pretty(&file).expect("scheme serializes")
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = self.alphabet.kind;
        let parts: Vec<String> = self
            .exponents
            .iter()
            .map(|e| {
                let mut body = String::new();
                for (i, t) in e.iter().enumerate() {
                    let text = t.to_string_in(kind);
                    match (i, text.strip_prefix('-')) {
                        (0, _) => body.push_str(&text),
                        (_, Some(rest)) => body.push_str(&format!(" - {rest}")),
                        (_, None) => body.push_str(&format!(" + {text}")),
                    }
                }
                format!("exp({body})")
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

#[derive(Serialize, Deserialize)]
struct AlphabetFile {
    kind: String,
    #[serde(rename = "K", skip_serializing_if = "Option::is_none", default)]
    size: Option<u8>,
}

#[derive(Serialize, Deserialize)]
struct TermFile {
    coeff: String,
    element: String,
}

#[derive(Serialize, Deserialize)]
struct SchemeFile {
    alphabet: AlphabetFile,
    exponents: Vec<Vec<TermFile>>,
    #[serde(default)]
    parameters: Option<Vec<String>>,
}

pub const CATALOG_NAMES: &[&str] = &[
    "strang",
    "lie-trotter",
    "split3",
    "gs4",
    "cf4",
    "magnus6",
    "magnus8",
    "gs4-ansatz",
    "cf4-ansatz",
    "magnus6-ansatz",
    "magnus8-ansatz",
    "magnus8-ansatz-reduced",
];

fn term(alphabet: Alphabet, coeff: &str, element: &str) -> LieTerm {
    LieTerm::new(coeff.parse().expect("catalog coefficient"), LieElement::parse(element, alphabet.kind).unwrap())
}

/// `Σ_l f{row}{l} A_l`, negating the even-indexed terms when `alternate`.
fn legendre_exponent(alphabet: Alphabet, row: &str, count: usize, alternate: bool) -> Vec<LieTerm> {
    (1..=count)
        .map(|l| {
            let c = if alternate && l % 2 == 0 { format!("-f{row}{l}") } else { format!("f{row}{l}") };
            term(alphabet, &c, &format!("A{l}"))
        })
        .collect()
}

/// Palindromic product of Legendre exponentials: the rows, an optional
/// middle exponent, then the rows again in reverse with the opposite signs.
fn palindrome(
    alphabet: Alphabet,
    rows: &[&str],
    count: usize,
    middle: Option<Vec<LieTerm>>,
    leading_minus: bool,
) -> Scheme {
    let mut exponents: Vec<Vec<LieTerm>> =
        rows.iter().map(|r| legendre_exponent(alphabet, r, count, leading_minus)).collect();
    exponents.extend(middle);
    exponents.extend(rows.iter().rev().map(|r| legendre_exponent(alphabet, r, count, !leading_minus)));
    Scheme::new(alphabet, exponents)
}

fn ansatz(name: &str) -> Option<Scheme> {
    let ab = Alphabet::splitting();
    Some(match name {
        "strang" => {
            Scheme::new(ab, vec![vec![term(ab, "1/2", "B")], vec![term(ab, "1", "A")], vec![term(ab, "1/2", "B")]])
        }
        "lie-trotter" => Scheme::new(ab, vec![vec![term(ab, "1", "B")], vec![term(ab, "1", "A")]]),
        "split3" => Scheme::new(
            ab,
            (1..=3)
                .rev()
                .flat_map(|j| [vec![term(ab, &format!("b{j}"), "B")], vec![term(ab, &format!("a{j}"), "A")]])
                .collect(),
        ),
        "gs4-ansatz" => Scheme::new(
            ab,
            vec![
                vec![term(ab, "b", "B")],
                vec![term(ab, "a", "A")],
                vec![term(ab, "c", "B"), term(ab, "d", "[B,[A,B]]")],
                vec![term(ab, "a", "A")],
                vec![term(ab, "b", "B")],
            ],
        ),
        "cf4-ansatz" => palindrome(Alphabet::magnus(2), &["1"], 2, None, true).rename(&[("f11", "f1"), ("f12", "f2")]),
        "magnus6-ansatz" => {
            let m = Alphabet::magnus(3);
            let lhs = [term(m, "g1", "A1"), term(m, "g3", "A3")];
            let middle = expand_bracket(&lhs, &[term(m, "1", "A2")]);
            palindrome(m, &["1", "2"], 3, Some(middle), true)
        }
        "magnus8-ansatz" => {
            let m = Alphabet::magnus(4);
            let middle = vec![term(m, "f61", "A1"), term(m, "f63", "A3")];
            palindrome(m, &["1", "2", "3", "4", "5"], 4, Some(middle), true)
        }
        // The plus-signed exponentials stand on the left here; with this
        // orientation the published coefficient table satisfies the conditions.
        "magnus8-ansatz-reduced" => palindrome(Alphabet::magnus(4), &["1", "2", "3", "4"], 4, None, false),
        _ => return None,
    })
}

impl Scheme {
    fn rename(&self, pairs: &[(&str, &str)]) -> Scheme {
        let subst = |p: &Polynomial| -> Polynomial {
            let mut out = Polynomial::zero();
            for (m, c) in p.terms() {
                let mut t = Polynomial::constant(c.clone());
                for &(s, e) in m.factors() {
                    let name = s.name();
                    let new = pairs.iter().find(|(from, _)| *from == &*name).map_or(&*name, |(_, to)| to);
                    t = &t * &Polynomial::var(new).pow(e);
                }
                out += &t;
            }
            out
        };
        let exponents = self
            .exponents
            .iter()
            .map(|e| e.iter().map(|t| LieTerm::new(subst(&t.coeff), t.element.clone())).collect())
            .collect();
        Scheme::new(self.alphabet, exponents)
    }
}

const MAGNUS6_VALUES: &[(&str, &str)] = &[
    ("f11", "0.166598694406302053"),
    ("f12", "-0.150420414495444186"),
    ("f13", "0.119990212792817809"),
    ("f21", "0.333401305593697947"),
    ("f22", "-0.127503033859797053"),
    ("f23", "-0.119990212792817809"),
    ("g1", "0.001203581117795540"),
    ("g3", "-0.000014760374925774"),
];

const MAGNUS8_VALUES: &[(&str, &str)] = &[
    ("f11", "0.168086090929995725"),
    ("f12", "0.151277481836996152"),
    ("f13", "0.117660263650997007"),
    ("f14", "0.067234436371998290"),
    ("f21", "0.359366420581440775"),
    ("f22", "0.131383069919073316"),
    ("f23", "-0.130901348254126300"),
    ("f24", "-0.202898756921778179"),
    ("f31", "0.408270368642823578"),
    ("f32", "-0.232755493657637405"),
    ("f33", "-0.085790834074322529"),
    ("f34", "0.333879397325709438"),
    ("f41", "-0.435722880154260078"),
    ("f42", "0.245547960632803985"),
    ("f43", "0.099031918677451822"),
    ("f44", "-0.368321940949205977"),
];

/// For a numeric catalog entry: the parametrized scheme it instantiates and the values.
pub fn catalog_solution(name: &str) -> Option<(Scheme, BTreeMap<String, Rational>)> {
    let table: Vec<(&str, String)> = match name {
        "gs4" => vec![("a", "1/2"), ("b", "1/6"), ("c", "2/3"), ("d", "1/72")]
            .into_iter()
            .map(|(k, v)| (k, v.to_string()))
            .collect(),
        "cf4" => vec![("f1", "1/2".to_string()), ("f2", "-1/3".to_string())],
        "magnus6" => MAGNUS6_VALUES.iter().map(|(k, v)| (*k, v.to_string())).collect(),
        "magnus8" => MAGNUS8_VALUES.iter().map(|(k, v)| (*k, v.to_string())).collect(),
        _ => return None,
    };
    let base = match name {
        "magnus8" => "magnus8-ansatz-reduced".to_string(),
        other => format!("{other}-ansatz"),
    };
    let values = table.into_iter().map(|(k, v)| (k.to_string(), parse_rational(&v).unwrap())).collect();
    Some((ansatz(&base)?, values))
}

/// A scheme by catalog name; numeric entries come with their coefficients substituted.
pub fn catalog(name: &str) -> Result<Scheme> {
    if let Some((scheme, values)) = catalog_solution(name) {
        return Ok(scheme.substitute(&values));
    }
    ansatz(name).ok_or_else(|| Error::UnknownScheme(name.to_string()))
}

/// Gauss-Legendre rule on `[0, 1]` with radicals evaluated to 60 digits.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadRule {
    pub order: u32,
    pub nodes: Vec<Rational>,
    pub weights: Vec<Rational>,
}

impl QuadRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes_f64(&self) -> Vec<f64> {
        self.nodes.iter().map(rational_to_f64).collect()
    }

    pub fn weights_f64(&self) -> Vec<f64> {
        self.weights.iter().map(rational_to_f64).collect()
    }
}

const SQRT_DIGITS: usize = 60;

/// `sqrt(r)` truncated to `SQRT_DIGITS` decimals.
pub fn sqrt_approx(r: &Rational) -> Rational {
    let scale = num_traits::pow(BigInt::from(10), SQRT_DIGITS);
    let scaled = (r * Rational::from_integer(&scale * &scale)).to_integer();
    Rational::new(scaled.sqrt(), scale)
}

pub fn gauss_rule(order: u32) -> Result<QuadRule> {
    let half = ratio(1, 2);
    let (nodes, weights) = match order {
        4 => {
            let d = sqrt_approx(&rat(3)) / rat(6);
            (vec![&half - &d, &half + &d], vec![half.clone(), half.clone()])
        }
        6 => {
            let d = sqrt_approx(&rat(15)) / rat(10);
            (vec![&half - &d, half.clone(), &half + &d], vec![ratio(5, 18), ratio(4, 9), ratio(5, 18)])
        }
        8 => {
            let s30 = sqrt_approx(&rat(30));
            let outer = sqrt_approx(&((rat(15) + rat(2) * &s30) / rat(140)));
            let inner = sqrt_approx(&((rat(15) - rat(2) * &s30) / rat(140)));
            let dw = &s30 / rat(72);
            let q = ratio(1, 4);
            (
                vec![&half - &outer, &half - &inner, &half + &inner, &half + &outer],
                vec![&q - &dw, &q + &dw, &q + &dw, &q - &dw],
            )
        }
        other => return Err(Error::UnsupportedOrder(other)),
    };
    Ok(QuadRule { order, nodes, weights })
}

/// One exponent after substitution: `Σ_k a_k X_k + Σ_{k<m} D_km [X_k, X_m]`,
/// where `X_k` is the generator evaluated at node `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubstitutedExponential {
    pub linear: Vec<Rational>,
    /// Strictly upper triangular; entry `(k, m)` multiplies `[X_k, X_m]`.
    pub pairs: Vec<Vec<Rational>>,
}

impl SubstitutedExponential {
    pub fn linear_f64(&self) -> Vec<f64> {
        self.linear.iter().map(rational_to_f64).collect()
    }

    pub fn has_commutators(&self) -> bool {
        self.pairs.iter().flatten().any(|x| !x.is_zero())
    }

    /// For three nodes, the form `b1 [X2, X3 - X1] + b2 [X3, X1]`, if it applies.
    pub fn three_node_b(&self) -> Option<(f64, f64)> {
        if self.linear.len() != 3 || self.pairs[0][1] != self.pairs[1][2] {
            return None;
        }
        Some((rational_to_f64(&self.pairs[0][1]), -rational_to_f64(&self.pairs[0][2])))
    }
}

/// Exponents in application order: row 0 is the rightmost exponential.
#[derive(Clone, Debug, PartialEq)]
pub struct SubstitutedScheme {
    pub rule: QuadRule,
    pub rows: Vec<SubstitutedExponential>,
}

impl SubstitutedScheme {
    /// `a_{jk}` for the exponentials without commutator parts.
    pub fn linear_table(&self) -> Vec<Vec<f64>> {
        self.rows.iter().filter(|r| !r.has_commutators()).map(SubstitutedExponential::linear_f64).collect()
    }
}

fn eval_poly(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

/// Replaces `A_l` by `(2l-1) Σ_k w_k P_{l-1}(x_k) X_k`.
pub fn gauss_substitute(s: &Scheme, rule: &QuadRule) -> Result<SubstitutedScheme> {
    if s.alphabet.kind != AlphabetKind::Magnus {
        return Err(Error::AlphabetMismatch { expected: "magnus".into(), found: s.alphabet.kind.to_string() });
    }
    if !s.is_numeric() {
        return Err(Error::NonNumericScheme(s.parameters.join(", ")));
    }
    let n = rule.len();
    let needed = s.max_generator() as usize;
    if needed > n {
        return Err(Error::InsufficientNodes { needed, available: n });
    }
    let alpha: Vec<Vec<Rational>> = (0..needed)
        .map(|l| {
            let p = shifted_legendre(l as u32);
            rule.nodes.iter().zip(&rule.weights).map(|(x, w)| rat(2 * l as i64 + 1) * w * eval_poly(&p, x)).collect()
        })
        .collect();
    let mut rows = Vec::with_capacity(s.exponents.len());
    for exponent in s.exponents.iter().rev() {
        let mut linear = vec![Rational::zero(); n];
        let mut pairs = vec![vec![Rational::zero(); n]; n];
        for t in exponent {
            let c = t.coeff.as_constant().expect("numeric scheme");
            match &t.element {
                LieElement::Gen(l) => {
                    for (a, al) in linear.iter_mut().zip(&alpha[*l as usize]) {
                        *a += &c * al;
                    }
                }
                LieElement::Bracket(x, y) => match (&**x, &**y) {
                    (LieElement::Gen(l), LieElement::Gen(m)) => {
                        let (u, v) = (&alpha[*l as usize], &alpha[*m as usize]);
                        for k in 0..n {
                            for j in k + 1..n {
                                pairs[k][j] += &c * (&u[k] * &v[j] - &u[j] * &v[k]);
                            }
                        }
                    }
                    _ => {
                        return Err(Error::Unsupported(format!(
                            "substitution of nested commutator {}",
                            t.element.to_string_in(AlphabetKind::Magnus)
                        )))
                    }
                },
            }
        }
        rows.push(SubstitutedExponential { linear, pairs });
    }
    Ok(SubstitutedScheme { rule: rule.clone(), rows })
}
