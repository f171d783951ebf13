//! Order-condition systems, leading error terms and local error measures.
//!
//! A scheme has order `p` when the coefficient of every Lyndon word of grade
//! at most `p` agrees with the exact solution. For self-adjoint schemes only
//! odd grades need to be imposed; for Magnus schemes, words containing a
//! high generator that the scheme cannot produce are satisfied automatically.

use std::collections::{HashMap, HashSet};

use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactsol::{condition_is_trivial, exact_coeff, ExactKind};
use crate::freealg::{is_self_adjoint, Alphabet, AlphabetKind, Expr, LieElement, Word};
use crate::lyndon::{custom_transform_matrix, lyndon_words, right_normed_basis_5, transform_matrix, TransformMatrix};
use crate::polyring::{rational_to_f64, Polynomial, Rational};
use crate::schemes::Scheme;
use crate::solver::PolySystem;
use crate::wordcoeff::{coeff_right_factors, coeff_word};

/// Residual bound for treating a numeric order condition as satisfied.
pub const CONDITION_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct Condition {
    pub word: Word,
    pub polynomial: Polynomial,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrderConditionSystem {
    pub order: u32,
    pub kind: ExactKind,
    pub parameters: Vec<String>,
    pub conditions: Vec<Condition>,
}

#[derive(Serialize, Deserialize)]
struct ConditionFile {
    word: String,
    polynomial: String,
}

#[derive(Serialize, Deserialize)]
struct SystemFile {
    order: u32,
    kind: ExactKind,
    parameters: Vec<String>,
    conditions: Vec<ConditionFile>,
}

impl OrderConditionSystem {
    pub fn len(&self) -> usize {
        self.conditions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conditions.is_empty()
    }

    pub fn words(&self) -> Vec<Word> {
        self.conditions.iter().map(|c| c.word.clone()).collect()
    }

    pub fn polynomial(&self, w: &Word) -> Option<&Polynomial> {
        self.conditions.iter().find(|c| &c.word == w).map(|c| &c.polynomial)
    }

    pub fn to_poly_system(&self) -> PolySystem {
        PolySystem::new(self.conditions.iter().map(|c| c.polynomial.clone()).collect(), self.parameters.clone())
            .expect("condition parameters are listed")
    }

    /// Appends the condition for `w`, e.g. to pin down extra free parameters.
    pub fn add_condition(&mut self, scheme: &Scheme, w: &Word) -> Result<()> {
        if w.kind() != self.kind.alphabet_kind() {
            return Err(Error::AlphabetMismatch { expected: self.kind.to_string(), found: w.kind().to_string() });
        }
        if self.conditions.iter().any(|c| &c.word == w) {
            return Err(Error::DuplicateWord(w.to_string()));
        }
        let p = coeff_word(w, &scheme.to_expr())? - Polynomial::constant(exact_coeff(self.kind, w)?);
        for name in p.parameters() {
            if !self.parameters.contains(&name) {
                self.parameters.push(name);
            }
        }
        self.parameters.sort();
        self.conditions.push(Condition { word: w.clone(), polynomial: p });
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let file = SystemFile {
            order: self.order,
            kind: self.kind,
            parameters: self.parameters.clone(),
            conditions: self
                .conditions
                .iter()
                .map(|c| ConditionFile { word: c.word.to_string(), polynomial: c.polynomial.to_string() })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("system serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SystemFile = serde_json::from_str(text)?;
        let kind = file.kind.alphabet_kind();
        let conditions = file
            .conditions
            .iter()
            .map(|c| Ok(Condition { word: Word::parse(&c.word, kind)?, polynomial: c.polynomial.parse()? }))
            .collect::<Result<Vec<_>>>()?;
        for c in &conditions {
            if let Some(p) = c.polynomial.parameters().into_iter().find(|p| !file.parameters.contains(p)) {
                return Err(Error::Invalid(format!("parameter `{p}` of condition {} is not listed", c.word)));
            }
        }
        Ok(OrderConditionSystem { order: file.order, kind: file.kind, parameters: file.parameters, conditions })
    }
}

fn check_kind(s: &Scheme, kind: ExactKind) -> Result<()> {
    if s.alphabet.kind != kind.alphabet_kind() {
        return Err(Error::AlphabetMismatch { expected: kind.to_string(), found: s.alphabet.kind.to_string() });
    }
    Ok(())
}

/// The alphabet whose words carry the exact solution up to `grade`.
fn word_alphabet(kind: ExactKind, grade: u32) -> Alphabet {
    match kind {
        ExactKind::Splitting => Alphabet::splitting(),
        ExactKind::Magnus => Alphabet::magnus(grade.max(1) as u8),
    }
}

/// Coefficients of many words at once. Each word is extended on the left by
/// the first generator up to the largest requested grade, so one evaluation
/// yields the coefficients of all its right factors.
pub fn word_coefficients(x: &Expr, words: &[Word]) -> Result<HashMap<Word, Polynomial>> {
    let Some(top) = words.iter().map(Word::grade).max() else {
        return Ok(HashMap::new());
    };
    let needed: HashSet<&Word> = words.iter().collect();
    let mut order: Vec<&Word> = needed.iter().copied().collect();
    order.sort_by(|a, b| b.grade().cmp(&a.grade()).then_with(|| a.cmp(b)));
    let mut covered: HashSet<&Word> = HashSet::new();
    let mut plan: Vec<Word> = Vec::new();
    for w in order {
        if covered.contains(w) {
            continue;
        }
        if w.letters() == [0] || w.is_empty() {
            plan.push(w.clone());
            covered.insert(w);
            continue;
        }
        let pad = (top - w.grade()) as usize;
        let mut letters = vec![0u8; pad];
        letters.extend_from_slice(w.letters());
        let extended = Word::new(w.kind(), letters);
        for i in 0..extended.len() {
            if let Some(hit) = needed.get(&extended.suffix(i)) {
                covered.insert(hit);
            }
        }
        plan.push(extended);
    }
    let results: Vec<Vec<(Word, Polynomial)>> =
        plan.par_iter().map(|w| coeff_right_factors(w, x)).collect::<Result<_>>()?;
    let mut out = HashMap::with_capacity(words.len());
    for (w, p) in results.into_iter().flatten() {
        if needed.contains(&w) {
            out.insert(w, p);
        }
    }
    Ok(out)
}

/// Order conditions of `s` for order `p`, one per surviving Lyndon word.
pub fn generate_conditions(s: &Scheme, kind: ExactKind, p: u32) -> Result<OrderConditionSystem> {
    check_kind(s, kind)?;
    let symmetric = is_self_adjoint(s);
    let alphabet = word_alphabet(kind, p);
    let d_max = s.max_generator();
    let words: Vec<Word> = (1..=p)
        .filter(|q| !symmetric || q % 2 == 1)
        .flat_map(|q| lyndon_words(alphabet, q).words)
        .filter(|w| kind == ExactKind::Splitting || !condition_is_trivial(w, p, d_max))
        .collect();
    let coeffs = word_coefficients(&s.to_expr(), &words)?;
    let conditions = words
        .into_iter()
        .map(|w| {
            let polynomial = &coeffs[&w] - &Polynomial::constant(exact_coeff(kind, &w)?);
            Ok(Condition { word: w, polynomial })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OrderConditionSystem { order: p, kind, parameters: s.parameters.clone(), conditions })
}

#[derive(Clone, Debug, PartialEq)]
pub enum BasisChoice {
    Lyndon,
    RightNormed5,
    Custom(Vec<LieElement>),
}

/// The grade-`(p+1)` part of `S - exp(Ω)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LeadingErrorTerm {
    pub grade: u32,
    pub kind: AlphabetKind,
    pub lyndon_words: Vec<Word>,
    pub lyndon_coeffs: Vec<Rational>,
    pub basis: Vec<LieElement>,
    pub basis_coeffs: Vec<Rational>,
    pub transform: TransformMatrix,
}

impl LeadingErrorTerm {
    /// Coefficient of an arbitrary word in `Σ_b c_b b`.
    pub fn word_coefficient(&self, w: &Word) -> Result<Rational> {
        let mut total = Rational::zero();
        for (b, c) in self.basis.iter().zip(&self.basis_coeffs) {
            if c.is_zero() {
                continue;
            }
            let k = coeff_word(w, &b.to_expr())?.as_constant().expect("basis coefficients are rational");
            total += k * c;
        }
        Ok(total)
    }
}

fn numeric(p: &Polynomial) -> Result<Rational> {
    p.as_constant().ok_or_else(|| Error::NonNumericScheme(p.parameters().join(", ")))
}

/// Residuals `|coeff(w, S) - coeff(w, exp Ω)|` for every Lyndon word of grade `<= p`.
pub fn condition_residuals(s: &Scheme, kind: ExactKind, p: u32) -> Result<Vec<(Word, Rational)>> {
    check_kind(s, kind)?;
    if !s.is_numeric() {
        return Err(Error::NonNumericScheme(s.parameters.join(", ")));
    }
    let words: Vec<Word> = (1..=p).flat_map(|q| lyndon_words(word_alphabet(kind, p), q).words).collect();
    let coeffs = word_coefficients(&s.to_expr(), &words)?;
    words
        .into_iter()
        .map(|w| {
            let r = numeric(&coeffs[&w])? - exact_coeff(kind, &w)?;
            Ok((w, r))
        })
        .collect()
}

/// Leading error term of a numeric scheme of verified order `p`.
pub fn leading_error(s: &Scheme, kind: ExactKind, p: u32, basis: &BasisChoice) -> Result<LeadingErrorTerm> {
    let q = p + 1;
    for (w, r) in condition_residuals(s, kind, p)? {
        let residual = rational_to_f64(&r).abs();
        if residual > CONDITION_TOL {
            return Err(Error::OrderConditionViolated { word: w.to_string(), residual });
        }
    }
    let alphabet = word_alphabet(kind, q);
    let transform = match basis {
        BasisChoice::Lyndon => transform_matrix(q, alphabet),
        BasisChoice::RightNormed5 => {
            if q != 5 || kind != ExactKind::Splitting {
                return Err(Error::UnsupportedBasisGrade(q));
            }
            custom_transform_matrix(q, alphabet, &right_normed_basis_5())?
        }
        BasisChoice::Custom(elements) => custom_transform_matrix(q, alphabet, elements)?,
    };
    let words = transform.words.clone();
    let coeffs = word_coefficients(&s.to_expr(), &words)?;
    let lyndon_coeffs =
        words.iter().map(|w| Ok(numeric(&coeffs[w])? - exact_coeff(kind, w)?)).collect::<Result<Vec<_>>>()?;
    let basis_coeffs = transform.solve(&lyndon_coeffs)?;
    Ok(LeadingErrorTerm {
        grade: q,
        kind: alphabet.kind,
        lyndon_words: words,
        lyndon_coeffs,
        basis: transform.basis.clone(),
        basis_coeffs,
        transform,
    })
}

/// Euclidean norm of the exact coefficients, rounded only at the end.
pub fn norm(values: &[Rational]) -> f64 {
    let sum: Rational = values.iter().map(|c| c * c).sum();
    sum.to_f64().unwrap_or(f64::NAN).sqrt()
}

/// Local error measure: the norm of the Lyndon-word coefficients.
pub fn lem(term: &LeadingErrorTerm) -> f64 {
    norm(&term.lyndon_coeffs)
}

/// Norm of the exact coefficients of the grade-`(p+1)` Lyndon words that a
/// Magnus scheme using only `A1..A{d_max}` cannot influence.
pub fn lem_lower_bound(p: u32, d_max: u32) -> Result<f64> {
    if p % 2 == 1 {
        return Err(Error::OddOrder(p));
    }
    let q = p + 1;
    let values = lyndon_words(Alphabet::magnus(q as u8), q)
        .words
        .iter()
        .filter(|w| condition_is_trivial(w, p, d_max))
        .map(|w| exact_coeff(ExactKind::Magnus, w))
        .collect::<Result<Vec<_>>>()?;
    Ok(norm(&values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{rat, ratio};
    use crate::schemes::catalog;

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    #[test]
    fn split3_conditions() {
        let sys = generate_conditions(&catalog("split3").unwrap(), ExactKind::Splitting, 3).unwrap();
        let expect = [
            ("A", "a1+a2+a3-1"),
            ("B", "b1+b2+b3-1"),
            ("AB", "a2*b1+a3*b1+a3*b2-1/2"),
            ("AAB", "1/2*a2^2*b1+1/2*a3^2*b1+1/2*a3^2*b2+a2*a3*b1-1/6"),
            ("ABB", "1/2*a2*b1^2+1/2*a3*b1^2+1/2*a3*b2^2+a3*b1*b2-1/6"),
        ];
        assert_eq!(sys.len(), 5);
        for (c, (w, poly)) in sys.conditions.iter().zip(expect) {
            assert_eq!(c.word.to_string(), w);
            assert_eq!(c.polynomial, p(poly));
        }
    }

    #[test]
    fn gs4_conditions() {
        let sys = generate_conditions(&catalog("gs4-ansatz").unwrap(), ExactKind::Splitting, 4).unwrap();
        let polys: Vec<_> = sys.conditions.iter().map(|c| c.polynomial.clone()).collect();
        assert_eq!(polys, [p("2*a-1"), p("2*b+c-1"), p("2*a^2*b+1/2*a^2*c-1/6"), p("a*b^2+1/2*a*c^2+a*b*c-d-1/6")]);
    }

    #[test]
    fn cf4_conditions() {
        let sys = generate_conditions(&catalog("cf4-ansatz").unwrap(), ExactKind::Magnus, 4).unwrap();
        let polys: Vec<_> = sys.conditions.iter().map(|c| c.polynomial.clone()).collect();
        assert_eq!(polys, [p("2*f1-1"), p("f1*f2+1/6")]);
    }

    #[test]
    fn kind_must_match() {
        assert!(matches!(
            generate_conditions(&catalog("cf4-ansatz").unwrap(), ExactKind::Splitting, 4),
            Err(Error::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn add_condition_cases() {
        let s = catalog("cf4-ansatz").unwrap();
        let mut sys = generate_conditions(&s, ExactKind::Magnus, 4).unwrap();
        let a1 = Word::parse("A1", AlphabetKind::Magnus).unwrap();
        assert_eq!(sys.add_condition(&s, &a1), Err(Error::DuplicateWord("A1".into())));
        let a3 = Word::parse("A3", AlphabetKind::Magnus).unwrap();
        sys.add_condition(&s, &a3).unwrap();
        assert!(sys.polynomial(&a3).unwrap().is_zero());
    }

    #[test]
    fn strang_leading_error() {
        let t = leading_error(&catalog("strang").unwrap(), ExactKind::Splitting, 2, &BasisChoice::Lyndon).unwrap();
        assert_eq!(t.basis_coeffs, [ratio(1, 12), ratio(-1, 24)]);
    }

    #[test]
    fn violated_order_is_reported() {
        let e = leading_error(&catalog("lie-trotter").unwrap(), ExactKind::Splitting, 2, &BasisChoice::Lyndon);
        assert!(matches!(e, Err(Error::OrderConditionViolated { .. })));
        let e = leading_error(&catalog("gs4-ansatz").unwrap(), ExactKind::Splitting, 4, &BasisChoice::Lyndon);
        assert!(matches!(e, Err(Error::NonNumericScheme(_))));
        let e = leading_error(&catalog("strang").unwrap(), ExactKind::Splitting, 2, &BasisChoice::RightNormed5);
        assert_eq!(e, Err(Error::UnsupportedBasisGrade(3)));
    }

    #[test]
    fn lower_bounds() {
        assert!((lem_lower_bound(4, 2).unwrap() - 0.03727).abs() < 1e-5);
        assert_eq!(lem_lower_bound(3, 2), Err(Error::OddOrder(3)));
        let exact = (ratio(1, 3600) + ratio(1, 900)).to_f64().unwrap().sqrt();
        assert_eq!(lem_lower_bound(4, 2).unwrap(), exact);
    }

    #[test]
    fn batch_matches_single_words() {
        let s = catalog("split3").unwrap().to_expr();
        let words: Vec<Word> = (1..=4).flat_map(|q| Alphabet::splitting().words_of_grade(q)).collect();
        let batch = word_coefficients(&s, &words).unwrap();
        for w in &words {
            assert_eq!(batch[w], coeff_word(w, &s).unwrap(), "{w}");
        }
        assert!(word_coefficients(&s, &[]).unwrap().is_empty());
    }

    #[test]
    fn system_json_round_trip() {
        let sys = generate_conditions(&catalog("split3").unwrap(), ExactKind::Splitting, 3).unwrap();
        assert_eq!(OrderConditionSystem::from_json(&sys.to_json()).unwrap(), sys);
        let ps = sys.to_poly_system();
        assert_eq!(ps.parameters().len(), 6);
        assert_eq!(norm(&[rat(3), rat(4)]), 5.0);
    }
}
