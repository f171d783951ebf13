//! Words, Lie elements and expression trees of the graded free algebra.
//!
//! Two alphabet families are supported: the splitting alphabet `{A, B}` with
//! both generators of grade 1, and the Magnus alphabet `A1, ..., AK` where
//! `Ak` has grade `k`. Generators are stored as small integers (`0` is `A`
//! resp. `A1`) and compare in the natural order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyring::{Polynomial, Rational};
use crate::schemes::Scheme;
use crate::wordcoeff::coeff_word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlphabetKind {
    Splitting,
    Magnus,
}

impl fmt::Display for AlphabetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlphabetKind::Splitting => "splitting",
            AlphabetKind::Magnus => "magnus",
        })
    }
}

impl AlphabetKind {
    pub fn grade_of(self, g: u8) -> u32 {
        match self {
            AlphabetKind::Splitting => 1,
            AlphabetKind::Magnus => g as u32 + 1,
        }
    }

    pub fn letter_name(self, g: u8) -> String {
        match self {
            AlphabetKind::Splitting => ["A", "B"][g as usize].to_string(),
            AlphabetKind::Magnus => format!("A{}", g + 1),
        }
    }

    /// Parses one generator name, e.g. `B` or `A3`.
    pub fn parse_letter(self, s: &str) -> Result<u8> {
        let bad = || Error::Parse { pos: 0, msg: format!("unknown {self} generator `{s}`") };
        match self {
            AlphabetKind::Splitting => match s {
                "A" => Ok(0),
                "B" => Ok(1),
                _ => Err(bad()),
            },
            AlphabetKind::Magnus => {
                let k: u32 = s.strip_prefix('A').and_then(|d| d.parse().ok()).ok_or_else(bad)?;
                if k == 0 || k > 255 {
                    return Err(bad());
                }
                Ok((k - 1) as u8)
            }
        }
    }
}

/// A concrete alphabet: `{A, B}` or `A1, ..., AK`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    pub kind: AlphabetKind,
    pub size: u8,
}

impl Alphabet {
    pub fn splitting() -> Self {
        Alphabet { kind: AlphabetKind::Splitting, size: 2 }
    }

    pub fn magnus(k: u8) -> Self {
        assert!(k >= 1, "Magnus alphabet needs at least one generator");
        Alphabet { kind: AlphabetKind::Magnus, size: k }
    }

    pub fn grade_of(&self, g: u8) -> u32 {
        self.kind.grade_of(g)
    }

    pub fn generators(&self) -> impl Iterator<Item = u8> {
        0..self.size
    }

    pub fn contains(&self, g: u8) -> bool {
        g < self.size
    }

    /// Every word of exactly the given grade, in lexicographic order.
    pub fn words_of_grade(&self, grade: u32) -> Vec<Word> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        self.extend_words(grade, &mut current, &mut out);
        out
    }

    fn extend_words(&self, remaining: u32, current: &mut Vec<u8>, out: &mut Vec<Word>) {
        if remaining == 0 {
            out.push(Word::new(self.kind, current.clone()));
            return;
        }
        for g in self.generators() {
            let d = self.grade_of(g);
            if d <= remaining {
                current.push(g);
                self.extend_words(remaining - d, current, out);
                current.pop();
            }
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            AlphabetKind::Splitting => f.write_str("{A,B}"),
            AlphabetKind::Magnus => write!(f, "{{A1..A{}}}", self.size),
        }
    }
}

/// Word over one alphabet family. The empty word is the identity `Id`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    kind: AlphabetKind,
    letters: Vec<u8>,
}

impl Word {
    pub fn new(kind: AlphabetKind, letters: Vec<u8>) -> Self {
        Word { kind, letters }
    }

    pub fn identity(kind: AlphabetKind) -> Self {
        Word { kind, letters: Vec::new() }
    }

    pub fn kind(&self) -> AlphabetKind {
        self.kind
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn grade(&self) -> u32 {
        self.letters.iter().map(|&g| self.kind.grade_of(g)).sum()
    }

    /// Largest generator index used, if any.
    pub fn max_letter(&self) -> Option<u8> {
        self.letters.iter().copied().max()
    }

    /// Letters `i..` as a word.
    pub fn suffix(&self, i: usize) -> Word {
        Word::new(self.kind, self.letters[i..].to_vec())
    }

    pub fn prefix(&self, i: usize) -> Word {
        Word::new(self.kind, self.letters[..i].to_vec())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word::new(self.kind, letters)
    }

    /// Parses `AAB` (splitting), `A1.A1.A2` (Magnus), or `Id`.
    pub fn parse(s: &str, kind: AlphabetKind) -> Result<Word> {
        let s = s.trim();
        if s == "Id" || s.is_empty() {
            return Ok(Word::identity(kind));
        }
        let letters = match kind {
            AlphabetKind::Splitting => {
                s.chars().map(|c| kind.parse_letter(&c.to_string())).collect::<Result<Vec<_>>>()?
            }
            AlphabetKind::Magnus => s.split('.').map(|t| kind.parse_letter(t.trim())).collect::<Result<Vec<_>>>()?,
        };
        Ok(Word::new(kind, letters))
    }

    /// Parses a word, inferring the alphabet family from the presence of digits.
    pub fn parse_any(s: &str) -> Result<Word> {
        let kind = if s.chars().any(|c| c.is_ascii_digit()) { AlphabetKind::Magnus } else { AlphabetKind::Splitting };
        Word::parse(s, kind)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("Id");
        }
        let sep = match self.kind {
            AlphabetKind::Splitting => "",
            AlphabetKind::Magnus => ".",
        };
        let names: Vec<String> = self.letters.iter().map(|&g| self.kind.letter_name(g)).collect();
        f.write_str(&names.join(sep))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Lexicographic comparison; a proper prefix precedes its extensions.
pub fn lex_compare(v: &Word, w: &Word) -> Result<Ordering> {
    if v.kind != w.kind {
        return Err(Error::AlphabetMismatch { expected: v.kind.to_string(), found: w.kind.to_string() });
    }
    Ok(v.letters.cmp(&w.letters))
}

/// Expression over the free algebra. Children are shared, never simplified.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Identity,
    Generator(u8),
    Scalar(Polynomial, Arc<Expr>),
    Sum(Arc<Expr>, Arc<Expr>),
    Product(Arc<Expr>, Arc<Expr>),
    Commutator(Arc<Expr>, Arc<Expr>),
    Exponential(Arc<Expr>),
}

impl Expr {
    pub fn generator(g: u8) -> Expr {
        Expr::Generator(g)
    }

    pub fn zero() -> Expr {
        Expr::Scalar(Polynomial::zero(), Arc::new(Expr::Identity))
    }

    pub fn scalar(c: Polynomial, x: Expr) -> Expr {
        Expr::Scalar(c, Arc::new(x))
    }

    pub fn sum(x: Expr, y: Expr) -> Expr {
        Expr::Sum(Arc::new(x), Arc::new(y))
    }

    pub fn product(x: Expr, y: Expr) -> Expr {
        Expr::Product(Arc::new(x), Arc::new(y))
    }

    pub fn commutator(x: Expr, y: Expr) -> Expr {
        Expr::Commutator(Arc::new(x), Arc::new(y))
    }

    pub fn exp(x: Expr) -> Expr {
        Expr::Exponential(Arc::new(x))
    }

    /// Left-nested sum; the empty sum is zero.
    pub fn sum_of(items: impl IntoIterator<Item = Expr>) -> Expr {
        items.into_iter().reduce(Expr::sum).unwrap_or_else(Expr::zero)
    }

    /// Product in the given left-to-right order; the empty product is `Identity`.
    pub fn product_of(items: impl IntoIterator<Item = Expr>) -> Expr {
        let items: Vec<Expr> = items.into_iter().collect();
        items.into_iter().rev().reduce(|acc, x| Expr::product(x, acc)).unwrap_or(Expr::Identity)
    }

    /// Grade of a pure element (generators and nested commutators only).
    pub fn lie_grade(&self, kind: AlphabetKind) -> Result<u32> {
        LieElement::try_from(self).map(|e| e.grade(kind))
    }
}

impl TryFrom<&Expr> for LieElement {
    type Error = Error;
    fn try_from(x: &Expr) -> Result<LieElement> {
        match x {
            Expr::Generator(g) => Ok(LieElement::Gen(*g)),
            Expr::Commutator(a, b) => Ok(LieElement::bracket(LieElement::try_from(&**a)?, LieElement::try_from(&**b)?)),
            other => Err(Error::NotPure(format!("{other:?}"))),
        }
    }
}

/// Pure Lie element: a generator or a bracket of pure elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LieElement {
    Gen(u8),
    Bracket(Box<LieElement>, Box<LieElement>),
}

impl LieElement {
    pub fn bracket(a: LieElement, b: LieElement) -> LieElement {
        LieElement::Bracket(Box::new(a), Box::new(b))
    }

    pub fn grade(&self, kind: AlphabetKind) -> u32 {
        match self {
            LieElement::Gen(g) => kind.grade_of(*g),
            LieElement::Bracket(a, b) => a.grade(kind) + b.grade(kind),
        }
    }

    pub fn max_letter(&self) -> u8 {
        match self {
            LieElement::Gen(g) => *g,
            LieElement::Bracket(a, b) => a.max_letter().max(b.max_letter()),
        }
    }

    /// Letters read left to right, ignoring brackets.
    pub fn foliage(&self) -> Vec<u8> {
        match self {
            LieElement::Gen(g) => vec![*g],
            LieElement::Bracket(a, b) => {
                let mut v = a.foliage();
                v.extend(b.foliage());
                v
            }
        }
    }

    pub fn to_expr(&self) -> Expr {
        match self {
            LieElement::Gen(g) => Expr::Generator(*g),
            LieElement::Bracket(a, b) => Expr::commutator(a.to_expr(), b.to_expr()),
        }
    }

    pub fn to_string_in(&self, kind: AlphabetKind) -> String {
        match self {
            LieElement::Gen(g) => kind.letter_name(*g),
            LieElement::Bracket(a, b) => format!("[{},{}]", a.to_string_in(kind), b.to_string_in(kind)),
        }
    }

    /// Parses `A2`, `[B,[A,B]]`, `[A1,A2]`.
    pub fn parse(s: &str, kind: AlphabetKind) -> Result<LieElement> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bytes = compact.as_bytes();
        let mut pos = 0;
        let e = parse_lie(bytes, &mut pos, kind)?;
        if pos != bytes.len() {
            return Err(Error::Parse { pos, msg: format!("trailing input in `{s}`") });
        }
        Ok(e)
    }
}

fn parse_lie(src: &[u8], pos: &mut usize, kind: AlphabetKind) -> Result<LieElement> {
    let expect = |pos: &mut usize, c: u8| -> Result<()> {
        if src.get(*pos) == Some(&c) {
            *pos += 1;
            Ok(())
        } else {
            Err(Error::Parse { pos: *pos, msg: format!("expected `{}`", c as char) })
        }
    };
    if src.get(*pos) == Some(&b'[') {
        *pos += 1;
        let a = parse_lie(src, pos, kind)?;
        expect(pos, b',')?;
        let b = parse_lie(src, pos, kind)?;
        expect(pos, b']')?;
        return Ok(LieElement::bracket(a, b));
    }
    let start = *pos;
    while *pos < src.len() && src[*pos].is_ascii_alphanumeric() {
        *pos += 1;
        if kind == AlphabetKind::Splitting {
            break;
        }
    }
    if start == *pos {
        return Err(Error::Parse { pos: start, msg: "expected a generator or `[`".into() });
    }
    let name = std::str::from_utf8(&src[start..*pos]).unwrap();
    kind.parse_letter(name)
        .map(LieElement::Gen)
        .map_err(|_| Error::Parse { pos: start, msg: format!("unknown {kind} generator `{name}`") })
}

/// Scalar multiple of a pure Lie element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LieTerm {
    pub coeff: Polynomial,
    pub element: LieElement,
}

impl LieTerm {
    pub fn new(coeff: Polynomial, element: LieElement) -> Self {
        LieTerm { coeff, element }
    }

    pub fn grade(&self, kind: AlphabetKind) -> u32 {
        self.element.grade(kind)
    }

    pub fn to_expr(&self) -> Expr {
        Expr::scalar(self.coeff.clone(), self.element.to_expr())
    }

    /// Image under the grade involution: grade-k parts are scaled by `(-1)^(k+1)`.
    pub fn tilde(&self, kind: AlphabetKind) -> LieTerm {
        let coeff = if self.grade(kind) % 2 == 1 { self.coeff.clone() } else { -&self.coeff };
        LieTerm::new(coeff, self.element.clone())
    }

    pub fn to_string_in(&self, kind: AlphabetKind) -> String {
        let element = self.element.to_string_in(kind);
        if self.coeff.is_one() {
            element
        } else if self.coeff.num_terms() == 1 {
            format!("{}*{element}", self.coeff)
        } else {
            format!("({})*{element}", self.coeff)
        }
    }
}

/// Sum of the terms of one exponent as an expression.
pub fn exponent_expr(terms: &[LieTerm]) -> Expr {
    Expr::sum_of(terms.iter().map(LieTerm::to_expr))
}

/// Bilinear expansion of `[Σ lhs, Σ rhs]` into bracket terms.
pub fn expand_bracket(lhs: &[LieTerm], rhs: &[LieTerm]) -> Vec<LieTerm> {
    let mut out = Vec::with_capacity(lhs.len() * rhs.len());
    for a in lhs {
        for b in rhs {
            out.push(LieTerm::new(&a.coeff * &b.coeff, LieElement::bracket(a.element.clone(), b.element.clone())));
        }
    }
    out
}

/// Merges equal elements, drops zero coefficients and sorts by element.
pub fn canonical_exponent(terms: &[LieTerm]) -> Vec<LieTerm> {
    let mut merged: BTreeMap<LieElement, Polynomial> = BTreeMap::new();
    for t in terms {
        *merged.entry(t.element.clone()).or_default() += &t.coeff;
    }
    merged.into_iter().filter(|(_, c)| !c.is_zero()).map(|(e, c)| LieTerm::new(c, e)).collect()
}

/// Reverses the product and applies the grade involution to every exponent.
pub fn adjoint(s: &Scheme) -> Scheme {
    let kind = s.alphabet.kind;
    let exponents = s.exponents.iter().rev().map(|e| e.iter().map(|t| t.tilde(kind)).collect()).collect();
    Scheme::new(s.alphabet, exponents)
}

/// Syntactic self-adjointness after canonical ordering of each exponent.
pub fn is_self_adjoint(s: &Scheme) -> bool {
    let canon = |sch: &Scheme| -> Vec<Vec<LieTerm>> {
        sch.exponents.iter().map(|e| canonical_exponent(e)).filter(|e| !e.is_empty()).collect()
    };
    canon(s) == canon(&adjoint(s))
}

/// Compares every word coefficient of `s` and its adjoint up to `max_grade`.
pub fn is_self_adjoint_up_to(s: &Scheme, max_grade: u32) -> Result<bool> {
    let lhs = s.to_expr();
    let rhs = adjoint(s).to_expr();
    let alphabet = s.alphabet;
    for q in 1..=max_grade {
        for w in alphabet.words_of_grade(q) {
            if coeff_word(&w, &lhs)? != coeff_word(&w, &rhs)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Rational helper used by several modules: `(-1)^k`.
pub(crate) fn sign(k: u32) -> Rational {
    if k.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}
