//! Lyndon words, standard bracketing, and change-of-basis matrices.
//!
//! Lyndon words over `{A, B}` are generated by length with Duval's
//! algorithm. Magnus words of grade `q` are obtained from `{A, B}` words of
//! length `q` by reading each block `A B^(d-1)` as the single letter `Ad`,
//! which is a grade-preserving, order-preserving bijection.

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::freealg::{Alphabet, AlphabetKind, LieElement, Word};
use crate::polyring::Rational;
use crate::wordcoeff::coeff_word;

/// Lyndon words over `k` letters of length exactly `n`, in lexicographic order.
fn duval(k: u8, n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    if n == 0 || k == 0 {
        return out;
    }
    let mut w: Vec<u8> = vec![0];
    loop {
        if w.len() == n {
            out.push(w.clone());
        }
        let m = w.len();
        while w.len() < n {
            w.push(w[w.len() - m]);
        }
        while w.last() == Some(&(k - 1)) {
            w.pop();
        }
        match w.last_mut() {
            Some(last) => *last += 1,
            None => break,
        }
    }
    out
}

/// Splits a `{A, B}` word starting with `A` into Magnus letters.
fn ab_to_magnus(letters: &[u8]) -> Vec<u8> {
    let mut out: Vec<u8> = Vec::new();
    for &c in letters {
        if c == 0 {
            out.push(0);
        } else {
            *out.last_mut().expect("word must start with A") += 1;
        }
    }
    out
}

fn magnus_to_ab(letters: &[u8]) -> Vec<u8> {
    letters.iter().flat_map(|&g| std::iter::once(0).chain(std::iter::repeat_n(1, g as usize))).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct LyndonSet {
    pub grade: u32,
    pub alphabet: Alphabet,
    pub words: Vec<Word>,
}

/// All Lyndon words of grade exactly `q`, in lexicographic order.
pub fn lyndon_words(alphabet: Alphabet, q: u32) -> LyndonSet {
    let words = match alphabet.kind {
        AlphabetKind::Splitting => {
            duval(2, q as usize).into_iter().map(|l| Word::new(AlphabetKind::Splitting, l)).collect()
        }
        AlphabetKind::Magnus => {
            let mut ws: Vec<Word> = duval(2, q as usize)
                .into_iter()
                .filter(|l| l[0] == 0)
                .map(|l| Word::new(AlphabetKind::Magnus, ab_to_magnus(&l)))
                .filter(|w| w.letters().iter().all(|&g| alphabet.contains(g)))
                .collect();
            ws.sort();
            ws
        }
    };
    LyndonSet { grade: q, alphabet, words }
}

/// Lyndon words of every grade `1..=max_grade`, by increasing grade.
pub fn lyndon_words_up_to(alphabet: Alphabet, max_grade: u32) -> Vec<Word> {
    (1..=max_grade).flat_map(|q| lyndon_words(alphabet, q).words).collect()
}

/// Strictly smaller than each of its proper right factors.
pub fn is_lyndon(w: &Word) -> bool {
    let l = w.letters();
    !l.is_empty() && (1..l.len()).all(|i| l < &l[i..])
}

/// `(u, v)` with `w = uv` and `v` the longest proper Lyndon right factor.
pub fn right_standard_factorization(w: &Word) -> Result<(Word, Word)> {
    if !is_lyndon(w) {
        return Err(Error::NotLyndon(w.to_string()));
    }
    if w.len() < 2 {
        return Err(Error::WordTooShort(w.to_string()));
    }
    (1..w.len())
        .map(|i| (w.prefix(i), w.suffix(i)))
        .find(|(_, v)| is_lyndon(v))
        .ok_or_else(|| Error::NotLyndon(w.to_string()))
}

/// Recursive bracketing along right standard factorizations.
pub fn standard_bracketing(w: &Word) -> Result<LieElement> {
    if !is_lyndon(w) {
        return Err(Error::NotLyndon(w.to_string()));
    }
    if w.len() == 1 {
        return Ok(LieElement::Gen(w.letters()[0]));
    }
    let (u, v) = right_standard_factorization(w)?;
    Ok(LieElement::bracket(standard_bracketing(&u)?, standard_bracketing(&v)?))
}

/// Bracketing of a Magnus word computed over `{A, B}`, with every
/// left-nested `[[..[A,B],..],B]` of depth `d-1` then replaced by `Ad`.
pub fn standard_bracketing_via_splitting(w: &Word) -> Result<LieElement> {
    if w.kind() != AlphabetKind::Magnus {
        return Err(Error::AlphabetMismatch { expected: "magnus".into(), found: w.kind().to_string() });
    }
    let ab = Word::new(AlphabetKind::Splitting, magnus_to_ab(w.letters()));
    collapse(&standard_bracketing(&ab)?).ok_or_else(|| Error::NotLyndon(w.to_string()))
}

fn left_nested_depth(e: &LieElement) -> Option<u8> {
    match e {
        LieElement::Gen(0) => Some(0),
        LieElement::Bracket(a, b) if **b == LieElement::Gen(1) => left_nested_depth(a).map(|d| d + 1),
        _ => None,
    }
}

fn collapse(e: &LieElement) -> Option<LieElement> {
    if let Some(d) = left_nested_depth(e) {
        return Some(LieElement::Gen(d));
    }
    match e {
        LieElement::Bracket(a, b) => Some(LieElement::bracket(collapse(a)?, collapse(b)?)),
        LieElement::Gen(_) => None,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasisSet {
    pub grade: u32,
    pub elements: Vec<LieElement>,
}

/// Standard bracketings of the Lyndon words of grade `q`, same order.
pub fn lyndon_basis(alphabet: Alphabet, q: u32) -> BasisSet {
    let elements = lyndon_words(alphabet, q)
        .words
        .iter()
        .map(|w| standard_bracketing(w).expect("generated words are Lyndon"))
        .collect();
    BasisSet { grade: q, elements }
}

/// The grade-5 right-normed basis over `{A, B}`, in its conventional order.
pub fn right_normed_basis_5() -> Vec<LieElement> {
    [
        "[A,[A,[A,[A,B]]]]",
        "[B,[A,[A,[A,B]]]]",
        "[A,[A,[B,[A,B]]]]",
        "[B,[A,[B,[A,B]]]]",
        "[A,[B,[B,[A,B]]]]",
        "[B,[B,[B,[A,B]]]]",
    ]
    .iter()
    .map(|s| LieElement::parse(s, AlphabetKind::Splitting).unwrap())
    .collect()
}

/// Word coefficients of basis elements: rows are Lyndon words, columns basis elements.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformMatrix {
    pub words: Vec<Word>,
    pub basis: Vec<LieElement>,
    pub entries: Vec<Vec<Rational>>,
}

impl TransformMatrix {
    pub fn dim(&self) -> usize {
        self.words.len()
    }

    pub fn is_lower_unitriangular(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, x)| match j.cmp(&i) {
                std::cmp::Ordering::Equal => x.is_one(),
                std::cmp::Ordering::Greater => x.is_zero(),
                std::cmp::Ordering::Less => true,
            })
        })
    }

    pub fn determinant(&self) -> Rational {
        let mut m = self.entries.clone();
        let n = m.len();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
                return Rational::zero();
            };
            if pivot != col {
                m.swap(pivot, col);
                det = -det;
            }
            det *= &m[col][col];
            let (top, bottom) = m.split_at_mut(col + 1);
            let pivot = &top[col];
            for row in bottom {
                if row[col].is_zero() {
                    continue;
                }
                let f = &row[col] / &pivot[col];
                for (x, y) in row[col..].iter_mut().zip(&pivot[col..]) {
                    *x -= &f * y;
                }
            }
        }
        det
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Vec<Vec<Rational>>> {
        let n = self.dim();
        let identity: Vec<Vec<Rational>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect();
        solve_many(&self.entries, identity)
    }

    /// Solves `T x = c` exactly.
    pub fn solve(&self, c: &[Rational]) -> Result<Vec<Rational>> {
        if c.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for a {}x{} matrix",
                c.len(),
                self.dim(),
                self.dim()
            )));
        }
        let rhs = c.iter().map(|x| vec![x.clone()]).collect();
        Ok(solve_many(&self.entries, rhs)?.into_iter().map(|mut r| r.pop().unwrap()).collect())
    }
}

/// Gauss-Jordan elimination on `[a | b]`, returning `a^{-1} b`.
fn solve_many(a: &[Vec<Rational>], mut b: Vec<Vec<Rational>>) -> Result<Vec<Vec<Rational>>> {
    let n = a.len();
    let mut a = a.to_vec();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::SingularMatrix)?;
        a.swap(pivot, col);
        b.swap(pivot, col);
        let p = a[col][col].clone();
        for x in a[col].iter_mut().chain(b[col].iter_mut()) {
            *x /= &p;
        }
        let (pivot_a, pivot_b) = (a[col].clone(), b[col].clone());
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for (x, y) in a[r].iter_mut().zip(&pivot_a) {
                *x -= &f * y;
            }
            for (x, y) in b[r].iter_mut().zip(&pivot_b) {
                *x -= &f * y;
            }
        }
    }
    Ok(b)
}

fn coefficient_matrix(words: &[Word], basis: &[LieElement]) -> Result<Vec<Vec<Rational>>> {
    let exprs: Vec<_> = basis.iter().map(LieElement::to_expr).collect();
    words
        .par_iter()
        .map(|w| {
            exprs
                .iter()
                .map(|x| Ok(coeff_word(w, x)?.as_constant().expect("basis elements have constant coefficients")))
                .collect()
        })
        .collect()
}

/// The matrix of Lyndon-word coefficients of the Lyndon basis of grade `q`.
pub fn transform_matrix(q: u32, alphabet: Alphabet) -> TransformMatrix {
    let words = lyndon_words(alphabet, q).words;
    let basis = lyndon_basis(alphabet, q).elements;
    let entries = coefficient_matrix(&words, &basis).expect("pure elements have no identity component");
    TransformMatrix { words, basis, entries }
}

/// Like [`transform_matrix`] for a caller-supplied basis, which must be nonsingular.
pub fn custom_transform_matrix(q: u32, alphabet: Alphabet, basis: &[LieElement]) -> Result<TransformMatrix> {
    let words = lyndon_words(alphabet, q).words;
    if basis.len() != words.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} basis elements for {} Lyndon words of grade {q}",
            basis.len(),
            words.len()
        )));
    }
    for b in basis {
        if b.grade(alphabet.kind) != q || !alphabet.contains(b.max_letter()) {
            return Err(Error::DimensionMismatch(format!(
                "`{}` is not a grade-{q} element over {alphabet}",
                b.to_string_in(alphabet.kind)
            )));
        }
    }
    let entries = coefficient_matrix(&words, basis)?;
    let t = TransformMatrix { words, basis: basis.to_vec(), entries };
    if t.determinant().is_zero() {
        return Err(Error::SingularMatrix);
    }
    Ok(t)
}

/// Basis coefficients from Lyndon-word coefficients: `T^{-1} c`.
pub fn basis_coeffs(c_words: &[Rational], t: &TransformMatrix) -> Result<Vec<Rational>> {
    t.solve(c_words)
}
