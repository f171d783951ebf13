use expocon::lyndon::{is_lyndon, lyndon_words_up_to, standard_bracketing_via_splitting};
use expocon::polyring::rat;
use expocon::{
    coeff_word, custom_transform_matrix, lex_compare, lyndon_basis, lyndon_words, right_standard_factorization,
    standard_bracketing, transform_matrix, Alphabet, AlphabetKind, LieElement, Rational, Word,
};
use num_traits::Zero;
use proptest::prelude::*;
use std::cmp::Ordering;

/// Number of Lyndon words of length n over k letters, by Moebius inversion.
fn necklace_count(k: i64, n: u32) -> usize {
    fn mobius(mut n: u32) -> i64 {
        let mut result = 1;
        let mut p = 2;
        while p * p <= n {
            if n.is_multiple_of(p) {
                n /= p;
                if n.is_multiple_of(p) {
                    return 0;
                }
                result = -result;
            }
            p += 1;
        }
        if n > 1 {
            result = -result;
        }
        result
    }
    let total: i64 = (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| mobius(n / d) * k.pow(d)).sum();
    (total / n as i64) as usize
}

/// Brute force: a word is Lyndon iff it is strictly smaller than all its proper rotations.
fn brute_force_lyndon(letters: &[u8]) -> bool {
    !letters.is_empty()
        && (1..letters.len()).all(|i| {
            let rot: Vec<u8> = letters[i..].iter().chain(&letters[..i]).copied().collect();
            letters < rot.as_slice()
        })
}

#[test]
fn splitting_counts_match_necklace_formula() {
    for q in 1..=12 {
        assert_eq!(lyndon_words(Alphabet::splitting(), q).words.len(), necklace_count(2, q), "grade {q}");
    }
}

#[test]
fn magnus_counts_match_splitting_words_starting_with_a() {
    for q in 1..=10 {
        let ab = lyndon_words(Alphabet::splitting(), q).words.iter().filter(|w| w.letters()[0] == 0).count();
        assert_eq!(lyndon_words(Alphabet::magnus(q as u8), q).words.len(), ab.max((q == 1) as usize));
    }
}

#[test]
fn generated_words_are_lyndon_and_sorted() {
    for alphabet in [Alphabet::splitting(), Alphabet::magnus(8)] {
        for q in 1..=8 {
            let words = lyndon_words(alphabet, q).words;
            for w in &words {
                assert!(is_lyndon(w), "{w}");
                assert_eq!(w.grade(), q);
            }
            for pair in words.windows(2) {
                assert_eq!(lex_compare(&pair[0], &pair[1]).unwrap(), Ordering::Less);
            }
        }
    }
}

#[test]
fn splitting_enumeration_is_complete() {
    for q in 1..=10u32 {
        let expected: Vec<Vec<u8>> = (0..1u32 << q)
            .map(|bits| (0..q).rev().map(|i| ((bits >> i) & 1) as u8).collect::<Vec<u8>>())
            .filter(|l| brute_force_lyndon(l))
            .collect();
        let got: Vec<Vec<u8>> =
            lyndon_words(Alphabet::splitting(), q).words.iter().map(|w| w.letters().to_vec()).collect();
        assert_eq!(got, expected, "grade {q}");
    }
}

#[test]
fn factorization_of_lyndon_words() {
    for w in lyndon_words_up_to(Alphabet::splitting(), 9).into_iter().filter(|w| w.len() > 1) {
        let (u, v) = right_standard_factorization(&w).unwrap();
        assert!(is_lyndon(&u) && is_lyndon(&v), "{w}");
        assert_eq!(lex_compare(&u, &v).unwrap(), Ordering::Less);
        assert_eq!(u.concat(&v), w);
        assert!((1..w.len()).filter(|&i| is_lyndon(&w.suffix(i))).all(|i| w.suffix(i).len() <= v.len()));
    }
}

#[test]
fn bracketing_has_unit_leading_coefficient() {
    for alphabet in [Alphabet::splitting(), Alphabet::magnus(6)] {
        for q in 1..=6 {
            let words = lyndon_words(alphabet, q).words;
            let basis = lyndon_basis(alphabet, q);
            for (w, b) in words.iter().zip(&basis.elements) {
                assert_eq!(coeff_word(w, &b.to_expr()).unwrap(), expocon::Polynomial::one(), "{w}");
                assert_eq!(b.foliage(), w.letters());
            }
        }
    }
}

#[test]
fn magnus_bracketing_matches_splitting_collapse() {
    for q in 1..=7 {
        for w in lyndon_words(Alphabet::magnus(q as u8), q).words {
            assert_eq!(standard_bracketing(&w).unwrap(), standard_bracketing_via_splitting(&w).unwrap(), "{w}");
        }
    }
}

#[test]
fn transform_matrices_are_unitriangular_with_integer_inverse() {
    for alphabet in [Alphabet::splitting(), Alphabet::magnus(7)] {
        for q in 1..=7 {
            let t = transform_matrix(q, alphabet);
            assert!(t.is_lower_unitriangular(), "grade {q}");
            assert_eq!(t.determinant(), rat(1));
            for row in t.inverse().unwrap() {
                assert!(row.iter().all(|x| x.is_integer()));
            }
        }
    }
}

#[test]
fn basis_coefficients_round_trip() {
    let t = transform_matrix(6, Alphabet::splitting());
    let c_b: Vec<Rational> =
        (0..t.dim()).map(|i| Rational::new((i as i64 * 7 - 11).into(), (i as i64 + 2).into())).collect();
    let c_w: Vec<Rational> =
        t.entries.iter().map(|row| row.iter().zip(&c_b).fold(Rational::zero(), |acc, (a, b)| acc + a * b)).collect();
    assert_eq!(t.solve(&c_w).unwrap(), c_b);
    assert_eq!(expocon::basis_coeffs(&c_w, &t).unwrap(), c_b);
}

#[test]
fn grade_five_matrices() {
    let t = transform_matrix(5, Alphabet::splitting());
    let words: Vec<String> = t.words.iter().map(Word::to_string).collect();
    assert_eq!(words, ["AAAAB", "AAABB", "AABAB", "AABBB", "ABABB", "ABBBB"]);
    let mut expect = vec![vec![rat(0); 6]; 6];
    for (i, row) in expect.iter_mut().enumerate() {
        row[i] = rat(1);
    }
    expect[2][1] = rat(-2);
    expect[4][3] = rat(-3);
    assert_eq!(t.entries, expect);

    let rn = custom_transform_matrix(5, Alphabet::splitting(), &expocon::right_normed_basis_5()).unwrap();
    let rows: [[i64; 6]; 6] = [
        [1, 0, 0, 0, 0, 0],
        [0, -1, -1, 0, 0, 0],
        [0, 3, 2, 0, 0, 0],
        [0, 0, 0, 1, 1, 0],
        [0, 0, 0, -2, -3, 0],
        [0, 0, 0, 0, 0, -1],
    ];
    let expect: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
    assert_eq!(rn.entries, expect);
}

#[test]
fn grade_three_bases() {
    let parse = |v: [&str; 2]| -> Vec<LieElement> {
        v.iter().map(|s| LieElement::parse(s, AlphabetKind::Splitting).unwrap()).collect()
    };
    let t = custom_transform_matrix(3, Alphabet::splitting(), &parse(["[A,[A,B]]", "[[A,B],B]"])).unwrap();
    assert_eq!(t.entries, vec![vec![rat(1), rat(0)], vec![rat(0), rat(1)]]);
    // [B,[A,B]] = -[[A,B],B]
    let t = custom_transform_matrix(3, Alphabet::splitting(), &parse(["[A,[A,B]]", "[B,[A,B]]"])).unwrap();
    assert_eq!(t.entries, vec![vec![rat(1), rat(0)], vec![rat(0), rat(-1)]]);
}

#[test]
fn dependent_basis_is_rejected() {
    let a = LieElement::parse("[A,[A,B]]", AlphabetKind::Splitting).unwrap();
    assert!(custom_transform_matrix(3, Alphabet::splitting(), &[a.clone(), a]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, ..ProptestConfig::default() })]

    #[test]
    fn lyndon_test_matches_rotations(letters in prop::collection::vec(0u8..3, 1..10)) {
        let w = Word::new(AlphabetKind::Magnus, letters.clone());
        prop_assert_eq!(is_lyndon(&w), brute_force_lyndon(&letters));
    }
}
