use expocon::polyring::ratio;
use expocon::{
    coeff_word, condition_is_trivial, exact_coeff, exact_coeff_integral_oracle, vanishes_by_orthogonality, Alphabet,
    AlphabetKind, ExactKind, Expr, Rational, Word,
};
use num_traits::Zero;

#[test]
fn splitting_coefficients_match_exponential_of_sum() {
    let x = Expr::exp(Expr::sum(Expr::generator(0), Expr::generator(1)));
    for g in 0..=6 {
        for w in Alphabet::splitting().words_of_grade(g) {
            let direct = coeff_word(&w, &x).unwrap().as_constant().unwrap();
            assert_eq!(exact_coeff(ExactKind::Splitting, &w).unwrap(), direct, "{w}");
        }
    }
}

#[test]
fn magnus_formula_matches_iterated_integrals() {
    for g in 1..=7 {
        for w in Alphabet::magnus(7).words_of_grade(g) {
            assert_eq!(exact_coeff(ExactKind::Magnus, &w).unwrap(), exact_coeff_integral_oracle(&w), "{w}");
        }
    }
}

#[test]
fn orthogonality_implies_vanishing() {
    let mut vanishing = 0;
    for g in 1..=8 {
        for w in Alphabet::magnus(8).words_of_grade(g) {
            if vanishes_by_orthogonality(&w) {
                vanishing += 1;
                assert!(exact_coeff(ExactKind::Magnus, &w).unwrap().is_zero(), "{w}");
            }
        }
    }
    assert!(vanishing > 0, "no vanishing words found");
}

#[test]
fn printed_table_values() {
    let cases = [
        ("A1", ratio(1, 1)),
        ("A1.A2", ratio(-1, 6)),
        ("A1.A1.A2", ratio(-1, 12)),
        ("A1.A1.A1.A2", ratio(-1, 40)),
        ("A1.A1.A3", ratio(1, 60)),
        ("A1.A2.A2", ratio(1, 60)),
        ("A2.A3", ratio(-1, 30)),
        ("A1.A4", Rational::zero()),
    ];
    for (w, v) in cases {
        let w = Word::parse(w, AlphabetKind::Magnus).unwrap();
        assert_eq!(exact_coeff(ExactKind::Magnus, &w).unwrap(), v, "{w}");
    }
}

#[test]
fn kind_must_match_word_alphabet() {
    let w = Word::parse("AB", AlphabetKind::Splitting).unwrap();
    assert!(exact_coeff(ExactKind::Magnus, &w).is_err());
}

#[test]
fn trivial_conditions() {
    let w = |s: &str| Word::parse(s, AlphabetKind::Magnus).unwrap();
    assert!(condition_is_trivial(&w("A1.A4"), 6, 3));
    assert!(!condition_is_trivial(&w("A1.A4"), 6, 4));
    assert!(!condition_is_trivial(&w("A2.A3"), 6, 3));
}
