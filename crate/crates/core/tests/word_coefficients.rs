mod common;

use expocon::polyring::rat;
use expocon::{coeff_right_factors, coeff_word, phi_matrix, AlphabetKind, Expr, Polynomial, Word};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_word(rng: &mut ChaCha8Rng, letters: u8, max_len: usize) -> Word {
    let len = rng.gen_range(1..=max_len);
    Word::new(AlphabetKind::Splitting, (0..len).map(|_| rng.gen_range(0..letters)).collect())
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 1000, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn product_maps_to_matrix_product(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_word(&mut rng, 2, 5);
        let x = common::random_expr(&mut rng, 2, 2);
        let y = common::random_expr(&mut rng, 2, 2);
        let lhs = phi_matrix(&w, &Expr::product(x.clone(), y.clone())).unwrap();
        let rhs = common::mat_mul(&phi_matrix(&w, &x).unwrap(), &phi_matrix(&w, &y).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn exponential_maps_to_matrix_exponential(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_word(&mut rng, 2, 5);
        let y = common::without_identity(common::random_expr(&mut rng, 2, 2));
        let m = phi_matrix(&w, &y).unwrap();
        prop_assert_eq!(phi_matrix(&w, &Expr::exp(y)).unwrap(), common::mat_exp(&m, w.len() + 1));
    }

    #[test]
    fn strictly_upper_part_is_nilpotent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_word(&mut rng, 2, 5);
        let y = common::without_identity(common::random_expr(&mut rng, 2, 2));
        let m = phi_matrix(&w, &y).unwrap();
        let mut power = m.clone();
        for _ in 0..w.len() {
            power = common::mat_mul(&power, &m);
        }
        prop_assert!(common::is_zero_matrix(&power));
    }

    #[test]
    fn agrees_with_series_expansion(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_word(&mut rng, 2, 4);
        let x = common::random_expr(&mut rng, 2, 2);
        let series = common::expand(AlphabetKind::Splitting, &x, w.len() as u32);
        prop_assert_eq!(coeff_word(&w, &x).unwrap(), common::coeff_of(&series, w.letters()));
    }

    #[test]
    fn right_factors_agree_with_single_words(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_word(&mut rng, 2, 5);
        let x = common::random_expr(&mut rng, 2, 2);
        for (v, c) in coeff_right_factors(&w, &x).unwrap() {
            prop_assert_eq!(c, coeff_word(&v, &x).unwrap());
        }
    }
}

#[test]
fn matrix_entries_are_subword_coefficients() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let w = random_word(&mut rng, 2, 4);
        let x = common::random_expr(&mut rng, 2, 2);
        let series = common::expand(AlphabetKind::Splitting, &x, 4);
        let m = phi_matrix(&w, &x).unwrap();
        for (i, row) in m.iter().enumerate() {
            for (j, c) in row.iter().enumerate().skip(i) {
                assert_eq!(c, &common::coeff_of(&series, &w.letters()[i..j]));
            }
        }
    }
}

#[test]
fn magnus_expansion_matches_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let x = common::random_expr(&mut rng, 3, 2);
        let series = common::expand(AlphabetKind::Magnus, &x, 4);
        for g in 1..=4 {
            for w in expocon::Alphabet::magnus(3).words_of_grade(g) {
                assert_eq!(coeff_word(&w, &x).unwrap(), common::coeff_of(&series, w.letters()), "{w}");
            }
        }
    }
}

#[test]
fn symbolic_coefficients_follow_parameters() {
    let x = Expr::exp(Expr::scalar(Polynomial::var("t"), Expr::sum(Expr::generator(0), Expr::generator(1))));
    let w = Word::parse("ABA", AlphabetKind::Splitting).unwrap();
    let c = coeff_word(&w, &x).unwrap();
    assert_eq!(c, "1/6*t^3".parse().unwrap());
    assert_eq!(c.eval_exact(&[("t".to_string(), rat(2))].into()).unwrap(), expocon::polyring::ratio(4, 3));
}
