//! Order conditions for exponential integrators.
//!
//! Splitting methods and Magnus-type integrators are products of
//! exponentials of Lie elements. This crate extracts word coefficients of
//! such products symbolically, assembles the order conditions over Lyndon
//! words, solves them numerically and reports leading local error terms.

pub mod error;
pub mod exactsol;
pub mod freealg;
pub mod lyndon;
pub mod orderconds;
pub mod polyring;
pub mod schemes;
pub mod solver;
pub mod wordcoeff;

pub use error::{Error, Result};
pub use exactsol::{
    condition_is_trivial, exact_coeff, exact_coeff_integral_oracle, shifted_legendre, vanishes_by_orthogonality,
    ExactKind,
};
pub use freealg::{
    adjoint, is_self_adjoint, is_self_adjoint_up_to, lex_compare, Alphabet, AlphabetKind, Expr, LieElement, LieTerm,
    Word,
};
pub use lyndon::{
    basis_coeffs, custom_transform_matrix, lyndon_basis, lyndon_words, right_normed_basis_5,
    right_standard_factorization, standard_bracketing, transform_matrix, TransformMatrix,
};
pub use orderconds::{
    generate_conditions, leading_error, lem, lem_lower_bound, BasisChoice, LeadingErrorTerm, OrderConditionSystem,
};
pub use polyring::{Polynomial, Rational};
pub use schemes::{catalog, gauss_rule, gauss_substitute, QuadRule, Scheme, SubstitutedScheme};
pub use solver::{newton_solve, NewtonConfig, PolySystem, Solution};
pub use wordcoeff::{coeff_right_factors, coeff_word, phi_apply, phi_exp, phi_matrix};
