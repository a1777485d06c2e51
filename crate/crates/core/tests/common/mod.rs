#![allow(dead_code)]

use leibniz_core::{Expression, Field, RawTerm, Scalar, Symbol};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A random bracketing of `degree` leaves drawn from `x1..x{vars}`.
pub fn random_term(rng: &mut ChaCha8Rng, degree: usize, vars: u32) -> RawTerm {
    if degree == 1 {
        return RawTerm::leaf(Symbol::x(rng.gen_range(1..=vars)));
    }
    let k = rng.gen_range(1..degree);
    RawTerm::node(random_term(rng, k, vars), random_term(rng, degree - k, vars))
}

/// One to three random terms of degree at most `max_degree` with small
/// integer coefficients.
pub fn random_expression(rng: &mut ChaCha8Rng, max_degree: usize, vars: u32) -> Expression {
    let mut e = Expression::zero(Field::Rational);
    for _ in 0..rng.gen_range(1..=3) {
        let d = rng.gen_range(1..=max_degree);
        e.add_term(random_term(rng, d, vars), &Scalar::from_i64(Field::Rational, rng.gen_range(-3..=3)));
    }
    e
}
