mod common;

use leibniz_core::algebra_hs::AlgebraHs;
use leibniz_core::algebra_m::AlgebraM;
use leibniz_core::eval::{eval_expression, eval_normal_form, Algebra, Binding};
use leibniz_core::normal::{normalize_outermost, to_expression};
use leibniz_core::{normalize, parse, Symbol};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn agrees<A: Algebra>(alg: &A, seed: u64, draw: impl Fn(&mut ChaCha8Rng) -> A::Elem) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e = common::random_expression(&mut rng, 6, 4);
    let binding: Binding<A::Elem> = (1..=4).map(|i| (Symbol::x(i), draw(&mut rng))).collect();
    eval_expression(alg, &e, &binding).unwrap() == eval_normal_form(alg, &normalize(&e), &binding).unwrap()
}

proptest! {
    #[test]
    fn normal_form_is_sound_in_m(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let m = AlgebraM::new(p).unwrap();
        prop_assert!(agrees(&m, seed, |r| m.random_element(r)));
    }

    #[test]
    fn normal_form_is_sound_in_h(seed in any::<u64>()) {
        let h = AlgebraHs::new(3).unwrap();
        prop_assert!(agrees(&h, seed, |r| h.random_element(r, 2)));
    }

    #[test]
    fn normalize_is_idempotent_and_strategy_free(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = common::random_expression(&mut rng, 7, 5);
        let nf = normalize(&e);
        prop_assert_eq!(&normalize(&to_expression(&nf)), &nf);
        prop_assert_eq!(&normalize_outermost(&e), &nf);
    }
}

#[test]
fn printed_normal_form_parses_back() {
    for text in ["x1(x2 x3)", "x1(x2(x3 x4)) - 3 x4 x1 (x2 x3)", "(x1 x2)(x3 x4) + x0(xy)(xy)"] {
        let nf = normalize(&parse(text).unwrap());
        assert_eq!(normalize(&parse(&nf.to_string()).unwrap()), nf, "{text}");
    }
}
