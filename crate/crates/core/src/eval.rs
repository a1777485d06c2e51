//! Evaluation of symbolic elements inside concrete algebras.

use std::collections::BTreeMap;
use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::expr::{ExprError, Expression, RawTerm, Symbol};
use crate::normal::NormalForm;
use crate::perm::Permutation;
use crate::scalar::{Field, Scalar};

/// A finite-dimensional-at-a-time algebra over an exact field.
pub trait Algebra {
    type Elem: Clone + PartialEq + Debug;

    fn field(&self) -> Field;
    fn zero(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale(&self, a: &Self::Elem, c: &Scalar) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.scale(b, &-Scalar::one(self.field())))
    }
}

pub type Binding<E> = BTreeMap<Symbol, E>;

pub fn eval_term<A: Algebra>(alg: &A, t: &RawTerm, binding: &Binding<A::Elem>) -> Result<A::Elem> {
    match t {
        RawTerm::Leaf(s) => binding.get(s).cloned().ok_or(Error::Expr(ExprError::Unbound(*s))),
        RawTerm::Node(l, r) => Ok(alg.mul(&eval_term(alg, l, binding)?, &eval_term(alg, r, binding)?)),
    }
}

pub fn eval_expression<A: Algebra>(alg: &A, e: &Expression, binding: &Binding<A::Elem>) -> Result<A::Elem> {
    let mut acc = alg.zero();
    for (t, c) in e {
        let v = eval_term(alg, t, binding)?;
        acc = alg.add(&acc, &alg.scale(&v, &c.to_field(alg.field())?));
    }
    Ok(acc)
}

fn eval_word<A: Algebra>(alg: &A, word: &[Symbol], binding: &Binding<A::Elem>) -> Result<A::Elem> {
    let lookup = |s: &Symbol| binding.get(s).ok_or(Error::Expr(ExprError::Unbound(*s)));
    let mut acc = lookup(&word[0])?.clone();
    for s in &word[1..] {
        acc = alg.mul(&acc, lookup(s)?);
    }
    Ok(acc)
}

pub fn eval_normal_form<A: Algebra>(alg: &A, nf: &NormalForm, binding: &Binding<A::Elem>) -> Result<A::Elem> {
    let mut acc = alg.zero();
    for (w, c) in nf {
        let v = eval_word(alg, w.symbols(), binding)?;
        acc = alg.add(&acc, &alg.scale(&v, &c.to_field(alg.field())?));
    }
    Ok(acc)
}

/// Value of a left-normed product of alternated segments,
/// `Σ sgn(π_1)..sgn(π_r) · y^1_{π_1(1)} .. y^1_{π_1(h_1)} y^2_{π_2(1)} ..`,
/// computed one segment at a time on the running value.
///
/// Within a segment the signed sum over orderings is accumulated over
/// subsets: `F(S) = Σ_{y ∈ S} (-1)^{#{z ∈ S : z > y}} F(S \ y) · y`, which
/// costs `2^h · h` products instead of `h! · h`.
pub fn eval_alternated<A: Algebra>(alg: &A, segments: &[Vec<A::Elem>]) -> A::Elem {
    let minus = -Scalar::one(alg.field());
    let mut state: Option<A::Elem> = None;
    for seg in segments {
        let h = seg.len();
        if h == 0 {
            continue;
        }
        assert!(h < 25, "alternated segment too long");
        let mut table: Vec<Option<A::Elem>> = vec![None; 1 << h];
        table[0] = state.take();
        for set in 1usize..(1 << h) {
            let mut acc: Option<A::Elem> = None;
            for (y, v) in seg.iter().enumerate() {
                if set & (1 << y) == 0 {
                    continue;
                }
                let rest = set & !(1 << y);
                let term = match (&table[rest], rest) {
                    (Some(prev), _) => alg.mul(prev, v),
                    (None, 0) => v.clone(),
                    (None, _) => continue,
                };
                let later = (rest >> (y + 1)).count_ones();
                let term = if later % 2 == 1 { alg.scale(&term, &minus) } else { term };
                acc = Some(match acc {
                    None => term,
                    Some(a) => alg.add(&a, &term),
                });
            }
            table[set] = acc;
        }
        state = table.pop().unwrap();
    }
    state.unwrap_or_else(|| alg.zero())
}

/// Same value as [`eval_alternated`] by brute force: every combination of
/// orderings is multiplied out left to right. Only usable for small inputs.
pub fn eval_alternated_naive<A: Algebra>(alg: &A, segments: &[Vec<A::Elem>]) -> A::Elem {
    let perm_sets: Vec<Vec<Permutation>> = segments.iter().map(|s| Permutation::all(s.len())).collect();
    let mut total = alg.zero();
    let mut choice = vec![0usize; segments.len()];
    loop {
        let mut sign = 1;
        let mut word = Vec::new();
        for (i, seg) in segments.iter().enumerate() {
            let p = &perm_sets[i][choice[i]];
            sign *= p.sign();
            word.extend((0..seg.len()).map(|j| &seg[p.apply(j)]));
        }
        if let Some((first, rest)) = word.split_first() {
            let v = rest.iter().fold((*first).clone(), |acc, y| alg.mul(&acc, y));
            total = alg.add(&total, &alg.scale(&v, &Scalar::from_i64(alg.field(), sign)));
        }
        let mut i = 0;
        loop {
            if i == segments.len() {
                return total;
            }
            choice[i] += 1;
            if choice[i] < perm_sets[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}
