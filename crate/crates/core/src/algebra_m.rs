//! The metabelian algebra `M = W ⊕ L` over `Z_p`.
//!
//! `W` has the basis `e_f` for finitely supported `f: ℕ -> Z_p`, `L` the
//! basis `x_i = δ_i - ε` where `δ_i` shifts `f` by one at `i`. The only
//! nonzero products are `e_f x_i = e_{f + 1_i} - e_f`, i.e.
//! `(w1 + l1)(w2 + l2) = w1 l2`. `M` satisfies `x(yz) ≡ 0` and the Engel
//! identity `x Y^p ≡ 0` but is not nilpotent.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Result;
use crate::eval::Algebra;
use crate::lincomb::LinComb;
use crate::report::Report;
use crate::scalar::{Field, Scalar};

/// A finitely supported function `ℕ -> Z_p`; zero values are not stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SupportFn(BTreeMap<u32, u64>);

impl SupportFn {
    /// The zero function `f_0`.
    pub fn zero() -> SupportFn {
        SupportFn::default()
    }

    /// Values are reduced mod `p`; zeros are dropped.
    pub fn new<I: IntoIterator<Item = (u32, u64)>>(p: u64, values: I) -> SupportFn {
        SupportFn(values.into_iter().map(|(i, v)| (i, v % p)).filter(|e| e.1 != 0).collect())
    }

    /// The indicator function of `set`.
    pub fn indicator(set: &[u32]) -> SupportFn {
        SupportFn(set.iter().map(|&i| (i, 1)).collect())
    }

    pub fn get(&self, i: u32) -> u64 {
        self.0.get(&i).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.keys().copied()
    }

    pub fn support_len(&self) -> usize {
        self.0.len()
    }

    /// `δ_i f`: the value at `i` raised by one.
    pub fn shift(&self, i: u32, p: u64) -> SupportFn {
        let mut out = self.clone();
        let v = (self.get(i) + 1) % p;
        if v == 0 {
            out.0.remove(&i);
        } else {
            out.0.insert(i, v);
        }
        out
    }
}

impl fmt::Display for SupportFn {
    /// `e{1,2}` for indicators, `e{1:2,3}` when a value differs from 1.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> =
            self.0.iter().map(|(i, v)| if *v == 1 { i.to_string() } else { format!("{i}:{v}") }).collect();
        write!(f, "e{{{}}}", items.join(","))
    }
}

/// `w + l` with `w ∈ W`, `l ∈ L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MElement {
    pub w: LinComb<SupportFn>,
    pub l: LinComb<u32>,
}

impl MElement {
    pub fn is_zero(&self) -> bool {
        self.w.is_zero() && self.l.is_zero()
    }

    /// Number of basis terms.
    pub fn len(&self) -> usize {
        self.w.len() + self.l.len()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }
}

impl fmt::Display for MElement {
    /// Signed terms, larger supports first, e.g. `+e{1,2} -e{1} -e{2} +e{}`.
    /// A coefficient `p - 1` is shown as `-`, other coefficients as `+c*`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&SupportFn, &Scalar)> = self.w.iter().collect();
        terms.sort_by(|a, b| b.0.support_len().cmp(&a.0.support_len()).then(a.0.cmp(b.0)));
        let sign = |c: &Scalar| {
            let (v, p) = (c.residue().unwrap(), c.field().characteristic());
            match v {
                1 => "+".to_string(),
                v if v == p - 1 => "-".to_string(),
                v => format!("+{v}*"),
            }
        };
        let mut parts: Vec<String> = terms.iter().map(|(g, c)| format!("{}{g}", sign(c))).collect();
        parts.extend(self.l.iter().map(|(i, c)| format!("{}x{i}", sign(c))));
        write!(f, "{}", parts.join(" "))
    }
}

/// `M` over `Z_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlgebraM {
    p: u64,
}

impl AlgebraM {
    pub fn new(p: u64) -> Result<AlgebraM> {
        Field::prime(p)?;
        Ok(AlgebraM { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self, f: SupportFn) -> MElement {
        MElement { w: LinComb::basis(self.field(), f), l: LinComb::zero(self.field()) }
    }

    pub fn x(&self, i: u32) -> MElement {
        MElement { w: LinComb::zero(self.field()), l: LinComb::basis(self.field(), i) }
    }

    fn check(&self, u: &MElement) -> Result<()> {
        for f in [u.w.field(), u.l.field()] {
            if f != self.field() {
                return Err(crate::scalar::ScalarError::ContextMismatch(self.field(), f).into());
            }
        }
        Ok(())
    }

    /// `(w1 + l1)(w2 + l2) = w1 l2`.
    pub fn m_mul(&self, u: &MElement, v: &MElement) -> Result<MElement> {
        self.check(u)?;
        self.check(v)?;
        Ok(Algebra::mul(self, u, v))
    }

    /// `e_{f0} x_1 x_2 .. x_m` by repeated multiplication.
    pub fn witness(&self, m: u32) -> MElement {
        (1..=m).fold(self.e(SupportFn::zero()), |acc, i| Algebra::mul(self, &acc, &self.x(i)))
    }

    /// `Σ_{S ⊆ {1..m}} (-1)^{m-|S|} e_{1_S}`, written down directly.
    pub fn closed_form_witness(&self, m: u32) -> MElement {
        let field = self.field();
        let mut w = LinComb::zero(field);
        for mask in 0u64..(1 << m) {
            let set: Vec<u32> = (1..=m).filter(|&i| mask & (1 << (i - 1)) != 0).collect();
            let sign = if (m as usize - set.len()).is_multiple_of(2) { 1 } else { -1 };
            w.add_term(SupportFn::indicator(&set), &Scalar::from_i64(field, sign));
        }
        MElement { w, l: LinComb::zero(field) }
    }

    fn random_fn(&self, rng: &mut ChaCha8Rng) -> SupportFn {
        let size = rng.gen_range(0..=3);
        SupportFn::new(self.p, (0..size).map(|_| (rng.gen_range(1..=MAX_INDEX), rng.gen_range(1..self.p))))
    }

    fn random_coeff(&self, rng: &mut ChaCha8Rng) -> Scalar {
        Scalar::from_i64(self.field(), rng.gen_range(0..self.p) as i64)
    }

    /// `Σ α_i x_i` with indices in `1..=8`.
    pub fn random_l(&self, rng: &mut ChaCha8Rng) -> MElement {
        let mut out = self.zero();
        for _ in 0..rng.gen_range(1..=3) {
            out.l.add_term(rng.gen_range(1..=MAX_INDEX), &self.random_coeff(rng));
        }
        out
    }

    /// A random element with up to three terms in each part; supports and
    /// indices in `1..=8`, coefficients uniform in `Z_p`.
    pub fn random_element(&self, rng: &mut ChaCha8Rng) -> MElement {
        let mut out = self.random_l(rng);
        for _ in 0..rng.gen_range(0..=3) {
            let f = self.random_fn(rng);
            out.w.add_term(f, &self.random_coeff(rng));
        }
        out
    }

    /// Basis elements with indices and supports inside `{1..4}`: `x_1..x_4`
    /// and `e_f` for every `f: {1..4} -> Z_p`.
    pub fn small_basis(&self) -> Vec<MElement> {
        let mut out: Vec<MElement> = (1..=SMALL_INDEX).map(|i| self.x(i)).collect();
        let count = self.p.pow(SMALL_INDEX);
        for code in 0..count {
            let f = SupportFn::new(self.p, (1..=SMALL_INDEX).map(|i| (i, code / self.p.pow(i - 1) % self.p)));
            out.push(self.e(f));
        }
        out
    }

    /// `t Y^k`.
    pub fn right_power(&self, t: &MElement, y: &MElement, k: u64) -> MElement {
        (0..k).fold(t.clone(), |acc, _| Algebra::mul(self, &acc, y))
    }
}

const MAX_INDEX: u32 = 8;
const SMALL_INDEX: u32 = 4;

impl Algebra for AlgebraM {
    type Elem = MElement;

    fn field(&self) -> Field {
        Field::Prime(self.p)
    }

    fn zero(&self) -> MElement {
        MElement { w: LinComb::zero(self.field()), l: LinComb::zero(self.field()) }
    }

    fn is_zero(&self, a: &MElement) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &MElement, b: &MElement) -> MElement {
        let mut out = a.clone();
        out.w.add_assign(&b.w);
        out.l.add_assign(&b.l);
        out
    }

    fn scale(&self, a: &MElement, c: &Scalar) -> MElement {
        MElement { w: a.w.scaled(c), l: a.l.scaled(c) }
    }

    fn mul(&self, a: &MElement, b: &MElement) -> MElement {
        let mut w = LinComb::zero(self.field());
        for (f, alpha) in &a.w {
            for (&i, beta) in &b.l {
                let c = alpha * beta;
                w.add_term(f.shift(i, self.p), &c);
                w.add_term(f.clone(), &-c);
            }
        }
        MElement { w, l: LinComb::zero(self.field()) }
    }
}

fn counterexample(parts: &[(&str, &MElement)], value: &MElement) -> String {
    let args: Vec<String> = parts.iter().map(|(n, e)| format!("{n} = {e}")).collect();
    format!("{} gives {value}", args.join(", "))
}

/// Checks `x(yz) = 0` on all triples from [`AlgebraM::small_basis`] and on
/// `samples` random triples drawn from a ChaCha8 stream seeded with `seed`.
pub fn verify_left_annihilation(p: u64, samples: usize, seed: u64) -> Result<Report> {
    let alg = AlgebraM::new(p)?;
    let basis = alg.small_basis();
    let failures: Vec<String> = basis
        .par_iter()
        .flat_map_iter(|y| {
            let alg = &alg;
            let basis = &basis;
            basis.iter().flat_map(move |z| {
                let yz = Algebra::mul(alg, y, z);
                basis.iter().filter_map(move |x| {
                    let v = Algebra::mul(alg, x, &yz);
                    (!v.is_zero()).then(|| counterexample(&[("x", x), ("y", y), ("z", z)], &v))
                })
            })
        })
        .collect();
    let exhaustive = basis.len().pow(3);
    let mut report = Report::new("left-annihilation", format!("p={p}"), seed, exhaustive, samples);
    report.absorb(failures);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let (x, y, z) = (alg.random_element(&mut rng), alg.random_element(&mut rng), alg.random_element(&mut rng));
        let v = Algebra::mul(&alg, &x, &Algebra::mul(&alg, &y, &z));
        if !v.is_zero() {
            report.fail(counterexample(&[("x", &x), ("y", &y), ("z", &z)], &v));
        }
    }
    Ok(report)
}

/// Checks `t Y^p = 0` for `t = e_f` with `f: {1..4} -> Z_p` and `Y = x_i`,
/// then on `samples` seeded random pairs with `Y` in `L` and `samples`
/// pairs of arbitrary elements.
pub fn verify_engel(p: u64, samples: usize, seed: u64) -> Result<Report> {
    let alg = AlgebraM::new(p)?;
    let basis = alg.small_basis();
    let ys: Vec<&MElement> = basis.iter().filter(|b| !b.l.is_zero()).collect();
    let failures: Vec<String> = basis
        .par_iter()
        .flat_map_iter(|t| {
            let alg = &alg;
            ys.iter().filter_map(move |y| {
                let v = alg.right_power(t, y, p);
                (!v.is_zero()).then(|| counterexample(&[("t", t), ("Y", y)], &v))
            })
        })
        .collect();
    let mut report = Report::new("engel", format!("p={p}"), seed, basis.len() * ys.len(), 2 * samples);
    report.absorb(failures);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for round in 0..2 * samples {
        let t = alg.random_element(&mut rng);
        let y = if round < samples { alg.random_l(&mut rng) } else { alg.random_element(&mut rng) };
        let v = alg.right_power(&t, &y, p);
        if !v.is_zero() {
            report.fail(counterexample(&[("t", &t), ("Y", &y)], &v));
        }
    }
    Ok(report)
}
