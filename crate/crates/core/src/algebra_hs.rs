//! The algebra `H^s = H_s ⊕ T_s` over `Q`.
//!
//! `H_s` is the Heisenberg Lie algebra on `a_1..a_s, b_1..b_s, c` with
//! `a_i b_j = δ_ij c = -b_j a_i`; `T_s = Q[t_1..t_s]` is a right `H_s`-module
//! through `f a_i = ∂f/∂t_i`, `f b_i = t_i f` and `f c = -f`. Products are
//! `(x + f)(y + g) = xy + f y`. `H^s` is a Leibniz algebra satisfying
//! `x(y(zt)) ≡ 0`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::eval::{Algebra, Binding};
use crate::expr::Symbol;
use crate::lincomb::LinComb;
use crate::report::Report;
use crate::scalar::{Field, Scalar};
use crate::young::{build_g, GTemplate, Partition};

/// Exponent vector of a monomial in `t_1..t_s`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(s: usize) -> Monomial {
        Monomial(vec![0; s])
    }

    pub fn new(exponents: Vec<u32>) -> Monomial {
        Monomial(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let factors: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|e| *e.1 > 0)
            .map(|(i, &e)| if e == 1 { format!("t{}", i + 1) } else { format!("t{}^{e}", i + 1) })
            .collect();
        write!(f, "{}", factors.join(" "))
    }
}

pub type Poly = LinComb<Monomial>;

impl fmt::Display for LinComb<Monomial> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", HsElement::from(self.clone()))
    }
}

/// `Π t_i^{e_i}` with coefficient 1.
pub fn monomial_poly(exponents: Vec<u32>) -> Poly {
    Poly::basis(Field::Rational, Monomial(exponents))
}

/// An element `x + f` with `x ∈ H_s` and `f ∈ T_s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HsElement {
    pub a: LinComb<u32>,
    pub b: LinComb<u32>,
    pub c: Scalar,
    pub poly: Poly,
}

impl HsElement {
    pub fn zero() -> HsElement {
        HsElement {
            a: LinComb::zero(Field::Rational),
            b: LinComb::zero(Field::Rational),
            c: Scalar::zero(Field::Rational),
            poly: Poly::zero(Field::Rational),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.poly.is_zero()
    }

    pub fn is_lie(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn add(&self, other: &HsElement) -> HsElement {
        let mut out = self.clone();
        out.a.add_assign(&other.a);
        out.b.add_assign(&other.b);
        out.c = &out.c + &other.c;
        out.poly.add_assign(&other.poly);
        out
    }

    pub fn scale(&self, k: &Scalar) -> HsElement {
        HsElement { a: self.a.scaled(k), b: self.b.scaled(k), c: &self.c * k, poly: self.poly.scaled(k) }
    }
}

impl From<Poly> for HsElement {
    fn from(poly: Poly) -> HsElement {
        HsElement { poly, ..HsElement::zero() }
    }
}

impl fmt::Display for HsElement {
    /// Polynomial part first, then the Heisenberg part, e.g. `2 t1 - a1 + c`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(String, &Scalar)> = self.poly.iter().rev().map(|(m, c)| (m.to_string(), c)).collect();
        terms.extend(self.a.iter().map(|(i, c)| (format!("a{i}"), c)));
        terms.extend(self.b.iter().map(|(i, c)| (format!("b{i}"), c)));
        if !self.c.is_zero() {
            terms.push(("c".into(), &self.c));
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (label, c)) in terms.iter().enumerate() {
            match (i, c.is_negative()) {
                (0, false) => {}
                (0, true) => write!(f, "-")?,
                (_, false) => write!(f, " + ")?,
                (_, true) => write!(f, " - ")?,
            }
            let mag = c.abs();
            match (mag.is_one(), label.as_str()) {
                (_, "1") => write!(f, "{mag}")?,
                (true, _) => write!(f, "{label}")?,
                (false, _) => write!(f, "{mag} {label}")?,
            }
        }
        Ok(())
    }
}

/// `H^s` for a fixed `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlgebraHs {
    s: usize,
}

impl AlgebraHs {
    pub fn new(s: usize) -> Result<AlgebraHs> {
        if s == 0 {
            return Err(Error::Contract("H^s needs s >= 1".into()));
        }
        Ok(AlgebraHs { s })
    }

    pub fn s(&self) -> usize {
        self.s
    }

    fn index(&self, i: u32) -> u32 {
        assert!(i >= 1 && i as usize <= self.s, "index {i} outside 1..={}", self.s);
        i
    }

    pub fn a(&self, i: u32) -> HsElement {
        HsElement { a: LinComb::basis(Field::Rational, self.index(i)), ..HsElement::zero() }
    }

    pub fn b(&self, i: u32) -> HsElement {
        HsElement { b: LinComb::basis(Field::Rational, self.index(i)), ..HsElement::zero() }
    }

    pub fn c(&self) -> HsElement {
        HsElement { c: Scalar::one(Field::Rational), ..HsElement::zero() }
    }

    /// `t_1^{e_1} .. t_s^{e_s}`; missing exponents are 0.
    pub fn t(&self, exponents: &[u32]) -> HsElement {
        let mut e = exponents.to_vec();
        assert!(e.len() <= self.s, "monomial in more than {} variables", self.s);
        e.resize(self.s, 0);
        monomial_poly(e).into()
    }

    fn check(&self, u: &HsElement) -> Result<()> {
        let bad_index = u.a.keys().chain(u.b.keys()).any(|&i| i == 0 || i as usize > self.s);
        let bad_mono = u.poly.keys().any(|m| m.0.len() != self.s);
        let fields = [u.a.field(), u.b.field(), u.c.field(), u.poly.field()];
        if bad_index || bad_mono || fields.iter().any(|f| *f != Field::Rational) {
            return Err(Error::Contract(format!("{u} is not an element of H^{}", self.s)));
        }
        Ok(())
    }

    pub fn hs_mul(&self, u: &HsElement, v: &HsElement) -> Result<HsElement> {
        self.check(u)?;
        self.check(v)?;
        Ok(Algebra::mul(self, u, v))
    }

    /// Basis of `H_s` followed by the monomials of degree at most `cap`.
    pub fn small_basis(&self, cap: u32) -> Vec<HsElement> {
        let mut out: Vec<HsElement> = (1..=self.s as u32).map(|i| self.a(i)).collect();
        out.extend((1..=self.s as u32).map(|i| self.b(i)));
        out.push(self.c());
        let mut exps = vec![0u32; self.s];
        loop {
            if exps.iter().sum::<u32>() <= cap {
                out.push(self.t(&exps));
            }
            let Some(i) = (0..self.s).find(|&i| exps[i] < cap) else { break };
            exps[i] += 1;
            exps[..i].iter_mut().for_each(|e| *e = 0);
        }
        out
    }

    fn random_coeff(rng: &mut ChaCha8Rng) -> Scalar {
        Scalar::rational(rng.gen_range(-3..=3), rng.gen_range(1..=3))
    }

    /// Up to three Heisenberg terms and up to three monomials of degree at
    /// most `cap`, with coefficients `n/d` for `|n| <= 3`, `1 <= d <= 3`.
    pub fn random_element(&self, rng: &mut ChaCha8Rng, cap: u32) -> HsElement {
        let mut out = HsElement::zero();
        for _ in 0..rng.gen_range(0..=3) {
            let i = rng.gen_range(1..=self.s as u32);
            match rng.gen_range(0..3) {
                0 => out.a.add_term(i, &Self::random_coeff(rng)),
                1 => out.b.add_term(i, &Self::random_coeff(rng)),
                _ => out.c = &out.c + &Self::random_coeff(rng),
            }
        }
        for _ in 0..rng.gen_range(0..=3) {
            let mut e = vec![0u32; self.s];
            for _ in 0..rng.gen_range(0..=cap) {
                e[rng.gen_range(0..self.s)] += 1;
            }
            out.poly.add_term(Monomial(e), &Self::random_coeff(rng));
        }
        out
    }
}

impl Algebra for AlgebraHs {
    type Elem = HsElement;

    fn field(&self) -> Field {
        Field::Rational
    }

    fn zero(&self) -> HsElement {
        HsElement::zero()
    }

    fn is_zero(&self, a: &HsElement) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &HsElement, b: &HsElement) -> HsElement {
        a.add(b)
    }

    fn scale(&self, a: &HsElement, c: &Scalar) -> HsElement {
        a.scale(c)
    }

    fn mul(&self, u: &HsElement, v: &HsElement) -> HsElement {
        let mut out = HsElement::zero();
        let mut c = Scalar::zero(Field::Rational);
        for (i, x) in &u.a {
            c = &c + &(x * &v.b.coefficient(i));
        }
        for (i, x) in &u.b {
            c = &c - &(x * &v.a.coefficient(i));
        }
        out.c = c;
        for (m, x) in &u.poly {
            for (&i, y) in &v.a {
                let k = (i - 1) as usize;
                if m.0[k] > 0 {
                    let mut d = m.clone();
                    d.0[k] -= 1;
                    out.poly.add_term(d, &(&(x * y) * &Scalar::from_i64(Field::Rational, m.0[k] as i64)));
                }
            }
            for (&i, y) in &v.b {
                let mut d = m.clone();
                d.0[(i - 1) as usize] += 1;
                out.poly.add_term(d, &(x * y));
            }
            if !v.c.is_zero() {
                out.poly.add_term(m.clone(), &-(x * &v.c));
            }
        }
        out
    }
}

fn describe(parts: &[&HsElement], value: &HsElement) -> String {
    let args: Vec<String> = parts.iter().map(|e| format!("({e})")).collect();
    format!("{} gives {value}", args.join(", "))
}

/// `x1(x2(x3 x4))` on every 4-tuple from [`AlgebraHs::small_basis`] and on
/// `samples` seeded random 4-tuples.
pub fn verify_identity3(s: usize, cap: u32, samples: usize, seed: u64) -> Result<Report> {
    let alg = AlgebraHs::new(s)?;
    let owned = alg.small_basis(cap);
    let basis = &owned;
    let m = &|x: &HsElement, y: &HsElement| Algebra::mul(&alg, x, y);
    let failures: Vec<String> = basis
        .par_iter()
        .flat_map_iter(move |x3| {
            basis.iter().flat_map(move |x4| {
                let p34 = m(x3, x4);
                basis.iter().flat_map(move |x2| {
                    let p234 = m(x2, &p34);
                    basis.iter().filter_map(move |x1| {
                        let v = m(x1, &p234);
                        (!v.is_zero()).then(|| describe(&[x1, x2, x3, x4], &v))
                    })
                })
            })
        })
        .collect();
    let mut report = Report::new("identity3", format!("s={s} cap={cap}"), seed, basis.len().pow(4), samples);
    report.absorb(failures);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let xs: Vec<HsElement> = (0..4).map(|_| alg.random_element(&mut rng, cap)).collect();
        let v = m(&xs[0], &m(&xs[1], &m(&xs[2], &xs[3])));
        if !v.is_zero() {
            report.fail(describe(&xs.iter().collect::<Vec<_>>(), &v));
        }
    }
    Ok(report)
}

/// `(xy)z - (xz)y - x(yz)` on all basis triples (monomials of degree at
/// most 3) and on `samples` seeded random triples.
pub fn verify_leibniz(s: usize, samples: usize, seed: u64) -> Result<Report> {
    const CAP: u32 = 3;
    let alg = AlgebraHs::new(s)?;
    let owned = alg.small_basis(CAP);
    let basis = &owned;
    let m = |x: &HsElement, y: &HsElement| Algebra::mul(&alg, x, y);
    let leibniz = &|x: &HsElement, y: &HsElement, z: &HsElement| {
        let lhs = m(&m(x, y), z);
        Algebra::sub(&alg, &Algebra::sub(&alg, &lhs, &m(&m(x, z), y)), &m(x, &m(y, z)))
    };
    let mut report = Report::new("leibniz", format!("s={s}"), seed, basis.len().pow(3), samples);
    let failures: Vec<String> = basis
        .par_iter()
        .flat_map_iter(move |x| {
            basis.iter().flat_map(move |y| {
                basis.iter().filter_map(move |z| {
                    let v = leibniz(x, y, z);
                    (!v.is_zero()).then(|| describe(&[x, y, z], &v))
                })
            })
        })
        .collect();
    report.absorb(failures);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let xs: Vec<HsElement> = (0..3).map(|_| alg.random_element(&mut rng, CAP)).collect();
        let v = leibniz(&xs[0], &xs[1], &xs[2]);
        if !v.is_zero() {
            report.fail(describe(&xs.iter().collect::<Vec<_>>(), &v));
        }
    }
    Ok(report)
}

/// Value of `g` under `subst`, computed segment by segment.
pub fn evaluate(alg: &AlgebraHs, g: &GTemplate, subst: &Binding<HsElement>) -> Result<HsElement> {
    g.evaluate(alg, subst)
}

/// Smallest `s` that [`build_substitution`] accepts for `λ`.
pub fn min_s(lambda: &Partition) -> usize {
    lambda.parts().len().div_ceil(2) + 1
}

/// The substitution `S_l`: in every column the cell in position `2t-1` gets
/// `a_t` and position `2t` gets `b_t`, and `f` is added to the bottom cell
/// of each column of height `d_{k-l+1}`.
pub fn build_substitution(alg: &AlgebraHs, lambda: &Partition, l: usize, f: &Poly) -> Result<Binding<HsElement>> {
    let k = lambda.corners();
    if l == 0 || l > k {
        return Err(Error::Contract(format!("l = {l} is outside 1..={k} for ({lambda})")));
    }
    if alg.s() < min_s(lambda) {
        return Err(Error::Contract(format!("s = {} is too small for ({lambda}); need {}", alg.s(), min_s(lambda))));
    }
    let carrier = HsElement::from(f.clone());
    alg.check(&carrier)?;
    let target = lambda.d_vector()[k - l];
    let mut out = BTreeMap::new();
    let mut next = 1u32;
    for h in lambda.column_heights() {
        for pos in 1..=h as u32 {
            let t = pos.div_ceil(2);
            let mut v = if pos % 2 == 1 { alg.a(t) } else { alg.b(t) };
            if pos as usize == h && h == target {
                v = v.add(&carrier);
            }
            out.insert(Symbol::x(next), v);
            next += 1;
        }
    }
    Ok(out)
}

/// `f = Π t_i^{e_i}` where `e_i` counts the letters `a_i` left unpaired when
/// `g_l` is evaluated under `S_l`: the first column loses its bottom cell to
/// `f`, and a column of odd remaining length `m` leaves `a_{(m+1)/2}`.
pub fn carrier_for(lambda: &Partition, l: usize, s: usize) -> Poly {
    let mut e = vec![0u32; s];
    if let Ok(g) = build_g(lambda, l) {
        for (i, seg) in g.segments().iter().enumerate() {
            let m = if i == 0 { seg.len() - 1 } else { seg.len() };
            if m % 2 == 1 {
                e[m.div_ceil(2) - 1] += 1;
            }
        }
    }
    monomial_poly(e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Triangular,
    Nontriangular,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Triangular => "triangular",
            Verdict::Nontriangular => "nontriangular",
        })
    }
}

/// `table[l-1][r-1] = S_l(g_r)` for `1 <= l, r <= k`.
#[derive(Debug, Clone, Serialize)]
pub struct IndependenceReport {
    pub lambda: Partition,
    pub k: usize,
    pub table: Vec<Vec<String>>,
    pub verdict: Verdict,
    pub diagonal: Vec<String>,
    #[serde(skip)]
    pub values: Vec<Vec<HsElement>>,
}

impl fmt::Display for IndependenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lambda=({}) k={} verdict={}", self.lambda, self.k, self.verdict)?;
        for (l, row) in self.table.iter().enumerate() {
            for (r, cell) in row.iter().enumerate() {
                writeln!(f, "S_{}(g_{}) = {cell}", l + 1, r + 1)?;
            }
        }
        Ok(())
    }
}

/// Evaluates every `g_r(λ)` under every `S_l` with `f` from [`carrier_for`].
/// The `g`'s are certified independent when the table is triangular with
/// a nonzero diagonal.
pub fn independence(lambda: &Partition) -> Result<IndependenceReport> {
    let k = lambda.corners();
    let alg = AlgebraHs::new(min_s(lambda))?;
    let gs: Vec<GTemplate> = (1..=k).map(|r| build_g(lambda, r)).collect::<Result<_>>()?;
    let substs: Vec<Binding<HsElement>> = (1..=k)
        .map(|l| build_substitution(&alg, lambda, l, &carrier_for(lambda, l, alg.s())))
        .collect::<Result<_>>()?;
    let cells: Vec<(usize, usize)> = (0..k).flat_map(|l| (0..k).map(move |r| (l, r))).collect();
    let flat: Vec<HsElement> =
        cells.par_iter().map(|&(l, r)| gs[r].evaluate(&alg, &substs[l])).collect::<Result<_>>()?;
    let values: Vec<Vec<HsElement>> = flat.chunks(k).map(|c| c.to_vec()).collect();
    let triangular = (0..k).all(|l| !values[l][l].is_zero() && (l + 1..k).all(|r| values[l][r].is_zero()));
    Ok(IndependenceReport {
        lambda: lambda.clone(),
        k,
        table: values.iter().map(|row| row.iter().map(|v| v.to_string()).collect()).collect(),
        verdict: if triangular { Verdict::Triangular } else { Verdict::Nontriangular },
        diagonal: (0..k).map(|l| values[l][l].to_string()).collect(),
        values,
    })
}

/// Closed-form prediction for `S_1(g_1)`: a coefficient times the letters
/// `a_i^{e_i}` applied to `f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VlClosedForm {
    pub coefficient: Scalar,
    /// `(i, e_i)` with `e_i > 0`, in the order the letters are written.
    pub letters: Vec<(u32, u32)>,
}

impl VlClosedForm {
    /// The prediction for a given `f`.
    pub fn apply(&self, f: &Poly) -> Poly {
        let mut out = f.clone();
        for &(i, e) in &self.letters {
            for _ in 0..e {
                let mut next = Poly::zero(Field::Rational);
                for (m, c) in &out {
                    let k = (i - 1) as usize;
                    if m.0.get(k).copied().unwrap_or(0) > 0 {
                        let mut d = m.clone();
                        d.0[k] -= 1;
                        next.add_term(d, &(c * &Scalar::from_i64(Field::Rational, m.0[k] as i64)));
                    }
                }
                out = next;
            }
        }
        out.scaled(&self.coefficient)
    }
}

impl fmt::Display for VlClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} f", self.coefficient)?;
        for &(i, e) in &self.letters {
            if e == 1 {
                write!(f, " a{i}")?;
            } else {
                write!(f, " a{i}^{e}")?;
            }
        }
        Ok(())
    }
}

/// The closed form `(-1)^{d_k-1} / 2^r · f a_{p_k+ε_k}^{ε_k(n_k-2)+1}
/// a_{p_{k-1}+1}^{ε_{k-1}(n_{k-1}-n_k)} .. a_{p_1+1}^{ε_1(n_1-n_2)}` with
/// `d_j = 2 p_j + ε_j` and `r = Σ_{j<k} p_j (n_j - n_{j+1}) + p_k n_k + ε_k - 1`.
pub fn closed_form_vl(lambda: &Partition) -> VlClosedForm {
    let parts = lambda.distinct_parts();
    let d = lambda.d_vector();
    let k = parts.len();
    let n = |j: usize| parts[j].0 as i64;
    let p = |j: usize| (d[j] / 2) as i64;
    let eps = |j: usize| (d[j] % 2) as i64;
    let mut r: i64 = (0..k - 1).map(|j| p(j) * (n(j) - n(j + 1))).sum();
    r += p(k - 1) * n(k - 1) + eps(k - 1) - 1;
    let sign = if (d[k - 1] - 1).is_multiple_of(2) { 1 } else { -1 };
    let denom = BigInt::from(2).pow(r.unsigned_abs() as u32);
    let power = if r >= 0 {
        num_rational::BigRational::new(BigInt::one(), denom)
    } else {
        num_rational::BigRational::from_integer(denom)
    };
    let coefficient = Scalar::Rational(power * BigInt::from(sign));
    let mut letters = Vec::new();
    let top = eps(k - 1) * (n(k - 1) - 2) + 1;
    if top > 0 {
        letters.push(((p(k - 1) + eps(k - 1)) as u32, top as u32));
    }
    for j in (0..k - 1).rev() {
        let e = eps(j) * (n(j) - n(j + 1));
        if e > 0 {
            letters.push(((p(j) + 1) as u32, e as u32));
        }
    }
    debug_assert!(!coefficient.as_rational().unwrap().is_zero());
    VlClosedForm { coefficient, letters }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::eval_alternated_naive;
    use crate::young::partitions_of;
    use proptest::prelude::*;

    fn lam(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn product_examples() {
        let h = AlgebraHs::new(2).unwrap();
        assert_eq!(h.hs_mul(&h.a(1), &h.b(1)).unwrap(), h.c());
        assert_eq!(h.hs_mul(&h.t(&[2]), &h.a(1)).unwrap().to_string(), "2 t1");
        assert_eq!(h.hs_mul(&h.b(1), &h.a(1)).unwrap().to_string(), "-c");
        assert_eq!(h.hs_mul(&h.t(&[1, 1]), &h.b(2)).unwrap().to_string(), "t1 t2^2");
        assert_eq!(h.hs_mul(&h.t(&[1]), &h.c()).unwrap().to_string(), "-t1");
        assert!(h.hs_mul(&h.a(1), &h.t(&[1])).unwrap().is_zero());
        assert!(h.hs_mul(&AlgebraHs::new(3).unwrap().a(3), &h.a(1)).is_err());
    }

    #[test]
    fn heisenberg_part_has_class_two() {
        let h = AlgebraHs::new(2).unwrap();
        let lie: Vec<HsElement> = h.small_basis(0).into_iter().filter(|e| e.is_lie()).collect();
        for u in &lie {
            for v in &lie {
                let uv = Algebra::mul(&h, u, v);
                assert_eq!(uv, Algebra::mul(&h, v, u).scale(&Scalar::from_i64(Field::Rational, -1)));
                for w in &lie {
                    assert!(Algebra::mul(&h, &uv, w).is_zero());
                }
            }
        }
    }

    #[test]
    fn identity_checks_pass() {
        let r = verify_identity3(2, 2, 100, 3).unwrap();
        assert!(r.passed, "{r}");
        assert_eq!(r.exhaustive_cases, 11usize.pow(4));
        let r = verify_leibniz(2, 100, 3).unwrap();
        assert!(r.passed, "{r}");
    }

    #[test]
    fn leibniz_examples() {
        let h = AlgebraHs::new(2).unwrap();
        let m = |x: &HsElement, y: &HsElement| Algebra::mul(&h, x, y);
        let check = |x: &HsElement, y: &HsElement, z: &HsElement| m(&m(x, y), z) == m(&m(x, z), y).add(&m(x, &m(y, z)));
        assert!(check(&h.a(1), &h.b(1), &h.a(1)));
        let f = h.t(&[2, 1]);
        for i in 1..=2 {
            assert!(check(&f, &h.a(i), &h.b(i)));
            assert!(check(&f, &h.b(i), &h.a(i)));
        }
    }

    #[test]
    fn substitution_examples() {
        let h = AlgebraHs::new(4).unwrap();
        let l = lam("4,4,4,3,2,2");
        assert_eq!(l.column_heights(), [6, 6, 4, 3]);
        let f = monomial_poly(vec![0, 1, 1, 0]);
        let sub = build_substitution(&h, &l, 1, &f).unwrap();
        let show = |i: u32| sub[&Symbol::x(i)].to_string();
        let first: Vec<String> = (1..=6).map(show).collect();
        assert_eq!(first, ["a1", "b1", "a2", "b2", "a3", "t2 t3 + b3"]);
        assert_eq!(show(12), "t2 t3 + b3");
        let last: Vec<String> = (17..=19).map(show).collect();
        assert_eq!(last, ["a1", "b1", "a2"]);
        assert!(build_substitution(&AlgebraHs::new(3).unwrap(), &l, 1, &monomial_poly(vec![0; 3])).is_err());
        let h = AlgebraHs::new(2).unwrap();
        let sub = build_substitution(&h, &lam("2,1"), 1, &monomial_poly(vec![1, 0])).unwrap();
        let all: Vec<String> = (1..=3).map(|i| sub[&Symbol::x(i)].to_string()).collect();
        assert_eq!(all, ["a1", "t1 + b1", "a1"]);
    }

    /// Sum over the orderings of one segment at a time, applied to a running
    /// value; exponential in the segment length but independent of the
    /// subset recursion.
    fn per_segment_sum(h: &AlgebraHs, segments: &[Vec<HsElement>]) -> HsElement {
        let mut state: Option<HsElement> = None;
        for seg in segments {
            let mut next = HsElement::zero();
            for p in crate::perm::Permutation::all(seg.len()) {
                let mut v = state.clone();
                for j in 0..seg.len() {
                    let y = &seg[p.apply(j)];
                    v = Some(match v {
                        None => y.clone(),
                        Some(v) => Algebra::mul(h, &v, y),
                    });
                }
                next = next.add(&v.unwrap().scale(&Scalar::from_i64(Field::Rational, p.sign())));
            }
            state = Some(next);
        }
        state.unwrap_or_else(HsElement::zero)
    }

    /// Columns 6, 6, 4, 3 with `f = t2 t3`. Each column acts on the
    /// polynomial by a signed count of shuffles of its commuting `a_i, b_i`
    /// pairs, each pair contributing -1: `(-2)(-6)(2)(-1) ∂_3 ∂_2 f = -24`.
    #[test]
    fn column_heights_6_6_4_3_value() {
        let l = lam("4,4,4,3,2,2");
        let h = AlgebraHs::new(4).unwrap();
        let sub = build_substitution(&h, &l, 1, &monomial_poly(vec![0, 1, 1, 0])).unwrap();
        let g = build_g(&l, 1).unwrap();
        assert_eq!(g.segment_sizes(), [6, 6, 4, 3]);
        let v = evaluate(&h, &g, &sub).unwrap();
        let values: Vec<Vec<HsElement>> =
            g.segments().iter().map(|s| s.iter().map(|x| sub[x].clone()).collect()).collect();
        assert_eq!(v, per_segment_sum(&h, &values));
        assert_eq!(v.to_string(), "-24");
        let cf = closed_form_vl(&l);
        assert_eq!(cf.to_string(), "-1/256 f a3 a2");
        assert_eq!(cf.apply(&monomial_poly(vec![0, 1, 1, 0])).to_string(), "-1/256");
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed_form_vl(&lam("1")).to_string(), "1 f");
        assert_eq!(closed_form_vl(&lam("1,1")).to_string(), "-1 f a1");
        assert_eq!(closed_form_vl(&lam("3,1")).letters, [(1, 1), (1, 2)]);
        assert_eq!(carrier_for(&lam("3,1"), 1, 2), monomial_poly(vec![3, 0]));
        assert!(closed_form_vl(&lam("6,6,4,4,1")).letters.is_empty());
    }

    #[test]
    fn independence_examples() {
        let r = independence(&lam("2,1")).unwrap();
        assert_eq!((r.k, r.verdict), (2, Verdict::Triangular));
        let r = independence(&lam("5")).unwrap();
        assert_eq!((r.k, r.verdict), (1, Verdict::Triangular));
        assert!(!r.values[0][0].is_zero());
        let r = independence(&lam("6,6,4,4,1")).unwrap();
        assert_eq!((r.k, r.verdict), (3, Verdict::Triangular));
    }

    #[test]
    fn independence_report_json() {
        let r = independence(&lam("2,1")).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(
            v,
            serde_json::json!({
                "lambda": "2,1",
                "k": 2,
                "table": [["-2", "0"], ["0", "-1"]],
                "verdict": "triangular",
                "diagonal": ["-2", "-1"],
            })
        );
    }

    #[test]
    fn independence_holds_for_all_small_partitions() {
        for n in 1..=8 {
            for p in partitions_of(n).unwrap() {
                assert_eq!(independence(&p).unwrap().verdict, Verdict::Triangular, "{p}");
            }
        }
    }

    #[test]
    fn segmentwise_evaluation_matches_full_expansion() {
        for n in 1..=6 {
            for p in partitions_of(n).unwrap() {
                let h = AlgebraHs::new(min_s(&p)).unwrap();
                for l in 1..=p.corners() {
                    let sub = build_substitution(&h, &p, l, &carrier_for(&p, l, h.s())).unwrap();
                    for r in 1..=p.corners() {
                        let g = build_g(&p, r).unwrap();
                        let values: Vec<Vec<HsElement>> =
                            g.segments().iter().map(|s| s.iter().map(|x| sub[x].clone()).collect()).collect();
                        assert_eq!(evaluate(&h, &g, &sub).unwrap(), eval_alternated_naive(&h, &values), "{p} {l} {r}");
                    }
                }
            }
        }
    }

    #[test]
    fn repeated_value_in_a_segment_gives_zero() {
        let h = AlgebraHs::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in partitions_of(6).unwrap() {
            let g = build_g(&p, 1).unwrap();
            for (si, seg) in g.segments().iter().enumerate() {
                if seg.len() < 2 {
                    continue;
                }
                let mut sub: Binding<HsElement> = g.variables().map(|x| (x, h.random_element(&mut rng, 2))).collect();
                sub.insert(seg[1], sub[&seg[0]].clone());
                assert!(evaluate(&h, &g, &sub).unwrap().is_zero(), "{p} segment {si}");
            }
        }
    }

    fn arb_element() -> impl Strategy<Value = HsElement> {
        any::<u64>().prop_map(|s| AlgebraHs::new(2).unwrap().random_element(&mut ChaCha8Rng::seed_from_u64(s), 3))
    }

    proptest! {
        #[test]
        fn product_is_bilinear(a in arb_element(), b in arb_element(), c in arb_element(), k in -3i64..=3) {
            let h = AlgebraHs::new(2).unwrap();
            let k = Scalar::from_i64(Field::Rational, k);
            let lhs = Algebra::mul(&h, &a.add(&b.scale(&k)), &c);
            let rhs = Algebra::mul(&h, &a, &c).add(&Algebra::mul(&h, &b, &c).scale(&k));
            prop_assert_eq!(lhs, rhs);
            let lhs = Algebra::mul(&h, &c, &a.add(&b.scale(&k)));
            let rhs = Algebra::mul(&h, &c, &a).add(&Algebra::mul(&h, &c, &b).scale(&k));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn transposing_two_values_in_a_segment_negates(seed in any::<u64>(), which in 0usize..4) {
            let h = AlgebraHs::new(3).unwrap();
            let p: Partition = "3,2,1".parse().unwrap();
            let g = build_g(&p, 1).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sub: Binding<HsElement> = g.variables().map(|x| (x, h.random_element(&mut rng, 2))).collect();
            let seg = &g.segments()[which.min(1)];
            let mut swapped = sub.clone();
            swapped.insert(seg[0], sub[&seg[1]].clone());
            swapped.insert(seg[1], sub[&seg[0]].clone());
            let v = evaluate(&h, &g, &sub).unwrap();
            prop_assert_eq!(evaluate(&h, &g, &swapped).unwrap(), v.scale(&Scalar::from_i64(Field::Rational, -1)));
        }
    }
}
