//! Left-normed normal forms of the free Leibniz algebra.
//!
//! Every product is rewritten with `a(bc) -> (ab)c - (ac)b` until only
//! left-normed words `(((g1 g2) g3) ... gn)` remain. Those words are used as
//! a basis. Also here: the place-permutation action of `S_n` on multilinear
//! elements, linearization, and alternation over disjoint variable groups.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::expr::{write_lincomb, Expression, RawTerm, Symbol};
use crate::lincomb::LinComb;
use crate::perm::Permutation;
use crate::scalar::{Field, Scalar};

/// A left-normed monomial, written without brackets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LeftWord(Vec<Symbol>);

impl LeftWord {
    pub fn new(symbols: Vec<Symbol>) -> Result<LeftWord> {
        if symbols.is_empty() {
            return Err(Error::Contract("a left-normed word needs at least one generator".into()));
        }
        Ok(LeftWord(symbols))
    }

    /// `x_{i1} x_{i2} ... x_{in}` from 1-based indices.
    pub fn of_x(indices: &[u32]) -> LeftWord {
        LeftWord::new(indices.iter().map(|&i| Symbol::x(i)).collect()).expect("empty word")
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_raw(&self) -> RawTerm {
        RawTerm::left_normed(&self.0)
    }
}

impl fmt::Display for LeftWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

pub type NormalForm = LinComb<LeftWord>;

impl fmt::Display for LinComb<LeftWord> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_lincomb(f, self, |f, w| write!(f, "{w}"))
    }
}

/// Back to a plain expression of left-normed terms.
pub fn to_expression(nf: &NormalForm) -> Expression {
    nf.map_keys(|w| w.to_raw())
}

/// Signed rearrangements `π` with `w · (v1 ... vk) = Σ sign · w v_{π(1)} ... v_{π(k)}`.
pub(crate) type Expansion = Arc<Vec<(i64, Vec<usize>)>>;

/// Expansion of right multiplication by a left-normed word of length `k`.
///
/// From `w(u y) = (w u) y - (w y) u`: the table for `k` appends `k-1` to
/// every entry of the table for `k-1`, and separately prepends it with the
/// sign flipped. It has `2^(k-1)` entries.
pub(crate) fn right_expansion(k: usize) -> Expansion {
    static TABLES: OnceLock<RwLock<Vec<Expansion>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| RwLock::new(vec![Arc::new(Vec::new()), Arc::new(vec![(1, vec![0])])]));
    if let Some(t) = tables.read().unwrap().get(k) {
        return t.clone();
    }
    let mut guard = tables.write().unwrap();
    while guard.len() <= k {
        let j = guard.len();
        let prev = guard[j - 1].clone();
        let mut next = Vec::with_capacity(prev.len() * 2);
        for (s, p) in prev.iter() {
            let mut q = p.clone();
            q.push(j - 1);
            next.push((*s, q));
        }
        for (s, p) in prev.iter() {
            let mut q = Vec::with_capacity(j);
            q.push(j - 1);
            q.extend_from_slice(p);
            next.push((-*s, q));
        }
        guard.push(Arc::new(next));
    }
    guard[k].clone()
}

/// Product of two normal forms, again in normal form.
pub fn nf_mul(a: &NormalForm, b: &NormalForm) -> NormalForm {
    let mut out = NormalForm::zero(a.field());
    let minus = -Scalar::one(a.field());
    for (wb, cb) in b {
        let table = right_expansion(wb.len());
        for (wa, ca) in a {
            let c = ca * cb;
            let nc = &c * &minus;
            for (sign, perm) in table.iter() {
                let mut word = Vec::with_capacity(wa.len() + wb.len());
                word.extend_from_slice(&wa.0);
                word.extend(perm.iter().map(|&i| wb.0[i]));
                out.add_term(LeftWord(word), if *sign > 0 { &c } else { &nc });
            }
        }
    }
    out
}

/// Innermost-first normalizer with memoization on subterms.
pub struct Normalizer {
    field: Field,
    memo: HashMap<RawTerm, NormalForm>,
}

impl Normalizer {
    pub fn new(field: Field) -> Normalizer {
        Normalizer { field, memo: HashMap::new() }
    }

    pub fn term(&mut self, t: &RawTerm) -> NormalForm {
        match t {
            RawTerm::Leaf(s) => NormalForm::basis(self.field, LeftWord(vec![*s])),
            RawTerm::Node(l, r) => {
                if let Some(nf) = self.memo.get(t) {
                    return nf.clone();
                }
                let nf = nf_mul(&self.term(l), &self.term(r));
                self.memo.insert(t.clone(), nf.clone());
                nf
            }
        }
    }

    pub fn expression(&mut self, e: &Expression) -> NormalForm {
        let mut out = NormalForm::zero(e.field());
        for (t, c) in e {
            out.add_scaled(&self.term(t), c);
        }
        out
    }
}

/// Left-normed normal form of `e`.
pub fn normalize(e: &Expression) -> NormalForm {
    Normalizer::new(e.field()).expression(e)
}

/// Normal form computed by rewriting the outermost redex first, working on
/// raw terms throughout. Shares no code with [`normalize`].
pub fn normalize_outermost(e: &Expression) -> NormalForm {
    fn rewrite(t: &RawTerm) -> Option<[RawTerm; 2]> {
        let RawTerm::Node(a, r) = t else { return None };
        if let RawTerm::Node(b, c) = &**r {
            return Some([
                RawTerm::node(RawTerm::node((**a).clone(), (**b).clone()), (**c).clone()),
                RawTerm::node(RawTerm::node((**a).clone(), (**c).clone()), (**b).clone()),
            ]);
        }
        let [p, q] = rewrite(a)?;
        Some([RawTerm::node(p, (**r).clone()), RawTerm::node(q, (**r).clone())])
    }

    let field = e.field();
    let minus = -Scalar::one(field);
    let mut done = NormalForm::zero(field);
    let mut pending = e.clone();
    while let Some((t, c)) = pending.iter().next().map(|(t, c)| (t.clone(), c.clone())) {
        pending.add_term(t.clone(), &-&c);
        match rewrite(&t) {
            None => done.add_term(LeftWord(t.leaves()), &c),
            Some([p, q]) => {
                pending.add_term(p, &c);
                pending.add_term(q, &(&c * &minus));
            }
        }
    }
    done
}

/// Checks that every word is a permutation of `x1..xn` and returns `n`.
pub fn multilinear_degree(nf: &NormalForm) -> Result<usize> {
    let mut n = None;
    for w in nf.keys() {
        let k = w.len();
        if *n.get_or_insert(k) != k {
            return Err(Error::Contract("words of different degrees".into()));
        }
        let mut seen = vec![false; k];
        for s in w.symbols() {
            let ok =
                s.letter() == 'x' && s.copy().is_none() && matches!(s.index(), Some(i) if i >= 1 && (i as usize) <= k);
            if !ok || std::mem::replace(&mut seen[s.index().unwrap() as usize - 1], true) {
                return Err(Error::Contract(format!("{w} is not a multilinear word on x1..x{k}")));
            }
        }
    }
    Ok(n.unwrap_or(0))
}

/// The left action of `S_n` on multilinear elements: `x_i ↦ x_{σ(i)}`.
pub fn act(sigma: &Permutation, nf: &NormalForm) -> Result<NormalForm> {
    let n = multilinear_degree(nf)?;
    if !nf.is_zero() && n != sigma.len() {
        return Err(Error::Contract(format!("permutation of {} points acting on degree {n}", sigma.len())));
    }
    Ok(nf.map_keys(|w| {
        LeftWord(w.0.iter().map(|s| Symbol::x(sigma.apply(s.index().unwrap() as usize - 1) as u32 + 1)).collect())
    }))
}

/// Full linearization of `variable`, which must occur exactly `arity`
/// times in every term. Occurrences are replaced by the copies
/// `variable#1 .. variable#arity`, summed over all assignments of copies to
/// occurrences.
pub fn linearize(e: &Expression, variable: Symbol, arity: usize) -> Result<Expression> {
    let perms = Permutation::all(arity);
    let mut out = Expression::zero(e.field());
    for (t, c) in e {
        let count = t.leaves().iter().filter(|s| **s == variable).count();
        if count != arity {
            return Err(Error::Contract(format!("{variable} occurs {count} times in {t}, expected {arity}")));
        }
        for p in &perms {
            let mut slot = 0;
            let renamed = t.rename(&mut |s| {
                if s == variable {
                    slot += 1;
                    variable.with_copy(p.apply(slot - 1) as u32 + 1)
                } else {
                    s
                }
            });
            out.add_term(renamed, c);
        }
    }
    Ok(out)
}

/// Number of occurrences of `variable` in each term, if it is the same
/// across terms.
pub fn multiplicity(e: &Expression, variable: Symbol) -> Option<usize> {
    let mut counts = e.keys().map(|t| t.leaves().iter().filter(|s| **s == variable).count());
    let first = counts.next()?;
    counts.all(|c| c == first).then_some(first)
}

/// Signed sum over independent permutations inside each group:
/// `Σ sgn(π_1)...sgn(π_r) · nf[g_j ↦ g_{π(j)}]`.
pub fn alternate(nf: &NormalForm, groups: &[Vec<Symbol>]) -> Result<NormalForm> {
    let mut all = BTreeSet::new();
    for g in groups {
        for s in g {
            if !all.insert(*s) {
                return Err(Error::Contract(format!("{s} appears in more than one group")));
            }
        }
    }
    for w in nf.keys() {
        for s in &all {
            if w.symbols().iter().filter(|t| *t == s).count() != 1 {
                return Err(Error::Contract(format!("{s} does not occur exactly once in {w}")));
            }
        }
    }
    let field = nf.field();
    let perm_sets: Vec<Vec<Permutation>> = groups.iter().map(|g| Permutation::all(g.len())).collect();
    let mut out = NormalForm::zero(field);
    let mut choice = vec![0usize; groups.len()];
    loop {
        let mut rename = BTreeMap::new();
        let mut sign = 1;
        for (gi, g) in groups.iter().enumerate() {
            let p = &perm_sets[gi][choice[gi]];
            sign *= p.sign();
            for (j, s) in g.iter().enumerate() {
                rename.insert(*s, g[p.apply(j)]);
            }
        }
        let coeff = Scalar::from_i64(field, sign);
        for (w, c) in nf {
            let word = LeftWord(w.0.iter().map(|s| *rename.get(s).unwrap_or(s)).collect());
            out.add_term(word, &(c * &coeff));
        }
        // odometer over the cartesian product of the groups' permutations
        let mut i = 0;
        loop {
            if i == groups.len() {
                return Ok(out);
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
