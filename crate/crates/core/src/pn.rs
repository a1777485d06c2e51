//! The multilinear components `P_n` of a variety of Leibniz algebras.
//!
//! `P_n` of the free algebra has the basis of all `n!` left-normed
//! permutation words on `x1..xn`. The multilinear relations of a variety at
//! degree `n` are spanned by the normal forms of products containing one
//! substituted identity; `dim P_n` is `n!` minus their rank.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expr::{Expression, Symbol};
use crate::linalg::{certified_rank, fraction_free_rank, rank_mod, SparseRow};
use crate::normal::{multilinear_degree, normalize, right_expansion, LeftWord, NormalForm};
use crate::perm::next_permutation;
use crate::scalar::{Field, Scalar, ScalarError};

/// A multilinear element of degree `n`: every word is a permutation of `x1..xn`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PnVector {
    n: usize,
    coords: NormalForm,
}

impl PnVector {
    pub fn new(n: usize, coords: NormalForm) -> Result<PnVector> {
        let d = multilinear_degree(&coords)?;
        if !coords.is_zero() && d != n {
            return Err(Error::Contract(format!("element of degree {d} is not in P_{n}")));
        }
        Ok(PnVector { n, coords })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &NormalForm {
        &self.coords
    }
}

/// All permutation words on `x1..xn` in lexicographic order.
pub fn free_basis(n: usize) -> Result<Vec<LeftWord>> {
    if n == 0 {
        return Err(Error::Contract("P_0 has no words".into()));
    }
    let mut cur: Vec<u32> = (1..=n as u32).collect();
    let mut out = Vec::new();
    loop {
        out.push(LeftWord::of_x(&cur));
        if !next_permutation(&mut cur) {
            return Ok(out);
        }
    }
}

/// Lexicographic index of a permutation word of `0..n`.
fn word_rank(w: &[u8]) -> usize {
    let n = w.len();
    let mut rank = 0;
    for i in 0..n {
        let smaller = w[i + 1..].iter().filter(|&&v| v < w[i]).count();
        rank = rank * (n - i) + smaller;
    }
    rank
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// A linear combination of words on small variable ids with integer
/// coefficients, sorted by word, without zero entries.
type Comb = Vec<(Vec<u8>, i128)>;

/// A multilinear identity with integer coefficients; a term lists the
/// identity's variables (by position) in the order of its left-normed word.
#[derive(Debug, Clone)]
struct Identity {
    arity: usize,
    terms: Vec<(Vec<usize>, i128)>,
}

fn prepare(e: &Expression) -> Result<Option<Identity>> {
    let mut vars: Option<BTreeSet<Symbol>> = None;
    for t in e.keys() {
        let leaves = t.leaves();
        let set: BTreeSet<Symbol> = leaves.iter().copied().collect();
        if set.len() != leaves.len() || vars.get_or_insert_with(|| set.clone()) != &set {
            return Err(Error::Contract(format!("identity {e} is not multilinear; linearize it first")));
        }
    }
    let Some(vars) = vars else { return Ok(None) };
    let vars: Vec<Symbol> = vars.into_iter().collect();
    let nf = normalize(e);
    if nf.is_zero() {
        return Ok(None);
    }
    let scale = match nf.field() {
        Field::Rational => {
            nf.iter().fold(BigInt::from(1), |l, (_, c)| l.lcm(c.as_rational().expect("rational").denom()))
        }
        Field::Prime(_) => BigInt::from(1),
    };
    let terms = nf
        .iter()
        .map(|(w, c)| {
            let seq = w.symbols().iter().map(|s| vars.binary_search(s).expect("known variable")).collect();
            let v = match c {
                Scalar::Rational(q) => (q * &scale).to_integer().to_i128(),
                Scalar::Mod { value, .. } => Some(*value as i128),
            };
            v.map(|v| (seq, v)).ok_or_else(|| Error::Contract(format!("coefficients of {e} are too large")))
        })
        .collect::<Result<_>>()?;
    Ok(Some(Identity { arity: vars.len(), terms }))
}

fn collect(acc: HashMap<Vec<u8>, i128>) -> Comb {
    let mut out: Comb = acc.into_iter().filter(|e| e.1 != 0).collect();
    out.sort_unstable();
    out
}

/// Adds `coef · (prefix) · (word)` in normal form to `acc`.
fn add_product(acc: &mut HashMap<Vec<u8>, i128>, prefix: &[u8], word: &[u8], coef: i128) {
    for (sign, perm) in right_expansion(word.len()).iter() {
        let mut w = Vec::with_capacity(prefix.len() + word.len());
        w.extend_from_slice(prefix);
        w.extend(perm.iter().map(|&i| word[i]));
        *acc.entry(w).or_insert(0) += *sign as i128 * coef;
    }
}

/// Scales to a canonical representative of its line: primitive with a
/// positive leading coefficient over `Q`, leading coefficient 1 over `Z_p`.
fn canonical(mut c: Comb, field: Field) -> Comb {
    match field {
        Field::Rational => {
            let g = c.iter().fold(0i128, |g, e| g.gcd(&e.1));
            let g = if c.first().is_some_and(|e| e.1 < 0) { -g } else { g };
            if g != 0 {
                c.iter_mut().for_each(|e| e.1 /= g);
            }
        }
        Field::Prime(p) => {
            let p = p as i128;
            c.iter_mut().for_each(|e| e.1 = e.1.rem_euclid(p));
            c.retain(|e| e.1 != 0);
            if let Some(first) = c.first() {
                let inv = crate::scalar::inv_mod(first.1 as u64, p as u64).expect("unit") as i128;
                c.iter_mut().for_each(|e| e.1 = crate::scalar::mul_mod(e.1 as u64, inv as u64, p as u64) as i128);
            }
        }
    }
    c
}

fn dedup(mut rows: Vec<Comb>, field: Field) -> Vec<Comb> {
    rows = rows.into_iter().map(|r| canonical(r, field)).filter(|r| !r.is_empty()).collect();
    rows.sort_unstable();
    rows.dedup();
    rows
}

fn run<T: Sync, F: Fn(&T) -> Vec<Comb> + Sync + Send>(tasks: &[T], parallel: bool, f: F) -> Vec<Comb> {
    if parallel {
        tasks.par_iter().flat_map_iter(&f).collect()
    } else {
        tasks.iter().flat_map(&f).collect()
    }
}

/// Instances `f(u_1, .., u_d)` on the variables `0..m`, where the `u_j` are
/// left-normed words on consecutive blocks of a permutation of `0..m`.
fn instances(id: &Identity, m: usize, parallel: bool) -> Vec<Comb> {
    let d = id.arity;
    if d > m || d == 0 {
        return Vec::new();
    }
    let mut perms = Vec::new();
    let mut cur: Vec<u8> = (0..m as u8).collect();
    loop {
        perms.push(cur.clone());
        if !next_permutation(&mut cur) {
            break;
        }
    }
    let mut cuts_list = Vec::new();
    let mut cuts: Vec<usize> = (1..d).collect();
    loop {
        cuts_list.push(cuts.clone());
        let Some(i) = (0..cuts.len()).rev().find(|&i| cuts[i] < m - (d - 1 - i)) else { break };
        cuts[i] += 1;
        for j in i + 1..cuts.len() {
            cuts[j] = cuts[j - 1] + 1;
        }
    }
    run(&perms, parallel, |perm| {
        cuts_list
            .iter()
            .map(|cuts| {
                let bounds: Vec<usize> = std::iter::once(0).chain(cuts.iter().copied()).chain([m]).collect();
                let blocks: Vec<&[u8]> = bounds.windows(2).map(|b| &perm[b[0]..b[1]]).collect();
                let mut total = HashMap::new();
                for (seq, coef) in &id.terms {
                    let mut acc: HashMap<Vec<u8>, i128> = HashMap::from([(blocks[seq[0]].to_vec(), *coef)]);
                    for &j in &seq[1..] {
                        let mut next = HashMap::new();
                        for (w, c) in &acc {
                            add_product(&mut next, w, blocks[j], *c);
                        }
                        acc = next;
                    }
                    for (w, c) in acc {
                        *total.entry(w).or_insert(0) += c;
                    }
                }
                collect(total)
            })
            .collect()
    })
}

/// `c · w` and `w · c` for every relation `c` on a proper subset of `0..m`
/// and every ordering `w` of the remaining variables.
fn extensions(lower: &[Vec<Comb>], m: usize, parallel: bool) -> Vec<Comb> {
    let mut tasks = Vec::new();
    for (k, rows) in lower.iter().enumerate() {
        if rows.is_empty() || k >= m {
            continue;
        }
        for mask in 0u32..(1 << m) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let sub: Vec<u8> = (0..m as u8).filter(|&i| mask & (1 << i) != 0).collect();
            let mut rest: Vec<u8> = (0..m as u8).filter(|&i| mask & (1 << i) == 0).collect();
            loop {
                tasks.push((k, sub.clone(), rest.clone()));
                if !next_permutation(&mut rest) {
                    break;
                }
            }
        }
    }
    run(&tasks, parallel, |(k, sub, w)| {
        let mut out = Vec::with_capacity(2 * lower[*k].len());
        for row in &lower[*k] {
            let relabeled: Vec<(Vec<u8>, i128)> =
                row.iter().map(|(u, c)| (u.iter().map(|&i| sub[i as usize]).collect(), *c)).collect();
            let mut right = HashMap::new();
            let mut left = HashMap::new();
            for (u, c) in &relabeled {
                add_product(&mut right, u, w, *c);
                add_product(&mut left, w, u, *c);
            }
            out.push(collect(right));
            out.push(collect(left));
        }
        out
    })
}

/// Relations of each degree `0..=n`, each on the variables `0..m`.
fn relations(ids: &[Identity], n: usize, field: Field, parallel: bool) -> Vec<Vec<Comb>> {
    let mut levels: Vec<Vec<Comb>> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        let mut rows: Vec<Comb> = ids.iter().flat_map(|id| instances(id, m, parallel)).collect();
        rows.extend(extensions(&levels, m, parallel));
        levels.push(dedup(rows, field));
    }
    levels
}

/// A spanning set of the degree-`n` multilinear relations of a variety.
#[derive(Debug, Clone)]
pub struct ConsequenceBasis {
    n: usize,
    field: Field,
    rows: Vec<SparseRow>,
    rank: usize,
}

impl ConsequenceBasis {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of (deduplicated) generators.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn generators(&self) -> impl Iterator<Item = PnVector> + '_ {
        let basis = free_basis(self.n.max(1)).expect("n >= 1");
        self.rows.iter().map(move |row| {
            let coords = NormalForm::from_terms(
                self.field,
                row.iter().map(|&(c, v)| (basis[c].clone(), scalar_from_i128(self.field, v))),
            )
            .expect("single field");
            PnVector { n: self.n, coords }
        })
    }
}

fn scalar_from_i128(field: Field, v: i128) -> Scalar {
    Scalar::from_bigint(field, &BigInt::from(v))
}

fn common_field(identities: &[Expression]) -> Result<Field> {
    let mut fields = identities.iter().map(|e| e.field());
    let first = fields.next().unwrap_or(Field::Rational);
    match fields.find(|f| *f != first) {
        Some(other) => Err(ScalarError::ContextMismatch(first, other).into()),
        None => Ok(first),
    }
}

/// The degree-`n` multilinear consequences of `identities`, generated in
/// parallel.
pub fn consequences(identities: &[Expression], n: usize) -> Result<ConsequenceBasis> {
    consequences_with(identities, n, true)
}

/// As [`consequences`], choosing whether generation runs in parallel. The
/// result does not depend on the choice.
pub fn consequences_with(identities: &[Expression], n: usize, parallel: bool) -> Result<ConsequenceBasis> {
    if n == 0 {
        return Err(Error::Contract("P_0 has no words".into()));
    }
    let field = common_field(identities)?;
    let ids: Vec<Identity> =
        identities.iter().map(prepare).collect::<Result<Vec<_>>>()?.into_iter().flatten().collect();
    let top = relations(&ids, n, field, parallel).pop().unwrap_or_default();
    let rows: Vec<SparseRow> = top
        .into_iter()
        .map(|r| {
            let mut s: SparseRow = r.into_iter().map(|(w, c)| (word_rank(&w), c)).collect();
            s.sort_unstable();
            s
        })
        .collect();
    let ncols = factorial(n);
    let rank = match field {
        Field::Rational => certified_rank(&rows, ncols),
        Field::Prime(p) => rank_mod(&rows, ncols, p),
    };
    Ok(ConsequenceBasis { n, field, rows, rank })
}

/// `dim P_n` of the variety defined by `identities`.
pub fn dim_pn(identities: &[Expression], n: usize) -> Result<usize> {
    Ok(factorial(n) - consequences(identities, n)?.rank)
}

/// Exact rank of multilinear elements of one common degree, by
/// fraction-free elimination over `Q` or elimination over `Z_p`.
pub fn rank(vectors: &[PnVector]) -> Result<usize> {
    let Some(first) = vectors.first() else { return Ok(0) };
    let n = first.n;
    let field = first.coords.field();
    for v in vectors {
        if v.n != n {
            return Err(Error::Contract(format!("vectors of degrees {n} and {} mixed", v.n)));
        }
        if !v.coords.is_zero() && v.coords.field() != field {
            return Err(ScalarError::ContextMismatch(field, v.coords.field()).into());
        }
    }
    let index =
        |w: &LeftWord| word_rank(&w.symbols().iter().map(|s| (s.index().unwrap() - 1) as u8).collect::<Vec<_>>());
    match field {
        Field::Rational => {
            let rows = vectors
                .iter()
                .map(|v| {
                    let den =
                        v.coords.iter().fold(BigInt::from(1), |l, (_, c)| l.lcm(c.as_rational().unwrap().denom()));
                    v.coords
                        .iter()
                        .map(|(w, c)| (index(w), (c.as_rational().unwrap() * &den).to_integer()))
                        .filter(|e| !e.1.is_zero())
                        .collect::<Vec<_>>()
                })
                .map(|mut r| {
                    r.sort_by_key(|e| e.0);
                    r
                })
                .collect();
            Ok(fraction_free_rank(rows))
        }
        Field::Prime(p) => {
            let rows: Vec<SparseRow> = vectors
                .iter()
                .map(|v| {
                    let mut r: SparseRow =
                        v.coords.iter().map(|(w, c)| (index(w), c.residue().unwrap() as i128)).collect();
                    r.sort_unstable();
                    r
                })
                .collect();
            Ok(rank_mod(&rows, factorial(n), p))
        }
    }
}
