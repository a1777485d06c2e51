//! Partitions, Young diagrams and the alternating generators `g_r(λ)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::eval::{eval_alternated, Algebra, Binding};
use crate::expr::{ExprError, Expression, Symbol};
use crate::normal::{alternate, to_expression, LeftWord, NormalForm};
use crate::scalar::Field;

/// A partition `λ = (λ_1 >= λ_2 >= .. >= λ_l > 0)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(into = "String")]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Partition> {
        if parts.is_empty() {
            return Err(Error::Contract("empty partition".into()));
        }
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Contract(format!("{parts:?} is not a weakly decreasing list of positive parts")));
        }
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// Distinct part sizes `n_1 > .. > n_k` with multiplicities `m_1..m_k`.
    pub fn distinct_parts(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.0 {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// Number of corner cells, which is the number of distinct parts.
    pub fn corners(&self) -> usize {
        self.distinct_parts().len()
    }

    /// `d_j = m_1 + .. + m_j`.
    pub fn d_vector(&self) -> Vec<usize> {
        self.distinct_parts()
            .iter()
            .scan(0, |acc, &(_, m)| {
                *acc += m;
                Some(*acc)
            })
            .collect()
    }

    pub fn conjugate(&self) -> Partition {
        Partition((1..=self.0[0]).map(|j| self.0.iter().filter(|&&p| p >= j).count()).collect())
    }

    /// Column heights, left to right.
    pub fn column_heights(&self) -> Vec<usize> {
        self.conjugate().0
    }

    /// Number of standard Young tableaux, by the hook-length formula.
    pub fn hook_dimension(&self) -> BigUint {
        let cols = self.column_heights();
        let mut hooks = BigUint::one();
        for (i, &row) in self.0.iter().enumerate() {
            for (j, &col) in cols.iter().enumerate().take(row) {
                hooks *= (row - j) + (col - i) - 1;
            }
        }
        (1..=self.size()).fold(BigUint::one(), |acc, k| acc * k) / hooks
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl From<Partition> for String {
    fn from(p: Partition) -> String {
        p.to_string()
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Comma-separated parts, e.g. `6,6,4,4,1`.
    fn from_str(s: &str) -> Result<Partition> {
        let parts = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Contract(format!("bad part {t:?} in {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// All partitions of `n`, in reverse lexicographic order.
pub fn partitions_of(n: usize) -> Result<Vec<Partition>> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    if n == 0 {
        return Err(Error::Contract("partitions of 0 are not supported".into()));
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    Ok(out)
}

/// Shape of the generator `g_r(λ)`: a left-normed product of consecutive
/// alternated segments, one per column of the diagram.
///
/// Cells are numbered column by column, left to right and top to bottom,
/// and cell number `i` holds the variable `x_i`. Segment 0 is the leftmost
/// column of height `d_{k-r+1}`; the other columns follow left to right,
/// which is by decreasing height.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GTemplate {
    lambda: Partition,
    r: usize,
    segments: Vec<Vec<Symbol>>,
}

/// Builds `g_r(λ)` for `1 <= r <= corners(λ)`.
pub fn build_g(lambda: &Partition, r: usize) -> Result<GTemplate> {
    let k = lambda.corners();
    if r == 0 || r > k {
        return Err(Error::Contract(format!("r = {r} is outside 1..={k} for ({lambda})")));
    }
    let first_height = lambda.d_vector()[k - r];
    let mut next = 1u32;
    let columns: Vec<Vec<Symbol>> = lambda
        .column_heights()
        .into_iter()
        .map(|h| {
            let col = (next..next + h as u32).map(Symbol::x).collect();
            next += h as u32;
            col
        })
        .collect();
    let first = columns.iter().position(|c| c.len() == first_height).expect("a column of every height d_j");
    let mut segments = vec![columns[first].clone()];
    segments.extend(columns.iter().enumerate().filter(|(i, _)| *i != first).map(|(_, c)| c.clone()));
    Ok(GTemplate { lambda: lambda.clone(), r, segments })
}

impl GTemplate {
    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Segment 0 is the first column; the others follow in product order.
    pub fn segments(&self) -> &[Vec<Symbol>] {
        &self.segments
    }

    pub fn segment_sizes(&self) -> Vec<usize> {
        self.segments.iter().map(|s| s.len()).collect()
    }

    pub fn variables(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.segments.iter().flatten().copied()
    }

    /// Number of terms of the expanded element, `Π h_j!`.
    pub fn expanded_len(&self) -> BigUint {
        self.segments.iter().map(|s| (1..=s.len()).fold(BigUint::one(), |a, k| a * k)).product()
    }

    /// The expanded element in normal form. Its size is [`Self::expanded_len`],
    /// so this is only meant for small diagrams.
    pub fn normal_form(&self) -> NormalForm {
        let word = LeftWord::new(self.variables().collect()).expect("nonempty diagram");
        alternate(&NormalForm::basis(Field::Rational, word), &self.segments).expect("disjoint segments")
    }

    /// The expanded element as an expression; see [`Self::normal_form`].
    pub fn expression(&self) -> Expression {
        to_expression(&self.normal_form())
    }

    /// Value under `binding`, one segment at a time; the expansion is never
    /// formed.
    pub fn evaluate<A: Algebra>(&self, alg: &A, binding: &Binding<A::Elem>) -> Result<A::Elem> {
        let values = self
            .segments
            .iter()
            .map(|seg| seg.iter().map(|s| binding.get(s).cloned().ok_or(Error::Expr(ExprError::Unbound(*s)))).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        Ok(eval_alternated(alg, &values))
    }
}

impl fmt::Display for GTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, seg) in self.segments.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let vars: Vec<String> = seg.iter().map(|s| s.to_string()).collect();
            write!(f, "Alt[{}]", vars.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(s: &str) -> Partition {
        s.parse().unwrap()
    }

    /// Standard tableaux counted by removing the cell holding `n`, which
    /// must be a corner.
    fn tableaux(parts: &[usize]) -> u64 {
        if parts.iter().sum::<usize>() <= 1 {
            return 1;
        }
        let mut total = 0;
        for i in 0..parts.len() {
            if parts.get(i + 1).is_none_or(|&next| next < parts[i]) {
                let mut smaller = parts.to_vec();
                smaller[i] -= 1;
                if smaller[i] == 0 {
                    smaller.pop();
                }
                total += tableaux(&smaller);
            }
        }
        total
    }

    #[test]
    fn corner_and_d_examples() {
        assert_eq!(lam("6,6,4,4,1").corners(), 3);
        assert_eq!(lam("7").corners(), 1);
        assert_eq!(lam("2,1").corners(), 2);
        assert_eq!(lam("6,6,4,4,1").d_vector(), [2, 4, 5]);
        assert_eq!(lam("5").d_vector(), [1]);
        assert_eq!(lam("2,2").d_vector(), [2]);
        assert_eq!(lam("6,6,4,4,1").column_heights(), [5, 4, 4, 4, 2, 2]);
    }

    #[test]
    fn parsing() {
        assert_eq!(lam("6, 6,4,4,1").parts(), [6, 6, 4, 4, 1]);
        assert!("".parse::<Partition>().is_err());
        assert!("1,2".parse::<Partition>().is_err());
        assert!("3,0".parse::<Partition>().is_err());
        assert!("a".parse::<Partition>().is_err());
        assert_eq!(lam("4,4,4,3,2,2").to_string(), "4,4,4,3,2,2");
    }

    #[test]
    fn hook_examples_against_tableau_count() {
        assert_eq!(lam("1,1,1,1").hook_dimension(), 1u32.into());
        assert_eq!(lam("2,1").hook_dimension(), 2u32.into());
        assert_eq!(lam("3,2,1").hook_dimension(), 16u32.into());
        for n in 1..=9 {
            for p in partitions_of(n).unwrap() {
                assert_eq!(p.hook_dimension(), tableaux(p.parts()).into(), "{p}");
            }
        }
    }

    #[test]
    fn squares_of_dimensions_sum_to_factorial() {
        for n in 1..=10usize {
            let sum: BigUint = partitions_of(n).unwrap().iter().map(|p| p.hook_dimension().pow(2)).sum();
            assert_eq!(sum, (1..=n).fold(BigUint::one(), |a, k| a * k));
        }
    }

    #[test]
    fn partition_listing() {
        let show = |n| partitions_of(n).unwrap().iter().map(|p| p.to_string()).collect::<Vec<_>>();
        assert_eq!(show(3), ["3", "2,1", "1,1,1"]);
        assert_eq!(show(4).len(), 5);
        assert!(partitions_of(21).unwrap().contains(&lam("6,6,4,4,1")));
        assert_eq!(partitions_of(10).unwrap().len(), 42);
    }

    #[test]
    fn conjugation_is_an_involution() {
        for n in 1..=12 {
            for p in partitions_of(n).unwrap() {
                assert_eq!(p.conjugate().conjugate(), p);
                assert_eq!(p.column_heights().iter().sum::<usize>(), n);
            }
        }
    }

    #[test]
    fn generator_segment_shapes() {
        let l = lam("6,6,4,4,1");
        assert_eq!(build_g(&l, 1).unwrap().segment_sizes(), [5, 4, 4, 4, 2, 2]);
        assert_eq!(build_g(&l, 2).unwrap().segment_sizes(), [4, 5, 4, 4, 2, 2]);
        assert_eq!(build_g(&l, 3).unwrap().segment_sizes(), [2, 5, 4, 4, 4, 2]);
        assert!(build_g(&l, 0).is_err());
        assert!(build_g(&l, 4).is_err());
        let g = build_g(&l, 2).unwrap();
        assert_eq!(g.segments()[0][0], Symbol::x(6));
        assert_eq!(g.segments()[1][0], Symbol::x(1));
        assert_eq!(g.expanded_len(), BigUint::from(24u32 * 120 * 24 * 24 * 2 * 2));
    }

    #[test]
    fn generator_uses_every_cell_once() {
        for n in 1..=8 {
            for p in partitions_of(n).unwrap() {
                for r in 1..=p.corners() {
                    let g = build_g(&p, r).unwrap();
                    let mut vars: Vec<Symbol> = g.variables().collect();
                    vars.sort();
                    assert_eq!(vars, (1..=n as u32).map(Symbol::x).collect::<Vec<_>>());
                    let mut sizes = g.segment_sizes();
                    sizes.sort_unstable_by(|a, b| b.cmp(a));
                    assert_eq!(sizes, p.column_heights());
                }
            }
        }
    }

    #[test]
    fn single_cell_generator() {
        let g = build_g(&lam("1"), 1).unwrap();
        assert_eq!(g.expression().to_string(), "x1");
        assert_eq!(g.to_string(), "Alt[x1]");
    }

    #[test]
    fn small_generator_expansion() {
        let g = build_g(&lam("2,1"), 1).unwrap();
        assert_eq!(g.to_string(), "Alt[x1 x2] Alt[x3]");
        assert_eq!(g.normal_form().to_string(), "x1 x2 x3 - x2 x1 x3");
        let g = build_g(&lam("2,1"), 2).unwrap();
        assert_eq!(g.to_string(), "Alt[x3] Alt[x1 x2]");
        assert_eq!(g.normal_form().to_string(), "x3 x1 x2 - x3 x2 x1");
    }
}
