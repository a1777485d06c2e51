//! Permutations of `{0, .., n-1}`.

use crate::error::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Permutation {
        Permutation((0..n).collect())
    }

    /// From 0-based images; fails unless `images` is a bijection.
    pub fn from_images(images: Vec<usize>) -> Result<Permutation, Error> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::Contract(format!("{images:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Permutation(images))
    }

    /// From 1-based images, as in cycle-free notation `[σ(1), .., σ(n)]`.
    pub fn from_one_based(images: &[usize]) -> Result<Permutation, Error> {
        if images.contains(&0) {
            return Err(Error::Contract("1-based images may not contain 0".into()));
        }
        Self::from_images(images.iter().map(|i| i - 1).collect())
    }

    /// The transposition of `i` and `j` in `S_n`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Permutation {
        let mut p = Self::identity(n);
        p.0.swap(i, j);
        p
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len());
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    /// +1 for even permutations, -1 for odd ones.
    pub fn sign(&self) -> i64 {
        let mut seen = vec![false; self.len()];
        let mut transpositions = 0;
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i];
                len += 1;
            }
            transpositions += len - 1;
        }
        if transpositions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// All of `S_n` in lexicographic order of image vectors.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur = (0..n).collect::<Vec<_>>();
        loop {
            out.push(Permutation(cur.clone()));
            if !next_permutation(&mut cur) {
                break;
            }
        }
        out
    }
}

/// Advances `v` to its lexicographic successor; false at the last one.
pub(crate) fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
