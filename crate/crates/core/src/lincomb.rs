//! Finite formal linear combinations over an exact field.

use std::collections::btree_map::{self, BTreeMap};

use crate::scalar::{Field, Scalar, ScalarError};

/// A finite mapping from basis keys to nonzero scalars of one field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinComb<K: Ord> {
    field: Field,
    terms: BTreeMap<K, Scalar>,
}

impl<K: Ord + Clone> LinComb<K> {
    pub fn zero(field: Field) -> Self {
        LinComb { field, terms: BTreeMap::new() }
    }

    /// `1 · key`.
    pub fn basis(field: Field, key: K) -> Self {
        let mut lc = Self::zero(field);
        lc.terms.insert(key, Scalar::one(field));
        lc
    }

    pub fn from_terms<I: IntoIterator<Item = (K, Scalar)>>(field: Field, terms: I) -> Result<Self, ScalarError> {
        let mut lc = Self::zero(field);
        for (k, c) in terms {
            lc.try_add_term(k, &c)?;
        }
        Ok(lc)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, K, Scalar> {
        self.terms.iter()
    }

    pub fn keys(&self) -> btree_map::Keys<'_, K, Scalar> {
        self.terms.keys()
    }

    pub fn coefficient(&self, key: &K) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_else(|| Scalar::zero(self.field))
    }

    pub fn try_add_term(&mut self, key: K, c: &Scalar) -> Result<(), ScalarError> {
        if c.field() != self.field {
            return Err(ScalarError::ContextMismatch(self.field, c.field()));
        }
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.entry(key) {
            btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
        Ok(())
    }

    /// Adds `c · key`; panics when `c` lives in another field.
    pub fn add_term(&mut self, key: K, c: &Scalar) {
        self.try_add_term(key, c).expect("coefficient from a different field");
    }

    pub fn try_add_assign(&mut self, other: &Self) -> Result<(), ScalarError> {
        if other.field != self.field {
            return Err(ScalarError::ContextMismatch(self.field, other.field));
        }
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c);
        }
        Ok(())
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.try_add_assign(other).expect("linear combinations over different fields");
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &Self, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(k.clone(), &(v * c));
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.field);
        out.add_scaled(self, c);
        out
    }

    pub fn neg(&self) -> Self {
        self.scaled(&-Scalar::one(self.field))
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &-Scalar::one(self.field));
        out
    }

    /// Re-keys every term, merging collisions.
    pub fn map_keys<K2: Ord + Clone, F: FnMut(&K) -> K2>(&self, mut f: F) -> LinComb<K2> {
        let mut out = LinComb::zero(self.field);
        for (k, c) in &self.terms {
            out.add_term(f(k), c);
        }
        out
    }

    /// Converts every coefficient into `field`.
    pub fn to_field(&self, field: Field) -> Result<Self, ScalarError> {
        let mut out = Self::zero(field);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), &c.to_field(field)?);
        }
        Ok(out)
    }
}

impl<K: Ord + Clone> IntoIterator for LinComb<K> {
    type Item = (K, Scalar);
    type IntoIter = btree_map::IntoIter<K, Scalar>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.into_iter()
    }
}

impl<'a, K: Ord + Clone> IntoIterator for &'a LinComb<K> {
    type Item = (&'a K, &'a Scalar);
    type IntoIter = btree_map::Iter<'a, K, Scalar>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_removes_terms() {
        let f = Field::Rational;
        let mut lc = LinComb::basis(f, "x");
        lc.add_term("x", &Scalar::from_i64(f, -1));
        assert!(lc.is_zero());
    }

    #[test]
    fn zero_coefficients_are_not_stored() {
        let f = Field::Prime(3);
        let mut lc = LinComb::zero(f);
        lc.add_term(1u32, &Scalar::from_i64(f, 3));
        assert!(lc.is_empty());
    }

    #[test]
    fn field_mismatch_is_an_error() {
        let mut lc: LinComb<u32> = LinComb::zero(Field::Rational);
        assert!(lc.try_add_term(0, &Scalar::one(Field::Prime(5))).is_err());
    }
}
