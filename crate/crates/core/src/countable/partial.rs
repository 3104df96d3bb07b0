use std::collections::BTreeMap;
use std::fmt::Display;

use crate::error::{Error, Result};

/// A finite partial injection of `X`, kept with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialPerm<P: Ord + Clone = i64> {
    forward: BTreeMap<P, P>,
    backward: BTreeMap<P, P>,
}

impl<P: Ord + Clone> Default for PartialPerm<P> {
    fn default() -> Self {
        PartialPerm { forward: BTreeMap::new(), backward: BTreeMap::new() }
    }
}

impl<P: Ord + Clone + Display> PartialPerm<P> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (P, P)>>(pairs: I) -> Result<Self> {
        let mut s = Self::new();
        for (a, b) in pairs {
            s.insert(a, b)?;
        }
        Ok(s)
    }

    /// Adds `a -> b`. Re-adding an existing pair is a no-op; anything that
    /// would break injectivity or overwrite a value is a conflict.
    pub fn insert(&mut self, a: P, b: P) -> Result<()> {
        match (self.forward.get(&a), self.backward.get(&b)) {
            (Some(v), _) if *v == b => Ok(()),
            (Some(v), _) => Err(Error::ConflictingAssignment(format!("{a} already maps to {v}, cannot map it to {b}"))),
            (None, Some(u)) => {
                Err(Error::ConflictingAssignment(format!("{b} already has preimage {u}, cannot assign it to {a}")))
            }
            (None, None) => {
                self.forward.insert(a.clone(), b.clone());
                self.backward.insert(b, a);
                Ok(())
            }
        }
    }

    pub fn get(&self, a: &P) -> Option<&P> {
        self.forward.get(a)
    }

    pub fn get_inv(&self, b: &P) -> Option<&P> {
        self.backward.get(b)
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&P, &P)> {
        self.forward.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &P> {
        self.forward.keys()
    }

    pub fn range(&self) -> impl Iterator<Item = &P> {
        self.backward.keys()
    }

    /// `S ∪ σ(S) ∪ σ⁻¹(S)` over defined values.
    pub fn with_images<'a, I: IntoIterator<Item = &'a P>>(&self, set: I) -> Vec<P>
    where
        P: 'a,
    {
        let mut out = Vec::new();
        for p in set {
            out.push(p.clone());
            if let Some(q) = self.forward.get(p) {
                out.push(q.clone());
            }
            if let Some(q) = self.backward.get(p) {
                out.push(q.clone());
            }
        }
        out
    }

    /// Value of the canonical total extension: `σ` on its domain, closing
    /// each maximal path `a0 -> ... -> am` by `am -> a0`, identity elsewhere.
    pub fn completion(&self, x: &P) -> P {
        if let Some(y) = self.forward.get(x) {
            return y.clone();
        }
        let mut cur = x.clone();
        while let Some(prev) = self.backward.get(&cur) {
            cur = prev.clone();
        }
        cur
    }

    /// Inverse of [`PartialPerm::completion`].
    pub fn completion_inv(&self, y: &P) -> P {
        if let Some(x) = self.backward.get(y) {
            return x.clone();
        }
        let mut cur = y.clone();
        while let Some(next) = self.forward.get(&cur) {
            cur = next.clone();
        }
        cur
    }

    /// Forward and backward maps agree and have equal size.
    pub fn is_consistent(&self) -> bool {
        self.forward.len() == self.backward.len() && self.forward.iter().all(|(a, b)| self.backward.get(b) == Some(a))
    }

    /// Whether `self` agrees with `earlier` on all of `earlier`'s pairs.
    pub fn extends(&self, earlier: &PartialPerm<P>) -> bool {
        earlier.forward.iter().all(|(a, b)| self.forward.get(a) == Some(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_and_conflicts() {
        let mut s = PartialPerm::<i64>::new();
        s.insert(1, 2).unwrap();
        s.insert(1, 2).unwrap();
        assert!(s.insert(1, 3).is_err());
        assert!(s.insert(5, 2).is_err());
        assert_eq!(s.len(), 1);
        assert!(s.is_consistent());
    }

    #[test]
    fn completion_closes_paths() {
        // 0 -> 1 -> 2 closes as 2 -> 0; 7 is fixed.
        let s = PartialPerm::from_pairs([(0i64, 1), (1, 2)]).unwrap();
        assert_eq!(s.completion(&2), 0);
        assert_eq!(s.completion_inv(&0), 2);
        assert_eq!(s.completion(&7), 7);
        for x in -3..5 {
            assert_eq!(s.completion_inv(&s.completion(&x)), x);
        }
    }
}
