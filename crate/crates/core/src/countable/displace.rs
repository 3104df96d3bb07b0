use std::collections::HashSet;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::free_product::Word;

/// First candidate `w` with `w·F ∩ F = ∅`.
///
/// Candidates are consumed in the order given (callers pass an enumeration
/// of the subgroup, truncated at the search bound). Running out of
/// candidates means the bound was too small or some orbit is finite.
pub fn neumann_displace<P, C, E>(candidates: C, eval: E, set: &[P], bound: usize) -> Result<Word>
where
    P: Eq + Hash + Clone,
    C: IntoIterator<Item = Word>,
    E: FnMut(&Word, &P) -> P,
{
    let avoid: HashSet<P> = set.iter().cloned().collect();
    neumann_displace_two(candidates, eval, set, &avoid, bound)
}

/// Two-set form: first candidate `w` with `w·F₁ ∩ F₂ = ∅`.
pub fn neumann_displace_two<P, C, E>(
    candidates: C,
    mut eval: E,
    from: &[P],
    avoid: &HashSet<P>,
    bound: usize,
) -> Result<Word>
where
    P: Eq + Hash,
    C: IntoIterator<Item = Word>,
    E: FnMut(&Word, &P) -> P,
{
    search_words(candidates, bound, |w| from.iter().all(|p| !avoid.contains(&eval(w, p))))
}

/// First candidate accepted by `accept`.
pub fn search_words<C, A>(candidates: C, bound: usize, mut accept: A) -> Result<Word>
where
    C: IntoIterator<Item = Word>,
    A: FnMut(&Word) -> bool,
{
    candidates.into_iter().find(|w| accept(w)).ok_or(Error::NotFoundWithinBound { bound })
}

/// Search radius policy: start at `initial`, double on failure up to `cap`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub initial: usize,
    pub cap: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { initial: 64, cap: 1 << 22 }
    }
}

impl SearchBudget {
    pub fn run<T, S: FnMut(usize) -> Result<T>>(&self, search: S) -> Result<T> {
        with_doubling(self.initial, self.cap, search)
    }
}

/// Runs `search` with bound `initial`, doubling on
/// [`Error::NotFoundWithinBound`] until `cap` is exceeded.
pub fn with_doubling<T, S>(initial: usize, cap: usize, mut search: S) -> Result<T>
where
    S: FnMut(usize) -> Result<T>,
{
    let mut bound = initial.max(1);
    loop {
        match search(bound) {
            Err(Error::NotFoundWithinBound { .. }) if bound < cap => bound = (bound * 2).min(cap),
            other => return other,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::countable::{HAction, InfiniteModel};
    use crate::free_product::{FactorSpec, FreeProduct, Side};

    #[test]
    fn translation_displaces_pair_by_two() {
        let fp = FreeProduct::new(FactorSpec::infinite(Side::G), FactorSpec::infinite(Side::H));
        let m = InfiniteModel::identity();
        let bound = 4;
        let eval = |w: &Word, x: &i64| w.letters().iter().fold(*x, |p, l| m.act(*l, p));
        let g = neumann_displace(fp.enumerate_factor(Side::G, Some(bound)), eval, &[0i64, 1], bound).unwrap();
        assert_eq!(g.to_string(), "g2");
    }

    #[test]
    fn base_action_displaces_identity_by_a() {
        let fp = FreeProduct::new(FactorSpec::cyclic(Side::G, 2).unwrap(), FactorSpec::cyclic(Side::H, 3).unwrap());
        let act = HAction::base(fp.clone());
        let w =
            neumann_displace(fp.enumerate_words(4, None), |w, x| act.eval_word(w, x), &[Word::identity()], 4).unwrap();
        assert_eq!(w.to_string(), "g1");
        let empty: Vec<Word> = Vec::new();
        let w = neumann_displace(fp.enumerate_words(4, None), |w, x| act.eval_word(w, x), &empty, 4).unwrap();
        assert!(w.is_identity());
    }

    #[test]
    fn finite_orbit_is_not_found() {
        // An action that fixes everything has no displacing element.
        let fp = FreeProduct::new(FactorSpec::infinite(Side::G), FactorSpec::infinite(Side::H));
        let r = neumann_displace(fp.enumerate_factor(Side::G, Some(3)), |_, x: &i64| *x, &[0i64], 3);
        assert!(matches!(r, Err(Error::NotFoundWithinBound { bound: 3 })));
    }

    #[test]
    fn doubling_stops_at_cap() {
        let mut tried = Vec::new();
        let r: Result<()> = with_doubling(2, 12, |b| {
            tried.push(b);
            Err(Error::NotFoundWithinBound { bound: b })
        });
        assert!(r.is_err());
        assert_eq!(tried, [2, 4, 8, 12]);
        assert_eq!(
            with_doubling(2, 64, |b| if b >= 16 { Ok(b) } else { Err(Error::NotFoundWithinBound { bound: b }) })
                .unwrap(),
            16
        );
    }
}
