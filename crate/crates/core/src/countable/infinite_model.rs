use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::partial::PartialPerm;
use crate::error::{Error, Result};
use crate::free_product::{Letter, Side, Word};

/// `X = Z` with `G = Z` acting by translation through the identity
/// identification, and `H = Z` acting by translation through a bijection
/// `iota_h: X -> Z` of finite support.
///
/// Words of `G * H` act through a conjugator `σ`: an `H`-syllable `h` acts as
/// `σ⁻¹ ∘ h ∘ σ`, so with only a partial `σ` an evaluation may be undefined.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InfiniteModel {
    iota: BTreeMap<i64, i64>,
    iota_inv: BTreeMap<i64, i64>,
}

impl InfiniteModel {
    pub fn identity() -> Self {
        Self::default()
    }

    /// `iota_h` shuffles `[-radius, radius]` with a seeded RNG.
    pub fn shuffled(seed: u64, radius: i64) -> Self {
        let src: Vec<i64> = (-radius..=radius).collect();
        let mut dst = src.clone();
        dst.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        Self::from_pairs(src.into_iter().zip(dst)).expect("a shuffle is a bijection")
    }

    /// Builds `iota_h` from its non-identity pairs.
    pub fn from_pairs<I: IntoIterator<Item = (i64, i64)>>(pairs: I) -> Result<Self> {
        let mut iota = BTreeMap::new();
        let mut iota_inv = BTreeMap::new();
        for (a, b) in pairs {
            if a == b {
                continue;
            }
            if iota.insert(a, b).is_some() || iota_inv.insert(b, a).is_some() {
                return Err(Error::InvalidArgument("iota_h is not injective".into()));
            }
        }
        let mut keys: Vec<_> = iota.keys().copied().collect();
        let mut vals: Vec<_> = iota_inv.keys().copied().collect();
        keys.sort_unstable();
        vals.sort_unstable();
        if keys != vals {
            return Err(Error::InvalidArgument("iota_h does not permute its support".into()));
        }
        Ok(InfiniteModel { iota, iota_inv })
    }

    /// Non-identity pairs of `iota_h`.
    pub fn iota_pairs(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.iota.iter().map(|(a, b)| (*a, *b))
    }

    pub fn iota_h(&self, x: i64) -> i64 {
        self.iota.get(&x).copied().unwrap_or(x)
    }

    pub fn iota_h_inv(&self, y: i64) -> i64 {
        self.iota_inv.get(&y).copied().unwrap_or(y)
    }

    pub fn g_act(&self, g: i64, x: i64) -> i64 {
        x + g
    }

    pub fn h_act(&self, h: i64, x: i64) -> i64 {
        self.iota_h_inv(self.iota_h(x) + h)
    }

    /// Action of a single factor element, without conjugation.
    pub fn act(&self, l: Letter, x: i64) -> i64 {
        match l.side {
            Side::G => self.g_act(l.code, x),
            Side::H => self.h_act(l.code, x),
        }
    }

    /// `w^σ(x)`, or `None` as soon as a needed value of `σ` or `σ⁻¹` is
    /// undefined.
    pub fn eval_conjugated(&self, sigma: &PartialPerm<i64>, w: &Word, x: i64) -> Option<i64> {
        w.letters().iter().try_fold(x, |p, &l| self.step(sigma, l, p))
    }

    /// Points `x, s_1(w)^σ(x), ..., w^σ(x)`; `None` if any step is undefined.
    pub fn conjugated_trajectory(&self, sigma: &PartialPerm<i64>, w: &Word, x: i64) -> Option<Vec<i64>> {
        let mut out = Vec::with_capacity(w.len() + 1);
        out.push(x);
        let mut p = x;
        for &l in w.letters() {
            p = self.step(sigma, l, p)?;
            out.push(p);
        }
        Some(out)
    }

    fn step(&self, sigma: &PartialPerm<i64>, l: Letter, p: i64) -> Option<i64> {
        match l.side {
            Side::G => Some(self.g_act(l.code, p)),
            Side::H => {
                let s = *sigma.get(&p)?;
                sigma.get_inv(&self.h_act(l.code, s)).copied()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shuffled_iota_is_free_and_transitive() {
        let m = InfiniteModel::shuffled(7, 6);
        for x in -10..10 {
            assert_eq!(m.iota_h_inv(m.iota_h(x)), x);
            assert_eq!(m.h_act(-3, m.h_act(3, x)), x);
            assert_ne!(m.h_act(1, x), x);
        }
        assert_eq!(m, InfiniteModel::shuffled(7, 6));
    }

    #[test]
    fn conjugated_examples() {
        let m = InfiniteModel::identity();
        let empty = PartialPerm::new();
        let g = Word::from_rev_unchecked(vec![Letter::g(2)]);
        assert_eq!(m.eval_conjugated(&empty, &g, 5), Some(7));
        let h = Word::from_rev_unchecked(vec![Letter::h(1)]);
        assert_eq!(m.eval_conjugated(&empty, &h, 5), None);
        // σ = {5 -> 5}: σ⁻¹(h·5) = σ⁻¹(6) is undefined.
        let one = PartialPerm::from_pairs([(5, 5)]).unwrap();
        let unfolded = one.get(&5).and_then(|s| one.get_inv(&m.h_act(1, *s))).copied();
        assert_eq!(m.eval_conjugated(&one, &h, 5), unfolded);
        let two = PartialPerm::from_pairs([(5, 5), (6, 6)]).unwrap();
        assert_eq!(m.eval_conjugated(&two, &h, 5), Some(6));
    }
}
