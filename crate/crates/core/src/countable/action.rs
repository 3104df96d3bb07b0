use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::free_product::{FreeProduct, Letter, Side, Word};

/// An `H`-action on `X = G * H` (finite-factor model): left multiplication
/// everywhere except on a finite exception table.
///
/// `G` always acts by left multiplication. Rows are kept only where they
/// differ from the default, so the support is exactly the set of points
/// where this action and the base action disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HAction {
    fp: FreeProduct,
    rows: BTreeMap<Word, BTreeMap<i64, Word>>,
}

/// Points visited when applying a word syllable by syllable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    /// `points[j]` is the image of the start under the suffix of length `j`.
    pub points: Vec<Word>,
}

impl Trajectory {
    pub fn end(&self) -> &Word {
        self.points.last().expect("trajectory always holds its start")
    }
}

impl HAction {
    /// Left multiplication by `H`.
    pub fn base(fp: FreeProduct) -> Self {
        HAction { fp, rows: BTreeMap::new() }
    }

    pub fn fp(&self) -> &FreeProduct {
        &self.fp
    }

    fn default_image(&self, h: i64, x: &Word) -> Word {
        let mut y = x.clone();
        self.fp.left_mul_letter(Letter::h(h), &mut y);
        y
    }

    /// Records a single exception `(h, x) -> y` without any consistency
    /// check; see [`HAction::check_invariants`].
    pub fn insert_exception(&mut self, h: i64, x: Word, y: Word) {
        let h = self.fp.h().normalize(h);
        if h == 0 {
            return;
        }
        if self.default_image(h, &x) == y {
            if let Some(row) = self.rows.get_mut(&x) {
                row.remove(&h);
                if row.is_empty() {
                    self.rows.remove(&x);
                }
            }
        } else {
            self.rows.entry(x).or_default().insert(h, y);
        }
    }

    /// Replaces the whole row of `x` (one image per nontrivial code).
    pub fn set_row<I: IntoIterator<Item = (i64, Word)>>(&mut self, x: &Word, images: I) {
        self.rows.remove(x);
        for (h, y) in images {
            self.insert_exception(h, x.clone(), y);
        }
    }

    pub fn h_act(&self, h: i64, x: &Word) -> Word {
        let h = self.fp.h().normalize(h);
        if h == 0 {
            return x.clone();
        }
        match self.rows.get(x).and_then(|r| r.get(&h)) {
            Some(y) => y.clone(),
            None => self.default_image(h, x),
        }
    }

    pub fn g_act(&self, g: i64, x: &Word) -> Word {
        let mut y = x.clone();
        self.fp.left_mul_letter(Letter::g(g), &mut y);
        y
    }

    /// Applies one letter in place.
    pub fn apply(&self, l: Letter, x: &mut Word) {
        if l.side == Side::H {
            let h = self.fp.h().normalize(l.code);
            if h == 0 {
                return;
            }
            if let Some(y) = self.rows.get(&*x).and_then(|r| r.get(&h)) {
                *x = y.clone();
                return;
            }
        }
        self.fp.left_mul_letter(l, x);
    }

    /// `w` applied to `x`, rightmost syllable first.
    pub fn eval_word(&self, w: &Word, x: &Word) -> Word {
        let mut p = x.clone();
        for &l in w.letters() {
            self.apply(l, &mut p);
        }
        p
    }

    pub fn trajectory(&self, w: &Word, x: &Word) -> Trajectory {
        let mut points = Vec::with_capacity(w.len() + 1);
        let mut p = x.clone();
        points.push(p.clone());
        for &l in w.letters() {
            self.apply(l, &mut p);
            points.push(p.clone());
        }
        Trajectory { points }
    }

    /// Points whose row differs from left multiplication.
    pub fn support(&self) -> impl Iterator<Item = &Word> {
        self.rows.keys()
    }

    pub fn support_len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_exceptional(&self, x: &Word) -> bool {
        self.rows.contains_key(x)
    }

    /// All exceptions `(h, x, y)`, ordered by point then code.
    pub fn exceptions(&self) -> impl Iterator<Item = (i64, &Word, &Word)> {
        self.rows.iter().flat_map(|(x, row)| row.iter().map(move |(h, y)| (*h, x, y)))
    }

    /// Whether `self` and `other` agree on every `h` at every point of `set`.
    pub fn agrees_on<'a, I: IntoIterator<Item = &'a Word>>(&self, other: &HAction, set: I) -> bool {
        set.into_iter().all(|x| self.rows.get(x) == other.rows.get(x))
    }

    /// Checks that every `h` permutes `X` and that the `H` group law holds
    /// on the support. Requires a finite `H`.
    pub fn check_invariants(&self) -> Result<()> {
        let hs = self.fp.h().nontrivial_codes(0);
        if hs.is_empty() && !self.rows.is_empty() {
            return Err(Error::Internal("exception table needs a finite H".into()));
        }
        let support: Vec<&Word> = self.rows.keys().collect();
        for &h in &hs {
            let mut images = HashSet::with_capacity(support.len());
            let expected: BTreeSet<Word> = support.iter().map(|x| self.default_image(h, x)).collect();
            for x in &support {
                let y = self.h_act(h, x);
                if !images.insert(y.clone()) {
                    return Err(Error::Internal(format!("h{h} is not injective at {y}")));
                }
                if !expected.contains(&y) {
                    return Err(Error::Internal(format!(
                        "h{h} maps support point {x} outside the support's default image"
                    )));
                }
            }
        }
        for x in &support {
            for &a in &hs {
                for &b in &hs {
                    let ab = self.fp.h().mul(a, b);
                    let lhs = self.h_act(a, &self.h_act(b, x));
                    if lhs != self.h_act(ab, x) {
                        return Err(Error::Internal(format!("group law fails at {x} for h{a}, h{b}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// The `H`-orbit of `x` (finite `H`).
    pub fn h_orbit(&self, x: &Word) -> Vec<Word> {
        let mut out = vec![x.clone()];
        for h in self.fp.h().nontrivial_codes(0) {
            let y = self.h_act(h, x);
            if !out.contains(&y) {
                out.push(y);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free_product::FactorSpec;

    fn c2c3() -> FreeProduct {
        FreeProduct::new(FactorSpec::cyclic(Side::G, 2).unwrap(), FactorSpec::cyclic(Side::H, 3).unwrap())
    }

    #[test]
    fn g_and_h_examples() {
        let fp = c2c3();
        let act = HAction::base(fp.clone());
        let w = |s: &str| fp.parse_word(s).unwrap();
        assert_eq!(act.g_act(1, &w("1")), w("g1"));
        assert_eq!(act.g_act(1, &w("g1")), w("1"));
        assert_eq!(act.g_act(1, &w("h1.g1")).to_string(), "g1.h1.g1");
        assert_eq!(act.h_act(1, &w("1")), w("h1"));
        assert_eq!(act.h_act(1, &w("g1.h2")).to_string(), "h1.g1.h2");
        let mut odd = act.clone();
        odd.insert_exception(1, w("g1.h1"), w("1"));
        assert_eq!(odd.h_act(1, &w("g1.h1")), w("1"));
        assert!(odd.check_invariants().is_err());
    }

    #[test]
    fn eval_and_trajectory_examples() {
        let fp = c2c3();
        let act = HAction::base(fp.clone());
        let w = |s: &str| fp.parse_word(s).unwrap();
        assert_eq!(act.eval_word(&w("g1.h1"), &w("1")), w("g1.h1"));
        assert_eq!(act.eval_word(&Word::identity(), &w("h2")), w("h2"));
        let t = act.trajectory(&w("g1.h1"), &w("1"));
        let shown: Vec<String> = t.points.iter().map(|p| p.to_string()).collect();
        assert_eq!(shown, ["1", "h1", "g1.h1"]);
        assert_eq!(act.trajectory(&Word::identity(), &w("g1")).points, vec![w("g1")]);
    }

    #[test]
    fn block_swap_is_a_valid_action() {
        // Make the H-block {1, h1, h2} fixed pointwise.
        let fp = c2c3();
        let mut act = HAction::base(fp.clone());
        for x in ["1", "h1", "h2"] {
            let x = fp.parse_word(x).unwrap();
            act.set_row(&x, [(1, x.clone()), (2, x.clone())]);
        }
        act.check_invariants().unwrap();
        assert_eq!(act.support_len(), 3);
        assert_eq!(act.h_orbit(&Word::identity()), vec![Word::identity()]);
    }
}
