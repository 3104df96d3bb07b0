//! Word metric and shadows on the image of `G * H` in its Bass-Serre tree.
//!
//! The metric is right-invariant, `d(u, v) = |u v⁻¹|`, so two elements are
//! adjacent exactly when one is a left multiple of the other by a single
//! factor element. Shadows are never materialized: a shadow is its apex, and
//! membership is geodesic additivity.

use crate::error::{Error, Result};
use crate::free_product::{FreeProduct, Side, Word};

pub fn word_distance(fp: &FreeProduct, u: &Word, v: &Word) -> usize {
    fp.multiply(u, &fp.inverse(v)).len()
}

/// Whether the geodesic from `base` to `query` passes through `apex`.
pub fn in_shadow(fp: &FreeProduct, base: &Word, apex: &Word, query: &Word) -> bool {
    word_distance(fp, base, query) == word_distance(fp, base, apex) + word_distance(fp, apex, query)
}

/// A shadow inside one copy `Ȳ_z`: `apex` is a `Ȳ`-coordinate, `root` the
/// point `z` the copy hangs from.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ShadowHandle {
    pub root: Word,
    pub apex: Word,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShadowRelation {
    Disjoint,
    FirstContainsSecond,
    SecondContainsFirst,
    Equal,
}

/// In a tree two shadows at the same base are nested or disjoint; this
/// decides which, using only the two apexes.
pub fn shadows_relation(fp: &FreeProduct, s1: &ShadowHandle, s2: &ShadowHandle) -> Result<ShadowRelation> {
    if s1.root != s2.root {
        return Err(Error::ChartMismatch);
    }
    if s1.apex == s2.apex {
        return Ok(ShadowRelation::Equal);
    }
    let origin = Word::identity();
    let second_in_first = in_shadow(fp, &origin, &s1.apex, &s2.apex);
    let first_in_second = in_shadow(fp, &origin, &s2.apex, &s1.apex);
    Ok(match (second_in_first, first_in_second) {
        (true, false) => ShadowRelation::FirstContainsSecond,
        (false, true) => ShadowRelation::SecondContainsFirst,
        (false, false) => ShadowRelation::Disjoint,
        (true, true) => unreachable!("distinct apexes cannot lie in each other's shadow"),
    })
}

/// `Ȳ`: the identity together with every element whose rightmost syllable
/// lies in `H` (the points whose geodesic from `1` leaves through the
/// vertex `H`).
pub fn member_ybar(w: &Word) -> bool {
    w.rightmost().is_none_or(|l| l.side == Side::H)
}

/// `Y = Ȳ \ {1}`.
pub fn member_y(w: &Word) -> bool {
    !w.is_identity() && member_ybar(w)
}

/// Representatives `w` of the right cosets `Hw` making up `Ȳ`: `1`, or a
/// normal form starting with `G` and ending with `H`.
pub fn is_ybar_coset_rep(w: &Word) -> bool {
    match (w.leftmost(), w.rightmost()) {
        (None, _) => true,
        (Some(l), Some(r)) => l.side == Side::G && r.side == Side::H,
        _ => false,
    }
}

/// Representatives `w` of the right cosets `Gw` making up `Y`: normal forms
/// starting and ending with `H`.
pub fn is_y_coset_rep(w: &Word) -> bool {
    matches!((w.leftmost(), w.rightmost()), (Some(l), Some(r)) if l.side == Side::H && r.side == Side::H)
}

/// `Ȳ` as the union of cosets `Hw`: strip a leading `H` syllable and test
/// the representative.
pub fn member_ybar_by_cosets(w: &Word) -> bool {
    is_ybar_coset_rep(&strip_leftmost(w, Side::H))
}

/// `Y` as the union of cosets `Gw`.
pub fn member_y_by_cosets(w: &Word) -> bool {
    is_y_coset_rep(&strip_leftmost(w, Side::G))
}

/// Canonical representative of the right coset `Aw`, `A` the factor on
/// `side`: `w` with a leading `side` syllable removed.
pub fn coset_rep(w: &Word, side: Side) -> Word {
    strip_leftmost(w, side)
}

fn strip_leftmost(w: &Word, side: Side) -> Word {
    match w.leftmost() {
        Some(l) if l.side == side => w.suffix(w.len() - 1).unwrap(),
        _ => w.clone(),
    }
}

/// Gromov product `(y|z)_x`, doubled to stay integral.
pub fn gromov_product_x2(fp: &FreeProduct, x: &Word, y: &Word, z: &Word) -> usize {
    word_distance(fp, x, y) + word_distance(fp, x, z) - word_distance(fp, y, z)
}

/// Four-point condition: of the three pairwise sums, the two largest agree.
pub fn four_point_condition(fp: &FreeProduct, p: [&Word; 4]) -> bool {
    let d = |a: usize, b: usize| word_distance(fp, p[a], p[b]);
    let mut sums = [d(0, 1) + d(2, 3), d(0, 2) + d(1, 3), d(0, 3) + d(1, 2)];
    sums.sort_unstable();
    sums[1] == sums[2]
}
