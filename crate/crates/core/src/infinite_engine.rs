//! Extension of a partial conjugator `σ` when both factors are infinite
//! cyclic.
//!
//! `X` is indexed by the integers, `G` translates indices and `H` translates
//! through `iota_h`. A word acts with every `H`-syllable conjugated by `σ`.
//! Each extension keeps every existing pair of `σ` and adds finitely many new
//! ones so that the requested witness is forced: its evaluation never needs a
//! value of `σ` that is still undefined.
//!
//! The permutation being approximated is the canonical completion of the
//! current `σ` (see [`PartialPerm::completion`]), so avoiding its images
//! means avoiding the pairs already committed.

use std::collections::{BTreeSet, HashSet};

use crate::countable::{index_at, InfiniteModel, PartialPerm, Point, SearchBudget};
use crate::error::{Error, Result};
use crate::free_product::{infinite_code_at, FactorSpec, FreeProduct, Letter, Side, Word};
use crate::witness::{FaithfulnessWitness, TransitivityWitness};

/// Engine state: the model, the conjugator built so far and the frozen set.
///
/// `frozen` always contains the domain and range of `sigma`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfiniteState {
    pub model: InfiniteModel,
    pub sigma: PartialPerm<i64>,
    pub frozen: BTreeSet<i64>,
}

impl InfiniteState {
    pub fn new(model: InfiniteModel) -> Self {
        InfiniteState { model, sigma: PartialPerm::new(), frozen: BTreeSet::new() }
    }

    pub fn free_product() -> FreeProduct {
        FreeProduct::new(FactorSpec::infinite(Side::G), FactorSpec::infinite(Side::H))
    }

    /// `σ` and `σ⁻¹` at each point of `set`, for preservation checks.
    pub fn restrict(&self, set: &BTreeSet<i64>) -> Vec<(i64, Option<i64>, Option<i64>)> {
        set.iter().map(|x| (*x, self.sigma.get(x).copied(), self.sigma.get_inv(x).copied())).collect()
    }

    fn absorb<I: IntoIterator<Item = i64>>(&mut self, points: I) {
        self.frozen.extend(points);
        let pts: Vec<i64> = self.sigma.domain().chain(self.sigma.range()).copied().collect();
        self.frozen.extend(pts);
    }
}

/// `S ∪ σ(S) ∪ σ⁻¹(S)`.
fn pm_closure<'a, I: IntoIterator<Item = &'a i64>>(sigma: &PartialPerm<i64>, set: I) -> HashSet<i64> {
    sigma.with_images(set).into_iter().collect()
}

fn code_at(i: usize) -> i64 {
    if i == 0 {
        0
    } else {
        infinite_code_at(i as u64 - 1)
    }
}

/// First element `t` of the chosen factor (identity, then codes `1, -1, 2,
/// ...`, at most `bound` of them) with
/// `(tA ∪ σ^{±1}(tA)) ∩ (B ∪ σ^{±1}(B)) = ∅`. Returns the code, `0` for
/// the identity.
pub fn avoidance_shift(
    model: &InfiniteModel,
    sigma: &PartialPerm<i64>,
    a: &[i64],
    b: &[i64],
    side: Side,
    bound: usize,
) -> Result<i64> {
    let avoid = pm_closure(sigma, b);
    let clear = |y: i64| {
        !avoid.contains(&y)
            && sigma.get(&y).is_none_or(|v| !avoid.contains(v))
            && sigma.get_inv(&y).is_none_or(|v| !avoid.contains(v))
    };
    (0..=bound)
        .map(code_at)
        .find(|&c| a.iter().all(|&x| clear(model.act(Letter::new(side, c), x))))
        .ok_or(Error::NotFoundWithinBound { bound })
}

/// The five point families that must be pairwise disjoint after a
/// transitivity extension, computed with the pre-extension `σ`:
/// `F`, `g₁I`, `g₂J`, `M`, each closed under `σ^{±1}`, and `h(M ∪ σ^{±1}M)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyAudit {
    pub families: [BTreeSet<i64>; 5],
}

impl FamilyAudit {
    /// First overlapping pair of family indices, if any.
    pub fn first_overlap(&self) -> Option<(usize, usize)> {
        for i in 0..5 {
            for j in i + 1..5 {
                if !self.families[i].is_disjoint(&self.families[j]) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn pairwise_disjoint(&self) -> bool {
        self.first_overlap().is_none()
    }
}

#[derive(Clone, Debug)]
pub struct TransitiveExtension {
    pub state: InfiniteState,
    pub witness: TransitivityWitness,
    pub audit: FamilyAudit,
    /// Codes of `g₁`, `g₂` and `h`.
    pub shifts: (i64, i64, i64),
    pub fresh: Vec<i64>,
    pub new_pairs: usize,
}

fn check_tuple(t: &[i64], name: &str) -> Result<()> {
    let distinct: HashSet<_> = t.iter().collect();
    if distinct.len() != t.len() {
        return Err(Error::InvalidArgument(format!("{name} has repeated entries")));
    }
    Ok(())
}

/// Least points in model order that are not in `used`.
fn fresh_points(used: &HashSet<i64>, count: usize) -> Vec<i64> {
    (0u64..).map(index_at).filter(|p| !used.contains(p)).take(count).collect()
}

/// Forces a word `g₂⁻¹hg₁` with `xbar[i] ↦ ybar[i]`.
pub fn extend_transitive(
    state: &InfiniteState,
    xbar: &[i64],
    ybar: &[i64],
    budget: SearchBudget,
) -> Result<TransitiveExtension> {
    let k = xbar.len();
    if k == 0 || ybar.len() != k {
        return Err(Error::InvalidArgument("tuples must be nonempty and of equal length".into()));
    }
    check_tuple(xbar, "xbar")?;
    check_tuple(ybar, "ybar")?;
    let model = &state.model;
    let sigma = &state.sigma;

    let mut f: BTreeSet<i64> = state.frozen.clone();
    f.extend(xbar.iter().chain(ybar));
    f.extend(sigma.domain().chain(sigma.range()).copied());
    let f: Vec<i64> = f.into_iter().collect();

    let g1 = budget.run(|b| avoidance_shift(model, sigma, xbar, &f, Side::G, b))?;
    let g1i: Vec<i64> = xbar.iter().map(|x| model.g_act(g1, *x)).collect();
    let mut b2 = f.clone();
    b2.extend(&g1i);
    let g2 = budget.run(|b| avoidance_shift(model, sigma, ybar, &b2, Side::G, b))?;
    let g2j: Vec<i64> = ybar.iter().map(|y| model.g_act(g2, *y)).collect();

    let mut used = pm_closure(sigma, &f);
    used.extend(pm_closure(sigma, &g1i));
    used.extend(pm_closure(sigma, &g2j));
    used.extend(sigma.domain().chain(sigma.range()).copied());
    let m = fresh_points(&used, k);

    let mut b3 = b2.clone();
    b3.extend(&g2j);
    b3.extend(&m);
    let h = budget.run(|b| avoidance_shift(model, sigma, &m, &b3, Side::H, b))?;
    let hm: Vec<i64> = m.iter().map(|z| model.h_act(h, *z)).collect();

    let closed = |s: &[i64]| -> BTreeSet<i64> { sigma.with_images(s).into_iter().collect() };
    let m_closed = closed(&m);
    let audit = FamilyAudit {
        families: [
            closed(&f),
            closed(&g1i),
            closed(&g2j),
            m_closed.clone(),
            m_closed.iter().map(|z| model.h_act(h, *z)).collect(),
        ],
    };
    if let Some((i, j)) = audit.first_overlap() {
        return Err(Error::Internal(format!("point families {i} and {j} overlap")));
    }

    let mut next = state.clone();
    let before = next.sigma.len();
    for j in 0..k {
        let (a, z) = (g1i[j], m[j]);
        next.sigma.insert(a, z)?;
        next.sigma.insert(sigma.completion_inv(&z), sigma.completion(&a))?;
        let (b, hz) = (g2j[j], hm[j]);
        next.sigma.insert(b, hz)?;
        next.sigma.insert(sigma.completion_inv(&hz), sigma.completion(&b))?;
    }
    let new_pairs = next.sigma.len() - before;

    let fp = InfiniteState::free_product();
    let word = fp.reduce([Letter::g(-g2), Letter::h(h), Letter::g(g1)]);
    let mut touched = Vec::new();
    for j in 0..k {
        let traj = model
            .conjugated_trajectory(&next.sigma, &word, xbar[j])
            .ok_or_else(|| Error::Internal("witness is not forced".into()))?;
        if traj.last() != Some(&ybar[j]) {
            return Err(Error::Internal(format!("witness maps #{} off target", xbar[j])));
        }
        touched.extend(traj);
    }
    next.absorb(touched.into_iter().chain(f));

    Ok(TransitiveExtension {
        state: next,
        witness: TransitivityWitness {
            k,
            xbar: xbar.iter().map(|x| Point::Index(*x)).collect(),
            ybar: ybar.iter().map(|y| Point::Index(*y)).collect(),
            word,
        },
        audit,
        shifts: (g1, g2, h),
        fresh: m,
        new_pairs,
    })
}

/// Which construction a faithfulness request went through.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaithCase {
    /// A single `G` syllable; `G` acts freely, no extension needed.
    SingleG,
    /// A single `H` syllable; it still needs `σ` on two points.
    SingleH,
    /// `w = gh`.
    Short,
    /// `w = g_k h_k ⋯ g_1 h_1` with `k ≥ 2`.
    General { k: usize },
}

#[derive(Clone, Debug)]
pub struct FaithfulExtension {
    pub state: InfiniteState,
    pub witness: FaithfulnessWitness,
    pub case: FaithCase,
    pub new_pairs: usize,
}

/// Splits `w` into pairs `(g_j, h_j)`, `j = 1..k`, reading from the right,
/// so that `w = g_k h_k ⋯ g_1 h_1`. Only `h_1` and `g_k` may be `0`.
fn gh_pairs(w: &Word) -> Vec<(i64, i64)> {
    let ls = w.letters();
    let mut out = Vec::new();
    let mut i = 0;
    while i < ls.len() {
        let h = if ls[i].side == Side::H {
            i += 1;
            ls[i - 1].code
        } else {
            0
        };
        let g = if i < ls.len() && ls[i].side == Side::G {
            i += 1;
            ls[i - 1].code
        } else {
            0
        };
        out.push((g, h));
    }
    out
}

fn fresh_within(used: &HashSet<i64>, bound: usize) -> Result<i64> {
    (0..bound as u64).map(index_at).find(|p| !used.contains(p)).ok_or(Error::NotFoundWithinBound { bound })
}

/// Picks points for the chain `y_0 → x_0 → x_1 → y_1 → y_2 → ⋯ → y_{2k}`:
/// `h_{j+1}x_{2j} = x_{2j+1}`, `g_j y_{2j-1} = y_{2j}`, all new and distinct
/// except for the coincidences forced by trivial `h_1` or `g_k`.
fn chain_points(
    model: &InfiniteModel,
    pairs: &[(i64, i64)],
    used: &mut HashSet<i64>,
    bound: usize,
) -> Result<(Vec<i64>, Vec<i64>)> {
    let k = pairs.len();
    let next_fresh = |used: &HashSet<i64>, from: &mut u64| -> Result<i64> {
        while *from < bound as u64 {
            let p = index_at(*from);
            *from += 1;
            if !used.contains(&p) {
                return Ok(p);
            }
        }
        Err(Error::NotFoundWithinBound { bound })
    };
    let mut cursor = 0u64;
    let mut xs = Vec::with_capacity(2 * k);
    for &(_, h) in pairs {
        loop {
            let c = next_fresh(used, &mut cursor)?;
            if h == 0 {
                used.insert(c);
                xs.extend([c, c]);
                break;
            }
            let d = model.h_act(h, c);
            if d != c && !used.contains(&d) {
                used.extend([c, d]);
                xs.extend([c, d]);
                break;
            }
        }
    }
    let mut ys = vec![0; 2 * k + 1];
    for (j, &(g, _)) in pairs.iter().enumerate() {
        let odd = 2 * j + 1;
        loop {
            let c = next_fresh(used, &mut cursor)?;
            if g == 0 {
                used.insert(c);
                ys[odd] = c;
                ys[odd + 1] = c;
                break;
            }
            let d = model.g_act(g, c);
            if !used.contains(&d) {
                used.extend([c, d]);
                ys[odd] = c;
                ys[odd + 1] = d;
                break;
            }
        }
    }
    ys[0] = if xs[0] == xs[1] { ys[1] } else { xs[0] };
    Ok((xs, ys))
}

/// Forces `w^σ(y_0) ≠ y_0` for a nontrivial `w`.
pub fn extend_faithful(state: &InfiniteState, w: &Word, budget: SearchBudget) -> Result<FaithfulExtension> {
    if w.is_identity() {
        return Err(Error::InvalidArgument("the identity has no faithfulness witness".into()));
    }
    let model = &state.model;
    let sigma = &state.sigma;
    let mut next = state.clone();
    let before = sigma.len();
    let pairs = gh_pairs(w);

    let case = match (w.len(), w.rightmost().unwrap().side) {
        (1, Side::G) => FaithCase::SingleG,
        (1, Side::H) => FaithCase::SingleH,
        (2, Side::H) => FaithCase::Short,
        _ => FaithCase::General { k: pairs.len() },
    };

    let mut used: HashSet<i64> = pm_closure(sigma, &state.frozen);
    used.extend(sigma.domain().chain(sigma.range()).copied());

    let (basepoint, image) = match case {
        FaithCase::SingleG => {
            let x = fresh_points(&used, 1)[0];
            (x, model.g_act(w.letters()[0].code, x))
        }
        FaithCase::Short => {
            let (xs, ys, y0) = budget.run(|bound| {
                let mut used = used.clone();
                let (xs, ys) = chain_points(model, &pairs, &mut used, bound)?;
                let y0 = fresh_within(&used, bound)?;
                Ok((xs, ys, y0))
            })?;
            next.sigma.insert(y0, xs[0])?;
            next.sigma.insert(ys[1], xs[1])?;
            (y0, ys[2])
        }
        FaithCase::SingleH | FaithCase::General { .. } => {
            let (xs, ys) = budget.run(|bound| chain_points(model, &pairs, &mut used.clone(), bound))?;
            for i in 0..xs.len() {
                next.sigma.insert(ys[i], xs[i])?;
            }
            (ys[0], *ys.last().unwrap())
        }
    };

    let traj = model
        .conjugated_trajectory(&next.sigma, w, basepoint)
        .ok_or_else(|| Error::Internal("faithfulness witness is not forced".into()))?;
    if traj.last() != Some(&image) || image == basepoint {
        return Err(Error::Internal(format!("{w} does not move #{basepoint} as constructed")));
    }
    next.absorb(traj);
    let new_pairs = next.sigma.len() - before;
    Ok(FaithfulExtension {
        state: next,
        witness: FaithfulnessWitness {
            word: w.clone(),
            basepoint: Point::Index(basepoint),
            image: Point::Index(image),
        },
        case,
        new_pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp() -> FreeProduct {
        InfiniteState::free_product()
    }

    #[test]
    fn avoidance_examples() {
        let m = InfiniteModel::identity();
        let empty = PartialPerm::new();
        assert_eq!(avoidance_shift(&m, &empty, &[], &[], Side::G, 8).unwrap(), 0);
        assert_eq!(avoidance_shift(&m, &empty, &[0], &[0], Side::G, 8).unwrap(), 1);
        let s = PartialPerm::from_pairs([(2, 0)]).unwrap();
        assert_eq!(avoidance_shift(&m, &s, &[0], &[0, 1], Side::G, 8).unwrap(), -1);
        assert!(avoidance_shift(&m, &empty, &[0], &[-1, 0, 1], Side::G, 2).is_err());
    }

    #[test]
    fn single_pair_transitivity() {
        let st = InfiniteState::new(InfiniteModel::identity());
        let ext = extend_transitive(&st, &[0], &[1], SearchBudget::default()).unwrap();
        let w = &ext.witness.word;
        assert_eq!(w.len(), 3);
        assert_eq!(st.model.eval_conjugated(&ext.state.sigma, w, 0), Some(1));
        assert!(ext.audit.pairwise_disjoint());
        assert_eq!(ext.new_pairs, 4);
    }

    #[test]
    fn two_tuples_add_eight_pairs() {
        let st = InfiniteState::new(InfiniteModel::shuffled(3, 5));
        let ext = extend_transitive(&st, &[0, 2], &[-1, 1], SearchBudget::default()).unwrap();
        assert_eq!(ext.new_pairs, 8);
        for (x, y) in [(0, -1), (2, 1)] {
            assert_eq!(st.model.eval_conjugated(&ext.state.sigma, &ext.witness.word, x), Some(y));
        }
    }

    #[test]
    fn equal_tuples_still_get_a_witness() {
        let st = InfiniteState::new(InfiniteModel::identity());
        let ext = extend_transitive(&st, &[0, 1], &[0, 1], SearchBudget::default()).unwrap();
        assert_eq!(ext.witness.word.len(), 3);
        for x in [0, 1] {
            assert_eq!(st.model.eval_conjugated(&ext.state.sigma, &ext.witness.word, x), Some(x));
        }
    }

    #[test]
    fn repeated_entries_are_rejected() {
        let st = InfiniteState::new(InfiniteModel::identity());
        assert!(extend_transitive(&st, &[0, 0], &[1, 2], SearchBudget::default()).is_err());
    }

    #[test]
    fn faithfulness_cases() {
        let fp = fp();
        let st = InfiniteState::new(InfiniteModel::identity());
        let b = SearchBudget::default();
        let g = extend_faithful(&st, &fp.parse_word("g2").unwrap(), b).unwrap();
        assert_eq!(g.case, FaithCase::SingleG);
        assert_eq!(g.new_pairs, 0);

        let gh = extend_faithful(&st, &fp.parse_word("g1.h1").unwrap(), b).unwrap();
        assert_eq!(gh.case, FaithCase::Short);
        assert_eq!(gh.new_pairs, 2);

        let long = extend_faithful(&st, &fp.parse_word("g1.h-1.g2.h1").unwrap(), b).unwrap();
        assert_eq!(long.case, FaithCase::General { k: 2 });
        assert_eq!(long.new_pairs, 4);

        let h = extend_faithful(&st, &fp.parse_word("h3").unwrap(), b).unwrap();
        assert_eq!(h.case, FaithCase::SingleH);
        assert_eq!(h.new_pairs, 2);

        for ext in [g, gh, long, h] {
            let wit = &ext.witness;
            let (x, y) = (wit.basepoint.as_index().unwrap(), wit.image.as_index().unwrap());
            assert_ne!(x, y);
            assert_eq!(st.model.eval_conjugated(&ext.state.sigma, &wit.word, x), Some(y));
        }
    }

    #[test]
    fn pairs_split_from_the_right() {
        let fp = fp();
        assert_eq!(gh_pairs(&fp.parse_word("h1.g2").unwrap()), [(2, 0), (0, 1)]);
        assert_eq!(gh_pairs(&fp.parse_word("g1.h2").unwrap()), [(1, 2)]);
    }

    #[test]
    fn extensions_preserve_existing_pairs() {
        let fp = fp();
        let b = SearchBudget::default();
        let st = InfiniteState::new(InfiniteModel::identity());
        let a = extend_transitive(&st, &[0], &[1], b).unwrap().state;
        let c = extend_faithful(&a, &fp.parse_word("h1.g1").unwrap(), b).unwrap().state;
        assert!(c.sigma.extends(&a.sigma));
        assert_eq!(c.restrict(&a.frozen), a.restrict(&a.frozen));
    }
}
