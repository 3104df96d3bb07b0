//! Brute-force check of `k`-transitivity on a window of points.
//!
//! The oracle connects the first `k`-tuple of the window to every other one
//! with an explicit word; transitivity on the window follows by composing.
//! It uses the verifier's evaluators, never the engines.
//!
//! For `σ`-models and small permutation actions the search is a plain
//! breadth-first search over tuples. For finite-factor certificates plain
//! search cannot reach the needed lengths, so it runs over portals instead:
//! away from the exceptional rows every word acts by left multiplication,
//! which moves a tuple rigidly. A word then splits into free stretches and
//! single `H`-syllables applied at an exceptional point, and each free
//! stretch can be replaced by the normal form of the group element it
//! realizes. The search tries every free jump that lands a coordinate on an
//! exceptional point, every `H`-syllable there, and a final free jump onto
//! the target, with at most `max_portals` exceptional syllables.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use crate::certificate::{ActionData, Certificate};
use crate::countable::{index_at, Point};
use crate::driver::{tuples, Engine};
use crate::free_product::{FreeProduct, Letter, Side, Word};
use crate::verify::{NaiveAction, NaiveSigma};

/// A group action given syllable by syllable, possibly partial.
pub trait TupleAction {
    type P: Clone + Eq + Hash;
    fn generators(&self) -> Vec<Letter>;
    fn apply(&self, l: Letter, p: &Self::P) -> Option<Self::P>;
}

impl TupleAction for NaiveSigma {
    type P = i64;
    fn generators(&self) -> Vec<Letter> {
        [Letter::g(1), Letter::g(-1), Letter::h(1), Letter::h(-1)].into()
    }
    fn apply(&self, l: Letter, p: &i64) -> Option<i64> {
        NaiveSigma::apply(self, l, *p)
    }
}

#[derive(Clone, Debug)]
pub struct OracleConfig {
    pub k: usize,
    pub window: usize,
    /// Longest word considered; `None` uses twice the longest witness of
    /// the certificate.
    pub length_cap: Option<usize>,
    /// Exceptional `H`-syllables allowed in one connecting word.
    pub max_portals: usize,
    /// States explored (free jumps tried, for the portal search) before
    /// giving up.
    pub state_cap: usize,
    pub code_window: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { k: 2, window: 4, length_cap: None, max_portals: 2, state_cap: 2_000_000, code_window: 2 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Transitive,
    /// The whole orbit of `xbar` was explored and `ybar` is not in it.
    NotTransitive {
        xbar: Vec<Point>,
        ybar: Vec<Point>,
    },
    /// A cap was hit before `ybar` was reached from `xbar`.
    Inconclusive {
        xbar: Vec<Point>,
        ybar: Vec<Point>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    pub from: Vec<Point>,
    pub to: Vec<Point>,
    pub word: Word,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub verdict: Verdict,
    pub tuples: usize,
    pub length_cap: usize,
    pub states: usize,
    /// One word from the first tuple to each other tuple reached.
    pub connections: Vec<Connection>,
}

impl OracleReport {
    pub fn is_transitive(&self) -> bool {
        self.verdict == Verdict::Transitive
    }
}

/// Words from `targets[0]` to the other tuples, whether the search
/// explored the whole orbit, and the number of states seen.
type Connected = (Vec<Option<Word>>, bool, usize);

/// Breadth-first search from `targets[0]` to the other tuples.
pub fn bfs_connect<A: TupleAction>(
    fp: &FreeProduct,
    act: &A,
    targets: &[Vec<A::P>],
    length_cap: usize,
    state_cap: usize,
) -> Connected {
    let gens = act.generators();
    let index: HashMap<&Vec<A::P>, usize> = targets.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut found: Vec<Option<Word>> = vec![None; targets.len()];
    let Some(root) = targets.first() else {
        return (found, true, 0);
    };
    // Parent links: state id -> (parent id, letter).
    let mut ids: HashMap<Vec<A::P>, usize> = HashMap::from([(root.clone(), 0)]);
    let mut parent: Vec<Option<(usize, Letter)>> = vec![None];
    let mut queue: VecDeque<(Vec<A::P>, usize, usize)> = VecDeque::from([(root.clone(), 0, 0)]);
    let word_of = |mut id: usize, parent: &[Option<(usize, Letter)>]| {
        let mut ls = Vec::new();
        while let Some((p, l)) = parent[id] {
            ls.push(l);
            id = p;
        }
        fp.reduce(ls)
    };
    found[0] = Some(Word::identity());
    let mut remaining = targets.len() - 1;
    let mut exhausted = true;
    while let Some((t, id, depth)) = queue.pop_front() {
        if remaining == 0 {
            break;
        }
        if depth >= length_cap || ids.len() >= state_cap {
            exhausted = false;
            break;
        }
        for &l in &gens {
            let Some(next) = t.iter().map(|p| act.apply(l, p)).collect::<Option<Vec<_>>>() else {
                continue;
            };
            if ids.contains_key(&next) {
                continue;
            }
            let nid = parent.len();
            parent.push(Some((id, l)));
            ids.insert(next.clone(), nid);
            if let Some(&ti) = index.get(&next) {
                if found[ti].is_none() {
                    found[ti] = Some(word_of(nid, &parent));
                    remaining -= 1;
                }
            }
            queue.push_back((next, nid, depth + 1));
        }
    }
    let states = ids.len();
    (found, remaining == 0 || exhausted, states)
}

/// Portal search on a finite-factor action; see the module docs.
fn portal_connect(
    act: &NaiveAction,
    targets: &[Vec<Word>],
    length_cap: usize,
    max_portals: usize,
    work: &mut usize,
) -> (Vec<Option<Word>>, usize) {
    let fp = act.fp();
    let hs = fp.h().nontrivial_codes(0);
    // By length, so that `|e·x⁻¹| >= |e| - |x|` cuts the scan short.
    let mut portals: Vec<&Word> = act.portals().collect();
    portals.sort_by_key(|e| (e.len(), *e));
    // Best word found so far for each target, with its cost.
    let mut found: Vec<Option<(Word, usize)>> = vec![None; targets.len()];
    let Some(root) = targets.first() else {
        return (Vec::new(), 0);
    };
    found[0] = Some((Word::identity(), 0));

    // Applies `u` to every coordinate; with `free` set, gives up as soon as
    // an `H`-syllable meets an exceptional point.
    let run = |u: &Word, t: &[Word], free: bool| -> Option<Vec<Word>> {
        t.iter()
            .map(|x| {
                let mut p = x.clone();
                for &l in u.letters() {
                    if free && l.side == Side::H && act.is_portal(&p) {
                        return None;
                    }
                    p = act.apply(l, &p);
                }
                Some(p)
            })
            .collect()
    };

    let target_jumps = |level: &[(Vec<Word>, Word, usize)], found: &mut Vec<Option<(Word, usize)>>| {
        for (t, w, cost) in level {
            let inv0 = fp.inverse(&t[0]);
            for (ti, y) in targets.iter().enumerate() {
                let u = fp.multiply(&y[0], &inv0);
                let total = cost + u.len();
                if total > length_cap || found[ti].as_ref().is_some_and(|(_, c)| *c <= total) {
                    continue;
                }
                if t.iter().zip(y).any(|(x, y)| fp.multiply(&u, x) != *y) {
                    continue;
                }
                if run(&u, t, false).as_deref() == Some(y.as_slice()) {
                    found[ti] = Some((fp.multiply(&u, w), total));
                }
            }
        }
    };

    // `(tuple, word from the root, cost)`
    let mut level: Vec<(Vec<Word>, Word, usize)> = vec![(root.clone(), Word::identity(), 0)];
    let mut best: HashMap<Vec<Word>, usize> = HashMap::from([(root.clone(), 0)]);
    for depth in 0..=max_portals {
        target_jumps(&level, &mut found);
        if found.iter().all(Option::is_some) || depth == max_portals {
            break;
        }
        let mut next: Vec<(Vec<Word>, Word, usize)> = Vec::new();
        let mut capped = false;
        'states: for (t, w, cost) in &level {
            let mut landings: Vec<(Vec<Word>, Word, usize)> = Vec::new();
            if t.iter().any(|x| act.is_portal(x)) {
                landings.push((t.clone(), w.clone(), *cost));
            }
            for x in t {
                let xinv = fp.inverse(x);
                let reach = (x.len() + length_cap).saturating_sub(cost + 1);
                for e in portals.iter().take_while(|e| e.len() <= reach) {
                    if *work == 0 {
                        capped = true;
                        break 'states;
                    }
                    *work -= 1;
                    let u = fp.multiply(e, &xinv);
                    if u.is_identity() || cost + u.len() + 1 > length_cap {
                        continue;
                    }
                    if let Some(landed) = run(&u, t, true) {
                        landings.push((landed, fp.multiply(&u, w), cost + u.len()));
                    }
                }
            }
            for (t1, w1, c1) in landings {
                for &h in &hs {
                    let l = Letter::h(h);
                    let t2: Vec<Word> = t1.iter().map(|x| act.apply(l, x)).collect();
                    if best.get(&t2).is_some_and(|&c| c <= c1 + 1) {
                        continue;
                    }
                    best.insert(t2.clone(), c1 + 1);
                    next.push((t2, fp.multiply(&Word::from_rev_unchecked(vec![l]), &w1), c1 + 1));
                }
            }
        }
        level = next;
        if capped {
            target_jumps(&level, &mut found);
            break;
        }
    }
    (found.into_iter().map(|f| f.map(|(w, _)| w)).collect(), best.len())
}

/// The first `window` points of the certificate's model, in model order.
pub fn certificate_points(cert: &Certificate, window: usize, code_window: usize) -> Vec<Point> {
    match cert.engine {
        Engine::Finite => {
            cert.fp.enumerate_words(usize::MAX, Some(code_window)).take(window).map(Point::Elem).collect()
        }
        Engine::Infinite => (0..window as u64).map(|n| Point::Index(index_at(n))).collect(),
    }
}

/// Checks `k`-transitivity of the certificate's final action on its first
/// `window` points.
pub fn oracle_k_transitive(cert: &Certificate, cfg: &OracleConfig) -> OracleReport {
    let pts = certificate_points(cert, cfg.window, cfg.code_window);
    let ts = tuples(&pts, cfg.k);
    let longest = cert.witnesses().map(|w| w.word().len()).max().unwrap_or(0);
    let length_cap = cfg.length_cap.unwrap_or((2 * longest).max(8));
    let (found, exhausted, states) = match &cert.action {
        ActionData::Action(rows) => {
            let act = NaiveAction::new(&cert.fp, rows);
            let words: Vec<Vec<Word>> =
                ts.iter().map(|t| t.iter().map(|p| p.as_word().cloned().unwrap_or_default()).collect()).collect();
            // Short connections are the common case, so deepen the cap
            // gradually; far portals are then skipped without evaluation.
            let mut cap = 16.min(length_cap);
            let mut work = cfg.state_cap;
            loop {
                let (found, states) = portal_connect(&act, &words, cap, cfg.max_portals, &mut work);
                if cap >= length_cap || work == 0 || found.iter().all(Option::is_some) {
                    break (found, false, states);
                }
                cap = (2 * cap).min(length_cap);
            }
        }
        ActionData::Sigma { iota, sigma } => {
            let act = NaiveSigma::new(iota, sigma);
            let idx: Vec<Vec<i64>> =
                ts.iter().map(|t| t.iter().map(|p| p.as_index().unwrap_or_default()).collect()).collect();
            bfs_connect(&cert.fp, &act, &idx, length_cap, cfg.state_cap)
        }
    };
    report(&ts, found, exhausted, states, length_cap)
}

/// Same check for any [`TupleAction`] on explicit points.
pub fn oracle_on_action<A: TupleAction>(
    fp: &FreeProduct,
    act: &A,
    pts: &[A::P],
    to_point: impl Fn(&A::P) -> Point,
    k: usize,
    length_cap: usize,
    state_cap: usize,
) -> OracleReport {
    let ts = tuples(pts, k);
    let (found, exhausted, states) = bfs_connect(fp, act, &ts, length_cap, state_cap);
    let tp: Vec<Vec<Point>> = ts.iter().map(|t| t.iter().map(&to_point).collect()).collect();
    report(&tp, found, exhausted, states, length_cap)
}

fn report(
    ts: &[Vec<Point>],
    found: Vec<Option<Word>>,
    exhausted: bool,
    states: usize,
    length_cap: usize,
) -> OracleReport {
    let mut connections = Vec::new();
    let mut verdict = Verdict::Transitive;
    for (t, f) in ts.iter().zip(found).skip(1) {
        match f {
            Some(word) => connections.push(Connection { from: ts[0].clone(), to: t.clone(), word }),
            None if verdict == Verdict::Transitive => {
                let (xbar, ybar) = (ts[0].clone(), t.clone());
                verdict = if exhausted {
                    Verdict::NotTransitive { xbar, ybar }
                } else {
                    Verdict::Inconclusive { xbar, ybar }
                };
            }
            None => {}
        }
    }
    OracleReport { verdict, tuples: ts.len(), length_cap, states, connections }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free_product::FactorSpec;

    fn c2c3() -> FreeProduct {
        FreeProduct::new(FactorSpec::cyclic(Side::G, 2).unwrap(), FactorSpec::cyclic(Side::H, 3).unwrap())
    }

    /// `C2 * C3` acting on `{0, 1, 2, 3}`: `g` swaps 1 and 2, `h` cycles
    /// 1, 2, 3, and 0 is fixed by everything.
    struct Toy;

    impl TupleAction for Toy {
        type P = usize;
        fn generators(&self) -> Vec<Letter> {
            vec![Letter::g(1), Letter::h(1), Letter::h(2)]
        }
        fn apply(&self, l: Letter, p: &usize) -> Option<usize> {
            Some(match (l.side, *p) {
                (_, 0) => 0,
                (Side::G, 1) => 2,
                (Side::G, 2) => 1,
                (Side::G, q) => q,
                (Side::H, q) => (q - 1 + l.code as usize) % 3 + 1,
            })
        }
    }

    /// Left multiplication of `C2 * C3` on itself.
    struct Regular(FreeProduct);

    impl TupleAction for Regular {
        type P = Word;
        fn generators(&self) -> Vec<Letter> {
            vec![Letter::g(1), Letter::h(1), Letter::h(2)]
        }
        fn apply(&self, l: Letter, p: &Word) -> Option<Word> {
            Some(crate::verify::left_mul(&self.0, l, p))
        }
    }

    #[test]
    fn regular_action_is_transitive() {
        let fp = c2c3();
        let pts: Vec<Word> = ["1", "g1", "h1"].iter().map(|s| fp.parse_word(s).unwrap()).collect();
        let r = oracle_on_action(&fp, &Regular(fp.clone()), &pts, |w| Point::Elem(w.clone()), 1, 4, 10_000);
        assert!(r.is_transitive());
        assert_eq!(r.connections.len(), 2);
        assert_eq!(r.connections[0].word.to_string(), "g1");
    }

    #[test]
    fn fixed_point_is_a_counterexample() {
        let fp = c2c3();
        let toy = Toy;
        let r = oracle_on_action(&fp, &toy, &[0, 1], |p| Point::Index(*p as i64), 1, 10, 10_000);
        assert_eq!(r.verdict, Verdict::NotTransitive { xbar: vec![Point::Index(0)], ybar: vec![Point::Index(1)] });
        let r = oracle_on_action(&fp, &toy, &[1, 2, 3], |p| Point::Index(*p as i64), 1, 10, 10_000);
        assert!(r.is_transitive());
    }

    #[test]
    fn cap_hit_is_inconclusive() {
        let fp = c2c3();
        let pts: Vec<Word> = ["1", "g1.h1.g1.h1"].iter().map(|s| fp.parse_word(s).unwrap()).collect();
        let r = oracle_on_action(&fp, &Regular(fp.clone()), &pts, |w| Point::Elem(w.clone()), 1, 2, 10_000);
        assert!(matches!(r.verdict, Verdict::Inconclusive { .. }));
    }

    #[test]
    fn portal_search_on_the_base_action() {
        let fp = c2c3();
        let act = NaiveAction::new(&fp, &[]);
        let pts: Vec<Word> = fp.enumerate_words(3, None).take(4).collect();
        let one = tuples(&pts, 1);
        let (found, _) = portal_connect(&act, &one, 8, 1, &mut 1000);
        assert!(found.iter().all(Option::is_some));
        // Left multiplication alone is not 2-transitive.
        let two = tuples(&pts, 2);
        let (found, _) = portal_connect(&act, &two, 8, 1, &mut 1000);
        assert!(found.iter().any(Option::is_none));
    }
}
