//! Input gate, requirement scheduling and the synthesis loop.
//!
//! A run handles finitely many requirements: `k`-transitivity between
//! tuples of distinct points from a window, and faithfulness for every
//! reduced word up to a syllable bound. Each engine step only extends the
//! current state away from its frozen set, so witnesses found early stay
//! valid for the rest of the run.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use crate::certificate::{ActionData, Certificate, Entry, Report};
use crate::countable::{index_at, InfiniteModel, Point, SearchBudget};
use crate::error::{Error, Result};
use crate::finite_engine::{self, FiniteConfig, FiniteState, FiniteStep, V2Policy};
use crate::free_product::{FactorSpec, FreeProduct, Side, Word};
use crate::infinite_engine::{self, FaithfulExtension, InfiniteState, TransitiveExtension};
use crate::witness::{FaithfulnessWitness, TransitivityWitness, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Engine {
    /// `H` finite of order at least three.
    Finite,
    /// Both factors infinite cyclic.
    Infinite,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Finite => "finite",
            Engine::Infinite => "infinite",
        }
    }

    pub fn parse(text: &str) -> Result<Engine> {
        match text {
            "finite" => Ok(Engine::Finite),
            "infinite" => Ok(Engine::Infinite),
            _ => Err(Error::Parse(format!("unknown engine `{text}`"))),
        }
    }
}

/// Outcome of [`gate`]: the engine and the factors in the roles it needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Selection {
    pub engine: Engine,
    pub fp: FreeProduct,
    /// The input factors were exchanged so that `H` is the finite one.
    pub swapped: bool,
}

fn big_finite(f: &FactorSpec) -> bool {
    f.order().is_some_and(|n| n >= 3)
}

fn with_side(f: &FactorSpec, side: Side) -> FactorSpec {
    FactorSpec { side, kind: f.kind.clone() }
}

/// Picks the engine for `G * H`, exchanging the factors when only `G` is
/// finite of order at least three.
pub fn gate(g: &FactorSpec, h: &FactorSpec) -> Result<Selection> {
    for f in [g, h] {
        if f.order() == Some(1) {
            return Err(Error::InvalidFactor("factors must be non-trivial".into()));
        }
    }
    let pick = |engine, swapped: bool| {
        let (a, b) = if swapped { (h, g) } else { (g, h) };
        Ok(Selection { engine, fp: FreeProduct::new(with_side(a, Side::G), with_side(b, Side::H)), swapped })
    };
    match (g.order(), h.order()) {
        (Some(2), Some(2)) => Err(Error::TheoremGateViolation(
            "C2 * C2 is the infinite dihedral group; its infinite cyclic subgroup of index two is normal, and a \
             nontrivial normal subgroup of a highly transitive group must itself be highly transitive, which an \
             abelian group is not, so it admits no faithful highly transitive action"
                .into(),
        )),
        _ if big_finite(h) => pick(Engine::Finite, false),
        _ if big_finite(g) => pick(Engine::Finite, true),
        (None, None) => pick(Engine::Infinite, false),
        _ => Err(Error::UnsupportedPairing(
            "C2 paired with an infinite factor: the infinite-factor engine needs both factors infinite and the \
             finite-factor engine needs a finite factor of order at least 3; such products do admit faithful \
             highly transitive actions, but neither engine builds one"
                .into(),
        )),
    }
}

/// One requirement of the run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Requirement {
    Transitivity { k: usize, xbar: Vec<Point>, ybar: Vec<Point> },
    Faithfulness(Word),
}

impl Requirement {
    /// `max(k, word length)`, the first component of the fairness order.
    pub fn weight(&self) -> usize {
        match self {
            Requirement::Transitivity { k, .. } => *k,
            Requirement::Faithfulness(w) => w.len(),
        }
    }

    fn kind_rank(&self) -> u8 {
        match self {
            Requirement::Transitivity { .. } => 0,
            Requirement::Faithfulness(_) => 1,
        }
    }

    pub fn is_met_by(&self, witness: &Witness) -> bool {
        match (self, witness) {
            (Requirement::Transitivity { k, xbar, ybar }, Witness::Transitivity(t)) => {
                t.k == *k && t.xbar == *xbar && t.ybar == *ybar
            }
            (Requirement::Faithfulness(w), Witness::Faithfulness(f)) => f.word == *w,
            _ => false,
        }
    }
}

/// The fairness order: weight, transitivity before faithfulness, then
/// lexicographic.
impl Ord for Requirement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight().cmp(&other.weight()).then(self.kind_rank().cmp(&other.kind_rank())).then_with(|| {
            match (self, other) {
                (
                    Requirement::Transitivity { k: k1, xbar: x1, ybar: y1 },
                    Requirement::Transitivity { k: k2, xbar: x2, ybar: y2 },
                ) => (k1, x1, y1).cmp(&(k2, x2, y2)),
                (Requirement::Faithfulness(a), Requirement::Faithfulness(b)) => a.cmp(b),
                _ => Ordering::Equal,
            }
        })
    }
}

impl PartialOrd for Requirement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The first `window` points of `X` in model order.
pub fn window_points(sel: &Selection, window: usize, code_window: usize) -> Vec<Point> {
    match sel.engine {
        Engine::Finite => sel.fp.enumerate_words(usize::MAX, Some(code_window)).take(window).map(Point::Elem).collect(),
        Engine::Infinite => (0..window as u64).map(|n| Point::Index(index_at(n))).collect(),
    }
}

/// Ordered `k`-tuples of distinct entries of `pts`, in lexicographic order
/// of positions.
pub fn tuples<T: Clone>(pts: &[T], k: usize) -> Vec<Vec<T>> {
    fn go<T: Clone>(pts: &[T], k: usize, used: &mut Vec<usize>, out: &mut Vec<Vec<T>>) {
        if used.len() == k {
            out.push(used.iter().map(|&i| pts[i].clone()).collect());
            return;
        }
        for i in 0..pts.len() {
            if !used.contains(&i) {
                used.push(i);
                go(pts, k, used, out);
                used.pop();
            }
        }
    }
    let mut out = Vec::new();
    if k <= pts.len() {
        go(pts, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Every requirement of a run, sorted in fairness order.
pub fn requirements(sel: &Selection, cfg: &SynthConfig) -> Vec<Requirement> {
    let pts = window_points(sel, cfg.window, cfg.code_window);
    let mut out = Vec::new();
    for k in 1..=cfg.k_max {
        let ts = tuples(&pts, k);
        for x in &ts {
            for y in &ts {
                out.push(Requirement::Transitivity { k, xbar: x.clone(), ybar: y.clone() });
            }
        }
    }
    out.extend(
        sel.fp
            .enumerate_words(cfg.word_len_max, Some(cfg.code_window))
            .filter(|w| !w.is_identity())
            .map(Requirement::Faithfulness),
    );
    out.sort();
    out
}

#[derive(Clone, Debug)]
pub struct SynthConfig {
    pub k_max: usize,
    pub word_len_max: usize,
    pub window: usize,
    /// Cap on engine extensions; `None` runs until every requirement is met.
    pub steps: Option<usize>,
    /// Nontrivial codes of an infinite factor used in windows and words.
    pub code_window: usize,
    pub seed: u64,
    pub time_budget: Option<Duration>,
    pub v2_policy: V2Policy,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            k_max: 3,
            word_len_max: 6,
            window: 6,
            steps: None,
            code_window: 2,
            seed: 0,
            time_budget: None,
            v2_policy: V2Policy::Minimal,
        }
    }
}

impl SynthConfig {
    pub fn finite(&self) -> FiniteConfig {
        FiniteConfig {
            code_window: self.code_window.max(FiniteConfig::default().code_window),
            seed: self.seed,
            v2_policy: self.v2_policy,
            ..FiniteConfig::default()
        }
    }
}

/// What an observer sees after each engine extension.
pub enum StepEvent<'a> {
    FiniteTransitive { before: &'a FiniteState, step: &'a FiniteStep },
    FiniteFaithful { before: &'a FiniteState, after: &'a FiniteState, witness: &'a FaithfulnessWitness },
    InfiniteTransitive { before: &'a InfiniteState, ext: &'a TransitiveExtension },
    InfiniteFaithful { before: &'a InfiniteState, ext: &'a FaithfulExtension },
}

#[derive(Clone, Debug)]
pub enum EngineState {
    Finite(FiniteState),
    Infinite(InfiniteState),
}

/// Bit-exact image of the state on a point set, for preservation checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Restriction {
    /// `(point, [h·point for each nontrivial h])`.
    Finite(Vec<(Word, Vec<Word>)>),
    /// `(point, σ(point), σ⁻¹(point))`.
    Infinite(Vec<(i64, Option<i64>, Option<i64>)>),
}

/// An engine state plus the step-level API shared by both engines.
#[derive(Clone, Debug)]
pub struct Driver {
    pub selection: Selection,
    pub state: EngineState,
    finite_cfg: FiniteConfig,
    budget: SearchBudget,
    pub steps: usize,
}

fn index_of(p: &Point) -> Result<i64> {
    p.as_index().ok_or_else(|| Error::InvalidArgument(format!("{p} is not an index point")))
}

fn word_of(p: &Point) -> Result<Word> {
    p.as_word().cloned().ok_or_else(|| Error::InvalidArgument(format!("{p} is not a group element")))
}

impl Driver {
    pub fn new(selection: Selection, cfg: &SynthConfig) -> Self {
        let state = match selection.engine {
            Engine::Finite => EngineState::Finite(FiniteState::new(selection.fp.clone())),
            Engine::Infinite => EngineState::Infinite(InfiniteState::new(InfiniteModel::identity())),
        };
        Driver { selection, state, finite_cfg: cfg.finite(), budget: SearchBudget::default(), steps: 0 }
    }

    pub fn fp(&self) -> &FreeProduct {
        &self.selection.fp
    }

    pub fn frozen(&self) -> Vec<Point> {
        match &self.state {
            EngineState::Finite(s) => s.frozen.iter().cloned().map(Point::Elem).collect(),
            EngineState::Infinite(s) => s.frozen.iter().copied().map(Point::Index).collect(),
        }
    }

    pub fn restrict(&self, set: &[Point]) -> Result<Restriction> {
        match &self.state {
            EngineState::Finite(s) => {
                let codes = self.fp().h().nontrivial_codes(0);
                let rows = set
                    .iter()
                    .map(|p| {
                        let x = word_of(p)?;
                        let row = codes.iter().map(|&h| s.action.h_act(h, &x)).collect();
                        Ok((x, row))
                    })
                    .collect::<Result<_>>()?;
                Ok(Restriction::Finite(rows))
            }
            EngineState::Infinite(s) => {
                let pts = set.iter().map(index_of).collect::<Result<BTreeSet<i64>>>()?;
                Ok(Restriction::Infinite(s.restrict(&pts)))
            }
        }
    }

    pub fn transitive(
        &mut self,
        xbar: &[Point],
        ybar: &[Point],
        observer: &mut dyn FnMut(StepEvent),
    ) -> Result<TransitivityWitness> {
        self.steps += 1;
        match &mut self.state {
            EngineState::Finite(s) => {
                let x = xbar.iter().map(word_of).collect::<Result<Vec<_>>>()?;
                let y = ybar.iter().map(word_of).collect::<Result<Vec<_>>>()?;
                let step = finite_engine::extend_transitive(s, &x, &y, &self.finite_cfg)?;
                observer(StepEvent::FiniteTransitive { before: s, step: &step });
                *s = step.state;
                Ok(step.witness)
            }
            EngineState::Infinite(s) => {
                let x = xbar.iter().map(index_of).collect::<Result<Vec<_>>>()?;
                let y = ybar.iter().map(index_of).collect::<Result<Vec<_>>>()?;
                let ext = infinite_engine::extend_transitive(s, &x, &y, self.budget)?;
                observer(StepEvent::InfiniteTransitive { before: s, ext: &ext });
                *s = ext.state;
                Ok(ext.witness)
            }
        }
    }

    pub fn faithful(&mut self, w: &Word, observer: &mut dyn FnMut(StepEvent)) -> Result<FaithfulnessWitness> {
        self.steps += 1;
        match &mut self.state {
            EngineState::Finite(s) => {
                let (next, witness) = finite_engine::extend_faithful(s, w, &self.finite_cfg)?;
                observer(StepEvent::FiniteFaithful { before: s, after: &next, witness: &witness });
                *s = next;
                Ok(witness)
            }
            EngineState::Infinite(s) => {
                let ext = infinite_engine::extend_faithful(s, w, self.budget)?;
                observer(StepEvent::InfiniteFaithful { before: s, ext: &ext });
                *s = ext.state;
                Ok(ext.witness)
            }
        }
    }

    /// The final state as certificate data.
    pub fn action_data(&self) -> ActionData {
        match &self.state {
            EngineState::Finite(s) => {
                ActionData::Action(s.action.exceptions().map(|(h, x, y)| (h, x.clone(), y.clone())).collect())
            }
            EngineState::Infinite(s) => ActionData::Sigma {
                iota: s.model.iota_pairs().collect(),
                sigma: s.sigma.pairs().map(|(a, b)| (*a, *b)).collect(),
            },
        }
    }
}

/// Transitivity through a fixed anchor tuple.
///
/// For the finite-factor engine every `n`-tuple `x̄` (`n = min(k_max,
/// window)`) gets one engine step to a word `W(x̄)` sending it to the anchor,
/// the first `n` window points. A requirement `x̄ → ȳ` with `k ≤ n` pads
/// both tuples with the least unused window points and takes
/// `W(ȳ)⁻¹ W(x̄)`. Its trajectories run along the two frozen ones, so the
/// composed witness is as stable as its parts.
struct AnchorTable {
    anchor: Vec<Point>,
    words: BTreeMap<Vec<Point>, Word>,
}

impl AnchorTable {
    fn pad(&self, pts: &[Point], t: &[Point]) -> Vec<Point> {
        let mut out = t.to_vec();
        out.extend(pts.iter().filter(|p| !t.contains(p)).take(self.anchor.len() - t.len()).cloned());
        out
    }

    fn compose(&self, fp: &FreeProduct, pts: &[Point], x: &[Point], y: &[Point]) -> Option<Word> {
        let wx = self.words.get(&self.pad(pts, x))?;
        let wy = self.words.get(&self.pad(pts, y))?;
        Some(fp.multiply(&fp.inverse(wy), wx))
    }
}

/// Engine steps for the anchor table, tuples over the first points first.
fn anchor_schedule(pts: &[Point], n: usize) -> Vec<Vec<Point>> {
    let position = |p: &Point| pts.iter().position(|q| q == p).unwrap();
    let mut ts = tuples(pts, n);
    ts.sort_by_key(|t| t.iter().map(position).max());
    ts
}

fn check_time(start: Instant, cfg: &SynthConfig) -> Result<()> {
    match cfg.time_budget {
        Some(b) if start.elapsed() > b => Err(Error::StepBudgetExceeded(format!("time budget of {b:?} used up"))),
        _ => Ok(()),
    }
}

/// Runs the requirement schedule and returns the certificate.
pub fn synthesize(g: &FactorSpec, h: &FactorSpec, cfg: &SynthConfig) -> Result<Certificate> {
    synthesize_observed(g, h, cfg, &mut |_| {})
}

pub fn synthesize_observed(
    g: &FactorSpec,
    h: &FactorSpec,
    cfg: &SynthConfig,
    observer: &mut dyn FnMut(StepEvent),
) -> Result<Certificate> {
    let sel = gate(g, h)?;
    let start = Instant::now();
    let reqs = requirements(&sel, cfg);
    let pts = window_points(&sel, cfg.window, cfg.code_window);
    let mut driver = Driver::new(sel.clone(), cfg);
    let step_cap = cfg.steps.unwrap_or(usize::MAX);
    let mut witnesses: Vec<Option<Witness>> = vec![None; reqs.len()];

    match sel.engine {
        Engine::Infinite => {
            for (req, slot) in reqs.iter().zip(witnesses.iter_mut()) {
                if driver.steps >= step_cap {
                    break;
                }
                check_time(start, cfg)?;
                *slot = Some(match req {
                    Requirement::Transitivity { xbar, ybar, .. } => {
                        Witness::Transitivity(driver.transitive(xbar, ybar, observer)?)
                    }
                    Requirement::Faithfulness(w) => Witness::Faithfulness(driver.faithful(w, observer)?),
                });
            }
        }
        Engine::Finite => {
            let n = cfg.k_max.min(pts.len());
            let mut table = AnchorTable { anchor: pts[..n].to_vec(), words: BTreeMap::new() };
            if n > 0 && step_cap > 0 {
                table.words.insert(table.anchor.clone(), Word::identity());
            }
            for t in anchor_schedule(&pts, n) {
                if driver.steps >= step_cap {
                    break;
                }
                if t == table.anchor {
                    continue;
                }
                check_time(start, cfg)?;
                let anchor = table.anchor.clone();
                let wit = driver.transitive(&t, &anchor, observer)?;
                table.words.insert(t, wit.word);
            }
            for (req, slot) in reqs.iter().zip(witnesses.iter_mut()) {
                match req {
                    Requirement::Transitivity { k, xbar, ybar } => {
                        if let Some(word) = table.compose(&sel.fp, &pts, xbar, ybar) {
                            *slot = Some(Witness::Transitivity(TransitivityWitness {
                                k: *k,
                                xbar: xbar.clone(),
                                ybar: ybar.clone(),
                                word,
                            }));
                        }
                    }
                    Requirement::Faithfulness(w) => {
                        if driver.steps >= step_cap {
                            continue;
                        }
                        check_time(start, cfg)?;
                        *slot = Some(Witness::Faithfulness(driver.faithful(w, observer)?));
                    }
                }
            }
        }
    }

    let entries: Vec<Entry> = witnesses.into_iter().flatten().map(Entry).collect();
    let report = Report {
        requirements: reqs.len(),
        satisfied: entries.len(),
        engine_steps: driver.steps,
        k_max: cfg.k_max,
        word_len_max: cfg.word_len_max,
        window: cfg.window,
    };
    Ok(Certificate {
        fp: sel.fp.clone(),
        engine: sel.engine,
        swapped: sel.swapped,
        frozen: driver.frozen(),
        action: driver.action_data(),
        entries,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(side: Side, s: &str) -> FactorSpec {
        FactorSpec::parse(side, s).unwrap()
    }

    fn select(g: &str, h: &str) -> Result<Selection> {
        gate(&spec(Side::G, g), &spec(Side::H, h))
    }

    #[test]
    fn gate_examples() {
        let e = select("c2", "c2").unwrap_err();
        assert!(matches!(e, Error::TheoremGateViolation(_)));
        assert!(e.to_string().contains("infinite dihedral"));
        assert!(matches!(select("c2", "z"), Err(Error::UnsupportedPairing(_))));
        assert!(matches!(select("z", "c2"), Err(Error::UnsupportedPairing(_))));
        assert_eq!(select("c2", "c3").unwrap().engine, Engine::Finite);
        assert_eq!(select("z", "z").unwrap().engine, Engine::Infinite);
        let s = select("c3", "c2").unwrap();
        assert!(s.swapped);
        assert_eq!(s.fp.g().order(), Some(2));
        assert_eq!(s.fp.h().order(), Some(3));
        assert_eq!(select("z", "c4").unwrap().engine, Engine::Finite);
    }

    #[test]
    fn tuple_counts() {
        let pts: Vec<u8> = (0..6).collect();
        assert_eq!(tuples(&pts, 1).len(), 6);
        assert_eq!(tuples(&pts, 2).len(), 30);
        assert_eq!(tuples(&pts, 3).len(), 120);
        assert!(tuples(&pts, 7).is_empty());
    }

    #[test]
    fn fairness_order() {
        let sel = select("c2", "c3").unwrap();
        let cfg = SynthConfig { k_max: 2, word_len_max: 2, window: 3, ..SynthConfig::default() };
        let reqs = requirements(&sel, &cfg);
        assert_eq!(reqs.len(), 9 + 36 + 3 + 4);
        let weights: Vec<(usize, u8)> = reqs.iter().map(|r| (r.weight(), r.kind_rank())).collect();
        let mut sorted = weights.clone();
        sorted.sort();
        assert_eq!(weights, sorted);
        assert!(matches!(&reqs[9], Requirement::Faithfulness(w) if w.len() == 1));
    }

    #[test]
    fn zero_steps_give_an_empty_certificate() {
        let cfg = SynthConfig { steps: Some(0), ..SynthConfig::default() };
        for (g, h) in [("c2", "c3"), ("z", "z")] {
            let cert = synthesize(&spec(Side::G, g), &spec(Side::H, h), &cfg).unwrap();
            assert!(cert.entries.is_empty());
            assert_eq!(cert.report.engine_steps, 0);
        }
    }

    #[test]
    fn small_infinite_run_respects_the_pair_bound() {
        let cfg = SynthConfig { k_max: 1, word_len_max: 2, window: 2, ..SynthConfig::default() };
        let cert = synthesize(&spec(Side::G, "z"), &spec(Side::H, "z"), &cfg).unwrap();
        assert_eq!(cert.entries.len(), cert.report.requirements);
        let ActionData::Sigma { sigma, .. } = &cert.action else { panic!("expected sigma") };
        assert!(sigma.len() <= cert.report.requirements * 6);
    }
}
