//! Transitivity and faithfulness extensions when `H` is finite with
//! `|H| ≥ 3`.
//!
//! `X` is `G * H` itself and the current action is left multiplication
//! outside a finite exception table. Before each step the frozen set is
//! enlarged to `K`: the `σ(H)`-saturated union of `H`-cosets whose vertices
//! form a subtree of the Bass-Serre tree. For such a `K` every point of
//! `X \ K` is `u·z` for a unique root `z ∈ K̄ \ K` and `u ∈ Ȳ`, and `σ` is
//! already left multiplication on each copy `Ȳ·z`. The intermediate action
//! `β` is therefore `σ` itself, with charts given by right multiplication.
//! All chart distances are word distances, by right invariance.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::countable::{search_words, HAction, Point};
use crate::error::{Error, Result};
use crate::free_product::{FreeProduct, Letter, Side, Word};
use crate::geometry::{coset_rep, in_shadow, member_ybar};
use crate::witness::{FaithfulnessWitness, TransitivityWitness};

/// How `v₂ = (gh)^m·v₁` picks its exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum V2Policy {
    /// `m = 2·diam(K ∪ v₁(K))`, the diameter taken in the Schreier graph.
    Diameter,
    /// The least `m ≥ 1` making `K`, `v₁(K)`, `v₂(K)` pairwise disjoint.
    Minimal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FiniteConfig {
    /// Codes of an infinite `G` used when enumerating words.
    pub code_window: usize,
    /// Syllable bound for the displacement search.
    pub displace_bound: usize,
    /// Work units (search-tree nodes weighted by their set sizes) the
    /// exact displacement search may spend.
    pub displace_nodes: usize,
    /// Random words tried per length once exact search gives up.
    pub samples_per_length: usize,
    pub seed: u64,
    pub v2_policy: V2Policy,
    /// Longest chart word tried when placing splice points.
    pub placement_depth: usize,
    /// Ball size cap for Schreier-graph searches.
    pub bfs_cap: usize,
}

impl Default for FiniteConfig {
    fn default() -> Self {
        FiniteConfig {
            code_window: 4,
            displace_bound: 64,
            displace_nodes: 1 << 21,
            samples_per_length: 64,
            seed: 0,
            v2_policy: V2Policy::Minimal,
            placement_depth: 6,
            bfs_cap: 200_000,
        }
    }
}

fn h_rep(w: &Word) -> Word {
    coset_rep(w, Side::H)
}

/// `H`-vertex representatives on the tree path from `H·root` to `H·c`.
fn path_h_vertices(fp: &FreeProduct, root: &Word, c: &Word) -> Vec<Word> {
    let q = h_rep(&fp.multiply(c, &fp.inverse(root)));
    (0..=q.len())
        .filter(|&j| j == 0 || q.letters()[j - 1].side == Side::G)
        .map(|j| h_rep(&fp.multiply(&q.suffix(j).unwrap(), root)))
        .collect()
}

/// Nontrivial elements of `G` used for `G`-saturation: all of them when `G`
/// is finite, the first `window` codes otherwise.
fn g_codes(fp: &FreeProduct, window: usize) -> Vec<i64> {
    fp.g().nontrivial_codes(window)
}

fn h_codes(fp: &FreeProduct) -> Vec<i64> {
    fp.h().nontrivial_codes(0)
}

/// The sets `F ⊆ K ⊆ K̄` of a step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KDecomposition {
    pub f: BTreeSet<Word>,
    pub k: BTreeSet<Word>,
    /// `G`-coset representatives of the orbits making up `K̄`.
    pub kbar_roots: BTreeSet<Word>,
    /// Points of `K̄ \ K`; only the first `code_window` codes per point
    /// when `G` is infinite.
    pub exit_roots: Vec<Word>,
    k_lookup: HashSet<Word>,
    hull: HashSet<Word>,
    root: Word,
}

impl KDecomposition {
    pub fn contains(&self, x: &Word) -> bool {
        self.k_lookup.contains(x)
    }

    pub fn len(&self) -> usize {
        self.k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k.is_empty()
    }

    pub fn in_kbar(&self, x: &Word) -> bool {
        self.kbar_roots.contains(&coset_rep(x, Side::G))
    }

    /// `(u, z)` with `p = u·z`, `u ∈ Ȳ`, `z ∈ K̄ \ K`; `None` on `K`.
    pub fn locate(&self, fp: &FreeProduct, p: &Word) -> Option<(Word, Word)> {
        if self.contains(p) {
            return None;
        }
        let q = h_rep(&fp.multiply(p, &fp.inverse(&self.root)));
        let mut prev = q.len();
        for j in (0..=q.len()).rev().filter(|&j| j == 0 || q.letters()[j - 1].side == Side::G) {
            let s = q.suffix(j).unwrap();
            if self.hull.contains(&h_rep(&fp.multiply(&s, &self.root))) {
                let z = fp.multiply(&q.suffix(prev).unwrap(), &self.root);
                let u = fp.multiply(p, &fp.inverse(&z));
                return Some((u, z));
            }
            prev = j;
        }
        unreachable!("the root coset is in the hull")
    }
}

/// Closes `F` under `σ(H)`, then takes the convex hull of the `H`-cosets,
/// repeating until stable.
pub fn compute_k(action: &HAction, f: &BTreeSet<Word>, code_window: usize) -> Result<KDecomposition> {
    grow_k(action, None, f, code_window)
}

/// As [`compute_k`] for `F ∪ prev.k`, reusing the closure already done for
/// `prev`. Valid when the action is unchanged on `prev.k`.
pub fn grow_k(
    action: &HAction,
    prev: Option<&KDecomposition>,
    f: &BTreeSet<Word>,
    code_window: usize,
) -> Result<KDecomposition> {
    let fp = action.fp();
    if !fp.h().is_finite() {
        return Err(Error::InvalidArgument("the finite-factor engine needs a finite H".into()));
    }
    let (mut k, mut hull, root) = match prev {
        Some(p) => (p.k_lookup.clone(), p.hull.clone(), p.root.clone()),
        None => match f.iter().next() {
            Some(x) => (HashSet::new(), HashSet::new(), h_rep(x)),
            None => return Err(Error::EmptyInput),
        },
    };
    let hs = h_codes(fp);
    let mut work: Vec<Word> = f.iter().filter(|x| k.insert((*x).clone())).cloned().collect();
    loop {
        let mut reps = Vec::new();
        while let Some(x) = work.pop() {
            let r = h_rep(&x);
            if !hull.contains(&r) {
                reps.push(r);
            }
            for &h in &hs {
                let y = action.h_act(h, &x);
                if k.insert(y.clone()) {
                    work.push(y);
                }
            }
        }
        if reps.is_empty() {
            break;
        }
        for c in reps {
            if hull.contains(&c) {
                continue;
            }
            for v in path_h_vertices(fp, &root, &c) {
                if !hull.insert(v.clone()) {
                    continue;
                }
                for &h in &hs {
                    let mut y = v.clone();
                    fp.left_mul_letter(Letter::h(h), &mut y);
                    if k.insert(y.clone()) {
                        work.push(y);
                    }
                }
                if k.insert(v.clone()) {
                    work.push(v);
                }
            }
        }
    }
    let mut exits = BTreeSet::new();
    let gs = g_codes(fp, code_window);
    for x in &k {
        for &g in &gs {
            let mut y = x.clone();
            fp.left_mul_letter(Letter::g(g), &mut y);
            if !k.contains(&y) {
                exits.insert(y);
            }
        }
    }
    if exits.is_empty() {
        return Err(Error::AdmissibilityViolation(
            "every point of K̄ lies in K, so K is a union of finite orbits".into(),
        ));
    }
    Ok(KDecomposition {
        f: f.clone(),
        kbar_roots: k.iter().map(|x| coset_rep(x, Side::G)).collect(),
        k: k.iter().cloned().collect(),
        exit_roots: exits.into_iter().collect(),
        k_lookup: k,
        hull,
        root,
    })
}

/// The intermediate action: `σ` on `K`, left multiplication on every copy
/// `Ȳ·z`.
#[derive(Clone, Debug)]
pub struct Beta {
    pub action: HAction,
    pub kd: KDecomposition,
    /// Where sampled displacement starts looking: a bit below the length
    /// that worked last step, since `K` only grows.
    pub length_hint: usize,
}

/// Checks that `σ` is left multiplication off `K`, so that `β = σ`.
pub fn build_beta(sigma: &HAction, kd: KDecomposition) -> Result<Beta> {
    if let Some(x) = sigma.support().find(|x| !kd.contains(x)) {
        return Err(Error::Internal(format!("exception at {x} lies outside K")));
    }
    Ok(Beta { action: sigma.clone(), kd, length_hint: 0 })
}

impl Beta {
    pub fn fp(&self) -> &FreeProduct {
        self.action.fp()
    }

    pub fn embed(&self, u: &Word, z: &Word) -> Word {
        self.fp().multiply(u, z)
    }

    pub fn locate(&self, p: &Word) -> Option<(Word, Word)> {
        self.kd.locate(self.fp(), p)
    }

    /// Coordinate of `p` in the copy rooted at `z`.
    pub fn coord(&self, p: &Word, z: &Word) -> Word {
        self.fp().multiply(p, &self.fp().inverse(z))
    }
}

/// First point of a `β`-trajectory outside `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exit {
    pub index: usize,
    pub root: Word,
    pub points: Vec<Word>,
    /// Chart coordinates of `points[index..]` in the copy at `root`.
    pub coords: Vec<Word>,
}

impl Exit {
    pub fn end(&self) -> ChartPoint {
        ChartPoint {
            point: self.points.last().unwrap().clone(),
            root: self.root.clone(),
            coord: self.coords.last().unwrap().clone(),
        }
    }
}

/// First exit of the trajectory of `w` from `x ∈ K`, after checking that
/// the distance from the exit point strictly increases along the rest.
///
/// Past the exit each step must be plain left multiplication that extends
/// the chart coordinate without cancellation; `d(z, c·z) = |c|` then gives
/// the distances directly.
pub fn first_exit_check(beta: &Beta, w: &Word, x: &Word) -> Result<Option<Exit>> {
    let traj = beta.action.trajectory(w, x).points;
    let Some(j) = traj.iter().position(|p| !beta.kd.contains(p)) else {
        return Ok(None);
    };
    let z = traj[j].clone();
    if j == 0 || !beta.kd.in_kbar(&z) {
        return Err(Error::GeodesicViolation(format!("first exit {z} is not in K̄ \\ K")));
    }
    let fp = beta.fp();
    let mut coords = vec![Word::identity()];
    for n in j + 1..traj.len() {
        let l = w.letters()[n - 1];
        let mut expected = traj[n - 1].clone();
        fp.left_mul_letter(l, &mut expected);
        let mut c = coords.last().unwrap().clone();
        fp.left_mul_letter(l, &mut c);
        if expected != traj[n] || c.len() <= coords.last().unwrap().len() {
            return Err(Error::GeodesicViolation(format!(
                "distance from {z} fails to grow at step {n} of {w} from {x}"
            )));
        }
        coords.push(c);
    }
    Ok(Some(Exit { index: j, root: z, points: traj, coords }))
}

/// The end of the trajectory of `w` from `x ∈ K`, without materializing
/// it: `None` if it never leaves `K`, otherwise the exit index and the end
/// point in its chart. Checks the same conditions as [`first_exit_check`]:
/// the exit is a `G`-step into `K̄ \ K` and every later step is plain left
/// multiplication, so the coordinate is the untouched left part of `w`.
pub fn exit_end(beta: &Beta, w: &Word, x: &Word) -> Result<Option<(usize, ChartPoint)>> {
    let letters = w.letters();
    let mut p = x.clone();
    for (n, &l) in letters.iter().enumerate() {
        beta.action.apply(l, &mut p);
        if beta.kd.contains(&p) {
            continue;
        }
        if l.side != Side::G || !beta.kd.in_kbar(&p) {
            return Err(Error::GeodesicViolation(format!("first exit {p} is not in K̄ \\ K")));
        }
        let root = p.clone();
        for &l in &letters[n + 1..] {
            if beta.action.is_exceptional(&p) && l.side == Side::H {
                return Err(Error::GeodesicViolation(format!("{w} from {x} meets an exception past its exit")));
            }
            beta.fp().left_mul_letter(l, &mut p);
        }
        return Ok(Some((n + 1, ChartPoint { point: p, root, coord: w.prefix_after(n + 1) })));
    }
    Ok(None)
}

fn exit_end_required(beta: &Beta, w: &Word, x: &Word) -> Result<ChartPoint> {
    exit_end(beta, w, x)?.map(|(_, c)| c).ok_or_else(|| Error::Internal(format!("{w} keeps {x} inside K")))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Displacers {
    pub u1: Word,
    pub v1: Word,
    pub v2: Word,
    pub exponent: usize,
    pub diameter: Option<usize>,
}

/// `(gh)^m`.
fn gh_power(fp: &FreeProduct, g: Letter, h: Letter, m: usize) -> Word {
    fp.reduce((0..m).flat_map(|_| [g, h]))
}

/// Schreier-graph distances from `from` to each target, by breadth-first
/// search capped at `cap` visited points.
fn schreier_distances(
    action: &HAction,
    from: &Word,
    targets: &BTreeSet<Word>,
    window: usize,
    cap: usize,
) -> Result<Vec<usize>> {
    let fp = action.fp();
    let gens: Vec<Letter> =
        g_codes(fp, window).into_iter().map(Letter::g).chain(h_codes(fp).into_iter().map(Letter::h)).collect();
    let mut dist: HashMap<Word, usize> = HashMap::from([(from.clone(), 0)]);
    let mut queue = VecDeque::from([from.clone()]);
    let mut found = 0;
    while let Some(x) = queue.pop_front() {
        if targets.contains(&x) {
            found += 1;
            if found == targets.len() {
                break;
            }
        }
        if dist.len() > cap {
            return Err(Error::NotFoundWithinBound { bound: cap });
        }
        let d = dist[&x];
        for &l in &gens {
            let mut y = x.clone();
            action.apply(l, &mut y);
            if !dist.contains_key(&y) {
                dist.insert(y.clone(), d + 1);
                queue.push_back(y);
            }
        }
    }
    targets.iter().map(|t| dist.get(t).copied().ok_or(Error::NotFoundWithinBound { bound: cap })).collect()
}

/// Diameter of `set` in the Schreier graph of `action`.
pub fn schreier_diameter(action: &HAction, set: &BTreeSet<Word>, window: usize, cap: usize) -> Result<usize> {
    let mut best = 0;
    for x in set {
        best = best.max(schreier_distances(action, x, set, window, cap)?.into_iter().max().unwrap_or(0));
    }
    Ok(best)
}

const OUT: u32 = u32::MAX;

/// The Schreier graph of `β` restricted to `K`, on indices into `K` in
/// sorted order: `table(l)[i]` is the index of `l·K[i]`, or `OUT` when
/// that point lies outside `K`.
pub struct KGraph<'a> {
    pts: Vec<&'a Word>,
    tables: Vec<(Letter, Vec<u32>)>,
}

impl<'a> KGraph<'a> {
    pub fn new(beta: &'a Beta, code_window: usize) -> Self {
        let fp = beta.fp();
        let pts: Vec<&Word> = beta.kd.k.iter().collect();
        let index: HashMap<&Word, u32> = pts.iter().enumerate().map(|(i, p)| (*p, i as u32)).collect();
        let mut letters: Vec<Letter> =
            g_codes(fp, code_window).into_iter().map(Letter::g).chain(h_codes(fp).into_iter().map(Letter::h)).collect();
        letters.extend(letters.clone().into_iter().map(|l| fp.inverse_letter(l)));
        letters.sort_by_key(|l| l.key());
        letters.dedup();
        let tables = letters
            .into_iter()
            .map(|l| {
                let t = pts
                    .iter()
                    .map(|x| {
                        let mut y = (*x).clone();
                        beta.action.apply(l, &mut y);
                        index.get(&y).copied().unwrap_or(OUT)
                    })
                    .collect();
                (l, t)
            })
            .collect();
        KGraph { pts, tables }
    }

    pub fn len(&self) -> usize {
        self.pts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pts.is_empty()
    }

    pub fn point(&self, i: u32) -> &'a Word {
        self.pts[i as usize]
    }

    fn table(&self, l: Letter) -> &[u32] {
        &self.tables.iter().find(|(m, _)| *m == l).expect("letter outside the code window").1
    }

    /// Number of syllables of `u` applied to `K[i]` up to and including the
    /// one leaving `K`.
    pub fn exit_step(&self, u: &Word, i: u32) -> Option<usize> {
        let mut p = i;
        for (n, &l) in u.letters().iter().enumerate() {
            p = self.table(l)[p as usize];
            if p == OUT {
                return Some(n + 1);
            }
        }
        None
    }
}

/// A word moving all of `K` off itself: the first one in enumeration order
/// while that search stays within `displace_nodes`, otherwise a sampled
/// one (see [`sampled_displacer`]).
pub fn displace_k(beta: &Beta, cfg: &FiniteConfig) -> Result<Word> {
    displace_on(beta, &KGraph::new(beta, cfg.code_window), cfg)
}

fn displace_on(beta: &Beta, graph: &KGraph, cfg: &FiniteConfig) -> Result<Word> {
    match first_displacer_on(beta, graph, cfg) {
        Err(Error::NotFoundWithinBound { bound }) if bound < cfg.displace_bound => {
            sampled_displacer_on(beta, graph, cfg, bound.max(beta.length_hint.saturating_sub(4)))
        }
        other => other,
    }
}

/// The first word in enumeration order moving all of `K` off itself.
///
/// A normal form never re-enters `K` once its trajectory has left it, so
/// `u` works exactly when no point of `K` stays inside `K` along the whole
/// trajectory. The set of points that do stay, for the leftmost `i`
/// syllables of `u`, is the preimage of the set for the leftmost `i - 1`
/// under the next syllable. A depth-first walk over leftmost syllables
/// therefore visits candidates in enumeration order while sharing work
/// between words with a common left part.
pub fn first_displacer(beta: &Beta, cfg: &FiniteConfig) -> Result<Word> {
    first_displacer_on(beta, &KGraph::new(beta, cfg.code_window), cfg)
}

fn first_displacer_on(beta: &Beta, graph: &KGraph, cfg: &FiniteConfig) -> Result<Word> {
    let fp = beta.fp();
    let side_letters = |side: Side| -> Vec<(Letter, Vec<u32>)> {
        let codes = match side {
            Side::G => g_codes(fp, cfg.code_window),
            Side::H => h_codes(fp),
        };
        codes
            .into_iter()
            .map(|c| {
                let l = Letter::new(side, c);
                (l, graph.table(fp.inverse_letter(l)).to_vec())
            })
            .collect()
    };
    let letters = [side_letters(Side::G), side_letters(Side::H)];
    let all: Vec<u32> = (0..graph.len() as u32).collect();
    let mut nodes = 0usize;

    // For a stay set and the side of the next syllable, the largest number
    // of remaining syllables known not to suffice. Fewer never suffice
    // either, since the empty set is absorbing; this is what makes the
    // deepening over lengths cheap.
    type Memo = HashMap<(Side, Vec<u32>), usize>;
    struct Walk<'a> {
        letters: &'a [Vec<(Letter, Vec<u32>)>; 2],
        len: usize,
        first: Side,
        chosen: Vec<Letter>,
        memo: &'a mut Memo,
    }
    impl Walk<'_> {
        fn side_at(&self, pos: usize) -> Side {
            if pos.is_multiple_of(2) {
                self.first
            } else {
                self.first.other()
            }
        }
        fn go(&mut self, stay: &[u32], nodes: &mut usize, cap: usize) -> Option<bool> {
            let pos = self.chosen.len();
            if pos == self.len {
                return Some(stay.is_empty());
            }
            let side = self.side_at(pos);
            let remaining = self.len - pos;
            let key = (side, stay.to_vec());
            if self.memo.get(&key).is_some_and(|&r| r >= remaining) {
                return Some(false);
            }
            for (l, pre) in &self.letters[side as usize] {
                *nodes += 1 + stay.len();
                if *nodes > cap {
                    return None;
                }
                let mut next: Vec<u32> = stay.iter().map(|&i| pre[i as usize]).filter(|&j| j != OUT).collect();
                next.sort_unstable();
                self.chosen.push(*l);
                if self.go(&next, nodes, cap)? {
                    return Some(true);
                }
                self.chosen.pop();
            }
            self.memo.insert(key, remaining);
            Some(false)
        }
    }

    let mut memo = Memo::new();
    for len in 1..=cfg.displace_bound {
        for first in [Side::G, Side::H] {
            if letters[Side::G as usize].is_empty() || letters[Side::H as usize].is_empty() {
                return Err(Error::InvalidArgument("both factors must be nontrivial".into()));
            }
            let mut walk = Walk { letters: &letters, len, first, chosen: Vec::with_capacity(len), memo: &mut memo };
            match walk.go(&all, &mut nodes, cfg.displace_nodes) {
                Some(true) => return Ok(fp.reduce(walk.chosen)),
                Some(false) => {}
                None => return Err(Error::NotFoundWithinBound { bound: len }),
            }
        }
    }
    Err(Error::NotFoundWithinBound { bound: cfg.displace_bound })
}

/// Seeded random normal forms of increasing length from `min_len`, the
/// first that moves all of `K` off itself.
///
/// Exhaustive search pays for every shorter word, and the early words in
/// enumeration order are the periodic ones that the frozen trajectories
/// already follow, so exact first hits get expensive as `K` grows while
/// random words of similar length displace it easily.
pub fn sampled_displacer(beta: &Beta, cfg: &FiniteConfig, min_len: usize) -> Result<Word> {
    sampled_displacer_on(beta, &KGraph::new(beta, cfg.code_window), cfg, min_len)
}

fn sampled_displacer_on(beta: &Beta, graph: &KGraph, cfg: &FiniteConfig, min_len: usize) -> Result<Word> {
    let fp = beta.fp();
    let codes = [g_codes(fp, cfg.code_window), h_codes(fp)];
    let n = graph.len() as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ n as u64);
    // Points that recently stayed inside; they tend to stay again.
    let mut hints: VecDeque<u32> = VecDeque::new();
    for len in min_len.max(1)..=cfg.displace_bound {
        for _ in 0..cfg.samples_per_length {
            let mut side = if rng.gen() { Side::G } else { Side::H };
            let mut letters = Vec::with_capacity(len);
            for _ in 0..len {
                letters.push(Letter::new(side, *codes[side as usize].choose(&mut rng).unwrap()));
                side = side.other();
            }
            let u = fp.reduce(letters);
            let stays = |i: &u32| graph.exit_step(&u, *i).is_none();
            if let Some(j) = hints.iter().position(stays) {
                let i = hints.remove(j).unwrap();
                hints.push_front(i);
                continue;
            }
            match (0..n).find(stays) {
                Some(i) => {
                    hints.push_front(i);
                    hints.truncate(32);
                }
                None => return Ok(u),
            }
        }
    }
    Err(Error::NotFoundWithinBound { bound: cfg.displace_bound })
}

/// `v₁`, `v₂` starting with `G` with `K`, `v₁(K)`, `v₂(K)` pairwise
/// disjoint, together with `M = v₁(K) ⊔ v₂(K)` in chart form (`v₁` images
/// first, both in the order of `K`).
pub fn find_v1_v2(beta: &Beta, cfg: &FiniteConfig) -> Result<(Displacers, Vec<ChartPoint>)> {
    let fp = beta.fp();
    let g = fp.first_nontrivial(Side::G);
    let h = fp.first_nontrivial(Side::H);
    let graph = KGraph::new(beta, cfg.code_window);
    let u1 = displace_on(beta, &graph, cfg)?;
    let v1 = match u1.leftmost() {
        Some(l) if l.side == Side::G => u1.clone(),
        _ => fp.multiply(&Word::from_rev_unchecked(vec![g]), &u1),
    };
    // Every point leaves K under v1, and a normal form never comes back.
    let e1: Vec<ChartPoint> = (0..graph.len() as u32)
        .map(|i| {
            let n = graph
                .exit_step(&v1, i)
                .ok_or_else(|| Error::Internal(format!("{v1} keeps {} inside K", graph.point(i))))?;
            let root = beta.action.eval_word(&v1.suffix(n).unwrap(), graph.point(i));
            let coord = v1.prefix_after(n);
            Ok(ChartPoint { point: fp.multiply(&coord, &root), root, coord })
        })
        .collect::<Result<_>>()?;
    let v1k: HashSet<&Word> = e1.iter().map(|c| &c.point).collect();
    let shift = |m: usize| -> Vec<ChartPoint> {
        let t = gh_power(fp, g, h, m);
        e1.iter()
            .map(|c| {
                let (mut point, mut coord) = (c.point.clone(), c.coord.clone());
                for &l in t.letters() {
                    beta.action.apply(l, &mut point);
                    fp.left_mul_letter(l, &mut coord);
                }
                ChartPoint { point, root: c.root.clone(), coord }
            })
            .collect()
    };
    let (exponent, diameter) = match cfg.v2_policy {
        V2Policy::Diameter => {
            let both: BTreeSet<Word> = beta.kd.k.iter().chain(v1k.iter().copied()).cloned().collect();
            let d = schreier_diameter(&beta.action, &both, cfg.code_window, cfg.bfs_cap)?;
            (2 * d, Some(d))
        }
        V2Policy::Minimal => {
            let m = (1..=cfg.displace_bound)
                .find(|&m| shift(m).iter().all(|c| !v1k.contains(&c.point)))
                .ok_or(Error::NotFoundWithinBound { bound: cfg.displace_bound })?;
            (m, None)
        }
    };
    let v2 = fp.multiply(&gh_power(fp, g, h, exponent), &v1);
    let e2 = shift(exponent);
    let starts_with_g = |w: &Word| w.leftmost().map(|l| l.side) == Some(Side::G);
    if !starts_with_g(&v1) || !starts_with_g(&v2) {
        return Err(Error::Internal("v1 or v2 does not start with G".into()));
    }
    if e2.iter().any(|c| v1k.contains(&c.point) || beta.kd.contains(&c.point)) {
        return Err(Error::Internal("K, v1(K), v2(K) are not pairwise disjoint".into()));
    }
    let mut m = e1;
    m.extend(e2);
    Ok((Displacers { u1, v1, v2, exponent, diameter }, m))
}

/// A point outside `K` with its copy root and chart coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChartPoint {
    pub point: Word,
    pub root: Word,
    pub coord: Word,
}

impl ChartPoint {
    pub fn new(fp: &FreeProduct, point: Word, root: Word) -> Self {
        let coord = fp.multiply(&point, &fp.inverse(&root));
        ChartPoint { point, root, coord }
    }
}

/// Number of unordered pairs of distinct points whose shadows meet.
///
/// Shadows meet only inside one copy, where they are nested exactly when
/// one coordinate is a normal-form suffix of the other; sorting the
/// coordinates right-to-left turns that into a prefix test on a stack.
pub fn count_shadow_pairs(points: &[ChartPoint]) -> usize {
    let mut by_root: HashMap<&Word, Vec<usize>> = HashMap::new();
    for (i, p) in points.iter().enumerate() {
        by_root.entry(&p.root).or_default().push(i);
    }
    let coords: Vec<&Word> = points.iter().map(|p| &p.coord).collect();
    by_root.into_values().map(|mut g| count_nested(&mut g, &coords)).sum()
}

/// Nested pairs among `coords[i]`, `i ∈ group`, all in one copy.
fn count_nested<W: std::borrow::Borrow<Word>>(group: &mut [usize], coords: &[W]) -> usize {
    if group.len() < 2 {
        return 0;
    }
    let key = |i: &usize| coords[*i].borrow().letters().iter().map(|l| l.key());
    group.sort_by(|a, b| key(a).cmp(key(b)));
    let mut total = 0;
    let mut stack: Vec<&Word> = Vec::new();
    let mut prev: Option<&Word> = None;
    for &i in group.iter() {
        let c = coords[i].borrow();
        if prev == Some(c) {
            continue;
        }
        prev = Some(c);
        while stack.last().is_some_and(|top| !c.has_suffix(top)) {
            stack.pop();
        }
        total += stack.len();
        stack.push(c);
    }
    total
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separation {
    pub w: Word,
    /// `n_s` before the first factor and after each one.
    pub trace: Vec<usize>,
    pub final_points: Vec<ChartPoint>,
}

/// A product `w` of factors `gh`, `gh′` starting with `G`, ending with `H`,
/// after which the shadows of `w(M)` are pairwise disjoint.
pub fn separate_shadows(beta: &Beta, m: &[ChartPoint]) -> Result<Separation> {
    let fp = beta.fp();
    let hs = h_codes(fp);
    if hs.len() < 2 {
        return Err(Error::InvalidArgument("shadow separation needs |H| >= 3".into()));
    }
    let g = fp.first_nontrivial(Side::G);
    let cands = [fp.reduce([g, Letter::h(hs[0])]), fp.reduce([g, Letter::h(hs[1])])];
    // Roots never change: every factor acts by left multiplication on the
    // chart coordinate, which keeps growing on the left.
    let mut group_of: HashMap<&Word, usize> = HashMap::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, p) in m.iter().enumerate() {
        let next = groups.len();
        let gi = *group_of.entry(&p.root).or_insert(next);
        if gi == next {
            groups.push(Vec::new());
        }
        groups[gi].push(i);
    }
    groups.retain(|g| g.len() > 1);
    let count = |coords: &[Word], groups: &mut Vec<Vec<usize>>| -> usize {
        groups.iter_mut().map(|g| count_nested(g, coords)).sum()
    };
    let apply = |c: &Word, coords: &[Word]| -> Vec<Word> {
        coords
            .iter()
            .map(|x| {
                let mut y = x.clone();
                for &l in c.letters() {
                    fp.left_mul_letter(l, &mut y);
                }
                y
            })
            .collect()
    };
    let mut cur: Vec<Word> = m.iter().map(|p| p.coord.clone()).collect();
    let mut ns = count(&cur, &mut groups);
    let mut trace = vec![ns];
    let mut w = Word::identity();
    loop {
        let mut chosen = None;
        for c in &cands {
            let next = apply(c, &cur);
            let n = count(&next, &mut groups);
            if n < ns || (ns == 0 && w.is_identity()) {
                chosen = Some((c.clone(), next, n));
                break;
            }
        }
        let Some((c, next, n)) = chosen else {
            return Err(Error::ProgressFailure);
        };
        w = fp.multiply(&c, &w);
        cur = next;
        ns = n;
        trace.push(n);
        if ns == 0 {
            break;
        }
        if trace.len() > m.len() + 2 {
            return Err(Error::ProgressFailure);
        }
    }
    let final_points: Vec<ChartPoint> = m
        .iter()
        .zip(cur)
        .map(|(p, coord)| ChartPoint { point: fp.multiply(&coord, &p.root), root: p.root.clone(), coord })
        .collect();
    if final_points.iter().any(|p| beta.kd.contains(&p.point)) {
        return Err(Error::Internal("separated points fell back into K".into()));
    }
    Ok(Separation { w, trace, final_points })
}

/// The splice of one transitivity step.
#[derive(Clone, Debug)]
pub struct Splice {
    pub alpha: HAction,
    pub witness: TransitivityWitness,
    /// `A_j` in the order of `H`'s codes `0, 1, ...`.
    pub a_sets: Vec<Vec<Word>>,
    pub p_points: Vec<ChartPoint>,
    /// Every point whose `H`-row was rewritten.
    pub modified: BTreeSet<Word>,
}

fn nested(a: &ChartPoint, b: &ChartPoint) -> bool {
    a.root == b.root && (a.coord.has_suffix(&b.coord) || b.coord.has_suffix(&a.coord))
}

/// Chooses the points `p_{i,j}`, rewrites `β` on the families `A_j` and
/// fixes the rest of their `β(H)`-orbits.
///
/// `separated` is `w₁(K) ⊔ w₂(K)` in chart form. Every trajectory of `w₁`
/// or `w₂` from `K` ends at one of these points, and its part outside `K`
/// consists of the ancestors of that end, so a `p` not nested with any of
/// them keeps its shadow off all those trajectories.
pub fn build_alpha(
    beta: &Beta,
    xbar: &[Word],
    ybar: &[Word],
    w1: &Word,
    w2: &Word,
    separated: &[ChartPoint],
    cfg: &FiniteConfig,
) -> Result<Splice> {
    let fp = beta.fp();
    let k = xbar.len();
    let order = fp.h().order().unwrap() as usize;
    let h = fp.first_nontrivial(Side::H).code;
    let e1: Vec<ChartPoint> = xbar.iter().map(|x| exit_end_required(beta, w1, x)).collect::<Result<_>>()?;
    let e2: Vec<ChartPoint> = ybar.iter().map(|y| exit_end_required(beta, w2, y)).collect::<Result<_>>()?;
    let mut by_root: HashMap<&Word, Vec<&ChartPoint>> = HashMap::new();
    for c in separated.iter().chain(&e1).chain(&e2) {
        by_root.entry(&c.root).or_default().push(c);
    }

    let need = k * (order - 2);
    let mut g_reps: HashSet<Word> = HashSet::new();
    let mut p_points = Vec::with_capacity(need);
    let coords: Vec<Word> = fp
        .enumerate_words(cfg.placement_depth, Some(cfg.code_window))
        .filter(|u| u.len() >= 2 && u.leftmost().map(|l| l.side) == Some(Side::G) && member_ybar(u))
        .collect();
    'roots: for z in &beta.kd.exit_roots {
        for u in &coords {
            if p_points.len() == need {
                break 'roots;
            }
            let cand = ChartPoint { point: beta.embed(u, z), root: z.clone(), coord: u.clone() };
            let blocked = by_root.get(z).is_some_and(|v| v.iter().any(|t| nested(t, &cand)))
                || p_points.iter().any(|t| nested(t, &cand));
            if blocked || g_reps.contains(&coset_rep(&cand.point, Side::G)) {
                continue;
            }
            let orbit_inside =
                h_codes(fp).into_iter().all(|c| in_shadow(fp, z, &cand.point, &beta.action.h_act(c, &cand.point)));
            if !orbit_inside {
                continue;
            }
            g_reps.insert(coset_rep(&cand.point, Side::G));
            p_points.push(cand);
        }
    }
    if p_points.len() < need {
        return Err(Error::PlacementFailure(format!("found {} of {need} points", p_points.len())));
    }

    let codes: Vec<i64> = (0..order as i64).collect();
    let mut alpha = beta.action.clone();
    let mut a_sets = Vec::with_capacity(k);
    let mut modified = BTreeSet::new();
    let mut spare = p_points.iter();
    for j in 0..k {
        let mut a: Vec<Word> = vec![Word::identity(); order];
        a[0] = e1[j].point.clone();
        a[h as usize] = e2[j].point.clone();
        for &c in &codes {
            if c != 0 && c != h {
                a[c as usize] = spare.next().unwrap().point.clone();
            }
        }
        let members: HashSet<&Word> = a.iter().collect();
        for x in &a {
            for y in beta.action.h_orbit(x) {
                if !members.contains(&y) {
                    alpha.set_row(&y, codes[1..].iter().map(|&c| (c, y.clone())));
                    modified.insert(y);
                }
            }
        }
        for &c in &codes {
            let row = codes[1..].iter().map(|&t| (t, a[fp.h().mul(t, c) as usize].clone()));
            alpha.set_row(&a[c as usize], row);
            modified.insert(a[c as usize].clone());
        }
        a_sets.push(a);
    }

    let word = fp.multiply(&fp.inverse(w2), &fp.multiply(&Word::from_rev_unchecked(vec![Letter::h(h)]), w1));
    for (x, y) in xbar.iter().zip(ybar) {
        if alpha.eval_word(&word, x) != *y {
            return Err(Error::Internal(format!("spliced witness does not map {x} to {y}")));
        }
    }
    if !alpha.agrees_on(&beta.action, &beta.kd.f) {
        return Err(Error::Internal("splice changed the action on F".into()));
    }
    Ok(Splice {
        alpha,
        witness: TransitivityWitness {
            k,
            xbar: xbar.iter().cloned().map(Point::Elem).collect(),
            ybar: ybar.iter().cloned().map(Point::Elem).collect(),
            word,
        },
        a_sets,
        p_points,
        modified,
    })
}

/// Engine state for the finite-factor model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteState {
    pub action: HAction,
    pub frozen: BTreeSet<Word>,
    /// `K` of the last transitivity step; the next one grows from it.
    last_k: Option<KDecomposition>,
    last_u1_len: usize,
}

impl FiniteState {
    pub fn new(fp: FreeProduct) -> Self {
        FiniteState { action: HAction::base(fp), frozen: BTreeSet::new(), last_k: None, last_u1_len: 0 }
    }

    /// Rebuilds a state from its action and frozen set.
    pub fn from_parts(action: HAction, frozen: BTreeSet<Word>) -> Self {
        FiniteState { action, frozen, last_k: None, last_u1_len: 0 }
    }

    pub fn last_k(&self) -> Option<&KDecomposition> {
        self.last_k.as_ref()
    }

    /// Every `H`-image of every point of `set`, for preservation checks.
    pub fn restrict(&self, set: &BTreeSet<Word>) -> Vec<(Word, Vec<Word>)> {
        let hs = h_codes(self.action.fp());
        set.iter().map(|x| (x.clone(), hs.iter().map(|&h| self.action.h_act(h, x)).collect())).collect()
    }

    /// `β` for a step on these tuples: `F` is the frozen set, the tuples and
    /// the support, grown from the previous step's `K`.
    pub fn beta(&self, xbar: &[Word], ybar: &[Word], cfg: &FiniteConfig) -> Result<Beta> {
        let mut f = self.frozen.clone();
        f.extend(xbar.iter().chain(ybar).cloned());
        f.extend(self.action.support().cloned());
        let kd = grow_k(&self.action, self.last_k.as_ref(), &f, cfg.code_window)?;
        let mut beta = build_beta(&self.action, kd)?;
        beta.length_hint = self.last_u1_len;
        Ok(beta)
    }
}

/// What a transitivity step computed, kept for audits.
#[derive(Clone, Debug)]
pub struct StepRecord {
    pub k_len: usize,
    pub displacers: Displacers,
    /// `n_s` before shadow separation and after each factor.
    pub ns_trace: Vec<usize>,
    pub w1: Word,
    pub w2: Word,
    pub a_sets: Vec<Vec<Word>>,
    pub p_points: Vec<ChartPoint>,
    pub modified: BTreeSet<Word>,
}

#[derive(Clone, Debug)]
pub struct FiniteStep {
    pub state: FiniteState,
    pub witness: TransitivityWitness,
    pub record: StepRecord,
}

fn check_tuple(t: &[Word], name: &str) -> Result<()> {
    let distinct: HashSet<_> = t.iter().collect();
    if distinct.len() != t.len() {
        return Err(Error::InvalidArgument(format!("{name} has repeated entries")));
    }
    Ok(())
}

/// Forces a word `w₂⁻¹hw₁` with `xbar[j] ↦ ybar[j]`, keeping the action on
/// the frozen set.
pub fn extend_transitive(state: &FiniteState, xbar: &[Word], ybar: &[Word], cfg: &FiniteConfig) -> Result<FiniteStep> {
    let k = xbar.len();
    if k == 0 || ybar.len() != k {
        return Err(Error::InvalidArgument("tuples must be nonempty and of equal length".into()));
    }
    check_tuple(xbar, "xbar")?;
    check_tuple(ybar, "ybar")?;
    let fp = state.action.fp().clone();
    let beta = state.beta(xbar, ybar, cfg)?;
    let (displacers, m) = find_v1_v2(&beta, cfg)?;
    let separation = separate_shadows(&beta, &m)?;
    drop(m);
    let w1 = fp.multiply(&separation.w, &displacers.v1);
    let w2 = fp.multiply(&separation.w, &displacers.v2);
    let splice = build_alpha(&beta, xbar, ybar, &w1, &w2, &separation.final_points, cfg)?;

    let Beta { kd, .. } = beta;
    let mut frozen = kd.f.clone();
    frozen.extend(splice.modified.iter().cloned());
    for x in xbar {
        frozen.extend(splice.alpha.trajectory(&splice.witness.word, x).points);
    }
    let last_u1_len = displacers.u1.len();
    let record = StepRecord {
        k_len: kd.len(),
        displacers,
        ns_trace: separation.trace,
        w1,
        w2,
        a_sets: splice.a_sets,
        p_points: splice.p_points,
        modified: splice.modified,
    };
    Ok(FiniteStep {
        state: FiniteState { action: splice.alpha, frozen, last_k: Some(kd), last_u1_len },
        witness: splice.witness,
        record,
    })
}

/// Finds a point moved by `w ≠ 1` and freezes its trajectory. The action is
/// left multiplication far from its support, so deep points are moved.
pub fn extend_faithful(
    state: &FiniteState,
    w: &Word,
    cfg: &FiniteConfig,
) -> Result<(FiniteState, FaithfulnessWitness)> {
    if w.is_identity() {
        return Err(Error::InvalidArgument("the identity has no faithfulness witness".into()));
    }
    let act = &state.action;
    let bound = cfg.displace_bound;
    let x = search_words(act.fp().enumerate_words(bound, Some(cfg.code_window)), bound, |x| act.eval_word(w, x) != *x)?;
    let traj = act.trajectory(w, &x).points;
    let image = traj.last().unwrap().clone();
    let mut next = state.clone();
    next.frozen.extend(traj);
    // Faithfulness steps leave the action alone, so the cached K stays valid.
    Ok((next, FaithfulnessWitness { word: w.clone(), basepoint: Point::Elem(x), image: Point::Elem(image) }))
}

/// Outcome of exploring one orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitStatus {
    /// Reached a point beyond the support where the action is free left
    /// multiplication, so the orbit contains an infinite subtree.
    Infinite,
    /// The orbit closed with this many points.
    Closed(usize),
    /// Explored `bound` points without deciding.
    Capped,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitProbe {
    pub start: Word,
    pub status: OrbitStatus,
}

/// Explores the `⟨G, σ(H)⟩`-orbits of the first `window` points.
pub fn admissible_probe(action: &HAction, window: usize, bound: usize, code_window: usize) -> Vec<OrbitProbe> {
    let fp = action.fp();
    let depth = action.support().map(Word::len).max().map_or(0, |d| d + 2);
    let gens: Vec<Letter> =
        g_codes(fp, code_window).into_iter().map(Letter::g).chain(h_codes(fp).into_iter().map(Letter::h)).collect();
    let mut out = Vec::new();
    for start in fp.enumerate_words(usize::MAX, Some(code_window)).take(window) {
        let mut seen = HashSet::from([start.clone()]);
        let mut queue = VecDeque::from([start.clone()]);
        let mut status = None;
        while let Some(x) = queue.pop_front() {
            if x.len() > depth {
                status = Some(OrbitStatus::Infinite);
                break;
            }
            if seen.len() >= bound {
                status = Some(OrbitStatus::Capped);
                break;
            }
            for &l in &gens {
                let mut y = x.clone();
                action.apply(l, &mut y);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        out.push(OrbitProbe { start, status: status.unwrap_or(OrbitStatus::Closed(seen.len())) });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free_product::FactorSpec;

    fn c2c3() -> FreeProduct {
        FreeProduct::new(FactorSpec::cyclic(Side::G, 2).unwrap(), FactorSpec::cyclic(Side::H, 3).unwrap())
    }

    fn words(fp: &FreeProduct, s: &[&str]) -> BTreeSet<Word> {
        s.iter().map(|x| fp.parse_word(x).unwrap()).collect()
    }

    #[test]
    fn k_of_identity() {
        let fp = c2c3();
        let act = HAction::base(fp.clone());
        let kd = compute_k(&act, &words(&fp, &["1"]), 4).unwrap();
        assert_eq!(kd.k, words(&fp, &["1", "h1", "h2"]));
        assert_eq!(kd.exit_roots.iter().cloned().collect::<BTreeSet<_>>(), words(&fp, &["g1", "g1.h1", "g1.h2"]));
        assert!(matches!(compute_k(&act, &BTreeSet::new(), 4), Err(Error::EmptyInput)));
    }

    #[test]
    fn hull_fills_the_path() {
        let fp = c2c3();
        let act = HAction::base(fp.clone());
        let kd = compute_k(&act, &words(&fp, &["1", "h1.g1.h1.g1"]), 4).unwrap();
        // Cosets H, Hg1h1g1 and the middle Hg1 (through G-vertices).
        for x in ["g1", "h2.g1", "g1.h1.g1", "h1.g1.h1.g1"] {
            assert!(kd.contains(&fp.parse_word(x).unwrap()), "{x}");
        }
        assert_eq!(kd.len(), 9);
    }

    #[test]
    fn locate_inverts_embed() {
        let fp = c2c3();
        let act = HAction::base(fp.clone());
        let kd = compute_k(&act, &words(&fp, &["1", "g1"]), 4).unwrap();
        let beta = build_beta(&act, kd).unwrap();
        for z in beta.kd.exit_roots.clone() {
            for u in fp.enumerate_words(4, None).filter(member_ybar) {
                let p = beta.embed(&u, &z);
                assert!(!beta.kd.contains(&p));
                assert_eq!(beta.locate(&p), Some((u.clone(), z.clone())), "{u} at {z}");
            }
        }
    }

    #[test]
    fn shadow_pair_count_matches_pairwise() {
        let fp = c2c3();
        let z = Word::identity();
        let pts: Vec<ChartPoint> = ["h1", "g1.h1", "h1.g1.h1", "h2", "g1.h2", "h2.g1.h1"]
            .iter()
            .map(|s| ChartPoint::new(&fp, fp.parse_word(s).unwrap(), z.clone()))
            .collect();
        let mut naive = 0;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                if in_shadow(&fp, &z, &pts[i].point, &pts[j].point) || in_shadow(&fp, &z, &pts[j].point, &pts[i].point)
                {
                    naive += 1;
                }
            }
        }
        assert_eq!(count_shadow_pairs(&pts), naive);
        assert_eq!(naive, 6);
    }

    #[test]
    fn one_step_on_the_base_action() {
        let fp = c2c3();
        let st = FiniteState::new(fp.clone());
        let x = vec![Word::identity()];
        let y = vec![fp.parse_word("h1").unwrap()];
        let step = extend_transitive(&st, &x, &y, &FiniteConfig::default()).unwrap();
        assert_eq!(step.state.action.eval_word(&step.witness.word, &x[0]), y[0]);
        step.state.action.check_invariants().unwrap();
        assert_eq!(step.record.a_sets[0].len(), 3);
        assert_eq!(step.record.p_points.len(), 1);
        assert!(step.state.action.agrees_on(&st.action, &step.state.last_k().unwrap().k));
    }

    #[test]
    fn displacement_matches_plain_first_hit() {
        let fp = c2c3();
        let st = FiniteState::new(fp.clone());
        let cfg = FiniteConfig::default();
        let step = extend_transitive(&st, &[Word::identity()], &[fp.parse_word("g1").unwrap()], &cfg).unwrap();
        for f in [&["1"][..], &["1", "g1.h1"], &["h2.g1", "g1.h1.g1.h2"]] {
            let mut f = words(&fp, f);
            f.extend(step.state.frozen.iter().cloned());
            let kd = compute_k(&step.state.action, &f, 4).unwrap();
            let beta = build_beta(&step.state.action, kd).unwrap();
            let fast = displace_k(&beta, &cfg).unwrap();
            let naive = fp
                .enumerate_words(20, None)
                .find(|u| beta.kd.k.iter().all(|x| !beta.kd.contains(&beta.action.eval_word(u, x))))
                .unwrap();
            assert_eq!(fast, naive);
        }
    }

    #[test]
    fn diameter_policy_lengthens_v2() {
        let fp = c2c3();
        let act = HAction::base(fp.clone());
        let kd = compute_k(&act, &words(&fp, &["1"]), 4).unwrap();
        let beta = build_beta(&act, kd).unwrap();
        let cfg = FiniteConfig { v2_policy: V2Policy::Diameter, ..FiniteConfig::default() };
        let (c, m) = find_v1_v2(&beta, &cfg).unwrap();
        assert_eq!(m.len(), 2 * beta.kd.len());
        let d = c.diameter.unwrap();
        assert_eq!(c.v2.len(), c.v1.len() + 4 * d);
    }

    #[test]
    fn closed_orbit_is_flagged() {
        let fp = c2c3();
        let mut act = HAction::base(fp.clone());
        for x in ["1", "h1", "h2", "g1", "h1.g1", "h2.g1"] {
            let x = fp.parse_word(x).unwrap();
            act.set_row(&x, [(1, x.clone()), (2, x.clone())]);
        }
        act.check_invariants().unwrap();
        let probes = admissible_probe(&act, 2, 1000, 4);
        assert_eq!(probes[0].status, OrbitStatus::Closed(2));
        let base = admissible_probe(&HAction::base(fp), 3, 1000, 4);
        assert!(base.iter().all(|p| p.status == OrbitStatus::Infinite));
    }
}
