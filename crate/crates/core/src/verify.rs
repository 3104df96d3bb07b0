//! Independent re-checking of certificates.
//!
//! Nothing here calls into the engines: the final state is rebuilt from the
//! certificate text and words are applied one syllable at a time with a
//! separate left-multiplication routine.

use std::collections::{HashMap, HashSet};
use std::thread;

use crate::certificate::{ActionData, Certificate};
use crate::countable::Point;
use crate::free_product::{FreeProduct, Letter, Side, Word};
use crate::witness::Witness;

/// `l·x` on normal forms, merging with the leftmost syllable.
pub fn left_mul(fp: &FreeProduct, l: Letter, x: &Word) -> Word {
    let mut rev = x.letters().to_vec();
    match rev.last() {
        Some(top) if top.side == l.side => {
            let c = fp.factor(l.side).mul(l.code, top.code);
            rev.pop();
            if c != 0 {
                rev.push(Letter::new(l.side, c));
            }
        }
        _ => rev.push(l),
    }
    Word::from_rev_unchecked(rev)
}

/// The `H`-action of a finite-factor certificate.
#[derive(Clone, Debug)]
pub struct NaiveAction {
    fp: FreeProduct,
    rows: HashMap<Word, HashMap<i64, Word>>,
}

impl NaiveAction {
    pub fn new(fp: &FreeProduct, rows: &[(i64, Word, Word)]) -> Self {
        let mut map: HashMap<Word, HashMap<i64, Word>> = HashMap::new();
        for (h, x, y) in rows {
            map.entry(x.clone()).or_default().insert(*h, y.clone());
        }
        NaiveAction { fp: fp.clone(), rows: map }
    }

    pub fn fp(&self) -> &FreeProduct {
        &self.fp
    }

    /// Points where some `h` does not act by left multiplication.
    pub fn portals(&self) -> impl Iterator<Item = &Word> {
        self.rows.keys()
    }

    pub fn is_portal(&self, x: &Word) -> bool {
        self.rows.contains_key(x)
    }

    pub fn apply(&self, l: Letter, x: &Word) -> Word {
        if l.side == Side::H {
            if let Some(y) = self.rows.get(x).and_then(|r| r.get(&l.code)) {
                return y.clone();
            }
        }
        left_mul(&self.fp, l, x)
    }

    pub fn eval(&self, w: &Word, x: &Word) -> Word {
        w.letters().iter().fold(x.clone(), |p, &l| self.apply(l, &p))
    }

    /// Problems with the table as an action of `H`: every row must compose
    /// like the group law.
    pub fn problems(&self) -> Vec<String> {
        let h = self.fp.h();
        let Some(n) = h.order() else {
            return vec!["an action table needs a finite H".into()];
        };
        let mut out = Vec::new();
        let mut pts: Vec<&Word> = self.rows.keys().collect();
        pts.sort();
        for x in pts {
            for a in 1..n as i64 {
                for b in 1..n as i64 {
                    let two = self.apply(Letter::h(a), &self.apply(Letter::h(b), x));
                    let c = h.mul(a, b);
                    let one = if c == 0 { x.clone() } else { self.apply(Letter::h(c), x) };
                    if two != one {
                        out.push(format!("rows at {x} do not compose for h{a}, h{b}"));
                    }
                }
            }
        }
        out
    }
}

/// The conjugated action of an infinite-factor certificate.
#[derive(Clone, Debug, Default)]
pub struct NaiveSigma {
    iota: HashMap<i64, i64>,
    iota_inv: HashMap<i64, i64>,
    sigma: HashMap<i64, i64>,
    sigma_inv: HashMap<i64, i64>,
    problems: Vec<String>,
}

impl NaiveSigma {
    pub fn new(iota: &[(i64, i64)], sigma: &[(i64, i64)]) -> Self {
        let mut s = NaiveSigma::default();
        let mut load = |pairs: &[(i64, i64)], fwd: &mut HashMap<i64, i64>, inv: &mut HashMap<i64, i64>, name: &str| {
            for &(a, b) in pairs {
                if fwd.insert(a, b).is_some() || inv.insert(b, a).is_some() {
                    s.problems.push(format!("{name} is not injective at #{a} -> #{b}"));
                }
            }
        };
        let (mut i, mut ii, mut sg, mut si) = Default::default();
        load(iota, &mut i, &mut ii, "iota");
        load(sigma, &mut sg, &mut si, "sigma");
        let mut dom: Vec<i64> = i.keys().copied().collect();
        let mut ran: Vec<i64> = ii.keys().copied().collect();
        dom.sort_unstable();
        ran.sort_unstable();
        if dom != ran {
            s.problems.push("iota does not permute its support".into());
        }
        s.iota = i;
        s.iota_inv = ii;
        s.sigma = sg;
        s.sigma_inv = si;
        s
    }

    pub fn problems(&self) -> &[String] {
        &self.problems
    }

    /// One syllable; `None` when it needs an undefined value of `σ`.
    pub fn apply(&self, l: Letter, x: i64) -> Option<i64> {
        match l.side {
            Side::G => Some(x + l.code),
            Side::H => {
                let s = *self.sigma.get(&x)?;
                let i = self.iota.get(&s).copied().unwrap_or(s) + l.code;
                let t = self.iota_inv.get(&i).copied().unwrap_or(i);
                self.sigma_inv.get(&t).copied()
            }
        }
    }

    pub fn eval(&self, w: &Word, x: i64) -> Option<i64> {
        w.letters().iter().try_fold(x, |p, &l| self.apply(l, p))
    }
}

enum Evaluator {
    Finite(NaiveAction),
    Infinite(NaiveSigma),
}

impl Evaluator {
    fn of(cert: &Certificate) -> Evaluator {
        match &cert.action {
            ActionData::Action(rows) => Evaluator::Finite(NaiveAction::new(&cert.fp, rows)),
            ActionData::Sigma { iota, sigma } => Evaluator::Infinite(NaiveSigma::new(iota, sigma)),
        }
    }

    fn eval(&self, w: &Word, p: &Point) -> Result<Point, String> {
        match (self, p) {
            (Evaluator::Finite(a), Point::Elem(x)) => Ok(Point::Elem(a.eval(w, x))),
            (Evaluator::Infinite(s), Point::Index(x)) => {
                s.eval(w, *x).map(Point::Index).ok_or_else(|| format!("{w} needs an undefined value of sigma from {p}"))
            }
            _ => Err(format!("{p} is not a point of this model")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryResult {
    pub index: usize,
    pub error: Option<String>,
}

impl EntryResult {
    pub fn passed(&self) -> bool {
        self.error.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    /// Problems with the certificate as a whole.
    pub structural: Vec<String>,
    pub entries: Vec<EntryResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.structural.is_empty() && self.entries.iter().all(EntryResult::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &EntryResult> {
        self.entries.iter().filter(|e| !e.passed())
    }
}

fn check_entry(ev: &Evaluator, frozen: &HashSet<&Point>, w: &Witness) -> Result<(), String> {
    let unfrozen = |p: &Point| if frozen.contains(p) { Ok(()) } else { Err(format!("{p} is not in the frozen set")) };
    match w {
        Witness::Transitivity(t) => {
            if t.xbar.len() != t.k || t.ybar.len() != t.k {
                return Err("tuple length differs from k".into());
            }
            for tuple in [&t.xbar, &t.ybar] {
                let distinct: HashSet<&Point> = tuple.iter().collect();
                if distinct.len() != tuple.len() {
                    return Err("tuple has repeated points".into());
                }
            }
            for (x, y) in t.xbar.iter().zip(&t.ybar) {
                unfrozen(x)?;
                unfrozen(y)?;
                let got = ev.eval(&t.word, x)?;
                if got != *y {
                    return Err(format!("{} sends {x} to {got}, not {y}", t.word));
                }
            }
            Ok(())
        }
        Witness::Faithfulness(f) => {
            if f.word.is_identity() {
                return Err("the identity cannot witness faithfulness".into());
            }
            if f.basepoint == f.image {
                return Err(format!("{} claims to fix {}", f.word, f.basepoint));
            }
            unfrozen(&f.basepoint)?;
            let got = ev.eval(&f.word, &f.basepoint)?;
            if got != f.image {
                return Err(format!("{} sends {} to {got}, not {}", f.word, f.basepoint, f.image));
            }
            Ok(())
        }
    }
}

/// Re-evaluates every witness against the stored final state.
pub fn verify_certificate(cert: &Certificate) -> VerifyReport {
    let ev = Evaluator::of(cert);
    let mut structural = match &ev {
        Evaluator::Finite(a) => a.problems(),
        Evaluator::Infinite(s) => s.problems().to_vec(),
    };
    if cert.report.satisfied != cert.entries.len() {
        structural.push(format!(
            "report claims {} satisfied requirements but {} witnesses are listed",
            cert.report.satisfied,
            cert.entries.len()
        ));
    }
    let frozen: HashSet<&Point> = cert.frozen.iter().collect();
    let witnesses: Vec<&Witness> = cert.witnesses().collect();
    let threads = thread::available_parallelism().map_or(1, |n| n.get()).min(16);
    let chunk = witnesses.len().div_ceil(threads).max(1);
    let mut entries: Vec<EntryResult> = thread::scope(|s| {
        let handles: Vec<_> = witnesses
            .chunks(chunk)
            .enumerate()
            .map(|(c, ws)| {
                let (ev, frozen) = (&ev, &frozen);
                s.spawn(move || {
                    ws.iter()
                        .enumerate()
                        .map(|(i, w)| EntryResult { index: c * chunk + i, error: check_entry(ev, frozen, w).err() })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("verifier thread panicked")).collect()
    });
    entries.sort_by_key(|e| e.index);
    VerifyReport { structural, entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::{Entry, Report};
    use crate::driver::Engine;
    use crate::free_product::FactorSpec;
    use crate::witness::{FaithfulnessWitness, TransitivityWitness};

    fn c2c3() -> FreeProduct {
        FreeProduct::new(FactorSpec::cyclic(Side::G, 2).unwrap(), FactorSpec::cyclic(Side::H, 3).unwrap())
    }

    #[test]
    fn left_mul_matches_group_multiplication() {
        let fp = c2c3();
        for x in fp.enumerate_words(4, None) {
            for l in [Letter::g(1), Letter::h(1), Letter::h(2)] {
                let lw = Word::from_rev_unchecked(vec![l]);
                assert_eq!(left_mul(&fp, l, &x), fp.multiply(&lw, &x));
            }
        }
    }

    #[test]
    fn inverted_rows_act_and_broken_rows_are_flagged() {
        let fp = c2c3();
        let w = |s: &str| fp.parse_word(s).unwrap();
        let hw = |c: i64| if c == 0 { Word::identity() } else { Word::from_rev_unchecked(vec![Letter::h(c)]) };
        // On the coset H·g1, h sends k·g1 to (k - h)·g1.
        let a = w("g1");
        let mut rows = Vec::new();
        for k in 0..3 {
            for h in 1..3 {
                rows.push((h, fp.multiply(&hw(k), &a), fp.multiply(&hw((k - h).rem_euclid(3)), &a)));
            }
        }
        let act = NaiveAction::new(&fp, &rows);
        assert!(act.problems().is_empty(), "{:?}", act.problems());
        assert_eq!(act.eval(&w("h1"), &a), w("h2.g1"));
        assert_eq!(act.eval(&w("h1"), &w("h1.g1")), w("g1"));
        let broken = NaiveAction::new(&fp, &[(1, a.clone(), w("g1.h1.g1"))]);
        assert!(!broken.problems().is_empty());
    }

    #[test]
    fn sigma_evaluation_stops_at_undefined_values() {
        let s = NaiveSigma::new(&[], &[(0, 0), (1, 1)]);
        assert_eq!(s.apply(Letter::h(1), 0), Some(1));
        assert_eq!(s.apply(Letter::h(1), 1), None);
        assert_eq!(s.apply(Letter::g(-4), 1), Some(-3));
        assert!(!NaiveSigma::new(&[], &[(0, 1), (2, 1)]).problems().is_empty());
    }

    fn cert(entries: Vec<Witness>) -> Certificate {
        let fp = c2c3();
        let n = entries.len();
        Certificate {
            frozen: fp.enumerate_words(2, None).map(Point::Elem).collect(),
            fp,
            engine: Engine::Finite,
            swapped: false,
            action: ActionData::Action(Vec::new()),
            entries: entries.into_iter().map(Entry).collect(),
            report: Report { satisfied: n, ..Report::default() },
        }
    }

    #[test]
    fn empty_certificate_passes() {
        assert!(verify_certificate(&cert(Vec::new())).passed());
    }

    #[test]
    fn exactly_the_bad_witness_fails() {
        let fp = c2c3();
        let w = |s: &str| fp.parse_word(s).unwrap();
        let e = |s: &str| Point::Elem(w(s));
        let good = Witness::Transitivity(TransitivityWitness {
            k: 2,
            xbar: vec![e("1"), e("g1")],
            ybar: vec![e("g1"), e("1")],
            word: w("g1"),
        });
        let bad = Witness::Faithfulness(FaithfulnessWitness { word: w("h1"), basepoint: e("1"), image: e("h2") });
        let fixed = Witness::Faithfulness(FaithfulnessWitness { word: w("h1"), basepoint: e("1"), image: e("1") });
        let r = verify_certificate(&cert(vec![good.clone(), bad, good, fixed]));
        let failed: Vec<usize> = r.failures().map(|f| f.index).collect();
        assert_eq!(failed, [1, 3]);
    }
}
