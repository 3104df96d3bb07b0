//! Normal forms in a free product `G * H` of two factors, each either finite
//! (cyclic or given by a multiplication table) or infinite cyclic.
//!
//! A [`Word`] is stored right-to-left: `letters()[0]` is the rightmost
//! syllable, the one that acts first on a point. Left multiplication and
//! suffixes are then cheap, which is what every evaluator in the crate needs.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Which free factor a letter belongs to. `G < H` in every ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    G,
    H,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::G => Side::H,
            Side::H => Side::G,
        }
    }

    pub fn prefix(self) -> char {
        match self {
            Side::G => 'g',
            Side::H => 'h',
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::G => write!(f, "G"),
            Side::H => write!(f, "H"),
        }
    }
}

/// Position of a nontrivial code in the enumeration order `1, -1, 2, -2, ...`.
///
/// For finite factors codes are `1..n`, where this is just `2c - 1`, so one
/// key orders both kinds.
pub fn code_rank(code: i64) -> u64 {
    if code > 0 {
        2 * code as u64 - 1
    } else {
        2 * code.unsigned_abs()
    }
}

/// Inverse of [`code_rank`] restricted to nontrivial codes: index `0` is the
/// first nontrivial code.
pub fn infinite_code_at(index: u64) -> i64 {
    let m = (index / 2 + 1) as i64;
    if index.is_multiple_of(2) {
        m
    } else {
        -m
    }
}

/// One factor element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub side: Side,
    pub code: i64,
}

impl Letter {
    pub fn new(side: Side, code: i64) -> Self {
        Letter { side, code }
    }

    pub fn g(code: i64) -> Self {
        Letter::new(Side::G, code)
    }

    pub fn h(code: i64) -> Self {
        Letter::new(Side::H, code)
    }

    pub(crate) fn key(&self) -> (Side, u64) {
        (self.side, code_rank(self.code))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.side.prefix(), self.code)
    }
}

/// Multiplication table of a finite group on codes `0..n`, `0` the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MulTable {
    n: usize,
    table: Vec<u32>,
    inv: Vec<u32>,
}

impl MulTable {
    /// Builds a table from row-major entries, checking the group axioms.
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(Error::InvalidFactor("table must have at least 2 rows".into()));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidFactor("table is not square".into()));
        }
        let table: Vec<u32> = rows.into_iter().flatten().collect();
        if table.iter().any(|&c| c as usize >= n) {
            return Err(Error::InvalidFactor("table entry out of range".into()));
        }
        let at = |a: usize, b: usize| table[a * n + b] as usize;
        for a in 0..n {
            if at(0, a) != a || at(a, 0) != a {
                return Err(Error::InvalidFactor("code 0 is not the identity".into()));
            }
        }
        for a in 0..n {
            let mut row = vec![false; n];
            let mut col = vec![false; n];
            for b in 0..n {
                row[at(a, b)] = true;
                col[at(b, a)] = true;
            }
            if row.iter().chain(col.iter()).any(|seen| !seen) {
                return Err(Error::InvalidFactor("table is not a latin square".into()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if at(at(a, b), c) != at(a, at(b, c)) {
                        return Err(Error::InvalidFactor(format!("table is not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        let inv = (0..n).map(|a| (0..n).find(|&b| at(a, b) == 0).unwrap() as u32).collect();
        Ok(MulTable { n, table, inv })
    }

    /// Parses whitespace- or comma-separated rows, one per line.
    pub fn parse(text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| {
                l.split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|t| !t.is_empty())
                    .map(|t| t.parse::<u32>().map_err(|_| Error::InvalidFactor(format!("bad table entry `{t}`"))))
                    .collect::<Result<Vec<u32>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        MulTable::new(rows)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn mul(&self, a: i64, b: i64) -> i64 {
        self.table[a as usize * self.n + b as usize] as i64
    }

    pub fn inv(&self, a: i64) -> i64 {
        self.inv[a as usize] as i64
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.table.chunks(self.n)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactorKind {
    Cyclic(u32),
    Infinite,
    Table(Arc<MulTable>),
}

/// One free factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorSpec {
    pub side: Side,
    pub kind: FactorKind,
}

impl FactorSpec {
    pub fn cyclic(side: Side, n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidFactor(format!("c{n}: factors must be non-trivial")));
        }
        Ok(FactorSpec { side, kind: FactorKind::Cyclic(n) })
    }

    pub fn infinite(side: Side) -> Self {
        FactorSpec { side, kind: FactorKind::Infinite }
    }

    pub fn table(side: Side, table: MulTable) -> Self {
        FactorSpec { side, kind: FactorKind::Table(Arc::new(table)) }
    }

    /// Parses `cN`, `z`, `table[r0;r1;...]` (inline) or `table:<file>`.
    pub fn parse(side: Side, text: &str) -> Result<Self> {
        let t = text.trim();
        if t == "z" || t == "Z" {
            return Ok(FactorSpec::infinite(side));
        }
        if let Some(n) = t.strip_prefix('c').or_else(|| t.strip_prefix('C')) {
            let n: u32 = n.parse().map_err(|_| Error::InvalidFactor(format!("bad cyclic order in `{t}`")))?;
            return FactorSpec::cyclic(side, n);
        }
        if let Some(path) = t.strip_prefix("table:") {
            let body = std::fs::read_to_string(path)?;
            return Ok(FactorSpec::table(side, MulTable::parse(&body)?));
        }
        if let Some(inner) = t.strip_prefix("table[").and_then(|r| r.strip_suffix(']')) {
            let body = inner.replace(';', "\n");
            return Ok(FactorSpec::table(side, MulTable::parse(&body)?));
        }
        Err(Error::InvalidFactor(format!("unknown factor spec `{t}`")))
    }

    /// `None` for the infinite cyclic group.
    pub fn order(&self) -> Option<u64> {
        match &self.kind {
            FactorKind::Cyclic(n) => Some(*n as u64),
            FactorKind::Infinite => None,
            FactorKind::Table(t) => Some(t.order() as u64),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    pub fn normalize(&self, code: i64) -> i64 {
        match &self.kind {
            FactorKind::Cyclic(n) => code.rem_euclid(*n as i64),
            FactorKind::Infinite => code,
            FactorKind::Table(t) => code.rem_euclid(t.order() as i64),
        }
    }

    pub fn mul(&self, a: i64, b: i64) -> i64 {
        match &self.kind {
            FactorKind::Cyclic(n) => (a + b).rem_euclid(*n as i64),
            FactorKind::Infinite => a + b,
            FactorKind::Table(t) => t.mul(a, b),
        }
    }

    pub fn inv(&self, a: i64) -> i64 {
        match &self.kind {
            FactorKind::Cyclic(n) => (-a).rem_euclid(*n as i64),
            FactorKind::Infinite => -a,
            FactorKind::Table(t) => t.inv(a),
        }
    }

    /// Number of nontrivial elements, `None` if infinite.
    pub fn nontrivial_count(&self) -> Option<u64> {
        self.order().map(|n| n - 1)
    }

    /// The `index`-th nontrivial code in enumeration order.
    pub fn nontrivial_at(&self, index: u64) -> Option<i64> {
        match self.nontrivial_count() {
            Some(c) if index >= c => None,
            Some(_) => Some(index as i64 + 1),
            None => Some(infinite_code_at(index)),
        }
    }

    /// Nontrivial codes in enumeration order; infinite factors stop after
    /// `window` codes.
    pub fn nontrivial_codes(&self, window: usize) -> Vec<i64> {
        let count = self.nontrivial_count().unwrap_or(window as u64);
        (0..count).filter_map(|i| self.nontrivial_at(i)).collect()
    }

    /// Canonical text form, parseable by [`FactorSpec::parse`].
    pub fn spec_string(&self) -> String {
        match &self.kind {
            FactorKind::Cyclic(n) => format!("c{n}"),
            FactorKind::Infinite => "z".into(),
            FactorKind::Table(t) => {
                let rows: Vec<String> =
                    t.rows().map(|r| r.iter().map(u32::to_string).collect::<Vec<_>>().join(",")).collect();
                format!("table[{}]", rows.join(";"))
            }
        }
    }
}

/// A reduced word: alternating nontrivial syllables, stored right-to-left.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    rev: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word { rev: Vec::new() }
    }

    /// Wraps letters given right-to-left without checking reducedness.
    pub fn from_rev_unchecked(rev: Vec<Letter>) -> Self {
        Word { rev }
    }

    /// Syllable count `|w|`.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.rev.len()
    }

    pub fn is_identity(&self) -> bool {
        self.rev.is_empty()
    }

    /// Letters right-to-left (application order).
    pub fn letters(&self) -> &[Letter] {
        &self.rev
    }

    /// Letters left-to-right (reading order).
    pub fn syllables(&self) -> impl DoubleEndedIterator<Item = &Letter> + ExactSizeIterator {
        self.rev.iter().rev()
    }

    /// The leftmost syllable; the one applied last.
    pub fn leftmost(&self) -> Option<Letter> {
        self.rev.last().copied()
    }

    /// The rightmost syllable; the one applied first.
    pub fn rightmost(&self) -> Option<Letter> {
        self.rev.first().copied()
    }

    /// The rightmost `j` syllables, or `None` if `j > |w|`.
    pub fn suffix(&self, j: usize) -> Option<Word> {
        (j <= self.rev.len()).then(|| Word { rev: self.rev[..j].to_vec() })
    }

    /// Whether `other` is a normal-form suffix of `self`.
    pub fn has_suffix(&self, other: &Word) -> bool {
        self.rev.starts_with(&other.rev)
    }

    /// Leftmost syllables after removing the rightmost `j`.
    pub fn prefix_after(&self, j: usize) -> Word {
        Word { rev: self.rev[j..].to_vec() }
    }

    fn is_reduced(&self) -> bool {
        self.rev.iter().all(|l| l.code != 0) && self.rev.windows(2).all(|p| p[0].side != p[1].side)
    }
}

impl Ord for Word {
    /// Length first, then lexicographic in reading order on `(side, rank)`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.syllables().map(Letter::key).cmp(other.syllables().map(Letter::key)))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "1");
        }
        for (i, l) in self.syllables().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Parses `g3.h1.g-2` (or `1`) into raw letters in reading order.
pub fn parse_letters(text: &str) -> Result<Vec<Letter>> {
    let t = text.trim();
    if t == "1" || t.is_empty() {
        return Ok(Vec::new());
    }
    t.split('.')
        .map(|tok| {
            let (side, rest) = match tok.chars().next() {
                Some('g') => (Side::G, &tok[1..]),
                Some('h') => (Side::H, &tok[1..]),
                _ => return Err(Error::Parse(format!("bad syllable `{tok}` in `{t}`"))),
            };
            let code = rest.parse::<i64>().map_err(|_| Error::Parse(format!("bad code in syllable `{tok}`")))?;
            Ok(Letter::new(side, code))
        })
        .collect()
}

/// The free product of two factors; all word arithmetic goes through here.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeProduct {
    g: FactorSpec,
    h: FactorSpec,
}

impl FreeProduct {
    pub fn new(g: FactorSpec, h: FactorSpec) -> Self {
        FreeProduct { g: FactorSpec { side: Side::G, ..g }, h: FactorSpec { side: Side::H, ..h } }
    }

    pub fn g(&self) -> &FactorSpec {
        &self.g
    }

    pub fn h(&self) -> &FactorSpec {
        &self.h
    }

    pub fn factor(&self, side: Side) -> &FactorSpec {
        match side {
            Side::G => &self.g,
            Side::H => &self.h,
        }
    }

    /// Letter with its code reduced into the factor.
    pub fn letter(&self, side: Side, code: i64) -> Letter {
        Letter::new(side, self.factor(side).normalize(code))
    }

    pub fn inverse_letter(&self, l: Letter) -> Letter {
        Letter::new(l.side, self.factor(l.side).inv(l.code))
    }

    /// `x <- l * x`, in place.
    pub fn left_mul_letter(&self, l: Letter, x: &mut Word) {
        let f = self.factor(l.side);
        let code = f.normalize(l.code);
        if code == 0 {
            return;
        }
        match x.rev.last_mut() {
            Some(top) if top.side == l.side => {
                let c = f.mul(code, top.code);
                if c == 0 {
                    x.rev.pop();
                } else {
                    top.code = c;
                }
            }
            _ => x.rev.push(Letter::new(l.side, code)),
        }
    }

    /// Normal form of the product of `letters` (reading order).
    pub fn reduce<I>(&self, letters: I) -> Word
    where
        I: IntoIterator<Item = Letter>,
        I::IntoIter: DoubleEndedIterator,
    {
        let mut w = Word::identity();
        for l in letters.into_iter().rev() {
            self.left_mul_letter(l, &mut w);
        }
        w
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        Ok(self.reduce(parse_letters(text)?))
    }

    /// Strict parse: the text must already be a normal form.
    pub fn parse_normal_form(&self, text: &str) -> Result<Word> {
        let letters = parse_letters(text)?;
        let w = Word { rev: letters.iter().rev().copied().collect() };
        let normalized = w.rev.iter().all(|l| self.factor(l.side).normalize(l.code) == l.code);
        if !normalized || !w.is_reduced() {
            return Err(Error::Parse(format!("`{text}` is not a normal form")));
        }
        Ok(w)
    }

    pub fn multiply(&self, u: &Word, v: &Word) -> Word {
        let mut out = v.clone();
        for &l in u.letters() {
            self.left_mul_letter(l, &mut out);
        }
        out
    }

    pub fn inverse(&self, w: &Word) -> Word {
        Word { rev: w.rev.iter().rev().map(|&l| self.inverse_letter(l)).collect() }
    }

    /// Rightmost `j` syllables; range error when `j > |w|`.
    pub fn suffix(&self, w: &Word, j: usize) -> Result<Word> {
        w.suffix(j).ok_or(Error::Range { index: j, len: w.len() })
    }

    /// Whether `w` is reduced with codes normalized for these factors.
    pub fn is_normal_form(&self, w: &Word) -> bool {
        w.is_reduced() && w.rev.iter().all(|l| self.factor(l.side).normalize(l.code) == l.code)
    }

    /// Reduced words of length `<= max_syllables` in length-then-lexicographic
    /// order. With `code_window = Some(n)` an infinite factor contributes only
    /// its first `n` nontrivial codes; with `None` a length class containing
    /// an infinite-factor syllable never ends.
    pub fn enumerate_words(&self, max_syllables: usize, code_window: Option<usize>) -> WordIter<'_> {
        WordIter::new(self, max_syllables, code_window, [true, true])
    }

    /// Like [`FreeProduct::enumerate_words`] but restricted to one factor:
    /// the identity followed by that factor's nontrivial elements.
    pub fn enumerate_factor(&self, side: Side, code_window: Option<usize>) -> WordIter<'_> {
        let allow = match side {
            Side::G => [true, false],
            Side::H => [false, true],
        };
        WordIter::new(self, 1, code_window, allow)
    }

    /// Least nontrivial element of a factor.
    pub fn first_nontrivial(&self, side: Side) -> Letter {
        Letter::new(side, self.factor(side).nontrivial_at(0).expect("nontrivial factor"))
    }
}

/// Lazy length-then-lexicographic enumeration of reduced words.
pub struct WordIter<'a> {
    fp: &'a FreeProduct,
    max_len: usize,
    window: Option<usize>,
    allow: [bool; 2],
    len: usize,
    first_side: Side,
    digits: Vec<u64>,
    started: bool,
    done: bool,
}

impl<'a> WordIter<'a> {
    fn new(fp: &'a FreeProduct, max_len: usize, window: Option<usize>, allow: [bool; 2]) -> Self {
        WordIter {
            fp,
            max_len,
            window,
            allow,
            len: 0,
            first_side: Side::G,
            digits: Vec::new(),
            started: false,
            done: false,
        }
    }

    fn limit(&self, side: Side) -> Option<u64> {
        let f = self.fp.factor(side);
        match (f.nontrivial_count(), self.window) {
            (Some(c), _) => Some(c),
            (None, Some(w)) => Some(w as u64),
            (None, None) => None,
        }
    }

    fn side_at(&self, pos: usize) -> Side {
        if pos.is_multiple_of(2) {
            self.first_side
        } else {
            self.first_side.other()
        }
    }

    fn class_feasible(&self) -> bool {
        if self.len > 1 && self.allow != [true, true] {
            return false;
        }
        (0..self.len).all(|p| {
            let s = self.side_at(p);
            self.allow[s as usize] && self.limit(s) != Some(0)
        })
    }

    /// Moves to the next feasible `(len, first_side)` class.
    fn next_class(&mut self) -> bool {
        loop {
            if self.len == 0 || self.first_side == Side::H {
                self.len += 1;
                self.first_side = Side::G;
            } else {
                self.first_side = Side::H;
            }
            if self.len > self.max_len {
                return false;
            }
            if self.class_feasible() {
                self.digits = vec![0; self.len];
                return true;
            }
        }
    }

    fn advance(&mut self) -> bool {
        for pos in (0..self.len).rev() {
            let lim = self.limit(self.side_at(pos));
            let next = self.digits[pos] + 1;
            if lim.is_none_or(|l| next < l) {
                self.digits[pos] = next;
                return true;
            }
            self.digits[pos] = 0;
        }
        false
    }

    fn current(&self) -> Word {
        let rev = (0..self.len)
            .rev()
            .map(|p| {
                let s = self.side_at(p);
                Letter::new(s, self.fp.factor(s).nontrivial_at(self.digits[p]).unwrap())
            })
            .collect();
        Word { rev }
    }
}

impl Iterator for WordIter<'_> {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(Word::identity());
        }
        if (self.len == 0 || !self.advance()) && !self.next_class() {
            self.done = true;
            return None;
        }
        Some(self.current())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2c3() -> FreeProduct {
        FreeProduct::new(FactorSpec::cyclic(Side::G, 2).unwrap(), FactorSpec::cyclic(Side::H, 3).unwrap())
    }

    fn w(fp: &FreeProduct, s: &str) -> Word {
        fp.parse_word(s).unwrap()
    }

    #[test]
    fn reduce_examples() {
        let fp = c2c3();
        let a = Letter::g(1);
        let b = Letter::h(1);
        let b2 = Letter::h(2);
        assert_eq!(fp.reduce([a, b, b]).to_string(), "g1.h2");
        assert!(fp.reduce([a, b, b2, a]).is_identity());
        assert!(fp.reduce([a, a]).is_identity());
    }

    #[test]
    fn multiply_and_inverse_examples() {
        let fp = c2c3();
        assert!(fp.multiply(&w(&fp, "g1.h1"), &w(&fp, "h2.g1")).is_identity());
        assert_eq!(fp.multiply(&w(&fp, "g1.h1"), &Word::identity()), w(&fp, "g1.h1"));
        assert_eq!(fp.multiply(&w(&fp, "g1.h1"), &w(&fp, "g1")).to_string(), "g1.h1.g1");
        assert_eq!(fp.inverse(&w(&fp, "g1.h1")).to_string(), "h2.g1");
        assert!(fp.inverse(&Word::identity()).is_identity());
        assert_eq!(fp.inverse(&w(&fp, "h1")).to_string(), "h2");
    }

    #[test]
    fn suffix_examples() {
        let fp = c2c3();
        let x = w(&fp, "g1.h1.g1.h1");
        assert_eq!(fp.suffix(&x, 2).unwrap().to_string(), "g1.h1");
        assert!(fp.suffix(&x, 0).unwrap().is_identity());
        assert_eq!(fp.suffix(&x, 4).unwrap(), x);
        assert!(matches!(fp.suffix(&x, 5), Err(Error::Range { index: 5, len: 4 })));
    }

    #[test]
    fn enumeration_small_cases() {
        let fp = c2c3();
        let one: Vec<String> = fp.enumerate_words(1, None).map(|w| w.to_string()).collect();
        assert_eq!(one, ["1", "g1", "h1", "h2"]);
        let zero: Vec<Word> = fp.enumerate_words(0, None).collect();
        assert_eq!(zero, vec![Word::identity()]);
        let two: Vec<String> = fp.enumerate_words(2, None).filter(|w| w.len() == 2).map(|w| w.to_string()).collect();
        assert_eq!(two, ["g1.h1", "g1.h2", "h1.g1", "h2.g1"]);
    }

    #[test]
    fn enumeration_is_sorted_and_unique() {
        let fp = c2c3();
        let all: Vec<Word> = fp.enumerate_words(6, None).collect();
        assert!(all.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn infinite_cyclic_enumeration_order() {
        let fp = FreeProduct::new(FactorSpec::infinite(Side::G), FactorSpec::infinite(Side::H));
        let g: Vec<String> = fp.enumerate_factor(Side::G, Some(4)).map(|w| w.to_string()).collect();
        assert_eq!(g, ["1", "g1", "g-1", "g2", "g-2"]);
        // Unbounded: the length-1 class never ends.
        let first: Vec<String> = fp.enumerate_words(2, None).take(4).map(|w| w.to_string()).collect();
        assert_eq!(first, ["1", "g1", "g-1", "g2"]);
    }

    #[test]
    fn table_factor_s3() {
        // S3 as permutations of {0,1,2}: codes 0=id, 1=(012), 2=(021), 3..5 transpositions.
        let rows = "0 1 2 3 4 5\n1 2 0 4 5 3\n2 0 1 5 3 4\n3 5 4 0 2 1\n4 3 5 1 0 2\n5 4 3 2 1 0";
        let t = MulTable::parse(rows).unwrap();
        assert_eq!(t.order(), 6);
        let s3 = FactorSpec::table(Side::H, t);
        assert_eq!(s3.inv(1), 2);
        assert_eq!(s3.inv(3), 3);
        assert_ne!(s3.mul(1, 3), s3.mul(3, 1));
        let parsed = FactorSpec::parse(Side::H, &s3.spec_string()).unwrap();
        assert_eq!(parsed, s3);
    }

    #[test]
    fn bad_tables_rejected() {
        assert!(MulTable::parse("0 1\n1 1").is_err());
        assert!(MulTable::parse("0").is_err());
        assert!(FactorSpec::cyclic(Side::G, 1).is_err());
    }

    #[test]
    fn strict_parse() {
        let fp = c2c3();
        assert!(fp.parse_normal_form("g1.h1").is_ok());
        assert!(fp.parse_normal_form("g1.g1").is_err());
        assert!(fp.parse_normal_form("h3").is_err());
        assert!(fp.parse_word("x1").is_err());
    }
}
