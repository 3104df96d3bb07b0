//! The certificate file: factors, frozen set, final state and witnesses.
//!
//! Line-oriented UTF-8 with five sections in a fixed order:
//!
//! ```text
//! htforge-certificate 1
//! [FACTORS]
//! g <spec>
//! h <spec>
//! engine finite|infinite
//! swapped yes|no
//! [FROZEN]
//! <point>                         one per line, in point order
//! [ACTION]                        finite-factor engine
//! h <word> <point> -> <point>     one exception of the H-action
//! [SIGMA]                         infinite-factor engine, instead of [ACTION]
//! iota <point> -> <point>         H-identification of the model
//! s <point> -> <point>            one pair of the partial conjugator
//! [WITNESSES]
//! TRANS <k> <xbar> <ybar> <word>  tuples are comma separated
//! FAITH <word> <basepoint> <image>
//! [REPORT]
//! <key> <value>
//! ```
//!
//! Points are `#n` in the infinite-factor model and normal-form words in the
//! finite-factor model. Words are syllables joined by `.`, the identity is
//! `1`. Writing is canonical, so identical runs give identical bytes.

use std::fmt::Write as _;
use std::path::Path;

use crate::countable::Point;
use crate::driver::Engine;
use crate::error::{Error, Result};
use crate::free_product::{FactorSpec, FreeProduct, Letter, Side, Word};
use crate::witness::{FaithfulnessWitness, TransitivityWitness, Witness};

const MAGIC: &str = "htforge-certificate 1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ActionData {
    /// Exceptions `(h, x, h·x)` of the `H`-action on `G * H`.
    Action(Vec<(i64, Word, Word)>),
    /// The model's `H`-identification and the partial conjugator.
    Sigma { iota: Vec<(i64, i64)>, sigma: Vec<(i64, i64)> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry(pub Witness);

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub requirements: usize,
    pub satisfied: usize,
    pub engine_steps: usize,
    pub k_max: usize,
    pub word_len_max: usize,
    pub window: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub fp: FreeProduct,
    pub engine: Engine,
    pub swapped: bool,
    pub frozen: Vec<Point>,
    pub action: ActionData,
    pub entries: Vec<Entry>,
    pub report: Report,
}

fn tuple_text(t: &[Point]) -> String {
    t.iter().map(Point::to_string).collect::<Vec<_>>().join(",")
}

impl Certificate {
    pub fn witnesses(&self) -> impl Iterator<Item = &Witness> {
        self.entries.iter().map(|e| &e.0)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut line = |args: std::fmt::Arguments| {
            s.write_fmt(args).unwrap();
            s.push('\n');
        };
        line(format_args!("{MAGIC}"));
        line(format_args!("[FACTORS]"));
        line(format_args!("g {}", self.fp.g().spec_string()));
        line(format_args!("h {}", self.fp.h().spec_string()));
        line(format_args!("engine {}", self.engine.name()));
        line(format_args!("swapped {}", if self.swapped { "yes" } else { "no" }));
        line(format_args!("[FROZEN]"));
        let mut frozen = self.frozen.clone();
        frozen.sort();
        for p in &frozen {
            line(format_args!("{p}"));
        }
        match &self.action {
            ActionData::Action(rows) => {
                line(format_args!("[ACTION]"));
                for (h, x, y) in rows {
                    line(format_args!("h {} {x} -> {y}", Letter::h(*h)));
                }
            }
            ActionData::Sigma { iota, sigma } => {
                line(format_args!("[SIGMA]"));
                for (a, b) in iota {
                    line(format_args!("iota #{a} -> #{b}"));
                }
                for (a, b) in sigma {
                    line(format_args!("s #{a} -> #{b}"));
                }
            }
        }
        line(format_args!("[WITNESSES]"));
        for w in self.witnesses() {
            match w {
                Witness::Transitivity(t) => {
                    line(format_args!("TRANS {} {} {} {}", t.k, tuple_text(&t.xbar), tuple_text(&t.ybar), t.word))
                }
                Witness::Faithfulness(f) => line(format_args!("FAITH {} {} {}", f.word, f.basepoint, f.image)),
            }
        }
        line(format_args!("[REPORT]"));
        let r = &self.report;
        for (k, v) in [
            ("requirements", r.requirements),
            ("satisfied", r.satisfied),
            ("engine_steps", r.engine_steps),
            ("kmax", r.k_max),
            ("wlen", r.word_len_max),
            ("window", r.window),
        ] {
            line(format_args!("{k} {v}"));
        }
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        Ok(std::fs::write(path, self.to_text())?)
    }

    pub fn read(path: &Path) -> Result<Certificate> {
        Certificate::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Certificate> {
        Parser::new(text).certificate()
    }
}

struct Parser<'a> {
    lines: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
}

fn err(n: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("line {}: {msg}", n + 1))
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { lines: text.lines().enumerate().peekable() }
    }

    fn next_line(&mut self) -> Result<(usize, &'a str)> {
        self.lines.next().ok_or_else(|| Error::Parse("unexpected end of certificate".into()))
    }

    fn expect(&mut self, want: &str) -> Result<()> {
        let (n, l) = self.next_line()?;
        if l != want {
            return Err(err(n, format!("expected `{want}`, found `{l}`")));
        }
        Ok(())
    }

    fn keyed(&mut self, key: &str) -> Result<(usize, &'a str)> {
        let (n, l) = self.next_line()?;
        match l.split_once(' ') {
            Some((k, v)) if k == key => Ok((n, v)),
            _ => Err(err(n, format!("expected `{key} ...`"))),
        }
    }

    /// Lines up to the next section header.
    fn body(&mut self) -> Vec<(usize, &'a str)> {
        let mut out = Vec::new();
        while let Some(&(n, l)) = self.lines.peek() {
            if l.starts_with('[') {
                break;
            }
            out.push((n, l));
            self.lines.next();
        }
        out
    }

    fn certificate(mut self) -> Result<Certificate> {
        self.expect(MAGIC)?;
        self.expect("[FACTORS]")?;
        let (n, g) = self.keyed("g")?;
        let g = FactorSpec::parse(Side::G, g).map_err(|e| err(n, e))?;
        let (n, h) = self.keyed("h")?;
        let h = FactorSpec::parse(Side::H, h).map_err(|e| err(n, e))?;
        let fp = FreeProduct::new(g, h);
        let (n, engine) = self.keyed("engine")?;
        let engine = Engine::parse(engine).map_err(|e| err(n, e))?;
        let (n, swapped) = self.keyed("swapped")?;
        let swapped = match swapped {
            "yes" => true,
            "no" => false,
            _ => return Err(err(n, "swapped must be yes or no")),
        };

        self.expect("[FROZEN]")?;
        let frozen = self
            .body()
            .into_iter()
            .map(|(n, l)| Point::parse(&fp, l).map_err(|e| err(n, e)))
            .collect::<Result<Vec<_>>>()?;

        let (n, header) = self.next_line()?;
        let arrow = |n: usize, l: &str| -> Result<(String, String)> {
            let (a, b) = l.split_once(" -> ").ok_or_else(|| err(n, "expected `a -> b`"))?;
            Ok((a.to_string(), b.to_string()))
        };
        let index = |n: usize, t: &str| -> Result<i64> {
            Point::parse(&fp, t).ok().and_then(|p| p.as_index()).ok_or_else(|| err(n, format!("bad index point `{t}`")))
        };
        let action = match header {
            "[ACTION]" => {
                let mut rows = Vec::new();
                for (n, l) in self.body() {
                    let rest = l.strip_prefix("h ").ok_or_else(|| err(n, "expected `h <word> <point> -> <point>`"))?;
                    let (lhs, y) = arrow(n, rest)?;
                    let (hw, x) = lhs.split_once(' ').ok_or_else(|| err(n, "missing point"))?;
                    let hw = fp.parse_normal_form(hw).map_err(|e| err(n, e))?;
                    let code = match hw.letters() {
                        [l] if l.side == Side::H => l.code,
                        _ => return Err(err(n, format!("`{hw}` is not a nontrivial element of H"))),
                    };
                    let x = fp.parse_normal_form(x).map_err(|e| err(n, e))?;
                    let y = fp.parse_normal_form(&y).map_err(|e| err(n, e))?;
                    rows.push((code, x, y));
                }
                ActionData::Action(rows)
            }
            "[SIGMA]" => {
                let (mut iota, mut sigma) = (Vec::new(), Vec::new());
                for (n, l) in self.body() {
                    let (key, rest) = l.split_once(' ').ok_or_else(|| err(n, "empty record"))?;
                    let (a, b) = arrow(n, rest)?;
                    let pair = (index(n, &a)?, index(n, &b)?);
                    match key {
                        "iota" => iota.push(pair),
                        "s" => sigma.push(pair),
                        _ => return Err(err(n, format!("unknown record `{key}`"))),
                    }
                }
                ActionData::Sigma { iota, sigma }
            }
            _ => return Err(err(n, "expected [ACTION] or [SIGMA]")),
        };

        self.expect("[WITNESSES]")?;
        let mut entries = Vec::new();
        for (n, l) in self.body() {
            let f: Vec<&str> = l.split(' ').collect();
            let point = |t: &str| Point::parse(&fp, t).map_err(|e| err(n, e));
            let word = |t: &str| fp.parse_normal_form(t).map_err(|e| err(n, e));
            let w = match f.as_slice() {
                ["TRANS", k, x, y, w] => {
                    let k: usize = k.parse().map_err(|_| err(n, format!("bad k `{k}`")))?;
                    let tuple = |t: &str| t.split(',').map(point).collect::<Result<Vec<_>>>();
                    let (xbar, ybar) = (tuple(x)?, tuple(y)?);
                    if xbar.len() != k || ybar.len() != k {
                        return Err(err(n, "tuple length differs from k"));
                    }
                    Witness::Transitivity(TransitivityWitness { k, xbar, ybar, word: word(w)? })
                }
                ["FAITH", w, x, y] => Witness::Faithfulness(FaithfulnessWitness {
                    word: word(w)?,
                    basepoint: point(x)?,
                    image: point(y)?,
                }),
                _ => return Err(err(n, format!("unknown witness record `{l}`"))),
            };
            entries.push(Entry(w));
        }

        self.expect("[REPORT]")?;
        let mut report = Report::default();
        for (n, l) in self.body() {
            let (k, v) = l.split_once(' ').ok_or_else(|| err(n, "expected `key value`"))?;
            let v: usize = v.parse().map_err(|_| err(n, format!("bad value `{v}`")))?;
            match k {
                "requirements" => report.requirements = v,
                "satisfied" => report.satisfied = v,
                "engine_steps" => report.engine_steps = v,
                "kmax" => report.k_max = v,
                "wlen" => report.word_len_max = v,
                "window" => report.window = v,
                _ => return Err(err(n, format!("unknown report key `{k}`"))),
            }
        }
        if let Some((n, _)) = self.lines.next() {
            return Err(err(n, "trailing content"));
        }
        Ok(Certificate { fp, engine, swapped, frozen, action, entries, report })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Certificate {
        let fp = FreeProduct::new(FactorSpec::cyclic(Side::G, 2).unwrap(), FactorSpec::cyclic(Side::H, 3).unwrap());
        let w = |s: &str| fp.parse_word(s).unwrap();
        Certificate {
            fp: fp.clone(),
            engine: Engine::Finite,
            swapped: false,
            frozen: vec![Point::Elem(Word::identity()), Point::Elem(w("g1"))],
            action: ActionData::Action(vec![(1, w("g1.h1"), w("h2.g1.h1"))]),
            entries: vec![
                Entry(Witness::Transitivity(TransitivityWitness {
                    k: 2,
                    xbar: vec![Point::Elem(Word::identity()), Point::Elem(w("g1"))],
                    ybar: vec![Point::Elem(w("g1")), Point::Elem(Word::identity())],
                    word: w("g1"),
                })),
                Entry(Witness::Faithfulness(FaithfulnessWitness {
                    word: w("h1"),
                    basepoint: Point::Elem(Word::identity()),
                    image: Point::Elem(w("h1")),
                })),
            ],
            report: Report { requirements: 2, satisfied: 2, engine_steps: 1, k_max: 2, word_len_max: 1, window: 2 },
        }
    }

    #[test]
    fn roundtrip() {
        let c = small();
        let text = c.to_text();
        let back = Certificate::parse(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_text(), text);
        assert!(text.contains("TRANS 2 1,g1 g1,1 g1\n"));
        assert!(text.contains("h h1 g1.h1 -> h2.g1.h1\n"));
    }

    #[test]
    fn sigma_roundtrip() {
        let mut c = small();
        c.fp = FreeProduct::new(FactorSpec::infinite(Side::G), FactorSpec::infinite(Side::H));
        c.engine = Engine::Infinite;
        c.frozen = vec![Point::Index(0), Point::Index(-3)];
        c.action = ActionData::Sigma { iota: vec![(1, 2), (2, 1)], sigma: vec![(0, -3)] };
        c.entries.clear();
        let text = c.to_text();
        assert!(text.contains("s #0 -> #-3\n"));
        assert_eq!(Certificate::parse(&text).unwrap(), c);
    }

    #[test]
    fn malformed_input_is_rejected() {
        let text = small().to_text();
        assert!(Certificate::parse("").is_err());
        assert!(Certificate::parse(&text.replace("TRANS 2", "TRANS 3")).is_err());
        assert!(Certificate::parse(&text.replace("engine finite", "engine other")).is_err());
        assert!(Certificate::parse(&format!("{text}extra\n")).is_err());
    }
}
