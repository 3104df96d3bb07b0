use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::free_product::{code_rank, FreeProduct, Word};

/// A point of `X`.
///
/// `Index` points belong to the infinite-factor model (`X` indexed by the
/// integers, both factors acting freely and transitively); `Elem` points
/// belong to the finite-factor model, where `X` is `G * H` itself.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Point {
    Index(i64),
    Elem(Word),
}

impl Point {
    pub fn as_index(&self) -> Option<i64> {
        match self {
            Point::Index(i) => Some(*i),
            Point::Elem(_) => None,
        }
    }

    pub fn as_word(&self) -> Option<&Word> {
        match self {
            Point::Elem(w) => Some(w),
            Point::Index(_) => None,
        }
    }

    /// Parses `#n` or a normal-form word.
    pub fn parse(fp: &FreeProduct, text: &str) -> Result<Point> {
        let t = text.trim();
        if let Some(n) = t.strip_prefix('#') {
            return n.parse().map(Point::Index).map_err(|_| Error::Parse(format!("bad point index `{t}`")));
        }
        fp.parse_normal_form(t).map(Point::Elem)
    }
}

/// Index points in the order `#0, #1, #-1, #2, ...`; words in enumeration order.
impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Point::Index(a), Point::Index(b)) => index_key(*a).cmp(&index_key(*b)),
            (Point::Elem(a), Point::Elem(b)) => a.cmp(b),
            (Point::Index(_), Point::Elem(_)) => Ordering::Less,
            (Point::Elem(_), Point::Index(_)) => Ordering::Greater,
        }
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) fn index_key(i: i64) -> u64 {
    if i == 0 {
        0
    } else {
        code_rank(i)
    }
}

/// The `n`-th index point in model order.
pub fn index_at(n: u64) -> i64 {
    if n == 0 {
        0
    } else {
        crate::free_product::infinite_code_at(n - 1)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Index(i) => write!(f, "#{i}"),
            Point::Elem(w) => write!(f, "{w}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free_product::{FactorSpec, Side};

    #[test]
    fn index_order_and_roundtrip() {
        let order: Vec<i64> = (0..5).map(index_at).collect();
        assert_eq!(order, [0, 1, -1, 2, -2]);
        assert!((0..50u64).all(|n| index_key(index_at(n)) == n));
        let fp = FreeProduct::new(FactorSpec::infinite(Side::G), FactorSpec::infinite(Side::H));
        assert_eq!(Point::parse(&fp, "#-3").unwrap(), Point::Index(-3));
        assert_eq!(Point::parse(&fp, "g1.h-2").unwrap().to_string(), "g1.h-2");
        assert!(Point::Index(1) < Point::Index(-1));
    }
}
