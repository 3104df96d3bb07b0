//! Graphviz export of the final action around the base point.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::certificate::{ActionData, Certificate};
use crate::countable::Point;
use crate::free_product::{Letter, Side};
use crate::verify::{NaiveAction, NaiveSigma};

/// Schreier graph of the certificate's action on the ball of the given
/// radius: syllable length for group elements, `|n|` for index points.
/// Edges `x -> l·x` are labelled `g:<code>` or `h:<code>`; exceptional
/// edges are bold and frozen points filled. Output is deterministic.
pub fn to_dot(cert: &Certificate, radius: usize, code_window: usize) -> String {
    let fp = &cert.fp;
    let gens: Vec<Letter> = [Side::G, Side::H]
        .into_iter()
        .flat_map(|s| fp.factor(s).nontrivial_codes(code_window).into_iter().map(move |c| Letter::new(s, c)))
        .collect();
    let frozen: BTreeSet<&Point> = cert.frozen.iter().collect();
    let mut nodes: Vec<Point> = Vec::new();
    // (from, to, letter, exceptional)
    let mut edges: Vec<(Point, Point, Letter, bool)> = Vec::new();
    match &cert.action {
        ActionData::Action(rows) => {
            let act = NaiveAction::new(fp, rows);
            nodes = fp.enumerate_words(radius, Some(code_window)).map(Point::Elem).collect();
            let inside: BTreeSet<&Point> = nodes.iter().collect();
            for p in &nodes {
                let x = p.as_word().unwrap();
                for &l in &gens {
                    let y = Point::Elem(act.apply(l, x));
                    if inside.contains(&y) {
                        let plain = Point::Elem(crate::verify::left_mul(fp, l, x));
                        edges.push((p.clone(), y.clone(), l, y != plain));
                    }
                }
            }
        }
        ActionData::Sigma { iota, sigma } => {
            let act = NaiveSigma::new(iota, sigma);
            let r = radius as i64;
            nodes.extend((-r..=r).map(Point::Index));
            for x in -r..=r {
                for &l in &gens {
                    if let Some(y) = act.apply(l, x) {
                        if y.abs() <= r {
                            edges.push((Point::Index(x), Point::Index(y), l, l.side == Side::H));
                        }
                    }
                }
            }
        }
    }
    nodes.sort();
    edges.sort_by(|a, b| (&a.0, &a.1, a.2.side, a.2.code).cmp(&(&b.0, &b.1, b.2.side, b.2.code)));
    let mut s = String::from("digraph schreier {\n  node [shape=circle];\n");
    for p in &nodes {
        let style = if frozen.contains(p) { " style=filled fillcolor=lightgrey" } else { "" };
        writeln!(s, "  \"{p}\" [label=\"{p}\"{style}];").unwrap();
    }
    for (x, y, l, exceptional) in &edges {
        let side = if l.side == Side::G { 'g' } else { 'h' };
        let bold = if *exceptional { " style=bold" } else { "" };
        writeln!(s, "  \"{x}\" -> \"{y}\" [label=\"{side}:{}\"{bold}];", l.code).unwrap();
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::Report;
    use crate::driver::Engine;
    use crate::free_product::{FactorSpec, FreeProduct};

    #[test]
    fn base_action_ball() {
        let fp = FreeProduct::new(FactorSpec::cyclic(Side::G, 2).unwrap(), FactorSpec::cyclic(Side::H, 3).unwrap());
        let cert = Certificate {
            fp,
            engine: Engine::Finite,
            swapped: false,
            frozen: vec![Point::Elem(Default::default())],
            action: ActionData::Action(Vec::new()),
            entries: Vec::new(),
            report: Report::default(),
        };
        let d = to_dot(&cert, 1, 2);
        assert!(d.contains("\"1\" -> \"g1\" [label=\"g:1\"];"));
        assert!(d.contains("\"h1\" -> \"h2\" [label=\"h:1\"];"));
        assert!(d.contains("\"1\" [label=\"1\" style=filled fillcolor=lightgrey];"));
        assert!(!d.contains("bold"));
        assert_eq!(d, to_dot(&cert, 1, 2));
    }
}
