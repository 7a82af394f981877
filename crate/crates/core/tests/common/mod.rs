#![allow(dead_code)]

use std::fs;

use keikit::bundled_fixture_dir;
use keikit::diagram::{load_knot_table, LinkDiagram};
use keikit::invariant::{presentation_from_rows, PresentationMatrix, Symbol, SymbolicEntry};
use keikit::kei::FiniteKei;
use keikit::keialg::ModuleStructure;

pub fn read_fixture(rel: &str) -> String {
    let p = bundled_fixture_dir().join(rel);
    fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

pub fn kei(name: &str) -> FiniteKei {
    FiniteKei::parse(&read_fixture(&format!("kei/{name}.json"))).unwrap()
}

pub fn module(name: &str) -> ModuleStructure {
    ModuleStructure::from_json(&read_fixture(&format!("modules/{name}.json"))).unwrap()
}

/// Every named diagram in one table file, in file order.
pub fn table(name: &str) -> Vec<(String, LinkDiagram)> {
    load_knot_table(&read_fixture(&format!("tables/{name}.json")))
        .unwrap()
        .into_iter()
        .map(|r| {
            let d = r.diagram().unwrap_or_else(|e| panic!("{}: {e}", r.name));
            (r.name, d)
        })
        .collect()
}

pub fn all_diagrams() -> Vec<(String, LinkDiagram)> {
    ["knots", "extra", "virtual"]
        .iter()
        .flat_map(|t| table(t))
        .collect()
}

pub fn diagram(name: &str) -> LinkDiagram {
    all_diagrams()
        .into_iter()
        .find(|(n, _)| n == name)
        .unwrap_or_else(|| panic!("no fixture diagram {name}"))
        .1
}

/// Parses a compact cell such as `t13`, `s11`, `-1`, `0` or `t11+s11-1`.
pub fn cell(text: &str) -> SymbolicEntry {
    let mut e = SymbolicEntry::default();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let (sign, body) = match rest.as_bytes()[0] {
            b'-' => (-1, &rest[1..]),
            b'+' => (1, &rest[1..]),
            _ => (1, rest),
        };
        let end = body[1..].find(['+', '-']).map_or(body.len(), |i| i + 1);
        let token = &body[..end];
        rest = &body[end..];
        let digits = |s: &str| {
            s.chars()
                .map(|c| c.to_digit(10).unwrap() as usize)
                .collect::<Vec<_>>()
        };
        match token.as_bytes()[0] {
            b't' | b's' => {
                let ix = digits(&token[1..]);
                let sym = if token.starts_with('t') {
                    Symbol::t(ix[0], ix[1])
                } else {
                    Symbol::s(ix[0], ix[1])
                };
                *e.terms.entry(sym).or_insert(0) += sign;
            }
            _ => e.constant += sign * token.parse::<i64>().unwrap(),
        }
    }
    e.terms.retain(|_, c| *c != 0);
    e
}

pub fn matrix(kei_order: usize, rows: &[&[&str]]) -> PresentationMatrix {
    presentation_from_rows(
        kei_order,
        rows.iter()
            .map(|r| r.iter().map(|c| cell(c)).collect())
            .collect(),
    )
}

/// The two constant-labeling matrices displayed for the virtual knot 4.97.
pub fn matrix_497_up() -> PresentationMatrix {
    matrix(
        3,
        &[
            &["s11", "t11", "-1", "0"],
            &["s11", "0", "t11", "-1"],
            &["-1", "t11", "0", "s11"],
            &["t11", "0", "s11", "-1"],
        ],
    )
}

pub fn matrix_497_down() -> PresentationMatrix {
    matrix(
        3,
        &[
            &["s11", "-1", "t11", "0"],
            &["s11", "0", "-1", "t11"],
            &["t11", "-1", "0", "s11"],
            &["-1", "0", "s11", "t11"],
        ],
    )
}
