//! Bead presentation matrices and the kei-module enhanced invariant.
//!
//! For a labeling `f` of a diagram, every classical crossing contributes one
//! bead relation `c = t_{x,y}·a + s_{x,y}·b`, where `a` sits on the under-arc
//! labeled `x`, `b` on the over-arc labeled `y` and `c` on the other
//! under-arc. The coefficient matrix of these relations presents the
//! fundamental module of the labeled diagram; substituting a module
//! structure and counting solutions gives the labeling's signature.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::diagram::{LinkDiagram, Sign};
use crate::kei::FiniteKei;
use crate::keialg::ModuleStructure;
use crate::labeling::{enumerate_labelings, KeiLabeling};
use crate::modarith::{count_homogeneous_solutions, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("labeling does not satisfy the crossing relations of the diagram")]
    InvalidLabeling,
    #[error("presentation is over a kei of order {matrix}, module over order {module}")]
    OrderMismatch { matrix: usize, module: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolKind {
    T,
    S,
}

/// A formal coefficient `t_{x,y}` or `s_{x,y}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    pub kind: SymbolKind,
    pub x: usize,
    pub y: usize,
}

impl Symbol {
    pub fn t(x: usize, y: usize) -> Self {
        Symbol {
            kind: SymbolKind::T,
            x,
            y,
        }
    }

    pub fn s(x: usize, y: usize) -> Self {
        Symbol {
            kind: SymbolKind::S,
            x,
            y,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            SymbolKind::T => 't',
            SymbolKind::S => 's',
        };
        write!(f, "{k}{}{}", self.x, self.y)
    }
}

/// An integer plus a formal integer combination of symbols.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolicEntry {
    pub constant: i64,
    pub terms: BTreeMap<Symbol, i64>,
}

impl SymbolicEntry {
    pub fn constant(c: i64) -> Self {
        SymbolicEntry {
            constant: c,
            terms: BTreeMap::new(),
        }
    }

    pub fn symbol(sym: Symbol) -> Self {
        SymbolicEntry {
            constant: 0,
            terms: BTreeMap::from([(sym, 1)]),
        }
    }

    fn add_symbol(&mut self, sym: Symbol, coeff: i64) {
        let c = self.terms.entry(sym).or_insert(0);
        *c += coeff;
        if *c == 0 {
            self.terms.remove(&sym);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.constant == 0 && self.terms.is_empty()
    }

    /// Value under a module structure, unreduced.
    fn evaluate(&self, module: &ModuleStructure) -> i64 {
        let mut v = self.constant;
        for (sym, &c) in &self.terms {
            let val = match sym.kind {
                SymbolKind::T => module.t(sym.x, sym.y),
                SymbolKind::S => module.s(sym.x, sym.y),
            } as i64;
            v += c * val;
        }
        v
    }
}

impl fmt::Display for SymbolicEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (sym, &c) in &self.terms {
            let sign = if c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.unsigned_abs();
            if mag == 1 {
                write!(f, "{sign}{sym}")?;
            } else {
                write!(f, "{sign}{mag}{sym}")?;
            }
            first = false;
        }
        if self.constant != 0 {
            if first || self.constant < 0 {
                write!(f, "{}", self.constant)?;
            } else {
                write!(f, "+{}", self.constant)?;
            }
        }
        Ok(())
    }
}

/// Crossings × arcs matrix of symbolic bead coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PresentationMatrix {
    kei_order: usize,
    rows: usize,
    cols: usize,
    entries: Vec<SymbolicEntry>,
}

impl PresentationMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn kei_order(&self) -> usize {
        self.kei_order
    }

    pub fn get(&self, r: usize, c: usize) -> &SymbolicEntry {
        &self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[SymbolicEntry] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    /// Whether `other` equals this matrix after permuting rows and
    /// reindexing columns (arcs). Columns are matched by brute force, so this
    /// is meant for the small matrices in fixtures.
    pub fn equivalent_to(&self, other: &PresentationMatrix) -> bool {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return false;
        }
        let mut sorted_other: Vec<Vec<SymbolicEntry>> =
            (0..other.rows).map(|r| other.row(r).to_vec()).collect();
        sorted_other.sort();
        let mut perm: Vec<usize> = (0..self.cols).collect();
        loop {
            let mut rows: Vec<Vec<SymbolicEntry>> = (0..self.rows)
                .map(|r| perm.iter().map(|&c| self.get(r, c).clone()).collect())
                .collect();
            rows.sort();
            if rows == sorted_other {
                return true;
            }
            if !next_permutation(&mut perm) {
                return false;
            }
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

impl fmt::Display for PresentationMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(|e| e.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Builds a presentation matrix from rows of entries; used to state
/// expected matrices in tests and fixtures.
pub fn presentation_from_rows(
    kei_order: usize,
    rows: Vec<Vec<SymbolicEntry>>,
) -> PresentationMatrix {
    let cols = rows.first().map_or(0, Vec::len);
    assert!(
        rows.iter().all(|r| r.len() == cols),
        "ragged presentation rows"
    );
    PresentationMatrix {
        kei_order,
        rows: rows.len(),
        cols,
        entries: rows.into_iter().flatten().collect(),
    }
}

/// The bead presentation of `diagram` labeled by `labeling`.
///
/// A positive crossing with `x = f(under_in)`, `y = f(over)` puts `t_{x,y}`
/// on the incoming under-arc, `s_{x,y}` on the over-arc and `-1` on the
/// outgoing under-arc. A negative crossing uses `x = f(under_out)` and swaps
/// the roles of the two under-arcs. Coefficients on a shared column add up.
pub fn presentation_matrix(
    diagram: &LinkDiagram,
    kei: &FiniteKei,
    labeling: &KeiLabeling,
) -> Result<PresentationMatrix, InvariantError> {
    if !labeling.is_valid(diagram, kei) {
        return Err(InvariantError::InvalidLabeling);
    }
    let cols = diagram.arc_count();
    let rows = diagram.crossing_count();
    let mut entries = vec![SymbolicEntry::default(); rows * cols];
    for (r, x) in diagram.crossings().iter().enumerate() {
        let (source, target) = match x.sign {
            Sign::Positive => (x.under_in, x.under_out),
            Sign::Negative => (x.under_out, x.under_in),
        };
        let (a, b) = (labeling.label(source), labeling.label(x.over));
        entries[r * cols + source.index()].add_symbol(Symbol::t(a, b), 1);
        entries[r * cols + x.over.index()].add_symbol(Symbol::s(a, b), 1);
        entries[r * cols + target.index()].constant -= 1;
    }
    Ok(PresentationMatrix {
        kei_order: kei.order(),
        rows,
        cols,
        entries,
    })
}

/// Replaces every symbol by its value in `module`; entries land in `[0, m)`.
pub fn substitute(
    p: &PresentationMatrix,
    module: &ModuleStructure,
) -> Result<IntMatrix, InvariantError> {
    if p.kei_order != module.order() {
        return Err(InvariantError::OrderMismatch {
            matrix: p.kei_order,
            module: module.order(),
        });
    }
    let m = module.modulus();
    let values = p
        .entries
        .iter()
        .map(|e| m.reduce(e.evaluate(module)) as i64)
        .collect();
    Ok(IntMatrix::new(p.rows, p.cols, values).expect("shape is preserved"))
}

/// `|Hom(Z_f[X], M)|`: the number of bead assignments compatible with `f`.
pub fn labeling_signature(
    diagram: &LinkDiagram,
    kei: &FiniteKei,
    labeling: &KeiLabeling,
    module: &ModuleStructure,
) -> Result<BigUint, InvariantError> {
    let p = presentation_matrix(diagram, kei, labeling)?;
    let a = substitute(&p, module)?;
    Ok(count_homogeneous_solutions(&a, module.modulus()))
}

/// Generating polynomial `Σ mult·u^exp` of a multiset of signatures.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct InvariantPolynomial {
    terms: BTreeMap<BigUint, u64>,
}

impl InvariantPolynomial {
    pub fn from_multiset<'a>(values: impl IntoIterator<Item = &'a BigUint>) -> Self {
        let mut terms = BTreeMap::new();
        for v in values {
            *terms.entry(v.clone()).or_insert(0) += 1;
        }
        InvariantPolynomial { terms }
    }

    /// `(exponent, multiplicity)` pairs in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&BigUint, u64)> {
        self.terms.iter().map(|(e, &m)| (e, m))
    }

    /// Value at `u = 1`.
    pub fn evaluate_at_one(&self) -> u64 {
        self.terms.values().sum()
    }
}

impl fmt::Display for InvariantPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, &m)| {
                let coeff = if m == 1 { String::new() } else { m.to_string() };
                if *e == BigUint::from(1u32) {
                    format!("{coeff}u")
                } else {
                    format!("{coeff}u^{e}")
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// The enhanced invariant of one diagram: one signature per labeling, in
/// labeling order, and their generating polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnhancedInvariant {
    pub signatures: Vec<BigUint>,
    pub polynomial: InvariantPolynomial,
}

impl EnhancedInvariant {
    pub fn counting_invariant(&self) -> usize {
        self.signatures.len()
    }

    /// The multiset form, sorted ascending.
    pub fn multiset(&self) -> Vec<BigUint> {
        let mut v = self.signatures.clone();
        v.sort();
        v
    }
}

/// Signatures over all labelings of `diagram` by `kei`.
///
/// Quandle-variant modules give values that depend on orientation; only
/// kei-variant modules yield invariants of unoriented links.
pub fn enhanced_invariant(
    diagram: &LinkDiagram,
    kei: &FiniteKei,
    module: &ModuleStructure,
) -> Result<EnhancedInvariant, InvariantError> {
    if kei.order() != module.order() {
        return Err(InvariantError::OrderMismatch {
            matrix: kei.order(),
            module: module.order(),
        });
    }
    let signatures = enumerate_labelings(diagram, kei)
        .iter()
        .map(|f| labeling_signature(diagram, kei, f, module))
        .collect::<Result<Vec<_>, _>>()?;
    let polynomial = InvariantPolynomial::from_multiset(&signatures);
    Ok(EnhancedInvariant {
        signatures,
        polynomial,
    })
}

/// Hex SHA-256 of a canonical serialization.
pub fn digest(canonical: &str) -> String {
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct TermRecord {
    pub exp: serde_json::Value,
    pub mult: u64,
}

/// JSON result record for one link.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct InvariantRecord {
    pub link: String,
    pub kei: String,
    pub module: String,
    pub terms: Vec<TermRecord>,
    #[serde(rename = "countingInvariant")]
    pub counting_invariant: u64,
}

impl InvariantRecord {
    pub fn new(
        link: &str,
        kei: &FiniteKei,
        module: &ModuleStructure,
        inv: &EnhancedInvariant,
    ) -> Self {
        let terms = inv
            .polynomial
            .terms()
            .map(|(e, m)| {
                let exp = match u64::try_from(e) {
                    Ok(v) => serde_json::Value::from(v),
                    Err(_) => serde_json::Value::from(e.to_string()),
                };
                TermRecord { exp, mult: m }
            })
            .collect();
        InvariantRecord {
            link: link.to_string(),
            kei: digest(&kei.to_json()),
            module: digest(&module.to_json()),
            terms,
            counting_invariant: inv.counting_invariant() as u64,
        }
    }
}
