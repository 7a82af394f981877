//! Finite kei (involutory quandles) given by their operation tables.
//!
//! Elements are numbered `1..=n`. Entry `(i, j)` of the table is `k` when
//! `x_i ▷ x_j = x_k`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One of the three kei axioms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axiom {
    /// `x ▷ x = x`
    Idempotence,
    /// `(x ▷ y) ▷ y = x`
    Involution,
    /// `(x ▷ y) ▷ z = (x ▷ z) ▷ (y ▷ z)`
    SelfDistributivity,
}

impl Axiom {
    pub fn label(self) -> &'static str {
        match self {
            Axiom::Idempotence => "(i)",
            Axiom::Involution => "(ii)",
            Axiom::SelfDistributivity => "(iii)",
        }
    }
}

/// A failed axiom instance. The witness holds one, two or three element
/// indices depending on the axiom.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub witness: Vec<usize>,
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.witness.iter().map(|v| v.to_string()).collect();
        write!(f, "axiom {} fails at ({})", self.axiom.label(), w.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KeiError {
    #[error("operation table is empty")]
    Empty,
    #[error("row {row} has {len} entries, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("entry ({row},{col}) = {value} is outside 1..={order}")]
    OutOfRange {
        row: usize,
        col: usize,
        value: usize,
        order: usize,
    },
    #[error("table declares order {declared} but has {rows} rows")]
    OrderMismatch { declared: usize, rows: usize },
    #[error("table violates the kei axioms at {} instance(s)", .0.len())]
    Axioms(Vec<AxiomViolation>),
    #[error("t = {t} does not satisfy t^2 = 1 mod {n}")]
    NotInvolutory { n: usize, t: i64 },
    #[error("kei order must be at least 1")]
    ZeroOrder,
    #[error("malformed kei file: {0}")]
    Format(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteKei {
    order: usize,
    // 1-based entries, row-major
    table: Vec<usize>,
}

impl FiniteKei {
    pub fn order(&self) -> usize {
        self.order
    }

    /// `x ▷ y` for 1-based element indices.
    pub fn op(&self, x: usize, y: usize) -> usize {
        self.table[(x - 1) * self.order + (y - 1)]
    }

    pub fn elements(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.order
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    /// Canonical JSON form `{"order": n, "table": [...]}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&KeiFile {
            order: self.order,
            table: self.table(),
        })
        .expect("kei serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, KeiError> {
        let file: KeiFile =
            serde_json::from_str(text).map_err(|e| KeiError::Format(e.to_string()))?;
        if file.table.len() != file.order {
            return Err(KeiError::OrderMismatch {
                declared: file.order,
                rows: file.table.len(),
            });
        }
        kei_from_table(file.table)
    }

    /// `n` lines of `n` whitespace-separated integers.
    pub fn from_text(text: &str) -> Result<Self, KeiError> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|_| {
                        KeiError::Format(format!("line {}: `{tok}` is not an index", lineno + 1))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        kei_from_table(rows)
    }

    /// Accepts either the JSON or the plain-text table format.
    pub fn parse(text: &str) -> Result<Self, KeiError> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_text(text)
        }
    }
}

impl fmt::Display for FiniteKei {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.table.chunks(self.order) {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct KeiFile {
    order: usize,
    table: Vec<Vec<usize>>,
}

/// Exhaustive check of all three axioms; returns every failing instance.
pub fn axiom_violations(order: usize, table: &[usize]) -> Vec<AxiomViolation> {
    let op = |x: usize, y: usize| table[(x - 1) * order + (y - 1)];
    let mut out = Vec::new();
    for x in 1..=order {
        if op(x, x) != x {
            out.push(AxiomViolation {
                axiom: Axiom::Idempotence,
                witness: vec![x],
            });
        }
    }
    for x in 1..=order {
        for y in 1..=order {
            if op(op(x, y), y) != x {
                out.push(AxiomViolation {
                    axiom: Axiom::Involution,
                    witness: vec![x, y],
                });
            }
        }
    }
    for x in 1..=order {
        for y in 1..=order {
            for z in 1..=order {
                if op(op(x, y), z) != op(op(x, z), op(y, z)) {
                    out.push(AxiomViolation {
                        axiom: Axiom::SelfDistributivity,
                        witness: vec![x, y, z],
                    });
                }
            }
        }
    }
    out
}

/// Validates an operation table (1-based entries) as a kei.
pub fn kei_from_table(table: Vec<Vec<usize>>) -> Result<FiniteKei, KeiError> {
    let order = table.len();
    if order == 0 {
        return Err(KeiError::Empty);
    }
    let mut flat = Vec::with_capacity(order * order);
    for (i, row) in table.iter().enumerate() {
        if row.len() != order {
            return Err(KeiError::NotSquare {
                row: i + 1,
                len: row.len(),
                expected: order,
            });
        }
        for (j, &v) in row.iter().enumerate() {
            if v == 0 || v > order {
                return Err(KeiError::OutOfRange {
                    row: i + 1,
                    col: j + 1,
                    value: v,
                    order,
                });
            }
            flat.push(v);
        }
    }
    let violations = axiom_violations(order, &flat);
    if !violations.is_empty() {
        return Err(KeiError::Axioms(violations));
    }
    Ok(FiniteKei { order, table: flat })
}

fn from_ring_rule(n: usize, rule: impl Fn(i64, i64) -> i64) -> FiniteKei {
    let modn = n as i64;
    let mut table = Vec::with_capacity(n * n);
    for x in 0..modn {
        for y in 0..modn {
            table.push(rule(x, y).rem_euclid(modn) as usize + 1);
        }
    }
    FiniteKei { order: n, table }
}

/// `x ▷ y = 2y − x` on `Z_n`, with `x_{i+1} = i`.
pub fn takasaki_kei(n: usize) -> Result<FiniteKei, KeiError> {
    if n == 0 {
        return Err(KeiError::ZeroOrder);
    }
    Ok(from_ring_rule(n, |x, y| 2 * y - x))
}

/// `x ▷ y = t·x + (1 − t)·y` on `Z_n`; requires `t² ≡ 1 (mod n)`.
pub fn alexander_kei(n: usize, t: i64) -> Result<FiniteKei, KeiError> {
    if n == 0 {
        return Err(KeiError::ZeroOrder);
    }
    let modn = n as i64;
    let tr = t.rem_euclid(modn);
    if (tr * tr) % modn != 1 % modn {
        return Err(KeiError::NotInvolutory { n, t });
    }
    Ok(from_ring_rule(n, |x, y| tr * x + (1 - tr) * y))
}

/// Whether `map` (1-based, `map[i-1] = f(x_i)`) is a kei homomorphism
/// `source → target`. A map of the wrong length or with out-of-range values
/// is never a homomorphism.
pub fn is_homomorphism(map: &[usize], source: &FiniteKei, target: &FiniteKei) -> bool {
    if map.len() != source.order() || map.iter().any(|&v| v == 0 || v > target.order()) {
        return false;
    }
    let f = |x: usize| map[x - 1];
    source.elements().all(|x| {
        source
            .elements()
            .all(|y| f(source.op(x, y)) == target.op(f(x), f(y)))
    })
}
