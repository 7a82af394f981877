//! Kei-algebra and quandle-algebra module structures on `Z_m`.
//!
//! A structure assigns residues `t_{x,y}` and `s_{x,y}` to every ordered pair
//! of kei elements; beads then transform as `c = t_{x,y}·a + s_{x,y}·b` at a
//! crossing. The kei variant must satisfy all six relation families below;
//! the quandle variant drops the two type II families (`R1a`, `R1b`) and asks
//! for invertible `t` entries instead.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kei::FiniteKei;
use crate::modarith::{ModArithError, Modulus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Kei,
    Quandle,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Kei => "kei",
            Variant::Quandle => "quandle",
        })
    }
}

impl std::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "kei" => Ok(Variant::Kei),
            "quandle" => Ok(Variant::Quandle),
            other => Err(format!(
                "unknown variant `{other}` (expected kei or quandle)"
            )),
        }
    }
}

/// Relation families on the coefficient tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    /// `t_{x,y} t_{x▷y,y} = 1`
    R1a,
    /// `t_{x,y} s_{x▷y,y} + s_{x,y} = 0`
    R1b,
    /// `t_{x,x} + s_{x,x} = 1`
    R2,
    /// `t_{x▷y,z} t_{x,y} = t_{x▷z,y▷z} t_{x,z}`
    R3a,
    /// `t_{x▷y,z} s_{x,y} = s_{x▷z,y▷z} t_{y,z}`
    R3b,
    /// `s_{x▷y,z} = s_{x▷z,y▷z} s_{y,z} + t_{x▷z,y▷z} s_{x,z}`
    R3c,
    /// `t_{x,y}` is a unit (quandle variant)
    Invertible,
}

impl Relation {
    pub fn name(self) -> &'static str {
        match self {
            Relation::R1a => "R1a",
            Relation::R1b => "R1b",
            Relation::R2 => "R2",
            Relation::R3a => "R3a",
            Relation::R3b => "R3b",
            Relation::R3c => "R3c",
            Relation::Invertible => "invertible-t",
        }
    }

    fn families(variant: Variant) -> &'static [Relation] {
        match variant {
            Variant::Kei => &[
                Relation::R1a,
                Relation::R1b,
                Relation::R2,
                Relation::R3a,
                Relation::R3b,
                Relation::R3c,
            ],
            Variant::Quandle => &[
                Relation::Invertible,
                Relation::R2,
                Relation::R3a,
                Relation::R3b,
                Relation::R3c,
            ],
        }
    }

    fn arity(self) -> usize {
        match self {
            Relation::R2 => 1,
            Relation::R1a | Relation::R1b | Relation::Invertible => 2,
            Relation::R3a | Relation::R3b | Relation::R3c => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelationViolation {
    pub relation: Relation,
    pub witness: Vec<usize>,
}

impl fmt::Display for RelationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.witness.iter().map(|v| v.to_string()).collect();
        write!(f, "{} fails at ({})", self.relation.name(), w.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("module tables are for a kei of order {module}, but the kei has order {kei}")]
    OrderMismatch { module: usize, kei: usize },
    #[error("{which} table is not {n}x{n}")]
    Shape { which: &'static str, n: usize },
    #[error(transparent)]
    Modulus(#[from] ModArithError),
    #[error("search over order {order} and modulus {modulus} exceeds the limit order*modulus <= {limit}")]
    LimitExceeded {
        order: usize,
        modulus: u64,
        limit: u64,
    },
    #[error("malformed module file: {0}")]
    Format(String),
}

/// Coefficient tables `[T|S]` over `Z_m`, stored reduced into `[0, m)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModuleStructure {
    order: usize,
    modulus: Modulus,
    t: Vec<u64>,
    s: Vec<u64>,
    variant: Variant,
}

impl ModuleStructure {
    pub fn new(
        modulus: Modulus,
        t: Vec<Vec<i64>>,
        s: Vec<Vec<i64>>,
        variant: Variant,
    ) -> Result<Self, ModuleError> {
        let n = t.len();
        let flatten = |rows: Vec<Vec<i64>>, which| {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(ModuleError::Shape { which, n });
            }
            Ok(rows
                .into_iter()
                .flatten()
                .map(|v| modulus.reduce(v))
                .collect::<Vec<_>>())
        };
        let t = flatten(t, "t")?;
        let s = flatten(s, "s")?;
        if n == 0 {
            return Err(ModuleError::Shape { which: "t", n: 0 });
        }
        Ok(ModuleStructure {
            order: n,
            modulus,
            t,
            s,
            variant,
        })
    }

    /// `T ≡ 1`, `S ≡ 0`; valid for every kei and modulus.
    pub fn trivial(order: usize, modulus: Modulus) -> Self {
        ModuleStructure {
            order,
            modulus,
            t: vec![1; order * order],
            s: vec![0; order * order],
            variant: Variant::Kei,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn with_variant(&self, variant: Variant) -> Self {
        ModuleStructure {
            variant,
            ..self.clone()
        }
    }

    /// `t_{x,y}` for 1-based elements.
    pub fn t(&self, x: usize, y: usize) -> u64 {
        self.t[(x - 1) * self.order + (y - 1)]
    }

    pub fn s(&self, x: usize, y: usize) -> u64 {
        self.s[(x - 1) * self.order + (y - 1)]
    }

    pub fn t_table(&self) -> Vec<Vec<u64>> {
        self.t.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn s_table(&self) -> Vec<Vec<u64>> {
        self.s.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    /// Row-major flattening of the block matrix `[T|S]`; the enumeration
    /// order key.
    pub fn block_key(&self) -> Vec<u64> {
        let n = self.order;
        (0..n)
            .flat_map(|i| {
                self.t[i * n..(i + 1) * n]
                    .iter()
                    .chain(&self.s[i * n..(i + 1) * n])
                    .copied()
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        let to_i = |rows: Vec<Vec<u64>>| {
            rows.into_iter()
                .map(|r| r.into_iter().map(|v| v as i64).collect())
                .collect()
        };
        serde_json::to_string(&ModuleFile {
            modulus: self.modulus.get(),
            t: to_i(self.t_table()),
            s: to_i(self.s_table()),
            variant: self.variant,
        })
        .expect("module serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, ModuleError> {
        let f: ModuleFile =
            serde_json::from_str(text).map_err(|e| ModuleError::Format(e.to_string()))?;
        ModuleStructure::new(Modulus::new(f.modulus)?, f.t, f.s, f.variant)
    }

    /// The block form `[T|S]`: `n` lines of `2n` integers. A `|` separator
    /// between the halves is allowed.
    pub fn from_block_text(
        text: &str,
        modulus: Modulus,
        variant: Variant,
    ) -> Result<Self, ModuleError> {
        let mut rows: Vec<Vec<i64>> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split(|c: char| c.is_whitespace() || c == '|')
                .filter(|t| !t.is_empty())
                .map(|tok| {
                    tok.parse::<i64>().map_err(|_| {
                        ModuleError::Format(format!(
                            "line {}: `{tok}` is not an integer",
                            lineno + 1
                        ))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        let n = rows.len();
        if rows.iter().any(|r| r.len() != 2 * n) {
            return Err(ModuleError::Format(format!(
                "expected {n} rows of {} integers",
                2 * n
            )));
        }
        let t = rows.iter().map(|r| r[..n].to_vec()).collect();
        let s = rows.iter().map(|r| r[n..].to_vec()).collect();
        ModuleStructure::new(modulus, t, s, variant)
    }

    pub fn to_block_text(&self) -> String {
        let n = self.order;
        let mut out = String::new();
        for i in 0..n {
            let t: Vec<String> = self.t[i * n..(i + 1) * n]
                .iter()
                .map(|v| v.to_string())
                .collect();
            let s: Vec<String> = self.s[i * n..(i + 1) * n]
                .iter()
                .map(|v| v.to_string())
                .collect();
            out.push_str(&format!("{} | {}\n", t.join(" "), s.join(" ")));
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct ModuleFile {
    modulus: u64,
    t: Vec<Vec<i64>>,
    s: Vec<Vec<i64>>,
    variant: Variant,
}

/// Value lookup for relation checks. Variables are numbered `t` first:
/// `t_{x,y}` is `(x-1)·n + (y-1)` and `s_{x,y}` is `n² + (x-1)·n + (y-1)`.
#[derive(Clone, Copy)]
struct Vars {
    n: usize,
}

impl Vars {
    fn t(self, x: usize, y: usize) -> usize {
        (x - 1) * self.n + (y - 1)
    }

    fn s(self, x: usize, y: usize) -> usize {
        self.n * self.n + (x - 1) * self.n + (y - 1)
    }
}

/// The variables a relation instance reads.
fn instance_vars(kei: &FiniteKei, rel: Relation, w: &[usize]) -> Vec<usize> {
    let v = Vars { n: kei.order() };
    let op = |a, b| kei.op(a, b);
    let mut vars = match rel {
        Relation::R1a => vec![v.t(w[0], w[1]), v.t(op(w[0], w[1]), w[1])],
        Relation::R1b => vec![v.t(w[0], w[1]), v.s(op(w[0], w[1]), w[1]), v.s(w[0], w[1])],
        Relation::R2 => vec![v.t(w[0], w[0]), v.s(w[0], w[0])],
        Relation::Invertible => vec![v.t(w[0], w[1])],
        Relation::R3a | Relation::R3b | Relation::R3c => {
            let (x, y, z) = (w[0], w[1], w[2]);
            let xy = op(x, y);
            let (xz, yz) = (op(x, z), op(y, z));
            match rel {
                Relation::R3a => vec![v.t(xy, z), v.t(x, y), v.t(xz, yz), v.t(x, z)],
                Relation::R3b => vec![v.t(xy, z), v.s(x, y), v.s(xz, yz), v.t(y, z)],
                _ => vec![v.s(xy, z), v.s(xz, yz), v.s(y, z), v.t(xz, yz), v.s(x, z)],
            }
        }
    };
    vars.sort_unstable();
    vars.dedup();
    vars
}

/// Evaluates one relation instance. `val` returns the residue of a variable.
fn instance_holds(
    kei: &FiniteKei,
    m: Modulus,
    rel: Relation,
    w: &[usize],
    val: &dyn Fn(usize) -> u64,
) -> bool {
    let v = Vars { n: kei.order() };
    let mm = m.get();
    let op = |a, b| kei.op(a, b);
    let t = |a, b| val(v.t(a, b));
    let s = |a, b| val(v.s(a, b));
    match rel {
        Relation::R1a => t(w[0], w[1]) * t(op(w[0], w[1]), w[1]) % mm == 1 % mm,
        Relation::R1b => (t(w[0], w[1]) * s(op(w[0], w[1]), w[1]) + s(w[0], w[1])) % mm == 0,
        Relation::R2 => (t(w[0], w[0]) + s(w[0], w[0])) % mm == 1 % mm,
        Relation::Invertible => m.is_unit(t(w[0], w[1])),
        Relation::R3a | Relation::R3b | Relation::R3c => {
            let (x, y, z) = (w[0], w[1], w[2]);
            let xy = op(x, y);
            let (xz, yz) = (op(x, z), op(y, z));
            match rel {
                Relation::R3a => t(xy, z) * t(x, y) % mm == t(xz, yz) * t(x, z) % mm,
                Relation::R3b => t(xy, z) * s(x, y) % mm == s(xz, yz) * t(y, z) % mm,
                _ => s(xy, z) % mm == (s(xz, yz) * s(y, z) + t(xz, yz) * s(x, z)) % mm,
            }
        }
    }
}

fn witnesses(n: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|w| (1..=n).map(move |e| w.iter().copied().chain([e]).collect::<Vec<_>>()))
            .collect();
    }
    out
}

fn instances(kei: &FiniteKei, variant: Variant) -> Vec<(Relation, Vec<usize>)> {
    Relation::families(variant)
        .iter()
        .flat_map(|&rel| {
            witnesses(kei.order(), rel.arity())
                .into_iter()
                .map(move |w| (rel, w))
        })
        .collect()
}

/// Every failed relation instance of `module` over `kei`, checked
/// exhaustively according to the module's variant.
pub fn verify_module(
    kei: &FiniteKei,
    module: &ModuleStructure,
) -> Result<Vec<RelationViolation>, ModuleError> {
    if kei.order() != module.order {
        return Err(ModuleError::OrderMismatch {
            module: module.order,
            kei: kei.order(),
        });
    }
    let n2 = module.order * module.order;
    let val = |var: usize| {
        if var < n2 {
            module.t[var]
        } else {
            module.s[var - n2]
        }
    };
    Ok(instances(kei, module.variant)
        .into_iter()
        .filter(|(rel, w)| !instance_holds(kei, module.modulus, *rel, w, &val))
        .map(|(relation, witness)| RelationViolation { relation, witness })
        .collect())
}

/// Upper bound on `order · modulus` for [`enumerate_module_structures`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimit(pub u64);

impl Default for SearchLimit {
    fn default() -> Self {
        // order 4 with modulus 11
        SearchLimit(44)
    }
}

struct Csp<'a> {
    kei: &'a FiniteKei,
    m: Modulus,
    domains: Vec<Vec<u64>>,
    insts: Vec<(Relation, Vec<usize>, Vec<usize>)>,
    watch: Vec<Vec<usize>>,
    values: Vec<Option<u64>>,
    trail: Vec<usize>,
    found: Vec<Vec<u64>>,
}

impl Csp<'_> {
    fn holds(&self, idx: usize, extra: Option<(usize, u64)>) -> bool {
        let (rel, w, _) = &self.insts[idx];
        let val = |var: usize| match extra {
            Some((v, x)) if v == var => x,
            _ => self.values[var].expect("instance variables are assigned"),
        };
        instance_holds(self.kei, self.m, *rel, w, &val)
    }

    /// Assigns and propagates: an instance with a single open variable
    /// narrows that variable to the values that satisfy it, and forces it
    /// when only one remains.
    fn assign(&mut self, var: usize, value: u64) -> bool {
        let mut queue = vec![(var, value)];
        while let Some((var, value)) = queue.pop() {
            match self.values[var] {
                Some(v) if v == value => continue,
                Some(_) => return false,
                None => {
                    self.values[var] = Some(value);
                    self.trail.push(var);
                }
            }
            for k in 0..self.watch[var].len() {
                let idx = self.watch[var][k];
                let open: Vec<usize> = self.insts[idx]
                    .2
                    .iter()
                    .copied()
                    .filter(|&v| self.values[v].is_none())
                    .collect();
                match open.as_slice() {
                    [] => {
                        if !self.holds(idx, None) {
                            return false;
                        }
                    }
                    [single] => {
                        let single = *single;
                        let mut ok = self.domains[single]
                            .iter()
                            .copied()
                            .filter(|&x| self.holds(idx, Some((single, x))));
                        match (ok.next(), ok.next()) {
                            (None, _) => return false,
                            (Some(x), None) => queue.push((single, x)),
                            _ => {}
                        }
                    }
                    _ => {}
                }
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().unwrap();
            self.values[v] = None;
        }
    }

    fn search(&mut self, var: usize) {
        if var == self.values.len() {
            self.found
                .push(self.values.iter().map(|v| v.unwrap()).collect());
            return;
        }
        if self.values[var].is_some() {
            return self.search(var + 1);
        }
        for k in 0..self.domains[var].len() {
            let x = self.domains[var][k];
            let mark = self.trail.len();
            if self.assign(var, x) {
                self.search(var + 1);
            }
            self.undo(mark);
        }
    }
}

/// All module structures of the given variant on `Z_m`, sorted
/// lexicographically by [`ModuleStructure::block_key`].
///
/// `t` entries range over the units of `Z_m` only; the kei relations force
/// this and the quandle variant demands it.
pub fn enumerate_module_structures(
    kei: &FiniteKei,
    m: Modulus,
    variant: Variant,
    limit: SearchLimit,
) -> Result<Vec<ModuleStructure>, ModuleError> {
    let n = kei.order();
    if (n as u64).saturating_mul(m.get()) > limit.0 {
        return Err(ModuleError::LimitExceeded {
            order: n,
            modulus: m.get(),
            limit: limit.0,
        });
    }
    let n2 = n * n;
    let units = m.units();
    let all: Vec<u64> = (0..m.get()).collect();
    let domains: Vec<Vec<u64>> = (0..2 * n2)
        .map(|v| if v < n2 { units.clone() } else { all.clone() })
        .collect();

    let insts: Vec<(Relation, Vec<usize>, Vec<usize>)> = instances(kei, variant)
        .into_iter()
        .filter(|(rel, _)| *rel != Relation::Invertible)
        .map(|(rel, w)| {
            let vars = instance_vars(kei, rel, &w);
            (rel, w, vars)
        })
        .collect();
    let mut watch = vec![Vec::new(); 2 * n2];
    for (idx, (_, _, vars)) in insts.iter().enumerate() {
        for &v in vars {
            watch[v].push(idx);
        }
    }

    let mut csp = Csp {
        kei,
        m,
        domains,
        insts,
        watch,
        values: vec![None; 2 * n2],
        trail: Vec::new(),
        found: Vec::new(),
    };
    csp.search(0);

    let mut out: Vec<ModuleStructure> = csp
        .found
        .into_iter()
        .map(|vals| ModuleStructure {
            order: n,
            modulus: m,
            t: vals[..n2].to_vec(),
            s: vals[n2..].to_vec(),
            variant,
        })
        .collect();
    out.sort_by_key(|s| s.block_key());
    Ok(out)
}
