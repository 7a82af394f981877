//! Oriented link diagrams reduced to the data kei labelings care about.
//!
//! A [`LinkDiagram`] keeps only classical crossings. Each crossing records its
//! sign and three arcs: the incoming under-arc, the over-arc and the outgoing
//! under-arc. Arcs are the maximal strands between under-passes, so virtual
//! crossings and the order of over-passes along an arc never show up here.

mod braid;
mod pd;
mod table;

use std::fmt;

use thiserror::Error;

pub use braid::{parse_braid, parse_braid_spec, BraidGenerator};
pub use pd::parse_pd;
pub use table::{load_knot_table, KnotRecord};

/// 1-based arc index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArcId(usize);

impl ArcId {
    pub fn new(id: usize) -> Self {
        assert!(id >= 1, "arc ids start at 1");
        ArcId(id)
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// Zero-based position, for indexing arc-sized vectors.
    pub fn index(self) -> usize {
        self.0 - 1
    }
}

impl fmt::Display for ArcId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn flipped(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub sign: Sign,
    pub under_in: ArcId,
    pub over: ArcId,
    pub under_out: ArcId,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("edge {edge} is used {count} time(s); every edge must appear exactly twice")]
    EdgeCount { edge: i64, count: usize },
    #[error("edge labels must be positive, found {0}")]
    BadEdge(i64),
    #[error("inconsistent strand orientation at edge {0}")]
    Orientation(i64),
    #[error("cannot orient the over-strand of crossing {crossing}: edges {b} and {d} are not consecutive")]
    OverStrand { crossing: usize, b: i64, d: i64 },
    #[error("braid generator {token} is out of range for {strands} strand(s)")]
    GeneratorRange { token: String, strands: usize },
    #[error("a braid needs at least one strand")]
    NoStrands,
    #[error("malformed braid: {0}")]
    Braid(String),
    #[error("invalid diagram: {0}")]
    Invalid(String),
    #[error("component {0} has no crossings and cannot be written as a PD code")]
    Crossingless(usize),
    #[error("component {0} passes over a single crossing and has no PD form")]
    SingleOverpass(usize),
    #[error("malformed knot table: {0}")]
    Table(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinkDiagram {
    arc_count: usize,
    crossings: Vec<Crossing>,
    // arc index -> component index (0-based)
    arc_component: Vec<usize>,
    component_count: usize,
}

impl LinkDiagram {
    /// Builds a diagram after checking the arc bookkeeping: every arc is the
    /// incoming under-arc of at most one crossing and the outgoing under-arc
    /// of at most one, each under-strand chain closes up inside a single
    /// component, and a component without under-passes consists of one arc.
    pub fn new(
        arc_count: usize,
        crossings: Vec<Crossing>,
        arc_component: Vec<usize>,
    ) -> Result<Self, DiagramError> {
        let invalid = |m: String| Err(DiagramError::Invalid(m));
        if arc_component.len() != arc_count {
            return invalid(format!(
                "{} component entries for {arc_count} arcs",
                arc_component.len()
            ));
        }
        let component_count = arc_component.iter().max().map_or(0, |&c| c + 1);
        let mut seen_component = vec![false; component_count];
        for &c in &arc_component {
            seen_component[c] = true;
        }
        if let Some(c) = seen_component.iter().position(|&s| !s) {
            return invalid(format!("component {c} has no arcs"));
        }

        let mut ends_at = vec![None; arc_count];
        let mut starts_at = vec![None; arc_count];
        for (i, x) in crossings.iter().enumerate() {
            for a in [x.under_in, x.over, x.under_out] {
                if a.get() > arc_count {
                    return invalid(format!(
                        "crossing {} references arc {a} of {arc_count}",
                        i + 1
                    ));
                }
            }
            if ends_at[x.under_in.index()].replace(i).is_some() {
                return invalid(format!("arc {} ends at two crossings", x.under_in));
            }
            if starts_at[x.under_out.index()].replace(i).is_some() {
                return invalid(format!("arc {} starts at two crossings", x.under_out));
            }
            if arc_component[x.under_in.index()] != arc_component[x.under_out.index()] {
                return invalid(format!("crossing {} joins two components under", i + 1));
            }
        }
        for a in 0..arc_count {
            if ends_at[a].is_some() != starts_at[a].is_some() {
                return invalid(format!("arc {} is open at one end", a + 1));
            }
        }
        for c in 0..component_count {
            let arcs: Vec<usize> = (0..arc_count).filter(|&a| arc_component[a] == c).collect();
            let terminal = arcs.iter().filter(|&&a| ends_at[a].is_none()).count();
            if terminal > 0 && arcs.len() != 1 {
                return invalid(format!(
                    "component {c} has no under-passes but {} arcs",
                    arcs.len()
                ));
            }
        }
        Ok(LinkDiagram {
            arc_count,
            crossings,
            arc_component,
            component_count,
        })
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn component_count(&self) -> usize {
        self.component_count
    }

    pub fn component_of(&self, arc: ArcId) -> usize {
        self.arc_component[arc.index()]
    }

    pub fn arcs(&self) -> impl Iterator<Item = ArcId> {
        (1..=self.arc_count).map(ArcId)
    }

    /// The same diagram with every strand direction reversed. Under-in and
    /// under-out swap at each crossing; signs are unchanged because both
    /// strands of a crossing flip together.
    pub fn reverse_orientation(&self) -> LinkDiagram {
        let crossings = self
            .crossings
            .iter()
            .map(|x| Crossing {
                sign: x.sign,
                under_in: x.under_out,
                over: x.over,
                under_out: x.under_in,
            })
            .collect();
        LinkDiagram {
            crossings,
            ..self.clone()
        }
    }

    /// Writes the diagram as a PD code.
    ///
    /// Over-passes along an arc are laid out in crossing order, so the code
    /// is planar only when that order happens to be realizable. Parsing the
    /// output gives back this diagram with the same arc and crossing order.
    pub fn to_pd(&self) -> Result<String, DiagramError> {
        if self.crossings.is_empty() {
            if self.component_count == 1 {
                return Ok("PD[]".to_string());
            }
            return Err(DiagramError::Crossingless(0));
        }
        // Per crossing: [under_in, over_in, under_out, over_out] edge labels.
        let mut edges = vec![[0i64; 4]; self.crossings.len()];
        let mut next_edge = 1i64;
        let mut visited = vec![false; self.arc_count];
        let ends_at: Vec<Option<usize>> = (0..self.arc_count)
            .map(|a| self.crossings.iter().position(|x| x.under_in.index() == a))
            .collect();

        for start in 0..self.arc_count {
            if visited[start] {
                continue;
            }
            // Walk the component from `start`, listing events in order.
            let mut events: Vec<(usize, bool)> = Vec::new(); // (crossing, is_under)
            let mut arc = start;
            loop {
                visited[arc] = true;
                for (i, x) in self.crossings.iter().enumerate() {
                    if x.over.index() == arc {
                        events.push((i, false));
                    }
                }
                match ends_at[arc] {
                    Some(i) => {
                        events.push((i, true));
                        arc = self.crossings[i].under_out.index();
                        if arc == start {
                            break;
                        }
                    }
                    None => break,
                }
            }
            if events.is_empty() {
                return Err(DiagramError::Crossingless(self.arc_component[start]));
            }
            // One edge would sit at both over positions and lose the sign.
            if events.len() == 1 && !events[0].1 {
                return Err(DiagramError::SingleOverpass(self.arc_component[start]));
            }
            // Edge j enters event j and leaves event j-1 (cyclically).
            let first = next_edge;
            let n = events.len() as i64;
            for (j, &(i, under)) in events.iter().enumerate() {
                let incoming = first + j as i64;
                let outgoing = first + (j as i64 + 1) % n;
                if under {
                    edges[i][0] = incoming;
                    edges[i][2] = outgoing;
                } else {
                    edges[i][1] = incoming;
                    edges[i][3] = outgoing;
                }
            }
            next_edge += n;
        }

        let items: Vec<String> = self
            .crossings
            .iter()
            .zip(&edges)
            .map(|(x, &[a, over_in, c, over_out])| {
                // Positive: over runs from position d to position b.
                let (b, d) = match x.sign {
                    Sign::Positive => (over_out, over_in),
                    Sign::Negative => (over_in, over_out),
                };
                format!("X[{a},{b},{c},{d}]")
            })
            .collect();
        Ok(format!("PD[{}]", items.join(",")))
    }
}

/// Builds a diagram from raw strand classes, numbering arcs in traversal
/// order. Components are ordered by their smallest class key, and each is
/// walked along its orientation starting from the class with that key.
/// Crossings are `(sign, under_in, over, under_out)` over class indices.
pub(crate) fn assemble(
    keys: &[u64],
    class_component: &[usize],
    raw: &[(Sign, usize, usize, usize)],
) -> Result<LinkDiagram, DiagramError> {
    let classes = keys.len();
    let mut next_of = vec![None; classes];
    for &(_, u_in, _, u_out) in raw {
        if next_of[u_in].replace(u_out).is_some() {
            return Err(DiagramError::Invalid(format!(
                "strand class {u_in} ends twice"
            )));
        }
    }
    let mut comps: Vec<usize> = class_component.to_vec();
    comps.sort_unstable();
    comps.dedup();
    let comp_key = |c: usize| {
        (0..classes)
            .filter(|&k| class_component[k] == c)
            .map(|k| keys[k])
            .min()
            .unwrap()
    };
    comps.sort_by_key(|&c| comp_key(c));

    let mut new_id = vec![usize::MAX; classes];
    let mut arc_component = Vec::with_capacity(classes);
    for (ci, &c) in comps.iter().enumerate() {
        let start = (0..classes)
            .filter(|&k| class_component[k] == c)
            .min_by_key(|&k| keys[k])
            .unwrap();
        let mut k = start;
        loop {
            if new_id[k] != usize::MAX {
                return Err(DiagramError::Invalid(
                    "under-strands do not close up".into(),
                ));
            }
            new_id[k] = arc_component.len();
            arc_component.push(ci);
            match next_of[k] {
                Some(n) if n != start => k = n,
                _ => break,
            }
        }
    }
    if new_id.contains(&usize::MAX) {
        return Err(DiagramError::Invalid(
            "strand classes outside every component walk".into(),
        ));
    }
    let crossings = raw
        .iter()
        .map(|&(sign, i, o, u)| Crossing {
            sign,
            under_in: ArcId(new_id[i] + 1),
            over: ArcId(new_id[o] + 1),
            under_out: ArcId(new_id[u] + 1),
        })
        .collect();
    LinkDiagram::new(classes, crossings, arc_component)
}
