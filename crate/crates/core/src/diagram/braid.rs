//! Closures of classical and virtual braids.
//!
//! Strands run top to bottom. `σ_i` crosses the strands in positions `i` and
//! `i + 1` with the right-hand strand passing over, which is a positive
//! crossing; `σ_i⁻¹` puts the left-hand strand over. A virtual generator `v_i`
//! swaps the two positions without any classical crossing.

use super::{assemble, DiagramError, LinkDiagram, Sign};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BraidGenerator {
    Classical { index: usize, inverse: bool },
    Virtual { index: usize },
}

impl BraidGenerator {
    pub fn index(self) -> usize {
        match self {
            BraidGenerator::Classical { index, .. } | BraidGenerator::Virtual { index } => index,
        }
    }

    pub fn token(self) -> String {
        match self {
            BraidGenerator::Classical {
                index,
                inverse: false,
            } => index.to_string(),
            BraidGenerator::Classical {
                index,
                inverse: true,
            } => format!("-{index}"),
            BraidGenerator::Virtual { index } => format!("v{index}"),
        }
    }
}

/// Parses the `"<strands>:<g1>,<g2>,..."` form, e.g. `"3:1,-2,v1"`.
pub fn parse_braid_spec(spec: &str) -> Result<(usize, Vec<BraidGenerator>), DiagramError> {
    let (strands, word) = spec
        .split_once(':')
        .ok_or_else(|| DiagramError::Braid(format!("`{spec}` has no `<strands>:` prefix")))?;
    let strands: usize = strands
        .trim()
        .parse()
        .map_err(|_| DiagramError::Braid(format!("bad strand count `{}`", strands.trim())))?;
    let mut gens = Vec::new();
    for tok in word.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let bad = || DiagramError::Braid(format!("bad generator `{tok}`"));
        let g = if let Some(rest) = tok.strip_prefix('v') {
            BraidGenerator::Virtual {
                index: rest.parse().map_err(|_| bad())?,
            }
        } else if let Some(rest) = tok.strip_prefix('-') {
            BraidGenerator::Classical {
                index: rest.parse().map_err(|_| bad())?,
                inverse: true,
            }
        } else {
            BraidGenerator::Classical {
                index: tok.parse().map_err(|_| bad())?,
                inverse: false,
            }
        };
        gens.push(g);
    }
    Ok((strands, gens))
}

/// The closure of a braid on `strands` strands.
pub fn parse_braid(strands: usize, word: &[BraidGenerator]) -> Result<LinkDiagram, DiagramError> {
    if strands == 0 {
        return Err(DiagramError::NoStrands);
    }
    for g in word {
        if g.index() == 0 || g.index() >= strands {
            return Err(DiagramError::GeneratorRange {
                token: g.token(),
                strands,
            });
        }
    }

    // Segment ids in creation order; the first `strands` are the tops.
    let mut parent: Vec<usize> = (0..strands).collect();
    let mut segment_origin: Vec<usize> = (0..strands).collect();
    let mut current: Vec<usize> = (0..strands).collect();
    let mut origin: Vec<usize> = (0..strands).collect();
    let mut raw: Vec<(Sign, usize, usize, usize)> = Vec::new();

    for &g in word {
        let i = g.index() - 1;
        match g {
            BraidGenerator::Virtual { .. } => {}
            BraidGenerator::Classical { inverse, .. } => {
                let fresh = parent.len();
                if !inverse {
                    // right strand over; left strand is cut
                    parent.push(fresh);
                    segment_origin.push(origin[i]);
                    raw.push((Sign::Positive, current[i], current[i + 1], fresh));
                    current[i] = fresh;
                } else {
                    parent.push(fresh);
                    segment_origin.push(origin[i + 1]);
                    raw.push((Sign::Negative, current[i + 1], current[i], fresh));
                    current[i + 1] = fresh;
                }
            }
        }
        current.swap(i, i + 1);
        origin.swap(i, i + 1);
    }

    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }

    // Close up: bottom position q feeds top position q.
    let mut cycle_parent: Vec<usize> = (0..strands).collect();
    for q in 0..strands {
        let (a, b) = (find(&mut parent, current[q]), find(&mut parent, q));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
        let (c, d) = (
            find(&mut cycle_parent, origin[q]),
            find(&mut cycle_parent, q),
        );
        if c != d {
            cycle_parent[c.max(d)] = c.min(d);
        }
    }

    let mut class_of = vec![usize::MAX; parent.len()];
    let mut keys = Vec::new();
    let mut class_component = Vec::new();
    for s in 0..parent.len() {
        let root = find(&mut parent, s);
        if class_of[root] == usize::MAX {
            class_of[root] = keys.len();
            keys.push(root as u64);
            class_component.push(find(&mut cycle_parent, segment_origin[root]));
        }
        class_of[s] = class_of[root];
    }
    let raw: Vec<_> = raw
        .into_iter()
        .map(|(s, a, b, c)| (s, class_of[a], class_of[b], class_of[c]))
        .collect();
    assemble(&keys, &class_component, &raw)
}
