//! PD-code ingestion.
//!
//! `X[a,b,c,d]` lists the four edges at a crossing counterclockwise, starting
//! from the incoming under-edge `a`; the under-strand runs `a → c`. The
//! over-strand direction is recovered by following edges through the code,
//! and by edge-number succession where nothing else fixes it. A crossing is
//! positive when the over-strand runs from `d` to `b`.

use std::collections::HashMap;

use super::{assemble, DiagramError, LinkDiagram, Sign};

const POS_A: usize = 0;
const POS_B: usize = 1;
const POS_C: usize = 2;
const POS_D: usize = 3;

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while let Some(ch) = self.text[self.pos..].chars().next() {
            if !ch.is_whitespace() {
                break;
            }
            self.pos += ch.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, ch: char) -> bool {
        if self.peek() == Some(ch) {
            self.pos += ch.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, ch: char) -> Result<(), DiagramError> {
        if self.eat(ch) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{ch}`")))
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<i64, DiagramError> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let len = rest
            .char_indices()
            .take_while(|&(i, c)| c.is_ascii_digit() || (i == 0 && c == '-'))
            .count();
        let tok = &rest[..len];
        let v = tok
            .parse::<i64>()
            .map_err(|_| self.error("expected an edge number".into()))?;
        self.pos += len;
        Ok(v)
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn error(&self, msg: String) -> DiagramError {
        DiagramError::Syntax { pos: self.pos, msg }
    }
}

fn parse_crossing(cur: &mut Cursor<'_>, open: char, close: char) -> Result<[i64; 4], DiagramError> {
    if !cur.eat('X') {
        return Err(cur.error("expected `X`".into()));
    }
    cur.expect(open)?;
    let mut out = [0i64; 4];
    for (k, slot) in out.iter_mut().enumerate() {
        if k > 0 {
            cur.expect(',')?;
        }
        *slot = cur.integer()?;
    }
    cur.expect(close)?;
    Ok(out)
}

/// Parses the crossing list of `PD[X[..], ...]` or `X(..);X(..);...`.
pub(crate) fn parse_crossing_list(text: &str) -> Result<Vec<[i64; 4]>, DiagramError> {
    let mut cur = Cursor { text, pos: 0 };
    let mut out = Vec::new();
    if cur.eat_str("PD") {
        cur.expect('[')?;
        if !cur.eat(']') {
            loop {
                out.push(parse_crossing(&mut cur, '[', ']')?);
                if cur.eat(']') {
                    break;
                }
                cur.expect(',')?;
            }
        }
    } else {
        if cur.at_end() {
            return Err(cur.error("empty PD code".into()));
        }
        loop {
            out.push(parse_crossing(&mut cur, '(', ')')?);
            if !cur.eat(';') || cur.at_end() {
                break;
            }
        }
    }
    if !cur.at_end() {
        return Err(cur.error("trailing input".into()));
    }
    Ok(out)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum End {
    // the strand enters the crossing along this edge
    Head,
    // the strand leaves the crossing along this edge
    Tail,
}

impl End {
    fn opposite(self) -> End {
        match self {
            End::Head => End::Tail,
            End::Tail => End::Head,
        }
    }
}

/// Parses a PD code into a [`LinkDiagram`].
///
/// Edges separated only by over-passes are merged into one arc. `PD[]` is
/// the crossingless unknot.
pub fn parse_pd(text: &str) -> Result<LinkDiagram, DiagramError> {
    let xs = parse_crossing_list(text)?;
    if xs.is_empty() {
        return LinkDiagram::new(1, Vec::new(), vec![0]);
    }

    // Edge labels -> dense indices, sorted by label.
    let mut labels: Vec<i64> = xs.iter().flatten().copied().collect();
    if let Some(&bad) = labels.iter().find(|&&e| e < 1) {
        return Err(DiagramError::BadEdge(bad));
    }
    labels.sort_unstable();
    labels.dedup();
    let index: HashMap<i64, usize> = labels.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut occurrences: Vec<Vec<(usize, usize)>> = vec![Vec::new(); labels.len()];
    for (i, x) in xs.iter().enumerate() {
        for (p, e) in x.iter().enumerate() {
            occurrences[index[e]].push((i, p));
        }
    }
    for (k, occ) in occurrences.iter().enumerate() {
        if occ.len() != 2 {
            return Err(DiagramError::EdgeCount {
                edge: labels[k],
                count: occ.len(),
            });
        }
    }

    // Components as unions of consecutive edges at each crossing.
    let mut comp_uf = UnionFind::new(labels.len());
    for x in &xs {
        comp_uf.union(index[&x[POS_A]], index[&x[POS_C]]);
        comp_uf.union(index[&x[POS_B]], index[&x[POS_D]]);
    }

    let ends = orient(&xs, &index, &labels, &occurrences, &mut comp_uf)?;

    // Arcs: edges joined through over-passes.
    let mut arc_uf = UnionFind::new(labels.len());
    for x in &xs {
        arc_uf.union(index[&x[POS_B]], index[&x[POS_D]]);
    }
    let mut class_of = vec![usize::MAX; labels.len()];
    let mut keys = Vec::new();
    let mut class_component = Vec::new();
    for e in 0..labels.len() {
        let root = arc_uf.find(e);
        if class_of[root] == usize::MAX {
            class_of[root] = keys.len();
            keys.push(labels[root] as u64);
            class_component.push(comp_uf.find(root));
        }
        class_of[e] = class_of[root];
    }
    let class = |e: i64| class_of[index[&e]];

    let raw: Vec<(Sign, usize, usize, usize)> = xs
        .iter()
        .zip(&ends)
        .map(|(x, end)| {
            let sign = if end[POS_D] == End::Head {
                Sign::Positive
            } else {
                Sign::Negative
            };
            (sign, class(x[POS_A]), class(x[POS_B]), class(x[POS_C]))
        })
        .collect();
    assemble(&keys, &class_component, &raw)
}

/// Decides, for every edge occurrence, whether the strand enters or leaves
/// the crossing there.
fn orient(
    xs: &[[i64; 4]],
    index: &HashMap<i64, usize>,
    labels: &[i64],
    occurrences: &[Vec<(usize, usize)>],
    comp_uf: &mut UnionFind,
) -> Result<Vec<[End; 4]>, DiagramError> {
    let mut ends: Vec<[Option<End>; 4]> = vec![[None; 4]; xs.len()];
    let mut queue: Vec<(usize, usize, End)> = Vec::new();
    for i in 0..xs.len() {
        queue.push((i, POS_A, End::Head));
        queue.push((i, POS_C, End::Tail));
    }

    let mut next_unresolved = 0;
    loop {
        while let Some((i, p, end)) = queue.pop() {
            match ends[i][p] {
                Some(prev) if prev == end => continue,
                Some(_) => return Err(DiagramError::Orientation(xs[i][p])),
                None => ends[i][p] = Some(end),
            }
            // The edge's other occurrence is its other end.
            let e = index[&xs[i][p]];
            for &(j, q) in &occurrences[e] {
                if (j, q) != (i, p) {
                    queue.push((j, q, end.opposite()));
                }
            }
            if p == POS_B || p == POS_D {
                let other = if p == POS_B { POS_D } else { POS_B };
                queue.push((i, other, end.opposite()));
            }
        }

        // Over-strands nothing reached: fall back on edge succession.
        while next_unresolved < xs.len() && ends[next_unresolved][POS_B].is_some() {
            next_unresolved += 1;
        }
        if next_unresolved == xs.len() {
            break;
        }
        let i = next_unresolved;
        let (b, d) = (xs[i][POS_B], xs[i][POS_D]);
        let succ = |e: i64, uf: &mut UnionFind| {
            let root = uf.find(index[&e]);
            let members: Vec<i64> = labels
                .iter()
                .copied()
                .filter(|&l| uf.find(index[&l]) == root)
                .collect();
            members
                .iter()
                .copied()
                .find(|&l| l > e)
                .unwrap_or(members[0])
        };
        let (d_to_b, b_to_d) = (succ(d, comp_uf) == b, succ(b, comp_uf) == d);
        // A two-edge cycle reads both ways; enter along the smaller label.
        if d_to_b && (!b_to_d || d < b) {
            queue.push((i, POS_D, End::Head));
        } else if b_to_d {
            queue.push((i, POS_B, End::Head));
        } else {
            return Err(DiagramError::OverStrand {
                crossing: i + 1,
                b,
                d,
            });
        }
    }

    Ok(ends
        .into_iter()
        .map(|row| row.map(|e| e.expect("every occurrence is oriented")))
        .collect())
}
