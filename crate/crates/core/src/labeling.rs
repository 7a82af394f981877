//! Kei labelings of link diagrams and the integral counting invariant.

use crate::diagram::{ArcId, Crossing, LinkDiagram, Sign};
use crate::kei::FiniteKei;

/// An assignment of kei elements (1-based) to arcs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KeiLabeling {
    labels: Vec<usize>,
}

impl KeiLabeling {
    /// Wraps raw labels without checking them against any diagram.
    pub fn new(labels: Vec<usize>) -> Self {
        KeiLabeling { labels }
    }

    pub fn constant(arcs: usize, element: usize) -> Self {
        KeiLabeling {
            labels: vec![element; arcs],
        }
    }

    pub fn label(&self, arc: ArcId) -> usize {
        self.labels[arc.index()]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn is_constant(&self) -> bool {
        self.labels.windows(2).all(|w| w[0] == w[1])
    }

    /// Whether this labeling satisfies every crossing relation of `diagram`.
    pub fn is_valid(&self, diagram: &LinkDiagram, kei: &FiniteKei) -> bool {
        self.labels.len() == diagram.arc_count()
            && self.labels.iter().all(|&v| v >= 1 && v <= kei.order())
            && diagram.crossings().iter().all(|x| {
                crossing_holds(
                    kei,
                    x,
                    self.label(x.under_in),
                    self.label(x.over),
                    self.label(x.under_out),
                )
            })
    }
}

fn crossing_holds(
    kei: &FiniteKei,
    x: &Crossing,
    under_in: usize,
    over: usize,
    under_out: usize,
) -> bool {
    match x.sign {
        Sign::Positive => kei.op(under_in, over) == under_out,
        Sign::Negative => kei.op(under_out, over) == under_in,
    }
}

struct Search<'a> {
    diagram: &'a LinkDiagram,
    kei: &'a FiniteKei,
    labels: Vec<Option<usize>>,
    trail: Vec<usize>,
    // crossings touching each arc
    touching: Vec<Vec<usize>>,
    out: Vec<KeiLabeling>,
}

impl Search<'_> {
    fn assign(&mut self, arc: usize, v: usize) -> bool {
        let mut queue = vec![(arc, v)];
        while let Some((a, v)) = queue.pop() {
            match self.labels[a] {
                Some(w) if w == v => continue,
                Some(_) => return false,
                None => {
                    self.labels[a] = Some(v);
                    self.trail.push(a);
                }
            }
            for &ci in &self.touching[a] {
                let x = self.diagram.crossings()[ci];
                let (i, o, u) = (x.under_in.index(), x.over.index(), x.under_out.index());
                match (self.labels[i], self.labels[o], self.labels[u]) {
                    (Some(li), Some(lo), Some(lu)) => {
                        if !crossing_holds(self.kei, &x, li, lo, lu) {
                            return false;
                        }
                    }
                    // Under-arcs are determined by the other two labels.
                    (Some(li), Some(lo), None) => {
                        let lu = match x.sign {
                            Sign::Positive => self.kei.op(li, lo),
                            Sign::Negative => self.inverse_op(li, lo),
                        };
                        queue.push((u, lu));
                    }
                    (None, Some(lo), Some(lu)) => {
                        let li = match x.sign {
                            Sign::Positive => self.inverse_op(lu, lo),
                            Sign::Negative => self.kei.op(lu, lo),
                        };
                        queue.push((i, li));
                    }
                    _ => {}
                }
            }
        }
        true
    }

    // z with z ▷ y = x; for a kei this is x ▷ y
    fn inverse_op(&self, x: usize, y: usize) -> usize {
        self.kei.op(x, y)
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let a = self.trail.pop().unwrap();
            self.labels[a] = None;
        }
    }

    fn run(&mut self, arc: usize) {
        if arc == self.labels.len() {
            let labels = self.labels.iter().map(|l| l.unwrap()).collect();
            self.out.push(KeiLabeling { labels });
            return;
        }
        if self.labels[arc].is_some() {
            self.run(arc + 1);
            return;
        }
        for v in 1..=self.kei.order() {
            let mark = self.trail.len();
            if self.assign(arc, v) {
                self.run(arc + 1);
            }
            self.undo(mark);
        }
    }
}

/// All labelings of `diagram` by `kei`, in lexicographic order of the label
/// vector (arc 1 first).
pub fn enumerate_labelings(diagram: &LinkDiagram, kei: &FiniteKei) -> Vec<KeiLabeling> {
    let mut touching = vec![Vec::new(); diagram.arc_count()];
    for (ci, x) in diagram.crossings().iter().enumerate() {
        for a in [x.under_in, x.over, x.under_out] {
            if !touching[a.index()].contains(&ci) {
                touching[a.index()].push(ci);
            }
        }
    }
    let mut search = Search {
        diagram,
        kei,
        labels: vec![None; diagram.arc_count()],
        trail: Vec::new(),
        touching,
        out: Vec::new(),
    };
    search.run(0);
    search.out
}

/// `|Hom(FK(L), X)|`, the number of kei labelings.
pub fn counting_invariant(diagram: &LinkDiagram, kei: &FiniteKei) -> usize {
    enumerate_labelings(diagram, kei).len()
}
