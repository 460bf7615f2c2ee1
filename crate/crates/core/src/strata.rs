//! Component-indexing data, the neighborhood predicate of the moduli
//! topology, and the standard strata with their boundary moves.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use thiserror::Error;

use crate::contraction::{collapse_forest, shrink_forest, Collapse};
use crate::graph::{for_each_isomorphism, Edge, Graph, MarkId, VertexId};
use crate::metric::{MetricError, MetricMarkedGraph};
use crate::scalar::{twice, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrataError {
    #[error("epsilon outside the admissible range (0, r/2)")]
    EpsilonOutOfRange,
    #[error("slot {0} refers to a vertex or edge missing from the graph")]
    BadSlot(usize),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// The data indexing the connected component of the moduli space: one
/// (genus, mark set) pair per connected component of the graph, as a
/// multiset.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ComponentData(Vec<(usize, BTreeSet<MarkId>)>);

impl ComponentData {
    pub fn pairs(&self) -> &[(usize, BTreeSet<MarkId>)] {
        &self.0
    }
}

/// Genus and incident marks of every connected component.
pub fn component_data<S: Scalar>(g: &MetricMarkedGraph<S>) -> ComponentData {
    let graph = g.graph();
    let blocks = graph.components();
    let comp = graph.component_index();
    let mut marks_per: Vec<BTreeSet<MarkId>> = vec![BTreeSet::new(); blocks.len()];
    for (i, m) in g.marks().iter().enumerate() {
        let host = match m {
            crate::metric::DeltaPoint::AtVertex(v) => *v,
            crate::metric::DeltaPoint::Interior { dart, .. } => graph.src(*dart),
        };
        marks_per[comp[&host]].insert(i as MarkId + 1);
    }
    let mut pairs: Vec<(usize, BTreeSet<MarkId>)> = blocks
        .iter()
        .enumerate()
        .map(|(i, block)| {
            let vset: BTreeSet<VertexId> = block.iter().copied().collect();
            let edges_inside = graph
                .edges()
                .into_iter()
                .filter(|&e| vset.contains(&graph.endpoints(e).0))
                .count();
            let genus = edges_inside + 1 - block.len();
            (genus, marks_per[i].clone())
        })
        .collect();
    pairs.sort();
    ComponentData(pairs)
}

/// Does `h` lie in the epsilon-neighborhood of `g`?
///
/// True when the short edges of `h` form a forest and, after shrinking
/// them, some isomorphism onto `g` matches every length within epsilon
/// and displaces every mark by less than epsilon. Epsilon must lie in
/// the admissible range `(0, r(g)/2)`.
pub fn in_neighborhood<S: Scalar>(
    h: &MetricMarkedGraph<S>,
    g: &MetricMarkedGraph<S>,
    eps: &S,
) -> Result<bool, StrataError> {
    // With fewer than two special points every positive radius is
    // admissible; the upper bound r/2 only exists to keep distinct
    // special points apart.
    let r = match g.r_of() {
        Ok(r) => Some(r),
        Err(MetricError::TooFewSpecialPoints) => None,
        Err(e) => return Err(e.into()),
    };
    if !eps.is_positive() || r.is_some_and(|r| twice(eps) >= r) {
        return Err(StrataError::EpsilonOutOfRange);
    }
    let short: BTreeSet<Edge> = h
        .lengths()
        .iter()
        .filter(|(_, l)| **l < *eps)
        .map(|(e, _)| *e)
        .collect();
    let Ok(shrunk) = shrink_forest(h, &short) else {
        return Ok(false);
    };
    if g.n_marks() != shrunk.n_marks() {
        return Ok(false);
    }

    let edge_ok = |e: Edge, f: Edge| {
        let diff = g.length(e).clone() - shrunk.length(f).clone();
        diff.abs() < *eps
    };
    let mut found = false;
    let _ = for_each_isomorphism(g.graph(), shrunk.graph(), &edge_ok, &mut |iso| {
        let marks_ok = (1..=g.n_marks() as MarkId).all(|k| {
            let image = g.map_point(&shrunk, iso, g.mark(k));
            match shrunk.delta_distance(&image, shrunk.mark(k)) {
                Ok(d) => d < *eps,
                Err(_) => false,
            }
        });
        if marks_ok {
            found = true;
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok(found)
}

/// A slot of a stratum index: mark `i` is pinned to a vertex or to the
/// open interior of an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Slot {
    Vertex(VertexId),
    EdgeSlot(Edge),
}

/// A standard stratum: a graph together with one slot per mark.
/// Equality of strata is isomorphism of graphs carrying slot `k` to
/// slot `k`.
#[derive(Clone, Debug)]
pub struct StratumIndex {
    graph: Graph,
    slots: Vec<Slot>,
}

impl StratumIndex {
    pub fn new(graph: Graph, slots: Vec<Slot>) -> Result<Self, StrataError> {
        for (i, s) in slots.iter().enumerate() {
            let ok = match s {
                Slot::Vertex(v) => graph.has_vertex(*v),
                Slot::EdgeSlot(e) => {
                    graph.has_dart(e.canonical_dart())
                        && graph.edge_of(e.canonical_dart()) == *e
                }
            };
            if !ok {
                return Err(StrataError::BadSlot(i + 1));
            }
        }
        Ok(StratumIndex { graph, slots })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    /// Number of edges plus the number of edge slots.
    pub fn dimension(&self) -> usize {
        let edge_slots = self
            .slots
            .iter()
            .filter(|s| matches!(s, Slot::EdgeSlot(_)))
            .count();
        self.graph.n_edges() + edge_slots
    }

    /// Isomorphism of indices: a graph isomorphism carrying slot `k` to
    /// slot `k`.
    pub fn isomorphic(&self, other: &StratumIndex) -> bool {
        if self.slots.len() != other.slots.len() {
            return false;
        }
        let kinds_match = self.slots.iter().zip(&other.slots).all(|(a, b)| {
            matches!(
                (a, b),
                (Slot::Vertex(_), Slot::Vertex(_)) | (Slot::EdgeSlot(_), Slot::EdgeSlot(_))
            )
        });
        if !kinds_match {
            return false;
        }
        let mut found = false;
        let _ = for_each_isomorphism(&self.graph, &other.graph, &|_, _| true, &mut |iso| {
            let ok = self.slots.iter().zip(&other.slots).all(|(a, b)| match (a, b) {
                (Slot::Vertex(v), Slot::Vertex(w)) => iso.map_vertex(*v) == *w,
                (Slot::EdgeSlot(e), Slot::EdgeSlot(f)) => {
                    other.graph.edge_of(iso.map_dart(e.canonical_dart())) == *f
                }
                _ => false,
            });
            if ok {
                found = true;
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        found
    }

    /// All strata reachable by one boundary move, deduplicated up to
    /// index isomorphism:
    ///
    /// 1. replacing an edge slot by one of its endpoints;
    /// 2. shrinking a non-loop edge, sending slots on that edge or its
    ///    endpoints to the merged vertex.
    pub fn boundary_one_step(&self) -> Vec<StratumIndex> {
        let mut out: Vec<StratumIndex> = Vec::new();
        let mut push = |cand: StratumIndex| {
            if !out.iter().any(|s| s.isomorphic(&cand)) {
                out.push(cand);
            }
        };

        // Step 1: edge slot -> endpoint.
        for (i, s) in self.slots.iter().enumerate() {
            if let Slot::EdgeSlot(e) = s {
                let (a, b) = self.graph.endpoints(*e);
                for v in [a, b] {
                    let mut slots = self.slots.clone();
                    slots[i] = Slot::Vertex(v);
                    push(StratumIndex {
                        graph: self.graph.clone(),
                        slots,
                    });
                }
            }
        }

        // Step 2: shrink a non-loop edge.
        for e in self.graph.edges() {
            if self.graph.is_loop(e) {
                continue;
            }
            let (a, b) = self.graph.endpoints(e);
            let Collapse { graph, vertex_map } =
                collapse_forest(&self.graph, &BTreeSet::from([e]))
                    .expect("single non-loop edge is a forest");
            let slots = self
                .slots
                .iter()
                .map(|s| match s {
                    Slot::Vertex(v) => Slot::Vertex(vertex_map[v]),
                    Slot::EdgeSlot(f) if *f == e => Slot::Vertex(vertex_map[&a]),
                    Slot::EdgeSlot(f) => {
                        debug_assert_eq!(vertex_map[&a], vertex_map[&b]);
                        Slot::EdgeSlot(graph.edge_of(f.canonical_dart()))
                    }
                })
                .collect();
            push(StratumIndex { graph, slots });
        }
        out
    }

    /// Transitive closure of the one-step boundary moves (excluding the
    /// stratum itself). Terminates because dimensions strictly decrease.
    pub fn boundary_closure(&self) -> Vec<StratumIndex> {
        let mut acc: Vec<StratumIndex> = Vec::new();
        let mut frontier = self.boundary_one_step();
        while let Some(s) = frontier.pop() {
            if acc.iter().any(|t| t.isomorphic(&s)) {
                continue;
            }
            frontier.extend(s.boundary_one_step());
            acc.push(s);
        }
        acc
    }
}
