//! Metric graphs with marked points: exact edge lengths, the path metric
//! on the realization, isometry testing, and the canonical form for
//! marked cycles.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;

use thiserror::Error;

use crate::graph::{
    for_each_isomorphism, DartId, Edge, Graph, GraphIso, MarkId, RawGraph, VertexId,
};
use crate::scalar::{ratio, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricError {
    #[error("edge (dart {0}) has no length assigned")]
    MissingLength(DartId),
    #[error("edge (dart {0}) has a nonpositive length")]
    NonpositiveLength(DartId),
    #[error("invalid point of the realization")]
    InvalidPoint,
    #[error("points lie in different connected components")]
    DisconnectedPoints,
    #[error("fewer than two special points admit a finite pairwise distance")]
    TooFewSpecialPoints,
    #[error("mark counts differ")]
    MarkCountMismatch,
    #[error("not a marked cycle: need a connected bridge-free genus-1 graph with every vertex marked")]
    NotAMarkedCycle,
}

/// A point of the geometric realization: a vertex, or an interior point
/// of an edge at a positive offset from the source of a dart.
///
/// Two interior descriptions denote the same point when they differ by
/// `op` (offset `t` from one side is `l - t` from the other); the
/// canonical representative uses the smaller dart id.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum DeltaPoint<S> {
    AtVertex(VertexId),
    Interior { dart: DartId, offset: S },
}

impl<S> DeltaPoint<S> {
    pub fn interior(dart: DartId, offset: S) -> Self {
        DeltaPoint::Interior { dart, offset }
    }
}

/// A graph with positive exact edge lengths and a marking function
/// `[n] -> Delta(G)`. Immutable value type; all operations are pure.
#[derive(Clone, Debug)]
pub struct MetricMarkedGraph<S> {
    graph: Graph,
    lengths: BTreeMap<Edge, S>,
    marks: Vec<DeltaPoint<S>>,
}

impl<S: Scalar> MetricMarkedGraph<S> {
    pub fn new(
        graph: Graph,
        lengths: BTreeMap<Edge, S>,
        marks: Vec<DeltaPoint<S>>,
    ) -> Result<Self, MetricError> {
        for e in graph.edges() {
            match lengths.get(&e) {
                None => return Err(MetricError::MissingLength(e.canonical_dart())),
                Some(l) if !l.is_positive() => {
                    return Err(MetricError::NonpositiveLength(e.canonical_dart()))
                }
                _ => {}
            }
        }
        let mut g = MetricMarkedGraph {
            graph,
            lengths,
            marks: Vec::new(),
        };
        let mut canon = Vec::with_capacity(marks.len());
        for p in marks {
            if !g.point_is_valid(&p) {
                return Err(MetricError::InvalidPoint);
            }
            canon.push(g.canonical_point(&p));
        }
        g.marks = canon;
        Ok(g)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn length(&self, e: Edge) -> &S {
        &self.lengths[&e]
    }

    pub fn lengths(&self) -> &BTreeMap<Edge, S> {
        &self.lengths
    }

    pub fn dart_length(&self, d: DartId) -> &S {
        &self.lengths[&self.graph.edge_of(d)]
    }

    /// Number of marks `n`.
    pub fn n_marks(&self) -> usize {
        self.marks.len()
    }

    /// Mark `k`, 1-based.
    pub fn mark(&self, k: MarkId) -> &DeltaPoint<S> {
        &self.marks[(k - 1) as usize]
    }

    pub fn marks(&self) -> &[DeltaPoint<S>] {
        &self.marks
    }

    pub fn point_is_valid(&self, p: &DeltaPoint<S>) -> bool {
        match p {
            DeltaPoint::AtVertex(v) => self.graph.has_vertex(*v),
            DeltaPoint::Interior { dart, offset } => {
                self.graph.has_dart(*dart)
                    && offset.is_positive()
                    && *offset < *self.dart_length(*dart)
            }
        }
    }

    /// Canonical representative: interior points use the smaller dart of
    /// the orbit, with the offset measured from its source.
    pub fn canonical_point(&self, p: &DeltaPoint<S>) -> DeltaPoint<S> {
        match p {
            DeltaPoint::AtVertex(v) => DeltaPoint::AtVertex(*v),
            DeltaPoint::Interior { dart, offset } => {
                let partner = self.graph.op(*dart);
                if partner < *dart {
                    let l = self.dart_length(*dart).clone();
                    DeltaPoint::Interior {
                        dart: partner,
                        offset: l - offset.clone(),
                    }
                } else {
                    p.clone()
                }
            }
        }
    }

    pub fn points_equal(&self, p: &DeltaPoint<S>, q: &DeltaPoint<S>) -> bool {
        self.canonical_point(p) == self.canonical_point(q)
    }

    /// Vertex carrying the point, or the source component of its edge.
    fn host_vertex(&self, p: &DeltaPoint<S>) -> VertexId {
        match p {
            DeltaPoint::AtVertex(v) => *v,
            DeltaPoint::Interior { dart, .. } => self.graph.src(*dart),
        }
    }

    /// Number of marks sitting exactly at vertex `v`.
    pub fn times_marked(&self, v: VertexId) -> usize {
        self.marks
            .iter()
            .filter(|p| matches!(p, DeltaPoint::AtVertex(w) if *w == v))
            .count()
    }

    pub fn marks_at_vertices(&self) -> bool {
        self.marks
            .iter()
            .all(|p| matches!(p, DeltaPoint::AtVertex(_)))
    }

    /// Shortest-path distance in the realization.
    ///
    /// Dijkstra on the vertex graph extended by the two query points,
    /// which split their host edges into segments.
    pub fn delta_distance(&self, p: &DeltaPoint<S>, q: &DeltaPoint<S>) -> Result<S, MetricError> {
        if !self.point_is_valid(p) || !self.point_is_valid(q) {
            return Err(MetricError::InvalidPoint);
        }
        let p = self.canonical_point(p);
        let q = self.canonical_point(q);
        if p == q {
            return Ok(S::zero());
        }

        #[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
        enum Node {
            V(VertexId),
            P,
            Q,
        }
        let node_of = |which: &DeltaPoint<S>, tag: Node| match which {
            DeltaPoint::AtVertex(v) => Node::V(*v),
            DeltaPoint::Interior { .. } => tag,
        };
        let start = node_of(&p, Node::P);
        let goal = node_of(&q, Node::Q);

        let mut arcs: Vec<(Node, Node, S)> = Vec::new();
        for e in self.graph.edges() {
            let d = e.canonical_dart();
            let l = self.length(e).clone();
            let (u, v) = self.graph.endpoints(e);
            let mut stops: Vec<(S, Node)> = Vec::new();
            if let DeltaPoint::Interior { dart, offset } = &p {
                if *dart == d {
                    stops.push((offset.clone(), Node::P));
                }
            }
            if let DeltaPoint::Interior { dart, offset } = &q {
                if *dart == d {
                    stops.push((offset.clone(), Node::Q));
                }
            }
            stops.sort_by(|a, b| a.0.cmp(&b.0));
            let mut prev = (S::zero(), Node::V(u));
            for (t, node) in stops {
                arcs.push((prev.1, node, t.clone() - prev.0.clone()));
                prev = (t, node);
            }
            arcs.push((prev.1, Node::V(v), l - prev.0));
        }

        let mut adj: BTreeMap<Node, Vec<(Node, S)>> = BTreeMap::new();
        for &v in self.graph.vertices() {
            adj.entry(Node::V(v)).or_default();
        }
        for (a, b, w) in arcs {
            adj.entry(a).or_default().push((b, w.clone()));
            adj.entry(b).or_default().push((a, w));
        }

        let mut dist: BTreeMap<Node, S> = BTreeMap::new();
        let mut done: BTreeSet<Node> = BTreeSet::new();
        dist.insert(start, S::zero());
        loop {
            let cur = dist
                .iter()
                .filter(|(n, _)| !done.contains(n))
                .min_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(b.0)))
                .map(|(n, d)| (*n, d.clone()));
            let Some((n, dn)) = cur else { break };
            if n == goal {
                return Ok(dn);
            }
            done.insert(n);
            for (m, w) in &adj[&n] {
                let cand = dn.clone() + w.clone();
                match dist.get(m) {
                    Some(old) if *old <= cand => {}
                    _ => {
                        dist.insert(*m, cand);
                    }
                }
            }
        }
        Err(MetricError::DisconnectedPoints)
    }

    /// Special points (vertices and marked points), canonical and
    /// deduplicated.
    pub fn special_points(&self) -> Vec<DeltaPoint<S>> {
        let mut set: BTreeSet<DeltaPoint<S>> = self
            .graph
            .vertices()
            .iter()
            .map(|&v| DeltaPoint::AtVertex(v))
            .collect();
        for m in &self.marks {
            set.insert(m.clone());
        }
        set.into_iter().collect()
    }

    /// Minimum distance between distinct special points, taken over pairs
    /// in a common component. Errors when no such pair exists, since the
    /// admissible range would be empty.
    pub fn r_of(&self) -> Result<S, MetricError> {
        let pts = self.special_points();
        let comp = self.graph.component_index();
        let mut best: Option<S> = None;
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                if comp[&self.host_vertex(&pts[i])] != comp[&self.host_vertex(&pts[j])] {
                    continue;
                }
                let d = self.delta_distance(&pts[i], &pts[j])?;
                if best.as_ref().is_none_or(|b| d < *b) {
                    best = Some(d);
                }
            }
        }
        best.ok_or(MetricError::TooFewSpecialPoints)
    }

    /// Image of a point under an isomorphism into `other`, dilating the
    /// offset by the ratio of the edge lengths.
    pub fn map_point(
        &self,
        other: &MetricMarkedGraph<S>,
        iso: &GraphIso,
        p: &DeltaPoint<S>,
    ) -> DeltaPoint<S> {
        match self.canonical_point(p) {
            DeltaPoint::AtVertex(v) => DeltaPoint::AtVertex(iso.map_vertex(v)),
            DeltaPoint::Interior { dart, offset } => {
                let image = iso.map_dart(dart);
                let scale = ratio(
                    other.dart_length(image),
                    self.dart_length(dart),
                );
                other.canonical_point(&DeltaPoint::Interior {
                    dart: image,
                    offset: offset * scale,
                })
            }
        }
    }

    /// Subdivides every edge at its interior marks, so that all marks sit
    /// at vertices. The metric space is unchanged; idempotent up to
    /// isometry.
    pub fn marks_to_vertices(&self) -> MetricMarkedGraph<S> {
        let g = &self.graph;
        let mut next_vertex = g.next_vertex_id();
        let mut next_dart = g.next_dart_pair_base();

        let mut raw = RawGraph {
            vertices: g.vertices().to_vec(),
            ..Default::default()
        };
        let mut lengths: Vec<(DartId, S)> = Vec::new();
        // (canonical dart, offset) -> new vertex
        let mut split_vertex: BTreeMap<(DartId, S), VertexId> = BTreeMap::new();

        for e in g.edges() {
            let d = e.canonical_dart();
            let (u, v) = g.endpoints(e);
            let mut offsets: BTreeSet<S> = BTreeSet::new();
            for m in &self.marks {
                if let DeltaPoint::Interior { dart, offset } = m {
                    if *dart == d {
                        offsets.insert(offset.clone());
                    }
                }
            }
            if offsets.is_empty() {
                raw.dart_pairs.push((d, g.op(d)));
                raw.sources.push((d, u));
                raw.sources.push((g.op(d), v));
                lengths.push((d.min(g.op(d)), self.length(e).clone()));
                continue;
            }
            let mut prev_vertex = u;
            let mut prev_offset = S::zero();
            for t in &offsets {
                let w = next_vertex;
                next_vertex += 1;
                raw.vertices.push(w);
                split_vertex.insert((d, t.clone()), w);
                let (a, b) = (next_dart, next_dart + 1);
                next_dart += 2;
                raw.dart_pairs.push((a, b));
                raw.sources.push((a, prev_vertex));
                raw.sources.push((b, w));
                lengths.push((a, t.clone() - prev_offset));
                prev_vertex = w;
                prev_offset = t.clone();
            }
            let (a, b) = (next_dart, next_dart + 1);
            next_dart += 2;
            raw.dart_pairs.push((a, b));
            raw.sources.push((a, prev_vertex));
            raw.sources.push((b, v));
            lengths.push((a, self.length(e).clone() - prev_offset));
        }

        let new_graph = Graph::validate(&raw).expect("subdivision preserves the axioms");
        let length_map: BTreeMap<Edge, S> = lengths
            .into_iter()
            .map(|(d, l)| (new_graph.edge_of(d), l))
            .collect();
        let new_marks: Vec<DeltaPoint<S>> = self
            .marks
            .iter()
            .map(|m| match m {
                DeltaPoint::AtVertex(v) => DeltaPoint::AtVertex(*v),
                DeltaPoint::Interior { dart, offset } => {
                    DeltaPoint::AtVertex(split_vertex[&(*dart, offset.clone())])
                }
            })
            .collect();
        MetricMarkedGraph::new(new_graph, length_map, new_marks)
            .expect("subdivision yields positive lengths and valid marks")
    }
}

/// Isometry of metric marked graphs: a graph isomorphism matching all
/// edge lengths exactly and carrying mark `k` to mark `k`.
pub fn is_isometric<S: Scalar>(
    g: &MetricMarkedGraph<S>,
    h: &MetricMarkedGraph<S>,
) -> Result<Option<GraphIso>, MetricError> {
    if g.n_marks() != h.n_marks() {
        return Err(MetricError::MarkCountMismatch);
    }
    let mut witness = None;
    let edge_ok = |e: Edge, f: Edge| g.length(e) == h.length(f);
    let _ = for_each_isomorphism(g.graph(), h.graph(), &edge_ok, &mut |iso| {
        let marks_ok = (1..=g.n_marks() as MarkId).all(|k| {
            let image = g.map_point(h, iso, g.mark(k));
            h.points_equal(&image, h.mark(k))
        });
        if marks_ok {
            witness = Some(iso.clone());
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok(witness)
}

/// Canonical descriptor of a marked cycle: the circumference and the
/// cyclic sequence of (gap to the next marked vertex, labels here),
/// minimized over all rotations and both traversal directions.
///
/// Two marked cycles are isometric exactly when their descriptors agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleDescriptor<S> {
    pub circumference: S,
    pub entries: Vec<(S, BTreeSet<MarkId>)>,
}

pub fn cycle_canonical_form<S: Scalar>(
    g: &MetricMarkedGraph<S>,
) -> Result<CycleDescriptor<S>, MetricError> {
    let graph = g.graph();
    let n_vertices = graph.vertices().len();
    if n_vertices == 0
        || graph.components().len() != 1
        || graph.genus() != 1
        || !g.marks_at_vertices()
    {
        return Err(MetricError::NotAMarkedCycle);
    }
    // Connected + genus 1 + every valency 2 characterizes the cycle and
    // rules out bridges.
    for &v in graph.vertices() {
        if graph.valency(v).unwrap() != 2 {
            return Err(MetricError::NotAMarkedCycle);
        }
    }
    let mut labels: BTreeMap<VertexId, BTreeSet<MarkId>> =
        graph.vertices().iter().map(|&v| (v, BTreeSet::new())).collect();
    for (i, m) in g.marks().iter().enumerate() {
        if let DeltaPoint::AtVertex(v) = m {
            labels.get_mut(v).unwrap().insert(i as MarkId + 1);
        }
    }
    if labels.values().any(|s| s.is_empty()) {
        return Err(MetricError::NotAMarkedCycle);
    }

    // Walk the cycle once, recording the vertex order and gaps.
    let mut order: Vec<VertexId> = Vec::with_capacity(n_vertices);
    let mut gaps: Vec<S> = Vec::with_capacity(n_vertices);
    let v0 = graph.vertices()[0];
    let mut cur = graph.darts_from(v0)[0];
    loop {
        order.push(graph.src(cur));
        gaps.push(g.dart_length(cur).clone());
        let back = graph.op(cur);
        let w = graph.src(back);
        if w == v0 {
            break;
        }
        cur = graph
            .darts_from(w)
            .into_iter()
            .find(|&d| d != back)
            .expect("valency 2");
    }
    debug_assert_eq!(order.len(), n_vertices);

    let circumference = gaps.iter().fold(S::zero(), |acc, l| acc + l.clone());
    let m = order.len();
    let entry = |gi: usize, vi: usize| (gaps[gi].clone(), labels[&order[vi]].clone());
    let mut best: Option<Vec<(S, BTreeSet<MarkId>)>> = None;
    for rot in 0..m {
        let fwd: Vec<_> = (0..m).map(|j| entry((rot + j) % m, (rot + j) % m)).collect();
        // Reversed traversal: after v_i comes the edge towards v_{i-1}.
        let rev: Vec<_> = (0..m)
            .map(|j| {
                let vi = (rot + m - j) % m;
                let gi = (vi + m - 1) % m;
                entry(gi, vi)
            })
            .collect();
        for cand in [fwd, rev] {
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    Ok(CycleDescriptor {
        circumference,
        entries: best.unwrap(),
    })
}
