//! Edge and forest shrinking, bridge detection, the bridge-scaling
//! retraction, and membership predicates for the tropical subspaces.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::{DartId, Edge, Graph, RawGraph, VertexId};
use crate::metric::{DeltaPoint, MetricMarkedGraph};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContractionError {
    #[error("cannot contract a loop (dart {0})")]
    LoopNotContractible(DartId),
    #[error("unknown edge (dart {0})")]
    UnknownEdge(DartId),
    #[error("edge set spans a cycle, not a forest")]
    NotAForest,
    #[error("retraction parameter must lie in [0, 1]")]
    BadParameter,
}

/// Result of collapsing a subforest on the plain graph: the new graph and
/// the vertex merge map.
pub struct Collapse {
    pub graph: Graph,
    pub vertex_map: BTreeMap<VertexId, VertexId>,
}

/// Collapses a set of edges that spans no cycle. Vertices untouched by
/// the forest keep their ids; each merged component receives a fresh id,
/// assigned in order of the component's minimum vertex.
pub fn collapse_forest(g: &Graph, forest: &BTreeSet<Edge>) -> Result<Collapse, ContractionError> {
    for &e in forest {
        if !g.has_dart(e.canonical_dart()) {
            return Err(ContractionError::UnknownEdge(e.canonical_dart()));
        }
        if g.is_loop(e) {
            return Err(ContractionError::NotAForest);
        }
    }

    // Union-find over the forest's endpoints; a cycle shows up as a union
    // of two already-joined vertices.
    let mut parent: BTreeMap<VertexId, VertexId> =
        g.vertices().iter().map(|&v| (v, v)).collect();
    fn find(parent: &mut BTreeMap<VertexId, VertexId>, v: VertexId) -> VertexId {
        let mut root = v;
        while parent[&root] != root {
            root = parent[&root];
        }
        let mut cur = v;
        while parent[&cur] != root {
            let next = parent[&cur];
            parent.insert(cur, root);
            cur = next;
        }
        root
    }
    for &e in forest {
        let (a, b) = g.endpoints(e);
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return Err(ContractionError::NotAForest);
        }
        parent.insert(ra, rb);
    }

    // Components of the subforest, keyed by root.
    let mut groups: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for &v in g.vertices() {
        let r = find(&mut parent, v);
        groups.entry(r).or_default().push(v);
    }
    let mut next_fresh = g.next_vertex_id();
    let mut vertex_map: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    let mut new_vertices: Vec<VertexId> = Vec::new();
    let mut merged: Vec<(VertexId, Vec<VertexId>)> = Vec::new();
    for (_, members) in groups {
        if members.len() == 1 {
            vertex_map.insert(members[0], members[0]);
            new_vertices.push(members[0]);
        } else {
            merged.push((members[0], members));
        }
    }
    merged.sort_by_key(|(min_v, _)| *min_v);
    for (_, members) in merged {
        let fresh = next_fresh;
        next_fresh += 1;
        new_vertices.push(fresh);
        for v in members {
            vertex_map.insert(v, fresh);
        }
    }

    let removed: BTreeSet<DartId> = forest
        .iter()
        .flat_map(|&e| {
            let d = e.canonical_dart();
            [d, g.op(d)]
        })
        .collect();
    let mut raw = RawGraph {
        vertices: new_vertices,
        ..Default::default()
    };
    for &d in g.darts() {
        if removed.contains(&d) || d > g.op(d) {
            continue;
        }
        raw.dart_pairs.push((d, g.op(d)));
        raw.sources.push((d, vertex_map[&g.src(d)]));
        raw.sources.push((g.op(d), vertex_map[&g.src(g.op(d))]));
    }
    let graph = Graph::validate(&raw).expect("collapse preserves the axioms");
    Ok(Collapse { graph, vertex_map })
}

/// Shrinks a set of edges of a metric graph; the edges must span no
/// cycle. Marks on shrunk edges and at their endpoints travel to the
/// merged vertex; all other marks keep their host dart and offset.
pub fn shrink_forest<S: Scalar>(
    g: &MetricMarkedGraph<S>,
    forest: &BTreeSet<Edge>,
) -> Result<MetricMarkedGraph<S>, ContractionError> {
    let Collapse { graph, vertex_map } = collapse_forest(g.graph(), forest)?;
    let lengths: BTreeMap<Edge, S> = g
        .lengths()
        .iter()
        .filter(|(e, _)| !forest.contains(e))
        .map(|(e, l)| (graph.edge_of(e.canonical_dart()), l.clone()))
        .collect();
    let marks: Vec<DeltaPoint<S>> = g
        .marks()
        .iter()
        .map(|m| match m {
            DeltaPoint::AtVertex(v) => DeltaPoint::AtVertex(vertex_map[v]),
            DeltaPoint::Interior { dart, offset } => {
                let e = g.graph().edge_of(*dart);
                if forest.contains(&e) {
                    DeltaPoint::AtVertex(vertex_map[&g.graph().src(*dart)])
                } else {
                    DeltaPoint::Interior {
                        dart: *dart,
                        offset: offset.clone(),
                    }
                }
            }
        })
        .collect();
    Ok(MetricMarkedGraph::new(graph, lengths, marks)
        .expect("shrinking preserves lengths and marks"))
}

/// Shrinks a single non-loop edge.
pub fn shrink_edge<S: Scalar>(
    g: &MetricMarkedGraph<S>,
    e: Edge,
) -> Result<MetricMarkedGraph<S>, ContractionError> {
    if !g.graph().has_dart(e.canonical_dart()) {
        return Err(ContractionError::UnknownEdge(e.canonical_dart()));
    }
    if g.graph().is_loop(e) {
        return Err(ContractionError::LoopNotContractible(e.canonical_dart()));
    }
    shrink_forest(g, &BTreeSet::from([e]))
}

/// Bridges: edges whose deletion disconnects their component. DFS
/// low-link over darts, so parallel edges are handled correctly (only
/// the entering dart's reversal is skipped, a parallel partner is a
/// genuine back edge).
pub fn bridges(g: &Graph) -> BTreeSet<Edge> {
    let mut disc: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut low: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut out = BTreeSet::new();
    let mut time = 0usize;

    for &start in g.vertices() {
        if disc.contains_key(&start) {
            continue;
        }
        // Stack frames: (vertex, entering dart, remaining darts to try).
        let mut stack: Vec<(VertexId, Option<DartId>, Vec<DartId>)> = Vec::new();
        disc.insert(start, time);
        low.insert(start, time);
        time += 1;
        stack.push((start, None, g.darts_from(start)));
        while !stack.is_empty() {
            let (v, entry, next) = {
                let top = stack.last_mut().unwrap();
                (top.0, top.1, top.2.pop())
            };
            if let Some(d) = next {
                if entry.is_some_and(|ed| d == g.op(ed)) {
                    continue; // do not re-traverse the entering edge
                }
                let w = g.tgt(d);
                if let Some(&dw) = disc.get(&w) {
                    let lv = low[&v].min(dw);
                    low.insert(v, lv);
                } else {
                    disc.insert(w, time);
                    low.insert(w, time);
                    time += 1;
                    stack.push((w, Some(d), g.darts_from(w)));
                }
            } else {
                stack.pop();
                if let Some(ed) = entry {
                    let u = g.src(ed);
                    let lw = low[&v];
                    if lw > disc[&u] {
                        out.insert(g.edge_of(ed));
                    }
                    let lu = low[&u].min(lw);
                    low.insert(u, lu);
                }
            }
        }
    }
    out
}

/// The bridge-scaling map: every bridge length (and every interior mark
/// offset on a bridge) is multiplied by `t`; at `t = 0` all bridges are
/// shrunk instead, which lands in the bridge-free subspace.
pub fn retract<S: Scalar>(
    g: &MetricMarkedGraph<S>,
    t: &S,
) -> Result<MetricMarkedGraph<S>, ContractionError> {
    if t.is_negative() || *t > S::one() {
        return Err(ContractionError::BadParameter);
    }
    let br = bridges(g.graph());
    if t.is_zero() {
        return shrink_forest(g, &br);
    }
    let lengths: BTreeMap<Edge, S> = g
        .lengths()
        .iter()
        .map(|(e, l)| {
            let l = if br.contains(e) {
                l.clone() * t.clone()
            } else {
                l.clone()
            };
            (*e, l)
        })
        .collect();
    let marks: Vec<DeltaPoint<S>> = g
        .marks()
        .iter()
        .map(|m| match m {
            DeltaPoint::Interior { dart, offset }
                if br.contains(&g.graph().edge_of(*dart)) =>
            {
                DeltaPoint::Interior {
                    dart: *dart,
                    offset: offset.clone() * t.clone(),
                }
            }
            other => other.clone(),
        })
        .collect();
    Ok(MetricMarkedGraph::new(g.graph().clone(), lengths, marks)
        .expect("scaling keeps lengths positive"))
}

/// The tropical subspace to test membership in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TmVariant<S> {
    /// Every vertex has valency + marks >= 3.
    Tm,
    /// Bridge-free with every valency-2 vertex marked.
    TmB,
    /// No valency-2 vertices, exactly n leaves marked 1..n, leaf edges of
    /// length `d`.
    TmD(S),
}

/// Membership in `TM_n`, `TM_n^b`, or `TM_n(d)`.
pub fn tm_membership<S: Scalar>(g: &MetricMarkedGraph<S>, variant: &TmVariant<S>) -> bool {
    let graph = g.graph();
    let connected = graph.components().len() == 1;
    if !connected || !g.marks_at_vertices() {
        return false;
    }
    match variant {
        TmVariant::Tm => graph
            .vertices()
            .iter()
            .all(|&v| graph.valency(v).unwrap() + g.times_marked(v) >= 3),
        TmVariant::TmB => {
            let all_val2_marked = graph
                .vertices()
                .iter()
                .all(|&v| graph.valency(v).unwrap() != 2 || g.times_marked(v) >= 1);
            all_val2_marked && bridges(graph).is_empty()
        }
        TmVariant::TmD(d) => {
            debug_assert!(d.is_positive());
            if graph.vertices().iter().any(|&v| graph.valency(v).unwrap() == 2) {
                return false;
            }
            let leaves: Vec<VertexId> = graph
                .vertices()
                .iter()
                .copied()
                .filter(|&v| graph.valency(v).unwrap() == 1)
                .collect();
            if leaves.len() != g.n_marks() {
                return false;
            }
            // The marks must hit the leaves bijectively.
            let mut seen: BTreeSet<VertexId> = BTreeSet::new();
            for m in g.marks() {
                match m {
                    DeltaPoint::AtVertex(v)
                        if leaves.contains(v) && seen.insert(*v) => {}
                    _ => return false,
                }
            }
            leaves.iter().all(|&v| {
                let d0 = graph.darts_from(v)[0];
                g.dart_length(d0) == d
            })
        }
    }
}
