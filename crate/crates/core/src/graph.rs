//! Multigraphs as dart sets with a fixed-point-free involution.
//!
//! A graph is a finite set of vertices and a finite set of *darts*
//! (directed edge ends) together with the orientation reversal `op` and
//! the source map `src`. Undirected edges are the `op`-orbits; loops and
//! parallel edges are allowed and essential. This representation makes
//! contraction and isomorphism search uniform for multigraphs.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;

use thiserror::Error;

pub type VertexId = u32;
pub type DartId = u32;
/// Marks are the elements of `[n] = {1, .., n}`.
pub type MarkId = u32;

/// An undirected edge, represented by the smaller dart of its `op`-orbit.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Edge(DartId);

impl Edge {
    pub fn canonical_dart(self) -> DartId {
        self.0
    }

    /// Wraps a dart id without checking it against a graph; prefer
    /// [`Graph::edge_of`] whenever a graph is at hand.
    pub fn from_dart_unchecked(d: DartId) -> Edge {
        Edge(d)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate id {0}")]
    DuplicateId(u32),
    #[error("op is not a fixed-point-free involution at dart {0}")]
    BadInvolution(DartId),
    #[error("dart {0} has no valid source vertex")]
    DanglingDart(DartId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge (dart {0})")]
    UnknownEdge(DartId),
}

/// Unvalidated graph data: a vertex list, the dart pairing defining `op`,
/// and one source vertex per dart.
#[derive(Clone, Debug, Default)]
pub struct RawGraph {
    pub vertices: Vec<VertexId>,
    pub dart_pairs: Vec<(DartId, DartId)>,
    pub sources: Vec<(DartId, VertexId)>,
}

/// A validated multigraph. Immutable after construction; all operations
/// are pure, so values can be shared freely across threads.
#[derive(Clone, Debug)]
pub struct Graph {
    vertices: Vec<VertexId>,
    darts: Vec<DartId>,
    op: BTreeMap<DartId, DartId>,
    src: BTreeMap<DartId, VertexId>,
}

impl Graph {
    /// Checks the dart axioms (`op` an involution without fixed points,
    /// `src` total with known targets) and builds the graph.
    pub fn validate(raw: &RawGraph) -> Result<Graph, GraphError> {
        let mut vertices: Vec<VertexId> = Vec::with_capacity(raw.vertices.len());
        let mut vset = BTreeSet::new();
        for &v in &raw.vertices {
            if !vset.insert(v) {
                return Err(GraphError::DuplicateId(v));
            }
            vertices.push(v);
        }
        vertices.sort_unstable();

        let mut op = BTreeMap::new();
        for &(a, b) in &raw.dart_pairs {
            if a == b {
                return Err(GraphError::BadInvolution(a));
            }
            if op.insert(a, b).is_some() {
                return Err(GraphError::DuplicateId(a));
            }
            if op.insert(b, a).is_some() {
                return Err(GraphError::DuplicateId(b));
            }
        }

        let mut src = BTreeMap::new();
        for &(d, v) in &raw.sources {
            if !op.contains_key(&d) {
                return Err(GraphError::DanglingDart(d));
            }
            if !vset.contains(&v) {
                return Err(GraphError::DanglingDart(d));
            }
            if src.insert(d, v).is_some() {
                return Err(GraphError::DuplicateId(d));
            }
        }
        for &d in op.keys() {
            if !src.contains_key(&d) {
                return Err(GraphError::DanglingDart(d));
            }
        }

        let darts: Vec<DartId> = op.keys().copied().collect();
        Ok(Graph {
            vertices,
            darts,
            op,
            src,
        })
    }

    pub fn empty() -> Graph {
        Graph {
            vertices: Vec::new(),
            darts: Vec::new(),
            op: BTreeMap::new(),
            src: BTreeMap::new(),
        }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn darts(&self) -> &[DartId] {
        &self.darts
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn has_dart(&self, d: DartId) -> bool {
        self.op.contains_key(&d)
    }

    pub fn op(&self, d: DartId) -> DartId {
        self.op[&d]
    }

    pub fn src(&self, d: DartId) -> VertexId {
        self.src[&d]
    }

    /// Target vertex: the source of the reversed dart.
    pub fn tgt(&self, d: DartId) -> VertexId {
        self.src[&self.op[&d]]
    }

    pub fn edge_of(&self, d: DartId) -> Edge {
        Edge(d.min(self.op[&d]))
    }

    pub fn edge_by_dart(&self, d: DartId) -> Result<Edge, GraphError> {
        if self.has_dart(d) {
            Ok(self.edge_of(d))
        } else {
            Err(GraphError::UnknownEdge(d))
        }
    }

    /// All edges, ordered by canonical dart.
    pub fn edges(&self) -> Vec<Edge> {
        self.darts
            .iter()
            .filter(|&&d| d < self.op[&d])
            .map(|&d| Edge(d))
            .collect()
    }

    pub fn n_edges(&self) -> usize {
        self.darts.len() / 2
    }

    /// Endpoints as (src, tgt) of the canonical dart.
    pub fn endpoints(&self, e: Edge) -> (VertexId, VertexId) {
        (self.src(e.0), self.tgt(e.0))
    }

    pub fn is_loop(&self, e: Edge) -> bool {
        let (a, b) = self.endpoints(e);
        a == b
    }

    /// Darts based at `v`, in id order.
    pub fn darts_from(&self, v: VertexId) -> Vec<DartId> {
        self.darts
            .iter()
            .copied()
            .filter(|&d| self.src[&d] == v)
            .collect()
    }

    /// Number of darts based at `v`; a loop contributes 2.
    pub fn valency(&self, v: VertexId) -> Result<usize, GraphError> {
        if !self.has_vertex(v) {
            return Err(GraphError::UnknownVertex(v));
        }
        Ok(self.src.values().filter(|&&u| u == v).count())
    }

    /// Number of loop edges at `v`.
    pub fn loops_at(&self, v: VertexId) -> usize {
        self.edges()
            .into_iter()
            .filter(|&e| self.is_loop(e) && self.src(e.0) == v)
            .count()
    }

    /// Partition of the vertex set into connected components, each block
    /// sorted, blocks ordered by their minimum vertex.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut seen: BTreeSet<VertexId> = BTreeSet::new();
        let mut blocks = Vec::new();
        for &start in &self.vertices {
            if seen.contains(&start) {
                continue;
            }
            let mut block = Vec::new();
            let mut stack = vec![start];
            seen.insert(start);
            while let Some(v) = stack.pop() {
                block.push(v);
                for d in self.darts_from(v) {
                    let w = self.tgt(d);
                    if seen.insert(w) {
                        stack.push(w);
                    }
                }
            }
            block.sort_unstable();
            blocks.push(block);
        }
        blocks
    }

    /// Component index of every vertex, following the order of
    /// [`Graph::components`].
    pub fn component_index(&self) -> BTreeMap<VertexId, usize> {
        let mut idx = BTreeMap::new();
        for (i, block) in self.components().into_iter().enumerate() {
            for v in block {
                idx.insert(v, i);
            }
        }
        idx
    }

    /// First Betti number of the realization: `|E| - |V| + #components`.
    pub fn genus(&self) -> usize {
        let e = self.n_edges() as isize;
        let v = self.vertices.len() as isize;
        let c = self.components().len() as isize;
        let g = e - v + c;
        debug_assert!(g >= 0);
        g as usize
    }

    /// Next unused even dart id; fresh edges take pairs `(d, d+1)`.
    pub fn next_dart_pair_base(&self) -> DartId {
        self.darts.last().map(|&d| (d | 1) + 1).unwrap_or(0)
    }

    pub fn next_vertex_id(&self) -> VertexId {
        self.vertices.last().map(|&v| v + 1).unwrap_or(0)
    }

    /// Darts from `x` to `y` (directed), in id order.
    pub fn darts_between(&self, x: VertexId, y: VertexId) -> Vec<DartId> {
        self.darts
            .iter()
            .copied()
            .filter(|&d| self.src[&d] == x && self.tgt(d) == y)
            .collect()
    }
}

/// A witness of graph isomorphism: compatible bijections on vertices and
/// darts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphIso {
    pub vertex_map: BTreeMap<VertexId, VertexId>,
    pub dart_map: BTreeMap<DartId, DartId>,
}

impl GraphIso {
    pub fn map_vertex(&self, v: VertexId) -> VertexId {
        self.vertex_map[&v]
    }

    pub fn map_dart(&self, d: DartId) -> DartId {
        self.dart_map[&d]
    }

    pub fn map_edge(&self, h: &Graph, e: Edge) -> Edge {
        h.edge_of(self.dart_map[&e.canonical_dart()])
    }

    /// Checks the homomorphism laws and bijectivity against both graphs.
    pub fn is_valid(&self, g: &Graph, h: &Graph) -> bool {
        if self.vertex_map.len() != g.vertices().len() || self.dart_map.len() != g.darts().len() {
            return false;
        }
        let vs: BTreeSet<_> = self.vertex_map.values().collect();
        let ds: BTreeSet<_> = self.dart_map.values().collect();
        if vs.len() != h.vertices().len() || ds.len() != h.darts().len() {
            return false;
        }
        if !self.vertex_map.values().all(|&v| h.has_vertex(v))
            || !self.dart_map.values().all(|&d| h.has_dart(d))
        {
            return false;
        }
        g.darts().iter().all(|&d| {
            self.dart_map[&g.op(d)] == h.op(self.dart_map[&d])
                && self.vertex_map[&g.src(d)] == h.src(self.dart_map[&d])
        })
    }
}

/// Per-graph data prepared once for the isomorphism search.
struct IsoSide<'a> {
    g: &'a Graph,
    verts: Vec<VertexId>,
    valency: BTreeMap<VertexId, usize>,
    loops: BTreeMap<VertexId, usize>,
}

impl<'a> IsoSide<'a> {
    fn new(g: &'a Graph) -> Self {
        let valency = g
            .vertices()
            .iter()
            .map(|&v| (v, g.valency(v).unwrap()))
            .collect();
        let loops = g.vertices().iter().map(|&v| (v, g.loops_at(v))).collect();
        IsoSide {
            g,
            verts: g.vertices().to_vec(),
            valency,
            loops,
        }
    }

    fn signature(&self, v: VertexId) -> (usize, usize) {
        (self.valency[&v], self.loops[&v])
    }
}

/// Backtracking search over all isomorphisms `g -> h`.
///
/// `edge_ok` restricts which edge orbits may be matched (used for length
/// and slot constraints); `visit` receives each complete witness and may
/// stop the search early. Deterministic for fixed inputs: vertices are
/// tried in id order, parallel edges and loop orientations in canonical
/// order.
pub fn for_each_isomorphism<F>(
    g: &Graph,
    h: &Graph,
    edge_ok: &dyn Fn(Edge, Edge) -> bool,
    visit: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&GraphIso) -> ControlFlow<()>,
{
    if g.vertices().len() != h.vertices().len() || g.darts().len() != h.darts().len() {
        return ControlFlow::Continue(());
    }
    let gs = IsoSide::new(g);
    let hs = IsoSide::new(h);
    let mut sig_g: Vec<_> = gs.verts.iter().map(|&v| gs.signature(v)).collect();
    let mut sig_h: Vec<_> = hs.verts.iter().map(|&v| hs.signature(v)).collect();
    sig_g.sort_unstable();
    sig_h.sort_unstable();
    if sig_g != sig_h {
        return ControlFlow::Continue(());
    }

    // Most-constrained-first ordering keeps the branching factor low.
    let mut order = gs.verts.clone();
    order.sort_by_key(|&v| (std::cmp::Reverse(gs.valency[&v]), v));

    let mut search = IsoSearch {
        gs: &gs,
        hs: &hs,
        edge_ok,
        order,
        vmap: BTreeMap::new(),
        used: BTreeSet::new(),
    };
    search.assign_vertex(0, visit)
}

struct IsoSearch<'a, 'b> {
    gs: &'a IsoSide<'a>,
    hs: &'a IsoSide<'a>,
    edge_ok: &'b dyn Fn(Edge, Edge) -> bool,
    order: Vec<VertexId>,
    vmap: BTreeMap<VertexId, VertexId>,
    used: BTreeSet<VertexId>,
}

impl IsoSearch<'_, '_> {
    fn assign_vertex<F>(&mut self, k: usize, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&GraphIso) -> ControlFlow<()>,
    {
        if k == self.order.len() {
            return self.match_edges(visit);
        }
        let v = self.order[k];
        let candidates: Vec<VertexId> = self
            .hs
            .verts
            .iter()
            .copied()
            .filter(|u| !self.used.contains(u))
            .collect();
        for u in candidates {
            if self.gs.signature(v) != self.hs.signature(u) {
                continue;
            }
            // Multiplicities towards already-assigned vertices must agree.
            let ok = self.vmap.iter().all(|(&w, &wu)| {
                self.gs.g.darts_between(v, w).len() == self.hs.g.darts_between(u, wu).len()
            });
            if !ok {
                continue;
            }
            self.vmap.insert(v, u);
            self.used.insert(u);
            self.assign_vertex(k + 1, visit)?;
            self.vmap.remove(&v);
            self.used.remove(&u);
        }
        ControlFlow::Continue(())
    }

    /// With the vertex bijection fixed, enumerate compatible dart maps:
    /// permutations of parallel orbits per vertex pair, and both
    /// orientations per loop orbit.
    fn match_edges<F>(&mut self, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&GraphIso) -> ControlFlow<()>,
    {
        let g = self.gs.g;
        let h = self.hs.g;

        // Groups of orbits to match: for x < y ordinary bundles, for x == y loops.
        struct Group {
            g_darts: Vec<DartId>, // representative darts (from x; for loops, canonical)
            h_darts: Vec<DartId>,
            is_loop: bool,
        }
        let mut groups: Vec<Group> = Vec::new();
        let verts = &self.gs.verts;
        for (i, &x) in verts.iter().enumerate() {
            for &y in verts.iter().skip(i) {
                let (hx, hy) = (self.vmap[&x], self.vmap[&y]);
                if x == y {
                    let lg: Vec<DartId> = g
                        .darts_between(x, x)
                        .into_iter()
                        .filter(|&d| d < g.op(d))
                        .collect();
                    let lh: Vec<DartId> = h
                        .darts_between(hx, hx)
                        .into_iter()
                        .filter(|&d| d < h.op(d))
                        .collect();
                    if lg.len() != lh.len() {
                        return ControlFlow::Continue(());
                    }
                    if !lg.is_empty() {
                        groups.push(Group {
                            g_darts: lg,
                            h_darts: lh,
                            is_loop: true,
                        });
                    }
                } else {
                    let bg = g.darts_between(x, y);
                    let bh = h.darts_between(hx, hy);
                    if bg.len() != bh.len() {
                        return ControlFlow::Continue(());
                    }
                    if !bg.is_empty() {
                        groups.push(Group {
                            g_darts: bg,
                            h_darts: bh,
                            is_loop: false,
                        });
                    }
                }
            }
        }

        // Depth-first over groups; within a group over injections g->h.
        fn go<F>(
            g: &Graph,
            h: &Graph,
            edge_ok: &dyn Fn(Edge, Edge) -> bool,
            groups: &[(Vec<DartId>, Vec<DartId>, bool)],
            gi: usize,
            dart_map: &mut BTreeMap<DartId, DartId>,
            vmap: &BTreeMap<VertexId, VertexId>,
            visit: &mut F,
        ) -> ControlFlow<()>
        where
            F: FnMut(&GraphIso) -> ControlFlow<()>,
        {
            if gi == groups.len() {
                let iso = GraphIso {
                    vertex_map: vmap.clone(),
                    dart_map: dart_map.clone(),
                };
                return visit(&iso);
            }
            let (gd, hd, is_loop) = &groups[gi];
            fn inject<F>(
                g: &Graph,
                h: &Graph,
                edge_ok: &dyn Fn(Edge, Edge) -> bool,
                groups: &[(Vec<DartId>, Vec<DartId>, bool)],
                gi: usize,
                gd: &[DartId],
                hd: &[DartId],
                is_loop: bool,
                pos: usize,
                taken: &mut Vec<bool>,
                dart_map: &mut BTreeMap<DartId, DartId>,
                vmap: &BTreeMap<VertexId, VertexId>,
                visit: &mut F,
            ) -> ControlFlow<()>
            where
                F: FnMut(&GraphIso) -> ControlFlow<()>,
            {
                if pos == gd.len() {
                    return go(g, h, edge_ok, groups, gi + 1, dart_map, vmap, visit);
                }
                let a = gd[pos];
                for j in 0..hd.len() {
                    if taken[j] {
                        continue;
                    }
                    let b = hd[j];
                    if !edge_ok(g.edge_of(a), h.edge_of(b)) {
                        continue;
                    }
                    taken[j] = true;
                    let orientations: &[(DartId, DartId)] = if is_loop {
                        &[(b, h.op(b)), (h.op(b), b)]
                    } else {
                        &[(b, h.op(b))]
                    };
                    for &(b0, b1) in orientations {
                        dart_map.insert(a, b0);
                        dart_map.insert(g.op(a), b1);
                        inject(
                            g, h, edge_ok, groups, gi, gd, hd, is_loop, pos + 1, taken, dart_map,
                            vmap, visit,
                        )?;
                        dart_map.remove(&a);
                        dart_map.remove(&g.op(a));
                    }
                    taken[j] = false;
                }
                ControlFlow::Continue(())
            }
            let mut taken = vec![false; hd.len()];
            inject(
                g, h, edge_ok, groups, gi, gd, hd, *is_loop, 0, &mut taken, dart_map, vmap, visit,
            )
        }

        let flat: Vec<(Vec<DartId>, Vec<DartId>, bool)> = groups
            .into_iter()
            .map(|gr| (gr.g_darts, gr.h_darts, gr.is_loop))
            .collect();
        let mut dart_map = BTreeMap::new();
        go(
            g,
            h,
            self.edge_ok,
            &flat,
            0,
            &mut dart_map,
            &self.vmap,
            visit,
        )
    }
}

/// First isomorphism witness in the deterministic search order, if any.
pub fn find_isomorphism(g: &Graph, h: &Graph) -> Option<GraphIso> {
    let mut found = None;
    let _ = for_each_isomorphism(g, h, &|_, _| true, &mut |iso| {
        found = Some(iso.clone());
        ControlFlow::Break(())
    });
    found
}

/// Number of isomorphisms `g -> g`.
pub fn count_automorphisms(g: &Graph) -> usize {
    let mut n = 0usize;
    let _ = for_each_isomorphism(g, g, &|_, _| true, &mut |_| {
        n += 1;
        ControlFlow::Continue(())
    });
    n
}

/// Convenience constructor: vertices plus (edge id, src, dst) triples.
/// Edge id `k` takes the dart pair `(2k, 2k+1)` with `src(2k)` the first
/// endpoint; this is the layout the text format uses.
pub fn build_graph(vertices: &[VertexId], edges: &[(u32, VertexId, VertexId)]) -> RawGraph {
    let mut raw = RawGraph {
        vertices: vertices.to_vec(),
        ..Default::default()
    };
    for &(k, a, b) in edges {
        raw.dart_pairs.push((2 * k, 2 * k + 1));
        raw.sources.push((2 * k, a));
        raw.sources.push((2 * k + 1, b));
    }
    raw
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loop_graph() -> Graph {
        Graph::validate(&build_graph(&[0], &[(0, 0, 0)])).unwrap()
    }

    fn theta_graph() -> Graph {
        Graph::validate(&build_graph(&[0, 1], &[(0, 0, 1), (1, 0, 1), (2, 0, 1)])).unwrap()
    }

    fn path3() -> Graph {
        Graph::validate(&build_graph(&[0, 1, 2], &[(0, 0, 1), (1, 1, 2)])).unwrap()
    }

    #[test]
    fn validate_loop_graph() {
        let g = loop_graph();
        assert_eq!(g.vertices(), &[0]);
        assert_eq!(g.n_edges(), 1);
        assert_eq!(g.op(0), 1);
        assert_eq!(g.tgt(0), 0);
    }

    #[test]
    fn validate_empty_graph() {
        let g = Graph::validate(&RawGraph::default()).unwrap();
        assert!(g.vertices().is_empty());
        assert_eq!(g.genus(), 0);
        assert!(g.components().is_empty());
    }

    #[test]
    fn validate_rejects_fixed_point() {
        let raw = RawGraph {
            vertices: vec![0],
            dart_pairs: vec![(1, 1)],
            sources: vec![(1, 0)],
        };
        assert_eq!(
            Graph::validate(&raw).unwrap_err(),
            GraphError::BadInvolution(1)
        );
    }

    #[test]
    fn validate_rejects_dangling() {
        let raw = RawGraph {
            vertices: vec![0],
            dart_pairs: vec![(0, 1)],
            sources: vec![(0, 0), (1, 7)],
        };
        assert!(matches!(
            Graph::validate(&raw),
            Err(GraphError::DanglingDart(1))
        ));
        let raw = RawGraph {
            vertices: vec![0],
            dart_pairs: vec![(0, 1)],
            sources: vec![(0, 0)],
        };
        assert!(matches!(
            Graph::validate(&raw),
            Err(GraphError::DanglingDart(1))
        ));
    }

    #[test]
    fn validate_rejects_duplicates() {
        let raw = RawGraph {
            vertices: vec![3, 3],
            ..Default::default()
        };
        assert_eq!(Graph::validate(&raw).unwrap_err(), GraphError::DuplicateId(3));
    }

    #[test]
    fn genus_examples() {
        assert_eq!(loop_graph().genus(), 1);
        assert_eq!(path3().genus(), 0);
        assert_eq!(theta_graph().genus(), 2);
    }

    #[test]
    fn genus_counts_components() {
        // Two disjoint loops: |E|-|V|+c = 2-2+2.
        let g = Graph::validate(&build_graph(&[0, 1], &[(0, 0, 0), (1, 1, 1)])).unwrap();
        assert_eq!(g.genus(), 2);
    }

    #[test]
    fn components_examples() {
        assert_eq!(loop_graph().components(), vec![vec![0]]);
        let g = Graph::validate(&build_graph(
            &[0, 1, 2, 9],
            &[(0, 0, 1), (1, 1, 2), (2, 2, 0)],
        ))
        .unwrap();
        assert_eq!(g.components(), vec![vec![0, 1, 2], vec![9]]);
        assert!(Graph::validate(&RawGraph::default())
            .unwrap()
            .components()
            .is_empty());
    }

    #[test]
    fn valency_examples() {
        assert_eq!(loop_graph().valency(0).unwrap(), 2);
        assert_eq!(theta_graph().valency(0).unwrap(), 3);
        assert_eq!(theta_graph().valency(1).unwrap(), 3);
        let g = Graph::validate(&build_graph(&[5], &[])).unwrap();
        assert_eq!(g.valency(5).unwrap(), 0);
        assert_eq!(g.valency(6).unwrap_err(), GraphError::UnknownVertex(6));
    }

    #[test]
    fn valency_sums_to_dart_count() {
        let g = theta_graph();
        let total: usize = g.vertices().iter().map(|&v| g.valency(v).unwrap()).sum();
        assert_eq!(total, g.darts().len());
        assert_eq!(total, 2 * g.n_edges());
    }

    #[test]
    fn iso_loop_vs_loop() {
        let g = loop_graph();
        let h = Graph::validate(&build_graph(&[4], &[(7, 4, 4)])).unwrap();
        let iso = find_isomorphism(&g, &h).expect("loops are isomorphic");
        assert!(iso.is_valid(&g, &h));
    }

    #[test]
    fn iso_loop_vs_edge_fails() {
        let g = loop_graph();
        let h = Graph::validate(&build_graph(&[0, 1], &[(0, 0, 1)])).unwrap();
        assert!(find_isomorphism(&g, &h).is_none());
    }

    #[test]
    fn loop_graph_has_two_automorphisms() {
        assert_eq!(count_automorphisms(&loop_graph()), 2);
    }

    #[test]
    fn theta_automorphisms() {
        // 2 vertex swaps x 3! matchings of the parallel edges.
        assert_eq!(count_automorphisms(&theta_graph()), 12);
    }

    #[test]
    fn identity_iso_always_found() {
        for g in [loop_graph(), theta_graph(), path3()] {
            let iso = find_isomorphism(&g, &g).expect("self-isomorphism");
            assert!(iso.is_valid(&g, &g));
        }
    }

    #[test]
    fn iso_preserves_invariants() {
        let g = theta_graph();
        let h = Graph::validate(&build_graph(&[7, 9], &[(3, 9, 7), (5, 7, 9), (8, 9, 7)])).unwrap();
        let iso = find_isomorphism(&g, &h).expect("relabelled theta");
        assert!(iso.is_valid(&g, &h));
        assert_eq!(g.genus(), h.genus());
        let mut vg: Vec<usize> = g.vertices().iter().map(|&v| g.valency(v).unwrap()).collect();
        let mut vh: Vec<usize> = h.vertices().iter().map(|&v| h.valency(v).unwrap()).collect();
        vg.sort_unstable();
        vh.sort_unstable();
        assert_eq!(vg, vh);
    }

    #[test]
    fn tgt_is_src_of_op() {
        let g = theta_graph();
        for &d in g.darts() {
            assert_eq!(g.tgt(d), g.src(g.op(d)));
        }
    }
}
