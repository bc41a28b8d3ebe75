//! Directed multigraphs, finite paths and the graph-theoretic hypotheses.
//!
//! Edges carry a source `s(e)` and a range `r(e)`. A path `w = w_1 … w_m`
//! is composable when `r(w_i) = s(w_{i+1})`; its source is `s(w_1)` and its
//! range is `r(w_m)`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::ktheory::IntMatrix;

/// Index of a vertex in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

/// Index of an edge in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub source: VertexId,
    pub range: VertexId,
}

/// A finite directed multigraph. Loops and parallel edges are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    out_edges: Vec<Vec<EdgeId>>,
    in_edges: Vec<Vec<EdgeId>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SinksSources {
    pub sinks: Vec<VertexId>,
    pub sources: Vec<VertexId>,
}

impl SinksSources {
    pub fn is_empty(&self) -> bool {
        self.sinks.is_empty() && self.sources.is_empty()
    }
}

impl Graph {
    /// Builds a graph from vertex names and `(edge, source, range)` triples.
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (String, String, String)>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), VertexId(i)).is_some() {
                return Err(Error::DuplicateId(v.clone()));
            }
        }
        let mut names = HashMap::new();
        let mut out = Vec::new();
        for (name, s, r) in edges {
            if names.insert(name.clone(), ()).is_some() {
                return Err(Error::DuplicateId(name));
            }
            let source = *index.get(&s).ok_or(Error::UnknownVertex(s))?;
            let range = *index.get(&r).ok_or(Error::UnknownVertex(r))?;
            out.push(Edge { name, source, range });
        }
        Ok(Self::from_parts(vertices, out))
    }

    /// Builds a graph directly from indexed edges `(source, range)`, naming
    /// vertices `v1, v2, …` and edges `e1, e2, …`.
    pub fn from_indexed(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let vertices: Vec<String> = (1..=vertex_count).map(|i| format!("v{i}")).collect();
        let mut out = Vec::with_capacity(edges.len());
        for (i, &(s, r)) in edges.iter().enumerate() {
            if s >= vertex_count || r >= vertex_count {
                return Err(Error::UnknownVertex(format!("#{}", s.max(r))));
            }
            out.push(Edge { name: format!("e{}", i + 1), source: VertexId(s), range: VertexId(r) });
        }
        Ok(Self::from_parts(vertices, out))
    }

    /// The graph realising a nonnegative vertex matrix, edges listed row by row.
    pub fn from_vertex_matrix(counts: &[Vec<usize>]) -> Result<Self> {
        let n = counts.len();
        let mut edges = Vec::new();
        for (v, row) in counts.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare { rows: n, cols: row.len() });
            }
            for (w, &k) in row.iter().enumerate() {
                edges.extend(std::iter::repeat((v, w)).take(k));
            }
        }
        Self::from_indexed(n, &edges)
    }

    fn from_parts(vertices: Vec<String>, edges: Vec<Edge>) -> Self {
        let mut out_edges = vec![Vec::new(); vertices.len()];
        let mut in_edges = vec![Vec::new(); vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            out_edges[e.source.0].push(EdgeId(i));
            in_edges[e.range.0].push(EdgeId(i));
        }
        Self { vertices, edges, out_edges, in_edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = VertexId> {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl ExactSizeIterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0]
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn source(&self, e: EdgeId) -> VertexId {
        self.edges[e.0].source
    }

    pub fn range(&self, e: EdgeId) -> VertexId {
        self.edges[e.0].range
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v == name).map(VertexId)
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edges.iter().position(|e| e.name == name).map(EdgeId)
    }

    /// Edges with `s(e) = v`, in declaration order.
    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_edges[v.0]
    }

    /// Edges with `r(e) = v`, in declaration order.
    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.in_edges[v.0]
    }

    fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v.0 < self.vertices.len() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v.to_string()))
        }
    }

    /// Sinks have no outgoing edge, sources no incoming edge.
    pub fn sinks_and_sources(&self) -> SinksSources {
        SinksSources {
            sinks: self.vertices().filter(|v| self.out_edges[v.0].is_empty()).collect(),
            sources: self.vertices().filter(|v| self.in_edges[v.0].is_empty()).collect(),
        }
    }

    /// Vertices reachable from `v` by a path of length at least one.
    fn reachable_from(&self, v: VertexId) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count()];
        let mut queue: VecDeque<VertexId> =
            self.out_edges[v.0].iter().map(|&e| self.range(e)).collect();
        while let Some(u) = queue.pop_front() {
            if seen[u.0] {
                continue;
            }
            seen[u.0] = true;
            queue.extend(self.out_edges[u.0].iter().map(|&e| self.range(e)));
        }
        seen
    }

    /// True when every ordered pair of vertices (including `(v, v)`) is joined
    /// by a path of length at least one.
    pub fn is_irreducible(&self) -> bool {
        self.vertex_count() > 0
            && self.vertices().all(|v| self.reachable_from(v).iter().all(|&r| r))
    }

    /// True iff every vertex has out-degree exactly one.
    ///
    /// Only meaningful for irreducible graphs without sinks or sources; any
    /// other input is rejected.
    pub fn is_cyclic_permutation(&self) -> Result<bool> {
        if !self.sinks_and_sources().is_empty() {
            return Err(Error::Precondition("graph has sinks or sources".into()));
        }
        if !self.is_irreducible() {
            return Err(Error::Precondition("graph is not irreducible".into()));
        }
        Ok(self.out_edges.iter().all(|out| out.len() == 1))
    }

    /// All paths of length `n` starting at `v`, lexicographic in edge order.
    pub fn paths_from(&self, v: VertexId, n: usize) -> Result<Vec<Path>> {
        self.check_vertex(v)?;
        if n == 0 {
            return Err(Error::Precondition("path length must be positive".into()));
        }
        let mut out = Vec::new();
        let mut stack = Vec::with_capacity(n);
        self.extend_paths(v, n, &mut stack, &mut out);
        Ok(out)
    }

    fn extend_paths(&self, at: VertexId, left: usize, stack: &mut Vec<EdgeId>, out: &mut Vec<Path>) {
        if left == 0 {
            out.push(Path { edges: stack.clone() });
            return;
        }
        for &e in &self.out_edges[at.0] {
            stack.push(e);
            self.extend_paths(self.range(e), left - 1, stack, out);
            stack.pop();
        }
    }

    /// Number of paths of length `n` starting at each vertex (saturating).
    pub fn path_counts(&self, n: usize) -> Vec<u128> {
        let mut counts = vec![1u128; self.vertex_count()];
        for _ in 0..n {
            counts = self
                .vertices()
                .map(|v| {
                    self.out_edges[v.0]
                        .iter()
                        .fold(0u128, |acc, &e| acc.saturating_add(counts[self.range(e).0]))
                })
                .collect();
        }
        counts
    }

    /// `A_G(v, w) = #{e : s(e) = v, r(e) = w}` in declaration order.
    pub fn vertex_matrix(&self) -> IntMatrix {
        let n = self.vertex_count();
        let mut m = IntMatrix::zeros(n, n);
        for e in &self.edges {
            let cur = m.get(e.source.0, e.range.0).clone();
            m.set(e.source.0, e.range.0, cur + 1);
        }
        m
    }
}

/// A composable, nonempty sequence of edges.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    edges: Vec<EdgeId>,
}

impl Path {
    pub fn new(graph: &Graph, edges: Vec<EdgeId>) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::EmptyPath);
        }
        for &e in &edges {
            if e.0 >= graph.edge_count() {
                return Err(Error::UnknownEdge(e.to_string()));
            }
        }
        for (i, pair) in edges.windows(2).enumerate() {
            if graph.range(pair[0]) != graph.source(pair[1]) {
                return Err(Error::NonComposablePath(i + 1));
            }
        }
        Ok(Self { edges })
    }

    pub fn single(e: EdgeId) -> Self {
        Self { edges: vec![e] }
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn source(&self, graph: &Graph) -> VertexId {
        graph.source(self.edges[0])
    }

    pub fn range(&self, graph: &Graph) -> VertexId {
        graph.range(*self.edges.last().expect("paths are nonempty"))
    }

    /// `self` followed by `other`, if `r(self) = s(other)`.
    pub fn concat(&self, graph: &Graph, other: &Path) -> Result<Path> {
        if self.range(graph) != other.source(graph) {
            return Err(Error::NonComposablePath(self.len()));
        }
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Ok(Path { edges })
    }
}
