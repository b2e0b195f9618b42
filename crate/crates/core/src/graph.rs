//! Simple undirected graph with reversible vertex deletion.
//!
//! Adjacency lists are fixed at construction and kept sorted. Deleting a
//! vertex only flips its liveness flag and adjusts the cached degrees of its
//! live neighbours, so a deletion can be rolled back exactly by replaying the
//! undo stack in reverse.

use std::fmt;

use thiserror::Error;

pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {0} is out of range (n = {1})")]
    OutOfRange(Vertex, usize),
    #[error("vertex {0} is not active")]
    Inactive(Vertex),
    #[error("self-loop on vertex {0}")]
    SelfLoop(Vertex),
    #[error("common_neighbors called with u = v = {0}")]
    SamePair(Vertex),
    #[error("undo token does not match the top of the deletion stack")]
    StaleToken,
}

/// Marks a position in the deletion stack; pass it back to [`Graph::undo`]
/// to restore every vertex deleted after it was issued.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[must_use = "dropping an undo token makes the deletion permanent"]
pub struct UndoToken {
    height: usize,
}

#[derive(Clone)]
pub struct Graph {
    adjacency: Vec<Vec<Vertex>>,
    active: Vec<bool>,
    degree: Vec<usize>,
    m: usize,
    deleted: Vec<Vertex>,
}

impl Graph {
    /// Builds a graph on `n` vertices. Duplicate edges are collapsed; a
    /// self-loop or an endpoint `>= n` is rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n {
                return Err(GraphError::OutOfRange(u, n));
            }
            if v >= n {
                return Err(GraphError::OutOfRange(v, n));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        let degree: Vec<usize> = adjacency.iter().map(Vec::len).collect();
        let m = degree.iter().sum::<usize>() / 2;
        Ok(Graph {
            adjacency,
            active: vec![true; n],
            degree,
            m,
            deleted: Vec::new(),
        })
    }

    pub fn empty(n: usize) -> Self {
        Self::from_edges(n, std::iter::empty()).expect("no edges")
    }

    /// Total number of vertex ids, live or not.
    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    /// Number of live edges.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn active_count(&self) -> usize {
        self.adjacency.len() - self.deleted.len()
    }

    pub fn is_active(&self, v: Vertex) -> bool {
        v < self.n() && self.active[v]
    }

    pub fn active_vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.n()).filter(move |&v| self.active[v])
    }

    fn check(&self, v: Vertex) -> Result<(), GraphError> {
        if v >= self.n() {
            Err(GraphError::OutOfRange(v, self.n()))
        } else if !self.active[v] {
            Err(GraphError::Inactive(v))
        } else {
            Ok(())
        }
    }

    /// Degree of an active vertex.
    pub fn degree(&self, v: Vertex) -> Result<usize, GraphError> {
        self.check(v)?;
        Ok(self.degree[v])
    }

    /// Unchecked degree lookup for hot loops; `v` must be active.
    #[inline]
    pub(crate) fn deg(&self, v: Vertex) -> usize {
        debug_assert!(self.active[v]);
        self.degree[v]
    }

    /// Live neighbours of `v` in increasing id order.
    #[inline]
    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.adjacency[v].iter().copied().filter(move |&w| self.active[w])
    }

    /// True iff `u` and `v` are both live and adjacent.
    #[inline]
    pub fn adjacent(&self, u: Vertex, v: Vertex) -> bool {
        self.active[u] && self.active[v] && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// N[v] restricted to live vertices, sorted.
    pub fn closed_neighborhood(&self, v: Vertex) -> Result<Vec<Vertex>, GraphError> {
        self.check(v)?;
        Ok(self.closed_nbhd(v))
    }

    pub(crate) fn closed_nbhd(&self, v: Vertex) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = self.neighbors(v).collect();
        let pos = out.partition_point(|&w| w < v);
        out.insert(pos, v);
        out
    }

    /// N(u) ∩ N(v) among live vertices, sorted.
    pub fn common_neighbors(&self, u: Vertex, v: Vertex) -> Result<Vec<Vertex>, GraphError> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Err(GraphError::SamePair(u));
        }
        Ok(self.common(u, v))
    }

    pub(crate) fn common(&self, u: Vertex, v: Vertex) -> Vec<Vertex> {
        let (a, b) = (&self.adjacency[u], &self.adjacency[v]);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    if self.active[a[i]] {
                        out.push(a[i]);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out
    }

    pub(crate) fn common_count(&self, u: Vertex, v: Vertex) -> usize {
        let (a, b) = (&self.adjacency[u], &self.adjacency[v]);
        let (mut i, mut j, mut count) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    count += usize::from(self.active[a[i]]);
                    i += 1;
                    j += 1;
                }
            }
        }
        count
    }

    /// Maximum degree over live vertices; 0 when none are live.
    pub fn max_degree(&self) -> usize {
        self.active_vertices()
            .map(|v| self.degree[v])
            .max()
            .unwrap_or(0)
    }

    /// Deletes every vertex in `set`. Either all are deleted or, on error,
    /// the graph is left untouched.
    pub fn delete_vertices(&mut self, set: &[Vertex]) -> Result<UndoToken, GraphError> {
        for (i, &v) in set.iter().enumerate() {
            self.check(v)?;
            if set[..i].contains(&v) {
                return Err(GraphError::Inactive(v));
            }
        }
        let token = UndoToken {
            height: self.deleted.len(),
        };
        for &v in set {
            self.delete_one(v);
        }
        Ok(token)
    }

    fn delete_one(&mut self, v: Vertex) {
        self.active[v] = false;
        for &w in &self.adjacency[v] {
            if self.active[w] {
                self.degree[w] -= 1;
                self.m -= 1;
            }
        }
        self.deleted.push(v);
    }

    /// Restores every vertex deleted since `token` was issued.
    pub fn undo(&mut self, token: UndoToken) -> Result<(), GraphError> {
        if token.height > self.deleted.len() {
            return Err(GraphError::StaleToken);
        }
        while self.deleted.len() > token.height {
            let v = self.deleted.pop().expect("non-empty");
            for &w in &self.adjacency[v] {
                if self.active[w] {
                    self.degree[w] += 1;
                    self.m += 1;
                }
            }
            self.active[v] = true;
        }
        Ok(())
    }

    /// Vertices currently deleted, in deletion order.
    pub fn deleted(&self) -> &[Vertex] {
        &self.deleted
    }

    /// Live edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.m);
        for u in self.active_vertices() {
            for w in self.neighbors(u) {
                if u < w {
                    out.push((u, w));
                }
            }
        }
        out
    }

    /// A fresh graph with the same vertex ids and only the live edges. Deleted
    /// vertices become isolated but stay present.
    pub fn compacted(&self) -> Graph {
        Graph::from_edges(self.n(), self.edges()).expect("edges come from a valid graph")
    }
}

/// Two graphs are equal when they expose the same live state; the undo
/// history is not compared.
impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.adjacency == other.adjacency
            && self.active == other.active
            && self.degree == other.degree
            && self.m == other.m
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("m", &self.m)
            .field("deleted", &self.deleted)
            .field("edges", &self.edges())
            .finish()
    }
}

/// A graph together with the degree bound `d` and the deletion budget `k`.
#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: Graph,
    pub d: usize,
    pub k: usize,
}

impl Instance {
    pub fn new(graph: Graph, d: usize, k: usize) -> Self {
        Instance { graph, d, k }
    }
}

/// A set of vertices whose removal leaves maximum degree at most `d`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Solution {
    vertices: Vec<Vertex>,
}

impl Solution {
    pub fn new(mut vertices: Vec<Vertex>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        Solution { vertices }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// True iff deleting `set` from `g` leaves maximum degree at most `d`.
/// Ids that are out of range or already deleted are ignored.
pub fn validate_solution(g: &Graph, d: usize, set: &[Vertex]) -> bool {
    let mut removed = vec![false; g.n()];
    for &v in set {
        if v < g.n() {
            removed[v] = true;
        }
    }
    g.active_vertices()
        .filter(|&v| !removed[v])
        .all(|v| g.neighbors(v).filter(|&w| !removed[w]).count() <= d)
}
