//! Weighted graphs and the matrix operators (adjacency, Laplacian, incidence,
//! selection) used by the estimators, the controller and the trajectory
//! optimizer.
//!
//! Node ids are 1-based in configs and I/O and 0-based internally; all
//! functions in this module take and return 0-based indices.

use nalgebra::DMatrix;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("edge weight must be strictly positive, got {0}")]
    NonPositiveWeight(f64),
    #[error("self-loop on node {0} is not allowed")]
    SelfLoop(usize),
    #[error("node index {0} out of range for {1} nodes")]
    NodeOutOfRange(usize, usize),
    #[error("graph must have at least one node")]
    Empty,
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edge numbering does not match the graph edge set")]
    NumberingMismatch,
    #[error("leader set must not be empty")]
    NoLeaders,
    #[error("incidence matrix requires an undirected graph")]
    DirectedIncidence,
}

/// A directed, strictly positive weight on an ordered node pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub source: usize,
    pub sink: usize,
    pub weight: f64,
}

/// Weighted graph over nodes `0..n`. Undirected graphs store each edge once
/// with the canonical orientation `source < sink`; the adjacency matrix is
/// symmetrized on construction of the operators.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    directed: bool,
}

impl WeightedGraph {
    /// Undirected graph from unordered pairs `{i, j}` with positive weights.
    pub fn undirected(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut canon: Vec<Edge> = Vec::with_capacity(edges.len());
        for &(i, j, w) in edges {
            check_edge(n, i, j, w)?;
            let (s, t) = if i < j { (i, j) } else { (j, i) };
            if canon.iter().any(|e| e.source == s && e.sink == t) {
                return Err(GraphError::DuplicateEdge(s, t));
            }
            canon.push(Edge {
                source: s,
                sink: t,
                weight: w,
            });
        }
        // Lexicographic edge order makes every derived matrix reproducible.
        canon.sort_by(|a, b| (a.source, a.sink).cmp(&(b.source, b.sink)));
        Ok(Self {
            n,
            edges: canon,
            directed: false,
        })
    }

    /// Directed graph from ordered pairs `(i, j)` with positive weights.
    pub fn directed(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut list: Vec<Edge> = Vec::with_capacity(edges.len());
        for &(i, j, w) in edges {
            check_edge(n, i, j, w)?;
            if list.iter().any(|e| e.source == i && e.sink == j) {
                return Err(GraphError::DuplicateEdge(i, j));
            }
            list.push(Edge {
                source: i,
                sink: j,
                weight: w,
            });
        }
        list.sort_by(|a, b| (a.source, a.sink).cmp(&(b.source, b.sink)));
        Ok(Self {
            n,
            edges: list,
            directed: true,
        })
    }

    /// Complete undirected graph on `n` nodes with uniform weight.
    pub fn complete(n: usize, weight: f64) -> Result<Self, GraphError> {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                edges.push((i, j, weight));
            }
        }
        Self::undirected(n, &edges)
    }

    /// Path 0-1-...-(n-1) with uniform weight.
    pub fn path(n: usize, weight: f64) -> Result<Self, GraphError> {
        let edges: Vec<_> = (0..n.saturating_sub(1)).map(|i| (i, i + 1, weight)).collect();
        Self::undirected(n, &edges)
    }

    /// Ring 0-1-...-(n-1)-0 with uniform weight. Requires `n >= 3`.
    pub fn ring(n: usize, weight: f64) -> Result<Self, GraphError> {
        if n < 3 {
            return Err(GraphError::Empty);
        }
        let mut edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1, weight)).collect();
        edges.push((n - 1, 0, weight));
        Self::undirected(n, &edges)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Neighbors of `i` (out-neighbors for directed graphs), ascending.
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        for e in &self.edges {
            if e.source == i {
                out.push(e.sink);
            } else if !self.directed && e.sink == i {
                out.push(e.source);
            }
        }
        out.sort_unstable();
        out
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors(i).len()
    }

    /// Weight of the edge between `i` and `j`, if present.
    pub fn weight(&self, i: usize, j: usize) -> Option<f64> {
        self.edges
            .iter()
            .find(|e| {
                (e.source == i && e.sink == j) || (!self.directed && e.source == j && e.sink == i)
            })
            .map(|e| e.weight)
    }

    /// Adjacency matrix: `A[i][j]` is the weight of edge `(i, j)`, 0 otherwise.
    pub fn adjacency_matrix(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for e in &self.edges {
            a[(e.source, e.sink)] = e.weight;
            if !self.directed {
                a[(e.sink, e.source)] = e.weight;
            }
        }
        a
    }

    /// Weighted Laplacian `L = D_out - A` with `D_out = diag(A 1)`.
    pub fn laplacian(&self) -> DMatrix<f64> {
        let a = self.adjacency_matrix();
        let mut l = -a.clone();
        for i in 0..self.n {
            l[(i, i)] = a.row(i).sum();
        }
        l
    }

    /// Deterministic edge numbering: lexicographic by `(min id, max id)`,
    /// oriented from the smaller to the larger node id.
    pub fn edge_numbering(&self) -> Result<EdgeNumbering, GraphError> {
        if self.directed {
            return Err(GraphError::DirectedIncidence);
        }
        Ok(EdgeNumbering {
            oriented: self
                .edges
                .iter()
                .map(|e| (e.source, e.sink))
                .collect(),
        })
    }

    /// Node-by-edge incidence matrix: +1 at the source row of each edge
    /// column, -1 at the sink row. `(B^T x)_e = x_source - x_sink`.
    pub fn incidence_matrix(&self, numbering: &EdgeNumbering) -> Result<DMatrix<f64>, GraphError> {
        if self.directed {
            return Err(GraphError::DirectedIncidence);
        }
        if numbering.oriented.len() != self.edges.len() {
            return Err(GraphError::NumberingMismatch);
        }
        for &(s, t) in &numbering.oriented {
            let covered = self
                .edges
                .iter()
                .any(|e| (e.source, e.sink) == (s, t) || (e.source, e.sink) == (t, s));
            if !covered {
                return Err(GraphError::NumberingMismatch);
            }
        }
        let m = numbering.oriented.len();
        let mut b = DMatrix::zeros(self.n, m);
        for (e, &(s, t)) in numbering.oriented.iter().enumerate() {
            b[(s, e)] = 1.0;
            b[(t, e)] = -1.0;
        }
        Ok(b)
    }

    /// Per-edge weights in numbering order, for `L = B diag(a_e) B^T`.
    pub fn edge_weights(&self, numbering: &EdgeNumbering) -> Result<Vec<f64>, GraphError> {
        numbering
            .oriented
            .iter()
            .map(|&(s, t)| self.weight(s, t).ok_or(GraphError::NumberingMismatch))
            .collect()
    }

    /// Connectivity: path-connected for undirected graphs, strong
    /// connectivity for directed ones.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let reach = |forward: bool| -> usize {
            let mut seen = vec![false; self.n];
            let mut stack = vec![0usize];
            seen[0] = true;
            let mut count = 1;
            while let Some(u) = stack.pop() {
                for e in &self.edges {
                    let (a, b) = if forward {
                        (e.source, e.sink)
                    } else {
                        (e.sink, e.source)
                    };
                    let next = if a == u {
                        Some(b)
                    } else if !self.directed && b == u {
                        Some(a)
                    } else {
                        None
                    };
                    if let Some(v) = next {
                        if !seen[v] {
                            seen[v] = true;
                            count += 1;
                            stack.push(v);
                        }
                    }
                }
            }
            count
        };
        if self.directed {
            reach(true) == self.n && reach(false) == self.n
        } else {
            reach(true) == self.n
        }
    }
}

fn check_edge(n: usize, i: usize, j: usize, w: f64) -> Result<(), GraphError> {
    if i == j {
        return Err(GraphError::SelfLoop(i));
    }
    if i >= n {
        return Err(GraphError::NodeOutOfRange(i, n));
    }
    if j >= n {
        return Err(GraphError::NodeOutOfRange(j, n));
    }
    if !(w > 0.0) || !w.is_finite() {
        return Err(GraphError::NonPositiveWeight(w));
    }
    Ok(())
}

/// A fixed orientation and index for every undirected edge. The orientation
/// is assigned once (source = smaller node id) and never changes, so the
/// incidence matrix is identical across runs.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeNumbering {
    oriented: Vec<(usize, usize)>,
}

impl EdgeNumbering {
    pub fn len(&self) -> usize {
        self.oriented.len()
    }

    pub fn is_empty(&self) -> bool {
        self.oriented.is_empty()
    }

    /// (source, sink) of edge `e`.
    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.oriented[e]
    }

    /// Index of the edge joining `i` and `j`, regardless of orientation.
    pub fn index_of(&self, i: usize, j: usize) -> Option<usize> {
        self.oriented
            .iter()
            .position(|&(s, t)| (s, t) == (i, j) || (s, t) == (j, i))
    }
}

/// The subset of nodes carrying global position sensors (or true-scale
/// knowledge in the scale estimator).
#[derive(Debug, Clone, PartialEq)]
pub struct LeaderSet {
    ids: Vec<usize>,
}

impl LeaderSet {
    pub fn new(mut ids: Vec<usize>, n_nodes: usize) -> Result<Self, GraphError> {
        if ids.is_empty() {
            return Err(GraphError::NoLeaders);
        }
        ids.sort_unstable();
        ids.dedup();
        if let Some(&bad) = ids.iter().find(|&&i| i >= n_nodes) {
            return Err(GraphError::NodeOutOfRange(bad, n_nodes));
        }
        Ok(Self { ids })
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.ids.binary_search(&i).is_ok()
    }

    /// N x |V_g| selection matrix whose columns are the identity columns
    /// `e_i` for each leader `i`; `E^T z` extracts the leader entries.
    pub fn selection_matrix(&self, n_nodes: usize) -> Result<DMatrix<f64>, GraphError> {
        if let Some(&bad) = self.ids.iter().find(|&&i| i >= n_nodes) {
            return Err(GraphError::NodeOutOfRange(bad, n_nodes));
        }
        let mut e = DMatrix::zeros(n_nodes, self.ids.len());
        for (col, &i) in self.ids.iter().enumerate() {
            e[(i, col)] = 1.0;
        }
        Ok(e)
    }
}
