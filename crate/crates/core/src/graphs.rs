//! Graphs carrying relaxed-parity-halving topology: grids, their low-diameter
//! spanning trees, incidence matrices, root-path tables and the CNOT layer
//! schedule that prepares a poor man's cat state.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2lin::{F2Matrix, F2Vector};

/// Simple undirected graph. Edges are stored as `(u, v)` with `u < v` in a
/// fixed order; edge indices refer to that order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

/// Wire form: `{"vertices": N, "edges": [[u, v], ...]}`.
#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(g: GraphJson) -> Result<Self> {
        Graph::new(g.vertices, g.edges.into_iter().map(|[u, v]| (u, v)).collect())
    }
}

impl From<Graph> for GraphJson {
    fn from(g: Graph) -> Self {
        GraphJson {
            vertices: g.vertex_count,
            edges: g.edges.into_iter().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl Graph {
    /// Validates and normalizes each edge to `u < v`, keeping the given order.
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        let mut normalized = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u == v {
                return Err(Error::Structure(format!("self-loop at vertex {u}")));
            }
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::Structure(format!(
                    "edge ({u}, {v}) out of range for {vertex_count} vertices"
                )));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::Structure(format!("duplicate edge {e:?}")));
            }
            normalized.push(e);
        }
        Ok(Self {
            vertex_count,
            edges: normalized,
        })
    }

    pub fn path(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument("path needs at least one vertex".into()));
        }
        Self::new(n, (1..n).map(|i| (i - 1, i)).collect())
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Argument("cycle needs at least three vertices".into()));
        }
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Per vertex, the incident `(neighbour, edge index)` pairs in edge order.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
        adj
    }

    /// BFS distances from `source`; `None` for unreachable vertices.
    pub fn bfs_distances(&self, source: usize) -> Vec<Option<usize>> {
        let adj = self.adjacency();
        let mut dist = vec![None; self.vertex_count];
        let mut queue = VecDeque::from([source]);
        dist[source] = Some(0);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].expect("queued vertices have distances");
            for &(v, _) in &adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count == 0 || self.bfs_distances(0).iter().all(Option::is_some)
    }

    pub fn is_tree(&self) -> bool {
        self.vertex_count > 0 && self.edges.len() + 1 == self.vertex_count && self.is_connected()
    }

    /// Longest shortest path; `None` when disconnected.
    pub fn diameter(&self) -> Option<usize> {
        (0..self.vertex_count)
            .map(|s| {
                self.bfs_distances(s)
                    .into_iter()
                    .try_fold(0, |acc, d| d.map(|d| acc.max(d)))
            })
            .try_fold(0, |acc, d| d.map(|d| acc.max(d)))
    }

    pub(crate) fn require_connected(&self) -> Result<()> {
        if self.vertex_count == 0 || !self.is_connected() {
            return Err(Error::Structure("graph must be non-empty and connected".into()));
        }
        Ok(())
    }
}

fn check_dims(width: usize, height: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::Argument(format!("grid dimensions must be positive, got {width}x{height}")));
    }
    Ok(())
}

/// The `width x height` lattice. Vertices are row-major from the top-left
/// corner (`r * width + c`); edges are listed per vertex in row-major order,
/// right neighbour first, then the one below.
pub fn grid_graph(width: usize, height: usize) -> Result<Graph> {
    check_dims(width, height)?;
    let mut edges = Vec::new();
    for r in 0..height {
        for c in 0..width {
            let v = r * width + c;
            if c + 1 < width {
                edges.push((v, v + 1));
            }
            if r + 1 < height {
                edges.push((v, v + width));
            }
        }
    }
    Graph::new(width * height, edges)
}

/// Spanning tree of the grid made of the whole top row plus every column.
///
/// Edge order: top-row edges left to right, then each column's vertical
/// edges top to bottom, columns left to right.
pub fn grid_spanning_tree(width: usize, height: usize) -> Result<Graph> {
    check_dims(width, height)?;
    let mut edges: Vec<_> = (0..width.saturating_sub(1)).map(|c| (c, c + 1)).collect();
    for c in 0..width {
        for r in 0..height - 1 {
            edges.push((r * width + c, (r + 1) * width + c));
        }
    }
    Graph::new(width * height, edges)
}

/// `|V| x |E|` vertex-edge incidence matrix over GF(2).
pub fn incidence_matrix(g: &Graph) -> F2Matrix {
    let mut m = F2Matrix::zeros(g.vertex_count(), g.edge_count());
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        m.set(u, e, true);
        m.set(v, e, true);
    }
    m
}

/// For every vertex, the edges on the unique tree path from the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootPathTable {
    root: usize,
    path_edges: Vec<Vec<usize>>,
}

impl RootPathTable {
    pub fn root(&self) -> usize {
        self.root
    }

    /// Edge indices (ascending) on the root-to-`v` path.
    pub fn path(&self, v: usize) -> &[usize] {
        &self.path_edges[v]
    }

    pub fn vertex_count(&self) -> usize {
        self.path_edges.len()
    }

    pub fn max_path_len(&self) -> usize {
        self.path_edges.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn total_path_len(&self) -> usize {
        self.path_edges.iter().map(Vec::len).sum()
    }

    /// Rebuilds `z` from edge differences `d` with `z_root = 0`.
    pub fn reconstruct(&self, d: &F2Vector) -> F2Vector {
        F2Vector::from_bits(
            self.path_edges
                .iter()
                .map(|p| p.iter().fold(false, |acc, &e| acc ^ d.get(e))),
        )
    }
}

pub fn root_paths(tree: &Graph, root: usize) -> Result<RootPathTable> {
    if !tree.is_tree() {
        return Err(Error::Structure("root paths need a connected acyclic graph".into()));
    }
    if root >= tree.vertex_count() {
        return Err(Error::Argument(format!("root {root} out of range")));
    }
    let adj = tree.adjacency();
    let mut path_edges: Vec<Option<Vec<usize>>> = vec![None; tree.vertex_count()];
    path_edges[root] = Some(Vec::new());
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &(v, e) in &adj[u] {
            if path_edges[v].is_none() {
                let mut p = path_edges[u].clone().expect("visited");
                p.push(e);
                p.sort_unstable();
                path_edges[v] = Some(p);
                queue.push_back(v);
            }
        }
    }
    Ok(RootPathTable {
        root,
        path_edges: path_edges.into_iter().map(|p| p.expect("tree is connected")).collect(),
    })
}

/// One CNOT of the poor-man's-cat circuit: vertex qubit onto edge qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Cnot {
    pub vertex: usize,
    pub edge: usize,
}

/// Parallel layers of CNOTs; no qubit is touched twice within a layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerSchedule {
    pub layers: Vec<Vec<Cnot>>,
}

impl LayerSchedule {
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// Checks each layer for qubit clashes and that every edge receives
    /// exactly one CNOT from each endpoint.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let mut expected: Vec<Cnot> = g
            .edges()
            .iter()
            .enumerate()
            .flat_map(|(e, &(u, v))| [Cnot { vertex: u, edge: e }, Cnot { vertex: v, edge: e }])
            .collect();
        let mut got: Vec<Cnot> = self.layers.iter().flatten().copied().collect();
        expected.sort_unstable_by_key(|c| (c.edge, c.vertex));
        got.sort_unstable_by_key(|c| (c.edge, c.vertex));
        if expected != got {
            return false;
        }
        self.layers.iter().all(|layer| {
            let mut vertices = std::collections::HashSet::new();
            let mut edges = std::collections::HashSet::new();
            layer
                .iter()
                .all(|c| vertices.insert(c.vertex) && edges.insert(c.edge))
        })
    }
}

/// Greedy edge colouring of the vertex/edge-qubit double graph.
///
/// CNOTs are taken in order `(u -> e), (v -> e)` for each edge `e = (u, v)`;
/// each gets the smallest layer free at both its qubits. A CNOT clashes with
/// at most `deg(u) - 1` others at the vertex and one at the edge qubit, so at
/// most `max(Δ, 2) + 1` layers are used.
pub fn cnot_layers(g: &Graph) -> LayerSchedule {
    let mut vertex_busy: Vec<Vec<bool>> = vec![Vec::new(); g.vertex_count()];
    let mut edge_busy: Vec<Vec<bool>> = vec![Vec::new(); g.edge_count()];
    let mut layers: Vec<Vec<Cnot>> = Vec::new();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        for vertex in [u, v] {
            let free = |busy: &Vec<bool>, c: usize| !busy.get(c).copied().unwrap_or(false);
            let color = (0..)
                .find(|&c| free(&vertex_busy[vertex], c) && free(&edge_busy[e], c))
                .expect("unbounded search");
            for busy in [&mut vertex_busy[vertex], &mut edge_busy[e]] {
                if busy.len() <= color {
                    busy.resize(color + 1, false);
                }
                busy[color] = true;
            }
            if layers.len() <= color {
                layers.resize(color + 1, Vec::new());
            }
            layers[color].push(Cnot { vertex, edge: e });
        }
    }
    LayerSchedule { layers }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn grid_sizes() {
        let g = grid_graph(2, 2).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (4, 4));
        let g = grid_graph(3, 3).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (9, 12));
        assert_eq!(grid_graph(1, 5).unwrap(), Graph::path(5).unwrap());
        assert_eq!(grid_graph(5, 1).unwrap(), Graph::path(5).unwrap());
        assert!(grid_graph(0, 3).is_err());
        assert!(grid_spanning_tree(3, 0).is_err());
    }

    #[test]
    fn spanning_tree_2x2_edges() {
        let t = grid_spanning_tree(2, 2).unwrap();
        assert_eq!(t.edges(), &[(0, 1), (0, 2), (1, 3)]);
    }

    #[test]
    fn spanning_tree_properties() {
        for w in 1..=7 {
            for h in 1..=7 {
                let t = grid_spanning_tree(w, h).unwrap();
                assert_eq!(t.edge_count(), w * h - 1);
                assert!(t.is_tree());
                assert!(t.max_degree() <= 3);
                let grid = grid_graph(w, h).unwrap();
                assert!(t.edges().iter().all(|e| grid.edges().contains(e)));
                assert_eq!(incidence_matrix(&t).rank(), w * h - 1);
            }
        }
        let t = grid_spanning_tree(5, 5).unwrap();
        // bottom of the first column to bottom of the last one
        assert_eq!(t.diameter().unwrap(), 12);
        assert!(root_paths(&t, 0).unwrap().max_path_len() <= 10);
        assert_eq!(t.max_degree(), 3);
    }

    #[test]
    fn incidence_columns() {
        let m = incidence_matrix(&Graph::path(3).unwrap());
        assert_eq!(m.column(0).to_string(), "110");
        assert_eq!(m.column(1).to_string(), "011");
        let g = grid_graph(4, 3).unwrap();
        let m = incidence_matrix(&g);
        assert!((0..g.edge_count()).all(|e| m.column(e).weight() == 2));
    }

    fn random_connected_graph(n: usize, extra: usize, rng: &mut ChaCha8Rng) -> Graph {
        // random tree plus a few chords
        let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
        for _ in 0..extra {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            let e = (u.min(v), u.max(v));
            if u != v && !edges.iter().any(|&(a, b)| (a.min(b), a.max(b)) == e) {
                edges.push(e);
            }
        }
        Graph::new(n, edges).unwrap()
    }

    #[test]
    fn connected_incidence_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.gen_range(1..=12);
            let g = random_connected_graph(n, rng.gen_range(0..10), &mut rng);
            // Independent check: rank of the Laplacian-free incidence via its transpose.
            assert_eq!(incidence_matrix(&g).rank(), n - 1);
            assert_eq!(incidence_matrix(&g).transpose().rank(), n - 1);
        }
    }

    #[test]
    fn path_root_paths() {
        let p = Graph::path(5).unwrap();
        let t = root_paths(&p, 0).unwrap();
        for k in 0..5 {
            assert_eq!(t.path(k), (0..k).collect::<Vec<_>>().as_slice());
        }
        assert!(root_paths(&Graph::cycle(4).unwrap(), 0).is_err());
    }

    #[test]
    fn grid_tree_root_paths() {
        for s in 2..=8 {
            let t = grid_spanning_tree(s, s).unwrap();
            let paths = root_paths(&t, 0).unwrap();
            assert!(paths.max_path_len() <= 2 * s);
            // Direct summation: vertex (r, c) sits c + r edges from the corner.
            let direct: usize = (0..s).flat_map(|r| (0..s).map(move |c| r + c)).sum();
            assert_eq!(paths.total_path_len(), direct);
        }
    }

    #[test]
    fn reconstruct_recovers_z_up_to_complement() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let w = rng.gen_range(1..6);
            let h = rng.gen_range(1..6);
            let t = grid_spanning_tree(w, h).unwrap();
            let paths = root_paths(&t, 0).unwrap();
            let z = F2Vector::random(w * h, &mut rng);
            let d = F2Vector::from_bits(t.edges().iter().map(|&(u, v)| z.get(u) ^ z.get(v)));
            let rebuilt = paths.reconstruct(&d);
            assert!(rebuilt == z || rebuilt == z.complement());
        }
    }

    #[test]
    fn schedule_small_cases() {
        let single = Graph::path(2).unwrap();
        let s = cnot_layers(&single);
        assert_eq!(s.depth(), 2);
        assert!(s.is_valid_for(&single));
        for n in 2..20 {
            let p = Graph::path(n).unwrap();
            let s = cnot_layers(&p);
            assert!(s.depth() <= 3);
            assert!(s.is_valid_for(&p));
        }
        let t = grid_spanning_tree(6, 6).unwrap();
        let s = cnot_layers(&t);
        assert!(s.depth() <= 4);
        assert!(s.is_valid_for(&t));
    }

    #[test]
    fn graph_json_round_trip() {
        let g = grid_spanning_tree(3, 2).unwrap();
        let json = serde_json::to_string(&g).unwrap();
        assert!(json.starts_with("{\"vertices\":6,\"edges\":[[0,1]"));
        let back: Graph = serde_json::from_str(&json).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<Graph>(r#"{"vertices":2,"edges":[[0,0]]}"#).is_err());
    }

    proptest! {
        #[test]
        fn schedule_is_conflict_free_with_bounded_depth(n in 2usize..30, extra in 0usize..40, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_connected_graph(n, extra, &mut rng);
            let s = cnot_layers(&g);
            prop_assert!(s.is_valid_for(&g));
            prop_assert!(s.depth() <= g.max_degree().max(2) + 1);
        }
    }
}
