//! Reductions between the problems and the polynomial-time HLF solver.

use crate::error::{shape, Error, Result};
use crate::f2lin::{F2Matrix, F2Vector, Z4Vector};
use crate::graphs::{grid_graph, incidence_matrix, Graph, RootPathTable};
use crate::problems::{HlfInstance, RphpInstance};

/// How an HLF instance built from a graph maps back onto it: HLF indices
/// `0..|V|` are the vertices, `|V| + e` is edge `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HlfEmbedding {
    graph: Graph,
    coordinates: Option<Vec<(usize, usize)>>,
}

impl HlfEmbedding {
    pub fn new(graph: Graph) -> Self {
        Self {
            graph,
            coordinates: None,
        }
    }

    /// Places a subgraph of the `width x height` grid in the doubled grid:
    /// vertex `(r, c)` at `(2r, 2c)`, each edge at its endpoints' midpoint.
    pub fn on_grid(graph: Graph, width: usize, height: usize) -> Result<Self> {
        let grid = grid_graph(width, height)?;
        if graph.vertex_count() != width * height {
            return Err(Error::Domain(format!(
                "{} vertices cannot fill a {width}x{height} grid",
                graph.vertex_count()
            )));
        }
        if let Some(e) = graph.edges().iter().find(|e| !grid.edges().contains(e)) {
            return Err(Error::Domain(format!("edge {e:?} is not a grid edge")));
        }
        let at = |v: usize| (2 * (v / width), 2 * (v % width));
        let mut coords: Vec<(usize, usize)> = (0..graph.vertex_count()).map(at).collect();
        for &(u, v) in graph.edges() {
            let ((r1, c1), (r2, c2)) = (at(u), at(v));
            coords.push(((r1 + r2) / 2, (c1 + c2) / 2));
        }
        Ok(Self {
            graph,
            coordinates: Some(coords),
        })
    }

    /// Arbitrary coordinates, one per HLF index.
    pub fn with_coordinates(graph: Graph, coords: Vec<(usize, usize)>) -> Result<Self> {
        if coords.len() != graph.vertex_count() + graph.edge_count() {
            return Err(shape(format!("{} coordinates for {} indices", coords.len(), graph.vertex_count() + graph.edge_count())));
        }
        Ok(Self {
            graph,
            coordinates: Some(coords),
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }
    pub fn dimension(&self) -> usize {
        self.graph.vertex_count() + self.graph.edge_count()
    }
    pub fn vertex_index(&self, v: usize) -> usize {
        v
    }
    pub fn edge_index(&self, e: usize) -> usize {
        self.graph.vertex_count() + e
    }
    pub fn coordinates(&self) -> Option<&[(usize, usize)]> {
        self.coordinates.as_deref()
    }
}

/// `A = [[0, M], [M^T, 0]]` with `M` the incidence matrix, `b = (x, 0)`.
pub fn rphp_to_hlf(inst: &RphpInstance) -> (HlfInstance, HlfEmbedding) {
    let g = inst.graph();
    let (nv, ne) = (g.vertex_count(), g.edge_count());
    let mut a = F2Matrix::zeros(nv + ne, nv + ne);
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        for w in [u, v] {
            a.set(w, nv + e, true);
            a.set(nv + e, w, true);
        }
    }
    let b = Z4Vector::from_f2(inst.x()).concat(&Z4Vector::zeros(ne));
    let hlf = HlfInstance::new(a, b).expect("symmetric by construction");
    debug_assert_eq!(incidence_matrix(g).rank() + 1, nv);
    (hlf, HlfEmbedding::new(g.clone()))
}

/// Same as [`rphp_to_hlf`] with grid coordinates attached.
pub fn rphp_to_hlf_on_grid(inst: &RphpInstance, width: usize, height: usize) -> Result<(HlfInstance, HlfEmbedding)> {
    let (hlf, _) = rphp_to_hlf(inst);
    Ok((hlf, HlfEmbedding::on_grid(inst.graph().clone(), width, height)?))
}

/// Splits `p = (y, d)`.
pub fn hlf_solution_to_rphp(p: &F2Vector, emb: &HlfEmbedding) -> Result<(F2Vector, F2Vector)> {
    if p.len() != emb.dimension() {
        return Err(shape(format!("solution has {} bits, embedding has {}", p.len(), emb.dimension())));
    }
    let nv = emb.graph.vertex_count();
    Ok((p.slice(0, nv), p.slice(nv, p.len())))
}

/// Solves HLF classically: `L_q` is the kernel of `A` with `b mod 2` added to
/// its diagonal, `q` is `{0, 2}`-valued and linear there, so `p` solves
/// `p . u = q(u) / 2` over a kernel basis.
pub fn solve_hlf_reference(inst: &HlfInstance) -> Result<F2Vector> {
    let n = inst.n();
    let basis = inst.lq_basis();
    let mut rhs = Vec::with_capacity(basis.len());
    for u in &basis {
        let q = inst.eval_q(u)?;
        if q % 2 == 1 {
            return Err(Error::Consistency(format!("q({u}) = {q} is odd on L_q")));
        }
        rhs.push(q == 2);
    }
    if basis.is_empty() {
        return Ok(F2Vector::zeros(n));
    }
    let k = F2Matrix::from_rows(basis, n)?;
    k.solve(&F2Vector::from_bits(rhs))?
        .ok_or_else(|| Error::Consistency("kernel basis is not independent".into()))
}

/// True iff every interaction in `A` joins two indices at grid-adjacent
/// coordinates.
pub fn is_2d_supported(inst: &HlfInstance, emb: &HlfEmbedding) -> Result<bool> {
    let coords = emb
        .coordinates()
        .ok_or_else(|| Error::Domain("embedding has no grid coordinates".into()))?;
    coordinates_are_grid_local(inst, coords)
}

pub fn coordinates_are_grid_local(inst: &HlfInstance, coords: &[(usize, usize)]) -> Result<bool> {
    let n = inst.n();
    if coords.len() != n {
        return Err(shape(format!("{} coordinates for dimension {n}", coords.len())));
    }
    let mut sorted = coords.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != n {
        return Ok(false);
    }
    for i in 0..n {
        for j in inst.a().row(i).ones_indices().filter(|&j| j > i) {
            let (a, b) = (coords[i], coords[j]);
            if a.0.abs_diff(b.0) + a.1.abs_diff(b.1) != 1 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Block-diagonal composition.
pub fn direct_sum_hlf(parts: &[HlfInstance]) -> HlfInstance {
    let blocks: Vec<&F2Matrix> = parts.iter().map(HlfInstance::a).collect();
    let a = F2Matrix::block_diagonal(&blocks);
    let b = parts.iter().fold(Z4Vector::zeros(0), |acc, p| acc.concat(p.b()));
    HlfInstance::new(a, b).expect("blocks are symmetric")
}

pub fn split_hlf_solution(p: &F2Vector, sizes: &[usize]) -> Result<Vec<F2Vector>> {
    p.split(sizes)
}

/// Places block layouts left to right with an empty column between
/// neighbours, so no two blocks touch.
pub fn direct_sum_coordinates(layouts: &[&[(usize, usize)]]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut offset = 0;
    for layout in layouts {
        out.extend(layout.iter().map(|&(r, c)| (r, c + offset)));
        offset += layout.iter().map(|&(_, c)| c + 1).max().unwrap_or(0) + 1;
    }
    out
}

/// Turns a relaxed solution `(y, d)` on a tree into a parity-halving output:
/// `y` followed by `d_j x_i` for every vertex `i` and edge `j` on its root
/// path, vertex by vertex. The appended block has weight `<z, x>` where `z`
/// is `d` integrated from the root.
pub fn assemble_php_output(x: &F2Vector, y: &F2Vector, d: &F2Vector, paths: &RootPathTable) -> Result<F2Vector> {
    let nv = paths.vertex_count();
    if x.len() != nv || y.len() != nv {
        return Err(shape(format!("x and y must have {nv} bits, got {} and {}", x.len(), y.len())));
    }
    if let Some(&e) = (0..nv).flat_map(|v| paths.path(v)).find(|&&e| e >= d.len()) {
        return Err(Error::Structure(format!("root path uses edge {e} but d has {} bits", d.len())));
    }
    let appended = (0..nv).flat_map(|i| paths.path(i).iter().map(move |&j| x.get(i) && d.get(j)));
    Ok(F2Vector::from_bits(y.iter().chain(appended)))
}
