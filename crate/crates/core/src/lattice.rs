//! Geometry of the L×L torus with spins on edges.
//!
//! Vertices sit on an L×L square grid with periodic boundaries; each vertex
//! carries two outgoing edges (one horizontal, one vertical), giving 2L²
//! edge-spins. Star operators act on the four edges meeting a vertex,
//! plaquette operators on the four edges bounding a face. Products of σ^z
//! along non-contractible loops commute with every star, which is what
//! forces two-spin reduced states to be diagonal.
//!
//! Indexing is fixed so that runs are reproducible byte for byte:
//! vertex (r, c) ↦ r·L + c, and vertex v owns edge 2v (horizontal,
//! towards c+1) and edge 2v+1 (vertical, towards r+1).

use crate::error::{Error, Result};

/// Which canonical two-spin pair to analyse.
///
/// `VertexSharing` is two collinear edges meeting at a common vertex; the
/// product of their σ^z maps to a distance-2 Ising two-point function
/// (the shared vertex cancels). `PlaquetteParallel` is the two parallel
/// horizontal edges of one plaquette — next-nearest neighbours on the dual
/// lattice — whose product maps to a four-point function over an
/// elementary square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpinPairKind {
    VertexSharing,
    PlaquetteParallel,
}

impl SpinPairKind {
    /// Ising vertex support of the pair as (row, col) offsets from an
    /// arbitrary origin. Negative offsets wrap around the torus.
    pub fn support_offsets(self) -> &'static [(i64, i64)] {
        match self {
            SpinPairKind::VertexSharing => &[(0, -1), (0, 1)],
            SpinPairKind::PlaquetteParallel => &[(0, 0), (0, 1), (1, 0), (1, 1)],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SpinPairKind::VertexSharing => "vertex_sharing",
            SpinPairKind::PlaquetteParallel => "plaquette_parallel",
        }
    }
}

/// L×L torus: vertices, edge-spins, star/plaquette supports and the
/// non-contractible σ^z loops.
#[derive(Debug, Clone)]
pub struct TorusLattice {
    l: usize,
    /// Edge → ordered endpoint pair (tail vertex, head vertex).
    edge_endpoints: Vec<(usize, usize)>,
    /// Vertex → the 4 edges of its star operator.
    star_edges: Vec<[usize; 4]>,
    /// Plaquette → its 4 boundary edges.
    plaquette_edges: Vec<[usize; 4]>,
    /// The 2L non-contractible σ^z loops (L horizontal rows, then L columns).
    z_loops: Vec<Vec<usize>>,
}

impl TorusLattice {
    pub fn linear_size(&self) -> usize {
        self.l
    }

    pub fn n_vertices(&self) -> usize {
        self.l * self.l
    }

    pub fn n_edges(&self) -> usize {
        2 * self.l * self.l
    }

    pub fn n_plaquettes(&self) -> usize {
        self.l * self.l
    }

    /// At L = 2 two distinct edges join the same vertex pair. Permitted,
    /// but callers should prefer L ≥ 3 for production sweeps.
    pub fn has_doubled_bonds(&self) -> bool {
        self.l == 2
    }

    pub fn vertex(&self, row: usize, col: usize) -> usize {
        (row % self.l) * self.l + (col % self.l)
    }

    /// Edge from (row, col) towards (row, col+1).
    pub fn horizontal_edge(&self, row: usize, col: usize) -> usize {
        2 * self.vertex(row, col)
    }

    /// Edge from (row, col) towards (row+1, col).
    pub fn vertical_edge(&self, row: usize, col: usize) -> usize {
        2 * self.vertex(row, col) + 1
    }

    pub fn edge_endpoints(&self, edge: usize) -> Result<(usize, usize)> {
        self.edge_endpoints
            .get(edge)
            .copied()
            .ok_or(Error::IndexOutOfRange {
                what: "edge",
                index: edge,
                size: self.n_edges(),
            })
    }

    pub fn star_edges(&self, vertex: usize) -> Result<[usize; 4]> {
        self.star_edges
            .get(vertex)
            .copied()
            .ok_or(Error::IndexOutOfRange {
                what: "vertex",
                index: vertex,
                size: self.n_vertices(),
            })
    }

    pub fn plaquette_edges(&self, plaquette: usize) -> Result<[usize; 4]> {
        self.plaquette_edges
            .get(plaquette)
            .copied()
            .ok_or(Error::IndexOutOfRange {
                what: "plaquette",
                index: plaquette,
                size: self.n_plaquettes(),
            })
    }

    pub fn z_loops(&self) -> &[Vec<usize>] {
        &self.z_loops
    }

    /// Star support as an edge bitmask (valid because 2L² ≤ 64 for L ≤ 5).
    pub fn star_mask(&self, vertex: usize) -> Result<u64> {
        let edges = self.star_edges(vertex)?;
        Ok(edges.iter().fold(0u64, |m, &e| m | (1u64 << e)))
    }

    pub fn plaquette_mask(&self, plaquette: usize) -> Result<u64> {
        let edges = self.plaquette_edges(plaquette)?;
        Ok(edges.iter().fold(0u64, |m, &e| m | (1u64 << e)))
    }

    /// Vertices appearing an odd number of times among the endpoints of
    /// `edges`. The Ising moment over this set equals the ground-state
    /// expectation of the σ^z product over the input edges, because a
    /// vertex shared by two edges contributes θ² = 1.
    pub fn edges_to_vertex_support(&self, edges: &[usize]) -> Result<Vec<usize>> {
        let mut parity = vec![false; self.n_vertices()];
        for &e in edges {
            let (a, b) = self.edge_endpoints(e)?;
            parity[a] = !parity[a];
            parity[b] = !parity[b];
        }
        Ok((0..self.n_vertices()).filter(|&v| parity[v]).collect())
    }

    /// Canonical representative edge pair for a kind. Translation
    /// invariance makes any representative equivalent; this one is pinned
    /// at vertex 0 / plaquette 0.
    pub fn resolve_pair(&self, kind: SpinPairKind) -> (usize, usize) {
        match kind {
            SpinPairKind::VertexSharing => {
                // The two horizontal edges through vertex (0, 0).
                (self.horizontal_edge(0, self.l - 1), self.horizontal_edge(0, 0))
            }
            SpinPairKind::PlaquetteParallel => {
                // The two horizontal edges of plaquette (0, 0).
                (self.horizontal_edge(0, 0), self.horizontal_edge(1, 0))
            }
        }
    }
}

/// Build the torus geometry for linear size `l ≥ 2`.
pub fn build_lattice(l: usize) -> Result<TorusLattice> {
    if l < 2 {
        return Err(Error::LatticeTooSmall(l));
    }
    let n_vertices = l * l;
    let vertex = |r: usize, c: usize| (r % l) * l + (c % l);

    let mut edge_endpoints = Vec::with_capacity(2 * n_vertices);
    for r in 0..l {
        for c in 0..l {
            edge_endpoints.push((vertex(r, c), vertex(r, c + 1)));
            edge_endpoints.push((vertex(r, c), vertex(r + 1, c)));
        }
    }
    // edge ids follow the vertex layout above
    let h = |r: usize, c: usize| 2 * vertex(r, c);
    let v = |r: usize, c: usize| 2 * vertex(r, c) + 1;

    let mut star_edges = Vec::with_capacity(n_vertices);
    let mut plaquette_edges = Vec::with_capacity(n_vertices);
    for r in 0..l {
        for c in 0..l {
            star_edges.push([h(r, c), h(r, c + l - 1), v(r, c), v(r + l - 1, c)]);
            plaquette_edges.push([h(r, c), h(r + 1, c), v(r, c), v(r, c + 1)]);
        }
    }

    let mut z_loops = Vec::with_capacity(2 * l);
    for r in 0..l {
        z_loops.push((0..l).map(|c| h(r, c)).collect());
    }
    for c in 0..l {
        z_loops.push((0..l).map(|r| v(r, c)).collect());
    }

    Ok(TorusLattice {
        l,
        edge_endpoints,
        star_edges,
        plaquette_edges,
        z_loops,
    })
}
