//! Edge paths, triangle loops and the diagonal product of two loops.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{bary_vertex_id, product_vertex_id, Complex, Simplex, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LoopError {
    #[error("empty edge path")]
    EmptyPath,
    #[error("path {name} runs {found_start}→{found_end}, expected {want_start}→{want_end}")]
    EndpointMismatch {
        name: &'static str,
        want_start: VertexId,
        want_end: VertexId,
        found_start: VertexId,
        found_end: VertexId,
    },
    #[error("path {0} is not an edge path of the complex")]
    InvalidPath(&'static str),
    #[error("edge loop does not return to its start")]
    NotClosed,
}

/// True iff `path` is a nonempty edge path of `c` without stationary steps.
pub fn validate_path(c: &Complex, path: &[VertexId]) -> bool {
    match path {
        [] => false,
        [v] => c.contains_vertex(v),
        _ => path.windows(2).all(|w| c.has_edge(&w[0], &w[1])),
    }
}

/// A nonempty vertex sequence with no repeated consecutive vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<VertexId>", into = "Vec<VertexId>")]
pub struct EdgePath(Vec<VertexId>);

impl EdgePath {
    /// Stationary steps are dropped.
    pub fn new<I, V>(vertices: I) -> Result<Self, LoopError>
    where
        I: IntoIterator<Item = V>,
        V: Into<VertexId>,
    {
        let mut out: Vec<VertexId> = Vec::new();
        for v in vertices {
            let v = v.into();
            if out.last() != Some(&v) {
                out.push(v);
            }
        }
        if out.is_empty() {
            return Err(LoopError::EmptyPath);
        }
        Ok(EdgePath(out))
    }

    pub fn constant(v: VertexId) -> Self {
        EdgePath(vec![v])
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn start(&self) -> &VertexId {
        &self.0[0]
    }

    pub fn end(&self) -> &VertexId {
        self.0.last().expect("nonempty")
    }

    /// Number of edges traversed.
    pub fn edge_count(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_valid_in(&self, c: &Complex) -> bool {
        validate_path(c, &self.0)
    }

    /// The path's vertices and edges as a complex.
    pub fn to_complex(&self) -> Complex {
        Complex::path_complex(&self.0)
    }

    /// Concatenation, merging the shared junction vertex.
    pub fn concat(&self, next: &EdgePath) -> EdgePath {
        EdgePath::new(self.0.iter().chain(next.0.iter()).cloned()).expect("nonempty")
    }

    pub fn reversed(&self) -> EdgePath {
        EdgePath(self.0.iter().rev().cloned().collect())
    }

    /// The image path in `Bary(c)`: each edge `{x,y}` becomes `x, {x,y}, y`.
    pub fn subdivided(&self) -> EdgePath {
        let mut out = vec![bary_vertex_id(&Simplex::vertex(self.0[0].clone()))];
        for w in self.0.windows(2) {
            out.push(bary_vertex_id(&Simplex::from_set([w[0].clone(), w[1].clone()])));
            out.push(bary_vertex_id(&Simplex::vertex(w[1].clone())));
        }
        EdgePath(out)
    }

    /// Vertex-wise image, with stationary steps removed.
    pub fn map_vertices(&self, f: impl FnMut(&VertexId) -> VertexId) -> EdgePath {
        EdgePath::new(self.0.iter().map(f)).expect("nonempty")
    }
}

impl TryFrom<Vec<VertexId>> for EdgePath {
    type Error = LoopError;
    fn try_from(v: Vec<VertexId>) -> Result<Self, Self::Error> {
        EdgePath::new(v)
    }
}

impl From<EdgePath> for Vec<VertexId> {
    fn from(p: EdgePath) -> Self {
        p.0
    }
}

/// A closed edge path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeLoop(EdgePath);

impl EdgeLoop {
    pub fn new(path: EdgePath) -> Result<Self, LoopError> {
        if path.start() != path.end() {
            return Err(LoopError::NotClosed);
        }
        Ok(EdgeLoop(path))
    }

    pub fn base(&self) -> &VertexId {
        self.0.start()
    }

    pub fn path(&self) -> &EdgePath {
        &self.0
    }

    pub fn vertices(&self) -> &[VertexId] {
        self.0.vertices()
    }

    pub fn edge_count(&self) -> usize {
        self.0.edge_count()
    }
}

/// Three designated vertices joined cyclically by three edge paths.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TriangleLoop {
    corners: [VertexId; 3],
    paths: [EdgePath; 3],
}

const PATH_NAMES: [&str; 3] = ["p01", "p12", "p20"];

impl TriangleLoop {
    /// Checks endpoints and path validity in `c`.
    pub fn new(c: &Complex, corners: [VertexId; 3], paths: [EdgePath; 3]) -> Result<Self, LoopError> {
        for k in 0..3 {
            let (want_start, want_end) = (&corners[k], &corners[(k + 1) % 3]);
            let p = &paths[k];
            if p.start() != want_start || p.end() != want_end {
                return Err(LoopError::EndpointMismatch {
                    name: PATH_NAMES[k],
                    want_start: want_start.clone(),
                    want_end: want_end.clone(),
                    found_start: p.start().clone(),
                    found_end: p.end().clone(),
                });
            }
        }
        for (k, p) in paths.iter().enumerate() {
            if !p.is_valid_in(c) {
                return Err(LoopError::InvalidPath(PATH_NAMES[k]));
            }
        }
        Ok(TriangleLoop { corners, paths })
    }

    /// The loop sitting at one vertex.
    pub fn constant(v: VertexId) -> Self {
        TriangleLoop {
            corners: [v.clone(), v.clone(), v.clone()],
            paths: [
                EdgePath::constant(v.clone()),
                EdgePath::constant(v.clone()),
                EdgePath::constant(v),
            ],
        }
    }

    pub fn corners(&self) -> &[VertexId; 3] {
        &self.corners
    }

    pub fn corner(&self, i: usize) -> &VertexId {
        &self.corners[i]
    }

    pub fn paths(&self) -> &[EdgePath; 3] {
        &self.paths
    }

    /// The path joining corners `i` and `j` (either order), stored as
    /// `p01`, `p12` or `p20`.
    pub fn path_between(&self, i: usize, j: usize) -> &EdgePath {
        match (i.min(j), i.max(j)) {
            (0, 1) => &self.paths[0],
            (1, 2) => &self.paths[1],
            (0, 2) => &self.paths[2],
            _ => panic!("no path between corners {i} and {j}"),
        }
    }

    pub fn is_valid_in(&self, c: &Complex) -> bool {
        TriangleLoop::new(c, self.corners.clone(), self.paths.clone()).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.paths.iter().map(EdgePath::edge_count).sum()
    }

    /// `p01 · p12 · p20`, based at the first corner.
    pub fn as_edge_loop(&self) -> EdgeLoop {
        let path = self.paths[0].concat(&self.paths[1]).concat(&self.paths[2]);
        EdgeLoop::new(path).expect("corners close the loop")
    }

    /// The loop's image in `Bary(c)`.
    pub fn subdivided(&self) -> TriangleLoop {
        TriangleLoop {
            corners: self
                .corners
                .clone()
                .map(|v| bary_vertex_id(&Simplex::vertex(v))),
            paths: self.paths.clone().map(|p| p.subdivided()),
        }
    }

    /// Vertex-wise image under `f`. Validity in the target is not checked.
    pub fn map_vertices(&self, mut f: impl FnMut(&VertexId) -> VertexId) -> TriangleLoop {
        TriangleLoop {
            corners: self.corners.clone().map(|v| f(&v)),
            paths: self.paths.clone().map(|p| p.map_vertices(&mut f)),
        }
    }
}

/// `p ⋆ q`: traverse `p` with the second coordinate fixed at `q`'s start,
/// then `q` with the first coordinate fixed at `p`'s end.
pub fn diagonal_path(p: &EdgePath, q: &EdgePath) -> EdgePath {
    let first_leg = p.vertices().iter().map(|x| product_vertex_id(x, q.start()));
    let second_leg = q.vertices().iter().map(|y| product_vertex_id(p.end(), y));
    EdgePath::new(first_leg.chain(second_leg)).expect("nonempty")
}

/// `λ₁ ⋆ λ₂` in `a × b`.
pub fn diagonal_product(l1: &TriangleLoop, l2: &TriangleLoop) -> TriangleLoop {
    let corners = [0, 1, 2].map(|i| product_vertex_id(&l1.corners[i], &l2.corners[i]));
    let paths = [0, 1, 2].map(|k| diagonal_path(&l1.paths[k], &l2.paths[k]));
    TriangleLoop { corners, paths }
}

/// Serialized form of a triangle loop.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopJson {
    pub p01: Vec<VertexId>,
    pub p12: Vec<VertexId>,
    pub p20: Vec<VertexId>,
    pub v: [VertexId; 3],
}

impl From<&TriangleLoop> for LoopJson {
    fn from(l: &TriangleLoop) -> Self {
        LoopJson {
            p01: l.paths[0].vertices().to_vec(),
            p12: l.paths[1].vertices().to_vec(),
            p20: l.paths[2].vertices().to_vec(),
            v: l.corners.clone(),
        }
    }
}

impl LoopJson {
    pub fn into_loop(self, c: &Complex) -> Result<TriangleLoop, LoopError> {
        let paths = [EdgePath::new(self.p01)?, EdgePath::new(self.p12)?, EdgePath::new(self.p20)?];
        TriangleLoop::new(c, self.v, paths)
    }
}
