//! Abstract simplicial complexes over string vertex ids.
//!
//! A [`Complex`] stores its full, downward-closed simplex set in canonical
//! order (lexicographic on sorted vertex ids), so iteration order and every
//! derived construction are deterministic.

mod map;
mod naming;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use map::{induced_bary_map, SimplicialMap};
pub(crate) use map::lift_assignment;
pub use naming::{bary_vertex_id, product_vertex_id, split_product_id};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("no simplexes given")]
    EmptyInput,
    #[error("empty simplex")]
    EmptySimplex,
    #[error("empty vertex id")]
    EmptyVertexId,
    #[error("vertex `{0}` repeated within one simplex")]
    DuplicateVertex(VertexId),
    #[error("complex is empty")]
    EmptyComplex,
    #[error("not a subcomplex: simplex {0} is missing from the ambient complex")]
    NotSubcomplex(Simplex),
    #[error("assignment is missing source vertex `{0}`")]
    PartialAssignment(VertexId),
    #[error("map is not simplicial: {0} has no simplex image")]
    NotSimplicial(Simplex),
}

/// A vertex identifier. Carries no structure beyond string equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(Arc<str>);

impl VertexId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for VertexId {
    fn from(s: &str) -> Self {
        VertexId(Arc::from(s))
    }
}

impl From<String> for VertexId {
    fn from(s: String) -> Self {
        VertexId(Arc::from(s))
    }
}

impl From<&VertexId> for VertexId {
    fn from(v: &VertexId) -> Self {
        v.clone()
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A nonempty set of vertices, kept sorted by id.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex(Vec<VertexId>);

impl Simplex {
    pub fn new<I, V>(vertices: I) -> Result<Self, ComplexError>
    where
        I: IntoIterator<Item = V>,
        V: Into<VertexId>,
    {
        let mut vs: Vec<VertexId> = vertices.into_iter().map(Into::into).collect();
        if vs.is_empty() {
            return Err(ComplexError::EmptySimplex);
        }
        if vs.iter().any(|v| v.as_str().is_empty()) {
            return Err(ComplexError::EmptyVertexId);
        }
        vs.sort();
        if let Some(w) = vs.windows(2).find(|w| w[0] == w[1]) {
            return Err(ComplexError::DuplicateVertex(w[0].clone()));
        }
        Ok(Simplex(vs))
    }

    /// Builds a simplex from an arbitrary nonempty collection, merging repeats.
    pub(crate) fn from_set(vertices: impl IntoIterator<Item = VertexId>) -> Self {
        let set: BTreeSet<VertexId> = vertices.into_iter().collect();
        debug_assert!(!set.is_empty());
        Simplex(set.into_iter().collect())
    }

    pub fn vertex(v: impl Into<VertexId>) -> Self {
        Simplex(vec![v.into()])
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        self.0.binary_search(v).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.contains(v))
    }

    /// All nonempty faces, including the simplex itself.
    pub fn faces(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = self.0.len();
        assert!(n < usize::BITS as usize, "simplex too large to enumerate faces");
        (1usize..(1 << n)).map(move |mask| {
            Simplex(
                (0..n)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| self.0[i].clone())
                    .collect(),
            )
        })
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("]")
    }
}

/// A finite abstract simplicial complex, stored closed under taking faces.
#[derive(Clone, Default)]
pub struct Complex {
    simplexes: Arc<BTreeSet<Simplex>>,
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.simplexes, &other.simplexes) || self.simplexes == other.simplexes
    }
}

impl Eq for Complex {}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.maximal_simplexes()).finish()
    }
}

impl Complex {
    /// Downward closure of the given vertex sets.
    pub fn build<I, S, V>(maximal: I) -> Result<Self, ComplexError>
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = V>,
        V: Into<VertexId>,
    {
        let simplexes = maximal
            .into_iter()
            .map(Simplex::new)
            .collect::<Result<Vec<_>, _>>()?;
        if simplexes.is_empty() {
            return Err(ComplexError::EmptyInput);
        }
        Ok(Self::closure(simplexes))
    }

    /// Downward closure of already-validated simplexes.
    pub fn closure(simplexes: impl IntoIterator<Item = Simplex>) -> Self {
        let mut set = BTreeSet::new();
        for s in simplexes {
            if set.contains(&s) {
                continue;
            }
            set.extend(s.faces());
        }
        Complex { simplexes: Arc::new(set) }
    }

    /// The complex consisting of one vertex.
    pub fn point(v: impl Into<VertexId>) -> Self {
        Self::closure([Simplex::vertex(v)])
    }

    /// The complex of an edge path: its vertices and consecutive edges.
    pub fn path_complex(path: &[VertexId]) -> Self {
        let mut simplexes: Vec<Simplex> = path.iter().cloned().map(Simplex::vertex).collect();
        for w in path.windows(2) {
            if w[0] != w[1] {
                simplexes.push(Simplex::from_set([w[0].clone(), w[1].clone()]));
            }
        }
        Self::closure(simplexes)
    }

    pub fn is_empty(&self) -> bool {
        self.simplexes.is_empty()
    }

    /// Number of simplexes (of every dimension).
    pub fn len(&self) -> usize {
        self.simplexes.len()
    }

    pub fn simplexes(&self) -> impl Iterator<Item = &Simplex> + '_ {
        self.simplexes.iter()
    }

    pub fn simplexes_of_dim(&self, dim: usize) -> impl Iterator<Item = &Simplex> + '_ {
        self.simplexes.iter().filter(move |s| s.dimension() == dim)
    }

    pub fn vertices(&self) -> impl Iterator<Item = &VertexId> + '_ {
        self.simplexes_of_dim(0).map(|s| &s.0[0])
    }

    pub fn vertex_count(&self) -> usize {
        self.simplexes_of_dim(0).count()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.simplexes.contains(s)
    }

    pub fn contains_vertex(&self, v: &VertexId) -> bool {
        self.simplexes.contains(&Simplex(vec![v.clone()]))
    }

    pub fn has_edge(&self, a: &VertexId, b: &VertexId) -> bool {
        a != b && self.simplexes.contains(&Simplex::from_set([a.clone(), b.clone()]))
    }

    /// Simplexes that are not a proper face of another simplex.
    pub fn maximal_simplexes(&self) -> Vec<&Simplex> {
        // a simplex is maximal iff no member simplex has one more vertex and contains it
        let mut cofaced: BTreeSet<&Simplex> = BTreeSet::new();
        for s in self.simplexes.iter() {
            if s.len() < 2 {
                continue;
            }
            for skip in 0..s.len() {
                let idx = s
                    .0
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != skip)
                    .map(|(_, v)| v.clone())
                    .collect();
                if let Some(face) = self.simplexes.get(&Simplex(idx)) {
                    cofaced.insert(face);
                }
            }
        }
        self.simplexes.iter().filter(|s| !cofaced.contains(s)).collect()
    }

    pub fn dimension(&self) -> Result<usize, ComplexError> {
        self.simplexes
            .iter()
            .map(Simplex::dimension)
            .max()
            .ok_or(ComplexError::EmptyComplex)
    }

    pub fn skeleton(&self, k: usize) -> Complex {
        if self.simplexes.iter().all(|s| s.dimension() <= k) {
            return self.clone();
        }
        Complex {
            simplexes: Arc::new(
                self.simplexes
                    .iter()
                    .filter(|s| s.dimension() <= k)
                    .cloned()
                    .collect(),
            ),
        }
    }

    pub fn is_subcomplex_of(&self, other: &Complex) -> bool {
        self.simplexes.iter().all(|s| other.contains(s))
    }

    /// Neighbour lists of the 1-skeleton, in canonical order.
    pub fn adjacency(&self) -> BTreeMap<VertexId, BTreeSet<VertexId>> {
        let mut adj: BTreeMap<VertexId, BTreeSet<VertexId>> =
            self.vertices().map(|v| (v.clone(), BTreeSet::new())).collect();
        for e in self.simplexes_of_dim(1) {
            let (a, b) = (&e.0[0], &e.0[1]);
            adj.get_mut(a).expect("closed").insert(b.clone());
            adj.get_mut(b).expect("closed").insert(a.clone());
        }
        adj
    }

    pub fn is_connected(&self) -> Result<bool, ComplexError> {
        let adj = self.adjacency();
        let start = adj.keys().next().ok_or(ComplexError::EmptyComplex)?;
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for w in &adj[v] {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        Ok(seen.len() == adj.len())
    }

    /// Categorical product: a set of pair-vertices is a simplex iff both
    /// coordinate projections are simplexes.
    pub fn product(a: &Complex, b: &Complex) -> Complex {
        Self::product_up_to(a, b, usize::MAX)
    }

    /// `skeleton(product(a, b), k)` without materializing the higher simplexes.
    pub fn product_skeleton(a: &Complex, b: &Complex, k: usize) -> Complex {
        Self::product_up_to(a, b, k.saturating_add(1))
    }

    fn product_up_to(a: &Complex, b: &Complex, max_len: usize) -> Complex {
        // every product simplex projects into a pair of maximal simplexes, and
        // every subset of such a grid is a product simplex
        let mut set = BTreeSet::new();
        let ma = a.maximal_simplexes();
        let mb = b.maximal_simplexes();
        for sa in &ma {
            for sb in &mb {
                let grid: Vec<VertexId> = sa
                    .0
                    .iter()
                    .flat_map(|x| sb.0.iter().map(move |y| product_vertex_id(x, y)))
                    .collect();
                let n = grid.len();
                assert!(n < usize::BITS as usize, "product grid too large");
                for mask in 1usize..(1 << n) {
                    if mask.count_ones() as usize > max_len {
                        continue;
                    }
                    let mut vs: Vec<VertexId> = (0..n)
                        .filter(|i| mask & (1 << i) != 0)
                        .map(|i| grid[i].clone())
                        .collect();
                    vs.sort();
                    set.insert(Simplex(vs));
                }
            }
        }
        Complex { simplexes: Arc::new(set) }
    }

    /// Barycentric subdivision: one vertex per simplex, simplexes are chains
    /// strictly ordered by inclusion.
    pub fn barycentric(&self) -> Complex {
        let mut flags = Vec::new();
        for m in self.maximal_simplexes() {
            let mut perm: Vec<VertexId> = m.0.clone();
            for_each_permutation(&mut perm, &mut |order| {
                let chain = (1..=order.len())
                    .map(|k| bary_vertex_id(&Simplex::from_set(order[..k].iter().cloned())));
                flags.push(Simplex::from_set(chain));
            });
        }
        Self::closure(flags)
    }

    pub fn barycentric_n(&self, n: usize) -> Complex {
        (0..n).fold(self.clone(), |c, _| c.barycentric())
    }

    /// The copy of `Bary(sub)` inside `Bary(self)`.
    pub fn bary_subcomplex(&self, sub: &Complex) -> Result<Complex, ComplexError> {
        if let Some(s) = sub.simplexes().find(|s| !self.contains(s)) {
            return Err(ComplexError::NotSubcomplex(s.clone()));
        }
        Ok(sub.barycentric())
    }

    /// Simplex id lookup table for a barycentric subdivision of `self`.
    pub fn bary_vertices(&self) -> BTreeMap<VertexId, &Simplex> {
        self.simplexes.iter().map(|s| (bary_vertex_id(s), s)).collect()
    }
}

/// Serialized form: the maximal simplexes, closed again on load.
#[derive(Serialize, Deserialize)]
struct ComplexJson {
    simplexes: Vec<Vec<VertexId>>,
}

impl Serialize for Complex {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ComplexJson {
            simplexes: self.maximal_simplexes().into_iter().map(|s| s.0.clone()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Complex {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let json = ComplexJson::deserialize(deserializer)?;
        Complex::build(json.simplexes).map_err(serde::de::Error::custom)
    }
}

/// Heap's algorithm, visiting every ordering of `items` once.
fn for_each_permutation<T: Clone>(items: &mut [T], visit: &mut impl FnMut(&[T])) {
    fn heap<T: Clone>(k: usize, items: &mut [T], visit: &mut impl FnMut(&[T])) {
        if k <= 1 {
            visit(items);
            return;
        }
        for i in 0..k - 1 {
            heap(k - 1, items, visit);
            if k.is_multiple_of(2) {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
        heap(k - 1, items, visit);
    }
    let n = items.len();
    heap(n, items, visit);
}
