use std::collections::BTreeMap;

use super::{bary_vertex_id, Complex, ComplexError, Simplex, VertexId};

/// A vertex assignment between two complexes.
///
/// Construction does not check that simplexes go to simplexes; use
/// [`SimplicialMap::check_simplicial`] or [`SimplicialMap::checked`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMap {
    source: Complex,
    target: Complex,
    assignment: BTreeMap<VertexId, VertexId>,
}

impl SimplicialMap {
    pub fn new(source: Complex, target: Complex, assignment: BTreeMap<VertexId, VertexId>) -> Self {
        SimplicialMap { source, target, assignment }
    }

    /// Builds the map and rejects partial or non-simplicial assignments.
    pub fn checked(
        source: Complex,
        target: Complex,
        assignment: BTreeMap<VertexId, VertexId>,
    ) -> Result<Self, ComplexError> {
        let m = Self::new(source, target, assignment);
        m.require_simplicial()?;
        Ok(m)
    }

    pub fn identity(c: &Complex) -> Self {
        let assignment = c.vertices().map(|v| (v.clone(), v.clone())).collect();
        Self::new(c.clone(), c.clone(), assignment)
    }

    /// Sends every vertex of `source` to `v`.
    pub fn constant(source: &Complex, target: &Complex, v: &VertexId) -> Self {
        let assignment = source.vertices().map(|s| (s.clone(), v.clone())).collect();
        Self::new(source.clone(), target.clone(), assignment)
    }

    pub fn source(&self) -> &Complex {
        &self.source
    }

    pub fn target(&self) -> &Complex {
        &self.target
    }

    pub fn assignment(&self) -> &BTreeMap<VertexId, VertexId> {
        &self.assignment
    }

    pub fn apply(&self, v: &VertexId) -> Option<&VertexId> {
        self.assignment.get(v)
    }

    pub fn image(&self, s: &Simplex) -> Result<Simplex, ComplexError> {
        let mut out = Vec::with_capacity(s.len());
        for v in s.vertices() {
            let w = self
                .assignment
                .get(v)
                .ok_or_else(|| ComplexError::PartialAssignment(v.clone()))?;
            out.push(w.clone());
        }
        Ok(Simplex::from_set(out))
    }

    fn require_total(&self) -> Result<(), ComplexError> {
        match self.source.vertices().find(|v| !self.assignment.contains_key(*v)) {
            Some(v) => Err(ComplexError::PartialAssignment(v.clone())),
            None => Ok(()),
        }
    }

    /// First source simplex whose image is not a target simplex.
    pub fn first_violation(&self) -> Result<Option<Simplex>, ComplexError> {
        self.require_total()?;
        for s in self.source.simplexes() {
            if !self.target.contains(&self.image(s)?) {
                return Ok(Some(s.clone()));
            }
        }
        Ok(None)
    }

    pub fn check_simplicial(&self) -> Result<bool, ComplexError> {
        Ok(self.first_violation()?.is_none())
    }

    pub(crate) fn require_simplicial(&self) -> Result<(), ComplexError> {
        match self.first_violation()? {
            Some(s) => Err(ComplexError::NotSimplicial(s)),
            None => Ok(()),
        }
    }

    /// `then ∘ self`. The middle complexes are not compared.
    pub fn then(&self, then: &SimplicialMap) -> Result<SimplicialMap, ComplexError> {
        let mut assignment = BTreeMap::new();
        for (v, w) in &self.assignment {
            let u = then
                .assignment
                .get(w)
                .ok_or_else(|| ComplexError::PartialAssignment(w.clone()))?;
            assignment.insert(v.clone(), u.clone());
        }
        Ok(SimplicialMap::new(self.source.clone(), then.target.clone(), assignment))
    }
}

/// The map `Bary(source) → Bary(target)` sending the barycenter of `σ` to
/// the barycenter of `m(σ)`.
pub fn induced_bary_map(m: &SimplicialMap) -> Result<SimplicialMap, ComplexError> {
    m.require_simplicial()?;
    Ok(SimplicialMap::new(
        m.source.barycentric(),
        m.target.barycentric(),
        lift_assignment(&m.source, &m.assignment)?,
    ))
}

/// The vertex assignment of [`induced_bary_map`], without subdividing
/// either complex.
pub(crate) fn lift_assignment(
    source: &Complex,
    assignment: &BTreeMap<VertexId, VertexId>,
) -> Result<BTreeMap<VertexId, VertexId>, ComplexError> {
    let mut out = BTreeMap::new();
    for s in source.simplexes() {
        let mut image = Vec::with_capacity(s.len());
        for v in s.vertices() {
            let w = assignment.get(v).ok_or_else(|| ComplexError::PartialAssignment(v.clone()))?;
            image.push(w.clone());
        }
        out.insert(bary_vertex_id(s), bary_vertex_id(&Simplex::from_set(image)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> VertexId {
        VertexId::from(s)
    }

    fn hollow() -> Complex {
        Complex::build([["a", "b"], ["b", "c"], ["c", "a"]]).unwrap()
    }

    fn map_of(src: &Complex, tgt: &Complex, pairs: &[(&str, &str)]) -> SimplicialMap {
        SimplicialMap::new(
            src.clone(),
            tgt.clone(),
            pairs.iter().map(|(a, b)| (v(a), v(b))).collect(),
        )
    }

    #[test]
    fn identity_and_collapse_are_simplicial() {
        let tri = Complex::build([["a", "b", "c"]]).unwrap();
        assert!(SimplicialMap::identity(&tri).check_simplicial().unwrap());
        let pt = Complex::point("p");
        assert!(SimplicialMap::constant(&tri, &pt, &v("p")).check_simplicial().unwrap());
    }

    #[test]
    fn chordless_square_rejects_diagonal_edge() {
        let square = Complex::build([["1", "2"], ["2", "3"], ["3", "4"], ["4", "1"]]).unwrap();
        let m = map_of(&hollow(), &square, &[("a", "1"), ("b", "3"), ("c", "2")]);
        assert!(!m.check_simplicial().unwrap());
    }

    #[test]
    fn partial_assignment_is_an_error() {
        let m = map_of(&hollow(), &hollow(), &[("a", "a"), ("b", "b")]);
        assert_eq!(m.check_simplicial(), Err(ComplexError::PartialAssignment(v("c"))));
    }

    #[test]
    fn induced_map_of_identity_is_identity() {
        let h = hollow();
        let induced = induced_bary_map(&SimplicialMap::identity(&h)).unwrap();
        assert_eq!(induced, SimplicialMap::identity(&h.barycentric()));
    }

    #[test]
    fn induced_collapse() {
        let tri = Complex::build([["a", "b", "c"]]).unwrap();
        let pt = Complex::point("p");
        let induced = induced_bary_map(&SimplicialMap::constant(&tri, &pt, &v("p"))).unwrap();
        assert!(induced.assignment().values().all(|w| w.as_str() == "{p}"));
        assert!(induced.check_simplicial().unwrap());
    }

    #[test]
    fn induced_rejects_non_simplicial() {
        let square = Complex::build([["1", "2"], ["2", "3"], ["3", "4"], ["4", "1"]]).unwrap();
        let m = map_of(&hollow(), &square, &[("a", "1"), ("b", "3"), ("c", "2")]);
        assert!(matches!(induced_bary_map(&m), Err(ComplexError::NotSimplicial(_))));
    }

    #[test]
    fn induced_respects_composition_on_hollow_triangles() {
        let h = hollow();
        let rot = map_of(&h, &h, &[("a", "b"), ("b", "c"), ("c", "a")]);
        let fold = map_of(&h, &h, &[("a", "a"), ("b", "b"), ("c", "a")]);
        let composed = rot.then(&fold).unwrap();
        let lhs = induced_bary_map(&composed).unwrap();
        let rhs = induced_bary_map(&rot)
            .unwrap()
            .then(&induced_bary_map(&fold).unwrap())
            .unwrap();
        assert_eq!(lhs.assignment(), rhs.assignment());
    }
}
