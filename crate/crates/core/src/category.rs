//! The category of loop agreement tasks: morphisms are decision maps, the
//! signature functor sends them to homomorphisms of abelianized
//! fundamental groups.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::complex::{bary_vertex_id, lift_assignment, ComplexError, Simplex, SimplicialMap, VertexId};
use crate::group::{
    direct_sum, pointed_hom_exists, task_abelianization, task_signature, GroupError, HomError,
    IntMatrix,
};
use crate::loops::EdgePath;
use crate::task::{
    check_implements, compose, projection_map, DecisionMap, LoopTask, TaskError, Verification,
};

pub use crate::group::AbelianHom;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CategoryError {
    #[error("target of the first morphism is not the source of the second")]
    TargetSourceMismatch,
    #[error("decision map does not implement the target: fails at {input} on {simplex}")]
    NotAMorphism { input: crate::task::InputSimplex, simplex: Simplex },
    #[error("{0}")]
    Unsupported(&'static str),
    #[error(transparent)]
    Task(#[from] TaskError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("induced map is not a pointed homomorphism: {0}")]
    Hom(#[from] HomError),
}

/// A decision map `(δ, N)` by which `source` implements `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopMorphism {
    source: LoopTask,
    target: LoopTask,
    d: DecisionMap,
}

impl LoopMorphism {
    /// Runs the exhaustive carrier check.
    pub fn new(source: LoopTask, target: LoopTask, d: DecisionMap) -> Result<Self, CategoryError> {
        match check_implements(&source, &target, &d)? {
            Verification::Pass => Ok(LoopMorphism { source, target, d }),
            Verification::Fail { input, simplex } => {
                Err(CategoryError::NotAMorphism { input, simplex })
            }
        }
    }

    pub fn source(&self) -> &LoopTask {
        &self.source
    }

    pub fn target(&self) -> &LoopTask {
        &self.target
    }

    pub fn decision_map(&self) -> &DecisionMap {
        &self.d
    }

    pub fn subdivisions(&self) -> usize {
        self.d.subdivisions()
    }
}

/// `(id, 0)`.
pub fn identity_morphism(t: &LoopTask) -> LoopMorphism {
    LoopMorphism { source: t.clone(), target: t.clone(), d: DecisionMap::identity(t) }
}

/// `f2 ∘ f1 = (δ₂ ∘ Bary^{N₂}(δ₁), N₁ + N₂)`.
pub fn compose_morphisms(f1: &LoopMorphism, f2: &LoopMorphism) -> Result<LoopMorphism, CategoryError> {
    if f1.target != f2.source {
        return Err(CategoryError::TargetSourceMismatch);
    }
    // f1 is simplicial, so only the source needs subdividing
    let mut source = f1.d.map().source().clone();
    let mut assignment = f1.d.map().assignment().clone();
    for _ in 0..f2.subdivisions() {
        assignment = lift_assignment(&source, &assignment)?;
        source = source.barycentric();
    }
    let lifted = SimplicialMap::new(source, f2.d.map().source().clone(), assignment);
    let map = lifted.then(f2.d.map())?;
    let d = DecisionMap::new(f1.subdivisions() + f2.subdivisions(), map)?;
    Ok(LoopMorphism { source: f1.source.clone(), target: f2.target.clone(), d })
}

/// The homomorphism a morphism induces on abelianized signatures.
///
/// Each cyclic generator of the source is represented by an edge loop built
/// from generator loops of the presentation; its subdivided image under
/// `δ` is read off in the target's decomposition.
pub fn functor_s(f: &LoopMorphism) -> Result<AbelianHom, CategoryError> {
    let (p1, ab1, sig1) = task_abelianization(&f.source)?;
    let (p2, ab2, sig2) = task_abelianization(&f.target)?;
    let n = f.subdivisions();
    let map = f.d.map();
    let mut images: BTreeMap<usize, Vec<BigInt>> = BTreeMap::new();
    let mut image_of = |g: usize| -> Result<Vec<BigInt>, CategoryError> {
        if let Some(v) = images.get(&g) {
            return Ok(v.clone());
        }
        let mut path: EdgePath = p1.generator_loop(g).path().clone();
        for _ in 0..n {
            path = path.subdivided();
        }
        let mut mapped = Vec::with_capacity(path.vertices().len());
        for v in path.vertices() {
            let w = map
                .apply(v)
                .ok_or_else(|| ComplexError::PartialAssignment(v.clone()))?;
            mapped.push(w.clone());
        }
        let e = p2.path_word(&mapped)?.exponent_sums(p2.generator_count());
        images.insert(g, e.clone());
        Ok(e)
    };
    let mut cols = Vec::with_capacity(sig1.len());
    for i in 0..sig1.len() {
        let rep = ab1.factor_representative(i);
        let mut total = vec![BigInt::zero(); p2.generator_count()];
        for (g, k) in rep.iter().enumerate() {
            if k.is_zero() {
                continue;
            }
            for (t, x) in total.iter_mut().zip(image_of(g)?) {
                *t += k * x;
            }
        }
        cols.push(ab2.coordinates(&total));
    }
    let rows = (0..sig2.len()).map(|j| cols.iter().map(|c| c[j].clone()).collect()).collect();
    let matrix = IntMatrix::from_rows_with_cols(rows, sig1.len());
    Ok(AbelianHom::new(sig1, sig2, matrix)?)
}

/// The signature of `t1 × t2` agrees with the direct sum of the factors'
/// signatures: same group, and pointed homomorphisms both ways.
pub fn check_product_preservation(t1: &LoopTask, t2: &LoopTask) -> Result<bool, CategoryError> {
    let composed = task_signature(&compose(t1, t2))?;
    let sum = direct_sum(&[task_signature(t1)?, task_signature(t2)?]);
    Ok(composed.same_group(&sum)
        && pointed_hom_exists(&composed, &sum)
        && pointed_hom_exists(&sum, &composed))
}

/// `ρ_i : t1 × t2 → t_i`.
pub fn projection_morphism(tc: &LoopTask, i: usize) -> Result<LoopMorphism, CategoryError> {
    let d = projection_map(tc, i)?;
    let (t1, t2) = tc.factors().ok_or(TaskError::NotAComposition)?;
    let target = if i == 1 { t1 } else { t2 };
    LoopMorphism::new(tc.clone(), target.clone(), d)
}

/// `Bary(K) → K`, sending each barycenter to the least vertex of its
/// simplex.
pub fn subdivision_retraction(t: &LoopTask) -> Result<LoopMorphism, CategoryError> {
    let mut assignment = BTreeMap::new();
    for s in t.output().simplexes() {
        assignment.insert(bary_vertex_id(s), s.vertices()[0].clone());
    }
    let d = DecisionMap::for_tasks(t, t, 1, assignment)?;
    LoopMorphism::new(t.clone(), t.clone(), d)
}

/// `t → t × t` at one subdivision.
///
/// Corners go to their diagonal points and the midpoint of a loop edge
/// `a → b` goes to `(b, a)`, so the subdivided loop traces `λ ⋆ λ`. Every
/// other barycenter goes to the diagonal point of its least vertex. Needs
/// each loop path to be a single edge or constant, with no edge repeated.
pub fn diagonal_morphism(t: &LoopTask) -> Result<LoopMorphism, CategoryError> {
    use crate::complex::product_vertex_id as pair;
    let tt = compose(t, t);
    let mut special: BTreeMap<Simplex, VertexId> = BTreeMap::new();
    for p in t.triangle_loop().paths() {
        match p.vertices() {
            [_] => {}
            [a, b] => {
                let e = Simplex::new([a.clone(), b.clone()])?;
                if special.insert(e, pair(b, a)).is_some() {
                    return Err(CategoryError::Unsupported("loop repeats an edge"));
                }
            }
            _ => return Err(CategoryError::Unsupported("loop paths must be single edges")),
        }
    }
    let mut assignment = BTreeMap::new();
    for s in t.output().simplexes() {
        let image = match special.get(s) {
            Some(v) => v.clone(),
            None => pair(&s.vertices()[0], &s.vertices()[0]),
        };
        assignment.insert(bary_vertex_id(s), image);
    }
    let source = t.output().barycentric();
    let d = DecisionMap::new(1, SimplicialMap::new(source, tt.output().clone(), assignment))?;
    LoopMorphism::new(t.clone(), tt, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::task::{catalog, verify_implements, CATALOG_NAMES};

    fn cat(n: &str) -> LoopTask {
        catalog(n).unwrap()
    }

    #[test]
    fn identity_laws() {
        let set = cat("set-agreement");
        let id = identity_morphism(&set);
        assert!(verify_implements(&set, &set, id.decision_map()).unwrap());
        assert_eq!(compose_morphisms(&id, &id).unwrap(), id);
        let r = subdivision_retraction(&set).unwrap();
        assert_eq!(compose_morphisms(&id, &r).unwrap(), r);
        assert_eq!(compose_morphisms(&r, &id).unwrap(), r);
    }

    #[test]
    fn mismatch_is_rejected() {
        let a = identity_morphism(&cat("set-agreement"));
        let b = identity_morphism(&cat("torus"));
        assert_eq!(compose_morphisms(&a, &b), Err(CategoryError::TargetSourceMismatch));
    }

    #[test]
    fn s_of_identity_is_identity() {
        for name in CATALOG_NAMES {
            let t = cat(name);
            let h = functor_s(&identity_morphism(&t)).unwrap();
            assert_eq!(h, AbelianHom::identity(&task_signature(&t).unwrap()));
        }
    }

    #[test]
    fn diagonals_and_retractions_exist_for_catalog_tasks() {
        for name in CATALOG_NAMES {
            let t = cat(name);
            let diag = diagonal_morphism(&t).unwrap();
            assert_eq!(diag.subdivisions(), 1);
            subdivision_retraction(&t).unwrap();
            let back = projection_morphism(diag.target(), 1).unwrap();
            let round = compose_morphisms(&diag, &back).unwrap();
            assert!(verify_implements(&t, &t, round.decision_map()).unwrap());
        }
    }

    #[test]
    fn projection_of_set_squared() {
        let set = cat("set-agreement");
        let ss = compose(&set, &set);
        let h = functor_s(&projection_morphism(&ss, 1).unwrap()).unwrap();
        assert_eq!(h.target().report(), "factors: [] free_rank: 1 element: [1]");
        assert_eq!(h.matrix().rows(), 1);
        assert_eq!(h.matrix().cols(), 2);
        assert_eq!(h.matrix().mul_vec(h.source().element()), vec![BigInt::from(1)]);
        let diag = functor_s(&diagonal_morphism(&set).unwrap()).unwrap();
        let composite = diag.then(&h).unwrap();
        assert_eq!(composite.matrix(), &IntMatrix::identity(1));
    }

    #[test]
    fn products_are_preserved_for_small_pairs() {
        let set = cat("set-agreement");
        assert!(check_product_preservation(&set, &set).unwrap());
        assert!(check_product_preservation(&set, &cat("simplex-agreement")).unwrap());
    }
}
