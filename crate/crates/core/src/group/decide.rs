use std::fmt;

use super::{direct_sum, find_pointed_hom, task_abelianization, AbelianHom, GroupError, Obstruction};
use crate::task::LoopTask;

/// Total relator length the cyclicity certificate may grow to.
const ELIMINATION_BUDGET: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VerdictKind {
    Implements,
    NotImplements,
    Unknown,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictKind::Implements => "IMPLEMENTS",
            VerdictKind::NotImplements => "NOT_IMPLEMENTS",
            VerdictKind::Unknown => "UNKNOWN",
        })
    }
}

/// Outcome of the algebraic implementability test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// A pointed homomorphism exists and every fundamental group involved
    /// is known to be abelian.
    Implements { witness: AbelianHom },
    /// No pointed homomorphism exists even between abelianizations.
    NotImplements { obstruction: Obstruction },
    /// The abelianizations admit `witness`, but some task's fundamental
    /// group is not known to be abelian.
    Unknown { witness: AbelianHom, uncertified: Vec<String> },
}

impl Verdict {
    pub fn kind(&self) -> VerdictKind {
        match self {
            Verdict::Implements { .. } => VerdictKind::Implements,
            Verdict::NotImplements { .. } => VerdictKind::NotImplements,
            Verdict::Unknown { .. } => VerdictKind::Unknown,
        }
    }

    pub fn witness(&self) -> Option<&AbelianHom> {
        match self {
            Verdict::Implements { witness } | Verdict::Unknown { witness, .. } => Some(witness),
            Verdict::NotImplements { .. } => None,
        }
    }
}

/// Whether `π₁` of the output is known to be abelian: either by
/// construction, or because generator elimination leaves a cyclic group.
pub fn is_abelian_certified(t: &LoopTask) -> Result<bool, GroupError> {
    if t.abelian_certified() {
        return Ok(true);
    }
    let p = super::presentation(t.output(), t.triangle_loop().corner(0))?;
    Ok(p.is_cyclic_by_elimination(ELIMINATION_BUDGET))
}

/// Whether the sources, run together, implement `tgt`, judged on
/// abelianized signatures.
pub fn decide_implements(sources: &[LoopTask], tgt: &LoopTask) -> Result<Verdict, GroupError> {
    if sources.is_empty() {
        return Err(GroupError::NoSources);
    }
    let mut parts = Vec::with_capacity(sources.len());
    for s in sources {
        parts.push(task_abelianization(s)?.2);
    }
    let source = direct_sum(&parts);
    let target = task_abelianization(tgt)?.2;
    let witness = match find_pointed_hom(&source, &target) {
        Ok(h) => h,
        Err(obstruction) => return Ok(Verdict::NotImplements { obstruction }),
    };
    let mut uncertified = Vec::new();
    for t in sources.iter().chain(std::iter::once(tgt)) {
        if !is_abelian_certified(t)? && !uncertified.contains(&t.display_name().to_string()) {
            uncertified.push(t.display_name().to_string());
        }
    }
    Ok(if uncertified.is_empty() {
        Verdict::Implements { witness }
    } else {
        Verdict::Unknown { witness, uncertified }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EquivalenceKind {
    Equivalent,
    NotEquivalent,
    Unknown,
}

impl fmt::Display for EquivalenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EquivalenceKind::Equivalent => "EQUIVALENT",
            EquivalenceKind::NotEquivalent => "NOT_EQUIVALENT",
            EquivalenceKind::Unknown => "UNKNOWN",
        })
    }
}

/// Both directions of [`decide_implements`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equivalence {
    pub forward: Verdict,
    pub backward: Verdict,
}

impl Equivalence {
    /// A failing direction dominates, then an unknown one.
    pub fn kind(&self) -> EquivalenceKind {
        let kinds = [self.forward.kind(), self.backward.kind()];
        if kinds.contains(&VerdictKind::NotImplements) {
            EquivalenceKind::NotEquivalent
        } else if kinds.contains(&VerdictKind::Unknown) {
            EquivalenceKind::Unknown
        } else {
            EquivalenceKind::Equivalent
        }
    }
}

pub fn tasks_equivalent(t1: &LoopTask, t2: &LoopTask) -> Result<Equivalence, GroupError> {
    Ok(Equivalence {
        forward: decide_implements(std::slice::from_ref(t1), t2)?,
        backward: decide_implements(std::slice::from_ref(t2), t1)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{Complex, VertexId};
    use crate::loops::TriangleLoop;
    use crate::task::{catalog, compose};

    fn cat(n: &str) -> LoopTask {
        catalog(n).unwrap()
    }

    #[test]
    fn spec_verdicts() {
        let set = cat("set-agreement");
        let simplex = cat("simplex-agreement");
        let torus = cat("torus");
        let k = |s: &[LoopTask], t: &LoopTask| decide_implements(s, t).unwrap().kind();
        assert_eq!(k(std::slice::from_ref(&set), &torus), VerdictKind::Implements);
        assert_eq!(k(std::slice::from_ref(&simplex), &set), VerdictKind::NotImplements);
        assert_eq!(k(&[set.clone(), set.clone()], &set), VerdictKind::Implements);
        assert!(matches!(decide_implements(&[], &set), Err(GroupError::NoSources)));
    }

    #[test]
    fn equivalence_lattice() {
        let set = cat("set-agreement");
        let simplex = cat("simplex-agreement");
        let e = tasks_equivalent(&compose(&set, &simplex), &set).unwrap();
        assert_eq!(e.kind(), EquivalenceKind::Equivalent);
        assert_eq!(tasks_equivalent(&set, &simplex).unwrap().kind(), EquivalenceKind::NotEquivalent);
    }

    #[test]
    fn uncertified_task_gives_unknown_or_cyclic_certificate() {
        // a file-loaded hollow triangle is cyclic, so it certifies itself
        let c = Complex::build([["a", "b"], ["b", "c"], ["c", "a"]]).unwrap();
        let l = TriangleLoop::new(
            &c,
            ["a", "b", "c"].map(VertexId::from),
            [["a", "b"], ["b", "c"], ["c", "a"]]
                .map(|p| crate::loops::EdgePath::new(p.map(VertexId::from)).unwrap()),
        )
        .unwrap();
        let t = LoopTask::new(None, c, l).unwrap();
        assert!(!t.abelian_certified());
        assert!(is_abelian_certified(&t).unwrap());

        // the torus read from a file is not cyclic and stays uncertified
        let torus = cat("torus");
        let plain = LoopTask::new(None, torus.output().clone(), torus.triangle_loop().clone()).unwrap();
        assert!(!is_abelian_certified(&plain).unwrap());
        let v = decide_implements(&[cat("set-agreement")], &plain).unwrap();
        assert_eq!(v.kind(), VerdictKind::Unknown);
    }
}
