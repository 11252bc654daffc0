use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::GroupError;
use crate::complex::{Complex, VertexId};
use crate::loops::{EdgeLoop, EdgePath};

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inverted(self) -> Self {
        Letter { generator: self.generator, inverse: !self.inverse }
    }

    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// A word in the generators, not necessarily reduced.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    pub fn extend(&mut self, w: &Word) {
        self.0.extend_from_slice(&w.0);
    }

    pub fn concat(&self, w: &Word) -> Word {
        let mut out = self.clone();
        out.extend(w);
        out
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverted()).collect())
    }

    /// Repeats the word `k` times.
    pub fn power(&self, k: usize) -> Word {
        Word(self.0.repeat(k))
    }

    /// Cancels adjacent `x x⁻¹` pairs.
    pub fn reduced(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inverted()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Freely and cyclically reduced.
    pub fn cyclically_reduced(&self) -> Word {
        let mut w = self.reduced().0;
        let (mut lo, mut hi) = (0, w.len());
        while hi - lo >= 2 && w[lo] == w[hi - 1].inverted() {
            lo += 1;
            hi -= 1;
        }
        w.truncate(hi);
        w.drain(..lo);
        Word(w)
    }

    /// Exponent sum of each of the first `n` generators.
    pub fn exponent_sums(&self, n: usize) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); n];
        for l in &self.0 {
            out[l.generator] += l.sign();
        }
        out
    }

    fn sparse_exponents(&self) -> BTreeMap<usize, BigInt> {
        let mut out: BTreeMap<usize, BigInt> = BTreeMap::new();
        for l in &self.0 {
            *out.entry(l.generator).or_default() += l.sign();
        }
        out.retain(|_, v| !v.is_zero());
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "g{}", l.generator)?;
            if l.inverse {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

/// Edge-path presentation of `π₁` of a connected complex.
///
/// Generators are the non-tree edges of a breadth-first spanning tree,
/// oriented from the lower-ranked to the higher-ranked endpoint; there is
/// one relator per triangle.
#[derive(Clone, Debug)]
pub struct GroupPresentation {
    basepoint: VertexId,
    generators: Vec<(VertexId, VertexId)>,
    relators: Vec<Word>,
    tree: BTreeSet<(VertexId, VertexId)>,
    parent: BTreeMap<VertexId, VertexId>,
    letters: BTreeMap<(VertexId, VertexId), Letter>,
}

/// The presentation with the spanning tree grown in canonical vertex order.
pub fn presentation(c: &Complex, basepoint: &VertexId) -> Result<GroupPresentation, GroupError> {
    let order: Vec<VertexId> = c.vertices().cloned().collect();
    presentation_with_order(c, basepoint, &order)
}

/// Like [`presentation`], with `order` ranking the vertices for tree
/// growth and edge orientation. `order` must list every vertex once.
pub fn presentation_with_order(
    c: &Complex,
    basepoint: &VertexId,
    order: &[VertexId],
) -> Result<GroupPresentation, GroupError> {
    if !c.contains_vertex(basepoint) {
        return Err(GroupError::UnknownBasepoint(basepoint.clone()));
    }
    let rank: BTreeMap<&VertexId, usize> = order.iter().enumerate().map(|(i, v)| (v, i)).collect();
    if rank.len() != order.len()
        || order.len() != c.vertex_count()
        || order.iter().any(|v| !c.contains_vertex(v))
    {
        return Err(GroupError::BadVertexOrder);
    }
    let by_rank = |a: &VertexId, b: &VertexId| rank[a].cmp(&rank[b]);

    let adjacency = c.adjacency();
    let mut parent = BTreeMap::new();
    let mut seen = BTreeSet::from([basepoint.clone()]);
    let mut queue = VecDeque::from([basepoint.clone()]);
    let mut tree = BTreeSet::new();
    while let Some(v) = queue.pop_front() {
        let mut next: Vec<&VertexId> = adjacency[&v].iter().collect();
        next.sort_by(|a, b| by_rank(a, b));
        for w in next {
            if seen.insert(w.clone()) {
                parent.insert(w.clone(), v.clone());
                tree.insert(edge_key(&v, w));
                queue.push_back(w.clone());
            }
        }
    }
    if seen.len() != c.vertex_count() {
        return Err(GroupError::NotConnected);
    }

    let mut generators: Vec<(VertexId, VertexId)> = c
        .simplexes_of_dim(1)
        .map(|e| {
            let (a, b) = (&e.vertices()[0], &e.vertices()[1]);
            if by_rank(a, b).is_lt() {
                (a.clone(), b.clone())
            } else {
                (b.clone(), a.clone())
            }
        })
        .filter(|(a, b)| !tree.contains(&edge_key(a, b)))
        .collect();
    generators.sort_by(|x, y| by_rank(&x.0, &y.0).then_with(|| by_rank(&x.1, &y.1)));

    let mut letters = BTreeMap::new();
    for (i, (a, b)) in generators.iter().enumerate() {
        letters.insert((a.clone(), b.clone()), Letter::new(i, false));
        letters.insert((b.clone(), a.clone()), Letter::new(i, true));
    }

    let mut p = GroupPresentation {
        basepoint: basepoint.clone(),
        generators,
        relators: Vec::new(),
        tree,
        parent,
        letters,
    };
    for t in c.simplexes_of_dim(2) {
        let mut vs: Vec<&VertexId> = t.vertices().iter().collect();
        vs.sort_by(|a, b| by_rank(a, b));
        let cycle = [vs[0], vs[1], vs[2], vs[0]];
        let w = p.path_word(&cycle.map(VertexId::clone))?;
        p.relators.push(w);
    }
    Ok(p)
}

fn edge_key(a: &VertexId, b: &VertexId) -> (VertexId, VertexId) {
    if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

impl GroupPresentation {
    pub fn basepoint(&self) -> &VertexId {
        &self.basepoint
    }

    /// Generator edges as `(tail, head)`.
    pub fn generators(&self) -> &[(VertexId, VertexId)] {
        &self.generators
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Tree edges with endpoints in canonical order.
    pub fn tree(&self) -> &BTreeSet<(VertexId, VertexId)> {
        &self.tree
    }

    /// `None` for an unknown vertex.
    pub fn tree_path(&self, v: &VertexId) -> Option<Vec<VertexId>> {
        let mut path = vec![v.clone()];
        let mut cur = v;
        while cur != &self.basepoint {
            cur = self.parent.get(cur)?;
            path.push(cur.clone());
        }
        path.reverse();
        Some(path)
    }

    /// The letter of one edge traversal; empty for tree edges and
    /// stationary steps.
    pub fn edge_word(&self, a: &VertexId, b: &VertexId) -> Result<Word, GroupError> {
        if a == b {
            return Ok(Word::empty());
        }
        if let Some(&l) = self.letters.get(&(a.clone(), b.clone())) {
            return Ok(Word::new(vec![l]));
        }
        if self.tree.contains(&edge_key(a, b)) {
            return Ok(Word::empty());
        }
        Err(GroupError::InvalidLoop(a.clone(), b.clone()))
    }

    pub fn path_word(&self, path: &[VertexId]) -> Result<Word, GroupError> {
        let mut w = Word::empty();
        for e in path.windows(2) {
            w.extend(&self.edge_word(&e[0], &e[1])?);
        }
        Ok(w)
    }

    /// The class of `l`. A loop based elsewhere is conjugated by the tree
    /// path to its base, which contributes no letters.
    pub fn loop_word(&self, l: &EdgeLoop) -> Result<Word, GroupError> {
        self.path_word(l.vertices())
    }

    /// The based loop represented by generator `i`: tree path to its tail,
    /// the edge, tree path back from its head.
    pub fn generator_loop(&self, i: usize) -> EdgeLoop {
        let (a, b) = &self.generators[i];
        let mut vs = self.tree_path(a).expect("tree spans");
        let mut back = self.tree_path(b).expect("tree spans");
        back.reverse();
        vs.extend(back);
        EdgeLoop::new(EdgePath::new(vs).expect("nonempty")).expect("closed at the basepoint")
    }

    /// Sparse exponent-sum rows of the relators, zero rows dropped.
    pub fn relation_rows(&self) -> Vec<BTreeMap<usize, BigInt>> {
        self.relators
            .iter()
            .map(Word::sparse_exponents)
            .filter(|r| !r.is_empty())
            .collect()
    }

    /// Whether Tietze elimination of generators occurring once in some
    /// relator leaves at most one generator, so the group is cyclic.
    ///
    /// Deterministic and bounded: gives up (returns `false`) once the
    /// relators grow past `letter_budget` letters in total.
    pub fn is_cyclic_by_elimination(&self, letter_budget: usize) -> bool {
        let mut alive: BTreeSet<usize> = (0..self.generators.len()).collect();
        let mut rels: Vec<Word> = self
            .relators
            .iter()
            .map(Word::cyclically_reduced)
            .filter(|w| !w.is_empty())
            .collect();
        while alive.len() > 1 {
            let Some((ri, pos)) = pick_eliminable(&rels) else {
                return false;
            };
            let r = rels.swap_remove(ri);
            let l = r.letters()[pos];
            // rotating r = u·x·w to x·(w·u) gives x = (w·u)⁻¹
            let rest = Word::new(
                r.letters()[pos + 1..]
                    .iter()
                    .chain(&r.letters()[..pos])
                    .copied()
                    .collect(),
            );
            let image = if l.inverse { rest } else { rest.inverse() };
            let image_inv = image.inverse();
            let mut total = 0;
            for w in rels.iter_mut() {
                if w.letters().iter().all(|x| x.generator != l.generator) {
                    total += w.len();
                    continue;
                }
                let mut out = Word::empty();
                for &x in w.letters() {
                    if x.generator != l.generator {
                        out.push(x);
                    } else if !x.inverse {
                        out.extend(&image);
                    } else {
                        out.extend(&image_inv);
                    }
                }
                *w = out.cyclically_reduced();
                total += w.len();
            }
            rels.retain(|w| !w.is_empty());
            alive.remove(&l.generator);
            if total > letter_budget {
                return false;
            }
        }
        true
    }
}

/// Shortest relator (ties by index) with a generator occurring exactly
/// once; returns the relator index and the letter position.
fn pick_eliminable(rels: &[Word]) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for (i, w) in rels.iter().enumerate() {
        if best.is_some_and(|(len, _, _)| w.len() >= len) {
            continue;
        }
        let mut count: BTreeMap<usize, usize> = BTreeMap::new();
        for l in w.letters() {
            *count.entry(l.generator).or_default() += 1;
        }
        if let Some(pos) = w.letters().iter().position(|l| count[&l.generator] == 1) {
            best = Some((w.len(), i, pos));
        }
    }
    best.map(|(_, i, pos)| (i, pos))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Abelianization;
    use crate::task::catalog;

    fn v(s: &str) -> VertexId {
        VertexId::from(s)
    }

    fn triangle_loop(names: &[&str]) -> EdgeLoop {
        EdgeLoop::new(EdgePath::new(names.iter().map(|s| v(s))).unwrap()).unwrap()
    }

    #[test]
    fn hollow_triangle_is_free_on_one_generator() {
        let c = Complex::build([["0", "1"], ["1", "2"], ["2", "0"]]).unwrap();
        let p = presentation(&c, &v("0")).unwrap();
        assert_eq!(p.generator_count(), 1);
        assert!(p.relators().is_empty());
        assert_eq!(p.generators(), &[(v("1"), v("2"))]);
        let w = p.loop_word(&triangle_loop(&["0", "1", "2", "0"])).unwrap();
        assert_eq!(w.letters(), &[Letter::new(0, false)]);
        let twice = p.loop_word(&triangle_loop(&["0", "1", "2", "0", "1", "2", "0"])).unwrap();
        assert_eq!(twice.exponent_sums(1), vec![BigInt::from(2)]);
        assert!(p.loop_word(&triangle_loop(&["0"])).unwrap().is_empty());
    }

    #[test]
    fn filled_triangle_kills_its_generator() {
        let c = Complex::build([["0", "1", "2"]]).unwrap();
        let p = presentation(&c, &v("0")).unwrap();
        assert_eq!(p.generator_count(), 1);
        assert_eq!(p.relators().len(), 1);
        assert_eq!(p.relators()[0].letters(), &[Letter::new(0, false)]);
        assert!(Abelianization::new(&p).invariant_factors().is_empty());
    }

    #[test]
    fn torus_counts() {
        let t = catalog("torus").unwrap();
        let p = presentation(t.output(), &v("0")).unwrap();
        assert_eq!(p.generator_count(), 15);
        assert_eq!(p.relators().len(), 14);
        assert_eq!(p.tree().len(), 6);
    }

    #[test]
    fn errors() {
        let c = Complex::build([["0", "1"], ["2", "3"]]).unwrap();
        assert_eq!(presentation(&c, &v("0")).unwrap_err(), GroupError::NotConnected);
        assert_eq!(presentation(&c, &v("9")).unwrap_err(), GroupError::UnknownBasepoint(v("9")));
        let tri = Complex::build([["0", "1"], ["1", "2"]]).unwrap();
        let p = presentation(&tri, &v("0")).unwrap();
        assert_eq!(
            p.loop_word(&triangle_loop(&["0", "2", "0"])).unwrap_err(),
            GroupError::InvalidLoop(v("0"), v("2"))
        );
        assert_eq!(
            presentation_with_order(&tri, &v("0"), &[v("0"), v("1")]).unwrap_err(),
            GroupError::BadVertexOrder
        );
    }

    #[test]
    fn generator_loops_read_back_as_their_generator() {
        let t = catalog("projective-plane").unwrap();
        let p = presentation(t.output(), &v("0")).unwrap();
        for i in 0..p.generator_count() {
            let l = p.generator_loop(i);
            assert_eq!(l.base(), &v("0"));
            assert_eq!(p.loop_word(&l).unwrap().letters(), &[Letter::new(i, false)]);
        }
    }

    #[test]
    fn word_reduction() {
        let a = Letter::new(0, false);
        let b = Letter::new(1, false);
        let w = Word::new(vec![b.inverted(), a, b, b.inverted(), a.inverted(), b]);
        assert!(w.reduced().is_empty());
        let c = Word::new(vec![b, a, a, b.inverted()]);
        assert_eq!(c.cyclically_reduced().letters(), &[a, a]);
        assert_eq!(c.concat(&c.inverse()).reduced(), Word::empty());
    }

    #[test]
    fn cyclic_certificate() {
        let rp2 = catalog("projective-plane").unwrap();
        assert!(presentation(rp2.output(), &v("0")).unwrap().is_cyclic_by_elimination(10_000));
        let torus = catalog("torus").unwrap();
        assert!(!presentation(torus.output(), &v("0")).unwrap().is_cyclic_by_elimination(10_000));
        let d3 = Complex::build([["0", "1", "2", "3"]]).unwrap();
        assert!(presentation(&d3, &v("0")).unwrap().is_cyclic_by_elimination(10_000));
    }
}
