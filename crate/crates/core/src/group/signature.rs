use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::smith::{multi_ext_gcd, smith_columns_only};
use super::{presentation, GroupError, GroupPresentation, IntMatrix, Word};
use crate::task::LoopTask;

/// A finitely generated abelian group `Z/d₁ ⊕ … ⊕ Z/d_k` (with `d = 0`
/// for `Z`) together with a distinguished element.
///
/// Finite factors come first in a divisibility chain, then the zeros.
/// Factors equal to 1 never appear. Coordinates on finite factors are
/// reduced into `[0, d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointedAbelianSignature {
    invariant_factors: Vec<BigInt>,
    element: Vec<BigInt>,
}

impl PointedAbelianSignature {
    /// The signature of `(Z/o₁ ⊕ … ⊕ Z/o_n, x)` for arbitrary orders
    /// (`0` meaning infinite), brought to normal form.
    pub fn normalize(orders: &[BigInt], element: &[BigInt]) -> Self {
        assert_eq!(orders.len(), element.len(), "element length must match orders");
        let rows = orders
            .iter()
            .enumerate()
            .filter(|(_, o)| !o.is_zero())
            .map(|(i, o)| BTreeMap::from([(i, o.abs())]))
            .collect();
        let ab = Abelianization::from_relations(orders.len(), rows);
        ab.signature_of(element)
    }

    /// The trivial group.
    pub fn trivial() -> Self {
        PointedAbelianSignature { invariant_factors: Vec::new(), element: Vec::new() }
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn element(&self) -> &[BigInt] {
        &self.element
    }

    pub fn len(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn finite_factors(&self) -> &[BigInt] {
        let k = self.invariant_factors.iter().take_while(|d| !d.is_zero()).count();
        &self.invariant_factors[..k]
    }

    pub fn free_rank(&self) -> usize {
        self.invariant_factors.len() - self.finite_factors().len()
    }

    /// The same group with the element negated.
    pub fn negated(&self) -> Self {
        let element = self
            .element
            .iter()
            .zip(&self.invariant_factors)
            .map(|(x, d)| reduce(&-x, d))
            .collect();
        PointedAbelianSignature { invariant_factors: self.invariant_factors.clone(), element }
    }

    /// Same group, ignoring the element.
    pub fn same_group(&self, other: &Self) -> bool {
        self.invariant_factors == other.invariant_factors
    }

    /// `factors: [..] free_rank: r element: [..]`
    pub fn report(&self) -> String {
        format!(
            "factors: {} free_rank: {} element: {}",
            list(self.finite_factors()),
            self.free_rank(),
            list(&self.element)
        )
    }
}

impl fmt::Display for PointedAbelianSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.report())
    }
}

pub(crate) fn list(xs: &[BigInt]) -> String {
    let parts: Vec<String> = xs.iter().map(BigInt::to_string).collect();
    format!("[{}]", parts.join(","))
}

/// `x mod d` into `[0, d)`; unchanged for `d = 0`.
pub(crate) fn reduce(x: &BigInt, d: &BigInt) -> BigInt {
    if d.is_zero() {
        x.clone()
    } else {
        x.mod_floor(d)
    }
}

/// Direct sum of pointed groups, element concatenated, renormalized.
pub fn direct_sum(parts: &[PointedAbelianSignature]) -> PointedAbelianSignature {
    let orders: Vec<BigInt> = parts.iter().flat_map(|p| p.invariant_factors.iter().cloned()).collect();
    let element: Vec<BigInt> = parts.iter().flat_map(|p| p.element.iter().cloned()).collect();
    PointedAbelianSignature::normalize(&orders, &element)
}

/// The abelianization `Z^n / ⟨relations⟩` with a change of basis onto its
/// cyclic decomposition.
///
/// Pivots with coefficient ±1 are eliminated on the sparse rows first; the
/// remaining block goes through a dense Smith normal form.
#[derive(Clone, Debug)]
pub struct Abelianization {
    generator_count: usize,
    steps: Vec<(usize, BTreeMap<usize, BigInt>)>,
    residual_columns: Vec<usize>,
    v: IntMatrix,
    v_inv: IntMatrix,
    diagonal: Vec<BigInt>,
    kept: Vec<usize>,
}

impl Abelianization {
    pub fn new(p: &GroupPresentation) -> Self {
        Self::from_relations(p.generator_count(), p.relation_rows())
    }

    /// `rows` are sparse relation vectors over `generator_count` columns.
    pub fn from_relations(generator_count: usize, rows: Vec<BTreeMap<usize, BigInt>>) -> Self {
        let (steps, residual_rows) = eliminate_unit_pivots(generator_count, rows);
        let eliminated: BTreeSet<usize> = steps.iter().map(|(c, _)| *c).collect();
        let residual_columns: Vec<usize> =
            (0..generator_count).filter(|c| !eliminated.contains(c)).collect();
        let position: BTreeMap<usize, usize> =
            residual_columns.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let dense: BTreeSet<Vec<BigInt>> = residual_rows
            .iter()
            .map(|r| {
                let mut d = vec![BigInt::zero(); residual_columns.len()];
                for (c, x) in r {
                    d[position[c]] = x.clone();
                }
                d
            })
            .collect();
        let m = IntMatrix::from_rows_with_cols(dense.into_iter().collect(), residual_columns.len());
        let (d, v, v_inv) = smith_columns_only(&m);
        let diagonal: Vec<BigInt> = (0..residual_columns.len())
            .map(|i| if i < d.rows() { d[(i, i)].clone() } else { BigInt::zero() })
            .collect();
        let kept = (0..diagonal.len()).filter(|&i| !diagonal[i].is_one()).collect();
        Abelianization { generator_count, steps, residual_columns, v, v_inv, diagonal, kept }
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.kept.iter().map(|&i| self.diagonal[i].clone()).collect()
    }

    /// Coordinates of an exponent vector in the cyclic decomposition,
    /// reduced modulo the finite factors.
    pub fn coordinates(&self, exponents: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(exponents.len(), self.generator_count, "exponent vector length");
        let mut x = exponents.to_vec();
        for (c, row) in &self.steps {
            if x[*c].is_zero() {
                continue;
            }
            let k = &x[*c] * &row[c];
            for (j, r) in row {
                x[*j] -= &k * r;
            }
        }
        let residual: Vec<BigInt> = self.residual_columns.iter().map(|&c| x[c].clone()).collect();
        let y = self.v.left_mul_vec(&residual);
        self.kept.iter().map(|&i| reduce(&y[i], &self.diagonal[i])).collect()
    }

    pub fn word_coordinates(&self, w: &Word) -> Vec<BigInt> {
        self.coordinates(&w.exponent_sums(self.generator_count))
    }

    /// An exponent vector whose class is the `i`-th cyclic generator.
    pub fn factor_representative(&self, i: usize) -> Vec<BigInt> {
        let row = self.v_inv.row(self.kept[i]);
        let mut x = vec![BigInt::zero(); self.generator_count];
        for (j, &c) in self.residual_columns.iter().enumerate() {
            x[c] = row[j].clone();
        }
        x
    }

    pub fn signature_of(&self, exponents: &[BigInt]) -> PointedAbelianSignature {
        PointedAbelianSignature {
            invariant_factors: self.invariant_factors(),
            element: self.coordinates(exponents),
        }
    }

    pub fn signature(&self, w: &Word) -> PointedAbelianSignature {
        self.signature_of(&w.exponent_sums(self.generator_count))
    }
}

type SparseRow = BTreeMap<usize, BigInt>;

/// Repeated passes over the rows; each row with a ±1 entry becomes a pivot
/// on its sparsest such column and is cleared from every other row.
fn eliminate_unit_pivots(
    n: usize,
    rows: Vec<SparseRow>,
) -> (Vec<(usize, SparseRow)>, Vec<SparseRow>) {
    let mut rows: Vec<Option<SparseRow>> = rows.into_iter().map(Some).collect();
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (i, r) in rows.iter().enumerate() {
        for c in r.as_ref().expect("fresh").keys() {
            col_rows[*c].insert(i);
        }
    }
    let mut steps = Vec::new();
    loop {
        let mut progressed = false;
        for ri in 0..rows.len() {
            let Some(row) = &rows[ri] else { continue };
            let pivot = row
                .iter()
                .filter(|(_, x)| x.abs().is_one())
                .map(|(c, _)| *c)
                .min_by_key(|c| (col_rows[*c].len(), *c));
            let Some(c) = pivot else { continue };
            let piv = rows[ri].take().expect("alive");
            for j in piv.keys() {
                col_rows[*j].remove(&ri);
            }
            let s = piv[&c].clone();
            let others: Vec<usize> = col_rows[c].iter().copied().collect();
            for oi in others {
                let other = rows[oi].as_mut().expect("indexed rows are alive");
                let k = &other[&c] * &s;
                for (j, x) in &piv {
                    let e = other.entry(*j).or_default();
                    *e -= &k * x;
                    if e.is_zero() {
                        other.remove(j);
                        col_rows[*j].remove(&oi);
                    } else {
                        col_rows[*j].insert(oi);
                    }
                }
                if other.is_empty() {
                    rows[oi] = None;
                }
            }
            steps.push((c, piv));
            progressed = true;
        }
        if !progressed {
            break;
        }
    }
    (steps, rows.into_iter().flatten().collect())
}

/// Presentation at the first loop corner, its abelianization and the
/// signature of the loop.
pub fn task_abelianization(
    t: &LoopTask,
) -> Result<(GroupPresentation, Abelianization, PointedAbelianSignature), GroupError> {
    let p = presentation(t.output(), t.triangle_loop().corner(0))?;
    let ab = Abelianization::new(&p);
    let w = p.loop_word(&t.triangle_loop().as_edge_loop())?;
    let sig = ab.signature(&w);
    Ok((p, ab, sig))
}

pub fn abelian_signature(p: &GroupPresentation, w: &Word) -> PointedAbelianSignature {
    Abelianization::new(p).signature(w)
}

pub fn task_signature(t: &LoopTask) -> Result<PointedAbelianSignature, GroupError> {
    Ok(task_abelianization(t)?.2)
}

/// A homomorphism between the cyclic decompositions of two signatures
/// carrying one element to the other. Column `i` is the image of the
/// `i`-th source generator; entries are reduced modulo the target factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianHom {
    source: PointedAbelianSignature,
    target: PointedAbelianSignature,
    matrix: IntMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HomError {
    #[error("matrix is {rows}×{cols}, expected {want_rows}×{want_cols}")]
    Shape { rows: usize, cols: usize, want_rows: usize, want_cols: usize },
    #[error("column {0} does not respect the order of its source factor")]
    Order(usize),
    #[error("the source element does not map to the target element")]
    Element,
    #[error("composed homomorphisms do not share a middle group")]
    Mismatch,
}

impl AbelianHom {
    pub fn new(
        source: PointedAbelianSignature,
        target: PointedAbelianSignature,
        matrix: IntMatrix,
    ) -> Result<Self, HomError> {
        let (want_rows, want_cols) = (target.len(), source.len());
        if matrix.rows() != want_rows || matrix.cols() != want_cols {
            return Err(HomError::Shape {
                rows: matrix.rows(),
                cols: matrix.cols(),
                want_rows,
                want_cols,
            });
        }
        let mut m = matrix;
        for j in 0..want_rows {
            for i in 0..want_cols {
                m[(j, i)] = reduce(&m[(j, i)], &target.invariant_factors[j]);
            }
        }
        for (i, d) in source.invariant_factors.iter().enumerate() {
            for (j, f) in target.invariant_factors.iter().enumerate() {
                if !reduce(&(d * &m[(j, i)]), f).is_zero() {
                    return Err(HomError::Order(i));
                }
            }
        }
        if m.mul_vec(&source.element)
            .iter()
            .zip(&target.invariant_factors)
            .zip(&target.element)
            .any(|((y, f), b)| &reduce(y, f) != b)
        {
            return Err(HomError::Element);
        }
        Ok(AbelianHom { source, target, matrix: m })
    }

    pub fn identity(s: &PointedAbelianSignature) -> Self {
        AbelianHom::new(s.clone(), s.clone(), IntMatrix::identity(s.len()))
            .expect("identity is a pointed homomorphism")
    }

    pub fn source(&self) -> &PointedAbelianSignature {
        &self.source
    }

    pub fn target(&self) -> &PointedAbelianSignature {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &AbelianHom) -> Result<AbelianHom, HomError> {
        if self.target != next.source {
            return Err(HomError::Mismatch);
        }
        AbelianHom::new(self.source.clone(), next.target.clone(), &next.matrix * &self.matrix)
    }
}

/// Why no pointed homomorphism exists: the target coordinate is outside
/// the subgroup the source can reach there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    pub coordinate: usize,
    pub order: BigInt,
    pub required: BigInt,
    pub reachable_generator: BigInt,
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let group =
            if self.order.is_zero() { "Z".to_string() } else { format!("Z/{}", self.order) };
        if self.reachable_generator.is_zero() {
            write!(
                f,
                "target coordinate {} in {}: the element is {} but every map sends the source there to 0",
                self.coordinate, group, self.required
            )
        } else {
            write!(
                f,
                "target coordinate {} in {}: {} is not a multiple of {}",
                self.coordinate, group, self.required, self.reachable_generator
            )
        }
    }
}

/// A pointed homomorphism `a → b`, or the coordinate where none can exist.
///
/// Decided independently on each cyclic factor of `b`: the images of the
/// source generators there range over the multiples of `f / gcd(d_i, f)`.
pub fn find_pointed_hom(
    a: &PointedAbelianSignature,
    b: &PointedAbelianSignature,
) -> Result<AbelianHom, Obstruction> {
    let mut m = IntMatrix::zeros(b.len(), a.len());
    for (j, (f, target)) in b.invariant_factors.iter().zip(&b.element).enumerate() {
        let (steps, values): (Vec<BigInt>, Vec<BigInt>) = a
            .invariant_factors
            .iter()
            .zip(&a.element)
            .map(|(d, x)| {
                let step = if f.is_zero() {
                    if d.is_zero() { BigInt::one() } else { BigInt::zero() }
                } else {
                    f / d.gcd(f)
                };
                let v = x * &step;
                (step, v)
            })
            .unzip();
        let mut vals = values.clone();
        if !f.is_zero() {
            vals.push(f.clone());
        }
        let (g, coeffs) = multi_ext_gcd(&vals);
        let solvable = if g.is_zero() { target.is_zero() } else { target.is_multiple_of(&g) };
        if !solvable {
            return Err(Obstruction {
                coordinate: j,
                order: f.clone(),
                required: target.clone(),
                reachable_generator: g,
            });
        }
        if g.is_zero() {
            continue;
        }
        let q = target / &g;
        for i in 0..a.len() {
            m[(j, i)] = &steps[i] * &coeffs[i] * &q;
        }
    }
    Ok(AbelianHom::new(a.clone(), b.clone(), m).expect("solution satisfies the constraints"))
}

pub fn pointed_hom_exists(a: &PointedAbelianSignature, b: &PointedAbelianSignature) -> bool {
    find_pointed_hom(a, b).is_ok()
}
