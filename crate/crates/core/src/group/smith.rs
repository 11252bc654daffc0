use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// `u · m · v = d` with `u`, `v` unimodular and `d` in Smith normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithForm {
    /// The `min(rows, cols)` diagonal entries, zeros included.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Diagonal, non-negative, nonzero entries first, each dividing the next.
pub fn is_smith_form(d: &IntMatrix) -> bool {
    if !d.is_diagonal() {
        return false;
    }
    let n = d.rows().min(d.cols());
    let diag: Vec<&BigInt> = (0..n).map(|i| &d[(i, i)]).collect();
    if diag.iter().any(|x| x.is_negative()) {
        return false;
    }
    diag.windows(2).all(|w| {
        if w[0].is_zero() {
            w[1].is_zero()
        } else {
            w[1].is_multiple_of(w[0])
        }
    })
}

struct Work {
    d: IntMatrix,
    u: Option<IntMatrix>,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        if let Some(u) = &mut self.u {
            u.swap_rows(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.d.add_row_multiple(dst, src, k);
        if let Some(u) = &mut self.u {
            u.add_row_multiple(dst, src, k);
        }
    }

    // The inverse of a column operation acts on the rows of v_inv.
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.d.add_col_multiple(dst, src, k);
        self.v.add_col_multiple(dst, src, k);
        self.v_inv.add_row_multiple(src, dst, &-k);
    }

    fn negate_row(&mut self, i: usize) {
        self.d.negate_row(i);
        if let Some(u) = &mut self.u {
            u.negate_row(i);
        }
    }

    /// Smallest nonzero `|d[i][j]|` with `i, j ≥ t`, ties by row-major index.
    fn smallest_in_block(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.d.rows() {
            for j in t..self.d.cols() {
                let x = &self.d[(i, j)];
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs() < self.d[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    /// Smallest nonzero entry strictly below or right of the pivot.
    fn smallest_in_cross(&self, t: usize) -> Option<(usize, usize)> {
        let cells = (t + 1..self.d.rows())
            .map(|i| (i, t))
            .chain((t + 1..self.d.cols()).map(|j| (t, j)));
        let mut best: Option<(usize, usize)> = None;
        for (i, j) in cells {
            let x = &self.d[(i, j)];
            if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < self.d[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
        best
    }

    fn first_not_divisible(&self, t: usize) -> Option<usize> {
        let p = &self.d[(t, t)];
        for i in t + 1..self.d.rows() {
            for j in t + 1..self.d.cols() {
                if !self.d[(i, j)].is_multiple_of(p) {
                    return Some(i);
                }
            }
        }
        None
    }

    fn reduce_at(&mut self, t: usize) {
        loop {
            let p = self.d[(t, t)].clone();
            for i in t + 1..self.d.rows() {
                let q = &self.d[(i, t)] / &p;
                if !q.is_zero() {
                    self.add_row(i, t, &-q);
                }
            }
            for j in t + 1..self.d.cols() {
                let q = &self.d[(t, j)] / &p;
                if !q.is_zero() {
                    self.add_col(j, t, &-q);
                }
            }
            if let Some((i, j)) = self.smallest_in_cross(t) {
                if i != t {
                    self.swap_rows(t, i);
                } else {
                    self.swap_cols(t, j);
                }
                continue;
            }
            match self.first_not_divisible(t) {
                Some(i) => self.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if self.d[(t, t)].is_negative() {
            self.negate_row(t);
        }
    }
}

/// Smith normal form with transforms.
///
/// Pivots on the smallest nonzero absolute value in the remaining block,
/// ties broken by row-major position, so the transforms are deterministic.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let w = run(m, true);
    SmithForm { u: w.u.expect("tracked"), d: w.d, v: w.v, v_inv: w.v_inv }
}

/// `(d, v, v_inv)` without the row transform, for tall matrices.
pub(crate) fn smith_columns_only(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let w = run(m, false);
    (w.d, w.v, w.v_inv)
}

fn run(m: &IntMatrix, track_rows: bool) -> Work {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        d: m.clone(),
        u: track_rows.then(|| IntMatrix::identity(rows)),
        v: IntMatrix::identity(cols),
        v_inv: IntMatrix::identity(cols),
    };
    for t in 0..rows.min(cols) {
        let Some((i, j)) = w.smallest_in_block(t) else {
            break;
        };
        w.swap_rows(t, i);
        w.swap_cols(t, j);
        w.reduce_at(t);
    }
    w
}

/// Extended gcd: `(g, x, y)` with `a·x + b·y = g ≥ 0`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// `(g, c)` with `Σ c_i · values_i = g = gcd(values) ≥ 0`.
pub fn multi_ext_gcd(values: &[BigInt]) -> (BigInt, Vec<BigInt>) {
    let mut g = BigInt::zero();
    let mut coeffs = vec![BigInt::zero(); values.len()];
    for (i, v) in values.iter().enumerate() {
        let (ng, x, y) = ext_gcd(&g, v);
        for c in coeffs[..i].iter_mut() {
            *c *= &x;
        }
        coeffs[i] = y;
        g = ng;
    }
    (g, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(m);
        assert_eq!(&(&s.u * m) * &s.v, s.d);
        assert_eq!(&s.v * &s.v_inv, IntMatrix::identity(m.cols()));
        assert!(is_smith_form(&s.d), "{}", s.d);
        s
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_examples() {
        let row = IntMatrix::from_rows(&[vec![4, 6]]);
        assert_eq!(check(&row).d, IntMatrix::from_rows(&[vec![2, 0]]));
        let sq = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        assert_eq!(check(&sq).diagonal(), ints(&[2, 4]));
        let z = IntMatrix::zeros(2, 3);
        let s = check(&z);
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(s.v, IntMatrix::identity(3));
    }

    #[test]
    fn classic_example() {
        let m = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(check(&m).diagonal(), ints(&[2, 6, 12]));
    }

    #[test]
    fn coprime_diagonal_merges() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(check(&m).diagonal(), ints(&[1, 6]));
    }

    #[test]
    fn rectangular_and_zero() {
        let m = IntMatrix::from_rows(&[vec![0, 0, 0], vec![0, 4, 0]]);
        assert_eq!(check(&m).diagonal(), ints(&[4, 0]));
        let z = IntMatrix::zeros(3, 2);
        assert_eq!(check(&z).diagonal(), ints(&[0, 0]));
        let e = IntMatrix::zeros(0, 3);
        assert!(check(&e).diagonal().is_empty());
    }

    #[test]
    fn negative_pivot_made_positive() {
        let m = IntMatrix::from_rows(&[vec![-5]]);
        assert_eq!(check(&m).diagonal(), ints(&[5]));
    }

    #[test]
    fn multi_gcd_combination() {
        let vals = ints(&[12, -18, 8]);
        let (g, c) = multi_ext_gcd(&vals);
        assert_eq!(g, BigInt::from(2));
        let s: BigInt = vals.iter().zip(&c).map(|(a, b)| a * b).sum();
        assert_eq!(s, g);
        assert_eq!(multi_ext_gcd(&[]).0, BigInt::zero());
    }
}
