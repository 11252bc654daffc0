//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use loop_agreement::complex::{Complex, Simplex, VertexId};
use loop_agreement::group::IntMatrix;
use loop_agreement::task::{gamma, InputSimplex, LoopTask};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Vertex maps `src.output → tgt.output` (no subdivision) that are
/// simplicial and respect both specification maps, found by backtracking.
/// Stops after `limit` solutions.
pub fn search_decision_maps(
    src: &LoopTask,
    tgt: &LoopTask,
    limit: usize,
) -> Vec<BTreeMap<VertexId, VertexId>> {
    let gs: Vec<(Complex, Complex)> =
        InputSimplex::ALL.iter().map(|&s| (gamma(src, s), gamma(tgt, s))).collect();

    // corners first, then breadth-first so neighbours are assigned early
    let adj = src.output().adjacency();
    let mut order: Vec<VertexId> = Vec::new();
    let mut seen = BTreeSet::new();
    let mut queue: VecDeque<VertexId> = src.triangle_loop().corners().iter().cloned().collect();
    while let Some(v) = queue.pop_front() {
        if !seen.insert(v.clone()) {
            continue;
        }
        order.push(v.clone());
        for w in &adj[&v] {
            if !seen.contains(w) {
                queue.push_back(w.clone());
            }
        }
    }
    for v in src.output().vertices() {
        if seen.insert(v.clone()) {
            order.push(v.clone());
        }
    }
    let pos: BTreeMap<&VertexId, usize> = order.iter().enumerate().map(|(i, v)| (v, i)).collect();

    let candidates: Vec<Vec<VertexId>> = order
        .iter()
        .map(|v| {
            let mut allowed: BTreeSet<VertexId> = tgt.output().vertices().cloned().collect();
            for (gs_src, gs_tgt) in &gs {
                if gs_src.contains_vertex(v) {
                    allowed.retain(|w| gs_tgt.contains_vertex(w));
                }
            }
            allowed.into_iter().collect()
        })
        .collect();

    // each simplex is checked once its last vertex in `order` is placed
    let mut checks: Vec<Vec<(Simplex, Vec<usize>)>> = vec![Vec::new(); order.len()];
    for s in src.output().simplexes() {
        let last = s.vertices().iter().map(|v| pos[v]).max().expect("nonempty");
        let carriers = (0..gs.len()).filter(|&k| gs[k].0.contains(s)).collect();
        checks[last].push((s.clone(), carriers));
    }

    let mut out = Vec::new();
    let mut current: Vec<Option<VertexId>> = vec![None; order.len()];
    backtrack(0, &order, &pos, &candidates, &checks, &gs, &mut current, &mut out, limit);
    out
}

#[allow(clippy::too_many_arguments)]
fn backtrack(
    i: usize,
    order: &[VertexId],
    pos: &BTreeMap<&VertexId, usize>,
    candidates: &[Vec<VertexId>],
    checks: &[Vec<(Simplex, Vec<usize>)>],
    gs: &[(Complex, Complex)],
    current: &mut Vec<Option<VertexId>>,
    out: &mut Vec<BTreeMap<VertexId, VertexId>>,
    limit: usize,
) {
    if out.len() >= limit {
        return;
    }
    if i == order.len() {
        out.push(
            order
                .iter()
                .cloned()
                .zip(current.iter().map(|w| w.clone().expect("assigned")))
                .collect(),
        );
        return;
    }
    'cand: for w in &candidates[i] {
        current[i] = Some(w.clone());
        for (s, carriers) in &checks[i] {
            let image: BTreeSet<VertexId> = s
                .vertices()
                .iter()
                .map(|v| current[pos[v]].clone().expect("earlier vertex"))
                .collect();
            let image = Simplex::new(image).expect("nonempty");
            if carriers.iter().any(|&k| !gs[k].1.contains(&image)) {
                continue 'cand;
            }
        }
        backtrack(i + 1, order, pos, candidates, checks, gs, current, out, limit);
        if out.len() >= limit {
            break;
        }
    }
    current[i] = None;
}

/// Fraction-free Gaussian elimination.
pub fn det(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows(), m.cols());
    let n = m.rows();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut a: Vec<Vec<BigInt>> = m.to_rows();
    let mut sign = 1i32;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for last in k - 1..n {
        for mut s in subsets(last, k - 1) {
            s.push(last);
            out.push(s);
        }
    }
    out
}

/// `D_k` = gcd of all `k×k` minors, for `k = 1..=min(rows, cols)`.
pub fn determinantal_divisors(m: &IntMatrix) -> Vec<BigInt> {
    let r = m.rows().min(m.cols());
    (1..=r)
        .map(|k| {
            let mut g = BigInt::zero();
            for rows in subsets(m.rows(), k) {
                for cols in subsets(m.cols(), k) {
                    let minor: Vec<Vec<BigInt>> = rows
                        .iter()
                        .map(|&i| cols.iter().map(|&j| m[(i, j)].clone()).collect())
                        .collect();
                    g = g.gcd(&det(&IntMatrix::from_rows(&minor)));
                }
            }
            g.abs()
        })
        .collect()
}
