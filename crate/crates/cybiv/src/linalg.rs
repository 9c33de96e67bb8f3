//! Exact linear algebra over the rationals.
//!
//! Forward elimination is fraction-free: rows are scaled to primitive
//! integer vectors and eliminated by cross-multiplication with gcd
//! stripping, so no rational arithmetic happens until the final
//! normalization to reduced row echelon form. RREF is unique, which makes
//! every kernel and solution basis canonical regardless of input order.

use crate::exactpoly::Scalar;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

/// Reduces `rows` (dense, `n` columns) to RREF in place; returns the pivot
/// column of each remaining row, in order.
pub fn rref(rows: &mut Vec<Vec<Scalar>>, n: usize) -> Vec<usize> {
    let mut int_rows: Vec<Vec<BigInt>> = rows.iter().map(|r| to_primitive_int(r, n)).collect();
    int_rows.retain(|r| r.iter().any(|x| !x.is_zero()));

    // Fraction-free forward elimination.
    let mut pivot_cols = Vec::new();
    let mut next_row = 0;
    for col in 0..n {
        let Some(pr) = (next_row..int_rows.len()).find(|&i| !int_rows[i][col].is_zero()) else {
            continue;
        };
        int_rows.swap(next_row, pr);
        let pivot = int_rows[next_row][col].clone();
        for i in next_row + 1..int_rows.len() {
            if int_rows[i][col].is_zero() {
                continue;
            }
            let cur = int_rows[i][col].clone();
            let g = gcd(&pivot, &cur);
            let (pm, cm) = (&cur / &g, &pivot / &g);
            for j in col..n {
                let v = &int_rows[i][j] * &cm - &int_rows[next_row][j] * &pm;
                int_rows[i][j] = v;
            }
            strip_content(&mut int_rows[i]);
        }
        pivot_cols.push(col);
        next_row += 1;
    }
    int_rows.truncate(next_row);

    // Back-substitution to RREF over the rationals.
    let mut out: Vec<Vec<Scalar>> = int_rows
        .iter()
        .map(|r| r.iter().map(|x| Scalar::from_integer(x.clone())).collect())
        .collect();
    for i in (0..out.len()).rev() {
        let col = pivot_cols[i];
        let inv = out[i][col].recip();
        for j in col..n {
            let v = out[i][j].clone() * inv.clone();
            out[i][j] = v;
        }
        for k in 0..i {
            if out[k][col].is_zero() {
                continue;
            }
            let f = out[k][col].clone();
            for j in col..n {
                let v = out[k][j].clone() - f.clone() * out[i][j].clone();
                out[k][j] = v;
            }
        }
    }
    *rows = out;
    pivot_cols
}

/// Canonical basis of the kernel of the map defined by constraint `rows`
/// over `n` unknowns. Each basis vector has a single free coordinate set
/// to 1, ordered by free column.
pub fn kernel_basis(mut rows: Vec<Vec<Scalar>>, n: usize) -> Vec<Vec<Scalar>> {
    let pivots = rref(&mut rows, n);
    let pivot_set: Vec<Option<usize>> = {
        let mut v = vec![None; n];
        for (i, &c) in pivots.iter().enumerate() {
            v[c] = Some(i);
        }
        v
    };
    let mut basis = Vec::new();
    for free in 0..n {
        if pivot_set[free].is_some() {
            continue;
        }
        let mut vec = vec![Scalar::zero(); n];
        vec[free] = Scalar::one();
        for (i, &c) in pivots.iter().enumerate() {
            vec[c] = -rows[i][free].clone();
        }
        basis.push(vec);
    }
    basis
}

/// Solves `A x = b` where `A` is given by columns over arbitrary ordered
/// row keys. Returns the canonical solution with all free variables 0, or
/// `None` when inconsistent.
pub fn solve<K: Ord + Clone>(
    columns: &[BTreeMap<K, Scalar>],
    target: &BTreeMap<K, Scalar>,
) -> Option<Vec<Scalar>> {
    let mut keys: Vec<K> = Vec::new();
    for c in columns.iter().chain(std::iter::once(target)) {
        keys.extend(c.keys().cloned());
    }
    keys.sort();
    keys.dedup();
    let index: BTreeMap<K, usize> = keys.iter().cloned().zip(0..).collect();

    let n = columns.len();
    let mut rows = vec![vec![Scalar::zero(); n + 1]; keys.len()];
    for (j, col) in columns.iter().enumerate() {
        for (k, v) in col {
            rows[index[k]][j] = v.clone();
        }
    }
    for (k, v) in target {
        rows[index[k]][n] = v.clone();
    }
    let pivots = rref(&mut rows, n + 1);
    if pivots.contains(&n) {
        return None;
    }
    let mut x = vec![Scalar::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rows[i][n].clone();
    }
    Some(x)
}

/// A growing subspace given by sparse vectors over an ordered key set,
/// kept in reduced echelon form (leading key = smallest key of each row).
#[derive(Clone, Default)]
pub struct SpanSpace<K: Ord + Clone> {
    rows: Vec<BTreeMap<K, Scalar>>,
}

impl<K: Ord + Clone> SpanSpace<K> {
    pub fn new() -> Self {
        SpanSpace { rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the space; the remainder is zero iff `v` lies
    /// in the span.
    pub fn reduce(&self, mut v: BTreeMap<K, Scalar>) -> BTreeMap<K, Scalar> {
        for row in &self.rows {
            let lead = row.keys().next().unwrap();
            if let Some(c) = v.get(lead).cloned() {
                if !c.is_zero() {
                    sub_scaled(&mut v, row, &c);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &BTreeMap<K, Scalar>) -> bool {
        self.reduce(v.clone()).is_empty()
    }

    /// Adds `v` to the space. Returns true when the dimension grew.
    pub fn insert(&mut self, v: BTreeMap<K, Scalar>) -> bool {
        let mut v = self.reduce(v);
        v.retain(|_, c| !c.is_zero());
        if v.is_empty() {
            return false;
        }
        let lead_coeff = v.values().next().unwrap().clone();
        let inv = lead_coeff.recip();
        for c in v.values_mut() {
            *c *= inv.clone();
        }
        let lead = v.keys().next().unwrap().clone();
        for row in &mut self.rows {
            if let Some(c) = row.get(&lead).cloned() {
                if !c.is_zero() {
                    sub_scaled(row, &v, &c);
                }
            }
        }
        let at = self
            .rows
            .partition_point(|r| r.keys().next().unwrap() < &lead);
        self.rows.insert(at, v);
        true
    }

    pub fn rows(&self) -> &[BTreeMap<K, Scalar>] {
        &self.rows
    }
}

fn sub_scaled<K: Ord + Clone>(
    v: &mut BTreeMap<K, Scalar>,
    row: &BTreeMap<K, Scalar>,
    factor: &Scalar,
) {
    for (k, c) in row {
        let entry = v.entry(k.clone()).or_insert_with(Scalar::zero);
        *entry -= factor.clone() * c.clone();
        if entry.is_zero() {
            v.remove(k);
        }
    }
}

fn to_primitive_int(row: &[Scalar], n: usize) -> Vec<BigInt> {
    let mut denom_lcm = BigInt::one();
    for x in row.iter().take(n) {
        if !x.is_zero() {
            denom_lcm = lcm(&denom_lcm, x.denom());
        }
    }
    let mut out: Vec<BigInt> = (0..n)
        .map(|j| {
            row.get(j)
                .map(|x| x.numer() * (&denom_lcm / x.denom()))
                .unwrap_or_else(BigInt::zero)
        })
        .collect();
    strip_content(&mut out);
    out
}

fn strip_content(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in row.iter() {
        if !x.is_zero() {
            g = gcd(&g, x);
        }
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in row.iter_mut() {
        *x = &*x / &g;
    }
}

fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let mut a = a.abs();
    let mut b = b.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    (a * b).abs() / gcd(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{ratio, scalar};

    fn row(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| scalar(x)).collect()
    }

    #[test]
    fn rref_identity_block() {
        let mut rows = vec![row(&[2, 4, 6]), row(&[1, 2, 4])];
        let p = rref(&mut rows, 3);
        assert_eq!(p, vec![0, 2]);
        assert_eq!(rows[0], row(&[1, 2, 0]));
        assert_eq!(rows[1], row(&[0, 0, 1]));
    }

    #[test]
    fn kernel_of_rank_one_map() {
        let rows = vec![row(&[1, 2, -1])];
        let k = kernel_basis(rows, 3);
        assert_eq!(k.len(), 2);
        assert_eq!(k[0], vec![scalar(-2), scalar(1), scalar(0)]);
        assert_eq!(k[1], vec![scalar(1), scalar(0), scalar(1)]);
    }

    #[test]
    fn kernel_is_independent_of_row_order() {
        let a = vec![row(&[1, 1, 0, 2]), row(&[0, 3, 1, 1])];
        let b = vec![row(&[0, 3, 1, 1]), row(&[1, 1, 0, 2])];
        assert_eq!(kernel_basis(a, 4), kernel_basis(b, 4));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let cols = vec![
            BTreeMap::from([("a", scalar(1)), ("b", scalar(1))]),
            BTreeMap::from([("b", scalar(2))]),
        ];
        let target = BTreeMap::from([("a", scalar(3)), ("b", scalar(4))]);
        let x = solve(&cols, &target).unwrap();
        assert_eq!(x, vec![scalar(3), ratio(1, 2)]);
        let bad = BTreeMap::from([("c", scalar(1))]);
        assert!(solve(&cols, &bad).is_none());
    }

    #[test]
    fn span_space_membership() {
        let mut s: SpanSpace<u32> = SpanSpace::new();
        assert!(s.insert(BTreeMap::from([(0, scalar(2)), (1, scalar(2))])));
        assert!(s.insert(BTreeMap::from([(1, scalar(5))])));
        assert!(!s.insert(BTreeMap::from([(0, scalar(7)), (1, scalar(-3))])));
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&BTreeMap::from([(0, scalar(1))])));
        assert!(!s.contains(&BTreeMap::from([(2, scalar(1))])));
    }
}
