//! Exact sparse matrices over ℚ and fraction-free rank.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Q;

/// Sparse rational matrix; absent entries are zero.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SparseMatrixQ {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Q>,
}

impl SparseMatrixQ {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::new(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_dense(rows: &[Vec<Q>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::new(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged dense matrix");
            for (j, x) in r.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Q {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(Q::zero)
    }

    /// Overwrite an entry; zero removes it.
    pub fn set(&mut self, i: usize, j: usize, x: Q) {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        if x.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), x);
        }
    }

    /// Add to an entry.
    pub fn add_to(&mut self, i: usize, j: usize, x: Q) {
        let v = self.get(i, j) + x;
        self.set(i, j, v);
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Q)> {
        self.entries.iter().map(|(&(i, j), x)| (i, j, x))
    }

    pub fn scale_row(&mut self, i: usize, c: &Q) {
        let cols: Vec<usize> = self.entries.range((i, 0)..(i + 1, 0)).map(|(&(_, j), _)| j).collect();
        for j in cols {
            let v = self.get(i, j) * c;
            self.set(i, j, v);
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::new(self.cols, self.rows);
        for (&(i, j), x) in &self.entries {
            t.entries.insert((j, i), x.clone());
        }
        t
    }

    /// `self · other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut by_row: HashMap<usize, Vec<(usize, &Q)>> = HashMap::new();
        for (&(k, j), x) in &other.entries {
            by_row.entry(k).or_default().push((j, x));
        }
        let mut out = Self::new(self.rows, other.cols);
        for (&(i, k), a) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for (j, b) in row {
                    out.add_to(i, *j, a * *b);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    fn integer_rows(&self) -> Vec<BTreeMap<usize, BigInt>> {
        let mut rows: Vec<BTreeMap<usize, Q>> = vec![BTreeMap::new(); self.rows];
        for (&(i, j), x) in &self.entries {
            rows[i].insert(j, x.clone());
        }
        rows.into_iter().filter(|r| !r.is_empty()).map(clear_denominators).collect()
    }
}

fn clear_denominators(row: BTreeMap<usize, Q>) -> BTreeMap<usize, BigInt> {
    let lcm = row.values().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    primitive(row.into_iter().map(|(j, x)| (j, (x * Q::from_integer(lcm.clone())).to_integer())).collect())
}

/// Divide by the gcd of the entries and make the leading entry positive.
fn primitive(mut row: BTreeMap<usize, BigInt>) -> BTreeMap<usize, BigInt> {
    let g = row.values().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let negate = row.values().next().is_some_and(|x| x.is_negative());
    if !g.is_zero() && (!g.is_one() || negate) {
        let g = if negate { -g } else { g };
        for x in row.values_mut() {
            *x /= &g;
        }
    }
    row
}

/// Rank over ℚ by fraction-free row reduction over ℤ.
///
/// Each row is scaled to a primitive integer vector, then reduced against stored pivot rows by
/// `b·r − a·p` (no division except by the row content), so the computation is exact and its
/// result does not depend on scheduling.
pub fn exact_rank(m: &SparseMatrixQ) -> usize {
    let mut pivots: HashMap<usize, BTreeMap<usize, BigInt>> = HashMap::new();
    for mut row in m.integer_rows() {
        while let Some((&lead, _)) = row.iter().next() {
            let Some(p) = pivots.get(&lead) else { break };
            let a = row[&lead].clone();
            let b = p[&lead].clone();
            let mut next: BTreeMap<usize, BigInt> = BTreeMap::new();
            for (&j, x) in &row {
                next.insert(j, x * &b);
            }
            for (&j, y) in p {
                let v = next.remove(&j).unwrap_or_else(BigInt::zero) - &a * y;
                if !v.is_zero() {
                    next.insert(j, v);
                }
            }
            next.retain(|_, v| !v.is_zero());
            row = primitive(next);
        }
        if let Some((&lead, _)) = row.iter().next() {
            pivots.insert(lead, row);
        }
    }
    pivots.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q_frac, q_int};

    fn dense(rows: &[&[i64]]) -> SparseMatrixQ {
        SparseMatrixQ::from_dense(&rows.iter().map(|r| r.iter().map(|&x| q_int(x)).collect()).collect::<Vec<_>>())
    }

    #[test]
    fn small_ranks() {
        assert_eq!(exact_rank(&SparseMatrixQ::identity(5)), 5);
        assert_eq!(exact_rank(&SparseMatrixQ::new(3, 4)), 0);
        let m = dense(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        assert_eq!(exact_rank(&m), 2);
        let mut scaled = m.clone();
        scaled.scale_row(1, &q_frac(7, 3));
        assert_eq!(exact_rank(&scaled), 2);
        assert_eq!(exact_rank(&m.transpose()), 2);
    }

    #[test]
    fn set_prunes_zeros() {
        let mut m = SparseMatrixQ::new(2, 2);
        m.set(0, 1, q_int(3));
        m.add_to(0, 1, q_int(-3));
        assert_eq!(m.nnz(), 0);
    }
}
