//! Exact sparse row reduction over the rationals.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::scalar::Rational;

/// Sparse vector: column index → nonzero coefficient.
pub type SparseVec = BTreeMap<usize, Rational>;

pub fn add_entry(v: &mut SparseVec, j: usize, c: Rational) {
    let e = v.entry(j).or_insert_with(Rational::zero);
    *e += c;
    if e.is_zero() {
        v.remove(&j);
    }
}

/// `v += a · row`.
fn axpy(v: &mut SparseVec, a: &Rational, row: &SparseVec) {
    for (j, x) in row {
        add_entry(v, *j, a * x);
    }
}

/// Row echelon form built incrementally; each stored row has pivot coefficient 1
/// at its leading column.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Eliminates leading entries until the leading column is not a pivot.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        loop {
            let Some((&j, c)) = v.iter().next() else { break };
            match self.rows.get(&j) {
                Some(row) => {
                    let a = -c.clone();
                    axpy(&mut v, &a, row);
                }
                None => break,
            }
        }
        v
    }

    /// Adds `v` to the span; returns whether it was independent.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let v = self.reduce(v);
        let Some((&j, c)) = v.iter().next() else { return false };
        let inv = c.recip();
        let row = v.into_iter().map(|(k, x)| (k, x * &inv)).collect();
        self.rows.insert(j, row);
        true
    }

    pub fn contains(&self, v: SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Reduced row echelon form: pivot columns appear in exactly one row.
    pub fn into_rref(mut self) -> BTreeMap<usize, SparseVec> {
        let pivots: Vec<usize> = self.rows.keys().copied().collect();
        for &p in pivots.iter().rev() {
            let mut row = self.rows.remove(&p).expect("pivot row");
            let hits: Vec<(usize, Rational)> = row
                .iter()
                .filter(|(j, _)| **j != p && self.rows.contains_key(j))
                .map(|(j, c)| (*j, c.clone()))
                .collect();
            for (q, c) in hits {
                let a = -c;
                axpy(&mut row, &a, &self.rows[&q]);
            }
            self.rows.insert(p, row);
        }
        self.rows
    }
}

pub fn rank<I: IntoIterator<Item = SparseVec>>(rows: I) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Basis of `{x : A x = 0}` where `A` is given by its rows over `ncols` columns.
pub fn kernel(rows: Vec<SparseVec>, ncols: usize) -> Vec<SparseVec> {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    let rref = e.into_rref();
    let mut out = Vec::new();
    for f in (0..ncols).filter(|j| !rref.contains_key(j)) {
        let mut v = SparseVec::new();
        v.insert(f, Rational::one());
        for (&p, row) in &rref {
            if let Some(c) = row.get(&f) {
                v.insert(p, -c.clone());
            }
        }
        out.push(v);
    }
    out
}

/// Solves `A x = b` for square nonsingular dense `A`; `None` if singular.
pub fn solve_dense(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (x, p) in m[r].iter_mut().zip(pivot_row.iter()) {
                    *x -= &f * p;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn sv(entries: &[(usize, i64)]) -> SparseVec {
        entries.iter().map(|&(j, c)| (j, int(c))).collect()
    }

    #[test]
    fn rank_and_kernel() {
        let rows = vec![
            sv(&[(0, 1), (1, 2), (2, 3)]),
            sv(&[(0, 2), (1, 4), (2, 6)]),
            sv(&[(1, 1)]),
        ];
        assert_eq!(rank(rows.clone()), 2);
        let k = kernel(rows.clone(), 3);
        assert_eq!(k.len(), 1);
        for r in &rows {
            let dot: Rational = r
                .iter()
                .map(|(j, c)| c * k[0].get(j).cloned().unwrap_or_default())
                .sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn solve_two_by_two() {
        let a = vec![vec![int(2), int(1)], vec![int(1), int(3)]];
        let x = solve_dense(&a, &[int(3), int(5)]).unwrap();
        assert_eq!(x, vec![crate::scalar::ratio(4, 5), crate::scalar::ratio(7, 5)]);
        assert!(solve_dense(&[vec![int(1), int(1)], vec![int(2), int(2)]], &[int(0), int(0)]).is_none());
    }
}
