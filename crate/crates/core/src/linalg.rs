//! Exact linear algebra over Q(q).
//!
//! Two flavours: dense row-major matrices for module actions, and sparse keyed
//! vectors with an incremental echelon form for span membership, solving, and
//! normal-form reduction in graded components.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::qscalar::RatQ;

/// Sparse vector indexed by an ordered key; zero entries are never stored.
pub type SparseVec<K> = BTreeMap<K, RatQ>;

/// `acc += c * v`, dropping entries that cancel.
pub fn axpy<K: Ord + Clone>(acc: &mut SparseVec<K>, c: &RatQ, v: &SparseVec<K>) {
    if c.is_zero() {
        return;
    }
    for (k, x) in v {
        let term = c * x;
        match acc.get_mut(k) {
            Some(slot) => {
                let s = &*slot + &term;
                if s.is_zero() {
                    acc.remove(k);
                } else {
                    *slot = s;
                }
            }
            None => {
                acc.insert(k.clone(), term);
            }
        }
    }
}

pub fn add_entry<K: Ord>(acc: &mut SparseVec<K>, k: K, c: RatQ) {
    if c.is_zero() {
        return;
    }
    match acc.get_mut(&k) {
        Some(slot) => {
            let s = &*slot + &c;
            if s.is_zero() {
                acc.remove(&k);
            } else {
                *slot = s;
            }
        }
        None => {
            acc.insert(k, c);
        }
    }
}

pub fn scaled<K: Ord + Clone>(v: &SparseVec<K>, c: &RatQ) -> SparseVec<K> {
    if c.is_zero() {
        return SparseVec::new();
    }
    v.iter().map(|(k, x)| (k.clone(), c * x)).collect()
}

#[derive(Clone, Debug)]
struct EchelonRow<K> {
    entries: SparseVec<K>,
    comb: SparseVec<usize>,
}

/// Incremental echelon form of a set of sparse vectors.
///
/// The pivot of a row is its smallest key and its pivot entry is 1. Every row
/// only has keys at or above its pivot, so a single ascending sweep reduces a
/// vector to a remainder free of all pivot keys. When `track` is set, each row
/// carries its expression in terms of the inserted vectors (by insertion index).
#[derive(Clone, Debug)]
pub struct Echelon<K: Ord + Clone> {
    rows: Vec<EchelonRow<K>>,
    pivots: BTreeMap<K, usize>,
    inserted: usize,
    track: bool,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Echelon::new()
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Echelon { rows: Vec::new(), pivots: BTreeMap::new(), inserted: 0, track: false }
    }

    pub fn tracking() -> Self {
        Echelon { track: true, ..Echelon::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    pub fn pivot_keys(&self) -> impl Iterator<Item = &K> {
        self.pivots.keys()
    }

    pub fn is_pivot(&self, k: &K) -> bool {
        self.pivots.contains_key(k)
    }

    fn sweep(&self, v: &SparseVec<K>, comb: &mut SparseVec<usize>) -> SparseVec<K> {
        let mut rem = v.clone();
        if rem.is_empty() {
            return rem;
        }
        for (p, &idx) in &self.pivots {
            if let Some(c) = rem.get(p).cloned() {
                let row = &self.rows[idx];
                axpy(&mut rem, &(-&c), &row.entries);
                if self.track {
                    axpy(comb, &c, &row.comb);
                }
            }
        }
        rem
    }

    /// Remainder of `v` after eliminating all pivot keys.
    pub fn reduce(&self, v: &SparseVec<K>) -> SparseVec<K> {
        let mut scratch = SparseVec::new();
        self.sweep(v, &mut scratch)
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v`; returns true when it enlarged the span.
    pub fn insert(&mut self, v: &SparseVec<K>) -> bool {
        let idx = self.inserted;
        self.inserted += 1;
        let mut comb = SparseVec::new();
        let rem = self.sweep(v, &mut comb);
        let Some((pivot, lead)) = rem.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = lead.inv().expect("nonzero pivot");
        let entries = scaled(&rem, &inv);
        let comb = if self.track {
            // rem = v - sum(comb_i v_i)
            let mut c = scaled(&comb, &(-&inv));
            add_entry(&mut c, idx, inv.clone());
            c
        } else {
            SparseVec::new()
        };
        self.pivots.insert(pivot, self.rows.len());
        self.rows.push(EchelonRow { entries, comb });
        true
    }

    /// Coefficients `c` over inserted vectors with `sum c_i v_i = v`, if `v` is in the span.
    /// Requires a tracking echelon.
    pub fn express(&self, v: &SparseVec<K>) -> Option<SparseVec<usize>> {
        assert!(self.track, "express requires a tracking echelon");
        let mut comb = SparseVec::new();
        let rem = self.sweep(v, &mut comb);
        rem.is_empty().then_some(comb)
    }

    /// Basis of the span (the echelon rows).
    pub fn basis(&self) -> Vec<SparseVec<K>> {
        self.rows.iter().map(|r| r.entries.clone()).collect()
    }

    /// Rows whose pivot satisfies `inside`. When every key failing `inside` sorts
    /// before every key passing it, these rows span the intersection of the span
    /// with the vectors supported on `inside` keys.
    pub fn basis_where(&self, inside: impl Fn(&K) -> bool) -> Vec<SparseVec<K>> {
        self.pivots
            .iter()
            .filter(|(k, _)| inside(k))
            .map(|(_, &i)| self.rows[i].entries.clone())
            .collect()
    }
}

/// Dense matrix over Q(q), row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<RatQ>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![RatQ::zero(); rows * cols] }
    }

    pub fn get(&self, r: usize, c: usize) -> &RatQ {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: RatQ) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<RatQ> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn apply(&self, v: &[RatQ]) -> Vec<RatQ> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = RatQ::zero();
                for (c, x) in v.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let a = self.get(r, c);
                    if !a.is_zero() {
                        acc = &acc + &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    /// Row vector times matrix.
    pub fn apply_left(&self, row: &[RatQ]) -> Vec<RatQ> {
        assert_eq!(row.len(), self.rows);
        (0..self.cols)
            .map(|c| {
                let mut acc = RatQ::zero();
                for (r, x) in row.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let a = self.get(r, c);
                    if !a.is_zero() {
                        acc = &acc + &(x * a);
                    }
                }
                acc
            })
            .collect()
    }
}

pub fn dot(a: &[RatQ], b: &[RatQ]) -> RatQ {
    assert_eq!(a.len(), b.len());
    let mut acc = RatQ::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = &acc + &(x * y);
        }
    }
    acc
}

pub fn to_sparse(v: &[RatQ]) -> SparseVec<usize> {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

pub fn to_dense(v: &SparseVec<usize>, n: usize) -> Vec<RatQ> {
    let mut out = vec![RatQ::zero(); n];
    for (&i, x) in v {
        out[i] = x.clone();
    }
    out
}

/// Reduced row echelon form; returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[Vec<RatQ>], ncols: usize) -> (Vec<Vec<RatQ>>, Vec<usize>) {
    let mut m: Vec<Vec<RatQ>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().unwrap();
        for x in m[r].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    if !m[r][j].is_zero() {
                        let t = &m[i][j] - &(&f * &m[r][j]);
                        m[i][j] = t;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<RatQ>], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{x : row . x = 0 for every row}`.
pub fn nullspace(rows: &[Vec<RatQ>], ncols: usize) -> Vec<Vec<RatQ>> {
    let (m, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![RatQ::zero(); ncols];
            x[f] = RatQ::one();
            for (row, &p) in m.iter().zip(&pivots) {
                x[p] = -&row[f];
            }
            x
        })
        .collect()
}
