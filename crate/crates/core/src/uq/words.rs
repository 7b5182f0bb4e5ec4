//! Per-degree normal words of U^+ (equivalently U^-) modulo the quantum Serre relations.

use std::cmp::Reverse;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::linalg::{Echelon, SparseVec};
use crate::qscalar::{qbinom, RatQ};
use crate::rootdata::{CartanData, RootVec};

pub fn word_degree(w: &[usize], rank: usize) -> RootVec {
    let mut v = vec![0; rank];
    for &i in w {
        v[i] += 1;
    }
    RootVec(v)
}

/// All words with the given letter multiplicities, in lexicographic order.
pub fn words_of_degree(nu: &RootVec) -> Vec<Vec<usize>> {
    fn rec(rem: &mut Vec<i64>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rem.iter().all(|&c| c == 0) {
            out.push(cur.clone());
            return;
        }
        for i in 0..rem.len() {
            if rem[i] > 0 {
                rem[i] -= 1;
                cur.push(i);
                rec(rem, cur, out);
                cur.pop();
                rem[i] += 1;
            }
        }
    }
    let mut out = Vec::new();
    if nu.0.iter().any(|&c| c < 0) {
        return out;
    }
    rec(&mut nu.0.clone(), &mut Vec::new(), &mut out);
    out
}

/// The Serre element `sum_s (-1)^s [r choose s]_{q_i} x_i^{r-s} x_j x_i^s`, `r = 1 - c_ij`.
pub fn serre_relation(cd: &CartanData, i: usize, j: usize) -> SparseVec<Vec<usize>> {
    let r = 1 - cd.c(i, j);
    let mut out = SparseVec::new();
    for s in 0..=r {
        let mut w = vec![i; (r - s) as usize];
        w.push(j);
        w.extend(std::iter::repeat(i).take(s as usize));
        let sign = if s % 2 == 0 { 1 } else { -1 };
        let c = &RatQ::from_int(sign) * &qbinom(r, s, cd.d(i));
        crate::linalg::add_entry(&mut out, w, c);
    }
    out
}

/// Normal words of one degree and the reduction of every word of that degree.
///
/// Words are compared lexicographically; the largest word of every relation is
/// eliminated, so the normal words are the lexicographically smallest basis.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DegreeBasis {
    pub normal: Vec<Vec<usize>>,
    reductions: Vec<(Vec<usize>, Vec<(Vec<usize>, RatQ)>)>,
    #[serde(skip)]
    index: BTreeMap<Vec<usize>, usize>,
}

impl DegreeBasis {
    pub fn compute(cd: &CartanData, nu: &RootVec) -> Self {
        let r = cd.rank();
        let all = words_of_degree(nu);
        let mut ech: Echelon<Reverse<Vec<usize>>> = Echelon::new();
        for i in 0..r {
            for j in 0..r {
                if i == j {
                    continue;
                }
                let rel = serre_relation(cd, i, j);
                let rdeg = word_degree(rel.keys().next().unwrap(), r);
                let rest = nu.sub(&rdeg);
                if !rest.is_nonneg() {
                    continue;
                }
                for x in words_of_degree(&rest) {
                    for p in 0..=x.len() {
                        let row: SparseVec<Reverse<Vec<usize>>> = rel
                            .iter()
                            .map(|(w, c)| {
                                let mut full = x[..p].to_vec();
                                full.extend(w);
                                full.extend(&x[p..]);
                                (Reverse(full), c.clone())
                            })
                            .collect();
                        ech.insert(&row);
                    }
                }
            }
        }
        let mut normal = Vec::new();
        let mut reductions = Vec::new();
        for w in all {
            let key = Reverse(w.clone());
            if ech.is_pivot(&key) {
                let v: SparseVec<Reverse<Vec<usize>>> = [(key, RatQ::one())].into_iter().collect();
                let red = ech.reduce(&v);
                reductions.push((w, red.into_iter().map(|(k, c)| (k.0, c)).collect()));
            } else {
                normal.push(w);
            }
        }
        let mut b = DegreeBasis { normal, reductions, index: BTreeMap::new() };
        b.reindex();
        b
    }

    pub(crate) fn reindex(&mut self) {
        self.index = self.reductions.iter().enumerate().map(|(k, (w, _))| (w.clone(), k)).collect();
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    /// Expresses a word of this degree in normal words.
    pub fn reduce(&self, w: &[usize]) -> Vec<(Vec<usize>, RatQ)> {
        match self.index.get(w) {
            Some(&k) => self.reductions[k].1.clone(),
            None => vec![(w.to_vec(), RatQ::one())],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a2_dimensions_match_kostant_partitions() {
        let cd = CartanData::preset("A2").unwrap();
        // U^+ of sl3 has graded dimension = number of Kostant partitions
        let cases = [((1, 1), 2), ((2, 1), 2), ((2, 2), 3), ((3, 3), 4), ((1, 0), 1), ((3, 1), 2)];
        for ((a, b), n) in cases {
            assert_eq!(DegreeBasis::compute(&cd, &RootVec(vec![a, b])).dim(), n, "{a},{b}");
        }
    }

    #[test]
    fn serre_relation_shape() {
        let cd = CartanData::preset("A2").unwrap();
        let s = serre_relation(&cd, 0, 1);
        assert_eq!(s.len(), 3);
        assert_eq!(s[&vec![0, 1, 0]], -(&RatQ::q() + &RatQ::q_pow(-1)));
    }
}
