use std::collections::BTreeMap;

use super::{HWModule, ModVector};
use crate::error::{Error, Result};
use crate::linalg::{to_dense, to_sparse, Echelon};
use crate::qscalar::{qd_pow, qfact, RatQ};
use crate::rootdata::RootVec;
use crate::weyl::WeylElt;

/// A subspace of a module stored as an echelon basis per weight space.
#[derive(Clone, Debug, Default)]
pub struct WeightedSubspace {
    pub parts: BTreeMap<RootVec, Echelon<usize>>,
}

impl WeightedSubspace {
    pub fn dim_at(&self, depth: &RootVec) -> usize {
        self.parts.get(depth).map_or(0, |e| e.dim())
    }

    pub fn total_dim(&self) -> usize {
        self.parts.values().map(|e| e.dim()).sum()
    }

    /// Membership of a (possibly inhomogeneous) vector.
    pub fn contains(&self, v: &ModVector) -> bool {
        v.parts.iter().all(|(d, c)| match self.parts.get(d) {
            Some(e) => e.contains(&to_sparse(c)),
            None => false,
        })
    }

    /// Basis vectors of the part at `depth`, dense in that weight space.
    pub fn basis_at(&self, depth: &RootVec, n: usize) -> Vec<Vec<RatQ>> {
        self.parts
            .get(depth)
            .map(|e| e.basis().iter().map(|b| to_dense(b, n)).collect())
            .unwrap_or_default()
    }

    fn insert(&mut self, depth: &RootVec, c: &[RatQ]) -> bool {
        self.parts.entry(depth.clone()).or_default().insert(&to_sparse(c))
    }
}

/// Which half of U_q(g) generates a Demazure-type subspace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

/// Module-level braid operators on L(lambda).
pub trait ModuleBraid {
    fn braid_vector(&self, i: usize, inverse: bool, v: &ModVector) -> Result<ModVector>;
}

impl HWModule {
    fn divided_f(&self, i: usize, n: i64, v: &ModVector) -> Result<ModVector> {
        let mut out = v.clone();
        for _ in 0..n {
            out = self.apply_f(i, &out)?;
        }
        let f = qfact(n, self.cartan().d(i))?;
        Ok(out.scale(&f.inv()?))
    }

    fn divided_e(&self, i: usize, n: i64, v: &ModVector) -> Result<ModVector> {
        let mut out = v.clone();
        for _ in 0..n {
            out = self.apply_e(i, &out);
        }
        let f = qfact(n, self.cartan().d(i))?;
        Ok(out.scale(&f.inv()?))
    }

    /// `b_{u lambda}`: walk a reduced word of u from the right applying `F_i^{(n)}`.
    pub fn extremal_vector_word(&self, word: &[usize]) -> Result<ModVector> {
        let mut v = self.hw_vector();
        let mut w = self.highest().clone();
        for &i in word.iter().rev() {
            let n = w.0[i];
            if n < 0 {
                return Err(Error::LengthCondition(format!(
                    "word {} is not reduced at letter {}",
                    crate::weyl::format_word(word),
                    i + 1
                )));
            }
            v = self.divided_f(i, n, &v)?;
            w = self.cartan().reflect_weight(i, &w);
        }
        Ok(v)
    }

    pub fn extremal_vector(&self, u: &WeylElt) -> Result<ModVector> {
        self.extremal_vector_word(u.word())
    }

    /// Depth of the extremal weight `u lambda`.
    pub fn extremal_depth(&self, u: &WeylElt) -> RootVec {
        crate::weyl::depth_below(self.cartan(), u, self.highest())
    }

    /// `xi_{u lambda}`: the row on the weight space of `u lambda` with `<xi, b_{u lambda}> = 1`.
    pub fn dual_functional(&self, u: &WeylElt) -> Result<ModVector> {
        let b = self.extremal_vector(u)?;
        let d = self.extremal_depth(u);
        let dim = self.dim_at(&d);
        if dim != 1 {
            return Err(Error::NotOneDimensional { weight: self.weight_of_depth(&d), dim });
        }
        let c = b.part(&d).map(|c| c[0].clone()).unwrap_or_else(RatQ::zero);
        Ok(ModVector::single(d, vec![c.inv()?]))
    }

    /// `U^{+} v` (side Plus) or `U^{-} v` (side Minus), saturated within the
    /// constructed weight spaces. Exact at every constructed depth, since the
    /// generating words move monotonically in weight.
    pub fn saturate(&self, v: &ModVector, side: Side) -> WeightedSubspace {
        let r = self.cartan().rank();
        let mut sub = WeightedSubspace::default();
        let mut queue: Vec<(RootVec, Vec<RatQ>)> = Vec::new();
        for (d, c) in &v.parts {
            if sub.insert(d, c) {
                queue.push((d.clone(), c.clone()));
            }
        }
        while let Some((d, c)) = queue.pop() {
            let x = ModVector::single(d.clone(), c);
            for i in 0..r {
                let y = match side {
                    Side::Plus => self.apply_e(i, &x),
                    Side::Minus => {
                        let t = d.add(&RootVec::simple(r, i));
                        if self.check_depth(&t).is_err() {
                            continue;
                        }
                        self.apply_f(i, &x).expect("depth checked")
                    }
                };
                for (dd, cc) in y.parts {
                    if sub.insert(&dd, &cc) {
                        queue.push((dd, cc));
                    }
                }
            }
        }
        sub
    }

    pub fn demazure_span(&self, u: &WeylElt, side: Side) -> Result<WeightedSubspace> {
        Ok(self.saturate(&self.extremal_vector(u)?, side))
    }

    /// Rows at `depth` annihilating the given subspace there.
    pub fn annihilator_at(&self, sub: &WeightedSubspace, depth: &RootVec) -> Vec<Vec<RatQ>> {
        let n = self.dim_at(depth);
        let rows = sub.basis_at(depth, n);
        crate::linalg::nullspace(&rows, n)
    }
}

impl ModuleBraid for HWModule {
    /// `T_i v = sum_{a-b+c=-n} (-1)^b q_i^{b-ac} E^(a) F^(b) E^(c) v` and
    /// `T_i^-1 v = sum_{a-b+c=n} (-1)^b q_i^{ac-b} F^(a) E^(b) F^(c) v` on weight vectors,
    /// with `n = <wt v, a_i^vee>`.
    fn braid_vector(&self, i: usize, inverse: bool, v: &ModVector) -> Result<ModVector> {
        let mut out = ModVector::zero();
        let di = self.cartan().d(i);
        for (d, c) in &v.parts {
            let x = ModVector::single(d.clone(), c.clone());
            let n = self.weight_of_depth(d).0[i];
            let bound = self.string_bound(i);
            for b in 0..=bound {
                for c in 0..=bound {
                    let a = if inverse { n + b - c } else { -n + b - c };
                    if a < 0 || a > bound {
                        continue;
                    }
                    let sign = if b % 2 == 0 { 1 } else { -1 };
                    let e = if inverse { a * c - b } else { b - a * c };
                    let s = &RatQ::from_int(sign) * &qd_pow(di, e);
                    let y = if inverse {
                        let t = self.divided_f(i, c, &x)?;
                        let t = self.divided_e(i, b, &t)?;
                        self.divided_f(i, a, &t)?
                    } else {
                        let t = self.divided_e(i, c, &x)?;
                        let t = self.divided_f(i, b, &t)?;
                        self.divided_e(i, a, &t)?
                    };
                    out = out.add(&y.scale(&s));
                }
            }
        }
        Ok(out)
    }
}

impl HWModule {
    /// Upper bound on the length of any a_i-string in the module.
    fn string_bound(&self, i: usize) -> i64 {
        let ws: Vec<i64> = self.spaces().map(|s| s.weight.0[i]).collect();
        ws.iter().max().unwrap_or(&0) - ws.iter().min().unwrap_or(&0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hwmod::Depth;
    use crate::qscalar::qint;
    use crate::rootdata::{CartanData, Weight};

    #[test]
    fn sl2_extremal_vectors() {
        let cd = CartanData::preset("A1").unwrap();
        let s1 = WeylElt::simple(&cd, 0).unwrap();
        let m = HWModule::build(&cd, &Weight(vec![2]), Depth::Full).unwrap();
        let b = m.extremal_vector(&s1).unwrap();
        let f2 = m.apply_fword(&[0, 0], &m.hw_vector()).unwrap();
        assert_eq!(b, f2.scale(&qint(2, 1).inv().unwrap()));
        assert_eq!(m.extremal_vector(&WeylElt::identity(&cd)).unwrap(), m.hw_vector());
    }

    #[test]
    fn sl2_dual_functional() {
        let cd = CartanData::preset("A1").unwrap();
        let m = HWModule::build(&cd, &Weight(vec![1]), Depth::Full).unwrap();
        let e = WeylElt::identity(&cd);
        let s1 = WeylElt::simple(&cd, 0).unwrap();
        let xi = m.dual_functional(&e).unwrap();
        let low = m.extremal_vector(&s1).unwrap();
        assert_eq!(super::super::pair(&xi, &m.apply_e(0, &low)), RatQ::one());
        assert!(super::super::pair(&xi, &low).is_zero());
    }

    #[test]
    fn demazure_examples() {
        let cd = CartanData::preset("A2").unwrap();
        let m = HWModule::build(&cd, &Weight(vec![1, 1]), Depth::Full).unwrap();
        let e = WeylElt::identity(&cd);
        let w0 = crate::weyl::longest_element(&cd).unwrap();
        assert_eq!(m.demazure_span(&e, Side::Minus).unwrap().total_dim(), 8);
        assert_eq!(m.demazure_span(&w0, Side::Plus).unwrap().total_dim(), 8);
        let a1 = CartanData::preset("A1").unwrap();
        let m1 = HWModule::build(&a1, &Weight(vec![1]), Depth::Full).unwrap();
        let s1 = WeylElt::simple(&a1, 0).unwrap();
        assert_eq!(m1.demazure_span(&s1, Side::Minus).unwrap().total_dim(), 1);
    }
}
