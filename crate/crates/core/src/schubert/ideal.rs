use std::collections::BTreeMap;

use super::{fword_vector, SchubertCell, UwElement};
use crate::error::{Error, Result};
use crate::hwmod::{ModVector, Side};
use crate::linalg::{dot, Echelon, SparseVec};
use crate::rootdata::{RootVec, Weight};
use crate::uq::{word_degree, NormalMonomial, UqElement};
use crate::weyl::{depth_below, WeylElt};

/// Finite-degree truncation of the ideal I_w(u), one subspace of U^- per degree
/// (stored in F-word coordinates). Components of height above `cutoff` are not stored.
#[derive(Clone, Debug)]
pub struct IdealTruncation {
    pub u: WeylElt,
    pub cutoff: i64,
    /// Largest lambda coordinate used for the seeds.
    pub lambda_bound: i64,
    /// Bound at which two consecutive bounds gave equal dimensions, if reached.
    pub stabilized_at: Option<i64>,
    components: BTreeMap<RootVec, Echelon<Vec<usize>>>,
}

fn fvec_to_uq(rank: usize, v: &SparseVec<Vec<usize>>) -> UqElement {
    UqElement::from_terms(
        v.iter()
            .map(|(w, c)| {
                (NormalMonomial { fword: w.clone(), kvec: vec![0; rank], eword: Vec::new() }, c.clone())
            })
            .collect(),
    )
}

impl IdealTruncation {
    pub fn is_stabilized(&self) -> bool {
        self.stabilized_at.is_some()
    }

    pub fn dim_at(&self, nu: &RootVec) -> usize {
        self.components.get(nu).map_or(0, |e| e.dim())
    }

    /// Nonzero component dimensions.
    pub fn dims(&self) -> BTreeMap<RootVec, usize> {
        self.components.iter().filter(|(_, e)| e.dim() > 0).map(|(k, e)| (k.clone(), e.dim())).collect()
    }

    pub fn component(&self, nu: &RootVec) -> Option<&Echelon<Vec<usize>>> {
        self.components.get(nu)
    }

    /// Membership of an element of U^-. A positive answer is always sound; a
    /// negative one is exact only when the truncation has stabilized.
    pub fn contains_uq(&self, x: &UqElement) -> Result<bool> {
        if !x.is_in_uminus() {
            return Err(Error::NotInSpan("element has E or K parts".into()));
        }
        let r = self.u.action().len();
        let mut parts: BTreeMap<RootVec, SparseVec<Vec<usize>>> = BTreeMap::new();
        for (m, c) in x.terms() {
            parts.entry(word_degree(&m.fword, r)).or_default().insert(m.fword.clone(), c.clone());
        }
        for (nu, v) in &parts {
            if nu.height() > self.cutoff {
                return Err(Error::Truncation(format!(
                    "degree -{nu} has height {} above cutoff {}",
                    nu.height(),
                    self.cutoff
                )));
            }
            match self.components.get(nu) {
                Some(e) if e.contains(v) => {}
                _ => return Ok(false),
            }
        }
        Ok(true)
    }

    pub fn contains(&self, cell: &SchubertCell, x: &UwElement) -> Result<bool> {
        self.contains_uq(&cell.to_uq(x))
    }

    /// First degree where `self` has a vector outside `other`, if any.
    pub fn first_excess_over(&self, other: &IdealTruncation) -> Option<RootVec> {
        for (nu, e) in &self.components {
            let o = other.components.get(nu);
            for b in e.basis() {
                if !o.is_some_and(|o| o.contains(&b)) {
                    return Some(nu.clone());
                }
            }
        }
        None
    }

    pub fn is_subset_of(&self, other: &IdealTruncation) -> bool {
        self.first_excess_over(other).is_none()
    }

    fn insert(&mut self, nu: &RootVec, v: &SparseVec<Vec<usize>>) -> bool {
        if v.is_empty() {
            return false;
        }
        self.components.entry(nu.clone()).or_default().insert(v)
    }

    /// Closes the components under left and right multiplication by the PBW
    /// generators, degree by degree in increasing height.
    fn close(&mut self, cell: &SchubertCell) {
        let r = cell.cartan().rank();
        for nu in cell.degrees_up_to(self.cutoff) {
            for (k, beta) in cell.roots().iter().enumerate() {
                let mu = nu.sub(beta);
                if !mu.is_nonneg() {
                    continue;
                }
                let Some(src) = self.components.get(&mu) else { continue };
                let f = cell.root_vector(k + 1);
                let mut new = Vec::new();
                for b in src.basis() {
                    let x = fvec_to_uq(r, &b);
                    new.push(fword_vector(&cell.uq().multiply(f, &x)));
                    new.push(fword_vector(&cell.uq().multiply(&x, f)));
                }
                for v in new {
                    self.insert(&nu, &v);
                }
            }
        }
    }
}

/// Nonzero dominant weights with all coordinates in `0..=k` and some coordinate equal to `k`.
fn weights_at_bound(rank: usize, k: i64) -> Vec<Weight> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; rank];
    loop {
        if cur.iter().any(|&c| c == k) && cur.iter().any(|&c| c > 0) {
            out.push(Weight(cur.clone()));
        }
        let mut i = 0;
        loop {
            if i == rank {
                return out;
            }
            if cur[i] < k {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

impl SchubertCell {
    /// phi_w images of the rows of L(lambda) orthogonal to `U^- b_{u lambda}`,
    /// grouped by degree, for all degrees of height at most `cutoff`.
    pub fn ideal_seeds(
        &self,
        u: &WeylElt,
        lambda: &Weight,
        cutoff: i64,
    ) -> Result<BTreeMap<RootVec, Vec<SparseVec<Vec<usize>>>>> {
        let m = self.module(lambda)?;
        let top = depth_below(self.cartan(), self.w(), lambda);
        let dem = m.demazure_span(u, Side::Minus)?;
        let bw = m.extremal_vector(self.w())?;
        let mut out = BTreeMap::new();
        for nu in self.degrees_up_to(cutoff) {
            let d = top.sub(&nu);
            if nu.is_zero() || !d.is_nonneg() || m.dim_at(&d) == 0 {
                continue;
            }
            let rows = m.annihilator_at(&dem, &d);
            if rows.is_empty() {
                continue;
            }
            let mut images: Vec<SparseVec<Vec<usize>>> = vec![SparseVec::new(); rows.len()];
            for mono in self.pbw_basis(&nu) {
                let v = self.tau_chain(&m, &mono, &bw)?;
                let Some(col) = v.part(&d) else { continue };
                let f = fword_vector(&self.pbw_to_uq(&mono));
                let rw = self.rw_coefficient(&mono);
                for (img, row) in images.iter_mut().zip(&rows) {
                    let p = dot(row, col);
                    if !p.is_zero() {
                        crate::linalg::axpy(img, &(&rw * &p), &f);
                    }
                }
            }
            images.retain(|v| !v.is_empty());
            if !images.is_empty() {
                out.insert(nu, images);
            }
        }
        Ok(out)
    }

    /// `tau(E_{b_l}^{m_l} ... E_{b_1}^{m_1}) v`.
    pub(crate) fn tau_chain(
        &self,
        m: &crate::hwmod::HWModule,
        mono: &super::PbwMonomial,
        v: &ModVector,
    ) -> Result<ModVector> {
        let mut v = v.clone();
        for k in (0..self.word().len()).rev() {
            for _ in 0..mono.0[k] {
                v = m.act(&self.tau_e[k], &v)?;
            }
        }
        Ok(v)
    }

    /// The ideal generated by the seeds of all lambda with coordinates at most `lambda_bound`.
    pub fn ideal_truncation(&self, u: &WeylElt, cutoff: i64, lambda_bound: i64) -> Result<IdealTruncation> {
        self.check_below_w(u)?;
        let mut t = IdealTruncation {
            u: u.clone(),
            cutoff,
            lambda_bound: 0,
            stabilized_at: None,
            components: BTreeMap::new(),
        };
        for k in 1..=lambda_bound {
            self.extend_truncation(&mut t, k)?;
        }
        Ok(t)
    }

    fn extend_truncation(&self, t: &mut IdealTruncation, k: i64) -> Result<()> {
        for lambda in weights_at_bound(self.cartan().rank(), k) {
            for (nu, vs) in self.ideal_seeds(&t.u, &lambda, t.cutoff)? {
                for v in vs {
                    t.insert(&nu, &v);
                }
            }
        }
        t.close(self);
        t.lambda_bound = k;
        Ok(())
    }

    /// Raises the lambda bound from `start` until two consecutive bounds give
    /// equal component dimensions, or `max_bound` is reached (then not stabilized).
    pub fn stabilized_ideal(
        &self,
        u: &WeylElt,
        cutoff: i64,
        start: i64,
        max_bound: i64,
    ) -> Result<IdealTruncation> {
        let start = start.max(1);
        let mut t = self.ideal_truncation(u, cutoff, start)?;
        let mut prev = t.dims();
        for k in start + 1..=max_bound.max(start) {
            self.extend_truncation(&mut t, k)?;
            let now = t.dims();
            if now == prev {
                t.stabilized_at = Some(k - 1);
                return Ok(t);
            }
            prev = now;
        }
        Ok(t)
    }

    /// Span at degree `-nu` of the truncation with the given lambda bound.
    pub fn ideal_component(&self, u: &WeylElt, nu: &RootVec, lambda_bound: i64) -> Result<Echelon<Vec<usize>>> {
        let t = self.ideal_truncation(u, nu.height(), lambda_bound)?;
        Ok(t.components.get(nu).cloned().unwrap_or_default())
    }

    pub(crate) fn check_below_w(&self, u: &WeylElt) -> Result<()> {
        if crate::weyl::bruhat_leq(self.cartan(), u, self.w()) {
            Ok(())
        } else {
            Err(Error::NotIncident(format!("{u} is not below {}", self.w())))
        }
    }
}
