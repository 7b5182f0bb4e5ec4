//! Irreducible highest-weight modules L(lambda) over Q(q).
//!
//! Weight spaces are indexed by their depth `nu` in Q^+ (the weight is
//! `lambda - nu`). A vector of positive depth is zero exactly when all E_i kill
//! it, so each weight space is built as the span of the candidates `F_j b`,
//! recorded through their images under every E_i. This realizes the quotient of
//! the Verma module by its maximal submodule without forming the Shapovalov form.

mod ops;
mod store;

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::linalg::{Echelon, Matrix, SparseVec};
use crate::qscalar::{qint, RatQ};
use crate::rootdata::{CartanData, RootVec, Weight};
use crate::uq::UqElement;

pub use ops::{ModuleBraid, Side, WeightedSubspace};
pub use store::ModuleStore;

/// Depth cutoff for module construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Depth {
    /// All weight spaces with `height(nu) <= h`.
    Height(i64),
    /// The whole module; finite type only.
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSpace {
    pub depth: RootVec,
    pub weight: Weight,
    /// Basis vector k is `F_{tags[k]} b_lambda`.
    pub tags: Vec<Vec<usize>>,
}

impl WeightSpace {
    pub fn dim(&self) -> usize {
        self.tags.len()
    }
}

/// A vector of L(lambda), possibly spread over several weight spaces.
/// Also used for dual rows: a row pairs against the column with the same depth.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ModVector {
    pub parts: BTreeMap<RootVec, Vec<RatQ>>,
}

impl ModVector {
    pub fn zero() -> Self {
        ModVector::default()
    }

    pub fn single(depth: RootVec, coords: Vec<RatQ>) -> Self {
        let mut v = ModVector::zero();
        v.add_part(depth, &coords);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn add_part(&mut self, depth: RootVec, coords: &[RatQ]) {
        if coords.iter().all(|c| c.is_zero()) {
            return;
        }
        match self.parts.get_mut(&depth) {
            Some(cur) => {
                for (a, b) in cur.iter_mut().zip(coords) {
                    *a = &*a + b;
                }
                if cur.iter().all(|c| c.is_zero()) {
                    self.parts.remove(&depth);
                }
            }
            None => {
                self.parts.insert(depth, coords.to_vec());
            }
        }
    }

    pub fn add(&self, o: &ModVector) -> ModVector {
        let mut out = self.clone();
        for (d, c) in &o.parts {
            out.add_part(d.clone(), c);
        }
        out
    }

    pub fn scale(&self, c: &RatQ) -> ModVector {
        if c.is_zero() {
            return ModVector::zero();
        }
        ModVector {
            parts: self.parts.iter().map(|(d, v)| (d.clone(), v.iter().map(|x| c * x).collect())).collect(),
        }
    }

    pub fn sub(&self, o: &ModVector) -> ModVector {
        self.add(&o.scale(&RatQ::from_int(-1)))
    }

    /// The unique depth of a nonzero homogeneous vector.
    pub fn depth(&self) -> Option<&RootVec> {
        if self.parts.len() == 1 {
            self.parts.keys().next()
        } else {
            None
        }
    }

    pub fn part(&self, depth: &RootVec) -> Option<&Vec<RatQ>> {
        self.parts.get(depth)
    }
}

/// `<xi, v>`: rows and columns are paired weight space by weight space.
pub fn pair(xi: &ModVector, v: &ModVector) -> RatQ {
    let mut acc = RatQ::zero();
    for (d, row) in &xi.parts {
        if let Some(col) = v.parts.get(d) {
            acc = &acc + &crate::linalg::dot(row, col);
        }
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HWModule {
    cartan: CartanData,
    highest: Weight,
    depth: Depth,
    spaces: BTreeMap<RootVec, WeightSpace>,
    /// E_i from depth nu to depth nu - a_i.
    e_up: BTreeMap<(RootVec, usize), Matrix>,
    /// F_i from depth nu to depth nu + a_i.
    f_down: BTreeMap<(RootVec, usize), Matrix>,
}

impl HWModule {
    pub fn build(cd: &CartanData, lambda: &Weight, depth: Depth) -> Result<Self> {
        let r = cd.rank();
        if lambda.rank() != r {
            return Err(Error::RankMismatch { expected: r, got: lambda.rank() });
        }
        if !lambda.is_dominant() {
            return Err(Error::NotDominant(lambda.clone()));
        }
        if depth == Depth::Full && !cd.is_finite_type() {
            return Err(Error::InfiniteType);
        }
        let mut m = HWModule {
            cartan: cd.clone(),
            highest: lambda.clone(),
            depth,
            spaces: BTreeMap::new(),
            e_up: BTreeMap::new(),
            f_down: BTreeMap::new(),
        };
        let top = RootVec::zero(r);
        m.spaces.insert(
            top.clone(),
            WeightSpace { depth: top.clone(), weight: lambda.clone(), tags: vec![Vec::new()] },
        );
        let mut frontier: BTreeSet<RootVec> = [top].into_iter().collect();
        let mut h = 0;
        while !frontier.is_empty() {
            h += 1;
            if let Depth::Height(max) = depth {
                if h > max {
                    break;
                }
            }
            let mut next: BTreeSet<RootVec> = BTreeSet::new();
            for mu in &frontier {
                for j in 0..r {
                    next.insert(mu.add(&RootVec::simple(r, j)));
                }
            }
            let mut built = BTreeSet::new();
            for nu in next {
                if m.build_space(&nu) {
                    built.insert(nu);
                }
            }
            frontier = built;
        }
        Ok(m)
    }

    /// Builds the weight space at depth `nu` from the spaces one level up.
    /// Returns false when it is zero.
    fn build_space(&mut self, nu: &RootVec) -> bool {
        let cd = self.cartan.clone();
        let r = cd.rank();
        // target blocks: E_i maps into depth nu - a_i
        let mut offsets = Vec::new();
        let mut total = 0;
        for i in 0..r {
            let t = nu.sub(&RootVec::simple(r, i));
            let d = self.spaces.get(&t).map_or(0, |s| s.dim());
            offsets.push((t, total, d));
            total += d;
        }
        // candidates F_j b
        let mut cands: Vec<(usize, usize, Vec<RatQ>)> = Vec::new();
        for j in 0..r {
            let mu = nu.sub(&RootVec::simple(r, j));
            let Some(space) = self.spaces.get(&mu) else { continue };
            let mu_w = space.weight.clone();
            for k in 0..space.dim() {
                let mut img = vec![RatQ::zero(); total];
                for (i, (t, off, d)) in offsets.iter().enumerate() {
                    if *d == 0 {
                        continue;
                    }
                    // E_i F_j b = F_j E_i b + delta_ij [<mu, a_i^vee>]_{q_i} b
                    let below = mu.sub(&RootVec::simple(r, i));
                    if let Some(e) = self.e_up.get(&(mu.clone(), i)) {
                        let eb = e.column(k);
                        if let Some(f) = self.f_down.get(&(below.clone(), j)) {
                            let v = f.apply(&eb);
                            for (a, x) in v.into_iter().enumerate() {
                                img[off + a] = &img[off + a] + &x;
                            }
                        }
                    }
                    if i == j {
                        debug_assert_eq!(t, &mu);
                        let c = qint(mu_w.0[i], cd.d(i));
                        img[off + k] = &img[off + k] + &c;
                    }
                }
                cands.push((j, k, img));
            }
        }
        let to_sparse = crate::linalg::to_sparse;
        let mut ech: Echelon<usize> = Echelon::new();
        let mut chosen = Vec::new();
        for (idx, (_, _, img)) in cands.iter().enumerate() {
            if ech.insert(&to_sparse(img)) {
                chosen.push(idx);
            }
        }
        let dim = chosen.len();
        if dim == 0 {
            return false;
        }
        let mut basis_ech: Echelon<usize> = Echelon::tracking();
        for &c in &chosen {
            basis_ech.insert(&to_sparse(&cands[c].2));
        }
        let tags: Vec<Vec<usize>> = chosen
            .iter()
            .map(|&c| {
                let (j, k, _) = &cands[c];
                let mu = nu.sub(&RootVec::simple(r, *j));
                let mut t = vec![*j];
                t.extend(&self.spaces[&mu].tags[*k]);
                t
            })
            .collect();
        // E matrices out of nu
        for (i, (t, off, d)) in offsets.iter().enumerate() {
            if *d == 0 {
                continue;
            }
            let mut e = Matrix::zeros(*d, dim);
            for (col, &c) in chosen.iter().enumerate() {
                for a in 0..*d {
                    e.set(a, col, cands[c].2[off + a].clone());
                }
            }
            let _ = t;
            self.e_up.insert((nu.clone(), i), e);
        }
        // F matrices into nu
        let mut fmats: BTreeMap<usize, Matrix> = BTreeMap::new();
        for (j, k, img) in &cands {
            let comb: SparseVec<usize> =
                basis_ech.express(&to_sparse(img)).expect("candidate lies in the span of the basis");
            let mu = nu.sub(&RootVec::simple(r, *j));
            let src_dim = self.spaces[&mu].dim();
            let f = fmats.entry(*j).or_insert_with(|| Matrix::zeros(dim, src_dim));
            for (b, c) in comb {
                f.set(b, *k, c);
            }
        }
        for (j, f) in fmats {
            self.f_down.insert((nu.sub(&RootVec::simple(r, j)), j), f);
        }
        let weight = self.highest.sub(&cd.weight_of_rootvec(nu));
        self.spaces.insert(nu.clone(), WeightSpace { depth: nu.clone(), weight, tags });
        true
    }

    pub fn cartan(&self) -> &CartanData {
        &self.cartan
    }

    pub fn highest(&self) -> &Weight {
        &self.highest
    }

    pub fn depth_limit(&self) -> Depth {
        self.depth
    }

    pub fn spaces(&self) -> impl Iterator<Item = &WeightSpace> {
        self.spaces.values()
    }

    pub fn space(&self, depth: &RootVec) -> Option<&WeightSpace> {
        self.spaces.get(depth)
    }

    pub fn dim_at(&self, depth: &RootVec) -> usize {
        self.spaces.get(depth).map_or(0, |s| s.dim())
    }

    pub fn total_dim(&self) -> usize {
        self.spaces.values().map(|s| s.dim()).sum()
    }

    pub fn weight_of_depth(&self, depth: &RootVec) -> Weight {
        self.highest.sub(&self.cartan.weight_of_rootvec(depth))
    }

    /// Depth of a weight, if `lambda - weight` lies in Q^+ and is a stored depth
    /// or within the computed range.
    pub fn depth_of_weight(&self, w: &Weight) -> Option<RootVec> {
        let diff = self.highest.sub(w);
        if let Some(s) = self.spaces.values().find(|s| &s.weight == w) {
            return Some(s.depth.clone());
        }
        let x = self.cartan.weight_in_roots(&diff)?;
        if x.iter().all(|c| c.is_integer() && *c.numer() >= 0) {
            Some(RootVec(x.iter().map(|c| c.to_integer()).collect()))
        } else {
            None
        }
    }

    /// Errors if `depth` lies beyond the construction cutoff.
    pub fn check_depth(&self, depth: &RootVec) -> Result<()> {
        if let Depth::Height(h) = self.depth {
            if depth.height() > h {
                return Err(Error::CutoffUnderflow { weight: self.weight_of_depth(depth) });
            }
        }
        Ok(())
    }

    pub fn hw_vector(&self) -> ModVector {
        ModVector::single(RootVec::zero(self.cartan.rank()), vec![RatQ::one()])
    }

    pub fn basis_vector(&self, depth: &RootVec, k: usize) -> ModVector {
        let n = self.dim_at(depth);
        let mut c = vec![RatQ::zero(); n];
        c[k] = RatQ::one();
        ModVector::single(depth.clone(), c)
    }

    pub fn e_matrix(&self, depth: &RootVec, i: usize) -> Option<&Matrix> {
        self.e_up.get(&(depth.clone(), i))
    }

    pub fn f_matrix(&self, depth: &RootVec, i: usize) -> Option<&Matrix> {
        self.f_down.get(&(depth.clone(), i))
    }

    pub fn apply_e(&self, i: usize, v: &ModVector) -> ModVector {
        let r = self.cartan.rank();
        let mut out = ModVector::zero();
        for (d, c) in &v.parts {
            if let Some(m) = self.e_up.get(&(d.clone(), i)) {
                out.add_part(d.sub(&RootVec::simple(r, i)), &m.apply(c));
            }
        }
        out
    }

    pub fn apply_f(&self, i: usize, v: &ModVector) -> Result<ModVector> {
        let r = self.cartan.rank();
        let mut out = ModVector::zero();
        for (d, c) in &v.parts {
            let t = d.add(&RootVec::simple(r, i));
            self.check_depth(&t)?;
            if let Some(m) = self.f_down.get(&(d.clone(), i)) {
                out.add_part(t, &m.apply(c));
            }
        }
        Ok(out)
    }

    /// `K^kvec` acts on weight mu by `q^{sum_i k_i d_i <mu, a_i^vee>}`.
    pub fn k_scalar(&self, kvec: &[i64], depth: &RootVec) -> RatQ {
        let w = self.weight_of_depth(depth);
        let e: i64 = (0..kvec.len()).map(|i| kvec[i] * self.cartan.d(i) as i64 * w.0[i]).sum();
        RatQ::q_pow(e)
    }

    pub fn apply_k(&self, kvec: &[i64], v: &ModVector) -> ModVector {
        let mut out = ModVector::zero();
        for (d, c) in &v.parts {
            let s = self.k_scalar(kvec, d);
            out.add_part(d.clone(), &c.iter().map(|x| &s * x).collect::<Vec<_>>());
        }
        out
    }

    pub fn apply_fword(&self, w: &[usize], v: &ModVector) -> Result<ModVector> {
        let mut out = v.clone();
        for &i in w.iter().rev() {
            out = self.apply_f(i, &out)?;
        }
        Ok(out)
    }

    pub fn apply_eword(&self, w: &[usize], v: &ModVector) -> ModVector {
        let mut out = v.clone();
        for &i in w.iter().rev() {
            out = self.apply_e(i, &out);
        }
        out
    }

    /// Action of an element of U_q(g).
    pub fn act(&self, x: &UqElement, v: &ModVector) -> Result<ModVector> {
        let mut out = ModVector::zero();
        for (m, c) in x.terms() {
            let a = self.apply_eword(&m.eword, v);
            if a.is_zero() {
                continue;
            }
            let b = self.apply_k(&m.kvec, &a);
            let t = self.apply_fword(&m.fword, &b)?;
            out = out.add(&t.scale(c));
        }
        Ok(out)
    }

    /// Row action `xi -> xi . E_i`, i.e. `(xi E_i)(v) = xi(E_i v)`.
    pub fn row_e(&self, i: usize, xi: &ModVector) -> ModVector {
        let r = self.cartan.rank();
        let mut out = ModVector::zero();
        for (d, row) in &xi.parts {
            let src = d.add(&RootVec::simple(r, i));
            if let Some(m) = self.e_up.get(&(src.clone(), i)) {
                out.add_part(src, &m.apply_left(row));
            }
        }
        out
    }

    /// Row action `xi -> xi . F_i`.
    pub fn row_f(&self, i: usize, xi: &ModVector) -> ModVector {
        let r = self.cartan.rank();
        let mut out = ModVector::zero();
        for (d, row) in &xi.parts {
            let Some(src) = Some(d.sub(&RootVec::simple(r, i))).filter(|s| s.is_nonneg()) else {
                continue;
            };
            if let Some(m) = self.f_down.get(&(src.clone(), i)) {
                out.add_part(src, &m.apply_left(row));
            }
        }
        out
    }

    /// Row action `xi -> xi . x`, so that `<xi . x, v> = <xi, x v>`.
    pub fn row_act(&self, xi: &ModVector, x: &UqElement) -> ModVector {
        let mut out = ModVector::zero();
        for (m, c) in x.terms() {
            let mut a = xi.clone();
            for &i in &m.fword {
                a = self.row_f(i, &a);
            }
            let mut b = ModVector::zero();
            for (d, row) in &a.parts {
                let s = self.k_scalar(&m.kvec, d);
                b.add_part(d.clone(), &row.iter().map(|x| &s * x).collect::<Vec<_>>());
            }
            for &i in &m.eword {
                b = self.row_e(i, &b);
            }
            out = out.add(&b.scale(c));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_dimensions() {
        let cd = CartanData::preset("A1").unwrap();
        let m = HWModule::build(&cd, &Weight(vec![1]), Depth::Full).unwrap();
        assert_eq!(m.total_dim(), 2);
        let m2 = HWModule::build(&cd, &Weight(vec![2]), Depth::Full).unwrap();
        let ws: Vec<(Weight, usize)> = m2.spaces().map(|s| (s.weight.clone(), s.dim())).collect();
        assert_eq!(ws, vec![(Weight(vec![2]), 1), (Weight(vec![0]), 1), (Weight(vec![-2]), 1)]);
    }

    #[test]
    fn a2_dimensions() {
        let cd = CartanData::preset("A2").unwrap();
        assert_eq!(HWModule::build(&cd, &Weight(vec![1, 0]), Depth::Full).unwrap().total_dim(), 3);
        let adj = HWModule::build(&cd, &Weight(vec![1, 1]), Depth::Full).unwrap();
        assert_eq!(adj.total_dim(), 8);
        assert_eq!(adj.dim_at(&RootVec(vec![1, 1])), 2);
    }

    #[test]
    fn rejects_bad_input() {
        let cd = CartanData::preset("A2").unwrap();
        assert!(matches!(HWModule::build(&cd, &Weight(vec![-1, 0]), Depth::Full), Err(Error::NotDominant(_))));
        let aff = CartanData::new(vec![vec![2, -2], vec![-2, 2]], vec![1, 1]).unwrap();
        assert!(matches!(HWModule::build(&aff, &Weight(vec![1, 0]), Depth::Full), Err(Error::InfiniteType)));
        assert!(HWModule::build(&aff, &Weight(vec![1, 0]), Depth::Height(3)).is_ok());
    }

    #[test]
    fn cutoff_is_loud() {
        let cd = CartanData::preset("A1").unwrap();
        let m = HWModule::build(&cd, &Weight(vec![3]), Depth::Height(1)).unwrap();
        let v = m.apply_f(0, &m.hw_vector()).unwrap();
        assert!(matches!(m.apply_f(0, &v), Err(Error::CutoffUnderflow { .. })));
    }
}
