//! Flat indexing of L(lambda) and decomposition of L(a) (x) L(b) into irreducibles.
//!
//! Coproduct: `D(E_i) = E_i (x) 1 + K_i (x) E_i`, `D(F_i) = F_i (x) K_i^-1 + 1 (x) F_i`,
//! `D(K_i) = K_i (x) K_i`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hwmod::{HWModule, ModVector};
use crate::linalg::{add_entry, nullspace, Echelon, SparseVec};
use crate::qscalar::RatQ;
use crate::rootdata::{RootVec, Weight};

/// Basis of L(lambda) flattened in depth order; index 0 is the highest weight vector.
#[derive(Debug)]
pub struct ModIndex {
    pub module: Arc<HWModule>,
    pub depth: Vec<RootVec>,
    pub local: Vec<usize>,
    pub weight: Vec<Weight>,
    offset: BTreeMap<RootVec, usize>,
    pub by_weight: BTreeMap<Weight, Vec<usize>>,
    /// `e_act[i][g]`: `E_i e_g` as (index, coefficient) pairs.
    e_act: Vec<Vec<Vec<(usize, RatQ)>>>,
    f_act: Vec<Vec<Vec<(usize, RatQ)>>>,
    /// `e_rev[i][g]`: the pairs `(h, c)` with `E_i e_h` having coefficient c on `e_g`.
    e_rev: Vec<Vec<Vec<(usize, RatQ)>>>,
    /// `kexp[g][i] = d_i <wt(e_g), a_i^vee>`.
    kexp: Vec<Vec<i64>>,
    /// `e_g = F_j e_parent`.
    parent: Vec<Option<(usize, usize)>>,
}

impl ModIndex {
    pub fn new(module: Arc<HWModule>) -> Self {
        let cd = module.cartan().clone();
        let r = cd.rank();
        let mut depth = Vec::new();
        let mut local = Vec::new();
        let mut weight = Vec::new();
        let mut offset = BTreeMap::new();
        let mut by_weight: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
        let mut by_tag: HashMap<Vec<usize>, usize> = HashMap::new();
        for s in module.spaces() {
            offset.insert(s.depth.clone(), depth.len());
            for (k, tag) in s.tags.iter().enumerate() {
                let g = depth.len();
                by_tag.insert(tag.clone(), g);
                by_weight.entry(s.weight.clone()).or_default().push(g);
                depth.push(s.depth.clone());
                local.push(k);
                weight.push(s.weight.clone());
            }
        }
        let n = depth.len();
        let mut parent = vec![None; n];
        for s in module.spaces() {
            for tag in &s.tags {
                if let Some((&j, rest)) = tag.split_first() {
                    parent[by_tag[tag]] = Some((j, by_tag[rest]));
                }
            }
        }
        let mut e_act = vec![vec![Vec::new(); n]; r];
        let mut f_act = vec![vec![Vec::new(); n]; r];
        let mut e_rev = vec![vec![Vec::new(); n]; r];
        for g in 0..n {
            for i in 0..r {
                let up = depth[g].sub(&RootVec::simple(r, i));
                if let (Some(m), Some(&off)) = (module.e_matrix(&depth[g], i), offset.get(&up)) {
                    for (a, c) in m.column(local[g]).into_iter().enumerate() {
                        if !c.is_zero() {
                            e_rev[i][off + a].push((g, c.clone()));
                            e_act[i][g].push((off + a, c));
                        }
                    }
                }
                let down = depth[g].add(&RootVec::simple(r, i));
                if let (Some(m), Some(&off)) = (module.f_matrix(&depth[g], i), offset.get(&down)) {
                    for (a, c) in m.column(local[g]).into_iter().enumerate() {
                        if !c.is_zero() {
                            f_act[i][g].push((off + a, c));
                        }
                    }
                }
            }
        }
        let kexp = weight.iter().map(|w| (0..r).map(|i| cd.d(i) as i64 * w.0[i]).collect()).collect();
        ModIndex { module, depth, local, weight, offset, by_weight, e_act, f_act, e_rev, kexp, parent }
    }

    pub fn dim(&self) -> usize {
        self.depth.len()
    }

    pub fn highest(&self) -> &Weight {
        self.module.highest()
    }

    pub fn global(&self, depth: &RootVec, k: usize) -> Option<usize> {
        self.offset.get(depth).map(|o| o + k)
    }

    pub fn to_sparse(&self, v: &ModVector) -> SparseVec<usize> {
        let mut out = SparseVec::new();
        for (d, c) in &v.parts {
            let Some(&off) = self.offset.get(d) else { continue };
            for (k, x) in c.iter().enumerate() {
                if !x.is_zero() {
                    out.insert(off + k, x.clone());
                }
            }
        }
        out
    }

    pub fn to_modvector(&self, v: &SparseVec<usize>) -> ModVector {
        let mut out = ModVector::zero();
        for (&g, c) in v {
            let d = &self.depth[g];
            let mut coords = vec![RatQ::zero(); self.module.dim_at(d)];
            coords[self.local[g]] = c.clone();
            out.add_part(d.clone(), &coords);
        }
        out
    }

    pub fn e_of(&self, i: usize, g: usize) -> &[(usize, RatQ)] {
        &self.e_act[i][g]
    }

    pub fn f_of(&self, i: usize, g: usize) -> &[(usize, RatQ)] {
        &self.f_act[i][g]
    }

    pub fn e_into(&self, i: usize, g: usize) -> &[(usize, RatQ)] {
        &self.e_rev[i][g]
    }

    pub fn k_exp(&self, g: usize, i: usize) -> i64 {
        self.kexp[g][i]
    }

    pub fn parent(&self, g: usize) -> Option<(usize, usize)> {
        self.parent[g]
    }
}

pub type TVec = SparseVec<(usize, usize)>;

#[derive(Debug)]
pub struct Constituent {
    pub highest: Weight,
    pub index: Arc<ModIndex>,
    pub hw: TVec,
}

/// `L(a) (x) L(b)` with a fixed decomposition into highest weight constituents.
#[derive(Debug)]
pub struct TensorProduct {
    pub a: Arc<ModIndex>,
    pub b: Arc<ModIndex>,
    pub constituents: Vec<Constituent>,
    images: HashMap<(usize, usize), Arc<TVec>>,
    solvers: HashMap<Weight, Arc<(Vec<(usize, usize)>, Echelon<(usize, usize)>)>>,
}

impl TensorProduct {
    /// Finds all highest weight vectors; `module_of` supplies the flat index of L(nu).
    pub fn new(
        a: Arc<ModIndex>,
        b: Arc<ModIndex>,
        mut module_of: impl FnMut(&Weight) -> Result<Arc<ModIndex>>,
    ) -> Result<Self> {
        let r = a.highest().rank();
        let top = a.highest().add(b.highest());
        let mut candidates: Vec<Weight> = Vec::new();
        for wa in a.by_weight.keys() {
            for wb in b.by_weight.keys() {
                let w = wa.add(wb);
                if w.is_dominant() && !candidates.contains(&w) {
                    candidates.push(w);
                }
            }
        }
        let cd = a.module.cartan().clone();
        let depth_of = |w: &Weight| -> RootVec {
            let x = cd.weight_in_roots(&top.sub(w)).expect("finite type");
            RootVec(x.iter().map(|c| c.to_integer()).collect())
        };
        candidates.sort_by(|x, y| {
            depth_of(x).height().cmp(&depth_of(y).height()).then_with(|| x.cmp(y))
        });
        let mut t = TensorProduct {
            a,
            b,
            constituents: Vec::new(),
            images: HashMap::new(),
            solvers: HashMap::new(),
        };
        let mut total = 0;
        for nu in candidates {
            let basis = t.weight_basis(&nu);
            let mut rows: BTreeMap<(usize, (usize, usize)), usize> = BTreeMap::new();
            let mut mat: Vec<Vec<RatQ>> = Vec::new();
            for (col, key) in basis.iter().enumerate() {
                let mut single = TVec::new();
                single.insert(*key, RatQ::one());
                for i in 0..r {
                    for (k, c) in t.apply_e(i, &single) {
                        let row = *rows.entry((i, k)).or_insert_with(|| {
                            mat.push(vec![RatQ::zero(); basis.len()]);
                            mat.len() - 1
                        });
                        mat[row][col] = c;
                    }
                }
            }
            for v in nullspace(&mat, basis.len()) {
                let hw: TVec = basis
                    .iter()
                    .zip(v)
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (*k, c))
                    .collect();
                let index = module_of(&nu)?;
                total += index.dim();
                t.constituents.push(Constituent { highest: nu.clone(), index, hw });
            }
        }
        if total != t.a.dim() * t.b.dim() {
            return Err(Error::Internal(format!(
                "tensor decomposition covers {total} of {} dimensions",
                t.a.dim() * t.b.dim()
            )));
        }
        Ok(t)
    }

    /// Pairs `(g, h)` of basis vectors with `wt(e_g) + wt(e_h) = w`.
    pub fn weight_basis(&self, w: &Weight) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (wa, ga) in &self.a.by_weight {
            if let Some(gb) = self.b.by_weight.get(&w.sub(wa)) {
                for &x in ga {
                    for &y in gb {
                        out.push((x, y));
                    }
                }
            }
        }
        out.sort();
        out
    }

    pub fn apply_e(&self, i: usize, v: &TVec) -> TVec {
        let mut out = TVec::new();
        for (&(g, h), c) in v {
            for (g2, x) in self.a.e_of(i, g) {
                add_entry(&mut out, (*g2, h), c * x);
            }
            let k = RatQ::q_pow(self.a.k_exp(g, i));
            for (h2, x) in self.b.e_of(i, h) {
                add_entry(&mut out, (g, *h2), &(c * x) * &k);
            }
        }
        out
    }

    pub fn apply_f(&self, i: usize, v: &TVec) -> TVec {
        let mut out = TVec::new();
        for (&(g, h), c) in v {
            let k = RatQ::q_pow(-self.b.k_exp(h, i));
            for (g2, x) in self.a.f_of(i, g) {
                add_entry(&mut out, (*g2, h), &(c * x) * &k);
            }
            for (h2, x) in self.b.f_of(i, h) {
                add_entry(&mut out, (g, *h2), c * x);
            }
        }
        out
    }

    /// Image of basis vector `g` of constituent `c` under its embedding.
    pub fn image(&mut self, c: usize, g: usize) -> Arc<TVec> {
        if let Some(v) = self.images.get(&(c, g)) {
            return v.clone();
        }
        let v = match self.constituents[c].index.parent(g) {
            None => self.constituents[c].hw.clone(),
            Some((j, p)) => {
                let up = self.image(c, p);
                self.apply_f(j, &up)
            }
        };
        let v = Arc::new(v);
        self.images.insert((c, g), v.clone());
        v
    }

    fn solver(&mut self, w: &Weight) -> Result<Arc<(Vec<(usize, usize)>, Echelon<(usize, usize)>)>> {
        if let Some(s) = self.solvers.get(w) {
            return Ok(s.clone());
        }
        let mut labels = Vec::new();
        let mut ech = Echelon::tracking();
        for c in 0..self.constituents.len() {
            let gs = self.constituents[c].index.by_weight.get(w).cloned().unwrap_or_default();
            for g in gs {
                let v = self.image(c, g);
                ech.insert(&v);
                labels.push((c, g));
            }
        }
        let n = self.weight_basis(w).len();
        if ech.dim() != n || labels.len() != n {
            return Err(Error::Internal(format!("weight {w} of the tensor product is not split")));
        }
        let s = Arc::new((labels, ech));
        self.solvers.insert(w.clone(), s.clone());
        Ok(s)
    }

    /// `v = sum p * iota_c(e_g)`; `v` must be homogeneous of weight `w`.
    pub fn project(&mut self, w: &Weight, v: &TVec) -> Result<Vec<(usize, usize, RatQ)>> {
        let s = self.solver(w)?;
        let comb = s
            .1
            .express(v)
            .ok_or_else(|| Error::Internal("vector outside its tensor weight space".into()))?;
        Ok(comb.into_iter().map(|(idx, p)| (s.0[idx].0, s.0[idx].1, p)).collect())
    }

    pub fn weight_of(&self, g: usize, h: usize) -> Weight {
        self.a.weight[g].add(&self.b.weight[h])
    }
}
