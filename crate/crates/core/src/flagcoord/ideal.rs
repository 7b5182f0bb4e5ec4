//! The ideals `I_u^+ ⊆ R^+`, `I_v^- ⊆ R^-` (exact, componentwise) and windows on
//! `I_{u,v} = I_u^+ R^- + R^+ I_v^-` (bigraded, truncated by the size of the `R^-` factor).
//!
//! `extra` arguments count stages past a window's reach stage.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use parking_lot::Mutex;
use serde::Serialize;

use super::{Bidegree, FlagAlgebra, MatCoefElt};
use crate::error::{Error, Result};
use crate::hwmod::Side;
use crate::linalg::{add_entry, Echelon, SparseVec};
use crate::qscalar::RatQ;
use crate::rootdata::Weight;
use crate::weyl::WeylElt;

/// Rows of one module orthogonal to a Demazure subspace, by row weight.
#[derive(Debug)]
pub struct HalfIdeal {
    pub plus: bool,
    pub u: WeylElt,
    /// Highest weight of the module carrying the rows.
    pub module: Weight,
    /// Flat index of the fixed column (`b_lambda` or `b_{-lambda}`).
    pub column: usize,
    rows: BTreeMap<Weight, Vec<SparseVec<usize>>>,
    spans: BTreeMap<Weight, Echelon<usize>>,
}

impl HalfIdeal {
    pub fn rows_at(&self, weight: &Weight) -> &[SparseVec<usize>] {
        self.rows.get(weight).map_or(&[], |v| v.as_slice())
    }

    pub fn contains_row(&self, weight: &Weight, row: &SparseVec<usize>) -> bool {
        row.is_empty() || self.spans.get(weight).is_some_and(|e| e.contains(row))
    }

    pub fn dim(&self) -> usize {
        self.rows.values().map(|v| v.len()).sum()
    }
}

/// Products `c_{xi^g1, b_lambda1} c_{xi^g2, b_{-lambda2}}` at one bidegree, keyed by `(g1, g2)`.
#[derive(Debug)]
pub(crate) struct ProductTable {
    lambda1: Weight,
    lambda2: Weight,
    entries: HashMap<(usize, usize), SparseVec<(Weight, usize, usize)>>,
}

pub type WKey = (u8, Weight, usize, usize);

/// The part of `I_{u,v}` at one bidegree, intersected with the components in `targets`.
/// Stage k adds the products whose `R^-` factor comes from some lambda2 with largest
/// coordinate k, so stage 0 is `I_u^+` itself.
#[derive(Debug)]
pub struct UvWindow {
    pub u: WeylElt,
    pub v: WeylElt,
    pub bidegree: Bidegree,
    pub targets: BTreeSet<Weight>,
    /// First stage at which seeds exist and every target component lies below the
    /// Cartan component of the largest product of that stage.
    pub reach: i64,
    /// Dimension of the intersection with the target components after each stage.
    pub dims: Vec<usize>,
    ech: Echelon<WKey>,
}

impl UvWindow {
    /// Last completed stage, or -1.
    pub fn bound(&self) -> i64 {
        self.dims.len() as i64 - 1
    }

    /// Two consecutive stages past `reach` gave the same intersection dimension.
    pub fn is_stabilized(&self) -> bool {
        let n = self.dims.len();
        self.bound() > self.reach && self.dims[n - 1] == self.dims[n - 2]
    }

    pub fn intersection_dim(&self) -> usize {
        self.ech.basis_where(|k| k.0 == 1).len()
    }

    /// Membership of an element supported on the target components at this bidegree.
    pub fn contains(&self, x: &MatCoefElt) -> bool {
        self.ech.contains(&self.keyed(x))
    }

    fn keyed(&self, x: &MatCoefElt) -> SparseVec<WKey> {
        let mut v = SparseVec::new();
        for (lam, m) in &x.components {
            let flag = u8::from(self.targets.contains(lam));
            for ((a, b), c) in m {
                v.insert((flag, lam.clone(), *a, *b), c.clone());
            }
        }
        v
    }
}

/// Outcome of a truncated membership query. A positive answer is sound at any
/// bound; a negative one is exact only when every window involved stabilized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub member: bool,
    pub stabilized: bool,
    pub bound: i64,
}

impl Membership {
    /// `Some(answer)` when the answer is decided.
    pub fn decided(&self) -> Option<bool> {
        (self.member || self.stabilized).then_some(self.member)
    }
}

/// Dominant weights with largest coordinate exactly k (k = 0 gives the zero weight).
pub(crate) fn shell(rank: usize, k: i64) -> Vec<Weight> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; rank];
    loop {
        if cur.iter().copied().max().unwrap_or(0) == k {
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

/// Largest stage searched for the reach of a window.
const MAX_REACH: i64 = 64;

pub(crate) type WindowKey = (WeylElt, WeylElt, Bidegree, BTreeSet<Weight>);

impl FlagAlgebra {
    fn half(&self, plus: bool, u: &WeylElt, module: &Weight) -> Result<Arc<HalfIdeal>> {
        let key = (plus, u.clone(), module.clone());
        if let Some(h) = self.halves.lock().get(&key) {
            return Ok(h.clone());
        }
        let idx = self.index(module)?;
        let m = &idx.module;
        let (sub, column) = if plus {
            (m.demazure_span(u, Side::Plus)?, 0)
        } else {
            let uw = u.mult(self.cartan(), self.w0());
            let low = idx.global(&m.extremal_depth(self.w0()), 0).expect("lowest weight space");
            (m.demazure_span(&uw, Side::Minus)?, low)
        };
        let mut rows: BTreeMap<Weight, Vec<SparseVec<usize>>> = BTreeMap::new();
        let mut spans: BTreeMap<Weight, Echelon<usize>> = BTreeMap::new();
        for s in m.spaces() {
            let off = idx.global(&s.depth, 0).expect("constructed depth");
            for r in m.annihilator_at(&sub, &s.depth) {
                let v: SparseVec<usize> = r
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (off + k, c))
                    .collect();
                spans.entry(s.weight.clone()).or_default().insert(&v);
                rows.entry(s.weight.clone()).or_default().push(v);
            }
        }
        let h = Arc::new(HalfIdeal { plus, u: u.clone(), module: module.clone(), column, rows, spans });
        Ok(self.halves.lock().entry(key).or_insert(h).clone())
    }

    /// `I_u^+` inside L(lambda): rows orthogonal to `U^+ b_{u lambda}`, column `b_lambda`.
    pub fn plus_ideal(&self, u: &WeylElt, lambda: &Weight) -> Result<Arc<HalfIdeal>> {
        self.half(true, u, lambda)
    }

    /// `I_v^-` for lowest weight `-lambda`: rows of L(-w0 lambda) orthogonal to
    /// `U^- b_{-v lambda}`, column `b_{-lambda}`.
    pub fn minus_ideal(&self, v: &WeylElt, lambda: &Weight) -> Result<Arc<HalfIdeal>> {
        self.half(false, v, &self.dual_weight(lambda))
    }

    fn in_half(&self, plus: bool, u: &WeylElt, x: &MatCoefElt) -> Result<bool> {
        for (lam, m) in &x.components {
            let h = self.half(plus, u, lam)?;
            let idx = self.index(lam)?;
            let mut rows: BTreeMap<&Weight, SparseVec<usize>> = BTreeMap::new();
            for ((a, b), c) in m {
                if *b != h.column {
                    return Ok(false);
                }
                rows.entry(&idx.weight[*a]).or_default().insert(*a, c.clone());
            }
            for (w, r) in rows {
                if !h.contains_row(w, &r) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Exact membership in `I_u^+`; elements outside `R^+` are not members.
    pub fn in_plus_ideal(&self, u: &WeylElt, x: &MatCoefElt) -> Result<bool> {
        self.in_half(true, u, x)
    }

    /// Exact membership in `I_v^-`; elements outside `R^-` are not members.
    pub fn in_minus_ideal(&self, v: &WeylElt, x: &MatCoefElt) -> Result<bool> {
        self.in_half(false, v, x)
    }

    fn product_table(&self, lambda2: &Weight, bideg: &Bidegree) -> Result<Option<Arc<ProductTable>>> {
        let (row, col) = bideg;
        let lambda1 = lambda2.add(col);
        if !lambda1.is_dominant() {
            return Ok(None);
        }
        let key = (lambda2.clone(), row.clone(), col.clone());
        if let Some(p) = self.products.lock().get(&key) {
            return Ok(Some(p.clone()));
        }
        let l2p = self.dual_weight(lambda2);
        let b = self.index(&l2p)?;
        let low = b.by_weight[&lambda2.neg()][0];
        let t = self.tensor(&lambda1, &l2p)?;
        let mut t = t.lock();
        let mut single = SparseVec::new();
        single.insert((0, low), RatQ::one());
        let proj = t.project(col, &single)?;
        let mut by_c: BTreeMap<usize, Vec<(usize, RatQ)>> = BTreeMap::new();
        for (c, l, p) in proj {
            by_c.entry(c).or_default().push((l, p));
        }
        let mut entries: HashMap<(usize, usize), SparseVec<(Weight, usize, usize)>> = HashMap::new();
        for (c, ls) in by_c {
            let nu = t.constituents[c].highest.clone();
            let ks = t.constituents[c].index.by_weight.get(row).cloned().unwrap_or_default();
            for k in ks {
                let img = t.image(c, k);
                for (g, val) in img.iter() {
                    let e = entries.entry(*g).or_default();
                    for (l, p) in &ls {
                        add_entry(e, (nu.clone(), k, *l), val * p);
                    }
                }
            }
        }
        entries.retain(|_, v| !v.is_empty());
        let p = Arc::new(ProductTable { lambda1, lambda2: l2p, entries });
        Ok(Some(self.products.lock().entry(key).or_insert(p).clone()))
    }

    fn reach_stage(&self, col: &Weight, targets: &BTreeSet<Weight>) -> Result<i64> {
        let cd = self.cartan();
        let rho = Weight::rho(cd.rank());
        for k in 0..=MAX_REACH {
            let l1 = rho.scale(k).add(col);
            if !l1.is_dominant() {
                continue;
            }
            let top = l1.add(&rho.scale(k));
            let below = |nu: &Weight| {
                cd.weight_in_roots(&top.sub(nu))
                    .is_some_and(|c| c.iter().all(|x| x.is_integer() && *x >= 0.into()))
            };
            if targets.iter().all(below) {
                return Ok(k);
            }
        }
        Err(Error::Truncation(format!("target components out of reach for column weight {col}")))
    }

    fn window(
        &self,
        u: &WeylElt,
        v: &WeylElt,
        bideg: &Bidegree,
        targets: &BTreeSet<Weight>,
    ) -> Result<Arc<Mutex<UvWindow>>> {
        let key: WindowKey = (u.clone(), v.clone(), bideg.clone(), targets.clone());
        if let Some(w) = self.windows.lock().get(&key) {
            return Ok(w.clone());
        }
        let reach = self.reach_stage(&bideg.1, targets)?;
        let w = Arc::new(Mutex::new(UvWindow {
            u: u.clone(),
            v: v.clone(),
            bidegree: bideg.clone(),
            targets: targets.clone(),
            reach,
            dims: Vec::new(),
            ech: Echelon::new(),
        }));
        Ok(self.windows.lock().entry(key).or_insert(w).clone())
    }

    fn extend_window(&self, w: &mut UvWindow) -> Result<()> {
        let k = w.bound() + 1;
        let (row, _) = w.bidegree.clone();
        for lambda2 in shell(self.cartan().rank(), k) {
            let Some(table) = self.product_table(&lambda2, &w.bidegree)? else { continue };
            let a = self.index(&table.lambda1)?;
            let b = self.index(&table.lambda2)?;
            let plus = self.plus_ideal(&w.u, &table.lambda1)?;
            let minus = self.half(false, &w.v, &table.lambda2)?;
            let combine = |xs: &[(usize, &RatQ)], ys: &[(usize, &RatQ)]| {
                let mut out: SparseVec<WKey> = SparseVec::new();
                for (g1, x) in xs {
                    for (g2, y) in ys {
                        if let Some(p) = table.entries.get(&(*g1, *g2)) {
                            let s = *x * *y;
                            for ((nu, kk, l), c) in p {
                                let flag = u8::from(w.targets.contains(nu));
                                add_entry(&mut out, (flag, nu.clone(), *kk, *l), &s * c);
                            }
                        }
                    }
                }
                out
            };
            let one = RatQ::one();
            for (mu1, g1s) in &a.by_weight {
                let mu2 = row.sub(mu1);
                let Some(g2s) = b.by_weight.get(&mu2) else { continue };
                for r in plus.rows_at(mu1) {
                    let xs: Vec<(usize, &RatQ)> = r.iter().map(|(g, c)| (*g, c)).collect();
                    for &g2 in g2s {
                        let v = combine(&xs, &[(g2, &one)]);
                        w.ech.insert(&v);
                    }
                }
                for r in minus.rows_at(&mu2) {
                    let ys: Vec<(usize, &RatQ)> = r.iter().map(|(g, c)| (*g, c)).collect();
                    for &g1 in g1s {
                        let v = combine(&[(g1, &one)], &ys);
                        w.ech.insert(&v);
                    }
                }
            }
        }
        let d = w.intersection_dim();
        w.dims.push(d);
        Ok(())
    }

    /// Membership in `I_{u,v}`. Each window is raised stage by stage up to `extra`
    /// stages past its reach stage, stopping early once the element is found.
    pub fn in_uv_ideal(&self, u: &WeylElt, v: &WeylElt, x: &MatCoefElt, extra: i64) -> Result<Membership> {
        let mut stabilized = true;
        let mut reached = 0;
        for (bideg, part) in self.bidegree_parts(x)? {
            let targets: BTreeSet<Weight> = part.components.keys().cloned().collect();
            let win = self.window(u, v, &bideg, &targets)?;
            let mut win = win.lock();
            let bound = win.reach + extra;
            let mut found = win.bound() >= 0 && win.contains(&part);
            while !found && win.bound() < bound {
                self.extend_window(&mut win)?;
                found = win.contains(&part);
            }
            reached = reached.max(win.bound());
            if !found {
                return Ok(Membership { member: false, stabilized: win.is_stabilized(), bound: win.bound() });
            }
            stabilized &= win.is_stabilized();
        }
        Ok(Membership { member: true, stabilized, bound: reached })
    }

    /// Canonical remainders of bihomogeneous elements modulo the window built through
    /// `bound`, and whether the window stabilized. Two elements are congruent modulo
    /// the truncation iff their remainders agree.
    pub fn uv_reduce(
        &self,
        u: &WeylElt,
        v: &WeylElt,
        bideg: &Bidegree,
        targets: &BTreeSet<Weight>,
        xs: &[&MatCoefElt],
        extra: i64,
    ) -> Result<(Vec<SparseVec<WKey>>, bool)> {
        let win = self.window(u, v, bideg, targets)?;
        let mut win = win.lock();
        let bound = win.reach + extra;
        while win.bound() < bound {
            self.extend_window(&mut win)?;
        }
        let rs = xs.iter().map(|x| win.ech.reduce(&win.keyed(x))).collect();
        Ok((rs, win.is_stabilized()))
    }

    /// The window itself, built through `bound`; for dimension reports and tests.
    pub fn uv_window_dims(
        &self,
        u: &WeylElt,
        v: &WeylElt,
        bideg: &Bidegree,
        targets: &BTreeSet<Weight>,
        bound: i64,
    ) -> Result<Vec<usize>> {
        let win = self.window(u, v, bideg, targets)?;
        let mut win = win.lock();
        while win.bound() < bound {
            self.extend_window(&mut win)?;
        }
        Ok(win.dims[..=bound as usize].to_vec())
    }
}
