//! Matrix coefficients of R_q[G] for finite type, quantum minors and the
//! skew derivations `E_i` acting on rows.
//!
//! An element is stored per component L(lambda) as a sparse matrix: entry
//! `(a, b)` is the coefficient of `c_{xi^a, e_b}`, where `e_b` runs over the flat
//! basis of [`ModIndex`] and `xi^a` is the dual basis. Rows are labelled by the
//! weight of `e_a`, so `c_{xi^a, e_b}` has bidegree `(-wt(e_a), wt(e_b))`.

pub mod tensor;
mod ideal;
mod verify;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use parking_lot::Mutex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hwmod::{Depth, ModuleStore};
use crate::linalg::{add_entry, axpy, SparseVec};
use crate::qscalar::RatQ;
use crate::rootdata::{CartanData, Weight};
use crate::uq::UqElement;
use crate::weyl::{longest_element, WeylElt};

pub use ideal::{HalfIdeal, Membership, UvWindow};
pub use tensor::{ModIndex, TensorProduct};
pub use verify::{
    FlagDisjointness, FlagSeparation, FlagWitness, MultiplicativityOutcome, NormalityCheck,
    SkewDegree, DELEGATED_RQG,
};

/// Finite combination of matrix coefficients, keyed by component and `(row, column)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MatCoefElt {
    pub components: BTreeMap<Weight, SparseVec<(usize, usize)>>,
}

impl MatCoefElt {
    pub fn zero() -> Self {
        MatCoefElt::default()
    }

    /// `c_{xi, b}` in L(lambda), with `xi` and `b` in flat coordinates.
    pub fn coef(lambda: &Weight, xi: &SparseVec<usize>, b: &SparseVec<usize>) -> Self {
        let mut m = SparseVec::new();
        for (a, x) in xi {
            for (c, y) in b {
                add_entry(&mut m, (*a, *c), x * y);
            }
        }
        let mut out = MatCoefElt::zero();
        if !m.is_empty() {
            out.components.insert(lambda.clone(), m);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn add(&self, o: &MatCoefElt) -> MatCoefElt {
        let mut out = self.clone();
        out.add_assign(o, &RatQ::one());
        out
    }

    pub fn sub(&self, o: &MatCoefElt) -> MatCoefElt {
        let mut out = self.clone();
        out.add_assign(o, &RatQ::from_int(-1));
        out
    }

    pub fn scale(&self, c: &RatQ) -> MatCoefElt {
        let mut out = MatCoefElt::zero();
        out.add_assign(self, c);
        out
    }

    fn add_assign(&mut self, o: &MatCoefElt, c: &RatQ) {
        for (lam, m) in &o.components {
            let e = self.components.entry(lam.clone()).or_default();
            axpy(e, c, m);
            if e.is_empty() {
                self.components.remove(lam);
            }
        }
    }

    /// `self = t * o` for a scalar t, if one exists.
    pub fn ratio_to(&self, o: &MatCoefElt) -> Option<RatQ> {
        if self.components.keys().ne(o.components.keys()) {
            return None;
        }
        let (lam, m) = o.components.iter().next()?;
        let (k, c) = m.iter().next()?;
        let t = self.components[lam].get(k)?.checked_div(c).ok()?;
        (self == &o.scale(&t)).then_some(t)
    }
}

impl fmt::Display for MatCoefElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (lam, m) in &self.components {
            for ((a, b), c) in m {
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                write!(f, "({c})*c{lam}[{a},{b}]")?;
            }
        }
        Ok(())
    }
}

/// `Delta_{x lambda, y lambda}` together with its defining data.
#[derive(Clone, Debug)]
pub struct QuantumMinor {
    pub u: WeylElt,
    pub v: WeylElt,
    pub lambda: Weight,
    /// Lowest-weight type `Delta_{-u lambda, -v lambda}`, taken in L(-w0 lambda).
    pub minus: bool,
    pub as_elt: MatCoefElt,
}

impl QuantumMinor {
    pub fn label(&self) -> String {
        if self.minus {
            format!("D[-{}{},-{}{}]", self.u, self.lambda, self.v, self.lambda)
        } else {
            format!("D[{}{},{}{}]", self.u, self.lambda, self.v, self.lambda)
        }
    }
}

/// Bidegree `(row weight, column weight)`; the row weight is `wt(e_a)` for `xi^a`.
pub type Bidegree = (Weight, Weight);

#[derive(Clone, Debug, Serialize)]
pub struct FlagStats {
    pub modules: usize,
    pub tensors: usize,
}

/// Matrix-coefficient algebra of a finite-type Cartan datum.
pub struct FlagAlgebra {
    cd: CartanData,
    store: Arc<ModuleStore>,
    w0: WeylElt,
    indexes: Mutex<HashMap<Weight, Arc<ModIndex>>>,
    tensors: Mutex<HashMap<(Weight, Weight), Arc<Mutex<TensorProduct>>>>,
    pub(crate) halves: Mutex<HashMap<(bool, WeylElt, Weight), Arc<HalfIdeal>>>,
    pub(crate) products: Mutex<HashMap<(Weight, Weight, Weight), Arc<ideal::ProductTable>>>,
    pub(crate) windows: Mutex<HashMap<ideal::WindowKey, Arc<Mutex<UvWindow>>>>,
}

impl FlagAlgebra {
    pub fn new(store: Arc<ModuleStore>) -> Result<Self> {
        let cd = store.cartan().clone();
        let w0 = longest_element(&cd)?;
        Ok(FlagAlgebra {
            cd,
            store,
            w0,
            indexes: Mutex::new(HashMap::new()),
            tensors: Mutex::new(HashMap::new()),
            halves: Mutex::new(HashMap::new()),
            products: Mutex::new(HashMap::new()),
            windows: Mutex::new(HashMap::new()),
        })
    }

    pub fn cartan(&self) -> &CartanData {
        &self.cd
    }

    pub fn w0(&self) -> &WeylElt {
        &self.w0
    }

    pub fn stats(&self) -> FlagStats {
        FlagStats { modules: self.indexes.lock().len(), tensors: self.tensors.lock().len() }
    }

    /// `-w0 lambda`, the highest weight of the module whose lowest weight is `-lambda`.
    pub fn dual_weight(&self, lambda: &Weight) -> Weight {
        self.w0.act(&self.cd, &lambda.neg())
    }

    pub fn index(&self, lambda: &Weight) -> Result<Arc<ModIndex>> {
        if let Some(m) = self.indexes.lock().get(lambda) {
            return Ok(m.clone());
        }
        let m = self.store.get(lambda, Depth::Full)?;
        let idx = Arc::new(ModIndex::new(m));
        Ok(self.indexes.lock().entry(lambda.clone()).or_insert(idx).clone())
    }

    pub fn tensor(&self, a: &Weight, b: &Weight) -> Result<Arc<Mutex<TensorProduct>>> {
        let key = (a.clone(), b.clone());
        if let Some(t) = self.tensors.lock().get(&key) {
            return Ok(t.clone());
        }
        let t = TensorProduct::new(self.index(a)?, self.index(b)?, |nu| self.index(nu))?;
        let t = Arc::new(Mutex::new(t));
        Ok(self.tensors.lock().entry(key).or_insert(t).clone())
    }

    /// The unit: the matrix coefficient of the trivial module.
    pub fn one(&self) -> MatCoefElt {
        let mut m = SparseVec::new();
        m.insert((0, 0), RatQ::one());
        MatCoefElt { components: BTreeMap::from([(Weight::zero(self.cd.rank()), m)]) }
    }

    /// `c_{xi^a, e_b}` in L(lambda).
    pub fn basis_coef(&self, lambda: &Weight, a: usize, b: usize) -> MatCoefElt {
        let mut m = SparseVec::new();
        m.insert((a, b), RatQ::one());
        MatCoefElt { components: BTreeMap::from([(lambda.clone(), m)]) }
    }

    /// `c(x) = <xi, x b>`.
    pub fn evaluate(&self, c: &MatCoefElt, x: &UqElement) -> Result<RatQ> {
        let mut total = RatQ::zero();
        for (lam, m) in &c.components {
            let idx = self.index(lam)?;
            let mut cols: BTreeMap<usize, SparseVec<usize>> = BTreeMap::new();
            for ((a, b), coef) in m {
                cols.entry(*b).or_default().insert(*a, coef.clone());
            }
            for (b, rows) in cols {
                let mut e = SparseVec::new();
                e.insert(b, RatQ::one());
                let v = idx.to_sparse(&idx.module.act(x, &idx.to_modvector(&e))?);
                for (a, coef) in rows {
                    if let Some(y) = v.get(&a) {
                        total = &total + &(&coef * y);
                    }
                }
            }
        }
        Ok(total)
    }

    /// `(c c')(x) = (c (x) c')(Delta x)`, expanded over the constituents of each tensor product.
    pub fn multiply(&self, x: &MatCoefElt, y: &MatCoefElt) -> Result<MatCoefElt> {
        let mut out: BTreeMap<Weight, SparseVec<(usize, usize)>> = BTreeMap::new();
        for (lam, mx) in &x.components {
            for (mu, my) in &y.components {
                let t = self.tensor(lam, mu)?;
                let mut t = t.lock();
                let mut proj: HashMap<(usize, usize), Vec<(usize, usize, RatQ)>> = HashMap::new();
                for ((a1, b1), c1) in mx {
                    for ((a2, b2), c2) in my {
                        let coef = c1 * c2;
                        let colw = t.weight_of(*b1, *b2);
                        let roww = t.weight_of(*a1, *a2);
                        if !proj.contains_key(&(*b1, *b2)) {
                            let mut v = SparseVec::new();
                            v.insert((*b1, *b2), RatQ::one());
                            let p = t.project(&colw, &v)?;
                            proj.insert((*b1, *b2), p);
                        }
                        let p = proj[&(*b1, *b2)].clone();
                        for (c, l, pl) in p {
                            let ks = t.constituents[c].index.by_weight.get(&roww).cloned().unwrap_or_default();
                            let nu = t.constituents[c].highest.clone();
                            for k in ks {
                                let img = t.image(c, k);
                                if let Some(val) = img.get(&(*a1, *a2)) {
                                    let e = out.entry(nu.clone()).or_default();
                                    add_entry(e, (k, l), &(&coef * val) * &pl);
                                }
                            }
                        }
                    }
                }
            }
        }
        out.retain(|_, m| !m.is_empty());
        Ok(MatCoefElt { components: out })
    }

    /// `Delta_{u lambda, v lambda} = c_{xi_{u lambda}, b_{v lambda}}`.
    pub fn minor(&self, u: &WeylElt, v: &WeylElt, lambda: &Weight) -> Result<QuantumMinor> {
        if !lambda.is_dominant() {
            return Err(Error::NotDominant(lambda.clone()));
        }
        let idx = self.index(lambda)?;
        let xi = idx.to_sparse(&idx.module.dual_functional(u)?);
        let b = idx.to_sparse(&idx.module.extremal_vector(v)?);
        Ok(QuantumMinor {
            u: u.clone(),
            v: v.clone(),
            lambda: lambda.clone(),
            minus: false,
            as_elt: MatCoefElt::coef(lambda, &xi, &b),
        })
    }

    /// `Delta_{-u lambda, -v lambda}` in L(lambda') with `lambda' = -w0 lambda`, where
    /// `b_{-v lambda} = b_{v w0 lambda'}`. In particular `b_{-lambda}` is the extremal
    /// vector of `w0` built from `b_{lambda'}`.
    pub fn minor_minus(&self, u: &WeylElt, v: &WeylElt, lambda: &Weight) -> Result<QuantumMinor> {
        if !lambda.is_dominant() {
            return Err(Error::NotDominant(lambda.clone()));
        }
        let lp = self.dual_weight(lambda);
        let idx = self.index(&lp)?;
        let uw = u.mult(&self.cd, &self.w0);
        let vw = v.mult(&self.cd, &self.w0);
        let xi = idx.to_sparse(&idx.module.dual_functional(&uw)?);
        let b = idx.to_sparse(&idx.module.extremal_vector(&vw)?);
        Ok(QuantumMinor {
            u: u.clone(),
            v: v.clone(),
            lambda: lambda.clone(),
            minus: true,
            as_elt: MatCoefElt::coef(&lp, &xi, &b),
        })
    }

    /// `E_i` acting on rows through the dual module: `(E_i xi)(v) = xi(S(E_i) v)` with
    /// `S(E_i) = -K_i^{-1} E_i`.
    pub fn partial(&self, i: usize, c: &MatCoefElt) -> Result<MatCoefElt> {
        self.cd.check_index(i)?;
        let mut out = MatCoefElt::zero();
        for (lam, m) in &c.components {
            let idx = self.index(lam)?;
            let mut acc = SparseVec::new();
            for ((a, b), coef) in m {
                let k = RatQ::q_pow(-idx.k_exp(*a, i));
                for (h, x) in idx.e_into(i, *a) {
                    add_entry(&mut acc, (*h, *b), -&(&(coef * x) * &k));
                }
            }
            if !acc.is_empty() {
                out.components.insert(lam.clone(), acc);
            }
        }
        Ok(out)
    }

    /// Splits an element into bihomogeneous parts.
    pub fn bidegree_parts(&self, c: &MatCoefElt) -> Result<BTreeMap<Bidegree, MatCoefElt>> {
        let mut out: BTreeMap<Bidegree, MatCoefElt> = BTreeMap::new();
        for (lam, m) in &c.components {
            let idx = self.index(lam)?;
            for ((a, b), coef) in m {
                let key = (idx.weight[*a].clone(), idx.weight[*b].clone());
                out.entry(key)
                    .or_default()
                    .components
                    .entry(lam.clone())
                    .or_default()
                    .insert((*a, *b), coef.clone());
            }
        }
        Ok(out)
    }

    /// Bidegree of a bihomogeneous element; `None` for zero or mixed elements.
    pub fn bidegree(&self, c: &MatCoefElt) -> Result<Option<Bidegree>> {
        let parts = self.bidegree_parts(c)?;
        Ok(if parts.len() == 1 { parts.into_keys().next() } else { None })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cache::DiskCache;

    fn alg(t: &str) -> FlagAlgebra {
        let cd = CartanData::preset(t).unwrap();
        FlagAlgebra::new(Arc::new(ModuleStore::new(cd, DiskCache::disabled()))).unwrap()
    }

    #[test]
    fn tensor_dimensions_add_up() {
        let a = alg("A2");
        let t = a.tensor(&Weight(vec![1, 0]), &Weight(vec![0, 1])).unwrap();
        let t = t.lock();
        let hw: Vec<Weight> = t.constituents.iter().map(|c| c.highest.clone()).collect();
        assert_eq!(hw, vec![Weight(vec![1, 1]), Weight(vec![0, 0])]);
    }

    #[test]
    fn sl2_unit_and_evaluation() {
        let a = alg("A1");
        let x = a.basis_coef(&Weight(vec![1]), 1, 0);
        assert_eq!(a.multiply(&a.one(), &x).unwrap(), x);
        assert_eq!(a.multiply(&x, &a.one()).unwrap(), x);
        // c_{xi^1, e_0}(F) = <xi^1, F b> = 1
        let f = UqElement::f(1, 0);
        assert_eq!(a.evaluate(&x, &f).unwrap(), RatQ::one());
    }
}
