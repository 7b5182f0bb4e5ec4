//! Quantum Schubert cell algebras U^-[w] with the PBW basis of a fixed reduced word,
//! the quasi-R-matrix evaluation phi_w, and the elements d_{u,lambda}.

mod ideal;
mod verify;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use parking_lot::RwLock;

use crate::error::{Error, Result};
use crate::hwmod::{pair, Depth, HWModule, ModVector, ModuleStore};
use crate::linalg::{Echelon, SparseVec};
use crate::qscalar::{qd_pow, qfact, RatQ};
use crate::rootdata::{CartanData, RootVec, Weight};
use crate::uq::{Uq, UqElement};
use crate::weyl::{bruhat_leq, check_reduced, depth_below, inversion_roots, WeylElt};

pub use ideal::IdealTruncation;
pub use crate::verdict::Verdict;
pub use verify::{
    Disjointness, FundGeneration, FundPair, NormalityOutcome, OreSet, PosetEntry, PosetReport,
    SeparationReport, SeparationWitness, DELEGATED,
};

/// Exponents `(m_1, ..., m_l)` of `F_{beta_l}^{m_l} ... F_{beta_1}^{m_1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PbwMonomial(pub Vec<u32>);

impl PbwMonomial {
    pub fn degree(&self, roots: &[RootVec]) -> RootVec {
        let r = roots.first().map_or(0, |b| b.0.len());
        self.0.iter().zip(roots).fold(RootVec::zero(r), |acc, (&m, b)| acc.add(&b.scale(m as i64)))
    }
}

impl fmt::Display for PbwMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &m)| m > 0)
            .map(|(k, &m)| if m == 1 { format!("Fb{}", k + 1) } else { format!("Fb{}^{}", k + 1, m) })
            .collect();
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

/// Element of U^-[w] in PBW coordinates for `word`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UwElement {
    pub word: Vec<usize>,
    terms: BTreeMap<PbwMonomial, RatQ>,
}

impl UwElement {
    pub fn zero(word: &[usize]) -> Self {
        UwElement { word: word.to_vec(), terms: BTreeMap::new() }
    }

    pub fn one(word: &[usize]) -> Self {
        let mut x = UwElement::zero(word);
        x.terms.insert(PbwMonomial(vec![0; word.len()]), RatQ::one());
        x
    }

    pub fn terms(&self) -> &BTreeMap<PbwMonomial, RatQ> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: PbwMonomial, c: RatQ) {
        crate::linalg::add_entry(&mut self.terms, m, c);
    }

    pub fn add(&self, o: &UwElement) -> UwElement {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &RatQ) -> UwElement {
        let mut out = UwElement::zero(&self.word);
        for (m, x) in &self.terms {
            out.add_term(m.clone(), c * x);
        }
        out
    }

    pub fn sub(&self, o: &UwElement) -> UwElement {
        self.add(&o.scale(&RatQ::from_int(-1)))
    }

    /// If `self = c * o` for a scalar c, returns c.
    pub fn ratio_to(&self, o: &UwElement) -> Option<RatQ> {
        if o.is_zero() {
            return None;
        }
        let (m, y) = o.terms.iter().next().unwrap();
        let x = self.terms.get(m)?;
        let c = x / y;
        (self == &o.scale(&c)).then_some(c)
    }
}

impl fmt::Display for UwElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mono = m.to_string();
                if c.is_one() {
                    mono
                } else if mono == "1" {
                    format!("({c})")
                } else {
                    format!("({c}) {mono}")
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// The F-word coordinates of an element of U^-.
pub fn fword_vector(x: &UqElement) -> SparseVec<Vec<usize>> {
    debug_assert!(x.is_in_uminus());
    x.terms().iter().map(|(m, c)| (m.fword.clone(), c.clone())).collect()
}

/// `prod_j (q_j^-1 - q_j)^{m_j} / (q_j^{m_j(m_j-1)/2} [m_j]_{q_j}!)` with `q_j = q^{d_{i_j}}`.
pub fn rw_coefficient(cd: &CartanData, word: &[usize], m: &PbwMonomial) -> RatQ {
    let mut acc = RatQ::one();
    for (&i, &mj) in word.iter().zip(&m.0) {
        if mj == 0 {
            continue;
        }
        let d = cd.d(i);
        let mj = mj as i64;
        let base = &qd_pow(d, -1) - &qd_pow(d, 1);
        let num = base.pow(mj).expect("nonnegative power");
        let den = &qd_pow(d, mj * (mj - 1) / 2) * &qfact(mj, d).expect("nonnegative");
        acc = &acc * &(&num / &den);
    }
    acc
}

/// All exponent tuples with `sum m_j beta_j = nu`.
pub fn pbw_exponents(roots: &[RootVec], nu: &RootVec) -> Vec<PbwMonomial> {
    fn rec(roots: &[RootVec], k: usize, rem: &RootVec, cur: &mut Vec<u32>, out: &mut Vec<PbwMonomial>) {
        if k == roots.len() {
            if rem.is_zero() {
                out.push(PbwMonomial(cur.clone()));
            }
            return;
        }
        let mut m = 0u32;
        let mut left = rem.clone();
        loop {
            cur.push(m);
            rec(roots, k + 1, &left, cur, out);
            cur.pop();
            left = left.sub(&roots[k]);
            if !left.is_nonneg() {
                break;
            }
            m += 1;
        }
    }
    let mut out = Vec::new();
    if nu.is_nonneg() {
        rec(roots, 0, nu, &mut Vec::new(), &mut out);
    }
    out.sort();
    out
}

/// U^-[w] for a fixed reduced word, sharing the U_q(g) engine and module store.
pub struct SchubertCell {
    cd: CartanData,
    uq: Arc<Uq>,
    store: Arc<ModuleStore>,
    word: Vec<usize>,
    w: WeylElt,
    roots: Vec<RootVec>,
    fvecs: Vec<UqElement>,
    tau_e: Vec<UqElement>,
    pbw_cache: RwLock<HashMap<PbwMonomial, Arc<UqElement>>>,
    solve_cache: RwLock<HashMap<RootVec, Arc<(Vec<PbwMonomial>, Echelon<Vec<usize>>)>>>,
}

impl SchubertCell {
    pub fn new(uq: Arc<Uq>, store: Arc<ModuleStore>, word: &[usize]) -> Result<Self> {
        let cd = uq.cartan().clone();
        check_reduced(&cd, word)?;
        let roots = inversion_roots(&cd, word)?;
        let mut fvecs = Vec::new();
        let mut tau_e = Vec::new();
        for k in 1..=word.len() {
            fvecs.push(uq.root_vector(word, k, true)?);
            tau_e.push(uq.tau(&uq.root_vector(word, k, false)?));
        }
        Ok(SchubertCell {
            w: WeylElt::reduce(&cd, word)?,
            cd,
            uq,
            store,
            word: word.to_vec(),
            roots,
            fvecs,
            tau_e,
            pbw_cache: RwLock::new(HashMap::new()),
            solve_cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn cartan(&self) -> &CartanData {
        &self.cd
    }

    pub fn uq(&self) -> &Arc<Uq> {
        &self.uq
    }

    pub fn store(&self) -> &Arc<ModuleStore> {
        &self.store
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn w(&self) -> &WeylElt {
        &self.w
    }

    pub fn roots(&self) -> &[RootVec] {
        &self.roots
    }

    /// `F_{beta_k}` for 1-based k.
    pub fn root_vector(&self, k: usize) -> &UqElement {
        &self.fvecs[k - 1]
    }

    pub fn generator(&self, k: usize) -> UwElement {
        let mut e = vec![0u32; self.word.len()];
        e[k - 1] = 1;
        let mut x = UwElement::zero(&self.word);
        x.add_term(PbwMonomial(e), RatQ::one());
        x
    }

    pub fn pbw_basis(&self, nu: &RootVec) -> Vec<PbwMonomial> {
        pbw_exponents(&self.roots, nu)
    }

    pub fn rw_coefficient(&self, m: &PbwMonomial) -> RatQ {
        rw_coefficient(&self.cd, &self.word, m)
    }

    /// `F_{beta_l}^{m_l} ... F_{beta_1}^{m_1}` in U_q(g) normal form.
    pub fn pbw_to_uq(&self, m: &PbwMonomial) -> Arc<UqElement> {
        if let Some(x) = self.pbw_cache.read().get(m) {
            return x.clone();
        }
        let mut acc = UqElement::one(self.cd.rank());
        for k in (0..self.word.len()).rev() {
            for _ in 0..m.0[k] {
                acc = self.uq.multiply(&acc, &self.fvecs[k]);
            }
        }
        self.pbw_cache.write().entry(m.clone()).or_insert_with(|| Arc::new(acc)).clone()
    }

    pub fn to_uq(&self, x: &UwElement) -> UqElement {
        let mut out = UqElement::zero();
        for (m, c) in x.terms() {
            out = out.add(&self.pbw_to_uq(m).scale(c));
        }
        out
    }

    fn solver(&self, nu: &RootVec) -> Arc<(Vec<PbwMonomial>, Echelon<Vec<usize>>)> {
        if let Some(s) = self.solve_cache.read().get(nu) {
            return s.clone();
        }
        let basis = self.pbw_basis(nu);
        let mut ech = Echelon::tracking();
        for m in &basis {
            ech.insert(&fword_vector(&self.pbw_to_uq(m)));
        }
        let v = Arc::new((basis, ech));
        self.solve_cache.write().entry(nu.clone()).or_insert(v).clone()
    }

    /// Rank of the PBW monomials of degree `-nu` inside U^- (equals their count by the PBW theorem).
    pub fn pbw_rank(&self, nu: &RootVec) -> usize {
        self.solver(nu).1.dim()
    }

    /// The span of the PBW monomials of degree `-nu` in F-word coordinates.
    pub fn pbw_span(&self, nu: &RootVec) -> Echelon<Vec<usize>> {
        let mut e = Echelon::new();
        for m in self.pbw_basis(nu) {
            e.insert(&fword_vector(&self.pbw_to_uq(&m)));
        }
        e
    }

    /// Expresses an element of U^- in PBW coordinates; fails if it is outside U^-[w].
    pub fn from_uq(&self, x: &UqElement) -> Result<UwElement> {
        if !x.is_in_uminus() {
            return Err(Error::NotInSpan("element has E or K parts".into()));
        }
        let r = self.cd.rank();
        let mut by_degree: BTreeMap<RootVec, SparseVec<Vec<usize>>> = BTreeMap::new();
        for (m, c) in x.terms() {
            let d = crate::uq::word_degree(&m.fword, r);
            by_degree.entry(d).or_default().insert(m.fword.clone(), c.clone());
        }
        let mut out = UwElement::zero(&self.word);
        for (nu, v) in by_degree {
            let s = self.solver(&nu);
            let comb = s.1.express(&v).ok_or_else(|| {
                Error::NotInSpan(format!("degree -{nu} component is not in U^-[w]"))
            })?;
            for (idx, c) in comb {
                out.add_term(s.0[idx].clone(), c);
            }
        }
        Ok(out)
    }

    pub fn multiply(&self, a: &UwElement, b: &UwElement) -> Result<UwElement> {
        let p = self.uq.multiply(&self.to_uq(a), &self.to_uq(b));
        self.from_uq(&p)
    }

    /// L(lambda) deep enough to contain the weight `w lambda`.
    pub fn module(&self, lambda: &Weight) -> Result<Arc<HWModule>> {
        let h = depth_below(&self.cd, &self.w, lambda).height();
        self.store.get(lambda, Depth::Height(h))
    }

    /// `phi_w` of the matrix coefficient of a homogeneous row `xi` on L(lambda):
    /// `sum_m rw(m) <xi, tau(E_{b_l}^{m_l} ... E_{b_1}^{m_1}) b_{w lambda}> F_{b_l}^{m_l} ... F_{b_1}^{m_1}`.
    pub fn phi_w_image(&self, m: &HWModule, xi: &ModVector) -> Result<UwElement> {
        let mut out = UwElement::zero(&self.word);
        let bw = m.extremal_vector(&self.w)?;
        let top = depth_below(&self.cd, &self.w, m.highest());
        for (d, row) in &xi.parts {
            let nu = top.sub(d);
            if !nu.is_nonneg() {
                continue;
            }
            let single = ModVector::single(d.clone(), row.clone());
            for mono in self.pbw_basis(&nu) {
                let v = self.tau_chain(m, &mono, &bw)?;
                let p = pair(&single, &v);
                if !p.is_zero() {
                    let c = &self.rw_coefficient(&mono) * &p;
                    out.add_term(mono, c);
                }
            }
        }
        Ok(out)
    }

    /// `d_{u,lambda} = phi_w(Delta_{u lambda, lambda} ...)`, i.e. phi_w of `xi_{u lambda}`.
    pub fn d_element(&self, u: &WeylElt, lambda: &Weight) -> Result<UwElement> {
        if !bruhat_leq(&self.cd, u, &self.w) {
            return Err(Error::NotIncident(format!("{u} is not below {}", self.w)));
        }
        if !lambda.is_dominant() {
            return Err(Error::NotDominant(lambda.clone()));
        }
        let m = self.module(lambda)?;
        let xi = m.dual_functional(u)?;
        self.phi_w_image(&m, &xi)
    }

    /// `-deg` of `d_{u,lambda}` as an element of Q^+: `u lambda - w lambda`.
    pub fn d_depth(&self, u: &WeylElt, lambda: &Weight) -> RootVec {
        depth_below(&self.cd, &self.w, lambda).sub(&depth_below(&self.cd, u, lambda))
    }

    /// All `nu` in Q^+ with height at most `h`, by height then lexicographically.
    pub fn degrees_up_to(&self, h: i64) -> Vec<RootVec> {
        let r = self.cd.rank();
        let mut out = Vec::new();
        let mut cur = vec![0i64; r];
        fn rec(i: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<RootVec>) {
            if i == cur.len() {
                out.push(RootVec(cur.clone()));
                return;
            }
            for c in 0..=left {
                cur[i] = c;
                rec(i + 1, left - c, cur, out);
            }
            cur[i] = 0;
        }
        rec(0, h, &mut cur, &mut out);
        out.sort_by(|a, b| a.height().cmp(&b.height()).then_with(|| a.cmp(b)));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cache::DiskCache;

    fn cell(t: &str, word: &[usize]) -> SchubertCell {
        let cd = CartanData::preset(t).unwrap();
        let uq = Arc::new(Uq::new(cd.clone()));
        let store = Arc::new(ModuleStore::new(cd, DiskCache::disabled()));
        SchubertCell::new(uq, store, word).unwrap()
    }

    #[test]
    fn pbw_enumeration() {
        let c = cell("A2", &[0, 1]);
        assert_eq!(c.pbw_basis(&RootVec(vec![2, 1])), vec![PbwMonomial(vec![1, 1])]);
        assert_eq!(c.pbw_basis(&RootVec(vec![0, 0])), vec![PbwMonomial(vec![0, 0])]);
        let c3 = cell("A2", &[0, 1, 0]);
        assert_eq!(
            c3.pbw_basis(&RootVec(vec![1, 1])),
            vec![PbwMonomial(vec![0, 1, 0]), PbwMonomial(vec![1, 0, 1])]
        );
    }

    #[test]
    fn rw_coefficients() {
        let cd = CartanData::preset("A1").unwrap();
        assert_eq!(rw_coefficient(&cd, &[0], &PbwMonomial(vec![0])), RatQ::one());
        let x: RatQ = "q^-1 - q".parse().unwrap();
        assert_eq!(rw_coefficient(&cd, &[0], &PbwMonomial(vec![1])), x);
        let two = &(&x * &x) / &(&RatQ::q() * &crate::qint(2, 1));
        assert_eq!(rw_coefficient(&cd, &[0], &PbwMonomial(vec![2])), two);
    }

    #[test]
    fn sl2_d_elements() {
        let c = cell("A1", &[0]);
        let cd = c.cartan().clone();
        let e = WeylElt::identity(&cd);
        let s1 = WeylElt::simple(&cd, 0).unwrap();
        let lam = Weight(vec![1]);
        assert_eq!(c.d_element(&s1, &lam).unwrap(), UwElement::one(&[0]));
        let f = c.generator(1).scale(&"q^-1 - q".parse().unwrap());
        assert_eq!(c.d_element(&e, &lam).unwrap(), f);
    }

    #[test]
    fn sl2_multiplication() {
        let c = cell("A1", &[0]);
        let f = c.generator(1);
        let f2 = c.multiply(&f, &f).unwrap();
        let mut expect = UwElement::zero(&[0]);
        expect.add_term(PbwMonomial(vec![2]), RatQ::one());
        assert_eq!(f2, expect);
        assert_eq!(c.multiply(&UwElement::one(&[0]), &f).unwrap(), f);
    }
}
