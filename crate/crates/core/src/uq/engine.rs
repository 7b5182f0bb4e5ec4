use std::collections::HashMap;
use std::sync::Arc;

use parking_lot::RwLock;

use super::words::{word_degree, DegreeBasis};
use super::{NormalMonomial, UqElement};
use crate::cache::{key_of, DiskCache};
use crate::qscalar::{qd_pow, RatQ};
use crate::rootdata::{CartanData, RootVec};

type StraightKey = (Vec<usize>, Vec<usize>);

/// Normal-form engine for U_q(g) attached to fixed Cartan data.
///
/// All caches are insert-once: concurrent callers may compute the same entry,
/// but only the first stored value is ever returned.
pub struct Uq {
    cd: CartanData,
    disk: DiskCache,
    bases: RwLock<HashMap<RootVec, Arc<DegreeBasis>>>,
    straight: RwLock<HashMap<StraightKey, Arc<UqElement>>>,
    pub(super) braid: RwLock<HashMap<(usize, bool, super::braid::Gen), Arc<UqElement>>>,
    pub(super) roots: RwLock<HashMap<(Vec<usize>, bool), Arc<UqElement>>>,
}

fn insert_once<K: std::hash::Hash + Eq, V: Clone>(map: &RwLock<HashMap<K, V>>, k: K, v: V) -> V {
    map.write().entry(k).or_insert(v).clone()
}

impl Uq {
    pub fn new(cd: CartanData) -> Self {
        Uq::with_cache(cd, DiskCache::disabled())
    }

    pub fn with_cache(cd: CartanData, disk: DiskCache) -> Self {
        Uq {
            cd,
            disk,
            bases: RwLock::new(HashMap::new()),
            straight: RwLock::new(HashMap::new()),
            braid: RwLock::new(HashMap::new()),
            roots: RwLock::new(HashMap::new()),
        }
    }

    pub fn cartan(&self) -> &CartanData {
        &self.cd
    }

    pub fn rank(&self) -> usize {
        self.cd.rank()
    }

    /// Normal words of U^+ in degree `nu` (the same words index U^- in degree `-nu`).
    pub fn basis(&self, nu: &RootVec) -> Arc<DegreeBasis> {
        if let Some(b) = self.bases.read().get(nu) {
            return b.clone();
        }
        let ns = format!("uq-{}", self.cd.content_hash());
        let key = key_of(&nu.0);
        let b = match self.disk.load::<DegreeBasis>(&ns, &key) {
            Some(mut b) => {
                b.reindex();
                b
            }
            None => {
                let b = DegreeBasis::compute(&self.cd, nu);
                // a failed cache write only costs recomputation later
                let _ = self.disk.store(&ns, &key, &b);
                b
            }
        };
        insert_once(&self.bases, nu.clone(), Arc::new(b))
    }

    pub fn reduce_word(&self, w: &[usize]) -> Vec<(Vec<usize>, RatQ)> {
        if w.len() < 2 {
            return vec![(w.to_vec(), RatQ::one())];
        }
        self.basis(&word_degree(w, self.rank())).reduce(w)
    }

    /// `(kappa, beta)` where `kappa = sum k_i a_i`.
    pub fn k_form(&self, kvec: &[i64], beta: &RootVec) -> i64 {
        let r = self.rank();
        let mut s = 0;
        for i in 0..r {
            if kvec[i] != 0 {
                for j in 0..r {
                    s += kvec[i] * beta.0[j] * self.cd.simple_form(i, j);
                }
            }
        }
        s
    }

    /// `c * F_fword K^kvec E_eword` with arbitrary words, normalized.
    pub fn term(&self, fword: &[usize], kvec: &[i64], eword: &[usize], c: &RatQ) -> UqElement {
        let mut out = UqElement::zero();
        if c.is_zero() {
            return out;
        }
        let fr = self.reduce_word(fword);
        let er = self.reduce_word(eword);
        for (fw, fc) in &fr {
            let cf = c * fc;
            for (ew, ec) in &er {
                out.add_term(
                    NormalMonomial { fword: fw.clone(), kvec: kvec.to_vec(), eword: ew.clone() },
                    &cf * ec,
                );
            }
        }
        out
    }

    pub fn fword(&self, w: &[usize]) -> UqElement {
        self.term(w, &vec![0; self.rank()], &[], &RatQ::one())
    }

    pub fn eword(&self, w: &[usize]) -> UqElement {
        self.term(&[], &vec![0; self.rank()], w, &RatQ::one())
    }

    /// Normal form of `E_e F_f`.
    fn straighten(&self, e: &[usize], f: &[usize]) -> Arc<UqElement> {
        let key = (e.to_vec(), f.to_vec());
        if let Some(x) = self.straight.read().get(&key) {
            return x.clone();
        }
        let r = self.rank();
        let zero_k = vec![0; r];
        let res = if e.is_empty() || f.is_empty() {
            self.term(f, &zero_k, e, &RatQ::one())
        } else {
            let (&i, e0) = e.split_last().unwrap();
            let di = self.cd.d(i);
            let mut out = UqElement::zero();
            // (E_e0 F_f) E_i
            for (m, c) in self.straighten(e0, f).terms() {
                let mut ew = m.eword.clone();
                ew.push(i);
                let t = self.term(&m.fword, &m.kvec, &ew, c);
                out = out.add(&t);
            }
            // commutators [E_i, F_{f_k}] moved to the right of F_{f>k}
            let qq = (&qd_pow(di, 1) - &qd_pow(di, -1)).inv().expect("q_i - q_i^-1 is nonzero");
            let alpha_i = RootVec::simple(r, i);
            for k in 0..f.len() {
                if f[k] != i {
                    continue;
                }
                let mut rest = f[..k].to_vec();
                rest.extend(&f[k + 1..]);
                let after = word_degree(&f[k + 1..], r);
                let inner = self.straighten(e0, &rest);
                for s in [1i64, -1] {
                    let base = &RatQ::from_int(s) * &qq;
                    let base = &base * &RatQ::q_pow(-s * self.cd.form_unchecked(&alpha_i, &after));
                    for (m, c) in inner.terms() {
                        let edeg = word_degree(&m.eword, r);
                        let twist = RatQ::q_pow(-s * self.cd.form_unchecked(&alpha_i, &edeg));
                        let mut kv = m.kvec.clone();
                        kv[i] += s;
                        out.add_term(
                            NormalMonomial { fword: m.fword.clone(), kvec: kv, eword: m.eword.clone() },
                            &(&base * &twist) * c,
                        );
                    }
                }
            }
            out
        };
        insert_once(&self.straight, key, Arc::new(res))
    }

    fn multiply_monomials(&self, a: &NormalMonomial, b: &NormalMonomial, c: &RatQ) -> UqElement {
        let r = self.rank();
        let mut out = UqElement::zero();
        let mid = self.straighten(&a.eword, &b.fword);
        for (m, cm) in mid.terms() {
            // F_a K_a (F_m K_m E_m) K_b E_b
            let fdeg = word_degree(&m.fword, r);
            let edeg = word_degree(&m.eword, r);
            let tw = -self.k_form(&a.kvec, &fdeg) - self.k_form(&b.kvec, &edeg);
            let coef = &(c * cm) * &RatQ::q_pow(tw);
            let mut fw = a.fword.clone();
            fw.extend(&m.fword);
            let mut ew = m.eword.clone();
            ew.extend(&b.eword);
            let kv: Vec<i64> = (0..r).map(|t| a.kvec[t] + m.kvec[t] + b.kvec[t]).collect();
            let t = self.term(&fw, &kv, &ew, &coef);
            for (mm, cc) in t.into_terms() {
                out.add_term(mm, cc);
            }
        }
        out
    }

    pub fn multiply(&self, a: &UqElement, b: &UqElement) -> UqElement {
        let mut out = UqElement::zero();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                let t = self.multiply_monomials(ma, mb, &(ca * cb));
                for (m, c) in t.into_terms() {
                    out.add_term(m, c);
                }
            }
        }
        out
    }

    pub fn product(&self, xs: &[UqElement]) -> UqElement {
        let mut acc = UqElement::one(self.rank());
        for x in xs {
            acc = self.multiply(&acc, x);
        }
        acc
    }

    pub fn pow(&self, x: &UqElement, n: u32) -> UqElement {
        let mut acc = UqElement::one(self.rank());
        for _ in 0..n {
            acc = self.multiply(&acc, x);
        }
        acc
    }

    pub fn commutator(&self, a: &UqElement, b: &UqElement) -> UqElement {
        self.multiply(a, b).sub(&self.multiply(b, a))
    }

    /// The anti-automorphism fixing E_i, F_i and inverting K_i.
    pub fn tau(&self, x: &UqElement) -> UqElement {
        let r = self.rank();
        let mut out = UqElement::zero();
        for (m, c) in x.terms() {
            let ew: Vec<usize> = m.eword.iter().rev().copied().collect();
            let fw: Vec<usize> = m.fword.iter().rev().copied().collect();
            let kinv: Vec<i64> = m.kvec.iter().map(|k| -k).collect();
            let t = self.product(&[self.eword(&ew), UqElement::k(r, kinv), self.fword(&fw)]);
            out = out.add(&t.scale(c));
        }
        out
    }
}
