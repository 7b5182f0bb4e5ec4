//! The quantized enveloping algebra U_q(g) in triangular normal form F * K * E.
//!
//! Conventions: `K_i E_j K_i^-1 = q^{(a_i,a_j)} E_j`, `K_i F_j K_i^-1 = q^{-(a_i,a_j)} F_j`,
//! `E_i F_j - F_j E_i = delta_ij (K_i - K_i^-1)/(q_i - q_i^-1)` with `q_i = q^{d_i}`,
//! plus the quantum Serre relations in the E's and in the F's.

mod braid;
mod engine;
pub mod words;

use std::collections::BTreeMap;
use std::fmt;

use crate::linalg::add_entry;
use crate::qscalar::RatQ;
use crate::rootdata::RootVec;

pub use engine::Uq;
pub use words::{word_degree, DegreeBasis};

/// A basis monomial `F_{fword} K^{kvec} E_{eword}` with both words normal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalMonomial {
    pub fword: Vec<usize>,
    pub kvec: Vec<i64>,
    pub eword: Vec<usize>,
}

impl NormalMonomial {
    pub fn one(rank: usize) -> Self {
        NormalMonomial { fword: Vec::new(), kvec: vec![0; rank], eword: Vec::new() }
    }

    /// `deg = sum_{eword} a_i - sum_{fword} a_i`.
    pub fn degree(&self) -> RootVec {
        let r = self.kvec.len();
        word_degree(&self.eword, r).sub(&word_degree(&self.fword, r))
    }

    fn write_into(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for i in &self.fword {
            parts.push(format!("F{}", i + 1));
        }
        for (i, &k) in self.kvec.iter().enumerate() {
            match k {
                0 => {}
                1 => parts.push(format!("K{}", i + 1)),
                _ => parts.push(format!("K{}^{}", i + 1, k)),
            }
        }
        for i in &self.eword {
            parts.push(format!("E{}", i + 1));
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

/// Element of U_q(g): a finite combination of normal monomials.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UqElement {
    terms: BTreeMap<NormalMonomial, RatQ>,
}

impl UqElement {
    pub fn zero() -> Self {
        UqElement::default()
    }

    pub fn one(rank: usize) -> Self {
        UqElement::monomial(NormalMonomial::one(rank), RatQ::one())
    }

    pub fn scalar(rank: usize, c: RatQ) -> Self {
        UqElement::monomial(NormalMonomial::one(rank), c)
    }

    /// Caller guarantees the words in `m` are normal.
    pub fn monomial(m: NormalMonomial, c: RatQ) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        UqElement { terms }
    }

    pub fn k(rank: usize, kvec: Vec<i64>) -> Self {
        assert_eq!(kvec.len(), rank);
        UqElement::monomial(
            NormalMonomial { fword: Vec::new(), kvec, eword: Vec::new() },
            RatQ::one(),
        )
    }

    pub fn k_i(rank: usize, i: usize, exp: i64) -> Self {
        let mut kvec = vec![0; rank];
        kvec[i] = exp;
        UqElement::k(rank, kvec)
    }

    pub fn e(rank: usize, i: usize) -> Self {
        UqElement::monomial(
            NormalMonomial { fword: Vec::new(), kvec: vec![0; rank], eword: vec![i] },
            RatQ::one(),
        )
    }

    pub fn f(rank: usize, i: usize) -> Self {
        UqElement::monomial(
            NormalMonomial { fword: vec![i], kvec: vec![0; rank], eword: Vec::new() },
            RatQ::one(),
        )
    }

    pub fn terms(&self) -> &BTreeMap<NormalMonomial, RatQ> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<NormalMonomial, RatQ> {
        self.terms
    }

    pub fn from_terms(terms: BTreeMap<NormalMonomial, RatQ>) -> Self {
        UqElement { terms: terms.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: NormalMonomial, c: RatQ) {
        add_entry(&mut self.terms, m, c);
    }

    pub fn add(&self, o: &UqElement) -> UqElement {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &UqElement) -> UqElement {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> UqElement {
        self.scale(&RatQ::from_int(-1))
    }

    pub fn scale(&self, c: &RatQ) -> UqElement {
        if c.is_zero() {
            return UqElement::zero();
        }
        UqElement { terms: self.terms.iter().map(|(m, x)| (m.clone(), c * x)).collect() }
    }

    /// The common Q-degree, if the element is nonzero and homogeneous.
    pub fn degree(&self) -> Option<RootVec> {
        let mut it = self.terms.keys().map(|m| m.degree());
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    /// True when every term is a pure F-word (no K, no E).
    pub fn is_in_uminus(&self) -> bool {
        self.terms.keys().all(|m| m.eword.is_empty() && m.kvec.iter().all(|&k| k == 0))
    }

    pub fn is_in_uplus(&self) -> bool {
        self.terms.keys().all(|m| m.fword.is_empty() && m.kvec.iter().all(|&k| k == 0))
    }

    /// Coefficient of the pure F-word `w`.
    pub fn coeff_of_fword(&self, w: &[usize]) -> RatQ {
        self.terms
            .iter()
            .find(|(m, _)| m.fword == w && m.eword.is_empty() && m.kvec.iter().all(|&k| k == 0))
            .map(|(_, c)| c.clone())
            .unwrap_or_else(RatQ::zero)
    }
}

impl fmt::Display for UqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if !c.is_one() {
                write!(f, "({c}) ")?;
            }
            m.write_into(f)?;
        }
        Ok(())
    }
}
