//! Lusztig braid automorphisms T_i and T_i^-1 and root vectors.
//!
//! Generator table (r = -c_ij, divided powers `X^(n) = X^n / [n]_{q_i}!`):
//!
//! | x     | T_i(x)                                             | T_i^-1(x)                                          |
//! |-------|----------------------------------------------------|----------------------------------------------------|
//! | E_i   | -F_i K_i                                           | -K_i^-1 F_i                                        |
//! | F_i   | -K_i^-1 E_i                                        | -E_i K_i                                           |
//! | E_j   | sum_s (-1)^s q_i^-s E_i^(r-s) E_j E_i^(s)          | sum_s (-1)^s q_i^-s E_i^(s) E_j E_i^(r-s)          |
//! | F_j   | sum_s (-1)^s q_i^s F_i^(s) F_j F_i^(r-s)           | sum_s (-1)^s q_i^s F_i^(r-s) F_j F_i^(s)           |
//! | K_mu  | K_{s_i mu}                                         | K_{s_i mu}                                         |

use std::sync::Arc;

use super::{Uq, UqElement};
use crate::error::Result;
use crate::qscalar::{qd_pow, qfact, RatQ};
use crate::weyl::check_reduced;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Gen {
    E(usize),
    F(usize),
}

impl Uq {
    fn braid_generator(&self, i: usize, inverse: bool, g: Gen) -> Arc<UqElement> {
        if let Some(x) = self.braid.read().get(&(i, inverse, g)) {
            return x.clone();
        }
        let r = self.rank();
        let di = self.cartan().d(i);
        let zk = vec![0; r];
        let minus = RatQ::from_int(-1);
        let val = match g {
            Gen::E(j) if j == i => {
                let (a, b) = if inverse {
                    (UqElement::k_i(r, i, -1), UqElement::f(r, i))
                } else {
                    (UqElement::f(r, i), UqElement::k_i(r, i, 1))
                };
                self.multiply(&a, &b).scale(&minus)
            }
            Gen::F(j) if j == i => {
                let (a, b) = if inverse {
                    (UqElement::e(r, i), UqElement::k_i(r, i, 1))
                } else {
                    (UqElement::k_i(r, i, -1), UqElement::e(r, i))
                };
                self.multiply(&a, &b).scale(&minus)
            }
            Gen::E(j) | Gen::F(j) => {
                let is_e = matches!(g, Gen::E(_));
                let n = -self.cartan().c(i, j);
                let mut out = UqElement::zero();
                for s in 0..=n {
                    let sign = if s % 2 == 0 { 1 } else { -1 };
                    let qexp = if is_e { -s } else { s };
                    // (left exponent, right exponent) around the middle letter
                    let (lft, rgt) = match (is_e, inverse) {
                        (true, false) => (n - s, s),
                        (true, true) => (s, n - s),
                        (false, false) => (s, n - s),
                        (false, true) => (n - s, s),
                    };
                    let denom = &qfact(lft, di).unwrap() * &qfact(rgt, di).unwrap();
                    let c = &(&RatQ::from_int(sign) * &qd_pow(di, qexp)) / &denom;
                    let mut w = vec![i; lft as usize];
                    w.push(j);
                    w.extend(std::iter::repeat(i).take(rgt as usize));
                    let t = if is_e { self.term(&[], &zk, &w, &c) } else { self.term(&w, &zk, &[], &c) };
                    out = out.add(&t);
                }
                out
            }
        };
        self.braid.write().entry((i, inverse, g)).or_insert_with(|| Arc::new(val)).clone()
    }

    /// `T_i` (or `T_i^-1` when `inverse`) applied to an arbitrary element.
    pub fn braid_t(&self, i: usize, inverse: bool, x: &UqElement) -> UqElement {
        let r = self.rank();
        let mut out = UqElement::zero();
        for (m, c) in x.terms() {
            let mut acc = UqElement::one(r);
            for &j in &m.fword {
                acc = self.multiply(&acc, &self.braid_generator(i, inverse, Gen::F(j)));
            }
            // K_kappa -> K_{s_i kappa}
            let pair: i64 = (0..r).map(|j| self.cartan().c(i, j) * m.kvec[j]).sum();
            let mut kv = m.kvec.clone();
            kv[i] -= pair;
            acc = self.multiply(&acc, &UqElement::k(r, kv));
            for &j in &m.eword {
                acc = self.multiply(&acc, &self.braid_generator(i, inverse, Gen::E(j)));
            }
            out = out.add(&acc.scale(c));
        }
        out
    }

    /// `T_{i_1} ... T_{i_{k-1}} (F_{i_k})` (or with E) for a reduced word; `k` is 1-based.
    pub fn root_vector(&self, word: &[usize], k: usize, negative: bool) -> Result<UqElement> {
        check_reduced(self.cartan(), word)?;
        if k == 0 || k > word.len() {
            return Err(crate::error::Error::Domain(format!(
                "root vector position {k} outside 1..={}",
                word.len()
            )));
        }
        let key = (word[..k].to_vec(), negative);
        if let Some(x) = self.roots.read().get(&key) {
            return Ok((**x).clone());
        }
        let r = self.rank();
        let last = word[k - 1];
        let mut x = if negative { UqElement::f(r, last) } else { UqElement::e(r, last) };
        for &i in word[..k - 1].iter().rev() {
            x = self.braid_t(i, false, &x);
        }
        let v = self.roots.write().entry(key).or_insert_with(|| Arc::new(x)).clone();
        Ok((*v).clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{CartanData, RootVec};

    fn generators(r: usize) -> Vec<UqElement> {
        let mut g = Vec::new();
        for i in 0..r {
            g.push(UqElement::e(r, i));
            g.push(UqElement::f(r, i));
            g.push(UqElement::k_i(r, i, 1));
            g.push(UqElement::k_i(r, i, -1));
        }
        g
    }

    #[test]
    fn inverse_law_on_generators() {
        for t in ["A1", "A2", "B2", "G2"] {
            let u = Uq::new(CartanData::preset(t).unwrap());
            let r = u.rank();
            for i in 0..r {
                for x in generators(r) {
                    let y = u.braid_t(i, false, &u.braid_t(i, true, &x));
                    assert_eq!(y, x, "{t} T_{i} T_{i}^-1");
                    let z = u.braid_t(i, true, &u.braid_t(i, false, &x));
                    assert_eq!(z, x, "{t} T_{i}^-1 T_{i}");
                }
            }
        }
    }

    #[test]
    fn braid_preserves_commutation_relations() {
        for t in ["A2", "B2"] {
            let u = Uq::new(CartanData::preset(t).unwrap());
            let r = u.rank();
            for i in 0..r {
                for inv in [false, true] {
                    for j in 0..r {
                        for k in 0..r {
                            let e = UqElement::e(r, j);
                            let f = UqElement::f(r, k);
                            let lhs = u.commutator(&u.braid_t(i, inv, &e), &u.braid_t(i, inv, &f));
                            let rhs = u.braid_t(i, inv, &u.commutator(&e, &f));
                            assert_eq!(lhs, rhs, "{t} i={i} inv={inv} j={j} k={k}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn braid_on_k() {
        let cd = CartanData::preset("A2").unwrap();
        let u = Uq::new(cd);
        let y = u.braid_t(0, false, &UqElement::k_i(2, 1, 1));
        assert_eq!(y, UqElement::k(2, vec![1, 1]));
    }

    #[test]
    fn a2_root_vector_support() {
        let u = Uq::new(CartanData::preset("A2").unwrap());
        let x = u.root_vector(&[0, 1], 2, true).unwrap();
        assert_eq!(x.degree(), Some(RootVec(vec![-1, -1])));
        assert!(x.is_in_uminus());
        assert_eq!(x.len(), 2);
        assert_eq!(u.root_vector(&[0, 1], 1, true).unwrap(), UqElement::f(2, 0));
        assert!(u.root_vector(&[0, 0], 1, true).is_err());
    }

    #[test]
    fn root_vectors_do_not_depend_on_braid_moves() {
        // A2: T_1 T_2 (F_1) = F_2 and likewise for B2's 4-letter braid
        let u = Uq::new(CartanData::preset("A2").unwrap());
        assert_eq!(u.root_vector(&[0, 1, 0], 3, true).unwrap(), UqElement::f(2, 1));
        let b = Uq::new(CartanData::preset("B2").unwrap());
        assert_eq!(b.root_vector(&[0, 1, 0, 1], 4, true).unwrap(), UqElement::f(2, 1));
        assert_eq!(b.root_vector(&[1, 0, 1, 0], 4, true).unwrap(), UqElement::f(2, 0));
    }
}
