//! Symmetrizable Cartan data, the weight lattice P and the root lattice Q.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Integral weight in fundamental-weight coordinates `<lambda, alpha_i^vee>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight(pub Vec<i64>);

/// Element of the root lattice in simple-root coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootVec(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        Weight(v)
    }

    pub fn rho(rank: usize) -> Self {
        Weight(vec![1; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn is_strictly_dominant(&self) -> bool {
        self.0.iter().all(|&c| c > 0)
    }

    pub fn add(&self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|a| a * k).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl RootVec {
    pub fn zero(rank: usize) -> Self {
        RootVec(vec![0; rank])
    }

    pub fn simple(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        RootVec(v)
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, o: &RootVec) -> RootVec {
        RootVec(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &RootVec) -> RootVec {
        RootVec(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> RootVec {
        RootVec(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64) -> RootVec {
        RootVec(self.0.iter().map(|a| a * k).collect())
    }
}

impl fmt::Display for RootVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// A symmetrizable generalized Cartan matrix `c_ij` with symmetrizers `d_i`,
/// normalized so that `<alpha_i, alpha_j> = d_i c_ij` and `c_ij = <alpha_j, alpha_i^vee>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CartanData {
    cartan: Vec<Vec<i64>>,
    sym: Vec<u32>,
    label: Option<String>,
}

impl CartanData {
    pub fn new(cartan: Vec<Vec<i64>>, sym: Vec<u32>) -> Result<Self> {
        let r = cartan.len();
        if r == 0 {
            return Err(Error::InvalidCartan("rank must be positive".into()));
        }
        if sym.len() != r {
            return Err(Error::RankMismatch { expected: r, got: sym.len() });
        }
        for (i, row) in cartan.iter().enumerate() {
            if row.len() != r {
                return Err(Error::InvalidCartan(format!("row {} has length {}", i + 1, row.len())));
            }
            if row[i] != 2 {
                return Err(Error::InvalidCartan(format!("diagonal entry c_{0}{0} must be 2", i + 1)));
            }
        }
        if sym.iter().any(|&d| d == 0) {
            return Err(Error::InvalidCartan("symmetrizers must be positive".into()));
        }
        for i in 0..r {
            for j in 0..r {
                if i == j {
                    continue;
                }
                if cartan[i][j] > 0 {
                    return Err(Error::InvalidCartan(format!(
                        "off-diagonal entry c_{}{} must be non-positive",
                        i + 1,
                        j + 1
                    )));
                }
                if (cartan[i][j] == 0) != (cartan[j][i] == 0) {
                    return Err(Error::InvalidCartan(format!(
                        "c_{0}{1} and c_{1}{0} must vanish together",
                        i + 1,
                        j + 1
                    )));
                }
                if sym[i] as i64 * cartan[i][j] != sym[j] as i64 * cartan[j][i] {
                    return Err(Error::InvalidCartan(format!(
                        "not symmetrizable by d = {:?}: d_{} c_{}{} != d_{} c_{}{}",
                        sym,
                        i + 1,
                        i + 1,
                        j + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        Ok(CartanData { cartan, sym, label: None })
    }

    /// Built-in finite types: A1, A2, A3, B2 (= C2 up to relabeling), C2, G2.
    pub fn preset(name: &str) -> Result<Self> {
        let (c, d): (Vec<Vec<i64>>, Vec<u32>) = match name.to_ascii_uppercase().as_str() {
            "A1" => (vec![vec![2]], vec![1]),
            "A2" => (vec![vec![2, -1], vec![-1, 2]], vec![1, 1]),
            "A3" => (vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]], vec![1, 1, 1]),
            // alpha_1 short, alpha_2 long
            "B2" => (vec![vec![2, -2], vec![-1, 2]], vec![1, 2]),
            // alpha_1 long, alpha_2 short
            "C2" => (vec![vec![2, -1], vec![-2, 2]], vec![2, 1]),
            // alpha_1 short
            "G2" => (vec![vec![2, -3], vec![-1, 2]], vec![1, 3]),
            other => return Err(Error::Config(format!("unknown Cartan type `{other}`"))),
        };
        let mut cd = CartanData::new(c, d)?;
        cd.label = Some(name.to_ascii_uppercase());
        Ok(cd)
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn label(&self) -> String {
        self.label.clone().unwrap_or_else(|| format!("cartan={:?};sym={:?}", self.cartan, self.sym))
    }

    pub fn c(&self, i: usize, j: usize) -> i64 {
        self.cartan[i][j]
    }

    pub fn d(&self, i: usize) -> u32 {
        self.sym[i]
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn symmetrizers(&self) -> &[u32] {
        &self.sym
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.rank() {
            return Err(Error::IndexOutOfRange { index: i + 1, rank: self.rank() });
        }
        Ok(())
    }

    fn check_rank(&self, n: usize) -> Result<()> {
        if n != self.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), got: n });
        }
        Ok(())
    }

    /// `<alpha_i, alpha_j> = d_i c_ij`.
    pub fn simple_form(&self, i: usize, j: usize) -> i64 {
        self.sym[i] as i64 * self.cartan[i][j]
    }

    /// Symmetric bilinear form on the root lattice.
    pub fn form(&self, a: &RootVec, b: &RootVec) -> Result<i64> {
        self.check_rank(a.0.len())?;
        self.check_rank(b.0.len())?;
        Ok(self.form_unchecked(a, b))
    }

    pub(crate) fn form_unchecked(&self, a: &RootVec, b: &RootVec) -> i64 {
        let r = self.rank();
        let mut s = 0;
        for i in 0..r {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..r {
                s += a.0[i] * b.0[j] * self.simple_form(i, j);
            }
        }
        s
    }

    /// `<lambda, alpha_i^vee>`.
    pub fn pairing(&self, lambda: &Weight, i: usize) -> Result<i64> {
        self.check_rank(lambda.0.len())?;
        self.check_index(i)?;
        Ok(lambda.0[i])
    }

    /// `<lambda, nu> = sum_j nu_j d_j <lambda, alpha_j^vee>` for lambda in P, nu in Q.
    pub fn mixed(&self, lambda: &Weight, nu: &RootVec) -> i64 {
        (0..self.rank()).map(|j| nu.0[j] * self.sym[j] as i64 * lambda.0[j]).sum()
    }

    /// Image of a root-lattice element in the weight lattice.
    pub fn weight_of_rootvec(&self, beta: &RootVec) -> Weight {
        let r = self.rank();
        Weight((0..r).map(|i| (0..r).map(|j| self.cartan[i][j] * beta.0[j]).sum()).collect())
    }

    /// Simple root alpha_i as a weight.
    pub fn alpha(&self, i: usize) -> Weight {
        self.weight_of_rootvec(&RootVec::simple(self.rank(), i))
    }

    /// Rational coordinates of a weight in the simple-root basis; `None` if the
    /// Cartan matrix is singular.
    pub fn weight_in_roots(&self, lambda: &Weight) -> Option<Vec<Ratio<i64>>> {
        let r = self.rank();
        let mut m: Vec<Vec<Ratio<i64>>> = (0..r)
            .map(|i| {
                let mut row: Vec<Ratio<i64>> =
                    (0..r).map(|j| Ratio::from_integer(self.cartan[i][j])).collect();
                row.push(Ratio::from_integer(lambda.0[i]));
                row
            })
            .collect();
        for c in 0..r {
            let p = (c..r).find(|&i| m[i][c] != Ratio::from_integer(0))?;
            m.swap(c, p);
            let inv = Ratio::from_integer(1) / m[c][c];
            for x in m[c].iter_mut() {
                *x *= inv;
            }
            for i in 0..r {
                if i != c && m[i][c] != Ratio::from_integer(0) {
                    let f = m[i][c];
                    for j in 0..=r {
                        let t = m[c][j];
                        m[i][j] -= f * t;
                    }
                }
            }
        }
        Some(m.into_iter().map(|row| row[r]).collect())
    }

    /// `<lambda, mu>` on the weight lattice (finite type or invertible Cartan matrix).
    pub fn weight_form(&self, lambda: &Weight, mu: &Weight) -> Result<Ratio<i64>> {
        let x = self
            .weight_in_roots(lambda)
            .ok_or_else(|| Error::Domain("weight form needs an invertible Cartan matrix".into()))?;
        Ok((0..self.rank())
            .map(|j| x[j] * Ratio::from_integer(self.sym[j] as i64 * mu.0[j]))
            .sum())
    }

    /// Positive definiteness of the symmetrized matrix, via leading principal minors.
    pub fn is_finite_type(&self) -> bool {
        let r = self.rank();
        let b: Vec<Vec<i128>> = (0..r)
            .map(|i| (0..r).map(|j| self.simple_form(i, j) as i128).collect())
            .collect();
        (1..=r).all(|k| bareiss_det(&b, k) > 0)
    }

    /// Positive roots, finite type only, in order of height then coordinates.
    pub fn positive_roots(&self) -> Result<Vec<RootVec>> {
        if !self.is_finite_type() {
            return Err(Error::InfiniteType);
        }
        let r = self.rank();
        let mut roots: Vec<RootVec> = (0..r).map(|i| RootVec::simple(r, i)).collect();
        let mut k = 0;
        while k < roots.len() {
            let beta = roots[k].clone();
            for i in 0..r {
                let refl = self.reflect_root(i, &beta);
                if refl.is_nonneg() && !refl.is_zero() && !roots.contains(&refl) {
                    roots.push(refl);
                }
            }
            k += 1;
        }
        roots.sort_by(|a, b| a.height().cmp(&b.height()).then_with(|| a.cmp(b)));
        Ok(roots)
    }

    /// `s_i(beta) = beta - <beta, alpha_i^vee> alpha_i`.
    pub fn reflect_root(&self, i: usize, beta: &RootVec) -> RootVec {
        let pair: i64 = (0..self.rank()).map(|j| self.cartan[i][j] * beta.0[j]).sum();
        let mut out = beta.clone();
        out.0[i] -= pair;
        out
    }

    /// `s_i(lambda) = lambda - <lambda, alpha_i^vee> alpha_i`.
    pub fn reflect_weight(&self, i: usize, lambda: &Weight) -> Weight {
        let n = lambda.0[i];
        lambda.sub(&self.alpha(i).scale(n))
    }

    /// Short content hash identifying the Cartan data in cache keys.
    pub fn content_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("cartan={:?};sym={:?}", self.cartan, self.sym).as_bytes());
        hex::encode(&h.finalize()[..8])
    }
}

fn bareiss_det(m: &[Vec<i128>], k: usize) -> i128 {
    let mut a: Vec<Vec<i128>> = (0..k).map(|i| m[i][..k].to_vec()).collect();
    let mut sign = 1;
    let mut prev = 1i128;
    for c in 0..k {
        if a[c][c] == 0 {
            let Some(p) = (c + 1..k).find(|&i| a[i][c] != 0) else {
                return 0;
            };
            a.swap(c, p);
            sign = -sign;
        }
        for i in c + 1..k {
            for j in c + 1..k {
                a[i][j] = (a[i][j] * a[c][c] - a[i][c] * a[c][j]) / prev;
            }
        }
        prev = a[c][c];
    }
    sign * a[k - 1][k - 1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn a2_form_and_pairings() {
        let a2 = CartanData::preset("A2").unwrap();
        let a1 = RootVec::simple(2, 0);
        let a2r = RootVec::simple(2, 1);
        assert_eq!(a2.form(&a1, &a2r).unwrap(), -1);
        assert_eq!(a2.form(&a1, &a1).unwrap(), 2);
        let rho = Weight::rho(2);
        for i in 0..2 {
            assert_eq!(a2.pairing(&rho, i).unwrap(), 1);
        }
        let w1 = Weight::fundamental(2, 0);
        assert_eq!(a2.mixed(&w1, &a1), 1);
        assert_eq!(a2.mixed(&w1, &a2r), 0);
        assert_eq!(a2.mixed(&Weight::zero(2), &RootVec(vec![3, 5])), 0);
    }

    #[test]
    fn rejects_bad_matrices() {
        assert!(matches!(
            CartanData::new(vec![vec![2, -2], vec![-1, 2]], vec![1, 1]),
            Err(Error::InvalidCartan(_))
        ));
        assert!(matches!(CartanData::new(vec![vec![2, 0], vec![-1, 2]], vec![1, 1]), Err(_)));
        assert!(matches!(CartanData::new(vec![vec![1]], vec![1]), Err(_)));
        assert!(matches!(
            CartanData::new(vec![vec![2, -1], vec![-1, 2]], vec![1]),
            Err(Error::RankMismatch { .. })
        ));
        assert!(CartanData::new(vec![vec![2, -2], vec![-1, 2]], vec![1, 2]).is_ok());
    }

    #[test]
    fn finite_type_detection() {
        for t in ["A1", "A2", "A3", "B2", "C2", "G2"] {
            assert!(CartanData::preset(t).unwrap().is_finite_type(), "{t}");
        }
        let affine = CartanData::new(vec![vec![2, -2], vec![-2, 2]], vec![1, 1]).unwrap();
        assert!(!affine.is_finite_type());
    }

    #[test]
    fn positive_root_counts() {
        let counts = [("A1", 1), ("A2", 3), ("A3", 6), ("B2", 4), ("G2", 6)];
        for (t, n) in counts {
            assert_eq!(CartanData::preset(t).unwrap().positive_roots().unwrap().len(), n, "{t}");
        }
    }

    #[test]
    fn weight_form_on_a2() {
        let a2 = CartanData::preset("A2").unwrap();
        let w1 = Weight::fundamental(2, 0);
        assert_eq!(a2.weight_form(&w1, &w1).unwrap(), Ratio::new(2, 3));
        let alpha1 = a2.alpha(0);
        assert_eq!(a2.weight_form(&alpha1, &alpha1).unwrap(), Ratio::from_integer(2));
    }

    proptest! {
        #[test]
        fn form_is_symmetric(a in prop::collection::vec(-4i64..5, 2), b in prop::collection::vec(-4i64..5, 2), t in 0usize..4) {
            let cd = CartanData::preset(["A2", "B2", "C2", "G2"][t]).unwrap();
            let (a, b) = (RootVec(a), RootVec(b));
            prop_assert_eq!(cd.form(&a, &b).unwrap(), cd.form(&b, &a).unwrap());
        }
    }
}
