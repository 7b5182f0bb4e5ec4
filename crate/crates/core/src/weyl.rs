//! Weyl group elements, reduced words and the Bruhat order.
//!
//! Indices are 0-based internally; words are rendered and parsed 1-based.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::rootdata::{CartanData, RootVec, Weight};

type IMat = Vec<Vec<i64>>;

fn identity(r: usize) -> IMat {
    (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect()
}

/// `m <- m * s_i` (column operation).
fn right_mul_s(cd: &CartanData, m: &mut IMat, i: usize) {
    let r = cd.rank();
    for row in m.iter_mut() {
        let ci = row[i];
        for j in 0..r {
            row[j] -= cd.c(i, j) * ci;
        }
    }
}

/// Weyl group element: action on the simple-root basis plus the
/// lexicographically smallest reduced word.
#[derive(Clone, Debug)]
pub struct WeylElt {
    action: IMat,
    word: Vec<usize>,
}

impl PartialEq for WeylElt {
    fn eq(&self, o: &Self) -> bool {
        self.action == o.action
    }
}

impl Eq for WeylElt {}

impl Hash for WeylElt {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.action.hash(h);
    }
}

impl PartialOrd for WeylElt {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Length first, then reduced word; consistent with equality because the word is canonical.
impl Ord for WeylElt {
    fn cmp(&self, o: &Self) -> Ordering {
        self.word.len().cmp(&o.word.len()).then_with(|| self.word.cmp(&o.word))
    }
}

impl fmt::Display for WeylElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "e");
        }
        for i in &self.word {
            write!(f, "s{}", i + 1)?;
        }
        Ok(())
    }
}

impl WeylElt {
    pub fn identity(cd: &CartanData) -> Self {
        WeylElt { action: identity(cd.rank()), word: Vec::new() }
    }

    pub fn simple(cd: &CartanData, i: usize) -> Result<Self> {
        WeylElt::reduce(cd, &[i])
    }

    /// The element represented by an arbitrary word, with its canonical reduced word.
    pub fn reduce(cd: &CartanData, word: &[usize]) -> Result<Self> {
        for &i in word {
            cd.check_index(i)?;
        }
        // inverse action: s_{i_l} ... s_{i_1}
        let mut inv = identity(cd.rank());
        for &i in word.iter().rev() {
            right_mul_s(cd, &mut inv, i);
        }
        // peel off the smallest left descent each time
        let mut canon = Vec::new();
        loop {
            let Some(i) = (0..cd.rank()).find(|&i| inv.iter().any(|row| row[i] < 0)) else {
                break;
            };
            canon.push(i);
            right_mul_s(cd, &mut inv, i);
        }
        let mut action = identity(cd.rank());
        for &i in &canon {
            right_mul_s(cd, &mut action, i);
        }
        Ok(WeylElt { action, word: canon })
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn action(&self) -> &[Vec<i64>] {
        &self.action
    }

    pub fn mult(&self, cd: &CartanData, o: &WeylElt) -> WeylElt {
        let w: Vec<usize> = self.word.iter().chain(&o.word).copied().collect();
        WeylElt::reduce(cd, &w).expect("indices already validated")
    }

    pub fn inverse(&self, cd: &CartanData) -> WeylElt {
        let w: Vec<usize> = self.word.iter().rev().copied().collect();
        WeylElt::reduce(cd, &w).expect("indices already validated")
    }

    pub fn act_root(&self, beta: &RootVec) -> RootVec {
        let r = beta.0.len();
        RootVec((0..r).map(|i| (0..r).map(|j| self.action[i][j] * beta.0[j]).sum()).collect())
    }

    pub fn act(&self, cd: &CartanData, lambda: &Weight) -> Weight {
        let mut out = lambda.clone();
        for &i in self.word.iter().rev() {
            out = cd.reflect_weight(i, &out);
        }
        out
    }

    /// True when `l(self * s_i) < l(self)`.
    pub fn has_right_descent(&self, i: usize) -> bool {
        self.action.iter().any(|row| row[i] < 0)
    }

    /// True when `l(s_i * self) < l(self)`.
    pub fn has_left_descent(&self, cd: &CartanData, i: usize) -> bool {
        self.inverse(cd).has_right_descent(i)
    }

    pub fn number_of_inversions(&self, cd: &CartanData) -> Result<usize> {
        Ok(cd.positive_roots()?.iter().filter(|b| !self.act_root(b).is_nonneg()).count())
    }
}

pub fn is_reduced(cd: &CartanData, word: &[usize]) -> Result<bool> {
    Ok(WeylElt::reduce(cd, word)?.length() == word.len())
}

pub fn check_reduced(cd: &CartanData, word: &[usize]) -> Result<()> {
    if !is_reduced(cd, word)? {
        return Err(Error::NotReduced { word: word.iter().map(|i| i + 1).collect() });
    }
    Ok(())
}

/// Bruhat order, by descending along a left descent of `w`.
pub fn bruhat_leq(cd: &CartanData, u: &WeylElt, w: &WeylElt) -> bool {
    if u.length() > w.length() {
        return false;
    }
    if w.is_identity() {
        return u.is_identity();
    }
    let s = w.word[0];
    let sw = WeylElt::reduce(cd, &w.word[1..]).unwrap();
    let mut su_word = vec![s];
    su_word.extend(&u.word);
    let su = WeylElt::reduce(cd, &su_word).unwrap();
    if su.length() < u.length() {
        bruhat_leq(cd, &su, &sw)
    } else {
        bruhat_leq(cd, u, &sw)
    }
}

/// All elements below `w`, as products of subwords of its reduced word, sorted.
pub fn lower_interval(cd: &CartanData, w: &WeylElt) -> Vec<WeylElt> {
    let mut set: BTreeSet<WeylElt> = BTreeSet::new();
    set.insert(WeylElt::identity(cd));
    for &i in &w.word {
        let s = WeylElt::simple(cd, i).unwrap();
        let extra: Vec<WeylElt> = set.iter().map(|x| x.mult(cd, &s)).collect();
        set.extend(extra);
    }
    set.into_iter().collect()
}

/// Longest element of a finite Weyl group.
pub fn longest_element(cd: &CartanData) -> Result<WeylElt> {
    if !cd.is_finite_type() {
        return Err(Error::InfiniteType);
    }
    let mut w = WeylElt::identity(cd);
    while let Some(i) = (0..cd.rank()).find(|&i| !w.has_right_descent(i)) {
        w = w.mult(cd, &WeylElt::simple(cd, i)?);
    }
    Ok(w)
}

/// `beta_k = s_{i_1} ... s_{i_{k-1}} (alpha_{i_k})` for a reduced word.
pub fn inversion_roots(cd: &CartanData, word: &[usize]) -> Result<Vec<RootVec>> {
    check_reduced(cd, word)?;
    let r = cd.rank();
    let mut prefix = identity(r);
    let mut out = Vec::with_capacity(word.len());
    for &i in word {
        out.push(RootVec((0..r).map(|a| prefix[a][i]).collect()));
        right_mul_s(cd, &mut prefix, i);
    }
    Ok(out)
}

/// All reduced words of `w`, sorted.
pub fn reduced_words(cd: &CartanData, w: &WeylElt) -> Vec<Vec<usize>> {
    if w.is_identity() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..cd.rank() {
        if w.has_right_descent(i) {
            let ws = w.mult(cd, &WeylElt::simple(cd, i).unwrap());
            for mut pre in reduced_words(cd, &ws) {
                pre.push(i);
                out.push(pre);
            }
        }
    }
    out.sort();
    out
}

/// `lambda - w lambda` as an element of Q^+, read off a reduced word of `w`.
pub fn depth_below(cd: &CartanData, w: &WeylElt, lambda: &Weight) -> RootVec {
    let mut mu = lambda.clone();
    let mut d = RootVec::zero(cd.rank());
    for &i in w.word().iter().rev() {
        d.0[i] += mu.0[i];
        mu = cd.reflect_weight(i, &mu);
    }
    d
}

/// Parses a 1-based comma separated word such as `1,2,1`; empty or `e` is the empty word.
pub fn parse_word(s: &str) -> Result<Vec<usize>> {
    let t = s.trim();
    if t.is_empty() || t == "e" {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|p| {
            let n: usize =
                p.trim().parse().map_err(|_| Error::Parse(format!("bad word letter `{p}`")))?;
            if n == 0 {
                return Err(Error::Parse("word letters are 1-based".into()));
            }
            Ok(n - 1)
        })
        .collect()
}

pub fn format_word(w: &[usize]) -> String {
    w.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
}
