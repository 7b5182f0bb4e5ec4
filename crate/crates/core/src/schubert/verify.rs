use std::collections::BTreeMap;

use serde::Serialize;

use super::{IdealTruncation, SchubertCell, UwElement};
use crate::error::{Error, Result};
use crate::hwmod::Side;
use crate::qscalar::RatQ;
use crate::rootdata::{RootVec, Weight};
use crate::verdict::Verdict;
use crate::weyl::{bruhat_leq, lower_interval, WeylElt};

/// What the localization checks leave to theory.
pub const DELEGATED: [&str; 2] = [
    "complete primeness of the lower ideal",
    "H-simplicity of the localization at the Ore set",
];

/// The Ore set `q^Z {d_{u,lambda}}`, stored through its fundamental generators.
#[derive(Clone, Debug, PartialEq)]
pub struct OreSet {
    pub u: WeylElt,
    pub generators: BTreeMap<usize, UwElement>,
}

impl OreSet {
    pub fn describe(&self) -> Vec<String> {
        self.generators.iter().map(|(i, d)| format!("d[{},w{}] = {}", self.u, i + 1, d)).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalityOutcome {
    pub u: String,
    pub lambda: Weight,
    /// 1-based index of the PBW generator `F_{beta_k}`.
    pub generator: usize,
    pub exponent: i64,
    /// The two sides agree exactly in U^-[w], not only modulo the ideal.
    pub exact: bool,
    pub verdict: Verdict,
    /// The same check with the exponent negated.
    pub reversed_verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparationWitness {
    pub above: String,
    pub lambda: Weight,
    /// `b_{u lambda}` lies outside `U^- b_{u'' lambda}`.
    pub demazure_route: bool,
    /// `d_{u,lambda}` lies in the truncation of I_w(u''); `None` when undecided.
    pub ideal_route: Option<bool>,
    pub agree: bool,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct Disjointness {
    pub lambda: Weight,
    pub element: String,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparationReport {
    pub lower: String,
    pub upper: String,
    pub ore_generators: Vec<String>,
    /// The separating set uses exactly the generators of the Ore set at the upper ideal.
    pub matches_upper_ore_set: bool,
    pub disjointness: Vec<Disjointness>,
    pub witnesses: Vec<SeparationWitness>,
    pub route_disagreements: usize,
    pub delegated: Vec<String>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct FundPair {
    pub i: usize,
    pub j: usize,
    pub n: Option<i64>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct FundGeneration {
    pub u: String,
    pub pairs: Vec<FundPair>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct PosetEntry {
    pub lower: String,
    pub upper: String,
    pub bruhat: bool,
    pub included: bool,
    pub offending: Option<RootVec>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct PosetReport {
    pub elements: Vec<String>,
    pub entries: Vec<PosetEntry>,
    pub verdict: Verdict,
}

/// Verdict for a membership query whose "no" answer is only exact after stabilization.
fn membership(t: &IdealTruncation, cell: &SchubertCell, x: &UwElement) -> Option<bool> {
    match t.contains(cell, x) {
        Ok(true) => Some(true),
        Ok(false) if t.is_stabilized() => Some(false),
        _ => None,
    }
}

impl SchubertCell {
    pub fn ore_set(&self, u: &WeylElt) -> Result<OreSet> {
        let r = self.cartan().rank();
        let mut generators = BTreeMap::new();
        for i in 0..r {
            generators.insert(i, self.d_element(u, &Weight::fundamental(r, i))?);
        }
        Ok(OreSet { u: u.clone(), generators })
    }

    /// `d c - q^{<(w+u)lambda, nu>} c d` in the ideal for every PBW generator `c` of degree `nu`.
    pub fn verify_normality_uw(
        &self,
        u: &WeylElt,
        lambda: &Weight,
        ideal: &IdealTruncation,
    ) -> Result<Vec<NormalityOutcome>> {
        self.check_below_w(u)?;
        let cd = self.cartan();
        let d = self.d_element(u, lambda)?;
        let dq = self.to_uq(&d);
        let wu = self.w().act(cd, lambda).add(&u.act(cd, lambda));
        let mut out = Vec::new();
        for (k, beta) in self.roots().iter().enumerate() {
            let c = self.root_vector(k + 1);
            let exponent = cd.mixed(&wu, &beta.scale(-1));
            let dc = self.uq().multiply(&dq, c);
            let cd_ = self.uq().multiply(c, &dq);
            let test = |e: i64| -> Result<(bool, Verdict)> {
                let diff = dc.sub(&cd_.scale(&RatQ::q_pow(e)));
                if diff.is_zero() {
                    return Ok((true, Verdict::Pass));
                }
                let v = match ideal.contains_uq(&diff) {
                    Ok(true) => Verdict::Pass,
                    Ok(false) if ideal.is_stabilized() => Verdict::Fail,
                    Ok(false) | Err(Error::Truncation(_)) => Verdict::Inconclusive,
                    Err(e) => return Err(e),
                };
                Ok((false, v))
            };
            let (exact, verdict) = test(exponent)?;
            let (_, reversed_verdict) = test(-exponent)?;
            out.push(NormalityOutcome {
                u: u.to_string(),
                lambda: lambda.clone(),
                generator: k + 1,
                exponent,
                exact,
                verdict,
                reversed_verdict,
            });
        }
        Ok(out)
    }

    /// Separating-set check for the incident pair `I_w(lower) ⊆ I_w(upper)`.
    /// `ideals` must hold a truncation for every element of `[e, w]`.
    pub fn verify_separating_uw(
        &self,
        lower: &WeylElt,
        upper: &WeylElt,
        ideals: &BTreeMap<WeylElt, IdealTruncation>,
    ) -> Result<SeparationReport> {
        let cd = self.cartan().clone();
        self.check_below_w(upper)?;
        if !bruhat_leq(&cd, lower, upper) {
            return Err(Error::NotIncident(format!("{lower} is not below {upper}")));
        }
        let get = |x: &WeylElt| {
            ideals.get(x).ok_or_else(|| Error::Internal(format!("no ideal truncation for {x}")))
        };
        let ore = self.ore_set(upper)?;
        let upper_ore = self.ore_set(upper)?;
        let own = get(upper)?;
        let mut disjointness = Vec::new();
        for (i, d) in &ore.generators {
            let verdict = match membership(own, self, d) {
                Some(true) => Verdict::Fail,
                Some(false) => Verdict::Pass,
                None => Verdict::Inconclusive,
            };
            disjointness.push(Disjointness {
                lambda: Weight::fundamental(cd.rank(), *i),
                element: d.to_string(),
                verdict,
            });
        }

        let rho = Weight::rho(cd.rank());
        let m = self.module(&rho)?;
        let b = m.extremal_vector(upper)?;
        let d_rho = self.d_element(upper, &rho)?;
        let mut witnesses = Vec::new();
        let mut disagreements = 0;
        for above in lower_interval(&cd, self.w()) {
            if !bruhat_leq(&cd, lower, &above) || bruhat_leq(&cd, &above, upper) {
                continue;
            }
            let demazure_route = !m.demazure_span(&above, Side::Minus)?.contains(&b);
            let ideal_route = membership(get(&above)?, self, &d_rho);
            let agree = ideal_route.is_none_or(|x| x == demazure_route);
            if !agree {
                disagreements += 1;
            }
            let verdict = match ideal_route {
                _ if !agree => Verdict::Fail,
                None => Verdict::Inconclusive,
                Some(x) => Verdict::from_bool(x),
            };
            witnesses.push(SeparationWitness {
                above: above.to_string(),
                lambda: rho.clone(),
                demazure_route,
                ideal_route,
                agree,
                verdict,
            });
        }
        let verdict = Verdict::all(
            disjointness.iter().map(|d| d.verdict).chain(witnesses.iter().map(|w| w.verdict)),
        );
        Ok(SeparationReport {
            lower: lower.to_string(),
            upper: upper.to_string(),
            ore_generators: ore.describe(),
            matches_upper_ore_set: ore == upper_ore,
            disjointness,
            witnesses,
            route_disagreements: disagreements,
            delegated: DELEGATED.iter().map(|s| s.to_string()).collect(),
            verdict,
        })
    }

    /// `d_{u,w_i} d_{u,w_j} = q^n d_{u,w_i+w_j}` for all `i <= j`, solving for n.
    pub fn fund_generation_check(&self, u: &WeylElt) -> Result<FundGeneration> {
        let r = self.cartan().rank();
        let ore = self.ore_set(u)?;
        let mut pairs = Vec::new();
        for i in 0..r {
            for j in i..r {
                let x = self.multiply(&ore.generators[&i], &ore.generators[&j])?;
                let lam = Weight::fundamental(r, i).add(&Weight::fundamental(r, j));
                let y = self.d_element(u, &lam)?;
                let n = x.ratio_to(&y).and_then(|c| c.as_q_power());
                pairs.push(FundPair { i: i + 1, j: j + 1, n, verdict: Verdict::from_bool(n.is_some()) });
            }
        }
        let verdict = Verdict::all(pairs.iter().map(|p| p.verdict));
        Ok(FundGeneration { u: u.to_string(), pairs, verdict })
    }

    /// Inclusion of truncations against Bruhat order over all pairs in `[e, w]`.
    pub fn poset_check(&self, ideals: &BTreeMap<WeylElt, IdealTruncation>) -> Result<PosetReport> {
        let cd = self.cartan();
        let elems = lower_interval(cd, self.w());
        let mut entries = Vec::new();
        for a in &elems {
            for b in &elems {
                let (ta, tb) = match (ideals.get(a), ideals.get(b)) {
                    (Some(x), Some(y)) => (x, y),
                    _ => return Err(Error::Internal("missing ideal truncation".into())),
                };
                let bruhat = bruhat_leq(cd, a, b);
                let offending = ta.first_excess_over(tb);
                let included = offending.is_none();
                let verdict = if ta.is_stabilized() && tb.is_stabilized() {
                    Verdict::from_bool(included == bruhat)
                } else {
                    Verdict::Inconclusive
                };
                entries.push(PosetEntry {
                    lower: a.to_string(),
                    upper: b.to_string(),
                    bruhat,
                    included,
                    offending,
                    verdict,
                });
            }
        }
        let verdict = Verdict::all(entries.iter().map(|e| e.verdict));
        Ok(PosetReport { elements: elems.iter().map(|e| e.to_string()).collect(), entries, verdict })
    }
}
