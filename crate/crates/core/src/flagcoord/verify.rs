use std::collections::BTreeSet;

use serde::Serialize;

use super::{FlagAlgebra, MatCoefElt, QuantumMinor};
use crate::error::{Error, Result};
use crate::hwmod::Side;
use crate::linalg::SparseVec;
use crate::qscalar::RatQ;
use crate::rootdata::Weight;
use crate::verdict::Verdict;
use crate::weyl::{bruhat_leq, WeylElt};

/// What the quantum-group checks leave to theory.
pub const DELEGATED_RQG: [&str; 2] = [
    "complete primeness of the lower ideal",
    "H-simplicity of the localization at the Ore set",
];

#[derive(Clone, Debug, Serialize)]
pub struct SkewDegree {
    /// 1-based.
    pub i: usize,
    pub u: String,
    pub lambda: Weight,
    pub degree: i64,
    pub expected: i64,
    /// The top derivative is a nonzero multiple of `Delta_{s_i u lambda, lambda}`.
    pub top_proportional: bool,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalityCheck {
    /// `rplus`, `n1` or `n2`.
    pub relation: String,
    pub u: String,
    pub v: String,
    pub lambda: Weight,
    /// Component, row and column of the basis coefficient `c`.
    pub component: Weight,
    pub row: usize,
    pub col: usize,
    pub exponent: i64,
    /// The two sides agree without passing to the quotient.
    pub exact: bool,
    pub verdict: Verdict,
    /// The same check with the exponent negated.
    pub reversed_verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlagDisjointness {
    pub minor: String,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlagWitness {
    /// The H-prime `I_{u'',v''}` that must meet the Ore set.
    pub prime: String,
    pub minor: String,
    /// `b_{u rho}` outside `U^+ b_{u'' rho}`, or `b_{-v rho}` outside `U^- b_{-v'' rho}`.
    pub demazure_route: bool,
    pub ideal_route: Option<bool>,
    pub agree: bool,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlagSeparation {
    /// `(u, v)`: the Ore set `E_{u,v}` and the upper ideal `I_{u,v}`.
    pub upper: String,
    /// `(u', v')`: the lower ideal.
    pub lower: String,
    pub lambda_bound: i64,
    pub ore_generators: Vec<String>,
    pub disjointness: Vec<FlagDisjointness>,
    pub witnesses: Vec<FlagWitness>,
    pub route_disagreements: usize,
    pub delegated: Vec<String>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct MultiplicativityOutcome {
    pub lambdas: [Weight; 2],
    pub mus: [Weight; 2],
    /// The two sides agree modulo the truncation up to `q^n`.
    pub factored: bool,
    pub n: Option<i64>,
    pub stabilized: bool,
}

fn pair_label(u: &WeylElt, v: &WeylElt) -> String {
    format!("({u},{v})")
}

/// `x = t y` for a scalar t.
fn sparse_ratio<K: Ord + Clone>(x: &SparseVec<K>, y: &SparseVec<K>) -> Option<RatQ> {
    let (k, c) = y.iter().next()?;
    let t = x.get(k)?.checked_div(c).ok()?;
    let ok = x.len() == y.len() && y.iter().all(|(k, c)| x.get(k) == Some(&(c * &t)));
    ok.then_some(t)
}

impl FlagAlgebra {
    /// `<x, mu> - <lambda, nu>`, which is integral whenever `x` lies in `W lambda`
    /// and `mu - nu` in the root lattice.
    fn exponent(&self, x: &Weight, mu: &Weight, lambda: &Weight, nu: &Weight) -> Result<i64> {
        let cd = self.cartan();
        let f = cd.weight_form(x, mu)? - cd.weight_form(lambda, nu)?;
        if !f.is_integer() {
            return Err(Error::Internal(format!("non-integral exponent <{x},{mu}> - <{lambda},{nu}> = {f}")));
        }
        Ok(f.to_integer())
    }

    /// Degree of `Delta_{u lambda, lambda}` for `partial_i`, with the top derivative.
    pub fn skew_degree(&self, i: usize, u: &WeylElt, lambda: &Weight) -> Result<(SkewDegree, MatCoefElt)> {
        let cd = self.cartan().clone();
        cd.check_index(i)?;
        if u.has_left_descent(&cd, i) {
            return Err(Error::LengthCondition(format!("l(s{} {u}) < l({u})", i + 1)));
        }
        let e = WeylElt::identity(&cd);
        let mut top = self.minor(u, &e, lambda)?.as_elt;
        let mut degree = 0;
        loop {
            let next = self.partial(i, &top)?;
            if next.is_zero() {
                break;
            }
            top = next;
            degree += 1;
            if degree > 1000 {
                return Err(Error::Internal("skew derivation is not nilpotent".into()));
            }
        }
        let siu = WeylElt::simple(&cd, i)?.mult(&cd, u);
        let target = self.minor(&siu, &e, lambda)?.as_elt;
        let top_proportional = top.ratio_to(&target).is_some();
        let expected = cd.pairing(&u.act(&cd, lambda), i)?;
        let report = SkewDegree {
            i: i + 1,
            u: u.to_string(),
            lambda: lambda.clone(),
            degree,
            expected,
            top_proportional,
            verdict: Verdict::from_bool(degree == expected && top_proportional),
        };
        Ok((report, top))
    }

    fn normality_pair(
        &self,
        d: &MatCoefElt,
        c: &MatCoefElt,
        exponent: i64,
        member: &dyn Fn(&MatCoefElt) -> Result<Verdict>,
    ) -> Result<(bool, Verdict, Verdict)> {
        let left = self.multiply(d, c)?;
        let right = self.multiply(c, d)?;
        let test = |e: i64| -> Result<(bool, Verdict)> {
            let diff = left.sub(&right.scale(&RatQ::q_pow(e)));
            if diff.is_zero() {
                return Ok((true, Verdict::Pass));
            }
            Ok((false, member(&diff)?))
        };
        let (exact, verdict) = test(exponent)?;
        let (_, reversed) = test(-exponent)?;
        Ok((exact, verdict, reversed))
    }

    /// `Delta_{u lambda, lambda} c = q^{<u lambda, mu> - <lambda, nu>} c Delta_{u lambda, lambda}`
    /// modulo `I_u^+`, for every basis coefficient `c = c_{xi^a, b_{lambda_c}}` of R^+.
    pub fn verify_normality_rplus(
        &self,
        u: &WeylElt,
        lambda: &Weight,
        lambda_c: &Weight,
    ) -> Result<Vec<NormalityCheck>> {
        let cd = self.cartan().clone();
        let e = WeylElt::identity(&cd);
        let d = self.minor(u, &e, lambda)?.as_elt;
        let ul = u.act(&cd, lambda);
        let idx = self.index(lambda_c)?;
        let member = |x: &MatCoefElt| -> Result<Verdict> { Ok(Verdict::from_bool(self.in_plus_ideal(u, x)?)) };
        let mut out = Vec::new();
        for a in 0..idx.dim() {
            let c = self.basis_coef(lambda_c, a, 0);
            let exponent = self.exponent(&ul, &idx.weight[a], lambda, lambda_c)?;
            let (exact, verdict, reversed_verdict) = self.normality_pair(&d, &c, exponent, &member)?;
            out.push(NormalityCheck {
                relation: "rplus".into(),
                u: u.to_string(),
                v: e.to_string(),
                lambda: lambda.clone(),
                component: lambda_c.clone(),
                row: a,
                col: 0,
                exponent,
                exact,
                verdict,
                reversed_verdict,
            });
        }
        Ok(out)
    }

    /// Both normality relations for `E_{u,v}` modulo `I_{u,v}`, over all basis
    /// coefficients of the component `lambda_c`.
    pub fn verify_normality_rqg(
        &self,
        u: &WeylElt,
        v: &WeylElt,
        lambda: &Weight,
        lambda_c: &Weight,
        bound: i64,
    ) -> Result<Vec<NormalityCheck>> {
        let cd = self.cartan().clone();
        let e = WeylElt::identity(&cd);
        let d1 = self.minor(u, &e, lambda)?.as_elt;
        let d2 = self.minor_minus(v, &e, lambda)?.as_elt;
        let ul = u.act(&cd, lambda);
        let vl = v.act(&cd, lambda);
        let idx = self.index(lambda_c)?;
        let member = |x: &MatCoefElt| -> Result<Verdict> {
            let m = self.in_uv_ideal(u, v, x, bound)?;
            Ok(match m.decided() {
                Some(true) => Verdict::Pass,
                Some(false) => Verdict::Fail,
                None => Verdict::Inconclusive,
            })
        };
        let mut out = Vec::new();
        for a in 0..idx.dim() {
            for b in 0..idx.dim() {
                let c = self.basis_coef(lambda_c, a, b);
                let (mu, nu) = (&idx.weight[a], &idx.weight[b]);
                for (rel, d, x) in [("n1", &d1, &ul), ("n2", &d2, &vl)] {
                    let exponent = self.exponent(x, mu, lambda, nu)?;
                    let (exact, verdict, reversed_verdict) = self.normality_pair(d, &c, exponent, &member)?;
                    out.push(NormalityCheck {
                        relation: rel.into(),
                        u: u.to_string(),
                        v: v.to_string(),
                        lambda: lambda.clone(),
                        component: lambda_c.clone(),
                        row: a,
                        col: b,
                        exponent,
                        exact,
                        verdict,
                        reversed_verdict,
                    });
                }
            }
        }
        Ok(out)
    }

    /// The fundamental generators `Delta_{u w_i, w_i}` and `Delta_{-v w_i, -w_i}` of `E_{u,v}`.
    pub fn ore_generators(&self, u: &WeylElt, v: &WeylElt) -> Result<Vec<QuantumMinor>> {
        let cd = self.cartan().clone();
        let e = WeylElt::identity(&cd);
        let mut out = Vec::new();
        for i in 0..cd.rank() {
            out.push(self.minor(u, &e, &Weight::fundamental(cd.rank(), i))?);
        }
        for i in 0..cd.rank() {
            out.push(self.minor_minus(v, &e, &Weight::fundamental(cd.rank(), i))?);
        }
        Ok(out)
    }

    /// Separating-set check of `E_{u,v}` for the pair `I_{u',v'} ⊆ I_{u,v}`.
    pub fn verify_separating_rqg(
        &self,
        upper: (&WeylElt, &WeylElt),
        lower: (&WeylElt, &WeylElt),
        bound: i64,
    ) -> Result<FlagSeparation> {
        let cd = self.cartan().clone();
        let (u, v) = upper;
        let (u1, v1) = lower;
        if !bruhat_leq(&cd, u, u1) || !bruhat_leq(&cd, v, v1) {
            return Err(Error::NotIncident(format!(
                "I{} is not contained in I{}",
                pair_label(u1, v1),
                pair_label(u, v)
            )));
        }
        let gens = self.ore_generators(u, v)?;
        let mut disjointness = Vec::new();
        for g in &gens {
            let m = self.in_uv_ideal(u, v, &g.as_elt, bound)?;
            let verdict = match m.decided() {
                Some(true) => Verdict::Fail,
                Some(false) => Verdict::Pass,
                None => Verdict::Inconclusive,
            };
            disjointness.push(FlagDisjointness { minor: g.label(), verdict });
        }

        let e = WeylElt::identity(&cd);
        let rho = Weight::rho(cd.rank());
        let plus_minor = self.minor(u, &e, &rho)?;
        let minus_minor = self.minor_minus(v, &e, &rho)?;
        let lp = self.dual_weight(&rho);
        let m_plus = self.index(&rho)?.module.clone();
        let m_minus = self.index(&lp)?.module.clone();
        let b_plus = m_plus.extremal_vector(u)?;
        let b_minus = m_minus.extremal_vector(&v.mult(&cd, self.w0()))?;
        let elems = crate::weyl::lower_interval(&cd, self.w0());
        let mut witnesses = Vec::new();
        let mut disagreements = 0;
        for u2 in elems.iter().filter(|x| bruhat_leq(&cd, x, u1)) {
            for v2 in elems.iter().filter(|x| bruhat_leq(&cd, x, v1)) {
                let above_u = bruhat_leq(&cd, u, u2);
                if above_u && bruhat_leq(&cd, v, v2) {
                    continue;
                }
                let (minor, demazure_route) = if !above_u {
                    (&plus_minor, !m_plus.demazure_span(u2, Side::Plus)?.contains(&b_plus))
                } else {
                    let v2w = v2.mult(&cd, self.w0());
                    (&minus_minor, !m_minus.demazure_span(&v2w, Side::Minus)?.contains(&b_minus))
                };
                let ideal_route = self.in_uv_ideal(u2, v2, &minor.as_elt, bound)?.decided();
                let agree = ideal_route.is_none_or(|x| x == demazure_route);
                if !agree {
                    disagreements += 1;
                }
                let verdict = match ideal_route {
                    _ if !agree => Verdict::Fail,
                    None => Verdict::Inconclusive,
                    Some(x) => Verdict::from_bool(x),
                };
                witnesses.push(FlagWitness {
                    prime: pair_label(u2, v2),
                    minor: minor.label(),
                    demazure_route,
                    ideal_route,
                    agree,
                    verdict,
                });
            }
        }
        let verdict = Verdict::all(
            disjointness.iter().map(|d| d.verdict).chain(witnesses.iter().map(|w| w.verdict)),
        );
        Ok(FlagSeparation {
            upper: pair_label(u, v),
            lower: pair_label(u1, v1),
            lambda_bound: bound,
            ore_generators: gens.iter().map(|g| g.label()).collect(),
            disjointness,
            witnesses,
            route_disagreements: disagreements,
            delegated: DELEGATED_RQG.iter().map(|s| s.to_string()).collect(),
            verdict,
        })
    }

    /// Compares `(D_{u l} D_{-v m})(D_{u l'} D_{-v m'})` with `D_{u(l+l')} D_{-v(m+m')}`
    /// modulo the truncation of `I_{u',v'}`, over fundamental `l, l', m, m'`.
    pub fn multiplicativity_probe(
        &self,
        upper: (&WeylElt, &WeylElt),
        lower: (&WeylElt, &WeylElt),
        bound: i64,
    ) -> Result<Vec<MultiplicativityOutcome>> {
        let cd = self.cartan().clone();
        let (u, v) = upper;
        let (u1, v1) = lower;
        if !bruhat_leq(&cd, u, u1) || !bruhat_leq(&cd, v, v1) {
            return Err(Error::NotIncident(format!("{} is not below {}", pair_label(u, v), pair_label(u1, v1))));
        }
        let e = WeylElt::identity(&cd);
        let r = cd.rank();
        let fund: Vec<Weight> = (0..r).map(|i| Weight::fundamental(r, i)).collect();
        let mut out = Vec::new();
        for l1 in &fund {
            for l2 in &fund {
                for m1 in &fund {
                    for m2 in &fund {
                        let a = self.multiply(&self.minor(u, &e, l1)?.as_elt, &self.minor_minus(v, &e, m1)?.as_elt)?;
                        let b = self.multiply(&self.minor(u, &e, l2)?.as_elt, &self.minor_minus(v, &e, m2)?.as_elt)?;
                        let x = self.multiply(&a, &b)?;
                        let y = self.multiply(
                            &self.minor(u, &e, &l1.add(l2))?.as_elt,
                            &self.minor_minus(v, &e, &m1.add(m2))?.as_elt,
                        )?;
                        let bideg = self
                            .bidegree(&y)?
                            .ok_or_else(|| Error::Internal("minor product is not bihomogeneous".into()))?;
                        let targets: BTreeSet<Weight> =
                            x.components.keys().chain(y.components.keys()).cloned().collect();
                        let (rs, stabilized) = self.uv_reduce(u1, v1, &bideg, &targets, &[&x, &y], bound)?;
                        let t = sparse_ratio(&rs[0], &rs[1]);
                        let n = t.as_ref().and_then(|t| t.as_q_power());
                        out.push(MultiplicativityOutcome {
                            lambdas: [l1.clone(), l2.clone()],
                            mus: [m1.clone(), m2.clone()],
                            factored: n.is_some(),
                            n,
                            stabilized,
                        });
                    }
                }
            }
        }
        Ok(out)
    }
}
