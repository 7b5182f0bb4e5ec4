//! Exact scalars: rational functions in q over the rationals, and q-combinatorics.
//!
//! q is never specialized; every value is a formal element of Q(q).

mod poly;
mod ratq;

pub use poly::IntPoly;
pub use ratq::RatQ;

use crate::error::{Error, Result};

/// The q-integer `[n]_{q^d} = (q^{dn} - q^{-dn}) / (q^d - q^{-d})`.
pub fn qint(n: i64, d: u32) -> RatQ {
    let d = d as i64;
    let m = n.abs();
    let mut out = RatQ::zero();
    for k in 0..m {
        out = &out + &RatQ::q_pow(d * (m - 1 - 2 * k));
    }
    if n < 0 {
        -out
    } else {
        out
    }
}

/// The q-factorial `[n]_{q^d}!`.
pub fn qfact(n: i64, d: u32) -> Result<RatQ> {
    if n < 0 {
        return Err(Error::Domain(format!("q-factorial of negative integer {n}")));
    }
    Ok((1..=n).fold(RatQ::one(), |acc, k| &acc * &qint(k, d)))
}

/// The q-binomial coefficient built from `qfact`; a Laurent polynomial for 0 <= k <= n.
pub fn qbinom(n: i64, k: i64, d: u32) -> RatQ {
    if k < 0 || k > n {
        return RatQ::zero();
    }
    let num = qfact(n, d).unwrap();
    let den = &qfact(k, d).unwrap() * &qfact(n - k, d).unwrap();
    &num / &den
}

/// `q_i = q^d` raised to the integer power `e`.
pub fn qd_pow(d: u32, e: i64) -> RatQ {
    RatQ::q_pow(d as i64 * e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(s: &str) -> RatQ {
        s.parse().unwrap()
    }

    #[test]
    fn qint_examples() {
        assert_eq!(qint(1, 1), RatQ::one());
        assert_eq!(qint(2, 1), r("q + q^-1"));
        assert_eq!(qint(3, 1), r("q^2 + 1 + q^-2"));
        assert_eq!(qint(0, 1), RatQ::zero());
        assert_eq!(qint(2, 2), r("q^2 + q^-2"));
        for n in -5..5 {
            for d in 1..4 {
                assert_eq!(qint(-n, d), -qint(n, d));
            }
        }
    }

    #[test]
    fn qint_matches_defining_quotient() {
        for n in -4i64..6 {
            for d in 1u32..4 {
                let di = d as i64;
                let lhs = &(&RatQ::q_pow(di * n) - &RatQ::q_pow(-di * n))
                    / &(&RatQ::q_pow(di) - &RatQ::q_pow(-di));
                assert_eq!(qint(n, d), lhs);
                assert!(qint(n, d).is_laurent());
            }
        }
    }

    #[test]
    fn qfact_examples() {
        assert_eq!(qfact(0, 1).unwrap(), RatQ::one());
        assert_eq!(qfact(2, 1).unwrap(), r("q + q^-1"));
        assert_eq!(qfact(3, 1).unwrap(), &r("q + q^-1") * &r("q^2 + 1 + q^-2"));
        assert!(matches!(qfact(-1, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn field_examples() {
        let x = r("q - q^-1");
        let inv = x.inv().unwrap();
        assert_eq!(inv.to_string(), "(q)/(q^2 - 1)");
        assert_eq!(&inv * &x, RatQ::one());
        assert_eq!(&r("q + q^-1") * &r("q - q^-1"), r("q^2 - q^-2"));
        assert_eq!(RatQ::q().pow(-3).unwrap(), RatQ::q_pow(-3));
        assert!(matches!(RatQ::zero().inv(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn rendering_is_stable() {
        assert_eq!(r("q + q^-1").to_string(), "q + q^-1");
        assert_eq!(RatQ::from_int(-3).to_string(), "-3");
        assert_eq!(r("2q^3 - q + 5").to_string(), "2q^3 - q + 5");
        assert_eq!(RatQ::from_ratio(1, 2).to_string(), "(1)/(2)");
        let x = &qint(3, 1) / &qint(2, 1);
        assert_eq!(x.to_string().parse::<RatQ>().unwrap(), x);
    }

    #[test]
    fn qbinom_is_laurent() {
        for n in 0..6 {
            for k in 0..=n {
                assert!(qbinom(n, k, 1).is_laurent());
            }
        }
        assert_eq!(qbinom(2, 1, 1), qint(2, 1));
    }

    fn small_ratq() -> impl Strategy<Value = RatQ> {
        (
            prop::collection::vec(-3i64..4, 1..4),
            prop::collection::vec(-2i64..3, 1..3),
            -3i64..4,
        )
            .prop_map(|(n, d, s)| {
                let den = IntPoly::from_i64(&d);
                let den = if den.is_zero() { IntPoly::one() } else { den };
                RatQ::from_parts(s, IntPoly::from_i64(&n), den)
            })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in small_ratq(), b in small_ratq(), c in small_ratq()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
        }

        #[test]
        fn canonical_form_decides_equality(a in small_ratq(), b in small_ratq()) {
            prop_assert_eq!((&a - &b).is_zero(), a == b);
            let round: RatQ = a.to_string().parse().unwrap();
            prop_assert_eq!(round, a.clone());
            if !a.is_zero() {
                prop_assert_eq!(&a * &a.inv().unwrap(), RatQ::one());
            }
        }
    }
}
