use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::IntPoly;
use crate::error::{Error, Result};

/// An element of Q(q), the field of rational functions in the formal parameter q.
///
/// Stored as `q^shift * num / den` where neither `num` nor `den` is divisible by q,
/// the two are coprime over Z[q] (including integer content), and `den` has a
/// positive leading coefficient. Zero is `0 / 1` with shift 0. This form is unique,
/// so structural equality is field equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatQ {
    shift: i64,
    num: IntPoly,
    den: IntPoly,
}

impl RatQ {
    pub fn zero() -> Self {
        RatQ { shift: 0, num: IntPoly::zero(), den: IntPoly::one() }
    }

    pub fn one() -> Self {
        RatQ::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        RatQ::from_bigint(BigInt::from(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        if n.is_zero() {
            return RatQ::zero();
        }
        RatQ { shift: 0, num: IntPoly::constant(n), den: IntPoly::one() }
    }

    /// The rational number `n / d`.
    pub fn from_ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        RatQ::from_parts(0, IntPoly::from_i64(&[n]), IntPoly::from_i64(&[d]))
    }

    /// The monomial q^k.
    pub fn q_pow(k: i64) -> Self {
        RatQ { shift: k, num: IntPoly::one(), den: IntPoly::one() }
    }

    pub fn q() -> Self {
        RatQ::q_pow(1)
    }

    /// A Laurent polynomial given as (exponent, coefficient) pairs.
    pub fn laurent(terms: &[(i64, i64)]) -> Self {
        terms
            .iter()
            .fold(RatQ::zero(), |acc, &(e, c)| &acc + &(&RatQ::q_pow(e) * &RatQ::from_int(c)))
    }

    /// Builds `q^shift * num / den` and brings it to canonical form.
    pub fn from_parts(shift: i64, num: IntPoly, den: IntPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatQ::zero();
        }
        let kn = num.low_order();
        let kd = den.low_order();
        let mut num = num.shift_down(kn);
        let mut den = den.shift_down(kd);
        let shift = shift + kn as i64 - kd as i64;
        if !den.is_one() {
            let g = num.gcd(&den);
            if !g.is_one() {
                num = num.exact_div(&g);
                den = den.exact_div(&g);
            }
            if den.leading().unwrap().is_negative() {
                num = num.neg();
                den = den.neg();
            }
        }
        RatQ { shift, num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.shift == 0 && self.num.is_one() && self.den.is_one()
    }

    /// True when the value is a Laurent polynomial in q.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// If the value is `±q^k`, returns `(sign, k)`.
    pub fn as_signed_q_power(&self) -> Option<(i8, i64)> {
        if !self.den.is_one() || self.num.coeffs().len() != 1 {
            return None;
        }
        let c = &self.num.coeffs()[0];
        if c.is_one() {
            Some((1, self.shift))
        } else if (-c).is_one() {
            Some((-1, self.shift))
        } else {
            None
        }
    }

    /// If the value is exactly `q^k`, returns `k`.
    pub fn as_q_power(&self) -> Option<i64> {
        match self.as_signed_q_power() {
            Some((1, k)) => Some(k),
            _ => None,
        }
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn numerator(&self) -> &IntPoly {
        &self.num
    }

    pub fn denominator(&self) -> &IntPoly {
        &self.den
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (mut num, mut den) = (self.den.clone(), self.num.clone());
        if den.leading().unwrap().is_negative() {
            num = num.neg();
            den = den.neg();
        }
        Ok(RatQ { shift: -self.shift, num, den })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = RatQ::one();
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            k >>= 1;
        }
        Ok(acc)
    }

    fn add_ref(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.shift.min(other.shift);
        let a = self.num.shift_up((self.shift - lo) as usize);
        let b = other.num.shift_up((other.shift - lo) as usize);
        if self.den == other.den {
            if self.den.is_one() {
                let s = a.add(&b);
                if s.is_zero() {
                    return RatQ::zero();
                }
                let k = s.low_order();
                return RatQ { shift: lo + k as i64, num: s.shift_down(k), den: IntPoly::one() };
            }
            return RatQ::from_parts(lo, a.add(&b), self.den.clone());
        }
        let num = a.mul(&other.den).add(&b.mul(&self.den));
        RatQ::from_parts(lo, num, self.den.mul(&other.den))
    }

    fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return RatQ::zero();
        }
        let shift = self.shift + other.shift;
        if self.den.is_one() && other.den.is_one() {
            return RatQ { shift, num: self.num.mul(&other.num), den: IntPoly::one() };
        }
        // cross-cancel before multiplying
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let n1 = self.num.exact_div(&g1);
        let d2 = other.den.exact_div(&g1);
        let n2 = other.num.exact_div(&g2);
        let d1 = self.den.exact_div(&g2);
        let mut num = n1.mul(&n2);
        let mut den = d1.mul(&d2);
        if den.leading().unwrap().is_negative() {
            num = num.neg();
            den = den.neg();
        }
        RatQ { shift, num, den }
    }

    fn neg_ref(&self) -> Self {
        RatQ { shift: self.shift, num: self.num.neg(), den: self.den.clone() }
    }
}

/// Renders a Laurent polynomial `q^shift * p` in descending powers, e.g. `q + q^-1`.
fn write_laurent(f: &mut impl fmt::Write, shift: i64, p: &IntPoly) -> fmt::Result {
    if p.is_zero() {
        return f.write_str("0");
    }
    let mut first = true;
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let e = shift + k as i64;
        let neg = c.is_negative();
        if first {
            if neg {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if neg { " - " } else { " + " })?;
        }
        first = false;
        let mag = c.abs();
        let mono = match e {
            0 => String::new(),
            1 => "q".to_string(),
            _ => format!("q^{e}"),
        };
        if mono.is_empty() {
            write!(f, "{mag}")?;
        } else if mag.is_one() {
            f.write_str(&mono)?;
        } else {
            write!(f, "{mag}{mono}")?;
        }
    }
    Ok(())
}

impl fmt::Display for RatQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write_laurent(f, self.shift, &self.num)
        } else {
            f.write_str("(")?;
            write_laurent(f, self.shift, &self.num)?;
            f.write_str(")/(")?;
            write_laurent(f, 0, &self.den)?;
            f.write_str(")")
        }
    }
}

impl fmt::Debug for RatQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_laurent(s: &str) -> Result<RatQ> {
    let bad = || Error::Parse(format!("malformed Laurent polynomial `{s}`"));
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(bad());
    }
    // split into signed terms at top-level +/- that do not follow '^'
    let mut terms = Vec::new();
    let mut cur = String::new();
    let mut prev: Option<char> = None;
    for ch in compact.chars() {
        if (ch == '+' || ch == '-') && !cur.is_empty() && prev != Some('^') {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
        prev = Some(ch);
    }
    terms.push(cur);
    let mut acc = RatQ::zero();
    for t in terms {
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.strip_prefix('+').unwrap_or(&t)),
        };
        let (coef, exp) = match body.find('q') {
            None => (body.parse::<BigInt>().map_err(|_| bad())?, 0i64),
            Some(pos) => {
                let cpart = &body[..pos];
                let coef = if cpart.is_empty() {
                    BigInt::one()
                } else {
                    cpart.parse::<BigInt>().map_err(|_| bad())?
                };
                let rest = &body[pos + 1..];
                let exp = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^').ok_or_else(bad)?.parse::<i64>().map_err(|_| bad())?
                };
                (coef, exp)
            }
        };
        let coef = if neg { -coef } else { coef };
        acc = &acc + &(&RatQ::q_pow(exp) * &RatQ::from_bigint(coef));
    }
    Ok(acc)
}

impl FromStr for RatQ {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('(') {
            if let Some((n, d)) = inner.split_once(")/(") {
                let d = d.strip_suffix(')').ok_or_else(|| Error::Parse(format!("malformed `{s}`")))?;
                return parse_laurent(n)?.checked_div(&parse_laurent(d)?);
            }
        }
        parse_laurent(s)
    }
}

impl Serialize for RatQ {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RatQ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Default for RatQ {
    fn default() -> Self {
        RatQ::zero()
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl<'a> $tr<&'a RatQ> for &'a RatQ {
            type Output = RatQ;
            fn $method(self, rhs: &'a RatQ) -> RatQ {
                self.$imp(rhs)
            }
        }
        impl $tr<RatQ> for RatQ {
            type Output = RatQ;
            fn $method(self, rhs: RatQ) -> RatQ {
                (&self).$imp(&rhs)
            }
        }
        impl<'a> $tr<&'a RatQ> for RatQ {
            type Output = RatQ;
            fn $method(self, rhs: &'a RatQ) -> RatQ {
                (&self).$imp(rhs)
            }
        }
    };
}

impl RatQ {
    fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }
    fn div_ref(&self, other: &Self) -> Self {
        self.checked_div(other).expect("division by zero in RatQ")
    }
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);
forward_binop!(Div, div, div_ref);

impl Neg for &RatQ {
    type Output = RatQ;
    fn neg(self) -> RatQ {
        self.neg_ref()
    }
}

impl Neg for RatQ {
    type Output = RatQ;
    fn neg(self) -> RatQ {
        self.neg_ref()
    }
}

impl std::iter::Sum for RatQ {
    fn sum<I: Iterator<Item = RatQ>>(iter: I) -> RatQ {
        iter.fold(RatQ::zero(), |a, b| &a + &b)
    }
}
