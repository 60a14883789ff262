//! Exact arithmetic in ℚ[√2].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `p + q·√2` with rational `p`, `q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSqrt2 {
    p: BigRational,
    q: BigRational,
}

impl QSqrt2 {
    pub fn new(p: BigRational, q: BigRational) -> Self {
        QSqrt2 { p, q }
    }

    pub fn from_ints(p: i64, q: i64) -> Self {
        QSqrt2::new(BigRational::from_integer(p.into()), BigRational::from_integer(q.into()))
    }

    pub fn ratio(pn: i64, pd: i64, qn: i64, qd: i64) -> Self {
        QSqrt2::new(
            BigRational::new(pn.into(), pd.into()),
            BigRational::new(qn.into(), qd.into()),
        )
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0)
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0)
    }

    pub fn sqrt2() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.p
    }

    pub fn sqrt2_part(&self) -> &BigRational {
        &self.q
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    /// Field norm `p² − 2q²`; zero only for zero since √2 is irrational.
    pub fn norm(&self) -> BigRational {
        &self.p * &self.p - BigRational::from_integer(BigInt::from(2)) * &self.q * &self.q
    }

    pub fn conjugate(&self) -> Self {
        QSqrt2::new(self.p.clone(), -self.q.clone())
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(QSqrt2::new(&self.p / &n, -(&self.q / &n)))
    }

    /// Exact sign of the real number `p + q√2`.
    pub fn signum(&self) -> Ordering {
        let sp = self.p.cmp(&BigRational::zero());
        let sq = self.q.cmp(&BigRational::zero());
        match (sp, sq) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (a, b) if a == b => a,
            // Opposite signs: compare p² with 2q².
            (a, _) => match self.norm().cmp(&BigRational::zero()) {
                Ordering::Greater => a,
                Ordering::Less => a.reverse(),
                Ordering::Equal => unreachable!("nonzero element has nonzero norm"),
            },
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn to_f64(&self) -> f64 {
        self.p.to_f64().unwrap_or(f64::NAN) + self.q.to_f64().unwrap_or(f64::NAN) * std::f64::consts::SQRT_2
    }
}

impl Zero for QSqrt2 {
    fn zero() -> Self {
        QSqrt2::zero()
    }
    fn is_zero(&self) -> bool {
        QSqrt2::is_zero(self)
    }
}

impl One for QSqrt2 {
    fn one() -> Self {
        QSqrt2::one()
    }
}

impl Add for QSqrt2 {
    type Output = QSqrt2;
    fn add(self, rhs: QSqrt2) -> QSqrt2 {
        &self + &rhs
    }
}

impl<'a> Add<&'a QSqrt2> for &'a QSqrt2 {
    type Output = QSqrt2;
    fn add(self, rhs: &QSqrt2) -> QSqrt2 {
        QSqrt2::new(&self.p + &rhs.p, &self.q + &rhs.q)
    }
}

impl Sub for QSqrt2 {
    type Output = QSqrt2;
    fn sub(self, rhs: QSqrt2) -> QSqrt2 {
        &self - &rhs
    }
}

impl<'a> Sub<&'a QSqrt2> for &'a QSqrt2 {
    type Output = QSqrt2;
    fn sub(self, rhs: &QSqrt2) -> QSqrt2 {
        QSqrt2::new(&self.p - &rhs.p, &self.q - &rhs.q)
    }
}

impl Mul for QSqrt2 {
    type Output = QSqrt2;
    fn mul(self, rhs: QSqrt2) -> QSqrt2 {
        &self * &rhs
    }
}

impl<'a> Mul<&'a QSqrt2> for &'a QSqrt2 {
    type Output = QSqrt2;
    fn mul(self, rhs: &QSqrt2) -> QSqrt2 {
        let two = BigRational::from_integer(BigInt::from(2));
        QSqrt2::new(
            &self.p * &rhs.p + two * &self.q * &rhs.q,
            &self.p * &rhs.q + &self.q * &rhs.p,
        )
    }
}

impl Div for QSqrt2 {
    type Output = QSqrt2;
    /// Panics on division by zero, like the rational division it wraps.
    fn div(self, rhs: QSqrt2) -> QSqrt2 {
        &self * &rhs.inverse().expect("division by zero in Q[sqrt2]")
    }
}

impl Neg for QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2::new(-self.p, -self.q)
    }
}

impl Neg for &QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2::new(-self.p.clone(), -self.q.clone())
    }
}

fn fmt_ratio(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl fmt::Display for QSqrt2 {
    /// Always `p/q+r/s*sqrt2` (or `-r/s`), the ray-file component form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.q.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{}*sqrt2", fmt_ratio(&self.p), sign, fmt_ratio(&self.q.abs()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse {0:?} as an element of Q[sqrt2]")]
pub struct ParseQSqrt2Error(pub String);

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.strip_prefix('+').unwrap_or(s);
    if s.is_empty() {
        return None;
    }
    s.parse::<BigRational>().ok()
}

impl FromStr for QSqrt2 {
    type Err = ParseQSqrt2Error;

    /// Accepts `a`, `a/b`, `a/b*sqrt2`, `sqrt2`, `-sqrt2` and `a/b+c/d*sqrt2`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = || ParseQSqrt2Error(text.to_string());
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(body) = s.strip_suffix("sqrt2") else {
            return parse_rational(&s).map(|p| QSqrt2::new(p, BigRational::zero())).ok_or_else(err);
        };
        let body = body.strip_suffix('*').unwrap_or(body);
        let split = body
            .char_indices()
            .filter(|&(i, c)| i > 0 && (c == '+' || c == '-') && !body[..i].ends_with(['e', 'E']))
            .map(|(i, _)| i)
            .next_back();
        let (rat, coeff) = match split {
            Some(i) => (parse_rational(&body[..i]).ok_or_else(err)?, &body[i..]),
            None => (BigRational::zero(), body),
        };
        let q = match coeff {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            c => parse_rational(c).ok_or_else(err)?,
        };
        Ok(QSqrt2::new(rat, q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> QSqrt2 {
        s.parse().unwrap()
    }

    #[test]
    fn ring_identities() {
        let s = QSqrt2::sqrt2();
        assert_eq!(&s * &s, QSqrt2::from_ints(2, 0));
        let t = QSqrt2::from_ints(-1, 1); // tan 22.5°
        assert_eq!(t.inverse().unwrap(), QSqrt2::from_ints(1, 1));
        // tan²(22.5°) + 2 tan(22.5°) − 1 = 0
        let r = &(&t * &t) + &(&QSqrt2::from_ints(2, 0) * &t);
        assert_eq!(r - QSqrt2::one(), QSqrt2::zero());
    }

    #[test]
    fn exact_sign() {
        assert_eq!(QSqrt2::from_ints(-1, 1).signum(), Ordering::Greater);
        assert_eq!(QSqrt2::from_ints(1, -1).signum(), Ordering::Less);
        assert_eq!(QSqrt2::from_ints(-3, 2).signum(), Ordering::Less);
        assert_eq!(QSqrt2::from_ints(3, -2).signum(), Ordering::Greater);
        assert_eq!(QSqrt2::zero().signum(), Ordering::Equal);
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(q("1/2+3/4*sqrt2"), QSqrt2::ratio(1, 2, 3, 4));
        assert_eq!(q("-1+1*sqrt2"), QSqrt2::from_ints(-1, 1));
        assert_eq!(q("-1/1-1/1*sqrt2"), QSqrt2::from_ints(-1, -1));
        assert_eq!(q("sqrt2"), QSqrt2::sqrt2());
        assert_eq!(q("-sqrt2"), QSqrt2::from_ints(0, -1));
        assert_eq!(q("-3/2*sqrt2"), QSqrt2::ratio(0, 1, -3, 2));
        assert_eq!(q("7"), QSqrt2::from_ints(7, 0));
        assert_eq!(q(" 1 / 2 "), QSqrt2::ratio(1, 2, 0, 1));
        assert_eq!(QSqrt2::from_ints(-1, 1).to_string(), "-1/1+1/1*sqrt2");
        assert_eq!(QSqrt2::ratio(1, 2, -3, 4).to_string(), "1/2-3/4*sqrt2");
        assert!("x".parse::<QSqrt2>().is_err());
        assert!("1+*sqrt3".parse::<QSqrt2>().is_err());
    }
}
