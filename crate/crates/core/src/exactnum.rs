//! Exact big-integer, rational and single-radical surd arithmetic.
//!
//! Every comparison here is decided symbolically. A [`SurdExpr`] stands for
//! `(p + q·√n) / r`; comparing it against a rational isolates the radical and
//! squares only after the signs of both sides are known.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use num_rational::BigRational as Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("negative radicand {0}")]
    NegativeRadicand(BigInt),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse exact number from {0:?}")]
    Parse(String),
}

/// Integer square root: returns `(s, exact)` with `s² ≤ n < (s+1)²`.
pub fn isqrt(n: &BigInt) -> Result<(BigInt, bool), ExactError> {
    if n.is_negative() {
        return Err(ExactError::NegativeRadicand(n.clone()));
    }
    let s = n.sqrt();
    let exact = &s * &s == *n;
    Ok((s, exact))
}

/// The exact number `(p + q·√n) / r` with `r > 0`, `n ≥ 0`.
///
/// Construction normalizes: a perfect-square radicand (or a zero coefficient
/// on the radical) is folded into `p`, leaving `q = n = 0`, and the common
/// factor of `p`, `q`, `r` is divided out. The radicand is never reduced to
/// its squarefree part.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SurdExpr {
    p: BigInt,
    q: BigInt,
    n: BigInt,
    r: BigInt,
}

impl SurdExpr {
    pub fn new(p: BigInt, q: BigInt, n: BigInt, r: BigInt) -> Result<Self, ExactError> {
        if r.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        let (s, exact) = isqrt(&n)?;
        let (mut p, mut q, mut n, mut r) = (p, q, n, r);
        if r.is_negative() {
            p = -p;
            q = -q;
            r = -r;
        }
        if q.is_zero() || exact {
            p += &q * &s;
            q = BigInt::zero();
            n = BigInt::zero();
        }
        let g = p.gcd(&q).gcd(&r);
        if !g.is_one() {
            p /= &g;
            q /= &g;
            r /= &g;
        }
        Ok(SurdExpr { p, q, n, r })
    }

    pub fn from_parts(p: i64, q: i64, n: i64, r: i64) -> Result<Self, ExactError> {
        Self::new(p.into(), q.into(), n.into(), r.into())
    }

    pub fn from_rational(x: &Rational) -> Self {
        // Ratio keeps a positive reduced denominator.
        SurdExpr {
            p: x.numer().clone(),
            q: BigInt::zero(),
            n: BigInt::zero(),
            r: x.denom().clone(),
        }
    }

    pub fn from_integer(x: BigInt) -> Self {
        Self::from_rational(&Rational::from_integer(x))
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn n(&self) -> &BigInt {
        &self.n
    }

    pub fn r(&self) -> &BigInt {
        &self.r
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.is_rational()
            .then(|| Rational::new(self.p.clone(), self.r.clone()))
    }

    pub fn neg(&self) -> Self {
        SurdExpr {
            p: -&self.p,
            q: -&self.q,
            n: self.n.clone(),
            r: self.r.clone(),
        }
    }

    pub fn cmp_rational(&self, x: &Rational) -> Ordering {
        surd_cmp(self, x)
    }

    pub fn cmp_integer(&self, m: &BigInt) -> Ordering {
        surd_cmp(self, &Rational::from_integer(m.clone()))
    }

    /// Equality of values rather than of representations, so
    /// `(1 + sqrt(512))/2` equals `(1 + 16*sqrt(2))/2`.
    ///
    /// Two normalized surds agree exactly when their rational parts agree
    /// and their radical parts have the same sign and the same square.
    pub fn value_eq(&self, other: &SurdExpr) -> bool {
        if self.is_rational() || other.is_rational() {
            return self.as_rational().is_some() && self.as_rational() == other.as_rational();
        }
        let radical_sq = |e: &SurdExpr| Rational::new(&e.q * &e.q * &e.n, &e.r * &e.r);
        Rational::new(self.p.clone(), self.r.clone()) == Rational::new(other.p.clone(), other.r.clone())
            && self.q.sign() == other.q.sign()
            && radical_sq(self) == radical_sq(other)
    }

    pub fn floor(&self) -> BigInt {
        surd_floor(self)
    }

    pub fn ceil(&self) -> BigInt {
        -surd_floor(&self.neg())
    }

    pub fn strict_sup_int(&self) -> BigInt {
        strict_sup_int(self)
    }
}

impl fmt::Display for SurdExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", Rational::new(self.p.clone(), self.r.clone()));
        }
        let sign = if self.q.is_negative() { '-' } else { '+' };
        let q = self.q.abs();
        let radical = if q.is_one() {
            format!("sqrt({})", self.n)
        } else {
            format!("{}*sqrt({})", q, self.n)
        };
        if self.r.is_one() {
            write!(f, "{} {} {}", self.p, sign, radical)
        } else {
            write!(f, "({} {} {})/{}", self.p, sign, radical, self.r)
        }
    }
}

/// Sign of `a + b·√n` for `n ≥ 0`.
fn sign_of_linear_surd(a: &BigInt, b: &BigInt, n: &BigInt) -> Ordering {
    let zero = BigInt::zero();
    if b.is_zero() || n.is_zero() {
        return a.cmp(&zero);
    }
    let sa = a.cmp(&zero);
    let sb = b.cmp(&zero);
    if sa == sb || sa == Ordering::Equal {
        return sb;
    }
    // Opposite signs: the side with the larger square wins.
    let lhs = a * a;
    let rhs = b * b * n;
    match lhs.cmp(&rhs) {
        Ordering::Equal => Ordering::Equal,
        Ordering::Greater => sa,
        Ordering::Less => sb,
    }
}

/// Exact ordering of `e` against the rational `x`.
pub fn surd_cmp(e: &SurdExpr, x: &Rational) -> Ordering {
    // (p + q√n)/r - a/b has the sign of (b·p - a·r) + (b·q)√n since r, b > 0.
    let a = x.numer();
    let b = x.denom();
    let lin = b * &e.p - a * &e.r;
    let rad = b * &e.q;
    sign_of_linear_surd(&lin, &rad, &e.n)
}

/// Greatest integer `m` with `m ≤ e`.
pub fn surd_floor(e: &SurdExpr) -> BigInt {
    let radical_floor = if e.q.is_zero() {
        BigInt::zero()
    } else {
        let (s, exact) = isqrt(&(&e.q * &e.q * &e.n)).expect("normalized radicand");
        if e.q.is_negative() {
            if exact {
                -s
            } else {
                -s - 1
            }
        } else {
            s
        }
    };
    let m = (&e.p + radical_floor).div_floor(&e.r);
    debug_assert_ne!(e.cmp_integer(&m), Ordering::Less);
    debug_assert_eq!(e.cmp_integer(&(&m + 1)), Ordering::Less);
    m
}

/// Greatest integer strictly below `e`.
pub fn strict_sup_int(e: &SurdExpr) -> BigInt {
    let m = surd_floor(e);
    if e.cmp_integer(&m) == Ordering::Equal {
        m - 1
    } else {
        m
    }
}

/// Renders a rational as `p/q`, or `p` when the denominator is one.
pub fn fmt_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let bad = || ExactError::Parse(s.to_string());
    match s.split_once('/') {
        None => Ok(Rational::from_integer(s.trim().parse().map_err(|_| bad())?)),
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(ExactError::ZeroDenominator);
            }
            Ok(Rational::new(n, d))
        }
    }
}

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Serde adapters: big integers and rationals travel as decimal strings.
pub mod serde_exact {
    use super::*;

    pub mod bigint {
        use super::*;

        pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
            s.serialize_str(&v.to_string())
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
            let s = String::deserialize(d)?;
            s.parse().map_err(serde::de::Error::custom)
        }
    }

    pub mod opt_bigint {
        use super::*;

        pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(v) => s.serialize_some(&v.to_string()),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|s| s.parse().map_err(serde::de::Error::custom))
                .transpose()
        }
    }

    pub mod bigint_vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(|x| x.to_string()))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|s| s.parse().map_err(serde::de::Error::custom))
                .collect()
        }
    }

    pub mod rational {
        use super::*;

        pub fn serialize<S: Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
            s.serialize_str(&fmt_rational(v))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
            let s = String::deserialize(d)?;
            parse_rational(&s).map_err(serde::de::Error::custom)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct SurdRepr {
    p: String,
    q: String,
    n: String,
    r: String,
}

impl Serialize for SurdExpr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SurdRepr {
            p: self.p.to_string(),
            q: self.q.to_string(),
            n: self.n.to_string(),
            r: self.r.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SurdExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = SurdRepr::deserialize(d)?;
        let parse = |s: &str| s.parse::<BigInt>().map_err(serde::de::Error::custom);
        SurdExpr::new(parse(&repr.p)?, parse(&repr.q)?, parse(&repr.n)?, parse(&repr.r)?)
            .map_err(serde::de::Error::custom)
    }
}
