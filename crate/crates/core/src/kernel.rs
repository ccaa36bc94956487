//! Exact arithmetic primitives: big integers, rationals, binomial
//! coefficients, dense integer polynomials and prime-field residues.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Integer = BigInt;
pub type Rational = BigRational;

/// C(n, k), zero outside `0 <= k <= n`.
///
/// Running product with an exact division at every step, so intermediates
/// never exceed `C(n, k) * k`.
pub fn binom(n: u64, k: i64) -> Integer {
    if k < 0 || k as u64 > n {
        return Integer::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = Integer::one();
    for i in 1..=k {
        acc *= n - k + i;
        acc /= i;
    }
    acc
}

/// C(n, k) for a possibly negative upper index; zero whenever `n < 0`.
pub fn binom_signed(n: i64, k: i64) -> Integer {
    if n < 0 {
        Integer::zero()
    } else {
        binom(n as u64, k)
    }
}

pub fn catalan(n: u64) -> Integer {
    binom(2 * n, n as i64) / (n + 1)
}

/// Integer power with `0^0 = 1`.
pub fn ipow(base: &Integer, exp: u64) -> Integer {
    num_traits::pow::pow(base.clone(), exp as usize)
}

pub fn to_rational(x: &Integer) -> Rational {
    Rational::from_integer(x.clone())
}

/// Renders a rational as `p` or `p/q`.
pub fn rational_to_string(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn rational_from_str(s: &str) -> Option<Rational> {
    match s.split_once('/') {
        None => s.parse::<Integer>().ok().map(Rational::from_integer),
        Some((n, d)) => {
            let n: Integer = n.parse().ok()?;
            let d: Integer = d.parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
    }
}

/// Dense integer polynomial, ascending powers. The zero polynomial has no
/// coefficients, and no other polynomial ends in a zero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Integer>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Integer>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Integer::one())
    }

    pub fn constant(c: Integer) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Poly::from_i64s(&[0, 1])
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Integer> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `x^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> Integer {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &Integer) -> Integer {
        self.coeffs
            .iter()
            .rev()
            .fold(Integer::zero(), |acc, c| acc * x + c)
    }

    /// Multiplies by `c * x^s`.
    pub fn scale_shift(&self, c: &Integer, s: usize) -> Poly {
        if c.is_zero() || self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Integer::zero(); s];
        coeffs.extend(self.coeffs.iter().map(|a| a * c));
        Poly::new(coeffs)
    }
}

pub fn poly_add(p: &Poly, q: &Poly) -> Poly {
    let len = p.coeffs.len().max(q.coeffs.len());
    Poly::new((0..len).map(|k| p.coeff(k) + q.coeff(k)).collect())
}

pub fn poly_mul(p: &Poly, q: &Poly) -> Poly {
    if p.is_zero() || q.is_zero() {
        return Poly::zero();
    }
    let mut out = vec![Integer::zero(); p.coeffs.len() + q.coeffs.len() - 1];
    for (i, a) in p.coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in q.coeffs.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    Poly::new(out)
}

pub fn poly_scale_shift(p: &Poly, c: &Integer, s: usize) -> Poly {
    p.scale_shift(c, s)
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        poly_add(self, rhs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        poly_add(self, &-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        poly_mul(self, rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let show_mag = k == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        decimal::vec::serialize(&self.coeffs, s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        decimal::vec::deserialize(d).map(Poly::new)
    }
}

/// Canonical residue of `x` in `[0, p)`.
pub fn mod_p(x: &Integer, p: u64) -> u64 {
    x.mod_floor(&Integer::from(p))
        .to_u64()
        .expect("residue below p fits in u64")
}

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn modp_inverse(x: u64, p: u64) -> Result<u64> {
    let (g, inv, _) = egcd(x as i128 % p as i128, p as i128);
    if g != 1 {
        return Err(Error::NotInvertibleMod { value: x, p });
    }
    Ok(inv.rem_euclid(p as i128) as u64)
}

fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = egcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Trial division; intended for the small moduli used here.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn require_prime(p: u64) -> Result<()> {
    // mul_mod stays in u128 for any u64, but keep moduli where u64 sums cannot overflow
    if is_prime(p) && p < (1 << 62) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Serde adapters that write integers as decimal strings.
pub mod decimal {
    use super::{rational_from_str, rational_to_string, Integer, Rational};
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Integer, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Integer, D::Error> {
        let s = String::deserialize(d)?;
        s.parse()
            .map_err(|_| D::Error::custom(format!("not a decimal integer: {s:?}")))
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(xs: &[Integer], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(xs.len()))?;
            for x in xs {
                seq.serialize_element(&x.to_string())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Integer>, D::Error> {
            let raw = Vec::<String>::deserialize(d)?;
            raw.iter()
                .map(|s| {
                    s.parse()
                        .map_err(|_| D::Error::custom(format!("not a decimal integer: {s:?}")))
                })
                .collect()
        }
    }

    pub mod rational {
        use super::*;

        pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
            s.serialize_str(&rational_to_string(x))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
            let s = String::deserialize(d)?;
            rational_from_str(&s).ok_or_else(|| D::Error::custom(format!("not a rational: {s:?}")))
        }
    }

    pub mod rational_opt {
        use super::*;

        pub fn serialize<S: Serializer>(x: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match x {
                Some(x) => s.serialize_some(&rational_to_string(x)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            match Option::<String>::deserialize(d)? {
                None => Ok(None),
                Some(s) => rational_from_str(&s)
                    .map(Some)
                    .ok_or_else(|| D::Error::custom(format!("not a rational: {s:?}"))),
            }
        }
    }

    pub mod rational_vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(xs.len()))?;
            for x in xs {
                seq.serialize_element(&rational_to_string(x))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let raw = Vec::<String>::deserialize(d)?;
            raw.iter()
                .map(|s| {
                    rational_from_str(s)
                        .ok_or_else(|| D::Error::custom(format!("not a rational: {s:?}")))
                })
                .collect()
        }
    }
}
