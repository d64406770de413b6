//! Scalar rings the engine is generic over.
//!
//! Everything above this module (polynomials, Clifford elements, gamma
//! matrices) is written against [`Scalar`]. The exact pipelines use
//! [`GaussRat`]; the numeric oracle instantiates the same code with
//! `Complex<f64>`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::{Complex, Complex32, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A commutative ring containing the Gaussian integers.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// The imaginary unit `i`.
    fn imag_unit() -> Self;

    /// The rational number `num / den` embedded in the ring.
    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_ratio(v, 1)
    }

    fn powi(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }

    fn add_assign_ref(&mut self, rhs: &Self) {
        *self = self.clone() + rhs.clone();
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self.clone() * rhs.clone()
    }

    /// Multiplicative inverse where the ring has one.
    fn try_recip(&self) -> Option<Self> {
        None
    }
}

/// A [`Scalar`] that is also a field.
pub trait FieldScalar: Scalar + Div<Output = Self> {
    fn recip(&self) -> Self {
        Self::one() / self.clone()
    }
}

/// Conversion to a double-precision complex number.
pub trait ToComplex64 {
    fn to_c64(&self) -> Complex64;
}

macro_rules! impl_float_complex {
    ($t:ty, $f:ty) => {
        impl Scalar for $t {
            fn imag_unit() -> Self {
                Complex::new(0.0, 1.0)
            }
            fn from_ratio(num: i64, den: i64) -> Self {
                Complex::new(num as $f / den as $f, 0.0)
            }
            fn add_assign_ref(&mut self, rhs: &Self) {
                *self += *rhs;
            }
            fn mul_ref(&self, rhs: &Self) -> Self {
                *self * *rhs
            }
            fn try_recip(&self) -> Option<Self> {
                (!self.is_zero()).then(|| self.inv())
            }
        }
        impl FieldScalar for $t {}
        impl ToComplex64 for $t {
            fn to_c64(&self) -> Complex64 {
                Complex64::new(self.re as f64, self.im as f64)
            }
        }
    };
}

impl_float_complex!(Complex64, f64);
impl_float_complex!(Complex32, f32);

/// Exact complex number with rational real and imaginary parts.
///
/// Both parts are kept in lowest terms with a positive denominator, so
/// structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussRat {
    re: BigRational,
    im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussRat::new(
            BigRational::from_integer(re.into()),
            BigRational::from_integer(im.into()),
        )
    }

    pub fn real(re: BigRational) -> Self {
        GaussRat::new(re, BigRational::zero())
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        GaussRat::real(BigRational::new(num.into(), den.into()))
    }

    pub fn i() -> Self {
        GaussRat::from_ints(0, 1)
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|^2`, always a nonnegative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero Gaussian rational");
        let d = self.norm_sqr();
        GaussRat::new(&self.re / &d, -&self.im / &d)
    }

    pub fn pow(&self, exp: i32) -> Self {
        if exp < 0 {
            return self.inv().pow(-exp);
        }
        let mut base = self.clone();
        let mut acc = GaussRat::one();
        let mut e = exp as u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    fn fmt_rat(r: &BigRational) -> String {
        if r.is_integer() {
            r.numer().to_string()
        } else {
            format!("{}/{}", r.numer(), r.denom())
        }
    }

    /// True when printing needs no surrounding parentheses in a product.
    pub fn is_atomic(&self) -> bool {
        (self.re.is_zero() || self.im.is_zero()) && !self.is_negative_real_or_imag()
    }

    fn is_negative_real_or_imag(&self) -> bool {
        if self.im.is_zero() {
            self.re.is_negative()
        } else if self.re.is_zero() {
            self.im.is_negative()
        } else {
            false
        }
    }
}

impl ToComplex64 for GaussRat {
    fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let re = &self.re;
        let im = &self.im;
        if im.is_zero() {
            return write!(f, "{}", Self::fmt_rat(re));
        }
        let imag = if im.is_one() {
            "i".to_string()
        } else if *im == -BigRational::one() {
            "-i".to_string()
        } else {
            format!("{}*i", Self::fmt_rat(im))
        };
        if re.is_zero() {
            return write!(f, "{}", imag);
        }
        if im.is_negative() {
            write!(f, "({}{})", Self::fmt_rat(re), imag)
        } else {
            write!(f, "({}+{})", Self::fmt_rat(re), imag)
        }
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid Gaussian rational literal `{0}`")]
pub struct ParseGaussRatError(String);

fn parse_rat(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).ok()?;
        let d = BigInt::from_str(d.trim()).ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        Some(BigRational::from_integer(BigInt::from_str(s).ok()?))
    }
}

impl FromStr for GaussRat {
    type Err = ParseGaussRatError;

    /// Parses the `Display` format: `3/4`, `-i`, `2*i`, `(1/2-3*i)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseGaussRatError(s.to_string());
        let t = s.trim();
        let t = t
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .unwrap_or(t);
        if !t.ends_with('i') {
            return parse_rat(t).map(GaussRat::real).ok_or_else(err);
        }
        // split at the last sign that is not the leading one and not inside a
        // rational's denominator
        let body = &t[..t.len() - 1];
        let split = body
            .char_indices()
            .filter(|&(k, c)| k > 0 && (c == '+' || c == '-'))
            .map(|(k, _)| k)
            .last();
        let (re_part, im_part) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im_part = im_part.trim_end_matches('*');
        let im = match im_part {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            other => parse_rat(other.trim_start_matches('+')).ok_or_else(err)?,
        };
        let re = parse_rat(re_part).ok_or_else(err)?;
        Ok(GaussRat::new(re, im))
    }
}

impl Serialize for GaussRat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GaussRat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Zero for GaussRat {
    fn zero() -> Self {
        GaussRat::new(BigRational::zero(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussRat {
    fn one() -> Self {
        GaussRat::new(BigRational::one(), BigRational::zero())
    }
}

impl<'a> Add<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: &GaussRat) -> GaussRat {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussRat::real(&self.re * &rhs.re);
        }
        GaussRat::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl<'a> Div<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &GaussRat) -> GaussRat {
        self * &rhs.inv()
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for GaussRat {
            type Output = GaussRat;
            fn $m(self, rhs: GaussRat) -> GaussRat {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-self.re, -self.im)
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-self.re.clone(), -self.im.clone())
    }
}

impl AddAssign<&GaussRat> for GaussRat {
    fn add_assign(&mut self, rhs: &GaussRat) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussRat> for GaussRat {
    fn sub_assign(&mut self, rhs: &GaussRat) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussRat> for GaussRat {
    fn mul_assign(&mut self, rhs: &GaussRat) {
        *self = &*self * rhs;
    }
}

impl Scalar for GaussRat {
    fn imag_unit() -> Self {
        GaussRat::i()
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        GaussRat::ratio(num, den)
    }
    fn powi(&self, exp: u32) -> Self {
        self.pow(exp as i32)
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn try_recip(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.inv())
    }
}

impl FieldScalar for GaussRat {
    fn recip(&self) -> Self {
        self.inv()
    }
}

impl From<i64> for GaussRat {
    fn from(v: i64) -> Self {
        GaussRat::from_ints(v, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_reduced_form() {
        let a = GaussRat::ratio(6, -8);
        assert_eq!(a.re().numer(), &BigInt::from(-3));
        assert_eq!(a.re().denom(), &BigInt::from(4));
        assert_eq!(a, GaussRat::ratio(-3, 4));
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = GaussRat::i();
        assert_eq!(&i * &i, -GaussRat::one());
        assert_eq!(i.inv(), -GaussRat::i());
    }

    #[test]
    fn division_is_exact() {
        let a = GaussRat::from_ints(1, 2);
        let b = GaussRat::from_ints(3, -1);
        let q = &a / &b;
        assert_eq!(&q * &b, a);
    }

    #[test]
    fn display_and_parse_round_trip() {
        for z in [
            GaussRat::ratio(3, 8),
            GaussRat::ratio(-15, 8),
            GaussRat::i(),
            -GaussRat::i(),
            GaussRat::from_ints(0, -2),
            GaussRat::new(BigRational::new(1.into(), 2.into()), BigRational::new((-3).into(), 4.into())),
            GaussRat::from_ints(-1, 1),
        ] {
            let s = z.to_string();
            assert_eq!(s.parse::<GaussRat>().unwrap(), z, "{s}");
        }
    }

    #[test]
    fn float_instances() {
        assert_eq!(Complex64::imag_unit() * Complex64::imag_unit(), Complex64::new(-1.0, 0.0));
        assert_eq!(Complex32::from_ratio(1, 4), Complex32::new(0.25, 0.0));
        assert_eq!(GaussRat::ratio(1, 4).to_c64(), Complex64::new(0.25, 0.0));
    }
}
