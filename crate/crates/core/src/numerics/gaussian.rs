use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use serde::de;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Rational;
use crate::error::{Error, Result};

/// Exact complex number `re + im·i` with rational parts.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussianRational { re, im: Rational::zero() }
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self::real(Rational::from_integer(n))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::real(Rational::one())
    }

    pub fn i() -> Self {
        GaussianRational { re: Rational::zero(), im: Rational::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -&self.im }
    }

    /// `re² + im²`.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InvalidScalar("division by zero".into()));
        }
        if self.is_real() {
            return Ok(Self::real(self.re.recip()?));
        }
        let n = self.norm_sqr();
        Ok(GaussianRational { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn checked_div(&self, rhs: &GaussianRational) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::InvalidScalar("division by zero".into()));
        }
        if rhs.is_real() {
            return Ok(self.div_real(&rhs.re));
        }
        Ok(self * &rhs.inv()?)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        GaussianRational { re: &self.re * k, im: &self.im * k }
    }

    /// Panics if `k` is zero.
    pub fn div_real(&self, k: &Rational) -> Self {
        GaussianRational { re: &self.re / k, im: &self.im / k }
    }

    /// `self^e` by repeated squaring; `x^0 = 1` for every `x`, including zero.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn is_canonical(&self) -> bool {
        self.re.is_canonical() && self.im.is_canonical()
    }
}

/// Arithmetic selector mirroring the operator impls, for table-driven callers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
}

/// Applies `op` to `x` and `y`. `Neg` ignores `y`.
pub fn gaussian_arith(op: ArithOp, x: &GaussianRational, y: &GaussianRational) -> Result<GaussianRational> {
    Ok(match op {
        ArithOp::Add => x + y,
        ArithOp::Sub => x - y,
        ArithOp::Mul => x * y,
        ArithOp::Div => x.checked_div(y)?,
        ArithOp::Neg => -x,
    })
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::real(Rational::from(n))
    }
}

impl From<Rational> for GaussianRational {
    fn from(r: Rational) -> Self {
        Self::real(r)
    }
}

/// Renders `re`, `im i`, `re+im i` or `re-im i`, dropping a unit imaginary coefficient
/// (`i`, `-i`, `1+i`).
impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        let mag = self.im.abs();
        let body = if mag.is_one() { String::new() } else { mag.to_string() };
        if self.re.is_zero() {
            let sign = if self.im.is_negative() { "-" } else { "" };
            write!(f, "{sign}{body}i")
        } else {
            let sign = if self.im.is_negative() { '-' } else { '+' };
            write!(f, "{}{sign}{body}i", self.re)
        }
    }
}

/// JSON shape `{"re": "p/q", "im": "p/q"}` with canonical rational strings.
impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("GaussianRational", 2)?;
        st.serialize_field("re", &self.re.to_string())?;
        st.serialize_field("im", &self.im.to_string())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Parts {
            re: String,
            im: String,
        }
        let parts = Parts::deserialize(de)?;
        let re = parts.re.parse::<Rational>().map_err(de::Error::custom)?;
        let im = parts.im.parse::<Rational>().map_err(de::Error::custom)?;
        Ok(GaussianRational { re, im })
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        // Real operands dominate the large-exponent workloads; skip the cross terms.
        match (self.is_real(), rhs.is_real()) {
            (true, true) => GaussianRational::real(&self.re * &rhs.re),
            (true, false) => rhs.scale(&self.re),
            (false, true) => self.scale(&rhs.re),
            (false, false) => GaussianRational {
                re: &self.re * &rhs.re - &self.im * &rhs.im,
                im: &self.re * &rhs.im + &self.im * &rhs.re,
            },
        }
    }
}

/// Panics on a zero divisor; see [`GaussianRational::checked_div`].
impl Div<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: &GaussianRational) -> GaussianRational {
        self.checked_div(rhs).expect("division by zero")
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: &GaussianRational) -> GaussianRational {
                (&self).$method(rhs)
            }
        }
        impl $tr<GaussianRational> for &GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                self.$method(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -self.re, im: -self.im }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -&self.re, im: -&self.im }
    }
}

impl std::iter::Sum for GaussianRational {
    fn sum<I: Iterator<Item = GaussianRational>>(iter: I) -> Self {
        iter.fold(GaussianRational::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn c(re: i64, im: i64) -> GaussianRational {
        GaussianRational::new(Rational::from(re), Rational::from(im))
    }

    #[test]
    fn conjugate_product_is_real() {
        assert_eq!(c(1, 1) * c(1, -1), c(2, 0));
    }

    #[test]
    fn division_by_zero_is_invalid_scalar() {
        let err = gaussian_arith(ArithOp::Div, &c(1, 0), &c(0, 0)).unwrap_err();
        assert_eq!(err.code(), "InvalidScalar");
    }

    #[test]
    fn arith_table() {
        let half = GaussianRational::real(q(1, 2));
        let third = GaussianRational::real(q(1, 3));
        assert_eq!(gaussian_arith(ArithOp::Add, &half, &third).unwrap(), GaussianRational::real(q(5, 6)));
        assert_eq!(gaussian_arith(ArithOp::Neg, &c(1, -2), &c(0, 0)).unwrap(), c(-1, 2));
        assert_eq!(gaussian_arith(ArithOp::Div, &c(2, 0), &c(1, 1)).unwrap(), c(1, -1));
    }

    #[test]
    fn powers() {
        assert_eq!(c(1, 1).pow(2), c(0, 2));
        assert_eq!(c(0, 0).pow(0), c(1, 0));
        assert_eq!(c(7, -3).pow(0), c(1, 0));
        assert_eq!(GaussianRational::real(q(3, 2)).pow(3), GaussianRational::real(q(27, 8)));
        assert_eq!(GaussianRational::i().pow(4), c(1, 0));
    }

    #[test]
    fn renders_canonical_text() {
        assert_eq!(c(0, 0).to_string(), "0");
        assert_eq!(c(-2, 0).to_string(), "-2");
        assert_eq!(c(0, 1).to_string(), "i");
        assert_eq!(c(0, -1).to_string(), "-i");
        assert_eq!(c(-1, 2).to_string(), "-1+2i");
        assert_eq!(c(1, -1).to_string(), "1-i");
        assert_eq!(GaussianRational::new(q(3, 2), q(5, 7)).to_string(), "3/2+5/7i");
        assert_eq!(GaussianRational::new(q(0, 1), q(-5, 7)).to_string(), "-5/7i");
    }

    #[test]
    fn json_shape() {
        let x = GaussianRational::new(q(3, 2), q(-5, 7));
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, r#"{"re":"3/2","im":"-5/7"}"#);
        assert_eq!(serde_json::from_str::<GaussianRational>(&json).unwrap(), x);
        assert!(serde_json::from_str::<GaussianRational>(r#"{"re":"1/0","im":"0"}"#).is_err());
    }
}
