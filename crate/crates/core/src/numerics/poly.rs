use std::fmt;

use super::{GaussianRational, Rational};

/// Dense univariate polynomial in the term count `t` with Gaussian-rational coefficients.
///
/// `coeffs[i]` multiplies `t^i`. Trailing zeros are always trimmed, so the zero
/// polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct UniPolynomial {
    coeffs: Vec<GaussianRational>,
}

impl UniPolynomial {
    pub fn new(coeffs: Vec<GaussianRational>) -> Self {
        let mut p = UniPolynomial { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        UniPolynomial::default()
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `t`.
    pub fn variable() -> Self {
        Self::new(vec![GaussianRational::zero(), GaussianRational::one()])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(GaussianRational::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coefficient(&self) -> Option<&GaussianRational> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &UniPolynomial) -> UniPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = GaussianRational::zero();
        let coeffs = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
            .collect();
        UniPolynomial::new(coeffs)
    }

    pub fn sub(&self, other: &UniPolynomial) -> UniPolynomial {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> UniPolynomial {
        UniPolynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, k: &GaussianRational) -> UniPolynomial {
        UniPolynomial::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, other: &UniPolynomial) -> UniPolynomial {
        if self.is_zero() || other.is_zero() {
            return UniPolynomial::zero();
        }
        let mut out = vec![GaussianRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.coeffs.iter().enumerate() {
                out[i + j] += &(x * y);
            }
        }
        UniPolynomial::new(out)
    }

    pub fn pow(&self, e: u32) -> UniPolynomial {
        (0..e).fold(UniPolynomial::constant(GaussianRational::one()), |acc, _| acc.mul(self))
    }

    /// `P(t + c)`, by Horner's scheme over the polynomial ring.
    pub fn shift_compose(&self, c: &GaussianRational) -> UniPolynomial {
        let lin = UniPolynomial::new(vec![c.clone(), GaussianRational::one()]);
        self.coeffs
            .iter()
            .rev()
            .fold(UniPolynomial::zero(), |acc, k| acc.mul(&lin).add(&UniPolynomial::constant(k.clone())))
    }

    pub fn eval(&self, x: &GaussianRational) -> GaussianRational {
        self.coeffs.iter().rev().fold(GaussianRational::zero(), |acc, k| &(&acc * x) + k)
    }

    /// LaTeX rendering with `\frac` coefficients, lowest degree first.
    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (neg, body) = latex_coeff(c, i == 0);
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
            match i {
                0 => {}
                1 => out.push('t'),
                _ => out.push_str(&format!("t^{{{i}}}")),
            }
        }
        out
    }
}

fn latex_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", r.numer(), r.denom())
    }
}

/// Sign flag and magnitude text for one coefficient. A unit coefficient on a
/// non-constant term renders as the empty string.
fn latex_coeff(c: &GaussianRational, constant: bool) -> (bool, String) {
    if c.is_real() {
        let mag = c.re.abs();
        let body = if mag.is_one() && !constant { String::new() } else { latex_rational(&mag) };
        return (c.re.is_negative(), body);
    }
    let im_mag = c.im.abs();
    let im = if im_mag.is_one() { "i".to_string() } else { format!("{}i", latex_rational(&im_mag)) };
    if c.re.is_zero() {
        let neg = c.im.is_negative();
        return (neg, if constant { im } else { format!("{im}\\,") });
    }
    let sign = if c.im.is_negative() { "-" } else { "+" };
    let re = if c.re.is_negative() { format!("-{}", latex_rational(&c.re.abs())) } else { latex_rational(&c.re) };
    (false, format!("\\left({re}{sign}{im}\\right)"))
}

/// Text rendering `c0 + c1*t + c2*t^2 + …`; zero terms are omitted, a unit
/// coefficient is dropped, real negative coefficients fold into ` - `, and
/// genuinely complex coefficients are parenthesized.
impl fmt::Display for UniPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (neg, body) = if c.is_real() {
                (c.re.is_negative(), c.re.abs().to_string())
            } else if c.re.is_zero() {
                (c.im.is_negative(), c.to_string().trim_start_matches('-').to_string())
            } else {
                (false, format!("({c})"))
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let unit = body == "1";
            match i {
                0 => write!(f, "{body}")?,
                1 if unit => write!(f, "t")?,
                1 => write!(f, "{body}*t")?,
                _ if unit => write!(f, "t^{i}")?,
                _ => write!(f, "{body}*t^{i}")?,
            }
        }
        Ok(())
    }
}
