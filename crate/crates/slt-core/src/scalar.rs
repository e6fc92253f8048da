//! Exact scalars: rationals and Gaussian rationals with conjugation.
//!
//! Every scalar is stored as `re + im·i` with arbitrary-precision rational
//! parts. The plain rationals are exactly the `im == 0` slice and all field
//! operations preserve it, so a single representation serves both fields.
//! There is no rounding anywhere: the entire toolkit decides ranks and
//! equalities exactly.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// The scalar field a scenario works over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Field {
    /// Rational numbers Q.
    #[serde(rename = "Q")]
    Rational,
    /// Gaussian rationals Q(i).
    #[serde(rename = "Qi")]
    Gaussian,
}

impl std::str::FromStr for Field {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Q" | "q" => Ok(Field::Rational),
            "Qi" | "qi" | "QI" => Ok(Field::Gaussian),
            other => Err(Error::invalid(format!(
                "unknown field `{other}` (expected Q or Qi)"
            ))),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Gaussian => write!(f, "Qi"),
        }
    }
}

/// An exact field element `re + im·i`.
///
/// Both parts are fully reduced rationals with positive denominator
/// (maintained by `num_rational`). Conjugation negates the imaginary part;
/// `conj(x)·x` is the non-negative rational `|x|²`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    re: BigRational,
    im: BigRational,
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar {
            re: BigRational::from_integer(BigInt::from(n)),
            im: BigRational::zero(),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    /// Gaussian integer `a + b·i`.
    pub fn gaussian(a: i64, b: i64) -> Self {
        Scalar {
            re: BigRational::from_integer(BigInt::from(a)),
            im: BigRational::from_integer(BigInt::from(b)),
        }
    }

    pub fn zero() -> Self {
        Scalar {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        Scalar {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Scalar {
        Scalar {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// `conj(x)·x = re² + im²`, a non-negative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "inverse of zero scalar");
        let n = self.norm_sqr();
        Scalar {
            re: &self.re / &n,
            im: -&self.im / &n,
        }
    }

    /// Parses a rational literal `±p/q` (the `/q` may be omitted).
    pub fn parse_rational(s: &str) -> Result<Scalar> {
        let re = parse_big_rational(s)?;
        Ok(Scalar {
            re,
            im: BigRational::zero(),
        })
    }

    /// Renders the real part as `p/q` (or `p` when the denominator is 1).
    /// Only meaningful for real scalars; complex values serialize as
    /// `{"re": ..., "im": ...}` objects instead.
    pub fn rational_literal(&self) -> String {
        self.re.to_string()
    }

    pub fn im_literal(&self) -> String {
        self.im.to_string()
    }

    /// Total order used for canonical layouts (lexicographic on the real
    /// then imaginary part). Q(i) has no field order; this is purely a
    /// deterministic sorting key.
    pub fn cmp_lex(&self, other: &Scalar) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }
}

fn parse_big_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::invalid(format!("bad rational literal `{s}`")))?;
    let d: BigInt = match den {
        Some(d) => d
            .parse()
            .map_err(|_| Error::invalid(format!("bad rational literal `{s}`")))?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(Error::invalid(format!("zero denominator in `{s}`")));
    }
    if d.is_negative() {
        return Err(Error::invalid(format!(
            "denominator must be positive in `{s}`"
        )));
    }
    Ok(BigRational::new(n, d))
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}{}i", self.re, self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

// Debug delegates to Display; raw `Ratio { numer: ... }` dumps are unreadable.
impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Add<&Scalar> for Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar {
            re: self.re + &rhs.re,
            im: self.im + &rhs.im,
        }
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        Scalar {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Sub<&Scalar> for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar {
            re: self.re - &rhs.re,
            im: self.im - &rhs.im,
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl Div for Scalar {
    type Output = Scalar;
    #[allow(clippy::suspicious_arithmetic_impl)] // division is multiplication by the inverse
    fn div(self, rhs: Scalar) -> Scalar {
        &self * &rhs.inv()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render_round_trip() {
        for lit in ["0", "1", "-3", "2/3", "-7/5", "10/4"] {
            let s = Scalar::parse_rational(lit).unwrap();
            let back = Scalar::parse_rational(&s.rational_literal()).unwrap();
            assert_eq!(s, back);
        }
        // reduction: 10/4 normalizes to 5/2
        assert_eq!(
            Scalar::parse_rational("10/4").unwrap().rational_literal(),
            "5/2"
        );
    }

    #[test]
    fn parse_rejects_bad_literals() {
        assert!(Scalar::parse_rational("1/0").is_err());
        assert!(Scalar::parse_rational("x").is_err());
        assert!(Scalar::parse_rational("1/-2").is_err());
    }

    #[test]
    fn conjugation_involution_and_norm() {
        let x = Scalar::gaussian(2, -3);
        assert_eq!(x.conj().conj(), x);
        let n = &x.conj() * &x;
        assert!(n.is_real());
        assert!(!n.re().is_negative());
        assert_eq!(n.re(), &x.norm_sqr());
    }

    #[test]
    fn gaussian_field_arithmetic() {
        let i = Scalar::gaussian(0, 1);
        assert_eq!(&i * &i, Scalar::from_int(-1));
        let x = Scalar::gaussian(1, 2);
        let y = x.clone() * x.clone().inv();
        assert!(y.is_one());
    }

    #[test]
    fn rationals_closed_under_operations() {
        let a = Scalar::from_ratio(3, 4);
        let b = Scalar::from_ratio(-5, 6);
        for v in [
            a.clone() + &b,
            a.clone() - &b,
            &a * &b,
            a.clone() / b.clone(),
        ] {
            assert!(v.is_real());
        }
    }
}
