//! Scalar arithmetic abstraction: float complex numbers and exact
//! Gaussian rationals behind a single trait, so that jets and operator
//! pipelines can run in either mode.
//!
//! The exact mode exists because the worked low-order operator
//! coefficients (24, 1080, 120, ...) are integers once the gauge
//! parameter is a Gaussian rational, and the tests pin them exactly.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Field operations shared by both coefficient modes.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn i() -> Self;
    fn from_int(n: i64) -> Self;
    /// Real rational embed num/den.
    fn from_ratio(num: i64, den: i64) -> Self;
    fn conj(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// Lossy view used for reporting and tolerance checks.
    fn to_c64(&self) -> Complex64;

    fn from_complex_ratio(re: (i64, i64), im: (i64, i64)) -> Self {
        Self::from_ratio(re.0, re.1) + Self::i() * Self::from_ratio(im.0, im.1)
    }
    /// |x|^2 as a scalar (exact in rational mode).
    fn norm_sq(&self) -> Self {
        self.clone() * self.conj()
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn i() -> Self {
        Complex64::new(0.0, 1.0)
    }
    fn from_int(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
}

/// Complex number with exact rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq)]
pub struct GaussRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRational { re, im }
    }
    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
    /// Exact rational |x|^2.
    pub fn norm_sq_rat(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl fmt::Debug for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.im.is_positive() {
            write!(f, "{}+{}i", self.re, self.im)
        } else {
            write!(f, "{}{}i", self.re, self.im)
        }
    }
}

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl Add for GaussRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        GaussRational::new(self.re + o.re, self.im + o.im)
    }
}
impl Sub for GaussRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        GaussRational::new(self.re - o.re, self.im - o.im)
    }
}
impl Mul for GaussRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        GaussRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}
impl Div for GaussRational {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let n = o.norm_sq_rat();
        assert!(!n.is_zero(), "division by zero GaussRational");
        GaussRational::new(
            (&self.re * &o.re + &self.im * &o.im) / &n,
            (&self.im * &o.re - &self.re * &o.im) / &n,
        )
    }
}
impl Neg for GaussRational {
    type Output = Self;
    fn neg(self) -> Self {
        GaussRational::new(-self.re, -self.im)
    }
}

impl Scalar for GaussRational {
    fn zero() -> Self {
        GaussRational::new(BigRational::zero(), BigRational::zero())
    }
    fn one() -> Self {
        GaussRational::new(BigRational::one(), BigRational::zero())
    }
    fn i() -> Self {
        GaussRational::new(BigRational::zero(), BigRational::one())
    }
    fn from_int(n: i64) -> Self {
        GaussRational::new(rat(n, 1), BigRational::zero())
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        GaussRational::new(rat(num, den), BigRational::zero())
    }
    fn conj(&self) -> Self {
        GaussRational::new(self.re.clone(), -self.im.clone())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn to_c64(&self) -> Complex64 {
        fn f(r: &BigRational) -> f64 {
            let n = r.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
            let d = r.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
            n / d
        }
        Complex64::new(f(&self.re), f(&self.im))
    }
}
