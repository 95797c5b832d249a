use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::{Polynomial, Rational};
use crate::{Error, Result};

/// A quotient of polynomials held in canonical form: numerator and
/// denominator are coprime and the denominator is monic. The zero function is
/// `0 / 1`. Two rational functions are equal exactly when their canonical
/// forms are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = Polynomial::gcd(&num, &den);
        let (num, den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let lc = den.leading().expect("nonzero denominator").recip();
        RationalFunction {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }

    pub fn zero() -> Self {
        RationalFunction {
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_polynomial(Polynomial::one())
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_polynomial(Polynomial::constant(c))
    }

    /// `1 / p`
    pub fn reciprocal_of(p: Polynomial) -> Result<Self> {
        Self::new(Polynomial::one(), p)
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &RationalFunction) -> Result<Self> {
        Ok(self * &rhs.recip()?)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn mul_poly(&self, p: &Polynomial) -> Self {
        Self::canonical(&self.num * p, self.den.clone())
    }

    pub fn pow(&self, e: u32) -> Self {
        // coprime parts stay coprime under powers
        RationalFunction {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// Derivative in `u` by the quotient rule.
    pub fn derivative(&self) -> Self {
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::canonical(num, &self.den * &self.den)
    }

    pub fn eval(&self, u: &Rational) -> Result<Rational> {
        let d = self.den.eval(u);
        if d.is_zero() {
            return Err(Error::Pole(u.to_string()));
        }
        Ok(self.num.eval(u) / d)
    }

    /// Whether `u` is a root of the reduced denominator.
    pub fn has_pole_at(&self, u: &Rational) -> bool {
        self.den.eval(u).is_zero()
    }

    /// Taylor coefficients `c_0..=c_max` at `u = 0`.
    ///
    /// With `den = sum d_i u^i`, the coefficients obey
    /// `d_0 c_m = num_m - sum_{i>=1} d_i c_{m-i}`, which costs
    /// `O(max * deg den)` exact operations.
    pub fn series(&self, max: usize) -> Result<Vec<Rational>> {
        let d = self.den.coeffs();
        if d[0].is_zero() {
            return Err(Error::Pole("0".into()));
        }
        // Clear denominators so the inner loop runs on integers.
        let scale = Rational::from_integer(self.num.denominator_lcm())
            * Rational::from_integer(self.den.denominator_lcm());
        let num: Vec<_> = self
            .num
            .scale(&scale)
            .coeffs()
            .iter()
            .map(|c| c.to_integer())
            .collect();
        let den: Vec<_> = self
            .den
            .scale(&scale)
            .coeffs()
            .iter()
            .map(|c| c.to_integer())
            .collect();
        let d0 = Rational::from_integer(den[0].clone());
        let mut out: Vec<Rational> = Vec::with_capacity(max + 1);
        for m in 0..=max {
            let mut acc = num
                .get(m)
                .map(|c| Rational::from_integer(c.clone()))
                .unwrap_or_default();
            for (i, di) in den.iter().enumerate().skip(1).take(m) {
                if !di.is_zero() {
                    acc -= &out[m - i] * di;
                }
            }
            out.push(acc / &d0);
        }
        Ok(out)
    }
}

impl Default for RationalFunction {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RationalFunction::canonical(&self.num + &rhs.num, self.den.clone());
        }
        RationalFunction::canonical(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction::canonical(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        Self::from_polynomial(p)
    }
}
