use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Polynomial, Rational, RationalFunction};

/// The principal part `sum_{k=1}^{K} a_k / (u - pole)^k` of a rational
/// function at a pole. `coefficients[k - 1]` holds `a_k`; the last entry is
/// nonzero so `order()` is the true pole order. An empty coefficient list
/// means the function is regular at `pole`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularPart {
    pub pole: Rational,
    pub coefficients: Vec<Rational>,
}

impl SingularPart {
    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `a_K`, the coefficient of the most singular term.
    pub fn leading(&self) -> Option<&Rational> {
        self.coefficients.last()
    }

    /// The singular part as a rational function of `u`.
    pub fn to_function(&self) -> RationalFunction {
        let k = self.order();
        if k == 0 {
            return RationalFunction::zero();
        }
        // sum a_j (u-p)^{K-j} / (u-p)^K
        let lin = Polynomial::linear(&self.pole);
        let mut num = Polynomial::zero();
        let mut power = Polynomial::one();
        for a in self.coefficients.iter().rev() {
            num = &num + &power.scale(a);
            power = &power * &lin;
        }
        RationalFunction::new(num, lin.pow(k as u32)).expect("nonzero denominator")
    }

    /// Taylor coefficient of `u^m` at the origin of the singular part.
    pub fn series_coefficient(&self, m: usize) -> Rational {
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(i, a)| a * pochhammer_series_coefficient(i + 1, &self.pole, m))
            .sum()
    }
}

/// Exact singular part of `f` at the rational point `pole`.
///
/// With `K` the multiplicity of `pole` in the reduced denominator,
/// `h = (u - pole)^K f` is regular at `pole` and `a_{K-i} = h^{(i)}(pole) / i!`.
/// Returns an empty part when `pole` is not a root of the denominator.
pub fn singular_part_at(f: &RationalFunction, pole: &Rational) -> SingularPart {
    let (order, cofactor) = f.denominator().root_multiplicity(pole);
    let mut coefficients = vec![Rational::zero(); order];
    if order == 0 {
        return SingularPart {
            pole: pole.clone(),
            coefficients,
        };
    }
    let mut h = RationalFunction::new(f.numerator().clone(), cofactor)
        .expect("cofactor of a nonzero denominator is nonzero");
    let mut factorial = BigInt::one();
    for i in 0..order {
        if i > 0 {
            factorial *= i;
            h = h.derivative();
        }
        let value = h.eval(pole).expect("cofactor does not vanish at the pole");
        coefficients[order - 1 - i] = value / Rational::from_integer(factorial.clone());
    }
    SingularPart {
        pole: pole.clone(),
        coefficients,
    }
}

/// `f` minus its singular parts at each listed pole.
pub fn subtract_singular_parts(f: &RationalFunction, parts: &[SingularPart]) -> RationalFunction {
    parts
        .iter()
        .fold(f.clone(), |acc, sp| &acc - &sp.to_function())
}

/// Rising factorial `(k)_m = k (k+1) ... (k+m-1)`, with `(k)_0 = 1`.
pub fn rising_factorial(k: usize, m: usize) -> BigInt {
    (k..k + m).fold(BigInt::one(), |acc, x| acc * x)
}

/// `(k)_m / m!`, which is the binomial `C(k+m-1, m)` and therefore an integer.
pub fn pochhammer_ratio(k: usize, m: usize) -> BigInt {
    if k == 0 {
        return if m == 0 {
            BigInt::one()
        } else {
            BigInt::zero()
        };
    }
    // C(k+m-1, m) built incrementally stays integral at every step
    let mut acc = BigInt::one();
    for i in 1..=m {
        acc = acc * (k + i - 1) / i;
    }
    acc
}

/// Coefficient of `u^m` in the Taylor expansion at 0 of `(u - pole)^{-k}`:
/// `(-1)^k pole^{-k-m} (k)_m / m!`. For `pole = 1` this is `(-1)^k (k)_m/m!`;
/// for `pole = 1/q` it is `q^k (-1)^k (k)_m q^m / m!`.
///
/// Panics if `pole` is zero.
pub fn pochhammer_series_coefficient(k: usize, pole: &Rational, m: usize) -> Rational {
    assert!(
        !pole.is_zero(),
        "pole at the origin has no Taylor expansion"
    );
    let inv = pole.recip();
    let mut c = Rational::from_integer(pochhammer_ratio(k, m)) * num_traits::pow(inv, k + m);
    if k % 2 == 1 {
        c = -c;
    }
    c
}
