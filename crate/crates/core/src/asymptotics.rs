//! Partial sums of Taylor coefficients against the main terms predicted by
//! their singular parts.
//!
//! If `f = sum c_m u^m` is rational with its only poles in the closed unit
//! disc at `1/q` and on the unit circle, subtracting the singular parts leaves
//! a function regular past `|u| = 1`. Each `(u - p)^{-k}` expands with
//! Pochhammer coefficients, so `sum_{m<=l} c_m` is dominated by
//!
//! ```text
//! (-q)^K a_K / ((q - 1) (K - 1)!) * q^{l+1} l^{K-1}
//! ```
//!
//! where `a_K` is the leading singular coefficient at `1/q`. Everything in
//! this module is exact; `f64` only appears in the `*_f64` accessors.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::ratfunc::{
    pochhammer_ratio, singular_part_at, Rational, RationalFunction, SingularPart,
};
use crate::zeta::{BouquetParams, GeneratingFunctions};
use crate::{Error, Result};

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn factorial(n: usize) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

fn int(v: impl Into<BigInt>) -> Rational {
    Rational::from_integer(v.into())
}

/// `(k)_m / m!`, times `q^m` when `weighted`.
pub fn pochhammer_term(k: usize, m: usize, q: &Rational, weighted: bool) -> Rational {
    let base = int(pochhammer_ratio(k, m));
    if weighted {
        base * num_traits::pow(q.clone(), m)
    } else {
        base
    }
}

fn check_pochhammer_args(k: usize, q: &Rational) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "Pochhammer order must be >= 1".into(),
        ));
    }
    if q <= &Rational::one() {
        return Err(Error::InvalidArgument(format!("need q > 1, got {q}")));
    }
    Ok(())
}

/// `sum_{m=0}^{l} (k)_m / m!`, or with weights `q^m`.
pub fn pochhammer_sum(k: usize, l: usize, q: &Rational, weighted: bool) -> Result<Rational> {
    check_pochhammer_args(k, q)?;
    Ok((0..=l).map(|m| pochhammer_term(k, m, q, weighted)).sum())
}

/// Leading-order growth of [`pochhammer_sum`]: `l^k / k!` unweighted, and
/// `q^{l+1} l^{k-1} / ((q-1) (k-1)!)` weighted. Exact, since `q` is rational.
pub fn pochhammer_main_term(k: usize, l: usize, q: &Rational, weighted: bool) -> Result<Rational> {
    check_pochhammer_args(k, q)?;
    let l_big = BigInt::from(l);
    Ok(if weighted {
        num_traits::pow(q.clone(), l + 1) * int(num_traits::pow(l_big, k - 1))
            / ((q - Rational::one()) * int(factorial(k - 1)))
    } else {
        Rational::new(num_traits::pow(l_big, k), factorial(k))
    })
}

/// [`pochhammer_main_term`] as a float.
pub fn pochhammer_asymptotic(k: usize, l: usize, q: &Rational, weighted: bool) -> Result<f64> {
    pochhammer_main_term(k, l, q, weighted).map(|x| to_f64(&x))
}

/// An exact partial sum next to its predicted main term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialSumPrediction {
    pub l: usize,
    pub exact_value: Rational,
    pub main_term: Rational,
}

impl PartialSumPrediction {
    /// `exact / main`, or `None` when the main term is zero.
    pub fn ratio(&self) -> Option<Rational> {
        (!self.main_term.is_zero()).then(|| &self.exact_value / &self.main_term)
    }

    /// `|ratio - 1|`, exact.
    pub fn deviation(&self) -> Option<Rational> {
        self.ratio().map(|r| (r - Rational::one()).abs())
    }

    pub fn ratio_f64(&self) -> Option<f64> {
        self.ratio().map(|r| to_f64(&r))
    }

    pub fn main_term_f64(&self) -> f64 {
        to_f64(&self.main_term)
    }
}

pub fn pochhammer_prediction(
    k: usize,
    l: usize,
    q: &Rational,
    weighted: bool,
) -> Result<PartialSumPrediction> {
    Ok(PartialSumPrediction {
        l,
        exact_value: pochhammer_sum(k, l, q, weighted)?,
        main_term: pochhammer_main_term(k, l, q, weighted)?,
    })
}

/// Dominant term of `sum_{m<=l} c_m` implied by the singular part at the
/// pole `1/q`: `(-q)^K a_K / ((q-1)(K-1)!) q^{l+1} l^{K-1}`. Zero for an empty
/// singular part.
pub fn partial_sum_main_term(singular: &SingularPart, l: usize) -> Rational {
    let Some(a) = singular.leading() else {
        return Rational::zero();
    };
    let order = singular.order();
    let q = singular.pole.recip();
    let coefficient = num_traits::pow(-q.clone(), order) * a
        / ((&q - Rational::one()) * int(factorial(order - 1)));
    coefficient * num_traits::pow(q, l + 1) * int(num_traits::pow(BigInt::from(l), order - 1))
}

/// Exact `sum_{m<=l}` of the Taylor coefficients of a singular part.
pub fn singular_partial_sum(singular: &SingularPart, l: usize) -> Rational {
    (0..=l).map(|m| singular.series_coefficient(m)).sum()
}

/// Exact split of `sum_{m<=l} c_m` into the contributions of the dominant
/// pole, of the boundary poles, and of the regular remainder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauberianSplit {
    pub l: usize,
    pub exact: Rational,
    pub dominant: SingularPart,
    pub dominant_sum: Rational,
    pub main_term: Rational,
    /// `(pole, exact partial sum of its singular part)` for each boundary pole
    pub boundary: Vec<(SingularPart, Rational)>,
    /// Partial sum of the coefficients of `f` minus all singular parts.
    pub regular_sum: Rational,
}

pub fn tauberian_split(
    f: &RationalFunction,
    dominant_pole: &Rational,
    boundary_poles: &[Rational],
    l: usize,
) -> Result<TauberianSplit> {
    let coeffs = f.series(l)?;
    let exact: Rational = coeffs.iter().sum();
    let dominant = singular_part_at(f, dominant_pole);
    let dominant_sum = singular_partial_sum(&dominant, l);
    let main_term = partial_sum_main_term(&dominant, l);
    let boundary: Vec<_> = boundary_poles
        .iter()
        .map(|p| {
            let sp = singular_part_at(f, p);
            let s = singular_partial_sum(&sp, l);
            (sp, s)
        })
        .collect();
    let mut parts = vec![dominant.clone()];
    parts.extend(boundary.iter().map(|(sp, _)| sp.clone()));
    let regular = crate::ratfunc::subtract_singular_parts(f, &parts);
    let regular_sum = regular.series(l)?.iter().sum();
    Ok(TauberianSplit {
        l,
        exact,
        dominant,
        dominant_sum,
        main_term,
        boundary,
        regular_sum,
    })
}

/// Closed-form main term of `sum_{m<=l} S_k(m)` for even `k`:
/// `k! / (k/2)! * q^{l+1} l^{k/2} / (q-1)^{k/2+1}`. Zero for odd `k`.
pub fn power_sum_main_term(params: &BouquetParams, k: usize, l: usize) -> Rational {
    if k % 2 == 1 {
        return Rational::zero();
    }
    let half = k / 2;
    let q = BigInt::from(params.q);
    Rational::new(
        factorial(k) * num_traits::pow(q.clone(), l + 1) * num_traits::pow(BigInt::from(l), half),
        factorial(half) * num_traits::pow(q - 1, half + 1),
    )
}

/// The same main term derived from the computed singular part of `G^(k)`,
/// with the sign `(-1)^{k/2}` that turns its coefficients into `S_k(m)`.
pub fn power_sum_main_term_from_laurent(gf: &GeneratingFunctions, k: usize, l: usize) -> Rational {
    let sp = singular_part_at(&gf.g_k(k), &gf.params().dominant_pole());
    let t = partial_sum_main_term(&sp, l);
    if k % 4 == 2 {
        -t
    } else {
        t
    }
}

/// Exact `sum_{m<=l} S_k(m)` against [`power_sum_main_term`].
pub fn powersum_partial_check(
    gf: &GeneratingFunctions,
    k: usize,
    l: usize,
) -> Result<PartialSumPrediction> {
    let table = gf.power_sums(k, l)?;
    Ok(PartialSumPrediction {
        l,
        exact_value: int(table.partial_sum(l)),
        main_term: power_sum_main_term(gf.params(), k, l),
    })
}

/// Whether `|ratio - 1|` strictly decreases along `predictions`.
pub fn strictly_converging(predictions: &[PartialSumPrediction]) -> bool {
    let devs: Option<Vec<Rational>> = predictions.iter().map(|p| p.deviation()).collect();
    match devs {
        Some(d) => d.windows(2).all(|w| w[1] < w[0]),
        None => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::rising_factorial;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn gf(n: usize) -> GeneratingFunctions {
        GeneratingFunctions::new(BouquetParams::new(n, 1).unwrap())
    }

    #[test]
    fn pochhammer_sum_examples() {
        let three = q(3, 1);
        assert_eq!(pochhammer_sum(1, 7, &three, false).unwrap(), q(8, 1));
        assert_eq!(pochhammer_sum(1, 3, &three, true).unwrap(), q(40, 1));
        assert_eq!(pochhammer_sum(2, 4, &three, false).unwrap(), q(15, 1));
        assert!(pochhammer_sum(0, 4, &three, false).is_err());
        assert!(pochhammer_sum(1, 4, &q(1, 1), true).is_err());
    }

    #[test]
    fn termwise_ratio_identity() {
        // a(k,m,q) (k-1) = (k+m-1) a(k-1,m,q)
        for qv in [q(3, 1), q(5, 2)] {
            for k in 2..=6 {
                for m in 0..=50 {
                    let lhs = pochhammer_term(k, m, &qv, true) * int(k as i64 - 1);
                    let rhs = pochhammer_term(k - 1, m, &qv, true) * int((k + m - 1) as i64);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn terms_match_rising_factorials() {
        for k in 1..5 {
            for m in 0..10 {
                let direct = Rational::new(rising_factorial(k, m), rising_factorial(1, m));
                assert_eq!(pochhammer_term(k, m, &q(3, 1), false), direct);
            }
        }
    }

    #[test]
    fn pochhammer_ratio_examples() {
        let three = q(3, 1);
        // (l+1)(l+2)/2 over l^2/2 at l = 100
        let p = pochhammer_prediction(2, 100, &three, false).unwrap();
        assert_eq!(p.ratio().unwrap(), q(10302, 10000));
        let p = pochhammer_prediction(1, 10, &three, true).unwrap();
        assert_eq!(
            p.ratio().unwrap(),
            Rational::one() - Rational::new(1.into(), num_traits::pow(BigInt::from(3), 11))
        );
        let p = pochhammer_prediction(3, 60, &three, true).unwrap();
        assert!((p.ratio_f64().unwrap() - 1.0).abs() < 0.1);
        assert!(
            (pochhammer_asymptotic(1, 10, &three, true).unwrap() - 3f64.powi(11) / 2.0).abs()
                < 1e-6
        );
    }

    #[test]
    fn pochhammer_ratios_converge_monotonically() {
        let lens = [20, 40, 80, 160];
        for qv in [q(3, 1), q(5, 1)] {
            for k in 1..=3 {
                for weighted in [false, true] {
                    let preds: Vec<_> = lens
                        .iter()
                        .map(|&l| pochhammer_prediction(k, l, &qv, weighted).unwrap())
                        .collect();
                    assert!(
                        strictly_converging(&preds),
                        "k={k} weighted={weighted} q={qv}"
                    );
                }
            }
        }
    }

    #[test]
    fn main_term_of_g0() {
        let g = gf(2);
        let sp = singular_part_at(&g.g_k(0), &q(1, 3));
        let l = 20;
        let main = partial_sum_main_term(&sp, l);
        assert_eq!(
            main,
            Rational::new(num_traits::pow(BigInt::from(3), l + 1), 2.into())
        );
        let exact: BigInt = (1..=l)
            .map(|m| BigInt::from(g.params().count_cyclic(m)))
            .sum();
        let ratio = to_f64(&(int(exact) / main));
        assert!((ratio - 1.0).abs() < 1e-3, "{ratio}");
    }

    #[test]
    fn main_term_of_g2() {
        let g = gf(2);
        let sp = singular_part_at(&g.g_k(2), &q(1, 3));
        for l in [5, 17] {
            // sign-corrected: 3^{l+1} l / 2
            let expected = Rational::new(num_traits::pow(BigInt::from(3), l + 1) * l, 2.into());
            assert_eq!(-partial_sum_main_term(&sp, l), expected);
        }
        let empty = SingularPart {
            pole: q(1, 3),
            coefficients: vec![],
        };
        assert!(partial_sum_main_term(&empty, 10).is_zero());
    }

    #[test]
    fn laurent_route_agrees_with_closed_form() {
        for n in [2, 3] {
            let g = gf(n);
            for k in [0, 2, 4, 6] {
                for l in [1, 7, 30] {
                    assert_eq!(
                        power_sum_main_term_from_laurent(&g, k, l),
                        power_sum_main_term(g.params(), k, l),
                        "n={n} k={k} l={l}"
                    );
                }
            }
        }
    }

    #[test]
    fn split_accounts_for_every_coefficient() {
        let g = gf(2);
        let p = g.params();
        for k in [0, 2, 4] {
            let s =
                tauberian_split(&g.g_k(k), &p.dominant_pole(), &[q(1, 1), q(-1, 1)], 25).unwrap();
            let boundary: Rational = s.boundary.iter().map(|(_, b)| b.clone()).sum();
            assert_eq!(
                s.exact,
                &s.dominant_sum + &boundary + &s.regular_sum,
                "k={k}"
            );
        }
    }

    #[test]
    fn powersum_examples() {
        let g = gf(2);
        let p = powersum_partial_check(&g, 2, 3).unwrap();
        assert_eq!(p.exact_value, q(96, 1));
        assert_eq!(p.main_term, q(243, 2));
        assert!((p.ratio_f64().unwrap() - 0.790).abs() < 0.01);
        let p = powersum_partial_check(&g, 3, 10).unwrap();
        assert!(p.exact_value.is_zero() && p.main_term.is_zero());
        assert_eq!(p.ratio(), None);
        let p = powersum_partial_check(&g, 2, 40).unwrap();
        assert!((p.ratio_f64().unwrap() - 1.0).abs() < 0.1);
    }

    #[test]
    fn powersum_ratios_converge() {
        for n in [2, 3] {
            let g = gf(n);
            for k in [2, 4] {
                let preds: Vec<_> = [10, 20, 40]
                    .iter()
                    .map(|&l| powersum_partial_check(&g, k, l).unwrap())
                    .collect();
                assert!(strictly_converging(&preds), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn big_rationals_convert_to_floats() {
        let big = Rational::new(
            num_traits::pow(BigInt::from(3), 400),
            num_traits::pow(BigInt::from(3), 399),
        );
        assert_eq!(to_f64(&big), 3.0);
        let huge = int(num_traits::pow(BigInt::from(10), 300));
        assert!((to_f64(&huge) / 1e300 - 1.0).abs() < 1e-12);
    }
}
