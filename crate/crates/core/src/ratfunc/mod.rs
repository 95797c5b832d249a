//! Exact univariate polynomial and rational-function arithmetic over
//! arbitrary-precision rationals, Taylor coefficients at the origin, and
//! singular parts at rational poles.
//!
//! Pole locations are never searched for. Callers supply the rational
//! candidates they care about and [`pole_report`] checks which of them are
//! roots of the reduced denominator and whether they account for all of it.

mod function;
mod laurent;
mod poly;

pub use function::RationalFunction;
pub use laurent::{
    pochhammer_ratio, pochhammer_series_coefficient, rising_factorial, singular_part_at,
    subtract_singular_parts, SingularPart,
};
pub use poly::Polynomial;

/// Exact rational scalar used throughout the crate.
pub type Rational = num_rational::BigRational;

/// Which candidate points are poles of a rational function, and with what
/// order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleReport {
    pub poles: Vec<(Rational, usize)>,
    /// Degree of the part of the reduced denominator not explained by the
    /// listed poles. Zero means the candidates are the complete pole set.
    pub unexplained_degree: usize,
}

pub fn pole_report(f: &RationalFunction, candidates: &[Rational]) -> PoleReport {
    let mut rest = f.denominator().clone();
    let mut poles = Vec::new();
    for c in candidates {
        let (k, cofactor) = rest.root_multiplicity(c);
        if k > 0 {
            poles.push((c.clone(), k));
            rest = cofactor;
        }
    }
    PoleReport {
        poles,
        unexplained_degree: rest.degree().unwrap_or(0),
    }
}
