//! Moments and exact distributions of the normalized logarithm
//! `X_l = sqrt(g / wl) log_j` over cyclically reduced words with
//! `1 <= wl <= l`, each word equally likely.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

use crate::asymptotics::to_f64;
use crate::ratfunc::Rational;
use crate::words::HistogramSeries;
use crate::zeta::{BouquetParams, GeneratingFunctions, PowerSumTable};
use crate::{Error, Result};

fn int(v: impl Into<BigInt>) -> Rational {
    Rational::from_integer(v.into())
}

/// `N(l)`, the number of cyclically reduced words of length `1..=l`.
pub fn population(params: &BouquetParams, l: usize) -> BigUint {
    (1..=l).map(|m| params.count_cyclic(m)).sum()
}

/// `M_k(X_l) = N(l)^{-1} sum_{m<=l} (g/m)^{k/2} S_k(m)` from a table of power
/// sums covering `1..=l`. Odd `k` is exactly 0.
pub fn moment_from_power_sums(params: &BouquetParams, table: &PowerSumTable, l: usize) -> Rational {
    let k = table.k;
    if k % 2 == 1 {
        return Rational::zero();
    }
    let half = k / 2;
    let g = BigInt::from(params.g);
    let total: Rational = (1..=l)
        .map(|m| {
            Rational::new(
                table.get(m) * num_traits::pow(g.clone(), half),
                num_traits::pow(BigInt::from(m), half),
            )
        })
        .sum();
    total / int(population(params, l))
}

/// Exact `M_k(X_l)`.
pub fn moment(gf: &GeneratingFunctions, k: usize, l: usize) -> Result<Rational> {
    if l == 0 {
        return Err(Error::InvalidArgument("cutoff must be at least 1".into()));
    }
    if k % 2 == 1 {
        return Ok(Rational::zero());
    }
    let table = gf.power_sums(k, l)?;
    Ok(moment_from_power_sums(gf.params(), &table, l))
}

/// `E[Z^k]` for a standard Gaussian: `k! / (2^{k/2} (k/2)!)` for even `k`,
/// i.e. `(k-1)!!`, and 0 for odd `k`.
pub fn gaussian_moment(k: usize) -> Rational {
    if k % 2 == 1 {
        return Rational::zero();
    }
    let half = k / 2;
    let kf: BigInt = (1..=k).map(BigInt::from).product();
    let hf: BigInt = (1..=half).map(BigInt::from).product();
    Rational::new(kf, num_traits::pow(BigInt::from(2), half) * hf)
}

/// Standard normal CDF, `Phi(x) = erfc(-x / sqrt 2) / 2`.
///
/// Evaluated through the complementary error function so neither tail loses
/// precision to cancellation. `libm::erfc` is the fdlibm rational
/// approximation, good to about one ulp.
pub fn gaussian_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Compare `v sqrt(g/m)` with the rational `a`, exactly.
fn cmp_scaled(v: i64, g: u64, m: usize, a: &Rational) -> Ordering {
    let lhs_sign = v.signum();
    let rhs_sign = if a.is_positive() {
        1
    } else if a.is_negative() {
        -1
    } else {
        0
    };
    if lhs_sign != rhs_sign {
        return lhs_sign.cmp(&rhs_sign);
    }
    if lhs_sign == 0 {
        return Ordering::Equal;
    }
    // same sign: compare squares g v^2 / m against a^2
    let lhs = Rational::new(
        BigInt::from(g) * BigInt::from(v) * BigInt::from(v),
        BigInt::from(m),
    );
    let rhs = a * a;
    let mag = lhs.cmp(&rhs);
    if lhs_sign > 0 {
        mag
    } else {
        mag.reverse()
    }
}

fn in_closed_interval(v: i64, g: u64, m: usize, a: &Rational, b: &Rational) -> bool {
    cmp_scaled(v, g, m, a) != Ordering::Less && cmp_scaled(v, g, m, b) != Ordering::Greater
}

/// Exact joint counts of `(wl, log_j)` over cyclically reduced words of
/// length `1..=l`. Interval probabilities use closed intervals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistributionTable {
    pub params: BouquetParams,
    pub l: usize,
    pub atoms: BTreeMap<(usize, i64), BigUint>,
    pub total: BigUint,
}

impl DistributionTable {
    fn mass_where(&self, mut keep: impl FnMut(usize, i64) -> bool) -> BigUint {
        self.atoms
            .iter()
            .filter(|((m, v), _)| keep(*m, *v))
            .map(|(_, c)| c)
            .sum()
    }

    /// `P(X_l in [a, b])`
    pub fn probability(&self, a: &Rational, b: &Rational) -> Rational {
        let g = self.params.g;
        let hits = self.mass_where(|m, v| in_closed_interval(v, g, m, a, b));
        Rational::new(hits.into(), self.total.clone().into())
    }

    /// Conditional law at the single length `m`: `P(sqrt(g/m) log_j in [a, b] | wl = m)`.
    pub fn fixed_length_probability(&self, m: usize, a: &Rational, b: &Rational) -> Rational {
        let g = self.params.g;
        let total = self.mass_where(|mm, _| mm == m);
        if total.is_zero() {
            return Rational::zero();
        }
        let hits = self.mass_where(|mm, v| mm == m && in_closed_interval(v, g, m, a, b));
        Rational::new(hits.into(), total.into())
    }

    /// Sum of all atom probabilities; exactly 1 for a well-formed table.
    pub fn total_probability(&self) -> Rational {
        let sum: BigUint = self.atoms.values().sum();
        Rational::new(sum.into(), self.total.clone().into())
    }

    /// Whether `count(m, v) = count(m, -v)` for every atom.
    pub fn is_symmetric(&self) -> bool {
        self.atoms
            .iter()
            .all(|((m, v), c)| self.atoms.get(&(*m, -*v)) == Some(c))
    }

    /// `E[X_l^k]` straight from the atoms.
    ///
    /// Odd orders are `Some(0)` only when `sum_v v^k count(m, v)` vanishes for
    /// every length separately; otherwise the value involves `sqrt(g/m)` and is
    /// not rational, so `None` is returned.
    pub fn moment(&self, k: usize) -> Option<Rational> {
        if k % 2 == 1 {
            let mut per_length: BTreeMap<usize, BigInt> = BTreeMap::new();
            for ((m, v), c) in &self.atoms {
                *per_length.entry(*m).or_default() +=
                    num_traits::pow(BigInt::from(*v), k) * BigInt::from(c.clone());
            }
            return per_length.values().all(Zero::is_zero).then(Rational::zero);
        }
        let half = k / 2;
        let g = BigInt::from(self.params.g);
        let sum: Rational = self
            .atoms
            .iter()
            .map(|((m, v), c)| {
                Rational::new(
                    BigInt::from(c.clone())
                        * num_traits::pow(BigInt::from(*v), k)
                        * num_traits::pow(g.clone(), half),
                    num_traits::pow(BigInt::from(*m), half),
                )
            })
            .sum();
        Some(sum / int(self.total.clone()))
    }
}

/// Exact distribution of `X_l` assembled from per-length histograms.
pub fn distribution(params: &BouquetParams, l: usize) -> Result<DistributionTable> {
    if l == 0 {
        return Err(Error::InvalidArgument("cutoff must be at least 1".into()));
    }
    let mut atoms = BTreeMap::new();
    let mut total = BigUint::zero();
    for (m, h) in HistogramSeries::new(params.n, params.j)?.take(l) {
        for (v, c) in h.iter() {
            total += c;
            atoms.insert((m, v), c.clone());
        }
    }
    Ok(DistributionTable {
        params: *params,
        l,
        atoms,
        total,
    })
}

/// Interval endpoints `-4, -3.5, ..., 4`.
pub fn default_grid() -> Vec<Rational> {
    (-8..=8)
        .map(|i| Rational::new(i.into(), 2.into()))
        .collect()
}

/// One cell of a discrepancy comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalComparison {
    pub a: Rational,
    pub b: Rational,
    pub probability: Rational,
    pub gaussian: f64,
    pub difference: f64,
}

/// Exact probabilities of each consecutive grid cell `[grid[i], grid[i+1]]`
/// next to the Gaussian mass `Phi(b) - Phi(a)`.
pub fn interval_comparisons(
    dist: &DistributionTable,
    grid: &[Rational],
) -> Result<Vec<IntervalComparison>> {
    if grid.len() < 2 || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "grid needs at least two strictly increasing endpoints".into(),
        ));
    }
    Ok(grid
        .windows(2)
        .map(|w| {
            let probability = dist.probability(&w[0], &w[1]);
            let gaussian = gaussian_cdf(to_f64(&w[1])) - gaussian_cdf(to_f64(&w[0]));
            let difference = (to_f64(&probability) - gaussian).abs();
            IntervalComparison {
                a: w[0].clone(),
                b: w[1].clone(),
                probability,
                gaussian,
                difference,
            }
        })
        .collect())
}

/// `max |P(X_l in [a,b]) - (Phi(b) - Phi(a))|` over consecutive grid cells.
pub fn gaussian_discrepancy(dist: &DistributionTable, grid: &[Rational]) -> Result<f64> {
    Ok(interval_comparisons(dist, grid)?
        .iter()
        .map(|c| c.difference)
        .fold(0.0, f64::max))
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentRow {
    pub l: usize,
    pub k: usize,
    pub value: Rational,
    pub decimal: f64,
    pub target: Rational,
    /// `|value - target|`, relative to the target when it is nonzero.
    pub deviation: f64,
    /// Exact `|value - target|`.
    pub abs_deviation: Rational,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct MomentReport {
    pub rows: Vec<MomentRow>,
}

impl MomentReport {
    pub fn row(&self, k: usize, l: usize) -> Option<&MomentRow> {
        self.rows.iter().find(|r| r.k == k && r.l == l)
    }

    /// Rows for one order, in cutoff order.
    pub fn series(&self, k: usize) -> Vec<&MomentRow> {
        self.rows.iter().filter(|r| r.k == k).collect()
    }

    /// Whether the exact deviation from the Gaussian target strictly
    /// decreases along the cutoffs for order `k`.
    pub fn strictly_converging(&self, k: usize) -> bool {
        self.series(k)
            .windows(2)
            .all(|w| w[1].abs_deviation < w[0].abs_deviation)
    }
}

/// `M_k(X_l)` against the Gaussian moments for every even `k <= k_max` and
/// every cutoff in `lens`.
pub fn moment_convergence(
    gf: &GeneratingFunctions,
    k_max: usize,
    lens: &[usize],
) -> Result<MomentReport> {
    if lens.is_empty() || lens.contains(&0) {
        return Err(Error::InvalidArgument(
            "cutoffs must be nonempty and >= 1".into(),
        ));
    }
    let l_max = *lens.iter().max().expect("nonempty");
    let mut rows = Vec::new();
    for k in (0..=k_max).step_by(2) {
        let table = gf.power_sums(k, l_max)?;
        let target = gaussian_moment(k);
        for &l in lens {
            let value = moment_from_power_sums(gf.params(), &table, l);
            let abs_deviation = (&value - &target).abs();
            let deviation = if target.is_zero() {
                to_f64(&abs_deviation)
            } else {
                to_f64(&(&abs_deviation / &target))
            };
            rows.push(MomentRow {
                l,
                k,
                decimal: to_f64(&value),
                value,
                target: target.clone(),
                deviation,
                abs_deviation,
            });
        }
    }
    Ok(MomentReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn params(n: usize) -> BouquetParams {
        BouquetParams::new(n, 1).unwrap()
    }

    #[test]
    fn moment_examples() {
        let gf = GeneratingFunctions::new(params(2));
        assert_eq!(moment(&gf, 2, 3).unwrap(), q(9, 11));
        assert!(moment(&gf, 1, 7).unwrap().is_zero());
        assert_eq!(moment(&gf, 0, 7).unwrap(), q(1, 1));
        assert!(moment(&gf, 2, 0).is_err());
    }

    #[test]
    fn gaussian_moments() {
        assert_eq!(gaussian_moment(0), q(1, 1));
        assert_eq!(gaussian_moment(2), q(1, 1));
        assert_eq!(gaussian_moment(4), q(3, 1));
        assert_eq!(gaussian_moment(6), q(15, 1));
        assert!(gaussian_moment(5).is_zero());
        for k in (2..=20).step_by(2) {
            assert_eq!(
                gaussian_moment(k),
                gaussian_moment(k - 2) * int(k as i64 - 1)
            );
        }
    }

    #[test]
    fn distribution_examples() {
        let p = params(2);
        let d1 = distribution(&p, 1).unwrap();
        assert_eq!(d1.probability(&q(-1, 2), &q(1, 2)), q(1, 2));
        let d2 = distribution(&p, 2).unwrap();
        assert_eq!(d2.probability(&q(0, 1), &q(0, 1)), q(1, 4));
        for l in [1, 5, 20] {
            let d = distribution(&p, l).unwrap();
            assert_eq!(d.total_probability(), q(1, 1));
            assert!(d.is_symmetric());
        }
    }

    #[test]
    fn closed_interval_includes_endpoints() {
        // n=2, m=4, v=2: sqrt(1/4)*2 = 1 exactly
        let d = distribution(&params(2), 4).unwrap();
        let at_one = d.probability(&q(1, 1), &q(1, 1));
        let c: BigUint = d.atoms[&(1, 1)].clone() + d.atoms[&(4, 2)].clone();
        assert_eq!(at_one, Rational::new(c.into(), d.total.clone().into()));
    }

    #[test]
    fn fixed_length_conditionals() {
        let d = distribution(&params(2), 3).unwrap();
        // length-1: atoms -1, 0, 0, 1
        assert_eq!(d.fixed_length_probability(1, &q(-1, 2), &q(1, 2)), q(1, 2));
        assert_eq!(
            d.fixed_length_probability(2, &q(-100, 1), &q(100, 1)),
            q(1, 1)
        );
        assert!(d.fixed_length_probability(9, &q(-1, 1), &q(1, 1)).is_zero());
    }

    /// Composite Gauss-Legendre (5-point) quadrature of the Gaussian density
    /// on [0, |x|], added to 1/2.
    fn cdf_by_quadrature(x: f64) -> f64 {
        const NODES: [f64; 5] = [
            0.0,
            -0.538_469_310_105_683_1,
            0.538_469_310_105_683_1,
            -0.906_179_845_938_664,
            0.906_179_845_938_664,
        ];
        const WEIGHTS: [f64; 5] = [
            0.568_888_888_888_888_9,
            0.478_628_670_499_366_5,
            0.478_628_670_499_366_5,
            0.236_926_885_056_189_1,
            0.236_926_885_056_189_1,
        ];
        let density = |t: f64| (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let panels = 2000;
        let width = x.abs() / panels as f64;
        let mut sum = 0.0;
        for p in 0..panels {
            let mid = (p as f64 + 0.5) * width;
            for (n, w) in NODES.iter().zip(WEIGHTS) {
                sum += w * density(mid + 0.5 * width * n);
            }
        }
        let half = 0.5 * width * sum;
        if x >= 0.0 {
            0.5 + half
        } else {
            0.5 - half
        }
    }

    #[test]
    fn cdf_matches_quadrature_oracle() {
        for x in [1.96, -1.0, 0.3, 2.5, -3.7] {
            assert!(
                (gaussian_cdf(x) - cdf_by_quadrature(x)).abs() < 1e-12,
                "x={x}"
            );
        }
        assert!((cdf_by_quadrature(1.96) - 0.975_002_104_852).abs() < 1e-12);
    }

    #[test]
    fn cdf_symmetry() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let x: f64 = rng.gen_range(-8.0..8.0);
            assert!((gaussian_cdf(x) + gaussian_cdf(-x) - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn cdf_reference_points() {
        assert_eq!(gaussian_cdf(0.0), 0.5);
        assert!((gaussian_cdf(1.96) - 0.975_002_104_851_780).abs() < 1e-12);
        assert!((gaussian_cdf(-1.0) - 0.158_655_253_931_457).abs() < 1e-12);
        assert!((gaussian_cdf(3.0) - 0.998_650_101_968_370).abs() < 1e-12);
    }

    #[test]
    fn discrepancy_of_degenerate_law() {
        let d = distribution(&params(2), 1).unwrap();
        let disc = gaussian_discrepancy(&d, &default_grid()).unwrap();
        assert!(disc >= 0.2, "{disc}");
        assert!(gaussian_discrepancy(&d, &[q(1, 1)]).is_err());
        assert!(gaussian_discrepancy(&d, &[q(1, 1), q(0, 1)]).is_err());
    }

    #[test]
    fn two_moment_pipelines_agree() {
        for n in [2, 3] {
            let p = params(n);
            let gf = GeneratingFunctions::new(p);
            let d = distribution(&p, 30).unwrap();
            for l in [1, 2, 7, 30] {
                let dl = distribution(&p, l).unwrap();
                for k in 0..=6 {
                    assert_eq!(
                        dl.moment(k).unwrap(),
                        moment(&gf, k, l).unwrap(),
                        "n={n} k={k} l={l}"
                    );
                }
            }
            assert_eq!(d.moment(3), Some(Rational::zero()));
            assert_eq!(d.moment(5), Some(Rational::zero()));
        }
    }

    #[test]
    fn report_rows() {
        let gf = GeneratingFunctions::new(params(2));
        let r = moment_convergence(&gf, 4, &[3, 10]).unwrap();
        assert_eq!(r.rows.len(), 6);
        let row = r.row(2, 3).unwrap();
        assert_eq!(row.value, q(9, 11));
        assert_eq!(row.target, q(1, 1));
        assert!((row.deviation - 2.0 / 11.0).abs() < 1e-15);
        assert_eq!(r.row(0, 10).unwrap().value, q(1, 1));
        assert!(moment_convergence(&gf, 4, &[]).is_err());
    }
}
