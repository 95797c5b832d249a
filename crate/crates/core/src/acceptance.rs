//! End-to-end verification suite. Each criterion cross-checks independent
//! routes (enumeration, transfer matrices, closed forms, generating
//! functions) and reports a measured value next to its verdict.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::asymptotics::{powersum_partial_check, strictly_converging, to_f64};
use crate::ratfunc::{singular_part_at, Rational};
use crate::stats::{
    default_grid, distribution, gaussian_cdf, gaussian_discrepancy, moment, moment_convergence,
};
use crate::words::{enumerate_cyclic, transfer_matrix, HistogramSeries, UniformSampler, Word};
use crate::zeta::{g0, BouquetParams, GeneratingFunctions};
use crate::Result;

/// Frozen thresholds.
pub mod tolerances {
    use std::time::Duration;

    pub const COUNT_RUNTIME: Duration = Duration::from_secs(30);
    pub const POWER_SUM_RUNTIME: Duration = Duration::from_secs(60);
    pub const TAUBERIAN_RUNTIME: Duration = Duration::from_secs(60);
    pub const MOMENT_RUNTIME: Duration = Duration::from_secs(300);

    /// `|ratio - 1|` at `l = 40` for the power-sum partial sums.
    pub const TAUBERIAN_RATIO: f64 = 0.10;
    /// `|M_2 - 1|` at `l = 200`.
    pub const M2_ABS: f64 = 0.02;
    /// `|M_4 - 3| / 3` at `l = 200`.
    pub const M4_REL: f64 = 0.05;
    /// `|M_6 - 15| / 15` at `l = 200`.
    pub const M6_REL: f64 = 0.10;
    /// Discrepancy bound at `l = 200`.
    pub const DISCREPANCY: f64 = 0.05;
    /// Required accuracy of the normal CDF.
    pub const CDF_ABS: f64 = 1e-12;
    /// Chi-square significance level for the sampler.
    pub const CHI_SQUARE_ALPHA: f64 = 0.001;
}

/// Knobs for a faster smoke pass; the default is the full suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteOptions {
    /// Longest length enumerated at rank 2 and rank 3 in the count check.
    pub enumerate_to: (usize, usize),
    /// Longest length in the histogram-vs-generating-function power sums.
    pub power_sums_to: usize,
    pub sampler_draws: usize,
}

impl SuiteOptions {
    pub fn full() -> Self {
        SuiteOptions {
            enumerate_to: (10, 7),
            power_sums_to: 50,
            sampler_draws: 100_000,
        }
    }

    pub fn quick() -> Self {
        SuiteOptions {
            enumerate_to: (8, 5),
            power_sums_to: 20,
            sampler_draws: 20_000,
        }
    }
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self::full()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub measured: String,
    pub elapsed: Duration,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {}: {} -- {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.measured
        )
    }
}

fn timed(
    id: u8,
    name: &'static str,
    limit: Option<Duration>,
    body: impl FnOnce() -> Result<(bool, String)>,
) -> Outcome {
    let start = Instant::now();
    let result = body();
    let elapsed = start.elapsed();
    let (mut passed, mut measured) = match result {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    if let Some(limit) = limit {
        if elapsed > limit {
            passed = false;
            measured.push_str(&format!("; runtime {elapsed:?} over {limit:?}"));
        }
    }
    Outcome {
        id,
        name,
        passed,
        measured,
        elapsed,
    }
}

fn gf(n: usize) -> Result<GeneratingFunctions> {
    Ok(GeneratingFunctions::new(BouquetParams::new(n, 1)?))
}

/// Enumeration, `trace(M^m)`, the closed form and `[u^m] G(u, 0)` agree.
pub fn exact_counts(opts: &SuiteOptions) -> Outcome {
    timed(
        1,
        "exact count agreement",
        Some(tolerances::COUNT_RUNTIME),
        || {
            let mut checked = 0;
            let mut failures = Vec::new();
            for (n, max) in [(2, opts.enumerate_to.0), (3, opts.enumerate_to.1)] {
                let params = BouquetParams::new(n, 1)?;
                let series = g0(&params).series(max)?;
                let adjacency = transfer_matrix(n)?;
                let mut power = adjacency.clone();
                for (m, coeff) in series.iter().enumerate().skip(1) {
                    let enumerated = BigUint::from(enumerate_cyclic(n, m)?.count());
                    let trace = power.trace();
                    let formula = params.count_cyclic(m);
                    let from_g0 = coeff.to_integer();
                    if !(enumerated == trace
                        && trace == formula
                        && coeff.is_integer()
                        && from_g0 == BigInt::from(formula.clone()))
                    {
                        failures.push(format!("n={n} m={m}"));
                    }
                    checked += 1;
                    power = power.mul(&adjacency);
                }
            }
            Ok((
                failures.is_empty(),
                format!("{checked} (n, m) cells, mismatches: {failures:?}"),
            ))
        },
    )
}

/// Enumeration, histograms and `(-1)^{k/2} [u^m] G^(k)` agree for every
/// `k <= 6`.
pub fn exact_power_sums(opts: &SuiteOptions) -> Outcome {
    timed(
        2,
        "exact power-sum agreement",
        Some(tolerances::POWER_SUM_RUNTIME),
        || {
            let gf = gf(2)?;
            let long = opts.power_sums_to.max(8);
            let mut failures = Vec::new();
            for k in (1..=6).step_by(2) {
                if !gf.g_k(k).is_zero() {
                    failures.push(format!("G^({k}) not identically zero"));
                }
            }
            let tables = (1..=6)
                .map(|k| gf.power_sums(k, long))
                .collect::<Result<Vec<_>>>()?;
            for (m, hist) in HistogramSeries::new(2, 1)?.take(long) {
                let words: Vec<i64> = if m <= 8 {
                    enumerate_cyclic(2, m)?
                        .map(|w| w.log(1))
                        .collect::<Result<_>>()?
                } else {
                    Vec::new()
                };
                for (table, k) in tables.iter().zip(1u32..) {
                    let from_g = table.get(m);
                    let from_hist = hist.power_sum(k);
                    if from_g != from_hist {
                        failures.push(format!("k={k} m={m}: G {from_g} vs histogram {from_hist}"));
                    }
                    if k % 2 == 1 && !from_g.is_zero() {
                        failures.push(format!("odd k={k} m={m} nonzero"));
                    }
                    if m <= 8 {
                        let brute: BigInt = words
                            .iter()
                            .map(|&v| num_traits::pow(BigInt::from(v), k as usize))
                            .sum();
                        if brute != from_g {
                            failures
                                .push(format!("k={k} m={m}: enumeration {brute} vs G {from_g}"));
                        }
                    }
                }
            }
            Ok((
                failures.is_empty(),
                format!(
                    "k=1..6, enumeration to m=8, histograms to m={long}; mismatches: {failures:?}"
                ),
            ))
        },
    )
}

/// Singular part of `G^(k)` at `1/q` has order `k/2 + 1` and leading
/// coefficient `-k!/(q^{k/2+1}(q-1)^{k/2})`.
pub fn laurent_expansion() -> Outcome {
    timed(3, "Laurent expansion at u = 1/q", None, || {
        let mut cells = Vec::new();
        let mut ok = true;
        for n in [2, 3] {
            let gf = gf(n)?;
            for k in [2, 4, 6, 8] {
                let c = gf.laurent_check(k)?;
                ok &= c.matches;
                cells.push(format!(
                    "n={n} k={k} order={} leading={}",
                    c.order, c.leading
                ));
            }
        }
        Ok((ok, cells.join("; ")))
    })
}

/// Residue of `G(u, 0)` at `1/q` is `-1/q`.
pub fn residue() -> Outcome {
    timed(4, "residue of G(u,0) at 1/q", None, || {
        let mut cells = Vec::new();
        let mut ok = true;
        for n in [2, 3, 4] {
            let p = BouquetParams::new(n, 1)?;
            let sp = singular_part_at(&g0(&p), &p.dominant_pole());
            let good = sp.coefficients == vec![-p.dominant_pole()];
            ok &= good;
            let res = sp.coefficients.first().cloned().unwrap_or_default();
            cells.push(format!("n={n} residue={res}"));
        }
        Ok((ok, cells.join("; ")))
    })
}

/// Partial sums of `S_k(m)` against the closed-form main term.
pub fn tauberian_main_terms() -> Outcome {
    timed(
        5,
        "Tauberian main terms",
        Some(tolerances::TAUBERIAN_RUNTIME),
        || {
            let gf = gf(2)?;
            let mut ok = true;
            let mut cells = Vec::new();
            for k in [2, 4] {
                let preds = [10, 20, 40]
                    .iter()
                    .map(|&l| powersum_partial_check(&gf, k, l))
                    .collect::<Result<Vec<_>>>()?;
                let trend = strictly_converging(&preds);
                let last = preds[2].ratio_f64().unwrap_or(f64::NAN);
                ok &= trend && (last - 1.0).abs() <= tolerances::TAUBERIAN_RATIO;
                let ratios: Vec<String> = preds
                    .iter()
                    .map(|p| format!("{:.6}", p.ratio_f64().unwrap_or(f64::NAN)))
                    .collect();
                cells.push(format!(
                    "k={k} ratios(l=10,20,40)=[{}] decreasing={trend}",
                    ratios.join(", ")
                ));
            }
            Ok((ok, cells.join("; ")))
        },
    )
}

/// Normalized moments approach the Gaussian moments.
pub fn moment_convergence_check() -> Outcome {
    timed(
        6,
        "moment convergence",
        Some(tolerances::MOMENT_RUNTIME),
        || {
            let gf = gf(2)?;
            let lens = [25, 50, 100, 200];
            let report = moment_convergence(&gf, 6, &lens)?;
            let mut ok = true;
            let mut cells = Vec::new();
            for (k, bound) in [
                (2, tolerances::M2_ABS),
                (4, tolerances::M4_REL),
                (6, tolerances::M6_REL),
            ] {
                let at_200 = report.row(k, 200).map(|r| r.deviation).unwrap_or(f64::NAN);
                let trend = report.strictly_converging(k);
                ok &= trend && at_200 <= bound;
                cells.push(format!(
                    "k={k} deviation(l=200)={at_200:.3e} decreasing={trend}"
                ));
            }
            Ok((ok, cells.join("; ")))
        },
    )
}

/// Exact interval probabilities approach the Gaussian ones.
pub fn distributional_convergence() -> Outcome {
    timed(7, "distributional convergence", None, || {
        let params = BouquetParams::new(2, 1)?;
        let grid = default_grid();
        let discrepancies = [12, 50, 200]
            .iter()
            .map(|&l| gaussian_discrepancy(&distribution(&params, l)?, &grid))
            .collect::<Result<Vec<f64>>>()?;
        let trend = discrepancies.windows(2).all(|w| w[1] < w[0]);
        let cdf_error = (gaussian_cdf(1.96) - 0.975_002_104_852).abs();
        let symmetric = [0.3, 1.0, 2.7, 5.5]
            .iter()
            .all(|&x| (gaussian_cdf(x) + gaussian_cdf(-x) - 1.0).abs() <= tolerances::CDF_ABS);
        let ok = trend
            && discrepancies[2] <= tolerances::DISCREPANCY
            && cdf_error <= tolerances::CDF_ABS
            && gaussian_cdf(0.0) == 0.5
            && symmetric;
        Ok((
            ok,
            format!(
                "discrepancy(l=12,50,200)=[{:.6}, {:.6}, {:.6}] decreasing={trend}; |Phi(1.96)-ref|={cdf_error:.1e}",
                discrepancies[0], discrepancies[1], discrepancies[2]
            ),
        ))
    })
}

/// Chi-square statistic of observed against expected counts, with bins whose
/// expectation is below 5 pooled into their neighbour. Returns the statistic
/// and degrees of freedom.
pub fn chi_square(observed: &[u64], probabilities: &[f64]) -> (f64, usize) {
    let total: u64 = observed.iter().sum();
    let mut pooled: Vec<(f64, f64)> = Vec::new();
    let mut pending = (0.0, 0.0);
    for (&o, &p) in observed.iter().zip(probabilities) {
        pending.0 += o as f64;
        pending.1 += p * total as f64;
        if pending.1 >= 5.0 {
            pooled.push(pending);
            pending = (0.0, 0.0);
        }
    }
    if pending.1 > 0.0 {
        match pooled.last_mut() {
            Some(last) => {
                last.0 += pending.0;
                last.1 += pending.1;
            }
            None => pooled.push(pending),
        }
    }
    let stat = pooled.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    (stat, pooled.len().saturating_sub(1))
}

/// The sampler's `log_j` frequencies match the exact histogram, and a fixed
/// seed reproduces its output.
pub fn sampler_correctness(opts: &SuiteOptions) -> Outcome {
    timed(8, "uniform sampler", None, || {
        const SEED: u64 = 0x5eed_2026;
        let (n, m) = (2, 6);
        let sampler = UniformSampler::new(n, m)?;
        let hist = crate::words::histogram_at_length(n, 1, m)?;
        let total = to_f64(&Rational::from_integer(hist.total().into()));
        let mut observed: BTreeMap<i64, u64> = hist.iter().map(|(v, _)| (v, 0)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        for _ in 0..opts.sampler_draws {
            let w = sampler.sample(&mut rng);
            *observed.entry(w.log(1)?).or_default() += 1;
        }
        let obs: Vec<u64> = observed.values().copied().collect();
        let probs: Vec<f64> = observed
            .keys()
            .map(|&v| to_f64(&Rational::from_integer(hist.get(v).into())) / total)
            .collect();
        let (stat, df) = chi_square(&obs, &probs);
        let critical = ChiSquared::new(df as f64)
            .map_err(|e| crate::Error::InvalidArgument(e.to_string()))?
            .inverse_cdf(1.0 - tolerances::CHI_SQUARE_ALPHA);

        let render = |seed: u64| -> String {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..64)
                .map(|_| sampler.sample(&mut rng).to_string())
                .collect::<Vec<_>>()
                .join("\n")
        };
        let reproducible = render(SEED) == render(SEED)
            && render(SEED) == {
                let again = UniformSampler::new(n, m)?;
                let mut rng = ChaCha8Rng::seed_from_u64(SEED);
                (0..64)
                    .map(|_| again.sample(&mut rng).to_string())
                    .collect::<Vec<_>>()
                    .join("\n")
            };
        Ok((
            stat < critical && reproducible,
            format!(
                "{} draws: chi2={stat:.3} df={df} critical={critical:.3}; reproducible={reproducible}",
                opts.sampler_draws
            ),
        ))
    })
}

/// Regression constants.
pub fn anchor_values() -> Outcome {
    timed(9, "anchor values", None, || {
        let gf = gf(2)?;
        let s2: Vec<BigInt> = (1..=3)
            .map(|m| -> Result<BigInt> {
                Ok(enumerate_cyclic(2, m)?
                    .map(|w| w.log(1).map(|v| BigInt::from(v * v)))
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .sum())
            })
            .collect::<Result<_>>()?;
        let s2_g = gf.power_sums(2, 3)?;
        let counts: Vec<usize> = (1..=3)
            .map(|m| enumerate_cyclic(2, m).map(|it| it.count()))
            .collect::<Result<_>>()?;
        let m2 = moment(&gf, 2, 3)?;
        let expected_s2: Vec<BigInt> = vec![2.into(), 16.into(), 78.into()];
        let ok = s2 == expected_s2
            && (1..=3).all(|m| s2_g.get(m) == expected_s2[m - 1])
            && counts == [4, 12, 28]
            && m2 == Rational::new(9.into(), 11.into())
            && !m2.is_one();
        Ok((
            ok,
            format!("S_2(1..3)={s2:?} counts={counts:?} M_2(X_3)={m2}"),
        ))
    })
}

/// Run every criterion in order.
pub fn run_all(opts: &SuiteOptions) -> Vec<Outcome> {
    vec![
        exact_counts(opts),
        exact_power_sums(opts),
        laurent_expansion(),
        residue(),
        tauberian_main_terms(),
        moment_convergence_check(),
        distributional_convergence(),
        sampler_correctness(opts),
        anchor_values(),
    ]
}
