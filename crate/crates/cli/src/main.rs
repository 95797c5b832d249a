//! `freelog`: exact counts, power sums and limit-law checks for discrete
//! logarithms of cyclically reduced words in free groups.

mod output;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use freelog::acceptance::{self, SuiteOptions};
use freelog::asymptotics::{pochhammer_prediction, powersum_partial_check, PartialSumPrediction};
use freelog::stats::{
    default_grid, distribution, gaussian_cdf, interval_comparisons, moment_convergence,
};
use freelog::words::{
    enumerate_cyclic, enumerate_cyclic_with_cap, transfer_matrix, UniformSampler, Word,
};
use freelog::zeta::{g0, RECOMMENDED_MAX_ORDER};
use freelog::{BouquetParams, Error, GeneratingFunctions, Rational};

use output::{format_real, Cell, Format, Report};

#[derive(Parser)]
#[command(name = "freelog", version, about)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Significant digits for real numbers.
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(u8).range(6..=30))]
    precision: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Rank {
    /// Number of free generators (at least 2).
    #[arg(long, default_value_t = 2)]
    n: usize,
}

#[derive(Args, Clone, Copy)]
struct RankGen {
    /// Number of free generators (at least 2).
    #[arg(long, default_value_t = 2)]
    n: usize,

    /// Generator whose signed count is tracked, `1..=n`.
    #[arg(long, default_value_t = 1)]
    j: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TauberianMode {
    /// Partial sums of `S_k(m)` against their closed-form main term.
    Powersum,
    /// Partial sums of the Pochhammer model series `(k)_m q^m / m!`.
    Pochhammer,
}

#[derive(Subcommand)]
enum Command {
    /// Count cyclically reduced words of each length four ways.
    Count {
        #[command(flatten)]
        rank: Rank,
        #[arg(long, default_value_t = 10)]
        max_len: usize,
        /// Lift the enumeration size cap.
        #[arg(long)]
        allow_large: bool,
    },
    /// Exact power sums `S_k(m)` of the discrete logarithm.
    Powersum {
        #[command(flatten)]
        rank: RankGen,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 10)]
        max_len: usize,
    },
    /// Numerator and denominator of the k-th generating function.
    Gk {
        #[command(flatten)]
        rank: RankGen,
        #[arg(long, default_value_t = 0)]
        k: usize,
    },
    /// Singular part of the k-th generating function at `u = 1/q`.
    Laurent {
        #[command(flatten)]
        rank: RankGen,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Exact partial sums against their asymptotic main terms.
    Tauberian {
        #[command(flatten)]
        rank: RankGen,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Comma-separated cutoffs.
        #[arg(long, value_delimiter = ',', default_value = "10,20,40")]
        lens: Vec<usize>,
        #[arg(long, value_enum, default_value_t = TauberianMode::Powersum)]
        mode: TauberianMode,
        /// Pochhammer mode: use the weights `(g/m)^{k/2}`.
        #[arg(long)]
        weighted: bool,
    },
    /// Normalized moments against the Gaussian moments.
    Moments {
        #[command(flatten)]
        rank: RankGen,
        #[arg(long, default_value_t = 6)]
        k_max: usize,
        #[arg(long, value_delimiter = ',', default_value = "25,50,100,200")]
        lens: Vec<usize>,
    },
    /// Exact interval probabilities of the normalized logarithm.
    Dist {
        #[command(flatten)]
        rank: RankGen,
        /// Longest word length included.
        #[arg(long, default_value_t = 50)]
        l: usize,
        /// Condition on a single word length instead of all lengths up to `l`.
        #[arg(long)]
        fixed_length: Option<usize>,
    },
    /// Uniformly random cyclically reduced words.
    Sample {
        #[command(flatten)]
        rank: RankGen,
        #[arg(long)]
        length: usize,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the acceptance suite.
    Verify {
        /// Smaller enumeration ranges and sample sizes.
        #[arg(long)]
        quick: bool,
    },
}

/// Failure modes mapped onto exit codes.
enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidRank(_)
            | Error::InvalidGenerator { .. }
            | Error::EnumerationTooLarge { .. }
            | Error::Parse(_)
            | Error::InvalidArgument(_)
            | Error::EmptyWord => Failure::Usage(e.to_string()),
            other => Failure::Check(other.to_string()),
        }
    }
}

type Outcome = Result<(Report, bool), Failure>;

fn params(rank: RankGen) -> Result<BouquetParams, Failure> {
    Ok(BouquetParams::new(rank.n, rank.j)?)
}

fn rat(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

fn cmd_count(rank: Rank, max_len: usize, allow_large: bool) -> Outcome {
    let p = BouquetParams::new(rank.n, 1)?;
    if max_len == 0 {
        return Err(Failure::Usage("--max-len must be at least 1".into()));
    }
    let series = g0(&p).series(max_len)?;
    let adjacency = transfer_matrix(rank.n)?;
    let mut power = adjacency.clone();
    let mut report = Report::new(&[
        "m",
        "count",
        "formula_count",
        "trace_count",
        "g0_coefficient",
        "agree",
    ]);
    let mut all = true;
    for m in 1..=max_len {
        let words = if allow_large {
            enumerate_cyclic_with_cap(rank.n, m, f64::INFINITY)?
        } else {
            enumerate_cyclic(rank.n, m)?
        };
        let count = BigInt::from(words.count());
        let formula = BigInt::from(p.count_cyclic(m));
        let trace = BigInt::from(power.trace());
        let coeff = series[m].clone();
        let agree = count == formula && count == trace && coeff == rat(count.clone());
        all &= agree;
        report.push(vec![
            m.into(),
            count.into(),
            formula.into(),
            trace.into(),
            coeff.into(),
            agree.into(),
        ]);
        power = power.mul(&adjacency);
    }
    Ok((report, all))
}

fn cmd_powersum(rank: RankGen, k: usize, max_len: usize) -> Outcome {
    let gf = GeneratingFunctions::new(params(rank)?);
    if k % 2 == 1 {
        eprintln!("note: odd k, every power sum vanishes (inversion symmetry)");
    }
    let table = gf.power_sums(k, max_len)?;
    let mut report = Report::new(&["m", "power_sum"]);
    for (m, v) in &table.entries {
        report.push(vec![(*m).into(), v.clone().into()]);
    }
    Ok((report, true))
}

fn coefficient_list(p: &freelog::Polynomial) -> Cell {
    let coeffs = p.coeffs();
    if coeffs.is_empty() {
        return Cell::List(vec![Rational::zero().into()]);
    }
    Cell::List(coeffs.iter().cloned().map(Cell::from).collect())
}

fn cmd_gk(rank: RankGen, k: usize) -> Outcome {
    if k > RECOMMENDED_MAX_ORDER {
        eprintln!("warning: k = {k} exceeds {RECOMMENDED_MAX_ORDER}; exact arithmetic may be slow");
    }
    let gf = GeneratingFunctions::new(params(rank)?);
    let f = gf.g_k(k);
    let mut report = Report::new(&["part", "degree", "coefficients"]);
    for (name, poly) in [
        ("numerator", f.numerator()),
        ("denominator", f.denominator()),
    ] {
        let degree = poly.degree().map_or(Cell::from("-inf"), Cell::from);
        report.push(vec![name.into(), degree, coefficient_list(poly)]);
    }
    Ok((report, true))
}

fn cmd_laurent(rank: RankGen, k: usize) -> Outcome {
    let gf = GeneratingFunctions::new(params(rank)?);
    let c = gf.laurent_check(k)?;
    let summary = format!(
        "order={} leading={} predicted={} match={}",
        c.order, c.leading, c.predicted_leading, c.matches
    );
    let mut report = Report::new(&[
        "pole",
        "order",
        "leading",
        "predicted_order",
        "predicted_leading",
        "match",
        "coefficients",
        "summary",
    ]);
    report.push(vec![
        c.singular.pole.clone().into(),
        c.order.into(),
        c.leading.clone().into(),
        c.predicted_order.into(),
        c.predicted_leading.clone().into(),
        c.matches.into(),
        Cell::List(
            c.singular
                .coefficients
                .iter()
                .cloned()
                .map(Cell::from)
                .collect(),
        ),
        summary.into(),
    ]);
    let poles = gf.poles(k);
    report.meta(
        "poles",
        Cell::List(
            poles
                .poles
                .iter()
                .map(|(p, mult)| Cell::Text(format!("{p}:{mult}")))
                .collect(),
        ),
    );
    report.meta("unexplained_pole_degree", poles.unexplained_degree);
    Ok((report, c.matches))
}

fn prediction_row(p: &PartialSumPrediction) -> Vec<Cell> {
    let ratio = p.ratio_f64().map_or(Cell::from(""), Cell::from);
    let deviation = p.deviation().map_or(Cell::from(""), Cell::from);
    vec![
        p.l.into(),
        p.exact_value.clone().into(),
        p.main_term.clone().into(),
        ratio,
        deviation,
    ]
}

fn cmd_tauberian(
    rank: RankGen,
    k: usize,
    lens: &[usize],
    mode: TauberianMode,
    weighted: bool,
) -> Outcome {
    let p = params(rank)?;
    if lens.contains(&0) {
        return Err(Failure::Usage("cutoffs must be positive".into()));
    }
    let gf = GeneratingFunctions::new(p);
    let mut report = Report::new(&["l", "exact", "main_term", "ratio", "deviation"]);
    for &l in lens {
        let pred = match mode {
            TauberianMode::Powersum => powersum_partial_check(&gf, k, l)?,
            TauberianMode::Pochhammer => pochhammer_prediction(k, l, &p.q_rational(), weighted)?,
        };
        report.push(prediction_row(&pred));
    }
    Ok((report, true))
}

fn cmd_moments(rank: RankGen, k_max: usize, lens: &[usize]) -> Outcome {
    let gf = GeneratingFunctions::new(params(rank)?);
    if lens.contains(&0) {
        return Err(Failure::Usage("cutoffs must be positive".into()));
    }
    let report_data = moment_convergence(&gf, k_max, lens)?;
    let mut report = Report::new(&["l", "k", "value", "decimal", "target", "deviation"]);
    for row in &report_data.rows {
        report.push(vec![
            row.l.into(),
            row.k.into(),
            row.value.clone().into(),
            row.decimal.into(),
            row.target.clone().into(),
            row.deviation.into(),
        ]);
    }
    for k in (2..=k_max).step_by(2) {
        eprintln!(
            "k={k}: strictly converging = {}",
            report_data.strictly_converging(k)
        );
    }
    Ok((report, true))
}

fn cmd_dist(rank: RankGen, l: usize, fixed: Option<usize>) -> Outcome {
    let p = params(rank)?;
    if let Some(m) = fixed {
        if m == 0 || m > l {
            return Err(Failure::Usage(format!(
                "--fixed-length must lie in 1..={l}"
            )));
        }
    }
    let dist = distribution(&p, l)?;
    let grid = default_grid();
    let mut report = Report::new(&["a", "b", "probability", "decimal", "gaussian", "difference"]);
    let mut worst: f64 = 0.0;
    match fixed {
        None => {
            for c in interval_comparisons(&dist, &grid)? {
                worst = worst.max(c.difference);
                report.push(vec![
                    c.a.into(),
                    c.b.into(),
                    c.probability.clone().into(),
                    freelog::asymptotics::to_f64(&c.probability).into(),
                    c.gaussian.into(),
                    c.difference.into(),
                ]);
            }
        }
        Some(m) => {
            for w in grid.windows(2) {
                let prob = dist.fixed_length_probability(m, &w[0], &w[1]);
                let decimal = freelog::asymptotics::to_f64(&prob);
                let gaussian = gaussian_cdf(freelog::asymptotics::to_f64(&w[1]))
                    - gaussian_cdf(freelog::asymptotics::to_f64(&w[0]));
                let difference = (decimal - gaussian).abs();
                worst = worst.max(difference);
                report.push(vec![
                    w[0].clone().into(),
                    w[1].clone().into(),
                    prob.into(),
                    decimal.into(),
                    gaussian.into(),
                    difference.into(),
                ]);
            }
        }
    }
    report.meta("l", l);
    if let Some(m) = fixed {
        report.meta("fixed_length", m);
    }
    report.meta("population", dist.total.clone());
    report.meta("total_probability", dist.total_probability());
    report.meta("symmetric", dist.is_symmetric());
    report.meta("discrepancy", worst);
    Ok((report, true))
}

fn cmd_sample(rank: RankGen, length: usize, count: usize, seed: u64) -> Outcome {
    let p = params(rank)?;
    if length == 0 {
        return Err(Failure::Usage("--length must be at least 1".into()));
    }
    let sampler = UniformSampler::new(p.n, length)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report::new(&["index", "word", "length", "log", "normalized_log"]);
    for i in 0..count {
        let w = sampler.sample(&mut rng);
        let nl = w.normalized_log(p.j)?;
        report.push(vec![
            i.into(),
            w.to_string().into(),
            w.len().into(),
            nl.log.into(),
            nl.value.into(),
        ]);
    }
    Ok((report, true))
}

fn cmd_verify(quick: bool) -> Outcome {
    let opts = if quick {
        SuiteOptions::quick()
    } else {
        SuiteOptions::full()
    };
    let outcomes = acceptance::run_all(&opts);
    let mut report = Report::new(&["id", "criterion", "passed", "measured"]);
    for o in &outcomes {
        eprintln!("criterion {}: {:.3?}", o.id, o.elapsed);
        report.push(vec![
            o.id.into(),
            o.name.into(),
            o.passed.into(),
            o.measured.clone().into(),
        ]);
    }
    let failed: Vec<String> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.id.to_string())
        .collect();
    if !failed.is_empty() {
        eprintln!("failed criteria: {}", failed.join(","));
    }
    Ok((report, failed.is_empty()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = match &cli.command {
        Command::Count {
            rank,
            max_len,
            allow_large,
        } => cmd_count(*rank, *max_len, *allow_large),
        Command::Powersum { rank, k, max_len } => cmd_powersum(*rank, *k, *max_len),
        Command::Gk { rank, k } => cmd_gk(*rank, *k),
        Command::Laurent { rank, k } => cmd_laurent(*rank, *k),
        Command::Tauberian {
            rank,
            k,
            lens,
            mode,
            weighted,
        } => cmd_tauberian(*rank, *k, lens, *mode, *weighted),
        Command::Moments { rank, k_max, lens } => cmd_moments(*rank, *k_max, lens),
        Command::Dist {
            rank,
            l,
            fixed_length,
        } => cmd_dist(*rank, *l, *fixed_length),
        Command::Sample {
            rank,
            length,
            count,
            seed,
        } => cmd_sample(*rank, *length, *count, *seed),
        Command::Verify { quick } => cmd_verify(*quick),
    };
    match result {
        Ok((report, ok)) => {
            let (out, err) = report.render(cli.format, cli.precision as usize);
            print!("{out}");
            eprint!("{err}");
            eprintln!(
                "elapsed: {}s",
                format_real(start.elapsed().as_secs_f64(), 6)
            );
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
