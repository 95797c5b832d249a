use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::{check_generator, check_rank};
use crate::Result;

/// Dense square matrix of arbitrary-precision nonnegative integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    size: usize,
    entries: Vec<BigUint>,
}

impl IntMatrix {
    pub fn zeros(size: usize) -> Self {
        IntMatrix {
            size,
            entries: vec![BigUint::zero(); size * size],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size);
        for i in 0..size {
            m.entries[i * size + i] = BigUint::one();
        }
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, row: usize, col: usize) -> &BigUint {
        &self.entries[row * self.size + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: BigUint) {
        self.entries[row * self.size + col] = value;
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.size, rhs.size);
        let n = self.size;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> IntMatrix {
        let mut base = self.clone();
        let mut acc = Self::identity(self.size);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn trace(&self) -> BigUint {
        (0..self.size).map(|i| self.get(i, i)).sum()
    }
}

/// The `2n x 2n` letter adjacency matrix: entry `(x, y)` is 1 unless `y` is
/// the inverse of `x`. `trace(M^m)` counts cyclically reduced words of length
/// `m`, since those are exactly the closed walks of length `m`.
pub fn transfer_matrix(rank: usize) -> Result<IntMatrix> {
    check_rank(rank)?;
    let size = 2 * rank;
    let mut m = IntMatrix::zeros(size);
    for x in 0..size {
        for y in 0..size {
            if y != x ^ 1 {
                m.set(x, y, BigUint::one());
            }
        }
    }
    Ok(m)
}

/// Exponent of the formal character weight `t` carried by a letter index:
/// `+1` for `A_j`, `-1` for `A_j^-1`, `0` otherwise.
pub fn twisted_letter_weight(letter_index: usize, j: usize) -> i64 {
    if letter_index / 2 + 1 != j {
        0
    } else if letter_index % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Number of cyclically reduced words of one length at each value of
/// `log_j`. Only values with a nonzero count are stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Histogram {
    counts: BTreeMap<i64, BigUint>,
}

impl Histogram {
    pub fn from_counts(counts: BTreeMap<i64, BigUint>) -> Self {
        Histogram {
            counts: counts.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn get(&self, value: i64) -> BigUint {
        self.counts.get(&value).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &BigUint)> {
        self.counts.iter().map(|(&v, c)| (v, c))
    }

    pub fn total(&self) -> BigUint {
        self.counts.values().sum()
    }

    /// `sum_v v^k counts(v)`
    pub fn power_sum(&self, k: u32) -> BigInt {
        self.counts
            .iter()
            .map(|(&v, c)| num_traits::pow(BigInt::from(v), k as usize) * BigInt::from(c.clone()))
            .sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.counts.iter().all(|(&v, c)| self.get(-v) == *c)
    }
}

/// Histograms of `log_j` for lengths `1, 2, 3, ...`, read off the traces of
/// powers of the twisted transfer matrix.
///
/// Entry `(x, y)` of the twisted matrix is `t^{w(y)}` (with `w` from
/// [`twisted_letter_weight`]) unless `y` cancels `x`, in which case it is 0.
/// Each entry of the running power is a Laurent polynomial in `t`, stored as
/// a dense coefficient vector over exponents `-m..=m`. Right-multiplying by
/// the twisted matrix only needs row sums:
/// `(P M)[x][y] = t^{w(y)} (rowsum_x - P[x][y^-1])`.
#[derive(Clone, Debug)]
pub struct HistogramSeries {
    size: usize,
    weights: Vec<i64>,
    length: usize,
    // power[x][y][e + length] is the coefficient of t^e
    power: Vec<Vec<Vec<BigUint>>>,
}

impl HistogramSeries {
    pub fn new(rank: usize, j: usize) -> Result<Self> {
        check_rank(rank)?;
        check_generator(j, rank)?;
        let size = 2 * rank;
        let weights = (0..size).map(|x| twisted_letter_weight(x, j)).collect();
        Ok(HistogramSeries {
            size,
            weights,
            length: 0,
            power: Vec::new(),
        })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    fn step(&mut self) {
        let old = self.length;
        let new = old + 1;
        let width = 2 * new + 1;
        let mut next = vec![vec![vec![BigUint::zero(); width]; self.size]; self.size];
        if old == 0 {
            for (x, row) in next.iter_mut().enumerate() {
                for (y, entry) in row.iter_mut().enumerate() {
                    if y != x ^ 1 {
                        entry[(self.weights[y] + new as i64) as usize] = BigUint::one();
                    }
                }
            }
        } else {
            for (x, row) in self.power.iter().enumerate() {
                let mut rowsum = vec![BigUint::zero(); 2 * old + 1];
                for entry in row {
                    for (acc, c) in rowsum.iter_mut().zip(entry) {
                        if !c.is_zero() {
                            *acc += c;
                        }
                    }
                }
                for y in 0..self.size {
                    let skip = &row[y ^ 1];
                    // exponent e in the old window lands at e + w(y) in the new one
                    let offset = (1 + self.weights[y]) as usize;
                    let target = &mut next[x][y];
                    for (i, (s, c)) in rowsum.iter().zip(skip).enumerate() {
                        if s > c {
                            target[i + offset] = s - c;
                        }
                    }
                }
            }
        }
        self.power = next;
        self.length = new;
    }

    fn trace_histogram(&self) -> Histogram {
        let m = self.length as i64;
        let mut counts = BTreeMap::new();
        for x in 0..self.size {
            for (i, c) in self.power[x][x].iter().enumerate() {
                if !c.is_zero() {
                    *counts.entry(i as i64 - m).or_insert_with(BigUint::zero) += c;
                }
            }
        }
        Histogram { counts }
    }
}

impl Iterator for HistogramSeries {
    type Item = (usize, Histogram);

    fn next(&mut self) -> Option<Self::Item> {
        self.step();
        Some((self.length, self.trace_histogram()))
    }
}

/// Histogram of `log_j` over cyclically reduced words of length `length`.
/// Length 0 gives the empty histogram.
pub fn histogram_at_length(rank: usize, j: usize, length: usize) -> Result<Histogram> {
    let series = HistogramSeries::new(rank, j)?;
    if length == 0 {
        return Ok(Histogram::default());
    }
    Ok(series
        .take(length)
        .last()
        .map(|(_, h)| h)
        .expect("length >= 1"))
}
