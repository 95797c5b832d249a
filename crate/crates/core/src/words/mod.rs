//! Free-group word combinatorics.
//!
//! Letters of the rank-`n` alphabet are ordered `A_1, A_1^-1, A_2, A_2^-1,
//! ..., A_n^-1`, so a letter's index is `2 (generator - 1) + inverted` and
//! its inverse is `index ^ 1`. Enumeration order and matrix indexing both use
//! this order.
//!
//! Textual form: `a3` is `A_3`, `a3'` is `A_3^-1`, and words are
//! space-separated letters (`"a1 a2' a1"`). The empty word prints as the
//! empty string.

mod enumerate;
mod sample;
mod transfer;

use std::fmt;
use std::str::FromStr;

use crate::ratfunc::Rational;
use crate::{Error, Result};

pub use enumerate::{
    enumerate_cyclic, enumerate_cyclic_with_cap, CyclicWords, DEFAULT_ENUMERATION_CAP,
};
pub use sample::{sample_uniform, UniformSampler};
pub use transfer::{
    histogram_at_length, transfer_matrix, twisted_letter_weight, Histogram, HistogramSeries,
    IntMatrix,
};

pub(crate) fn check_rank(rank: usize) -> Result<()> {
    if rank < 2 {
        Err(Error::InvalidRank(rank))
    } else {
        Ok(())
    }
}

pub(crate) fn check_generator(index: usize, rank: usize) -> Result<()> {
    if index == 0 || index > rank {
        Err(Error::InvalidGenerator { index, rank })
    } else {
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

/// A generator `A_i` or its inverse. Generators are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub sign: Sign,
}

impl Letter {
    pub fn new(generator: usize, sign: Sign) -> Self {
        Letter { generator, sign }
    }

    pub fn pos(generator: usize) -> Self {
        Letter::new(generator, Sign::Pos)
    }

    pub fn neg(generator: usize) -> Self {
        Letter::new(generator, Sign::Neg)
    }

    pub fn inverse(self) -> Self {
        Letter::new(self.generator, self.sign.flip())
    }

    pub fn cancels(self, other: Letter) -> bool {
        self.generator == other.generator && self.sign != other.sign
    }

    /// Position in the alphabet order `A_1, A_1^-1, A_2, ...`.
    pub fn index(self) -> usize {
        2 * (self.generator - 1) + usize::from(self.sign == Sign::Neg)
    }

    pub fn from_index(index: usize) -> Self {
        let sign = if index % 2 == 0 { Sign::Pos } else { Sign::Neg };
        Letter::new(index / 2 + 1, sign)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Pos => write!(f, "a{}", self.generator),
            Sign::Neg => write!(f, "a{}'", self.generator),
        }
    }
}

impl FromStr for Letter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = parse_letters(s)?;
        match letters.as_slice() {
            [l] => Ok(*l),
            _ => Err(Error::Parse(format!("expected a single letter, got {s:?}"))),
        }
    }
}

/// Parse letters such as `"a1 a2' a1"` or `"a1a2'a1"`. Generator ranges are
/// not checked here.
pub fn parse_letters(s: &str) -> Result<Vec<Letter>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b if b.is_ascii_whitespace() => i += 1,
            b'a' | b'A' => {
                let start = i + 1;
                let mut end = start;
                while end < bytes.len() && bytes[end].is_ascii_digit() {
                    end += 1;
                }
                let generator: usize = s[start..end].parse().map_err(|_| {
                    Error::Parse(format!("missing generator number at byte {i} in {s:?}"))
                })?;
                if generator == 0 {
                    return Err(Error::Parse(format!("generator 0 at byte {i} in {s:?}")));
                }
                let sign = if bytes.get(end) == Some(&b'\'') {
                    end += 1;
                    Sign::Neg
                } else {
                    Sign::Pos
                };
                out.push(Letter::new(generator, sign));
                i = end;
            }
            _ => {
                return Err(Error::Parse(format!(
                    "unexpected character at byte {i} in {s:?}"
                )))
            }
        }
    }
    Ok(out)
}

pub fn format_letters(letters: &[Letter]) -> String {
    letters
        .iter()
        .map(Letter::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Shared read-only view of reduced and cyclically reduced words.
pub trait Word {
    fn rank(&self) -> usize;
    fn letters(&self) -> &[Letter];

    /// Word length `wl`.
    fn len(&self) -> usize {
        self.letters().len()
    }

    fn is_empty(&self) -> bool {
        self.letters().is_empty()
    }

    /// Signed number of occurrences of `A_j`.
    fn log(&self, j: usize) -> Result<i64> {
        check_generator(j, self.rank())?;
        Ok(self
            .letters()
            .iter()
            .filter(|l| l.generator == j)
            .map(|l| l.sign.value())
            .sum())
    }
}

/// A freely reduced word: no letter is followed by its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReducedWord {
    rank: usize,
    letters: Vec<Letter>,
}

impl ReducedWord {
    /// Accepts `letters` only if they are already reduced.
    pub fn new(rank: usize, letters: Vec<Letter>) -> Result<Self> {
        validate_letters(rank, &letters)?;
        if let Some(i) = letters.windows(2).position(|w| w[0].cancels(w[1])) {
            return Err(Error::InvalidArgument(format!(
                "letters {i} and {} cancel",
                i + 1
            )));
        }
        Ok(ReducedWord { rank, letters })
    }

    pub fn identity(rank: usize) -> Self {
        ReducedWord {
            rank,
            letters: Vec::new(),
        }
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(a), Some(b)) => !a.cancels(*b),
            _ => true,
        }
    }
}

impl Word for ReducedWord {
    fn rank(&self) -> usize {
        self.rank
    }
    fn letters(&self) -> &[Letter] {
        &self.letters
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_letters(&self.letters))
    }
}

/// A cyclically reduced word: reduced, and the last letter does not cancel
/// the first. The empty word qualifies but is excluded from every statistic
/// in this crate, which all start at length 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclicWord {
    rank: usize,
    letters: Vec<Letter>,
}

/// Exact pieces of the normalized logarithm `sqrt((n-1)/wl) * log_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedLog {
    pub log: i64,
    /// `(n - 1) / wl`
    pub radicand: Rational,
    pub value: f64,
}

impl CyclicWord {
    pub fn new(rank: usize, letters: Vec<Letter>) -> Result<Self> {
        let w = ReducedWord::new(rank, letters)?;
        if !w.is_cyclically_reduced() {
            return Err(Error::InvalidArgument(
                "first and last letters cancel".into(),
            ));
        }
        Ok(CyclicWord {
            rank,
            letters: w.letters,
        })
    }

    pub(crate) fn from_indices(rank: usize, indices: &[usize]) -> Self {
        CyclicWord {
            rank,
            letters: indices.iter().map(|&i| Letter::from_index(i)).collect(),
        }
    }

    pub fn normalized_log(&self, j: usize) -> Result<NormalizedLog> {
        if self.is_empty() {
            return Err(Error::EmptyWord);
        }
        let log = self.log(j)?;
        let radicand = Rational::new((self.rank as i64 - 1).into(), (self.len() as i64).into());
        let value = ((self.rank - 1) as f64 / self.len() as f64).sqrt() * log as f64;
        Ok(NormalizedLog {
            log,
            radicand,
            value,
        })
    }
}

impl Word for CyclicWord {
    fn rank(&self) -> usize {
        self.rank
    }
    fn letters(&self) -> &[Letter] {
        &self.letters
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_letters(&self.letters))
    }
}

impl From<CyclicWord> for ReducedWord {
    fn from(w: CyclicWord) -> Self {
        ReducedWord {
            rank: w.rank,
            letters: w.letters,
        }
    }
}

fn validate_letters(rank: usize, letters: &[Letter]) -> Result<()> {
    check_rank(rank)?;
    letters
        .iter()
        .try_for_each(|l| check_generator(l.generator, rank))
}

/// Free reduction by a single left-to-right pass with a stack.
pub fn reduce(rank: usize, letters: &[Letter]) -> Result<ReducedWord> {
    validate_letters(rank, letters)?;
    let mut stack: Vec<Letter> = Vec::with_capacity(letters.len());
    for &l in letters {
        if stack.last().is_some_and(|top| top.cancels(l)) {
            stack.pop();
        } else {
            stack.push(l);
        }
    }
    Ok(ReducedWord {
        rank,
        letters: stack,
    })
}

/// Strip cancelling first/last pairs until the word is cyclically reduced.
/// The result is a conjugate of `w`, so every `log_j` is unchanged.
pub fn cyclic_reduce(w: &ReducedWord) -> CyclicWord {
    let letters = &w.letters;
    let mut lo = 0;
    let mut hi = letters.len();
    while hi - lo >= 2 && letters[lo].cancels(letters[hi - 1]) {
        lo += 1;
        hi -= 1;
    }
    CyclicWord {
        rank: w.rank,
        letters: letters[lo..hi].to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn a() -> Letter {
        Letter::pos(1)
    }
    fn ai() -> Letter {
        Letter::neg(1)
    }
    fn b() -> Letter {
        Letter::pos(2)
    }
    fn bi() -> Letter {
        Letter::neg(2)
    }

    #[test]
    fn reduce_examples() {
        assert!(reduce(2, &[a(), ai()]).unwrap().is_empty());
        assert_eq!(
            reduce(2, &[a(), b(), bi(), a()]).unwrap().letters(),
            &[a(), a()]
        );
        assert_eq!(
            reduce(2, &[a(), b(), ai()]).unwrap().letters(),
            &[a(), b(), ai()]
        );
    }

    #[test]
    fn reduce_rejects_bad_generator() {
        assert_eq!(
            reduce(2, &[Letter::pos(3)]),
            Err(Error::InvalidGenerator { index: 3, rank: 2 })
        );
        assert_eq!(reduce(1, &[]), Err(Error::InvalidRank(1)));
    }

    #[test]
    fn cyclic_reduce_examples() {
        let w = reduce(2, &[a(), b(), ai()]).unwrap();
        assert_eq!(cyclic_reduce(&w).letters(), &[b()]);
        let w = reduce(2, &[b()]).unwrap();
        assert_eq!(cyclic_reduce(&w).letters(), &[b()]);
        let w = reduce(2, &[a(), a(), b(), ai(), ai()]).unwrap();
        assert_eq!(cyclic_reduce(&w).letters(), &[b()]);
    }

    #[test]
    fn log_examples() {
        let w = reduce(2, &[a(), a(), bi()]).unwrap();
        assert_eq!(w.log(1).unwrap(), 2);
        assert_eq!(reduce(2, &[a(), ai()]).unwrap().log(1).unwrap(), 0);
        let w = reduce(2, &[a(), b(), ai()]).unwrap();
        assert_eq!(w.log(1).unwrap(), 0);
        assert_eq!(cyclic_reduce(&w).log(1).unwrap(), 0);
        assert!(matches!(w.log(3), Err(Error::InvalidGenerator { .. })));
        assert!(matches!(w.log(0), Err(Error::InvalidGenerator { .. })));
    }

    #[test]
    fn normalized_log_examples() {
        let w = CyclicWord::new(2, vec![a()]).unwrap();
        assert_eq!(w.normalized_log(1).unwrap().value, 1.0);
        let w = CyclicWord::new(2, vec![a(), a(), b(), b()]).unwrap();
        let nl = w.normalized_log(1).unwrap();
        assert_eq!(nl.value, 1.0);
        assert_eq!(nl.log, 2);
        assert_eq!(nl.radicand, Rational::new(1.into(), 4.into()));
        let w = CyclicWord::new(2, vec![b(), b()]).unwrap();
        assert_eq!(w.normalized_log(1).unwrap().value, 0.0);
        let e = CyclicWord::new(2, vec![]).unwrap();
        assert_eq!(e.normalized_log(1), Err(Error::EmptyWord));
    }

    #[test]
    fn cyclic_word_rejects_wraparound_cancellation() {
        assert!(CyclicWord::new(2, vec![a(), b(), ai()]).is_err());
        assert!(CyclicWord::new(2, vec![a(), ai()]).is_err());
    }

    #[test]
    fn letter_text_round_trip() {
        let letters = vec![a(), Letter::neg(12), b()];
        let s = format_letters(&letters);
        assert_eq!(s, "a1 a12' a2");
        assert_eq!(parse_letters(&s).unwrap(), letters);
        assert_eq!(parse_letters("a1a12'a2").unwrap(), letters);
        assert!(parse_letters("a1 b2").is_err());
        assert!(parse_letters("a").is_err());
        assert_eq!("a2'".parse::<Letter>().unwrap(), bi());
    }

    #[test]
    fn index_order_pairs_inverses() {
        for i in 0..8 {
            let l = Letter::from_index(i);
            assert_eq!(l.index(), i);
            assert_eq!(l.inverse().index(), i ^ 1);
        }
    }

    fn arb_letters(rank: usize) -> impl Strategy<Value = Vec<Letter>> {
        prop::collection::vec((1..=rank, any::<bool>()), 0..40).prop_map(|v| {
            v.into_iter()
                .map(|(g, inv)| Letter::new(g, if inv { Sign::Neg } else { Sign::Pos }))
                .collect()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn reduce_is_idempotent(letters in arb_letters(3)) {
            let once = reduce(3, &letters).unwrap();
            let twice = reduce(3, once.letters()).unwrap();
            prop_assert_eq!(&once, &twice);
            prop_assert!(ReducedWord::new(3, once.letters().to_vec()).is_ok());
        }

        #[test]
        fn cyclic_reduction_preserves_logs(letters in arb_letters(3)) {
            let w = reduce(3, &letters).unwrap();
            let c = cyclic_reduce(&w);
            prop_assert!(CyclicWord::new(3, c.letters().to_vec()).is_ok());
            for j in 1..=3 {
                prop_assert_eq!(w.log(j).unwrap(), c.log(j).unwrap());
            }
        }
    }
}
