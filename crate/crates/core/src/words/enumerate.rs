use super::{check_rank, CyclicWord};
use crate::{Error, Result};

/// Default ceiling on the estimated number of reduced words visited,
/// `(2n-1)^m`. Equal to `3^16`, i.e. lengths up to 16 at rank 2.
pub const DEFAULT_ENUMERATION_CAP: f64 = 43_046_721.0;

/// Every cyclically reduced word of a fixed length, each exactly once, in
/// lexicographic order of letter indices (`A_1 < A_1^-1 < A_2 < ...`).
///
/// The walk is depth-first over reduced words: each position only takes
/// letters that do not cancel the previous one, and a candidate is emitted
/// when its last letter also does not cancel its first.
#[derive(Clone, Debug)]
pub struct CyclicWords {
    rank: usize,
    current: Vec<usize>,
    started: bool,
    done: bool,
}

impl CyclicWords {
    /// No cost check; see [`enumerate_cyclic`] for the capped entry point.
    pub fn new(rank: usize, length: usize) -> Result<Self> {
        check_rank(rank)?;
        Ok(CyclicWords {
            rank,
            current: vec![0; length],
            started: false,
            done: length == 0,
        })
    }

    fn alphabet(&self) -> usize {
        2 * self.rank
    }

    /// Smallest letter allowed after `prev`.
    fn first_after(prev: Option<usize>) -> usize {
        match prev {
            Some(1) => 1,
            _ => 0,
        }
    }

    /// Next letter after `value` at a position whose predecessor is `prev`.
    fn next_after(&self, prev: Option<usize>, value: usize) -> Option<usize> {
        let mut v = value + 1;
        if prev.is_some_and(|p| p ^ 1 == v) {
            v += 1;
        }
        (v < self.alphabet()).then_some(v)
    }

    fn fill_from(&mut self, pos: usize) {
        for i in pos..self.current.len() {
            let prev = i.checked_sub(1).map(|p| self.current[p]);
            self.current[i] = Self::first_after(prev);
        }
    }

    /// Step to the next reduced word in lexicographic order.
    fn advance(&mut self) -> bool {
        let mut pos = self.current.len();
        while pos > 0 {
            pos -= 1;
            let prev = pos.checked_sub(1).map(|p| self.current[p]);
            if let Some(v) = self.next_after(prev, self.current[pos]) {
                self.current[pos] = v;
                self.fill_from(pos + 1);
                return true;
            }
        }
        false
    }

    fn wraps(&self) -> bool {
        let first = self.current[0];
        let last = *self.current.last().expect("nonempty");
        self.current.len() == 1 || first ^ 1 != last
    }
}

impl Iterator for CyclicWords {
    type Item = CyclicWord;

    fn next(&mut self) -> Option<CyclicWord> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.fill_from(0);
        } else if !self.advance() {
            self.done = true;
            return None;
        }
        loop {
            if self.wraps() {
                return Some(CyclicWord::from_indices(self.rank, &self.current));
            }
            if !self.advance() {
                self.done = true;
                return None;
            }
        }
    }
}

/// Cyclically reduced words of length `length` at rank `rank`, refusing when
/// `(2n-1)^m` exceeds [`DEFAULT_ENUMERATION_CAP`].
pub fn enumerate_cyclic(rank: usize, length: usize) -> Result<CyclicWords> {
    enumerate_cyclic_with_cap(rank, length, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_cyclic_with_cap(rank: usize, length: usize, cap: f64) -> Result<CyclicWords> {
    check_rank(rank)?;
    let estimate = ((2 * rank - 1) as f64).powi(length as i32);
    if estimate > cap {
        return Err(Error::EnumerationTooLarge {
            rank,
            length,
            estimate,
        });
    }
    CyclicWords::new(rank, length)
}
