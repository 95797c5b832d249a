use num_bigint::{BigUint, RandBigInt};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{check_rank, transfer_matrix, CyclicWord, IntMatrix};
use crate::{Error, Result};

/// Exactly uniform sampler over cyclically reduced words of one length.
///
/// The number of cyclic words whose first `p` letters are fixed, with `x_p`
/// last and `x_1` first, is `(M^{m-p+1})[x_p][x_1]`: a walk from `x_p`
/// through the remaining letters and back to `x_1`. Letters are drawn one at
/// a time with probability proportional to these big-integer weights, so no
/// draw is ever rejected.
#[derive(Clone, Debug)]
pub struct UniformSampler {
    rank: usize,
    length: usize,
    adjacency: IntMatrix,
    // powers[e] = M^e for e in 0..=length
    powers: Vec<IntMatrix>,
}

impl UniformSampler {
    pub fn new(rank: usize, length: usize) -> Result<Self> {
        check_rank(rank)?;
        if length == 0 {
            return Err(Error::InvalidArgument(
                "sample length must be at least 1".into(),
            ));
        }
        let adjacency = transfer_matrix(rank)?;
        let mut powers = vec![IntMatrix::identity(2 * rank)];
        for e in 1..=length {
            let next = powers[e - 1].mul(&adjacency);
            powers.push(next);
        }
        Ok(UniformSampler {
            rank,
            length,
            adjacency,
            powers,
        })
    }

    /// Number of words the sampler draws from.
    pub fn population(&self) -> BigUint {
        self.powers[self.length].trace()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> CyclicWord {
        let size = 2 * self.rank;
        let m = self.length;
        let first = choose(rng, (0..size).map(|x| self.powers[m].get(x, x).clone()));
        let mut letters = Vec::with_capacity(m);
        letters.push(first);
        for p in 1..m {
            let prev = letters[p - 1];
            // remaining after the new letter: m - p - 1 letters, then back to `first`
            let remaining = &self.powers[m - p];
            let weights = (0..size).map(|z| {
                if self.adjacency.get(prev, z).is_zero() {
                    BigUint::zero()
                } else {
                    remaining.get(z, first).clone()
                }
            });
            letters.push(choose(rng, weights));
        }
        CyclicWord::from_indices(self.rank, &letters)
    }
}

/// Inverse-CDF selection of an index with probability proportional to its
/// weight. At least one weight must be positive.
fn choose<R: Rng + ?Sized>(rng: &mut R, weights: impl Iterator<Item = BigUint>) -> usize {
    let weights: Vec<BigUint> = weights.collect();
    let total: BigUint = weights.iter().sum();
    let mut target = rng.gen_biguint_below(&total);
    for (i, w) in weights.iter().enumerate() {
        if &target < w {
            return i;
        }
        target -= w;
    }
    unreachable!("target below total weight")
}

/// One uniformly random cyclically reduced word, deterministic in `seed`.
pub fn sample_uniform(rank: usize, length: usize, seed: u64) -> Result<CyclicWord> {
    let sampler = UniformSampler::new(rank, length)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(sampler.sample(&mut rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{enumerate_cyclic, ReducedWord, Word};
    use std::collections::HashMap;

    #[test]
    fn deterministic_per_seed() {
        let a = sample_uniform(3, 12, 7).unwrap();
        let b = sample_uniform(3, 12, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 12);
        assert!(ReducedWord::from(a).is_cyclically_reduced());
    }

    #[test]
    fn length_one_hits_each_letter() {
        let sampler = UniformSampler::new(2, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut hits = [0usize; 4];
        for _ in 0..4000 {
            hits[sampler.sample(&mut rng).letters()[0].index()] += 1;
        }
        for h in hits {
            assert!((850..1150).contains(&h), "{hits:?}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(UniformSampler::new(2, 0).is_err());
        assert!(UniformSampler::new(1, 3).is_err());
    }

    #[test]
    fn covers_every_word_roughly_evenly() {
        // 84 words at n=2, m=4: each should be drawn about 400 times
        let sampler = UniformSampler::new(2, 4).unwrap();
        assert_eq!(sampler.population(), BigUint::from(84u32));
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut hits: HashMap<String, usize> = HashMap::new();
        for _ in 0..84 * 400 {
            *hits
                .entry(sampler.sample(&mut rng).to_string())
                .or_default() += 1;
        }
        assert_eq!(hits.len(), 84);
        for w in enumerate_cyclic(2, 4).unwrap() {
            let h = hits[&w.to_string()];
            assert!((300..500).contains(&h), "{w}: {h}");
        }
    }
}
