//! Benchmark input generators. Every generator produces a permutation of
//! `0..n`, so a key's value doubles as its rank.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("adversarial input needs s >= 2 and n >= 5*s (got n={n}, s={s})")]
    AdversaryPrecondition { n: usize, s: usize },
}

/// Input family for a benchmark run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    RandomDistinct,
    Ascending,
    Descending,
    /// Stride-aware layout that degrades thinned median-of-medians pivots.
    TBfprtAdversary,
}

impl GeneratorKind {
    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::RandomDistinct => "random",
            GeneratorKind::Ascending => "ascending",
            GeneratorKind::Descending => "descending",
            GeneratorKind::TBfprtAdversary => "adversary",
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeneratorKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "random" => Ok(GeneratorKind::RandomDistinct),
            "ascending" => Ok(GeneratorKind::Ascending),
            "descending" => Ok(GeneratorKind::Descending),
            "adversary" => Ok(GeneratorKind::TBfprtAdversary),
            other => Err(format!(
                "unknown generator '{}' (expected random, ascending, descending or adversary)",
                other
            )),
        }
    }
}

/// Everything needed to rebuild one input deterministically.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: usize,
    /// Thinning parameter targeted by [`GeneratorKind::TBfprtAdversary`];
    /// inert for the other kinds.
    pub s: usize,
    /// Shuffle seed for [`GeneratorKind::RandomDistinct`]; inert otherwise.
    pub seed: u64,
}

pub fn generate(spec: &GeneratorSpec) -> Result<Vec<u64>, GeneratorError> {
    match spec.kind {
        GeneratorKind::RandomDistinct => Ok(gen_random_distinct(spec.n, spec.seed)),
        GeneratorKind::Ascending => Ok(gen_ascending(spec.n)),
        GeneratorKind::Descending => Ok(gen_descending(spec.n)),
        GeneratorKind::TBfprtAdversary => gen_tbfprt_adversary(spec.n, spec.s),
    }
}

/// Seeded Fisher-Yates shuffle of `0..n`.
pub fn gen_random_distinct(n: usize, seed: u64) -> Vec<u64> {
    let mut keys: Vec<u64> = (0..n as u64).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in (1..n).rev() {
        let j = rand::Rng::random_range(&mut rng, 0..=i);
        keys.swap(i, j);
    }
    keys
}

pub fn gen_ascending(n: usize) -> Vec<u64> {
    (0..n as u64).collect()
}

pub fn gen_descending(n: usize) -> Vec<u64> {
    (0..n as u64).rev().collect()
}

/// Adversarial layout for the thinned median-of-medians pivot: the largest
/// keys are planted at every position divisible by `5s` (one per sample
/// group) and across the last `floor(n/s)` positions, both in ascending
/// order; the remaining positions carry the small keys in ascending order.
pub fn gen_tbfprt_adversary(n: usize, s: usize) -> Result<Vec<u64>, GeneratorError> {
    if s < 2 || n < 5 * s {
        return Err(GeneratorError::AdversaryPrecondition { n, s });
    }
    let tail_start = n - n / s;
    let marked: Vec<bool> = (0..n).map(|i| i % (5 * s) == 0 || i >= tail_start).collect();
    let planted = marked.iter().filter(|&&m| m).count();
    let mut big = (n - planted) as u64;
    let mut small = 0u64;
    let keys = marked
        .iter()
        .map(|&m| {
            if m {
                let v = big;
                big += 1;
                v
            } else {
                let v = small;
                small += 1;
                v
            }
        })
        .collect();
    Ok(keys)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_permutation(keys: &[u64]) -> bool {
        let mut seen = vec![false; keys.len()];
        for &k in keys {
            if k as usize >= keys.len() || seen[k as usize] {
                return false;
            }
            seen[k as usize] = true;
        }
        true
    }

    #[test]
    fn random_distinct_is_a_seeded_permutation() {
        assert!(gen_random_distinct(0, 1).is_empty());
        let a = gen_random_distinct(1000, 42);
        assert!(is_permutation(&a));
        assert_eq!(a, gen_random_distinct(1000, 42));
        assert_ne!(a, gen_random_distinct(1000, 43));
        assert_ne!(a, gen_ascending(1000), "seed 42 left the keys sorted");
    }

    #[test]
    fn ordered_generators() {
        assert_eq!(gen_ascending(5), [0, 1, 2, 3, 4]);
        assert_eq!(gen_descending(5), [4, 3, 2, 1, 0]);
        let mut up = gen_ascending(100);
        up.reverse();
        assert_eq!(up, gen_descending(100));
    }

    #[test]
    fn adversary_worked_example() {
        let keys = gen_tbfprt_adversary(20, 2).unwrap();
        assert_eq!(
            keys,
            [9, 0, 1, 2, 3, 4, 5, 6, 7, 8, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19]
        );
    }

    #[test]
    fn adversary_preconditions() {
        assert_eq!(
            gen_tbfprt_adversary(100, 1),
            Err(GeneratorError::AdversaryPrecondition { n: 100, s: 1 })
        );
        assert_eq!(
            gen_tbfprt_adversary(9, 2),
            Err(GeneratorError::AdversaryPrecondition { n: 9, s: 2 })
        );
        assert!(gen_tbfprt_adversary(10, 2).is_ok());
    }

    #[test]
    fn adversary_matches_set_construction() {
        for (n, s) in [(50usize, 2usize), (200, 4), (1000, 8), (123, 3)] {
            let keys = gen_tbfprt_adversary(n, s).unwrap();
            assert!(is_permutation(&keys));
            let marked: Vec<usize> = (0..n)
                .filter(|&i| i % (5 * s) == 0 || i >= n - n / s)
                .collect();
            let cutoff = (n - marked.len()) as u64;
            // Marked positions carry exactly the largest keys, ascending.
            let mut prev = None;
            for &i in &marked {
                assert!(keys[i] >= cutoff, "position {} got small key {}", i, keys[i]);
                if let Some(p) = prev {
                    assert!(keys[i] > p);
                }
                prev = Some(keys[i]);
            }
            let mut prev = None;
            for i in (0..n).filter(|i| !marked.contains(i)) {
                assert!(keys[i] < cutoff);
                if let Some(p) = prev {
                    assert!(keys[i] > p);
                }
                prev = Some(keys[i]);
            }
        }
    }

    #[test]
    fn generate_dispatches() {
        let spec = GeneratorSpec { kind: GeneratorKind::Ascending, n: 4, s: 1, seed: 0 };
        assert_eq!(generate(&spec).unwrap(), [0, 1, 2, 3]);
        let spec = GeneratorSpec { kind: GeneratorKind::TBfprtAdversary, n: 4, s: 9, seed: 0 };
        assert!(generate(&spec).is_err());
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in [
            GeneratorKind::RandomDistinct,
            GeneratorKind::Ascending,
            GeneratorKind::Descending,
            GeneratorKind::TBfprtAdversary,
        ] {
            assert_eq!(kind.name().parse::<GeneratorKind>().unwrap(), kind);
        }
        assert!("sorted".parse::<GeneratorKind>().is_err());
    }
}
