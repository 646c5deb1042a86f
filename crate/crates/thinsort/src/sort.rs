//! Instrumented quicksort engine.
//!
//! One partition scheme for every pivot rule, recursion down to single keys
//! with no hybrid cutoff, smaller side recursed first. The returned
//! [`Counters`] carry the full comparison bill, pivot selection included.

use crate::counters::{Counters, Phase};
use crate::pivot::{
    self, partition_slice, pivot_med3, pivot_pmed9, pivot_t_bfprt, pivot_t_pmed3l, TBfprtMode,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::str::FromStr;

/// Pivot selection rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Strategy {
    /// Uniformly random key.
    Rand,
    /// Median of first, middle and last key.
    Med3,
    /// Ninther over nine evenly spread probes.
    PMed9,
    /// Thinned median of medians over every `s`-th key.
    TBfprt,
    /// Recursive pseudo-median of thirds, thinned by `s`.
    TPMed3L,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [
        Strategy::Rand,
        Strategy::Med3,
        Strategy::PMed9,
        Strategy::TBfprt,
        Strategy::TPMed3L,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Rand => "rand",
            Strategy::Med3 => "med3",
            Strategy::PMed9 => "pmed9",
            Strategy::TBfprt => "t-bfprt",
            Strategy::TPMed3L => "t-pmed3l",
        }
    }

    /// Whether the thinning parameter changes this strategy's behavior.
    pub fn uses_s(self) -> bool {
        matches!(self, Strategy::TBfprt | Strategy::TPMed3L)
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "rand" => Ok(Strategy::Rand),
            "med3" => Ok(Strategy::Med3),
            "pmed9" => Ok(Strategy::PMed9),
            "t-bfprt" | "tbfprt" => Ok(Strategy::TBfprt),
            "t-pmed3l" | "tpmed3l" => Ok(Strategy::TPMed3L),
            other => Err(format!(
                "unknown strategy '{}' (expected rand, med3, pmed9, t-bfprt or t-pmed3l)",
                other
            )),
        }
    }
}

impl serde::Serialize for Strategy {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(self.name())
    }
}

impl<'de> serde::Deserialize<'de> for Strategy {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Full description of one sort run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SortConfig {
    pub strategy: Strategy,
    /// Thinning parameter, at least 1. Ignored by `Rand`, `Med3`, `PMed9`.
    pub s: usize,
    /// Use median-of-three instead of the main selector on small subarrays
    /// (below `5s` keys for `TBfprt`, below `s` keys for `TPMed3L`).
    pub adaptive_small: bool,
    /// Seed for the random pivot stream; inert for deterministic strategies.
    pub seed: u64,
    pub tbfprt_mode: TBfprtMode,
}

impl SortConfig {
    pub fn new(strategy: Strategy, s: usize, seed: u64) -> Self {
        SortConfig {
            strategy,
            s,
            adaptive_small: false,
            seed,
            tbfprt_mode: TBfprtMode::default(),
        }
    }
}

/// Partition `data[lo..hi)` around the pivot value `p`, which must occur in
/// the range. Returns `j` with `lo <= j < hi-1`: afterwards every key of
/// `data[lo..=j]` is `<= p` and every key of `data[j+1..hi)` is `>= p`, so
/// both sides are non-empty and recursion always makes progress.
pub fn hoare_partition<K: Ord + Clone>(
    data: &mut [K],
    lo: usize,
    hi: usize,
    p: &K,
    c: &mut Counters,
) -> usize {
    assert!(hi - lo >= 2, "partitioning needs at least two keys");
    partition_slice(data, lo, hi, p, c)
}

struct Engine<'a> {
    cfg: &'a SortConfig,
    rng: ChaCha8Rng,
}

impl Engine<'_> {
    fn select_pivot<K: Ord + Clone>(
        &mut self,
        data: &mut [K],
        lo: usize,
        hi: usize,
        scratch: &mut Vec<K>,
        c: &mut Counters,
    ) -> K {
        let n = hi - lo;
        match self.cfg.strategy {
            Strategy::Rand => data[pivot::pivot_random(lo, hi, &mut self.rng)].clone(),
            Strategy::Med3 => pivot_med3(data, lo, hi, c),
            Strategy::PMed9 => pivot_pmed9(data, lo, hi, c),
            Strategy::TBfprt => {
                if self.cfg.adaptive_small && n < 5 * self.cfg.s {
                    pivot_med3(data, lo, hi, c)
                } else {
                    pivot_t_bfprt(data, lo, hi, self.cfg.s, self.cfg.tbfprt_mode, scratch, c)
                }
            }
            Strategy::TPMed3L => {
                if self.cfg.adaptive_small && n < self.cfg.s {
                    pivot_med3(data, lo, hi, c)
                } else {
                    pivot_t_pmed3l(data, lo, hi, self.cfg.s, c)
                }
            }
        }
    }

    fn sort_range<K: Ord + Clone>(
        &mut self,
        data: &mut [K],
        mut lo: usize,
        mut hi: usize,
        depth: u64,
        scratch: &mut Vec<K>,
        c: &mut Counters,
    ) {
        while hi - lo >= 2 {
            c.observe_depth(depth);
            c.set_phase(Phase::Selection);
            let p = self.select_pivot(data, lo, hi, scratch, c);
            c.set_phase(Phase::Partition);
            let j = hoare_partition(data, lo, hi, &p, c);
            // Recurse into the smaller side, loop on the larger one.
            if j + 1 - lo <= hi - j - 1 {
                self.sort_range(data, lo, j + 1, depth + 1, scratch, c);
                lo = j + 1;
            } else {
                self.sort_range(data, j + 1, hi, depth + 1, scratch, c);
                hi = j + 1;
            }
        }
    }
}

/// Sort `data` in place and return the instrumentation for the run.
/// Identical `(data, cfg)` always produce identical output and counts.
pub fn quicksort<K: Ord + Clone>(data: &mut [K], cfg: &SortConfig) -> Counters {
    assert!(cfg.s >= 1, "thinning parameter must be at least 1");
    let mut c = Counters::new();
    let mut engine = Engine { cfg, rng: ChaCha8Rng::seed_from_u64(cfg.seed) };
    let mut scratch = Vec::new();
    let len = data.len();
    if len >= 2 {
        engine.sort_range(data, 0, len, 1, &mut scratch, &mut c);
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn check_partition(mut data: Vec<u64>, p: u64) {
        let n = data.len();
        let mut sorted = data.clone();
        sorted.sort_unstable();
        let mut c = Counters::new();
        let j = hoare_partition(&mut data, 0, n, &p, &mut c);
        assert!(j < n - 1, "right side empty for {:?} p={}", data, p);
        let mut after = data.clone();
        after.sort_unstable();
        assert_eq!(after, sorted, "partition lost keys");
        assert!(data[..=j].iter().all(|&x| x <= p), "{:?} j={} p={}", data, j, p);
        assert!(data[j + 1..].iter().all(|&x| x >= p), "{:?} j={} p={}", data, j, p);
    }

    #[test]
    fn partition_two_keys() {
        let mut data = vec![2u64, 1];
        let mut c = Counters::new();
        let j = hoare_partition(&mut data, 0, 2, &2, &mut c);
        assert_eq!(j, 0);
        assert_eq!(data, [1, 2]);
        check_partition(vec![1, 2], 1);
        check_partition(vec![1, 2], 2);
        check_partition(vec![2, 1], 1);
    }

    #[test]
    fn partition_three_keys_every_order() {
        let perms: [[u64; 3]; 6] =
            [[1, 2, 3], [1, 3, 2], [2, 1, 3], [2, 3, 1], [3, 1, 2], [3, 2, 1]];
        for perm in perms {
            let mut data = perm.to_vec();
            let mut c = Counters::new();
            let j = hoare_partition(&mut data, 0, 3, &2, &mut c);
            let left: Vec<u64> = data[..=j].to_vec();
            assert!(
                left == vec![1] || {
                    let mut l = left.clone();
                    l.sort_unstable();
                    l == vec![1, 2]
                },
                "perm {:?} left {:?}",
                perm,
                left
            );
        }
    }

    #[test]
    fn partition_median_pivot_splits_evenly() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xC0DE);
        for _ in 0..50 {
            let mut data: Vec<u64> = (0..100).collect();
            data.shuffle(&mut rng);
            let mut c = Counters::new();
            let j = hoare_partition(&mut data, 0, 100, &49, &mut c);
            let left = j + 1;
            assert!((49..=51).contains(&left), "left size {}", left);
        }
    }

    #[test]
    fn partition_random_pivots_postconditions() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xFACE);
        for _ in 0..300 {
            let n = rng.random_range(2..60);
            let mut data: Vec<u64> = (0..n).collect();
            data.shuffle(&mut rng);
            let p = data[rng.random_range(0..n as usize)];
            check_partition(data, p);
        }
    }

    #[test]
    fn partition_cost_stays_near_n() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x0557);
        for _ in 0..100 {
            let n: u64 = rng.random_range(2..2000);
            let mut data: Vec<u64> = (0..n).collect();
            data.shuffle(&mut rng);
            let p = data[rng.random_range(0..n as usize)];
            let mut c = Counters::new();
            hoare_partition(&mut data, 0, n as usize, &p, &mut c);
            assert!(c.comparisons() >= n - 1);
            assert!(c.comparisons() <= n + 2);
        }
    }

    fn sorts(strategy: Strategy, s: usize, mut data: Vec<u64>) -> Counters {
        let mut expect = data.clone();
        expect.sort_unstable();
        let cfg = SortConfig::new(strategy, s, 0x5EED);
        let c = quicksort(&mut data, &cfg);
        assert_eq!(data, expect, "{:?} s={} failed to sort", strategy, s);
        c
    }

    #[test]
    fn sorts_trivial_inputs() {
        for strategy in Strategy::ALL {
            sorts(strategy, 1, vec![]);
            sorts(strategy, 1, vec![7]);
            sorts(strategy, 1, vec![2, 1]);
            sorts(strategy, 3, vec![5, 5, 5, 5, 5]);
        }
        let cfg = SortConfig::new(Strategy::Med3, 1, 0);
        let mut empty: Vec<u64> = vec![];
        let c = quicksort(&mut empty, &cfg);
        assert_eq!(c.comparisons(), 0);
        assert_eq!(c.max_depth, 0);
    }

    #[test]
    fn med3_on_three_keys_costs_twelve_comparisons() {
        // Traced by hand: 3 comparisons pick the pivot 2, the two partition
        // passes cost 5 and 4, and the length-2 pivot pick is free.
        let mut data = vec![3u64, 1, 2];
        let cfg = SortConfig::new(Strategy::Med3, 1, 0);
        let c = quicksort(&mut data, &cfg);
        assert_eq!(data, [1, 2, 3]);
        assert_eq!(c.comparisons(), 12);
        assert_eq!(c.selection_comparisons, 3);
        assert_eq!(c.partition_comparisons, 9);
        assert_eq!(c.swaps, 2);
    }

    #[test]
    fn every_strategy_sorts_shuffled_and_ordered_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xABCD);
        for strategy in Strategy::ALL {
            for s in [1usize, 4, 40] {
                let mut data: Vec<u64> = (0..2000).collect();
                data.shuffle(&mut rng);
                sorts(strategy, s, data);
                sorts(strategy, s, (0..500).collect());
                sorts(strategy, s, (0..500).rev().collect());
            }
        }
    }

    #[test]
    fn adaptive_small_sorts_and_changes_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x1DEA);
        let mut data: Vec<u64> = (0..3000).collect();
        data.shuffle(&mut rng);
        let mut adaptive = data.clone();
        let mut cfg = SortConfig::new(Strategy::TBfprt, 40, 0);
        let plain_counts = quicksort(&mut data, &cfg);
        cfg.adaptive_small = true;
        let adaptive_counts = quicksort(&mut adaptive, &cfg);
        assert_eq!(data, adaptive);
        assert_ne!(plain_counts.comparisons(), adaptive_counts.comparisons());
    }

    #[test]
    fn random_strategy_cost_envelope() {
        let n = 10_000u64;
        let mut rng = ChaCha8Rng::seed_from_u64(0xE77);
        let mut data: Vec<u64> = (0..n).collect();
        data.shuffle(&mut rng);
        let c = sorts(Strategy::Rand, 1, data);
        let nlnn = n as f64 * (n as f64).ln();
        assert!((c.comparisons() as f64) > nlnn, "too few: {}", c.comparisons());
        assert!((c.comparisons() as f64) < 3.0 * nlnn, "too many: {}", c.comparisons());
    }

    #[test]
    fn comparisons_lower_bound_holds() {
        for strategy in Strategy::ALL {
            let mut data: Vec<u64> = vec![4, 2, 8, 6, 0, 9, 1, 3, 7, 5];
            let cfg = SortConfig::new(strategy, 1, 1);
            let c = quicksort(&mut data, &cfg);
            assert!(c.comparisons() >= 9);
        }
    }

    #[test]
    fn identical_runs_are_identical() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xD0);
        let mut base: Vec<u64> = (0..5000).collect();
        base.shuffle(&mut rng);
        for strategy in Strategy::ALL {
            let cfg = SortConfig::new(strategy, 7, 0xFEED);
            let mut a = base.clone();
            let mut b = base.clone();
            let ca = quicksort(&mut a, &cfg);
            let cb = quicksort(&mut b, &cfg);
            assert_eq!(a, b);
            assert_eq!(ca, cb);
        }
    }

    #[test]
    fn phase_shares_sum_to_total() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x50F7);
        for strategy in Strategy::ALL {
            let mut data: Vec<u64> = (0..4000).collect();
            data.shuffle(&mut rng);
            let cfg = SortConfig::new(strategy, 5, 3);
            let c = quicksort(&mut data, &cfg);
            assert_eq!(c.partition_comparisons + c.selection_comparisons, c.comparisons());
            if strategy != Strategy::Rand {
                assert!(c.selection_comparisons > 0);
            }
        }
    }

    #[test]
    fn smaller_side_first_bounds_the_depth() {
        let n = 10_000usize;
        let mut rng = ChaCha8Rng::seed_from_u64(0xDE97);
        for strategy in [Strategy::TBfprt, Strategy::Rand] {
            let mut data: Vec<u64> = (0..n as u64).collect();
            data.shuffle(&mut rng);
            let cfg = SortConfig::new(strategy, 1, 9);
            let c = quicksort(&mut data, &cfg);
            assert!(
                c.max_depth <= (n.ilog2() as u64) + 1,
                "{:?} depth {}",
                strategy,
                c.max_depth
            );
        }
    }

    #[test]
    fn strategy_names_round_trip() {
        for strategy in Strategy::ALL {
            assert_eq!(strategy.name().parse::<Strategy>().unwrap(), strategy);
        }
        assert!("bogus".parse::<Strategy>().is_err());
    }
}
