//! Counting layer every key comparison and element exchange goes through.
//!
//! A single [`Counters::less`] choke point tallies comparisons so no strategy
//! can compare keys off the books. Counts are tagged with the current
//! [`Phase`] so the share spent selecting pivots stays recoverable from the
//! share spent partitioning; reported totals always include both.

/// Which part of the sort is currently issuing comparisons.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    Partition,
    Selection,
}

/// Per-run instrumentation. One value per sort or selection run; trials that
/// run concurrently each own their `Counters`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Counters {
    pub partition_comparisons: u64,
    pub selection_comparisons: u64,
    pub swaps: u64,
    /// Deepest partition recursion seen, with the smaller side recursed first.
    pub max_depth: u64,
    phase: Phase,
}

impl Counters {
    pub fn new() -> Self {
        Counters {
            partition_comparisons: 0,
            selection_comparisons: 0,
            swaps: 0,
            max_depth: 0,
            phase: Phase::Partition,
        }
    }

    /// Total comparisons, pivot selection included.
    pub fn comparisons(&self) -> u64 {
        self.partition_comparisons + self.selection_comparisons
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn set_phase(&mut self, phase: Phase) {
        self.phase = phase;
    }

    /// The one counted comparison: returns `a < b` and bills the active phase.
    #[inline]
    pub fn less<K: Ord>(&mut self, a: &K, b: &K) -> bool {
        match self.phase {
            Phase::Partition => self.partition_comparisons += 1,
            Phase::Selection => self.selection_comparisons += 1,
        }
        a < b
    }

    /// Counted element exchange. A self-swap (`i == j`) still counts.
    #[inline]
    pub fn swap<K>(&mut self, data: &mut [K], i: usize, j: usize) {
        self.swaps += 1;
        data.swap(i, j);
    }

    #[inline]
    pub fn observe_depth(&mut self, depth: u64) {
        if depth > self.max_depth {
            self.max_depth = depth;
        }
    }
}

impl Default for Counters {
    fn default() -> Self {
        Self::new()
    }
}
