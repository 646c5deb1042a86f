//! A comparison-counting quicksort laboratory.
//!
//! The question under study: how close can a quicksort get to the
//! information-theoretic floor of `log2(n!) ~ 1.4427 n ln(n)` comparisons
//! when the pivot is chosen by cheap sampled median selectors instead of a
//! full median pass? Five pivot rules share one instrumented Hoare
//! partition:
//!
//! * `rand`: a uniformly random key.
//! * `med3`: median of the first, middle and last key.
//! * `pmed9`: ninther over nine evenly spread probes.
//! * `t-bfprt`: exact median of medians over every `s`-th key only, so the
//!   guaranteed-quality pivot costs `n/s` extra work per level instead
//!   of `n`.
//! * `t-pmed3l`: recursive pseudo-median of thirds, bottoming out on
//!   subranges of at most `s` keys.
//!
//! Every comparison is billed to either pivot selection or partitioning,
//! and recursion depth and swaps are tracked alongside. [`bench`] expands
//! seeded measurement matrices into CSV records, and [`analysis`] fits
//! `a*n*ln(n) + b*n` to the measured counts and evaluates the closed-form
//! coefficient bounds for the two thinned selectors.

pub mod analysis;
pub mod bench;
pub mod counters;
pub mod generators;
pub mod pivot;
pub mod sort;

pub use analysis::{entropy, fit_nlnn, AnalysisError, FitResult};
pub use bench::{run_plan, BenchError, MethodSpec, RunPlan, TrialRecord};
pub use counters::{Counters, Phase};
pub use generators::{generate, GeneratorKind, GeneratorSpec};
pub use pivot::{median_of_medians, select_bfprt, TBfprtMode};
pub use sort::{hoare_partition, quicksort, SortConfig, Strategy};
