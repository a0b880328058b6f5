//! Counting distinct squares (and t-th powers) in bit-packed strings.
//!
//! The pipeline: pack the text, build longest-common-extension machinery
//! over it, compute a tau-synchronizing set, represent all runs as explicit
//! runs plus short-run clusters plus pyramids of layer-runs, group runs by
//! (sparse-)Lyndon roots, and count squares per group with rotation-interval
//! unions. Brute-force oracles for every stage live in [`oracle`].

pub mod counting;
pub mod error;
pub mod grouping;
pub mod index;
pub mod oracle;
pub mod packed;
pub mod pyramid;
pub mod rsort;
pub mod runs;
pub mod sais;
pub mod sync;
pub mod util;

pub use counting::{
    analyze, count_distinct_squares, count_group, count_powers, report_squares, Analysis,
    SquareCounts,
};
pub use error::{Error, Result};
pub use grouping::{
    group_large_period, group_small_period, pyramid_types, sparse_lyndon_position,
    GroupingContext, PyramidType, RootKind, RootRepr, RunGroup,
};
pub use index::{ArithmeticProgression, QueryIndex};
pub use packed::{PackedText, TauConfig};
pub use pyramid::{pyramid_canonical, regular_layer_filter, Pyramid};
pub use runs::{
    compute_all_runs, long_runs_level, short_runs_tabulated, tau_runs, Run, RunCluster,
    RunsRepr, RunsStats,
};
pub use sync::{build_sync, SyncSet};
