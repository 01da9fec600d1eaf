//! Consistency checking, inconsistency repair and consensus reaching for
//! hesitant fuzzy linguistic preference relations (HFLPRs).
//!
//! The crate is organised bottom-up:
//!
//! * [`scale`], [`hflts`], [`hflpr`] and [`slices`] define the value types
//!   and their normalized slice form.
//! * [`similarity`] holds distances between term sets and relations.
//! * [`consistency`] computes the geometric consistency index, priority
//!   vectors and the iterative repair loop; [`calibration`] estimates
//!   critical values by simulation.
//! * [`consensus`] builds perfect relations, expert weights, the collective
//!   relation and the feedback loop for group decisions.
//! * [`io`] reads and writes JSON documents; [`case_study`] bundles the
//!   venture-fund evaluation used as a regression oracle.

// `!(x > 0.0)` rejects NaN along with non-positive values, and square
// matrices are indexed by `(i, j)` throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod calibration;
pub mod case_study;
pub mod consensus;
pub mod consistency;
pub mod error;
pub mod hflpr;
pub mod hflts;
pub mod io;
pub mod random;
pub mod scale;
pub mod similarity;
pub mod slices;

/// Float slack for range checks on indices.
pub const EPS: f64 = 1e-9;

pub use calibration::{
    calibrate, write_density_csv, write_samples_csv, write_summary_csv, CalibrationConfig, CalibrationResult,
    DensityBin,
};
pub use case_study::{run_case_study, CaseStudyReport, Check};
pub use consensus::{
    algorithm2, dm_weights, fuse_indices, hflwa_aggregate, max_deviation_target, modify_row, perfect_hflpr,
    perfect_stack, solve_indices, wcd, ConsensusRound, ConsensusTrace, GroupProblem, MultiIndexOutcome, PerfectMethod,
};
pub use consistency::{
    adjust, algorithm1, algorithm1_observed, consistency_index, critical_value, critical_value_for_alpha,
    format_ranking, hflgci_for_slice, perfect_lpr, priority_vectors, slice_priority, stack_consistency,
    ConsistencyParams, ConsistencyReport, PriorityVector, SliceConsistency, StopMode,
};
pub use error::{Error, Result, ValidationError};
pub use hflpr::{validate_hflpr, Hflpr};
pub use hflts::{index_add, index_scale, normalize_pair, Hflts};
pub use io::{parse_group, parse_hflpr, GroupDoc, GroupSpec, HflprDoc};
pub use random::{random_hflpr, CellGenerator};
pub use scale::{LinguisticScale, DEFAULT_TAU};
pub use similarity::{
    hflpr_similarity, hflts_distance, stack_similarity, CellScope, DistanceDivisor, SimilarityMeasure,
};
pub use slices::SliceStack;
