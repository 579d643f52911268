//! Minimum-time production schemes: `n` agents with different completion
//! times build `n` identical objects, passing objects between them so that
//! everyone finishes together at the harmonic optimum.
//!
//! All times are exact rationals. A scheme lists, per object, which agent
//! holds it over which interval; on the atomic-unit grid it becomes an
//! `n × n` matrix of agent ids.
//!
//! ```
//! use whistle::{build_euclidean, euclid_trace, halt_number, AgentOrder};
//!
//! let trace = euclid_trace(180, 53).unwrap();
//! assert_eq!(halt_number(&trace), 17);
//! let e = build_euclidean(8, 5, AgentOrder::Type2First).unwrap();
//! assert_eq!(e.halts(), &[5, 8, 10, 11, 12]);
//! ```

pub mod cyclic;
pub mod error;
pub mod euclid;
pub mod grid;
pub mod harmonic;
pub mod model;
pub mod rational;
pub mod timing;
pub mod verifier;

pub use cyclic::{build_cyclic, direct_sum, extend_to_p, gcd_reduce, object_progress, ProductionPlan};
pub use error::{Error, Result};
pub use euclid::{
    build_euclidean, euclid_trace, fibonacci, fibonacci_analysis, halt_number, halt_statistics, stage_lengths,
    stage_records, two_type_spec, AgentOrder, EuclidTrace, EuclideanScheme, StageRecords, StageReport,
};
pub use grid::{matrix_from_csv, matrix_to_csv, matrix_to_scheme, scheme_to_matrix};
pub use harmonic::{
    atomic_unit, build_proportions, combined_rate, harmonic_mean, harmonic_pairs, irreducible_representation,
    optimum_time, parse_time_list, split_search, HarmonicPartition,
};
pub use model::{AgentClass, AgentId, AssignmentMatrix, ProblemSpec, Scheme, Segment, WorkRecord};
pub use rational::Rational;
pub use timing::{biker_hiker_time, optimal_time_two_type, total_time, TimingReport};
pub use verifier::{
    greedy_simulate, is_uniform, type_grid, type_matrix, validate, GreedyRun, TypeMatrix, ValidationReport,
};
