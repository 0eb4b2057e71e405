//! Exact data limits for all-to-all comparison placements.
//!
//! When every item in a data set must be compared against every other item,
//! the data can be spread over `m` machines so that any two items share at
//! least one machine. The machines form the blocks of a covering design, a
//! normalised point weighting describes how the data is split, and the
//! largest block weight is the fraction of the data the busiest machine
//! holds. This crate computes that limit exactly for any covering design,
//! produces certificates proving optimality, constructs the classical design
//! families that achieve good limits, evaluates closed-form bounds, searches
//! exhaustively for the best possible limit at small machine counts, and
//! turns the results into concrete machine-by-machine placement plans.
//!
//! Every limit, bound comparison, and certificate is computed in exact
//! rational (or quadratic irrational) arithmetic. Floating point appears
//! only as a seed for integer computations that are then verified exactly,
//! and in randomized search heuristics whose output is certified after the
//! fact.
//!
//! See the `examples/` directory for a runnable tour of each capability, or
//! the `atac` binary for the command-line interface.

pub mod bounds;
pub mod cli;
pub mod construct;
pub mod design;
pub mod gf;
pub mod limit;
pub mod lp;
pub mod planner;
pub mod rational;
pub mod search;

pub use design::{CoveringDesign, DesignError, DualHypergraph, IncidenceStats, Weighting};
pub use limit::{data_limit, LimitCertificate};
pub use rational::Rational;
