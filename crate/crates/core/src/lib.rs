//! Exact comparison of statistical experiments.
//!
//! A decision maker who observes the full signal distribution `E mu` of a
//! known experiment, but not the prior `mu`, evaluates actions by their
//! worst case over every prior consistent with the data. Experiment `E` is
//! robustly more informative than `E'` when it always yields at least the
//! same maxmin value; this holds exactly when `null(E) ⊆ null(E')`.
//!
//! Everything is computed over arbitrary-precision rationals.

pub mod cli;
pub mod experiment;
pub mod identified;
pub mod io;
pub mod linalg;
pub mod maxmin;
pub mod orders;
pub mod rational;
pub mod report;
pub mod simplex;

pub use experiment::{
    random_experiment, random_garbling, signal_distribution, validate_experiment, Action,
    DecisionProblem, Experiment, ExperimentError, Prior, StochasticityConvention,
};
pub use identified::{identified_set, IdentifiedSet, VertexList};
pub use linalg::{LinalgError, RatMatrix, RatVector};
pub use maxmin::{compare_on_problem, maxmin, MaxminOutcome};
pub use orders::{
    blackwell_garbling, blackwell_implies_robust_check, build_witness, linear_factor,
    robustly_more_informative, witness_decision_problem, ComparisonVerdict, GarblingResult,
    OrderError, RobustnessWitness,
};
pub use rational::{parse_rational, Rational};
