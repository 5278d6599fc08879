//! Maxmin expected payoff against the identified set.

use crate::experiment::{Action, DecisionProblem, Experiment, ExperimentError, Prior};
use crate::identified::{identified_set, IdentifiedSet};
use crate::linalg::RatMatrix;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxminOutcome {
    pub value: Rational,
    pub best_action: Action,
    /// Index of `best_action` in the problem's action list.
    pub best_index: usize,
    pub worst_prior: Prior,
}

/// Maxmin over an already-built identified set. Ties go to the earliest
/// action; the worst prior is the first minimizing vertex.
pub fn maxmin_over(set: &IdentifiedSet, actions: &[Action]) -> Result<MaxminOutcome, ExperimentError> {
    let mut best: Option<MaxminOutcome> = None;
    for (k, a) in actions.iter().enumerate() {
        let (value, worst) = set.min_linear(a)?;
        if best.as_ref().is_none_or(|b| value > b.value) {
            best = Some(MaxminOutcome {
                value,
                best_action: a.clone(),
                best_index: k,
                worst_prior: worst,
            });
        }
    }
    best.ok_or(ExperimentError::NoActions)
}

pub fn maxmin(e: &Experiment, problem: &DecisionProblem) -> Result<MaxminOutcome, ExperimentError> {
    let set = identified_set(e, problem.prior())?;
    maxmin_over(&set, problem.actions())
}

/// Maxmin for a raw (not necessarily stochastic) signal matrix.
pub fn maxmin_matrix(m: &RatMatrix, problem: &DecisionProblem) -> Result<MaxminOutcome, ExperimentError> {
    let set = IdentifiedSet::from_matrix(m, problem.prior())?;
    maxmin_over(&set, problem.actions())
}

/// Maxmin values of the same problem under two experiments.
pub fn compare_on_problem(
    e: &Experiment,
    e2: &Experiment,
    problem: &DecisionProblem,
) -> Result<(Rational, Rational), ExperimentError> {
    Ok((maxmin(e, problem)?.value, maxmin(e2, problem)?.value))
}
