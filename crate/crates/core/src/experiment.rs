//! Experiments, priors, actions and decision problems.
//!
//! An experiment is an `m x n` column-stochastic matrix: entry `(t, j)` is
//! the probability of signal `t` in state `j`. A prior is a point of the
//! simplex over the `n` states, and the data available to the decision maker
//! is the signal distribution `E * prior`.

use std::fmt;
use std::ops::Deref;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::{LinalgError, RatMatrix, RatVector};
use crate::rational::{format_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExperimentError {
    #[error("experiment matrix is empty")]
    EmptyMatrix,
    #[error("negative entry {value} at row {row}, column {column}")]
    NegativeEntry { row: usize, column: usize, value: String },
    #[error("column {column} sums to {sum}, expected 1")]
    ColumnSumNotOne { column: usize, sum: String },
    #[error("invalid prior: {0}")]
    InvalidPrior(String),
    #[error("decision problem has no actions")]
    NoActions,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

impl From<LinalgError> for ExperimentError {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::Empty => ExperimentError::EmptyMatrix,
            other => ExperimentError::DimensionMismatch(other.to_string()),
        }
    }
}

/// Which sums a stochastic matrix fixes to one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StochasticityConvention {
    RowStochastic,
    ColumnStochastic,
}

impl StochasticityConvention {
    /// Nonnegative with every row (or column) summing to exactly one.
    pub fn is_stochastic(self, m: &RatMatrix) -> bool {
        if m.entries().any(Signed::is_negative) {
            return false;
        }
        let sums = match self {
            Self::RowStochastic => m.row_sums(),
            Self::ColumnStochastic => m.column_sums(),
        };
        sums.iter().all(One::is_one)
    }
}

impl fmt::Display for StochasticityConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::RowStochastic => "row",
            Self::ColumnStochastic => "column",
        })
    }
}

/// A validated column-stochastic matrix (signals x states).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Experiment {
    matrix: RatMatrix,
}

impl Experiment {
    /// Number of signals.
    pub fn m(&self) -> usize {
        self.matrix.rows()
    }

    /// Number of states.
    pub fn n(&self) -> usize {
        self.matrix.cols()
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> RatMatrix {
        self.matrix
    }
}

impl Deref for Experiment {
    type Target = RatMatrix;

    fn deref(&self) -> &RatMatrix {
        &self.matrix
    }
}

impl AsRef<RatMatrix> for Experiment {
    fn as_ref(&self) -> &RatMatrix {
        &self.matrix
    }
}

impl TryFrom<RatMatrix> for Experiment {
    type Error = ExperimentError;

    fn try_from(m: RatMatrix) -> Result<Self, Self::Error> {
        validate_experiment(m)
    }
}

pub fn validate_experiment(matrix: RatMatrix) -> Result<Experiment, ExperimentError> {
    for i in 0..matrix.rows() {
        for j in 0..matrix.cols() {
            let x = matrix.get(i, j);
            if x.is_negative() {
                return Err(ExperimentError::NegativeEntry {
                    row: i,
                    column: j,
                    value: format_rational(x),
                });
            }
        }
    }
    for (j, sum) in matrix.column_sums().iter().enumerate() {
        if !sum.is_one() {
            return Err(ExperimentError::ColumnSumNotOne { column: j, sum: format_rational(sum) });
        }
    }
    Ok(Experiment { matrix })
}

/// A probability distribution over the states.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Prior {
    weights: RatVector,
}

impl Prior {
    pub fn new(weights: RatVector) -> Result<Self, ExperimentError> {
        if let Some(i) = weights.iter().position(Signed::is_negative) {
            return Err(ExperimentError::InvalidPrior(format!(
                "weight {} at state {i} is negative",
                format_rational(&weights[i])
            )));
        }
        let total = weights.sum();
        if !total.is_one() {
            return Err(ExperimentError::InvalidPrior(format!(
                "weights sum to {}, expected 1",
                format_rational(&total)
            )));
        }
        Ok(Self { weights })
    }

    pub fn from_rationals(weights: Vec<Rational>) -> Result<Self, ExperimentError> {
        Self::new(RatVector::new(weights).map_err(|_| {
            ExperimentError::InvalidPrior("prior must have at least one state".into())
        })?)
    }

    pub fn uniform(n: usize) -> Self {
        let w = Rational::new(BigInt::one(), BigInt::from(n));
        Self { weights: RatVector::new(vec![w; n]).expect("n > 0") }
    }

    /// The point mass on state `i`.
    pub fn degenerate(n: usize, i: usize) -> Self {
        Self { weights: RatVector::unit(n, i) }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn weights(&self) -> &RatVector {
        &self.weights
    }

    pub fn has_full_support(&self) -> bool {
        self.weights.iter().all(Signed::is_positive)
    }
}

impl Deref for Prior {
    type Target = [Rational];

    fn deref(&self) -> &[Rational] {
        &self.weights
    }
}

impl fmt::Display for Prior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.weights.fmt(f)
    }
}

/// Payoff vector indexed by state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Action {
    payoffs: RatVector,
}

impl Action {
    pub fn new(payoffs: RatVector) -> Self {
        Self { payoffs }
    }

    pub fn from_rationals(payoffs: Vec<Rational>) -> Result<Self, ExperimentError> {
        RatVector::new(payoffs)
            .map(Self::new)
            .map_err(|_| ExperimentError::DimensionMismatch("action has no payoffs".into()))
    }

    pub fn payoffs(&self) -> &RatVector {
        &self.payoffs
    }

    pub fn len(&self) -> usize {
        self.payoffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Expected payoff under a state distribution.
    pub fn expected(&self, p: &[Rational]) -> Rational {
        self.payoffs.iter().zip(p).fold(Rational::zero(), |acc, (a, x)| acc + a * x)
    }

    /// Largest minus smallest payoff.
    pub fn spread(&self) -> Rational {
        let max = self.payoffs.iter().max().expect("non-empty");
        let min = self.payoffs.iter().min().expect("non-empty");
        max - min
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.payoffs.fmt(f)
    }
}

/// A prior together with a finite, nonempty list of actions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionProblem {
    prior: Prior,
    actions: Vec<Action>,
}

impl DecisionProblem {
    pub fn new(prior: Prior, actions: Vec<Action>) -> Result<Self, ExperimentError> {
        if actions.is_empty() {
            return Err(ExperimentError::NoActions);
        }
        if let Some((k, a)) = actions.iter().enumerate().find(|(_, a)| a.len() != prior.len()) {
            return Err(ExperimentError::DimensionMismatch(format!(
                "action {k} has {} payoffs but the prior has {} states",
                a.len(),
                prior.len()
            )));
        }
        Ok(Self { prior, actions })
    }

    pub fn prior(&self) -> &Prior {
        &self.prior
    }

    pub fn actions(&self) -> &[Action] {
        &self.actions
    }

    pub fn n(&self) -> usize {
        self.prior.len()
    }
}

/// The observed signal distribution `E * prior`.
pub fn signal_distribution(e: &Experiment, prior: &Prior) -> Result<RatVector, ExperimentError> {
    if e.n() != prior.len() {
        return Err(ExperimentError::DimensionMismatch(format!(
            "experiment has {} states, prior has {}",
            e.n(),
            prior.len()
        )));
    }
    Ok(e.mul_vec(prior.weights())?)
}

/// Uniform random composition of `total` into `parts` nonnegative integers.
fn composition<R: Rng>(rng: &mut R, total: u64, parts: usize) -> Vec<u64> {
    let mut cuts: Vec<u64> = (0..parts - 1).map(|_| rng.gen_range(0..=total)).collect();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(parts);
    let mut prev = 0;
    for c in cuts {
        out.push(c - prev);
        prev = c;
    }
    out.push(total - prev);
    out
}

/// A random point of the simplex with `len` entries whose common
/// denominator is drawn from `1..=denominator_bound`.
pub fn random_simplex_point<R: Rng>(rng: &mut R, len: usize, denominator_bound: u64) -> Vec<Rational> {
    assert!(len > 0 && denominator_bound > 0);
    let den = rng.gen_range(1..=denominator_bound);
    composition(rng, den, len)
        .into_iter()
        .map(|k| Rational::new(BigInt::from(k), BigInt::from(den)))
        .collect()
}

/// Deterministic random experiment: each column is an independent draw from
/// [`random_simplex_point`], so every denominator is at most the bound.
pub fn random_experiment(m: usize, n: usize, seed: u64, denominator_bound: u64) -> Experiment {
    assert!(m > 0 && n > 0 && denominator_bound > 0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let columns: Vec<RatVector> = (0..n)
        .map(|_| RatVector::new(random_simplex_point(&mut rng, m, denominator_bound)).expect("m > 0"))
        .collect();
    let matrix = RatMatrix::from_columns(&columns).expect("nonempty columns");
    validate_experiment(matrix).expect("sampler produces column-stochastic matrices")
}

const GARBLING_DENOMINATOR_BOUND: u64 = 12;

/// Deterministic random `l x m` stochastic matrix under `convention`.
pub fn random_garbling(l: usize, m: usize, seed: u64, convention: StochasticityConvention) -> RatMatrix {
    assert!(l > 0 && m > 0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match convention {
        StochasticityConvention::RowStochastic => {
            let rows = (0..l)
                .map(|_| random_simplex_point(&mut rng, m, GARBLING_DENOMINATOR_BOUND))
                .collect();
            RatMatrix::from_rows(rows).expect("nonempty rows")
        }
        StochasticityConvention::ColumnStochastic => {
            let columns: Vec<RatVector> = (0..m)
                .map(|_| {
                    RatVector::new(random_simplex_point(&mut rng, l, GARBLING_DENOMINATOR_BOUND))
                        .expect("l > 0")
                })
                .collect();
            RatMatrix::from_columns(&columns).expect("nonempty columns")
        }
    }
}

/// Deterministic random prior with strictly positive weights.
pub fn random_full_support_prior(n: usize, seed: u64, denominator_bound: u64) -> Prior {
    assert!(n > 0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let den = rng.gen_range(n as u64..=denominator_bound.max(n as u64));
    let weights = composition(&mut rng, den - n as u64, n)
        .into_iter()
        .map(|k| Rational::new(BigInt::from(k + 1), BigInt::from(den)))
        .collect();
    Prior::from_rationals(weights).expect("composition sums to the denominator")
}

/// Deterministic random prior, possibly with zero weights.
pub fn random_prior(n: usize, seed: u64, denominator_bound: u64) -> Prior {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Prior::from_rationals(random_simplex_point(&mut rng, n, denominator_bound))
        .expect("simplex sampler")
}

/// Deterministic random action with integer payoffs in `-bound..=bound`.
pub fn random_action(n: usize, seed: u64, bound: i64) -> Action {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let payoffs = (0..n)
        .map(|_| Rational::from_integer(BigInt::from(rng.gen_range(-bound..=bound))))
        .collect();
    Action::from_rationals(payoffs).expect("n > 0")
}
