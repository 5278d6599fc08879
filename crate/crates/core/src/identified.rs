//! The set of priors consistent with an observed signal distribution,
//! `{nu in simplex : E nu = E mu}`, and exact queries against it.

use std::ops::Deref;
use std::sync::OnceLock;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::experiment::{Action, Experiment, ExperimentError, Prior};
use crate::linalg::{RatMatrix, RatVector};
use crate::rational::Rational;

/// Extreme points of an identified set, in enumeration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexList(Vec<Prior>);

impl VertexList {
    pub fn into_inner(self) -> Vec<Prior> {
        self.0
    }
}

impl Deref for VertexList {
    type Target = [Prior];

    fn deref(&self) -> &[Prior] {
        &self.0
    }
}

/// Plausible priors for one experiment and one observed signal distribution.
///
/// The constraint matrix is normally a validated [`Experiment`], but any
/// matrix with the right column count is accepted through
/// [`IdentifiedSet::from_matrix`]; the set is still a compact polytope.
#[derive(Debug)]
pub struct IdentifiedSet {
    matrix: RatMatrix,
    observed: RatVector,
    vertices: OnceLock<VertexList>,
}

impl Clone for IdentifiedSet {
    fn clone(&self) -> Self {
        Self {
            matrix: self.matrix.clone(),
            observed: self.observed.clone(),
            vertices: self.vertices.clone(),
        }
    }
}

pub fn identified_set(e: &Experiment, mu: &Prior) -> Result<IdentifiedSet, ExperimentError> {
    IdentifiedSet::from_matrix(e.matrix(), mu)
}

fn check_states(n: usize, len: usize) -> Result<(), ExperimentError> {
    if n != len {
        return Err(ExperimentError::DimensionMismatch(format!(
            "expected {n} states, got {len}"
        )));
    }
    Ok(())
}

impl IdentifiedSet {
    pub fn from_matrix(matrix: &RatMatrix, mu: &Prior) -> Result<Self, ExperimentError> {
        check_states(matrix.cols(), mu.len())?;
        let observed = matrix.mul_vec(mu.weights())?;
        Ok(Self { matrix: matrix.clone(), observed, vertices: OnceLock::new() })
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    /// The observed signal distribution.
    pub fn observed(&self) -> &RatVector {
        &self.observed
    }

    pub fn n(&self) -> usize {
        self.matrix.cols()
    }

    pub fn contains(&self, nu: &Prior) -> Result<bool, ExperimentError> {
        check_states(self.n(), nu.len())?;
        Ok(self.matrix.mul_vec(nu.weights())? == self.observed)
    }

    /// Every vertex, computed once and cached.
    ///
    /// A feasible point is a vertex exactly when the constraint columns on
    /// its support are linearly independent, so each vertex is found once by
    /// solving on that support. Supports are visited by size, then
    /// lexicographically.
    pub fn vertices(&self) -> &VertexList {
        self.vertices.get_or_init(|| self.enumerate_vertices())
    }

    fn enumerate_vertices(&self) -> VertexList {
        let n = self.n();
        let ones = RatMatrix::from_fn(1, n, |_, _| Rational::one());
        let system = self.matrix.vstack(&ones).expect("same column count");
        let mut rhs: Vec<Rational> = self.observed.to_vec();
        rhs.push(Rational::one());
        let rhs = RatMatrix::from_fn(rhs.len(), 1, |i, _| rhs[i].clone());
        let max_support = system.rank();

        let mut found = Vec::new();
        for size in 1..=max_support {
            for support in (0..n).combinations(size) {
                let augmented = system
                    .select_columns(&support)
                    .hstack(&rhs)
                    .expect("same row count");
                let (r, pivots) = augmented.rref();
                if pivots.len() != size || pivots.last() != Some(&(size - 1)) {
                    continue;
                }
                let values: Vec<Rational> = (0..size).map(|k| r.get(k, size).clone()).collect();
                if !values.iter().all(Signed::is_positive) {
                    continue;
                }
                let mut weights = vec![Rational::zero(); n];
                for (&j, v) in support.iter().zip(values) {
                    weights[j] = v;
                }
                found.push(Prior::from_rationals(weights).expect("solution lies in the simplex"));
            }
        }
        VertexList(found)
    }

    /// True iff the set is the single prior it was built from.
    pub fn is_singleton(&self) -> bool {
        self.matrix.nullspace_basis().is_empty()
    }

    /// True iff the set is the whole simplex: every column of the matrix is
    /// the same, so the observed data carries no information.
    pub fn is_full_simplex(&self) -> bool {
        let first = self.matrix.column(0);
        (1..self.n()).all(|j| self.matrix.column(j) == first)
    }

    /// Exact minimum of the expected payoff over the set, with the first
    /// minimizing vertex.
    pub fn min_linear(&self, action: &Action) -> Result<(Rational, Prior), ExperimentError> {
        check_states(self.n(), action.len())?;
        let mut best: Option<(Rational, &Prior)> = None;
        for v in self.vertices().iter() {
            let value = action.expected(v);
            if best.as_ref().is_none_or(|(b, _)| value < *b) {
                best = Some((value, v));
            }
        }
        let (value, argmin) = best.expect("identified sets are nonempty");
        Ok((value, argmin.clone()))
    }

    /// Inclusion of this set in `other`, checked on this set's vertices
    /// against `other`'s equality constraints.
    pub fn subset_of(&self, other: &IdentifiedSet) -> Result<bool, ExperimentError> {
        check_states(self.n(), other.n())?;
        for v in self.vertices().iter() {
            if !other.contains(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::validate_experiment;
    use crate::rational::{int, rat};

    fn exp(rows: &[&[(i64, i64)]]) -> Experiment {
        validate_experiment(
            RatMatrix::from_rows(
                rows.iter().map(|r| r.iter().map(|&(p, q)| rat(p, q)).collect()).collect(),
            )
            .unwrap(),
        )
        .unwrap()
    }

    fn example_e() -> Experiment {
        exp(&[&[(4, 5), (1, 5)], &[(1, 5), (4, 5)]])
    }

    fn split() -> Experiment {
        exp(&[&[(1, 1), (0, 1), (0, 1)], &[(0, 1), (1, 1), (1, 1)]])
    }

    fn split_other() -> Experiment {
        exp(&[&[(1, 1), (1, 1), (0, 1)], &[(0, 1), (0, 1), (1, 1)]])
    }

    fn prior(xs: &[(i64, i64)]) -> Prior {
        Prior::from_rationals(xs.iter().map(|&(p, q)| rat(p, q)).collect()).unwrap()
    }

    #[test]
    fn full_rank_is_a_point() {
        let mu = prior(&[(1, 3), (2, 3)]);
        let s = identified_set(&example_e(), &mu).unwrap();
        assert!(s.is_singleton());
        assert!(!s.is_full_simplex());
        assert_eq!(&s.vertices()[..], std::slice::from_ref(&mu));
        assert!(s.contains(&mu).unwrap());
        assert!(!s.contains(&Prior::uniform(2)).unwrap());
    }

    #[test]
    fn rank_one_is_the_simplex() {
        let flat = exp(&[&[(1, 2), (1, 2)], &[(1, 2), (1, 2)]]);
        let s = identified_set(&flat, &prior(&[(1, 5), (4, 5)])).unwrap();
        assert!(s.is_full_simplex());
        assert!(!s.is_singleton());
        assert_eq!(&s.vertices()[..], &[Prior::degenerate(2, 0), Prior::degenerate(2, 1)]);

        let ones = exp(&[&[(1, 1), (1, 1), (1, 1)]]);
        let s = identified_set(&ones, &Prior::uniform(3)).unwrap();
        assert!(s.is_full_simplex());
        assert_eq!(s.vertices().len(), 3);
    }

    #[test]
    fn split_experiment_set() {
        let s = identified_set(&split(), &Prior::uniform(3)).unwrap();
        assert_eq!(s.observed().as_slice(), &[rat(1, 3), rat(2, 3)]);
        assert!(!s.is_singleton());
        assert!(!s.is_full_simplex());
        assert_eq!(
            &s.vertices()[..],
            &[prior(&[(1, 3), (2, 3), (0, 1)]), prior(&[(1, 3), (0, 1), (2, 3)])]
        );
        assert!(s.contains(&prior(&[(1, 3), (2, 3), (0, 1)])).unwrap());
        assert!(!s.contains(&prior(&[(2, 3), (1, 3), (0, 1)])).unwrap());
        assert!(s.contains(&Prior::uniform(2)).is_err());
    }

    #[test]
    fn min_linear_examples() {
        let mu = prior(&[(1, 4), (3, 4)]);
        let a = Action::from_rationals(vec![int(2), int(-1)]).unwrap();
        let s = identified_set(&example_e(), &mu).unwrap();
        assert_eq!(s.min_linear(&a).unwrap(), (a.expected(&mu), mu));

        let flat = exp(&[&[(1, 3), (1, 3), (1, 3)], &[(2, 3), (2, 3), (2, 3)]]);
        let s = identified_set(&flat, &Prior::uniform(3)).unwrap();
        let a = Action::from_rationals(vec![int(5), int(-2), int(3)]).unwrap();
        assert_eq!(s.min_linear(&a).unwrap(), (int(-2), Prior::degenerate(3, 1)));

        let s = identified_set(&split(), &Prior::uniform(3)).unwrap();
        let a = Action::from_rationals(vec![int(0), int(1), int(0)]).unwrap();
        assert_eq!(s.min_linear(&a).unwrap(), (int(0), prior(&[(1, 3), (0, 1), (2, 3)])));
    }

    #[test]
    fn subset_examples() {
        let mu = Prior::uniform(3);
        let s = identified_set(&split(), &mu).unwrap();
        let t = identified_set(&split_other(), &mu).unwrap();
        assert!(s.subset_of(&s).unwrap());
        assert!(!s.subset_of(&t).unwrap());
        assert!(!t.subset_of(&s).unwrap());

        let point = identified_set(&example_e(), &prior(&[(1, 3), (2, 3)])).unwrap();
        let flat = exp(&[&[(1, 2), (1, 2)], &[(1, 2), (1, 2)]]);
        let all = identified_set(&flat, &prior(&[(1, 3), (2, 3)])).unwrap();
        assert!(point.subset_of(&all).unwrap());
        assert!(!all.subset_of(&point).unwrap());
    }

    #[test]
    fn degenerate_prior_on_a_face() {
        // mu on the boundary: the set collapses to a lower-dimensional face.
        let s = identified_set(&split(), &Prior::degenerate(3, 0)).unwrap();
        assert_eq!(&s.vertices()[..], &[Prior::degenerate(3, 0)]);
        let s = identified_set(&split(), &Prior::degenerate(3, 2)).unwrap();
        assert_eq!(&s.vertices()[..], &[Prior::degenerate(3, 1), Prior::degenerate(3, 2)]);
    }
}
