//! The robust (prior-free maxmin) informativeness order and the Blackwell
//! garbling order.
//!
//! `E` is robustly more informative than `E'` exactly when
//! `null(E) ⊆ null(E')`, equivalently `E' = Γ E` for some matrix `Γ`. When
//! the inclusion fails, [`build_witness`] produces a prior and a single
//! action on which the maxmin value under `E` is strictly below the value
//! under `E'`.
//!
//! The comparison functions take raw matrices where only linear structure
//! matters, so a garbled product that is not column stochastic can still be
//! compared. [`Experiment`] derefs to [`RatMatrix`].

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::experiment::{
    validate_experiment, Action, DecisionProblem, ExperimentError, Prior, StochasticityConvention,
};
use crate::identified::IdentifiedSet;
use crate::linalg::{LinalgError, RatMatrix, RatVector};
use crate::rational::Rational;
use crate::simplex::{self, LpOutcome};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("state counts differ: {0} vs {1}")]
    StateCountMismatch(usize, usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn same_states(e: &RatMatrix, e2: &RatMatrix) -> Result<(), OrderError> {
    if e.cols() != e2.cols() {
        return Err(OrderError::StateCountMismatch(e.cols(), e2.cols()));
    }
    Ok(())
}

/// Falsifying data for "E is robustly more informative than E'".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RobustnessWitness {
    /// Full-support prior generating the observed data.
    pub mu: Prior,
    /// Direction in `null(E)` that `E'` does not annihilate.
    pub direction: RatVector,
    pub lambda: Rational,
    /// `mu + lambda * direction`: plausible under `E`, implausible under `E'`.
    pub p: Prior,
    /// Separates `p` from every prior plausible under `E'`.
    pub action: Action,
    pub margin: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonVerdict {
    pub robustly_more_informative: bool,
    /// `Γ` with `E' = Γ E`, present when the verdict is true.
    pub gamma: Option<RatMatrix>,
    /// Present when the verdict is false.
    pub witness: Option<RobustnessWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GarblingResult {
    pub feasible: bool,
    pub gamma: Option<RatMatrix>,
}

/// True iff every nullspace basis vector of `e` is annihilated by `e2`.
pub fn nullspace_included(e: &RatMatrix, e2: &RatMatrix) -> Result<bool, OrderError> {
    same_states(e, e2)?;
    for d in e.nullspace_basis() {
        if !e2.mul_vec(&d)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn robustly_more_informative(
    e: &RatMatrix,
    e2: &RatMatrix,
) -> Result<ComparisonVerdict, OrderError> {
    if nullspace_included(e, e2)? {
        let gamma = linear_factor(e, e2)?
            .expect("nullspace inclusion implies the row space contains every row of E'");
        Ok(ComparisonVerdict { robustly_more_informative: true, gamma: Some(gamma), witness: None })
    } else {
        let witness = build_witness(e, e2)?;
        Ok(ComparisonVerdict {
            robustly_more_informative: false,
            gamma: None,
            witness: Some(witness),
        })
    }
}

/// `Γ` with `E' = Γ E`, one row at a time: row `i` of `Γ` solves
/// `Eᵀ γ = (row i of E')ᵀ`. `None` iff some row of `E'` lies outside the
/// row space of `E`.
pub fn linear_factor(e: &RatMatrix, e2: &RatMatrix) -> Result<Option<RatMatrix>, OrderError> {
    same_states(e, e2)?;
    let et = e.transpose();
    let mut rows = Vec::with_capacity(e2.rows());
    for i in 0..e2.rows() {
        match et.solve(&e2.row_vector(i))? {
            Some(g) => rows.push(g.into_inner()),
            None => return Ok(None),
        }
    }
    Ok(Some(RatMatrix::from_rows(rows)?))
}

/// Decides whether some nonnegative `Γ`, stochastic under `convention`,
/// satisfies `E' = Γ E`, by exact phase-one simplex.
///
/// Variables are the entries of `Γ` (row major, `l x m`). Constraints are
/// the `l * n` entries of `Γ E = E'` followed by the stochastic sums.
pub fn blackwell_garbling(
    e: &RatMatrix,
    e2: &RatMatrix,
    convention: StochasticityConvention,
) -> Result<GarblingResult, OrderError> {
    same_states(e, e2)?;
    let (m, n, l) = (e.rows(), e.cols(), e2.rows());
    let vars = l * m;
    let var = |i: usize, k: usize| i * m + k;

    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();
    for i in 0..l {
        for j in 0..n {
            let mut r = vec![Rational::zero(); vars];
            for k in 0..m {
                r[var(i, k)] = e.get(k, j).clone();
            }
            rows.push(r);
            rhs.push(e2.get(i, j).clone());
        }
    }
    match convention {
        StochasticityConvention::RowStochastic => {
            for i in 0..l {
                let mut r = vec![Rational::zero(); vars];
                for k in 0..m {
                    r[var(i, k)] = Rational::one();
                }
                rows.push(r);
                rhs.push(Rational::one());
            }
        }
        StochasticityConvention::ColumnStochastic => {
            for k in 0..m {
                let mut r = vec![Rational::zero(); vars];
                for i in 0..l {
                    r[var(i, k)] = Rational::one();
                }
                rows.push(r);
                rhs.push(Rational::one());
            }
        }
    }
    let a = RatMatrix::from_rows(rows)?;
    match simplex::feasible_point(&a, &rhs) {
        Some(x) => {
            let gamma = RatMatrix::from_fn(l, m, |i, k| x[var(i, k)].clone());
            debug_assert_eq!(&gamma.mul(e)?, e2);
            Ok(GarblingResult { feasible: true, gamma: Some(gamma) })
        }
        None => Ok(GarblingResult { feasible: false, gamma: None }),
    }
}

/// Largest `t` with `mu + t d` still in the simplex. Requires `d` to have a
/// negative entry, which any nonzero `d` with zero sum does.
pub fn max_simplex_step(mu: &Prior, d: &RatVector) -> Rational {
    mu.iter()
        .zip(d.iter())
        .filter(|(_, di)| di.is_negative())
        .map(|(m, di)| -(m / di))
        .min()
        .expect("nonzero direction with zero sum has a negative entry")
}

/// Max-margin separation of `p` from the convex hull of `vertices`:
/// maximize `ε` subject to `<a, q - p> >= ε` for every vertex `q`, with
/// `-1 <= a_i <= 1`.
///
/// Standard form uses `u = a + 1 ∈ [0, 2]`, slack `s` for `u <= 2`, the
/// margin `ε >= 0` and one surplus per vertex. Because `p` and every `q`
/// sum to one, `Σ (q - p)_i = 0` and each vertex row has right-hand side 0.
pub fn separating_action(
    p: &Prior,
    vertices: &[Prior],
) -> Result<(Action, Rational), OrderError> {
    let n = p.len();
    let k = vertices.len();
    // Columns: u (n) | s (n) | eps (1) | surplus (k)
    let width = 2 * n + 1 + k;
    let eps = 2 * n;
    let mut rows = Vec::with_capacity(n + k);
    let mut rhs = Vec::with_capacity(n + k);
    for i in 0..n {
        let mut r = vec![Rational::zero(); width];
        r[i] = Rational::one();
        r[n + i] = Rational::one();
        rows.push(r);
        rhs.push(Rational::from_integer(2.into()));
    }
    for (j, q) in vertices.iter().enumerate() {
        let mut r = vec![Rational::zero(); width];
        let mut constant = Rational::zero();
        for i in 0..n {
            let diff = &q[i] - &p[i];
            constant += &diff;
            r[i] = diff;
        }
        r[eps] = -Rational::one();
        r[eps + 1 + j] = -Rational::one();
        rows.push(r);
        rhs.push(constant);
    }
    let mut c = vec![Rational::zero(); width];
    c[eps] = Rational::one();
    let a = RatMatrix::from_rows(rows)?;
    match simplex::maximize(&a, &rhs, &c) {
        LpOutcome::Optimal { x, value } => {
            let payoffs = (0..n).map(|i| &x[i] - Rational::one()).collect();
            Ok((Action::from_rationals(payoffs)?, value))
        }
        other => Err(OrderError::PreconditionViolated(format!(
            "separation LP did not reach an optimum: {other:?}"
        ))),
    }
}

/// Smallest gap `<a, q> - <a, p>` over the vertices `q`.
pub fn separation_margin(action: &Action, p: &Prior, vertices: &[Prior]) -> Rational {
    let base = action.expected(p);
    vertices
        .iter()
        .map(|q| action.expected(q) - &base)
        .min()
        .expect("nonempty vertex list")
}

/// Constructs a [`RobustnessWitness`] when `null(E) ⊄ null(E')`.
///
/// `mu` is uniform, `d` is the first nullspace basis vector of `E` that `E'`
/// does not annihilate, `lambda` is half the largest step keeping
/// `mu + lambda d` in the simplex, and the action maximizes the separation
/// margin between `p` and the `E'`-identified set.
pub fn build_witness(e: &RatMatrix, e2: &RatMatrix) -> Result<RobustnessWitness, OrderError> {
    same_states(e, e2)?;
    let n = e.cols();
    let mut direction = None;
    for d in e.nullspace_basis() {
        if !e2.mul_vec(&d)?.is_zero() {
            direction = Some(d);
            break;
        }
    }
    let direction = direction.ok_or_else(|| {
        OrderError::PreconditionViolated(
            "null(E) is contained in null(E'); E is robustly more informative".into(),
        )
    })?;
    if !direction.sum().is_zero() {
        return Err(OrderError::PreconditionViolated(
            "nullspace direction does not sum to zero; E is not column stochastic".into(),
        ));
    }
    let mu = Prior::uniform(n);
    let lambda = max_simplex_step(&mu, &direction) / Rational::from_integer(2.into());
    let p = Prior::new(mu.weights().add(&direction.scale(&lambda)))?;
    let coarse = IdentifiedSet::from_matrix(e2, &mu)?;
    let (action, margin) = separating_action(&p, coarse.vertices())?;
    if !margin.is_positive() {
        return Err(OrderError::PreconditionViolated(
            "separation margin is not positive".into(),
        ));
    }
    Ok(RobustnessWitness { mu, direction, lambda, p, action, margin })
}

/// Checks every defining property of a witness against `E` and `E'`.
pub fn verify_witness(
    e: &RatMatrix,
    e2: &RatMatrix,
    w: &RobustnessWitness,
) -> Result<(), String> {
    let check = |ok: bool, what: &str| if ok { Ok(()) } else { Err(what.to_string()) };
    let d_e = e.mul_vec(&w.direction).map_err(|x| x.to_string())?;
    check(d_e.is_zero(), "E·d is not zero")?;
    let d_e2 = e2.mul_vec(&w.direction).map_err(|x| x.to_string())?;
    check(!d_e2.is_zero(), "E'·d is zero")?;
    check(w.mu.has_full_support(), "mu lacks full support")?;
    check(w.p.has_full_support(), "p is not strictly inside the simplex")?;
    check(
        w.p.weights() == &w.mu.weights().add(&w.direction.scale(&w.lambda)),
        "p differs from mu + lambda d",
    )?;
    let fine = IdentifiedSet::from_matrix(e, &w.mu).map_err(|x| x.to_string())?;
    let coarse = IdentifiedSet::from_matrix(e2, &w.mu).map_err(|x| x.to_string())?;
    check(fine.contains(&w.p).map_err(|x| x.to_string())?, "p is outside the E-set")?;
    check(!coarse.contains(&w.p).map_err(|x| x.to_string())?, "p is inside the E'-set")?;
    check(w.margin.is_positive(), "margin is not positive")?;
    let base = w.action.expected(&w.p);
    for q in coarse.vertices().iter() {
        check(w.action.expected(q) >= &base + &w.margin, "a vertex of the E'-set is not separated")?;
    }
    let (low, _) = fine.min_linear(&w.action).map_err(|x| x.to_string())?;
    let (high, _) = coarse.min_linear(&w.action).map_err(|x| x.to_string())?;
    check(low < high, "worst case under E is not strictly below worst case under E'")
}

/// The single-action decision problem certifying a failed comparison.
pub fn witness_decision_problem(w: &RobustnessWitness) -> DecisionProblem {
    DecisionProblem::new(w.mu.clone(), vec![w.action.clone()])
        .expect("witness action has one payoff per state")
}

/// Forms `E' = Γ₀ E` and compares `E` against it. Under the column
/// convention the product is validated as an experiment first.
pub fn blackwell_implies_robust_check(
    e: &RatMatrix,
    garbling: &RatMatrix,
    convention: StochasticityConvention,
) -> Result<bool, OrderError> {
    if !convention.is_stochastic(garbling) {
        return Err(OrderError::PreconditionViolated(format!(
            "garbling is not {convention}-stochastic"
        )));
    }
    let garbled = garbling.mul(e)?;
    let garbled = match convention {
        StochasticityConvention::ColumnStochastic => validate_experiment(garbled)?.into_matrix(),
        StochasticityConvention::RowStochastic => garbled,
    };
    Ok(robustly_more_informative(e, &garbled)?.robustly_more_informative)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::{random_experiment, random_garbling};
    use crate::rational::{int, rat};

    fn mat(rows: &[&[(i64, i64)]]) -> RatMatrix {
        RatMatrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&(p, q)| rat(p, q)).collect()).collect(),
        )
        .unwrap()
    }

    fn example_e() -> RatMatrix {
        mat(&[&[(4, 5), (1, 5)], &[(1, 5), (4, 5)]])
    }

    fn example_e_prime() -> RatMatrix {
        mat(&[&[(7, 10), (2, 5)], &[(3, 10), (3, 5)]])
    }

    fn split() -> RatMatrix {
        mat(&[&[(1, 1), (0, 1), (0, 1)], &[(0, 1), (1, 1), (1, 1)]])
    }

    fn split_other() -> RatMatrix {
        mat(&[&[(1, 1), (1, 1), (0, 1)], &[(0, 1), (0, 1), (1, 1)]])
    }

    fn ones3() -> RatMatrix {
        mat(&[&[(1, 1), (1, 1), (1, 1)]])
    }

    fn vec_of(xs: &[(i64, i64)]) -> Vec<Rational> {
        xs.iter().map(|&(p, q)| rat(p, q)).collect()
    }

    #[test]
    fn comparison_examples() {
        let v = robustly_more_informative(&example_e(), &example_e_prime()).unwrap();
        assert!(v.robustly_more_informative);
        assert!(v.witness.is_none());
        assert_eq!(v.gamma.unwrap().mul(&example_e()).unwrap(), example_e_prime());
        assert!(robustly_more_informative(&example_e_prime(), &example_e()).unwrap().robustly_more_informative);

        let v = robustly_more_informative(&split(), &ones3()).unwrap();
        assert!(v.robustly_more_informative);
        assert_eq!(v.gamma.unwrap().mul(&split()).unwrap(), ones3());

        let v = robustly_more_informative(&split(), &split_other()).unwrap();
        assert!(!v.robustly_more_informative);
        assert!(v.gamma.is_none());
        verify_witness(&split(), &split_other(), v.witness.as_ref().unwrap()).unwrap();

        assert_eq!(
            robustly_more_informative(&example_e(), &split()),
            Err(OrderError::StateCountMismatch(2, 3))
        );
    }

    #[test]
    fn linear_factor_examples() {
        assert_eq!(
            linear_factor(&example_e(), &example_e_prime()).unwrap().unwrap(),
            mat(&[&[(4, 5), (3, 10)], &[(1, 5), (7, 10)]])
        );
        assert_eq!(
            linear_factor(&example_e_prime(), &example_e()).unwrap().unwrap(),
            mat(&[&[(7, 5), (-3, 5)], &[(-2, 5), (8, 5)]])
        );
        assert_eq!(linear_factor(&example_e(), &example_e()).unwrap().unwrap(), RatMatrix::identity(2));
        assert_eq!(linear_factor(&split(), &split_other()).unwrap(), None);
    }

    #[test]
    fn garbling_examples() {
        use StochasticityConvention::*;
        let g = blackwell_garbling(&example_e(), &example_e_prime(), RowStochastic).unwrap();
        assert_eq!(g, GarblingResult { feasible: false, gamma: None });
        let g = blackwell_garbling(&example_e_prime(), &example_e(), RowStochastic).unwrap();
        assert!(!g.feasible);
        let g = blackwell_garbling(&example_e(), &example_e_prime(), ColumnStochastic).unwrap();
        assert!(g.feasible);
        assert_eq!(g.gamma.unwrap(), mat(&[&[(4, 5), (3, 10)], &[(1, 5), (7, 10)]]));
        let g = blackwell_garbling(&example_e_prime(), &example_e(), ColumnStochastic).unwrap();
        assert!(!g.feasible);

        for conv in [RowStochastic, ColumnStochastic] {
            let g = blackwell_garbling(&example_e(), &example_e(), conv).unwrap();
            assert_eq!(g.gamma.unwrap(), RatMatrix::identity(2));
        }
    }

    #[test]
    fn garbling_recovers_generated_certificates() {
        use StochasticityConvention::*;
        for seed in 0..20 {
            let e = random_experiment(3, 3, seed, 10);
            for conv in [RowStochastic, ColumnStochastic] {
                let g0 = random_garbling(2, 3, seed + 100, conv);
                let e2 = g0.mul(&e).unwrap();
                let r = blackwell_garbling(&e, &e2, conv).unwrap();
                assert!(r.feasible, "seed {seed} {conv}");
                let g = r.gamma.unwrap();
                assert!(conv.is_stochastic(&g));
                assert_eq!(g.mul(&e).unwrap(), e2);
            }
        }
    }

    #[test]
    fn witness_for_split_pair() {
        let w = build_witness(&split(), &split_other()).unwrap();
        assert_eq!(w.mu, Prior::uniform(3));
        assert_eq!(w.direction.as_slice(), &[int(0), int(-1), int(1)]);
        assert_eq!(w.lambda, rat(1, 6));
        assert_eq!(w.p.to_vec(), vec_of(&[(1, 3), (1, 6), (1, 2)]));
        verify_witness(&split(), &split_other(), &w).unwrap();

        // A hand-built separator: every prior plausible under E'' puts 1/3 on
        // state 3 while p puts 1/2 there.
        let coarse = IdentifiedSet::from_matrix(&split_other(), &w.mu).unwrap();
        let hand = Action::from_rationals(vec![int(0), int(0), int(-1)]).unwrap();
        assert_eq!(separation_margin(&hand, &w.p, coarse.vertices()), rat(1, 6));
        assert!(w.margin >= rat(1, 6));
        assert_eq!(w.margin, rat(1, 3));
        assert_eq!(w.action.payoffs().as_slice(), &[int(1), int(1), int(-1)]);

        let problem = witness_decision_problem(&w);
        assert_eq!(problem.actions().len(), 1);
        assert_eq!(problem.prior(), &Prior::uniform(3));
    }

    #[test]
    fn witness_for_swapped_pair() {
        let w = build_witness(&split_other(), &split()).unwrap();
        assert_eq!(w.direction.as_slice(), &[int(-1), int(1), int(0)]);
        assert_eq!(w.lambda, rat(1, 6));
        verify_witness(&split_other(), &split(), &w).unwrap();
    }

    #[test]
    fn witness_requires_failed_order() {
        assert!(matches!(
            build_witness(&example_e(), &example_e_prime()),
            Err(OrderError::PreconditionViolated(_))
        ));
        assert!(matches!(build_witness(&split(), &ones3()), Err(OrderError::PreconditionViolated(_))));
    }

    #[test]
    fn blackwell_implies_robust_examples() {
        use StochasticityConvention::*;
        let g0 = mat(&[&[(4, 5), (3, 10)], &[(1, 5), (7, 10)]]);
        assert_eq!(g0.mul(&example_e()).unwrap(), example_e_prime());
        assert!(blackwell_implies_robust_check(&example_e(), &g0, ColumnStochastic).unwrap());
        assert!(blackwell_implies_robust_check(&example_e(), &RatMatrix::identity(2), RowStochastic).unwrap());
        let flat = mat(&[&[(1, 3), (1, 3)], &[(2, 3), (2, 3)]]);
        assert!(blackwell_implies_robust_check(&example_e(), &flat, ColumnStochastic).unwrap());
        assert!(matches!(
            blackwell_implies_robust_check(&example_e(), &g0, RowStochastic),
            Err(OrderError::PreconditionViolated(_))
        ));
        assert!(matches!(
            blackwell_implies_robust_check(&split(), &RatMatrix::identity(3), RowStochastic),
            Err(OrderError::Linalg(LinalgError::DimensionMismatch(_)))
        ));
    }
}
