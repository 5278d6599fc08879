#![allow(dead_code)]

//! Test-only oracles and generators, independent of the vertex enumerator.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use robust_info::simplex::{maximize, LpOutcome};
use robust_info::{
    random_experiment, random_garbling, validate_experiment, Action, Experiment, Prior, RatMatrix,
    RatVector, Rational, StochasticityConvention,
};

pub const GRID: u64 = 24;

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn matrix(rows: &[&[(i64, i64)]]) -> RatMatrix {
    RatMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&(p, q)| rat(p, q)).collect()).collect())
        .unwrap()
}

pub fn experiment(rows: &[&[(i64, i64)]]) -> Experiment {
    validate_experiment(matrix(rows)).unwrap()
}

/// Every point of the simplex with `n` coordinates that are multiples of
/// `1/den`.
pub fn grid_points(n: usize, den: u64) -> Vec<Vec<Rational>> {
    fn rec(n: usize, left: u64, den: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<Rational>>) {
        if n == 1 {
            prefix.push(left);
            out.push(
                prefix.iter().map(|&k| Rational::new(BigInt::from(k), BigInt::from(den))).collect(),
            );
            prefix.pop();
            return;
        }
        for k in 0..=left {
            prefix.push(k);
            rec(n - 1, left - k, den, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, den, den, &mut Vec::new(), &mut out);
    out
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

fn mat_vec(m: &RatMatrix, v: &[Rational]) -> Vec<Rational> {
    (0..m.rows()).map(|i| dot(m.row(i), v)).collect()
}

/// Grid points lying exactly in `{nu : M nu = observed}`.
pub fn feasible_grid(m: &RatMatrix, observed: &[Rational], grid: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    grid.iter().filter(|g| mat_vec(m, g) == observed).cloned().collect()
}

/// Minimum of `<a, nu>` over feasible grid points.
pub fn grid_min(action: &[Rational], feasible: &[Vec<Rational>]) -> Option<Rational> {
    feasible.iter().map(|g| dot(action, g)).min()
}

/// Minimum of `<a, nu>` over the identified set by a direct simplex LP on
/// `{M nu = observed, sum nu = 1, nu >= 0}`.
pub fn lp_min(m: &RatMatrix, observed: &[Rational], action: &[Rational]) -> Rational {
    let ones = RatMatrix::from_fn(1, m.cols(), |_, _| Rational::one());
    let a = m.vstack(&ones).unwrap();
    let mut b = observed.to_vec();
    b.push(Rational::one());
    let c: Vec<Rational> = action.iter().map(|x| -x.clone()).collect();
    match maximize(&a, &b, &c) {
        LpOutcome::Optimal { value, .. } => -value,
        other => panic!("identified set LP failed: {other:?}"),
    }
}

/// Three-state structures with small integer nullspace directions.
pub fn templates() -> Vec<RatMatrix> {
    vec![
        RatMatrix::identity(3),
        matrix(&[&[(1, 1), (0, 1), (0, 1)], &[(0, 1), (1, 1), (1, 1)]]),
        matrix(&[&[(1, 1), (1, 1), (0, 1)], &[(0, 1), (0, 1), (1, 1)]]),
        matrix(&[&[(1, 1), (0, 1), (1, 1)], &[(0, 1), (1, 1), (0, 1)]]),
        matrix(&[&[(1, 1), (0, 1), (1, 2)], &[(0, 1), (1, 1), (1, 2)]]),
        matrix(&[&[(1, 1), (1, 2), (0, 1)], &[(0, 1), (1, 2), (1, 1)]]),
        matrix(&[&[(1, 2), (1, 1), (0, 1)], &[(1, 2), (0, 1), (1, 1)]]),
        matrix(&[&[(1, 1), (1, 1), (1, 1)]]),
    ]
}

/// A 3-state experiment `G T` for a template `T` and a random
/// column-stochastic `G` of full column rank, so `null(G T) = null(T)`.
pub fn template_experiment(seed: u64) -> Experiment {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ts = templates();
    let t = &ts[rng.gen_range(0..ts.len())];
    let k = t.rows();
    loop {
        let m = rng.gen_range(k..=4);
        let g = random_experiment(m, k, rng.gen(), 20);
        if g.rank() == k {
            return validate_experiment(g.mul(t).unwrap()).unwrap();
        }
    }
}

/// A prior on the `1/24` grid.
pub fn grid_prior(n: usize, seed: u64) -> Prior {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = grid_points(n, GRID);
    Prior::from_rationals(points[rng.gen_range(0..points.len())].clone()).unwrap()
}

pub fn integer_action(n: usize, seed: u64, bound: i64) -> Action {
    robust_info::experiment::random_action(n, seed, bound)
}

/// An experiment with rank below its state count.
pub fn rank_deficient_experiment(seed: u64) -> Experiment {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n = rng.gen_range(2..=4);
        let m = rng.gen_range(1..n);
        let e = random_experiment(m, n, rng.gen(), 20);
        if e.rank() < n {
            return e;
        }
    }
}

/// An experiment with full column rank.
pub fn full_rank_experiment(seed: u64) -> Experiment {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n = rng.gen_range(1..=4);
        let m = rng.gen_range(n..=4);
        let e = random_experiment(m, n, rng.gen(), 20);
        if e.rank() == n {
            return e;
        }
    }
}

/// An experiment whose columns all equal one random distribution.
pub fn rank_one_experiment(seed: u64) -> Experiment {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=4);
    let m = rng.gen_range(1..=4);
    let col = random_experiment(m, 1, rng.gen(), 20).column(0);
    let cols: Vec<RatVector> = vec![col; n];
    validate_experiment(RatMatrix::from_columns(&cols).unwrap()).unwrap()
}

/// Two experiments over the same states, independently drawn.
pub fn random_pair(seed: u64) -> (Experiment, Experiment) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=4);
    let m = rng.gen_range(1..=4);
    let l = rng.gen_range(1..=4);
    (random_experiment(m, n, rng.gen(), 20), random_experiment(l, n, rng.gen(), 20))
}

pub fn random_stochastic(l: usize, m: usize, seed: u64, c: StochasticityConvention) -> RatMatrix {
    random_garbling(l, m, seed, c)
}
