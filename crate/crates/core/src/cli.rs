//! Command implementations behind the `robust-info` binary.
//!
//! Each command returns [`Report`]s rather than printing, so tests can drive
//! them directly. Exit codes: 0 success, 1 input or validation error,
//! 2 internal invariant failure.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::experiment::{random_experiment, random_garbling, signal_distribution, Experiment, StochasticityConvention};
use crate::identified::identified_set;
use crate::io::{self, InputError};
use crate::linalg::RatMatrix;
use crate::maxmin::maxmin;
use crate::orders::{
    blackwell_garbling, robustly_more_informative, verify_witness, ComparisonVerdict, GarblingResult,
    OrderError, RobustnessWitness,
};
use crate::rational::{rat, Rational};
use crate::report::{Format, Report};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("{0}")]
    Validation(String),
    #[error("internal invariant failed: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Validation(_) => 1,
            CliError::Internal(_) => 2,
        }
    }
}

impl From<OrderError> for CliError {
    fn from(e: OrderError) -> Self {
        match e {
            OrderError::StateCountMismatch(..) | OrderError::Experiment(_) => CliError::Validation(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<crate::experiment::ExperimentError> for CliError {
    fn from(e: crate::experiment::ExperimentError) -> Self {
        CliError::Validation(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Row,
    Column,
}

impl From<ConventionArg> for StochasticityConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Row => StochasticityConvention::RowStochastic,
            ConventionArg::Column => StochasticityConvention::ColumnStochastic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Table,
    Kv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Table => Format::Table,
            FormatArg::Kv => Format::Kv,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "robust-info", version, about = "Compare statistical experiments exactly")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "table", global = true)]
    pub format: FormatArg,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Robust order between two experiments, in both directions.
    Compare { e: PathBuf, e_prime: PathBuf },
    /// Blackwell garbling feasibility, in both directions.
    Garbling {
        e: PathBuf,
        e_prime: PathBuf,
        #[arg(long, value_enum, default_value = "row")]
        convention: ConventionArg,
    },
    /// Vertices and classification of the plausible-prior set.
    IdentifiedSet { e: PathBuf, prior: PathBuf },
    /// Maxmin value of a decision problem.
    Maxmin { e: PathBuf, problem: PathBuf },
    /// Recompute the two-state worked example exactly.
    ReproduceExample,
    /// Compare many pairs: from a manifest of `E E'` path pairs, or random.
    Batch {
        manifest: Option<PathBuf>,
        /// Number of random pairs to generate instead of reading a manifest.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

pub fn run(cli: &Cli) -> Result<Vec<Report>, CliError> {
    match &cli.command {
        Command::Compare { e, e_prime } => cmd_compare(e, e_prime).map(|r| vec![r]),
        Command::Garbling { e, e_prime, convention } => {
            cmd_garbling(e, e_prime, (*convention).into()).map(|r| vec![r])
        }
        Command::IdentifiedSet { e, prior } => cmd_identified_set(e, prior).map(|r| vec![r]),
        Command::Maxmin { e, problem } => cmd_maxmin(e, problem).map(|r| vec![r]),
        Command::ReproduceExample => cmd_reproduce_example().map(|r| vec![r]),
        Command::Batch { manifest, random, seed } => match (manifest, random) {
            (Some(path), None) => cmd_batch_manifest(path),
            (None, Some(count)) => cmd_batch_random(*count, *seed),
            _ => Err(CliError::Validation("batch takes either a manifest path or --random N".into())),
        },
    }
}

/// Outcome of comparing two experiments both ways under the robust order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Equivalent,
    FirstDominates,
    SecondDominates,
    Incomparable,
}

impl Classification {
    pub fn from_directions(forward: bool, backward: bool) -> Self {
        match (forward, backward) {
            (true, true) => Self::Equivalent,
            (true, false) => Self::FirstDominates,
            (false, true) => Self::SecondDominates,
            (false, false) => Self::Incomparable,
        }
    }

    pub fn swapped(self) -> Self {
        match self {
            Self::FirstDominates => Self::SecondDominates,
            Self::SecondDominates => Self::FirstDominates,
            other => other,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::Equivalent => "equivalent",
            Self::FirstDominates => "E > E'",
            Self::SecondDominates => "E' > E",
            Self::Incomparable => "incomparable",
        }
    }
}

fn push_witness(report: &mut Report, prefix: &str, w: &RobustnessWitness) {
    report
        .vector(format!("{prefix}.mu"), &w.mu)
        .vector(format!("{prefix}.direction"), &w.direction)
        .scalar(format!("{prefix}.lambda"), &w.lambda)
        .vector(format!("{prefix}.p"), &w.p)
        .vector(format!("{prefix}.action"), w.action.payoffs())
        .scalar(format!("{prefix}.margin"), &w.margin);
}

fn push_verdict(
    report: &mut Report,
    tag: &str,
    verdict: &ComparisonVerdict,
    e: &RatMatrix,
    e2: &RatMatrix,
) -> Result<(), CliError> {
    report.flag(format!("{tag}.robust"), verdict.robustly_more_informative);
    if let Some(g) = &verdict.gamma {
        if &g.mul(e).map_err(|x| CliError::Internal(x.to_string()))? != e2 {
            return Err(CliError::Internal(format!("{tag}: factor does not reproduce the target")));
        }
        report.matrix(format!("{tag}.gamma"), g);
    }
    if let Some(w) = &verdict.witness {
        verify_witness(e, e2, w).map_err(|x| CliError::Internal(format!("{tag}: {x}")))?;
        push_witness(report, &format!("{tag}.witness"), w);
        let problem = crate::orders::witness_decision_problem(w);
        let low = crate::maxmin::maxmin_matrix(e, &problem)?.value;
        let high = crate::maxmin::maxmin_matrix(e2, &problem)?.value;
        if low >= high {
            return Err(CliError::Internal(format!("{tag}: witness problem does not separate")));
        }
        report.scalar(format!("{tag}.witness.maxmin_first"), &low);
        report.scalar(format!("{tag}.witness.maxmin_second"), &high);
    }
    Ok(())
}

/// Robust comparison of two experiments in both directions.
pub fn compare_experiments(e: &Experiment, e2: &Experiment) -> Result<(Classification, Report), CliError> {
    let forward = robustly_more_informative(e, e2)?;
    let backward = robustly_more_informative(e2, e)?;
    let class = Classification::from_directions(
        forward.robustly_more_informative,
        backward.robustly_more_informative,
    );
    let mut report = Report::new("compare");
    report.text("verdict", class.label());
    push_verdict(&mut report, "E->E'", &forward, e, e2)?;
    push_verdict(&mut report, "E'->E", &backward, e2, e)?;
    Ok((class, report))
}

pub fn cmd_compare(path_e: &Path, path_e2: &Path) -> Result<Report, CliError> {
    let e = io::read_experiment(path_e)?;
    let e2 = io::read_experiment(path_e2)?;
    check_states(&e, &e2)?;
    let (_, mut report) = compare_experiments(&e, &e2)?;
    report.fields.insert(0, ("E".into(), crate::report::Field::Text(path_e.display().to_string())));
    report.fields.insert(1, ("E'".into(), crate::report::Field::Text(path_e2.display().to_string())));
    Ok(report)
}

fn check_states(e: &Experiment, e2: &Experiment) -> Result<(), CliError> {
    if e.n() != e2.n() {
        return Err(CliError::Validation(format!(
            "experiments have different state counts: {} vs {}",
            e.n(),
            e2.n()
        )));
    }
    Ok(())
}

fn push_garbling(report: &mut Report, tag: &str, g: &GarblingResult) {
    report.flag(format!("{tag}.feasible"), g.feasible);
    if let Some(gamma) = &g.gamma {
        report.matrix(format!("{tag}.gamma"), gamma);
    }
}

pub fn garbling_report(
    e: &RatMatrix,
    e2: &RatMatrix,
    convention: StochasticityConvention,
) -> Result<Report, CliError> {
    let forward = blackwell_garbling(e, e2, convention)?;
    let backward = blackwell_garbling(e2, e, convention)?;
    let mut report = Report::new("garbling");
    report.text("convention", convention.to_string());
    report.text(
        "verdict",
        Classification::from_directions(forward.feasible, backward.feasible).label(),
    );
    push_garbling(&mut report, "E->E'", &forward);
    push_garbling(&mut report, "E'->E", &backward);

    let other = match convention {
        StochasticityConvention::RowStochastic => StochasticityConvention::ColumnStochastic,
        StochasticityConvention::ColumnStochastic => StochasticityConvention::RowStochastic,
    };
    let alt_forward = blackwell_garbling(e, e2, other)?.feasible;
    let alt_backward = blackwell_garbling(e2, e, other)?.feasible;
    if (alt_forward, alt_backward) != (forward.feasible, backward.feasible) {
        report.text(
            "note",
            format!(
                "the {other}-stochastic convention gives a different verdict: {}",
                Classification::from_directions(alt_forward, alt_backward).label()
            ),
        );
    }
    Ok(report)
}

pub fn cmd_garbling(path_e: &Path, path_e2: &Path, convention: StochasticityConvention) -> Result<Report, CliError> {
    let e = io::read_experiment(path_e)?;
    let e2 = io::read_experiment(path_e2)?;
    check_states(&e, &e2)?;
    garbling_report(&e, &e2, convention)
}

pub fn cmd_identified_set(path_e: &Path, path_prior: &Path) -> Result<Report, CliError> {
    let e = io::read_experiment(path_e)?;
    let mu = io::read_prior(path_prior)?;
    let observed = signal_distribution(&e, &mu)?;
    let set = identified_set(&e, &mu)?;
    let class = if set.is_singleton() {
        "singleton"
    } else if set.is_full_simplex() {
        "full simplex"
    } else {
        "partial"
    };
    let vertices: Vec<Vec<Rational>> = set.vertices().iter().map(|v| v.to_vec()).collect();
    let vertex_matrix = RatMatrix::from_rows(vertices).map_err(|x| CliError::Internal(x.to_string()))?;
    let mut report = Report::new("identified-set");
    report
        .vector("observed", &observed)
        .text("class", class)
        .flag("singleton", set.is_singleton())
        .flag("full_simplex", set.is_full_simplex())
        .text("vertex_count", set.vertices().len().to_string())
        .matrix("vertices", &vertex_matrix);
    Ok(report)
}

pub fn cmd_maxmin(path_e: &Path, path_problem: &Path) -> Result<Report, CliError> {
    let e = io::read_experiment(path_e)?;
    let problem = io::read_problem(path_problem)?;
    let out = maxmin(&e, &problem)?;
    let mut report = Report::new("maxmin");
    report
        .scalar("value", &out.value)
        .text("best_action_index", out.best_index.to_string())
        .vector("best_action", out.best_action.payoffs())
        .vector("worst_prior", &out.worst_prior);
    Ok(report)
}

fn example_matrix(rows: [[(i64, i64); 2]; 2]) -> RatMatrix {
    RatMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&(p, q)| rat(p, q)).collect()).collect())
        .expect("2x2")
}

/// The two-state pair `E = [.8 .2; .2 .8]`, `E' = [.7 .4; .3 .6]`.
pub fn example_pair() -> (Experiment, Experiment) {
    let e = example_matrix([[(4, 5), (1, 5)], [(1, 5), (4, 5)]]);
    let e2 = example_matrix([[(7, 10), (2, 5)], [(3, 10), (3, 5)]]);
    (
        crate::experiment::validate_experiment(e).expect("column stochastic"),
        crate::experiment::validate_experiment(e2).expect("column stochastic"),
    )
}

pub fn cmd_reproduce_example() -> Result<Report, CliError> {
    let (e, e2) = example_pair();
    let fail = |what: &str| CliError::Internal(what.to_string());
    let inv = |m: &RatMatrix| m.invert().ok().flatten().ok_or_else(|| fail("example matrix is singular"));
    let e_inv = inv(&e)?;
    let e2_inv = inv(&e2)?;
    let gamma = e2.mul(&e_inv).map_err(|x| fail(&x.to_string()))?;
    let gamma_prime = e.mul(&e2_inv).map_err(|x| fail(&x.to_string()))?;

    let expect = |got: &RatMatrix, rows: [[(i64, i64); 2]; 2], name: &str| {
        if *got == example_matrix(rows) {
            Ok(())
        } else {
            Err(fail(&format!("{name} = {} differs from the expected value", got.inline())))
        }
    };
    expect(&e_inv, [[(4, 3), (-1, 3)], [(-1, 3), (4, 3)]], "E^-1")?;
    expect(&e2_inv, [[(2, 1), (-4, 3)], [(-1, 1), (7, 3)]], "E'^-1")?;
    expect(&gamma, [[(4, 5), (3, 10)], [(1, 5), (7, 10)]], "Gamma")?;
    expect(&gamma_prime, [[(7, 5), (-3, 5)], [(-2, 5), (8, 5)]], "Gamma'")?;

    let row_sums = gamma.row_sums();
    if row_sums != vec![rat(11, 10), rat(9, 10)] {
        return Err(fail("Gamma row sums are not 11/10 and 9/10"));
    }
    let gamma_prime_negative = gamma_prime.entries().any(Signed::is_negative);
    if !gamma_prime_negative {
        return Err(fail("Gamma' has no negative entry"));
    }
    if crate::orders::linear_factor(&e, &e2)?.as_ref() != Some(&gamma)
        || crate::orders::linear_factor(&e2, &e)?.as_ref() != Some(&gamma_prime)
    {
        return Err(fail("linear factors disagree with the inverse products"));
    }

    let (class, _) = compare_experiments(&e, &e2)?;
    if class != Classification::Equivalent {
        return Err(fail("robust order does not report equivalence"));
    }
    let row = StochasticityConvention::RowStochastic;
    let col = StochasticityConvention::ColumnStochastic;
    let row_fwd = blackwell_garbling(&e, &e2, row)?;
    let row_bwd = blackwell_garbling(&e2, &e, row)?;
    if row_fwd.feasible || row_bwd.feasible {
        return Err(fail("a row-stochastic garbling exists"));
    }
    let col_fwd = blackwell_garbling(&e, &e2, col)?;
    let col_bwd = blackwell_garbling(&e2, &e, col)?;

    let mut report = Report::new("reproduce-example");
    report
        .matrix("E", &e)
        .matrix("E'", &e2)
        .flag("full_rank", e.rank() == 2 && e2.rank() == 2)
        .matrix("E^-1", &e_inv)
        .matrix("E'^-1", &e2_inv)
        .matrix("Gamma", &gamma)
        .matrix("Gamma'", &gamma_prime)
        .vector("Gamma.row_sums", &row_sums)
        .vector("Gamma.column_sums", &gamma.column_sums())
        .flag("Gamma'.has_negative_entry", gamma_prime_negative)
        .text("robust.verdict", class.label())
        .text(
            "blackwell.row.verdict",
            Classification::from_directions(row_fwd.feasible, row_bwd.feasible).label(),
        )
        .text(
            "blackwell.column.verdict",
            Classification::from_directions(col_fwd.feasible, col_bwd.feasible).label(),
        );
    if let Some(g) = &col_fwd.gamma {
        report.matrix("blackwell.column.E->E'.gamma", g);
    }
    let column_gamma_ok = gamma.column_sums().iter().all(One::is_one) && !gamma.entries().any(Signed::is_negative);
    if col_fwd.feasible && column_gamma_ok {
        report.text(
            "note",
            "Gamma is column-stochastic: with garblings taken column-stochastic, \
             E' is a garbling of E and the pair is Blackwell comparable",
        );
    }
    Ok(report)
}

fn batch_entry(index: usize, label: String, e: &Experiment, e2: &Experiment) -> Result<Report, CliError> {
    check_states(e, e2)?;
    let (class, mut report) = compare_experiments(e, e2)?;
    let (swapped, _) = compare_experiments(e2, e)?;
    if swapped != class.swapped() {
        return Err(CliError::Internal(format!("pair {index}: verdict is not symmetric under swap")));
    }
    report.title = format!("batch {index}");
    report.fields.insert(0, ("pair".into(), crate::report::Field::Text(label)));
    report.matrix("E", e).matrix("E'", e2);
    Ok(report)
}

pub fn cmd_batch_manifest(path: &Path) -> Result<Vec<Report>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [a, b] = parts.as_slice() else {
            return Err(CliError::Validation(format!(
                "{}, row {}: expected two paths",
                path.display(),
                i + 1
            )));
        };
        let e = io::read_experiment(&base.join(a))?;
        let e2 = io::read_experiment(&base.join(b))?;
        pairs.push((format!("{a} {b}"), e, e2));
    }
    pairs
        .par_iter()
        .enumerate()
        .map(|(i, (label, e, e2))| batch_entry(i, label.clone(), e, e2))
        .collect()
}

/// Random pairs mixing independent draws and garbled copies, so that all
/// four classifications occur.
pub fn random_pair(seed: u64) -> (Experiment, Experiment) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=4);
    let m = rng.gen_range(1..=4);
    let e = random_experiment(m, n, rng.gen(), 20);
    let e2 = if rng.gen_bool(0.5) {
        let l = rng.gen_range(1..=4);
        random_experiment(l, n, rng.gen(), 20)
    } else {
        let l = rng.gen_range(1..=4);
        let g = random_garbling(l, m, rng.gen(), StochasticityConvention::ColumnStochastic);
        crate::experiment::validate_experiment(g.mul(&e).expect("shapes agree")).expect("garbling preserves stochasticity")
    };
    (e, e2)
}

pub fn cmd_batch_random(count: usize, seed: u64) -> Result<Vec<Report>, CliError> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            let s = seed.wrapping_add(i as u64);
            let (e, e2) = random_pair(s);
            batch_entry(i, format!("seed {s}"), &e, &e2)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification_symmetry() {
        use Classification::*;
        for c in [Equivalent, FirstDominates, SecondDominates, Incomparable] {
            assert_eq!(c.swapped().swapped(), c);
        }
        assert_eq!(Classification::from_directions(true, false).swapped(), SecondDominates);
    }

    #[test]
    fn reproduce_example_succeeds() {
        let r = cmd_reproduce_example().unwrap();
        assert_eq!(r.get("robust.verdict"), Some(&crate::report::Field::Text("equivalent".into())));
        assert_eq!(
            r.get("blackwell.row.verdict"),
            Some(&crate::report::Field::Text("incomparable".into()))
        );
        assert!(r.get("note").is_some());
    }

    #[test]
    fn random_batch_is_deterministic() {
        let a = cmd_batch_random(6, 11).unwrap();
        let b = cmd_batch_random(6, 11).unwrap();
        assert_eq!(a, b);
    }
}
