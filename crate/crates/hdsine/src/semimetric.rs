//! Verifiers for the simplex inequalities that make the absolute polar sine
//! and hypersine root d-semimetrics, the projection-monotonicity lemmas,
//! the orthogonal-complement one-term relaxation, and a seeded fuzz audit.
//!
//! The simplex inequality reads
//! `f(v_1, …, v_{d+1}) ≤ Σ_i f(v_1, …, u at slot i, …, v_{d+1})`
//! for all tuples and all `u ≠ w`. The audit fuzzes it over mixed benign
//! and adversarial input families with per-trial random streams, records
//! the minimum slack seen, and keeps the worst instance for replay.

use crate::error::{Error, Result};
use crate::exec::map_indexed;
use crate::linalg::{SubspaceFrame, Vector, DEFAULT_TOL};
use crate::sines::{hypersine, polar_sine, PointConfig, SineValue};
use crate::stream::{gaussian_vector, trial_rng};
use rand::Rng;

/// Which d-dimensional sine a check applies to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SineKind {
    Polar,
    Hyper,
}

impl SineKind {
    pub fn name(&self) -> &'static str {
        match self {
            SineKind::Polar => "polar",
            SineKind::Hyper => "hyper",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "polar" => Ok(SineKind::Polar),
            "hyper" => Ok(SineKind::Hyper),
            _ => Err(Error::invalid(format!("unknown sine kind {s:?}"))),
        }
    }

    fn eval(&self, cfg: &PointConfig) -> SineValue {
        match self {
            SineKind::Polar => polar_sine(cfg),
            SineKind::Hyper => hypersine(cfg),
        }
    }

    /// `|sine|`, the d-semimetric itself.
    pub fn abs_value(&self, cfg: &PointConfig) -> f64 {
        self.eval(cfg).value.abs()
    }
}

/// One evaluation of the simplex inequality.
#[derive(Clone, Debug)]
pub struct SimplexInequalityReport {
    pub lhs: f64,
    pub rhs_terms: Vec<f64>,
    /// `Σ rhs − lhs`; the inequality asks for this to be nonnegative.
    pub slack: f64,
    pub holds: bool,
}

/// Slack below which a trial counts as a violation: a hybrid
/// absolute/relative band so that near-degenerate tuples, where both sides
/// round around zero, do not produce false failures.
pub fn slack_tolerance(lhs: f64) -> f64 {
    -1e-9 * lhs.max(1.0)
}

/// Evaluate the simplex inequality for one tuple and one substitute `u`.
pub fn check_simplex_inequality(
    kind: SineKind,
    cfg: &PointConfig,
    u: &Vector,
) -> Result<SimplexInequalityReport> {
    if u.dim() != cfg.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: cfg.ambient_dim(),
            got: u.dim(),
        });
    }
    if (u - cfg.w()).norm() == 0.0 {
        return Err(Error::invalid("u must differ from the apex w"));
    }
    let lhs = kind.abs_value(cfg);
    let mut rhs_terms = Vec::with_capacity(cfg.intrinsic_dim() + 1);
    for i in 0..=cfg.intrinsic_dim() {
        let substituted = cfg.with_replaced(i, u.clone())?;
        rhs_terms.push(kind.abs_value(&substituted));
    }
    let slack = rhs_terms.iter().sum::<f64>() - lhs;
    Ok(SimplexInequalityReport {
        lhs,
        rhs_terms,
        slack,
        holds: slack >= slack_tolerance(lhs),
    })
}

/// Projection monotonicity: for `v_1..v_d` inside a (d+1)-dimensional
/// subspace `V`, projecting the last argument cannot increase the sine:
/// `|sine_0(v_1, …, v_d, P_V(u))| ≤ |sine_0(v_1, …, v_d, u)|`.
///
/// Returns whether the inequality holds with 1e−9 slack.
pub fn check_projection_monotonicity(
    kind: SineKind,
    vs: &[Vector],
    u: &Vector,
    v: &SubspaceFrame,
) -> Result<bool> {
    if !v.is_linear() {
        return Err(Error::invalid("V must be a linear subspace"));
    }
    if v.rank() != vs.len() + 1 {
        return Err(Error::invalid(format!(
            "V must have dimension d+1 = {}, got {}",
            vs.len() + 1,
            v.rank()
        )));
    }
    for (i, vec) in vs.iter().enumerate() {
        if !v.contains(vec) {
            return Err(Error::invalid(format!("v_{} does not lie in V", i + 1)));
        }
    }
    let projected = v.project(u);
    let mut with_proj = vs.to_vec();
    with_proj.push(projected);
    let mut with_u = vs.to_vec();
    with_u.push(u.clone());
    let lhs = kind.abs_value(&PointConfig::at_origin(with_proj)?);
    let rhs = kind.abs_value(&PointConfig::at_origin(with_u)?);
    Ok(lhs <= rhs + 1e-9)
}

/// One-term relaxation across the orthogonal complement: for a tuple inside
/// a (d+1)-dimensional subspace `V` and `u ⊥ V`, `u ≠ 0`, every single
/// substituted term already dominates:
/// `|sine_0(vs)| ≤ |sine_0(… u at slot i …)|` for each `i`.
///
/// Returns whether the bound holds for every slot with 1e−9 slack.
pub fn check_orthogonal_one_term(
    kind: SineKind,
    cfg: &PointConfig,
    v: &SubspaceFrame,
    u: &Vector,
) -> Result<bool> {
    if !cfg.w().is_zero() {
        return Err(Error::invalid("orthogonal one-term check needs w = 0"));
    }
    if v.rank() != cfg.intrinsic_dim() + 1 {
        return Err(Error::invalid(format!(
            "V must have dimension d+1 = {}, got {}",
            cfg.intrinsic_dim() + 1,
            v.rank()
        )));
    }
    for vec in cfg.vectors() {
        if !v.contains(vec) {
            return Err(Error::invalid("tuple does not lie in V"));
        }
    }
    let norm = u.norm();
    if norm == 0.0 {
        return Err(Error::invalid("u must be nonzero"));
    }
    let residual = norm - v.distance_to(u);
    if residual.abs() > DEFAULT_TOL * norm.max(1.0) {
        return Err(Error::invalid("u is not orthogonal to V"));
    }
    let lhs = kind.abs_value(cfg);
    for i in 0..=cfg.intrinsic_dim() {
        let substituted = cfg.with_replaced(i, u.clone())?;
        if lhs > kind.abs_value(&substituted) + 1e-9 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Raw inputs of one audit trial, kept so failures can be replayed.
#[derive(Clone, Debug)]
pub struct TrialInstance {
    pub index: u64,
    pub w: Vector,
    pub vs: Vec<Vector>,
    pub u: Vector,
}

/// Summary of a seeded fuzz audit.
#[derive(Clone, Debug)]
pub struct AuditSummary {
    pub kind: SineKind,
    pub d: usize,
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub failures: u64,
    pub symmetry_failures: u64,
    pub min_slack: f64,
    /// Instance attaining the minimum slack (or the first failure).
    pub worst: TrialInstance,
    pub worst_report: SimplexInequalityReport,
}

/// Draw the inputs of audit trial `index`. Trials cycle through benign
/// gaussian tuples and adversarial families: nearly dependent tuples,
/// `u` nearly parallel to one of the vectors, and extreme scales 1e±8.
pub fn trial_inputs(d: usize, n: usize, seed: u64, index: u64) -> TrialInstance {
    let mut rng = trial_rng(seed, index);
    let w = gaussian_vector(&mut rng, n);
    let mut vs: Vec<Vector> = (0..=d)
        .map(|_| &w + &gaussian_vector(&mut rng, n))
        .collect();
    let mut u = &w + &gaussian_vector(&mut rng, n);
    match index % 10 {
        6 => {
            // Last vector nearly dependent on the others.
            let combo = vs[..d]
                .iter()
                .fold(Vector::zeros(n), |acc, v| &acc + &(&(v - &w)).scaled(0.7));
            let noise = gaussian_vector(&mut rng, n).scaled(1e-8);
            vs[d] = &w + &(&combo + &noise);
        }
        7 => {
            // u nearly parallel to a random tuple vector.
            let pick = rng.random_range(0..=d);
            let dir = &vs[pick] - &w;
            let noise = gaussian_vector(&mut rng, n).scaled(1e-8);
            let c: f64 = rng.random_range(0.2..2.0);
            u = &w + &(&dir.scaled(c) + &noise);
        }
        8 | 9 => {
            let factor = if index % 10 == 8 { 1e8 } else { 1e-8 };
            vs = vs.iter().map(|v| &w + &(&(v - &w)).scaled(factor)).collect();
            u = &w + &(&(&u - &w)).scaled(factor);
        }
        _ => {}
    }
    TrialInstance { index, w, vs, u }
}

/// Per-trial outcome of an audit, compact enough to stream out as a row.
#[derive(Clone, Debug)]
pub struct TrialRecord {
    pub index: u64,
    pub lhs: f64,
    pub slack: f64,
    pub holds: bool,
    pub symmetric: bool,
}

struct TrialOutcome {
    report: SimplexInequalityReport,
    symmetric: bool,
}

fn run_trial(kind: SineKind, inst: &TrialInstance, seed: u64) -> Result<TrialOutcome> {
    let cfg = PointConfig::new(inst.w.clone(), inst.vs.clone())?;
    let report = check_simplex_inequality(kind, &cfg, &inst.u)?;
    // Symmetry spot-check: the semimetric must be permutation-invariant.
    let mut rng = trial_rng(seed ^ 0xA5A5_A5A5, inst.index);
    let mut permuted = inst.vs.clone();
    let a = rng.random_range(0..permuted.len());
    let b = rng.random_range(0..permuted.len());
    permuted.swap(a, b);
    let direct = kind.abs_value(&cfg);
    let swapped = kind.abs_value(&PointConfig::new(inst.w.clone(), permuted)?);
    let symmetric = (direct - swapped).abs() <= 1e-10 * direct.max(1.0);
    Ok(TrialOutcome { report, symmetric })
}

fn validate_audit_params(d: usize, n: usize, trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::parameter("at least one trial is required"));
    }
    if d < 1 {
        return Err(Error::parameter("d must be at least 1"));
    }
    if n < d + 1 {
        return Err(Error::parameter("ambient dimension must be at least d+1"));
    }
    Ok(())
}

/// Per-trial records of a seeded fuzz audit, in trial order.
///
/// Per-trial substreams derive from `(seed, index)`, so the records are
/// identical for any thread count.
pub fn semimetric_trial_records(
    kind: SineKind,
    d: usize,
    n: usize,
    trials: u64,
    seed: u64,
) -> Result<Vec<TrialRecord>> {
    validate_audit_params(d, n, trials)?;
    Ok(map_indexed(trials as usize, |i| {
        let inst = trial_inputs(d, n, seed, i as u64);
        let out = run_trial(kind, &inst, seed).expect("generated trials satisfy preconditions");
        TrialRecord {
            index: i as u64,
            lhs: out.report.lhs,
            slack: out.report.slack,
            holds: out.report.holds,
            symmetric: out.symmetric,
        }
    }))
}

/// Seeded fuzz audit of the simplex inequality plus symmetry checks.
/// Expected failure count is zero.
pub fn semimetric_audit(
    kind: SineKind,
    d: usize,
    n: usize,
    trials: u64,
    seed: u64,
) -> Result<AuditSummary> {
    let records = semimetric_trial_records(kind, d, n, trials, seed)?;
    let mut failures = 0;
    let mut symmetry_failures = 0;
    let mut min_slack = f64::INFINITY;
    let mut worst_index = 0u64;
    for rec in &records {
        if !rec.holds {
            failures += 1;
        }
        if !rec.symmetric {
            symmetry_failures += 1;
        }
        if rec.slack < min_slack {
            min_slack = rec.slack;
            worst_index = rec.index;
        }
    }
    let worst = trial_inputs(d, n, seed, worst_index);
    let cfg = PointConfig::new(worst.w.clone(), worst.vs.clone())?;
    let worst_report = check_simplex_inequality(kind, &cfg, &worst.u)?;
    Ok(AuditSummary {
        kind,
        d,
        n,
        trials,
        seed,
        failures,
        symmetry_failures,
        min_slack,
        worst,
        worst_report,
    })
}
