//! The relaxed-simplex-inequality sets `U_C` and `U'_C`, the cone
//! containment propositions behind them, the tube measure bound, and the
//! Monte Carlo concentration verifier.
//!
//! For a tuple `S = {v_1, …, v_{d+1}}`, apex `w`, and constant `C`,
//! `U_C(S, w)` collects the `u` for which the polar sine satisfies a
//! two-term relaxed simplex inequality for every index pair. For a
//! γ-regular measure with `d−1 < γ ≤ d` and `C` at least an explicit
//! constant, the fraction of `U_C` in any support ball is at least `1 − ε`;
//! [`run_concentration`] verifies that fraction empirically. For `γ > d`
//! the one-term variant `U'_C` takes over.

use crate::angles::{elevation_angle, max_elevation, Region};
use crate::error::{Error, Result};
use crate::exec::map_indexed;
use crate::linalg::{orthonormal_frame, SubspaceFrame, Vector, DEFAULT_TOL};
use crate::samplers::MeasureSampler;
use crate::sines::{polar_sine, PointConfig};
use crate::stream::derive_seed;

/// Absolute slack granted to the membership inequalities, so boundary
/// rounding cannot flip a classification.
const MEMBERSHIP_SLACK: f64 = 1e-12;

fn abs_polar(w: &Vector, vs: Vec<Vector>) -> Result<f64> {
    Ok(polar_sine(&PointConfig::new(w.clone(), vs)?).value.abs())
}

/// Left-hand side and the d+1 substituted polar-sine terms for `u`.
fn polar_terms(s: &[Vector], w: &Vector, u: &Vector) -> Result<(f64, Vec<f64>)> {
    let lhs = abs_polar(w, s.to_vec())?;
    let mut terms = Vec::with_capacity(s.len());
    for i in 0..s.len() {
        let mut vs = s.to_vec();
        vs[i] = u.clone();
        terms.push(abs_polar(w, vs)?);
    }
    Ok((lhs, terms))
}

/// Membership in `U_C(S, w)`: for every pair `i < j`,
/// `|psin_w(S)| ≤ C · (|term_i| + |term_j|)`.
pub fn in_u_c(s: &[Vector], w: &Vector, u: &Vector, c: f64) -> Result<bool> {
    if (u - w).norm() == 0.0 {
        return Err(Error::invalid("u must differ from the apex w"));
    }
    let (lhs, terms) = polar_terms(s, w, u)?;
    for i in 0..terms.len() {
        for j in i + 1..terms.len() {
            if lhs > c * (terms[i] + terms[j]) + MEMBERSHIP_SLACK {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Membership in the one-term variant `U'_C(S, w)`:
/// `|psin_w(S)| ≤ C · |term_i|` for every single `i`.
pub fn in_u_c_one_term(s: &[Vector], w: &Vector, u: &Vector, c: f64) -> Result<bool> {
    if (u - w).norm() == 0.0 {
        return Err(Error::invalid("u must differ from the apex w"));
    }
    let (lhs, terms) = polar_terms(s, w, u)?;
    Ok(terms.iter().all(|t| lhs <= c * t + MEMBERSHIP_SLACK))
}

/// The cones around the spans of `S` minus one vector:
/// `Cone^i(ε) = Cone(ε · θ(v_i, span(S∖v_i)), span(S∖v_i), 0)`.
fn index_cones(s: &[Vector], epsilon: f64) -> Result<Vec<Region>> {
    let k = s.len();
    let mut cones = Vec::with_capacity(k);
    for i in 0..k {
        let rest: Vec<Vector> = (0..k).filter(|&t| t != i).map(|t| s[t].clone()).collect();
        let frame = orthonormal_frame(&rest, None, DEFAULT_TOL)?;
        if frame.rank() != k - 1 {
            return Err(Error::invalid("linearly dependent tuple"));
        }
        let theta = elevation_angle(&s[i], &frame)?;
        cones.push(Region::cone(
            epsilon * theta,
            frame,
            Vector::zeros(s[0].dim()),
        )?);
    }
    Ok(cones)
}

/// Check the containment of the complement of the pairwise cone
/// intersections inside `U_C(S, 0)`: if `u` lies outside every
/// `Cone^i(C⁻¹) ∩ Cone^j(C⁻¹)`, then `u ∈ U_C(S, 0)`.
///
/// Returns the truth of that implication (vacuously true when `u` lies in
/// some pairwise intersection). It must never be false.
pub fn cone_complement_containment_check(s: &[Vector], c: f64, u: &Vector) -> Result<bool> {
    if u.norm() == 0.0 {
        return Err(Error::invalid("u must be nonzero"));
    }
    if c < 1.0 {
        return Err(Error::parameter("C must be at least 1"));
    }
    let cones = index_cones(s, 1.0 / c)?;
    let inside: Vec<bool> = cones.iter().map(|cone| cone.contains(u)).collect();
    let in_some_pair = (0..cones.len()).any(|i| (i + 1..cones.len()).any(|j| inside[i] && inside[j]));
    if in_some_pair {
        return Ok(true);
    }
    in_u_c(s, &Vector::zeros(u.dim()), u, c)
}

/// Check the two-cone containment: for distinct (k−1)-dimensional
/// subspaces `V_1, V_2` of a k-dimensional space and witnesses
/// `v_1 ∈ V_1∖V_2`, `v_2 ∈ V_2∖V_1`, membership in both shrunken cones
/// `Cone(2s/(√5·π) · θ(v_1, V_2), V_2, 0)` and
/// `Cone(2s/(√5·π) · θ(v_2, V_1), V_1, 0)` forces membership in
/// `Cone(s · Θ(v_1, v_2, V_1∩V_2), V_1∩V_2, 0)`.
///
/// Returns the truth of the implication; it must never be false.
pub fn two_cone_containment_check(
    v1_space: &SubspaceFrame,
    v2_space: &SubspaceFrame,
    v1: &Vector,
    v2: &Vector,
    s: f64,
    u: &Vector,
) -> Result<bool> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::parameter("s must lie in (0, 1]"));
    }
    let k_minus_1 = v1_space.rank();
    if v2_space.rank() != k_minus_1 || k_minus_1 < 2 {
        return Err(Error::invalid(
            "subspaces must have equal dimension k−1 with k >= 3",
        ));
    }
    let joint = v1_space.span_union(v2_space)?;
    if joint.rank() != k_minus_1 + 1 {
        return Err(Error::invalid(
            "subspaces must be distinct hyperplanes of a common k-dimensional space",
        ));
    }
    let tol = 1e-7;
    if !(v1_space.distance_to(v1) <= tol * v1.norm().max(1.0))
        || v2_space.distance_to(v1) <= tol * v1.norm().max(1.0)
    {
        return Err(Error::invalid("v1 must lie in V1 and outside V2"));
    }
    if !(v2_space.distance_to(v2) <= tol * v2.norm().max(1.0))
        || v1_space.distance_to(v2) <= tol * v2.norm().max(1.0)
    {
        return Err(Error::invalid("v2 must lie in V2 and outside V1"));
    }
    let factor = 2.0 * s / (5f64.sqrt() * std::f64::consts::PI);
    let zero = Vector::zeros(u.dim());
    let cone_on_v2 = Region::cone(
        factor * elevation_angle(v1, v2_space)?,
        v2_space.clone(),
        zero.clone(),
    )?;
    let cone_on_v1 = Region::cone(
        factor * elevation_angle(v2, v1_space)?,
        v1_space.clone(),
        zero.clone(),
    )?;
    if !(cone_on_v2.contains(u) && cone_on_v1.contains(u)) {
        return Ok(true);
    }
    let intersection = v1_space.intersect(v2_space)?;
    if intersection.rank() != k_minus_1 - 1 {
        return Err(Error::invalid("intersection has unexpected dimension"));
    }
    let theta = max_elevation(v1, v2, &intersection)?;
    let target = Region::cone(s * theta, intersection, zero)?;
    Ok(target.contains(u))
}

/// Outcome of one tube measure bound check.
#[derive(Clone, Debug)]
pub struct TubeBoundRecord {
    pub empirical: f64,
    pub stderr: f64,
    pub bound: f64,
    /// Fraction of ball draws that fell in the tube.
    pub tube_fraction: f64,
    pub holds: bool,
}

/// Check the tube measure bound
/// `μ(Tube(L, ε·r) ∩ B(x, r)) ≤ 2^{m + 3γ/2} · C_μ · ε^{γ−m} · r^γ`
/// for an m-dimensional affine subspace `L` with `m < γ` through a support
/// point `x`.
///
/// The left side is estimated as (fraction of ball draws inside the tube)
/// times the sampler's ball-mass model; `holds` grants the bound a
/// 3-standard-error band.
pub fn tube_measure_bound_check(
    sampler: &dyn MeasureSampler,
    l: &SubspaceFrame,
    x: &Vector,
    r: f64,
    epsilon: f64,
    samples: usize,
    seed: u64,
) -> Result<TubeBoundRecord> {
    let m = l.rank();
    let gamma = sampler.gamma();
    if m < 1 || (m as f64) >= gamma {
        return Err(Error::invalid(format!(
            "tube dimension must satisfy 1 <= m < gamma, got m = {m}, gamma = {gamma}"
        )));
    }
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::parameter("epsilon must lie in [0, 1]"));
    }
    if samples == 0 {
        return Err(Error::parameter("need at least one sample"));
    }
    if l.distance_to(x) > 1e-7 * x.norm().max(1.0) {
        return Err(Error::invalid("x must lie on L"));
    }
    if !sampler.on_support(x, 1e-7) {
        return Err(Error::invalid("x must lie on the support"));
    }
    let points = sampler.draw(x, r, samples, derive_seed(seed, 0))?;
    let hits = points
        .iter()
        .filter(|p| l.distance_to(p) <= epsilon * r)
        .count();
    let p = hits as f64 / samples as f64;
    let p_se = (p * (1.0 - p) / samples as f64).sqrt();
    let mass = sampler.ball_mass(x, r, derive_seed(seed, 1))?;
    let empirical = p * mass.value;
    let stderr = ((p_se * mass.value).powi(2) + (p * mass.stderr).powi(2)).sqrt();
    let bound = 2f64.powf(m as f64 + 1.5 * gamma)
        * sampler.regularity_constant()
        * epsilon.powf(gamma - m as f64)
        * r.powf(gamma);
    let rel = if empirical > 0.0 { stderr / empirical } else { 0.0 };
    let holds = empirical <= bound * (1.0 + 3.0 * rel);
    Ok(TubeBoundRecord {
        empirical,
        stderr,
        bound,
        tube_fraction: p,
        holds,
    })
}

/// Inputs for one concentration experiment.
#[derive(Clone, Debug)]
pub struct ConcentrationConfig {
    pub d: usize,
    pub n: usize,
    pub epsilon: f64,
    /// Relaxation constant; the theorem needs `C ≥ c0_prime(…)`.
    pub c: f64,
    /// The tuple S of d+1 vectors (arbitrary in ambient space).
    pub s_points: Vec<Vector>,
    /// Apex; must lie on the sampler support.
    pub w: Vector,
    pub radii: Vec<f64>,
    pub samples_per_ball: usize,
    pub seed: u64,
    /// Use the one-term set `U'_C` (the γ > d variant).
    pub one_term: bool,
}

/// Per-radius outcome of a concentration run.
#[derive(Clone, Debug)]
pub struct RadiusOutcome {
    pub radius: f64,
    pub fraction: f64,
    pub stderr: f64,
    /// `fraction ≥ 1 − ε − 3·stderr`.
    pub pass: bool,
}

/// Estimate the `U_C` (or `U'_C`) fraction of μ-mass in each ball
/// `B(w, r)`: draw `samples_per_ball` points per radius and classify them.
///
/// Draws derive from `(seed, radius index)` and classification runs on the
/// trial pool, so results are identical across thread counts.
pub fn run_concentration(
    cfg: &ConcentrationConfig,
    sampler: &dyn MeasureSampler,
) -> Result<Vec<RadiusOutcome>> {
    if !(cfg.epsilon > 0.0 && cfg.epsilon < 1.0) {
        return Err(Error::parameter("epsilon must lie in (0, 1)"));
    }
    if cfg.c < 1.0 {
        return Err(Error::parameter("C must be at least 1"));
    }
    if cfg.samples_per_ball == 0 {
        return Err(Error::parameter("need at least one sample per ball"));
    }
    if cfg.s_points.len() != cfg.d + 1 {
        return Err(Error::invalid(format!(
            "need d+1 = {} tuple vectors, got {}",
            cfg.d + 1,
            cfg.s_points.len()
        )));
    }
    if cfg.n != sampler.ambient_dim() || cfg.w.dim() != cfg.n {
        return Err(Error::DimensionMismatch {
            expected: sampler.ambient_dim(),
            got: cfg.w.dim(),
        });
    }
    if !sampler.on_support(&cfg.w, 1e-7) {
        return Err(Error::invalid("w must lie on the sampler support"));
    }
    if cfg.radii.is_empty() {
        return Err(Error::parameter("need at least one radius"));
    }
    for &r in &cfg.radii {
        if !(r > 0.0) {
            return Err(Error::parameter("radii must be positive"));
        }
        if let Some(diam) = sampler.support_diameter() {
            if r > diam * (1.0 + 1e-9) {
                return Err(Error::parameter(format!(
                    "radius {r} exceeds the support diameter {diam}"
                )));
            }
        }
    }
    let mut outcomes = Vec::with_capacity(cfg.radii.len());
    for (ri, &r) in cfg.radii.iter().enumerate() {
        let points = sampler.draw(&cfg.w, r, cfg.samples_per_ball, derive_seed(cfg.seed, ri as u64))?;
        let members = map_indexed(points.len(), |i| {
            let u = &points[i];
            if (u - &cfg.w).norm() == 0.0 {
                return false;
            }
            let result = if cfg.one_term {
                in_u_c_one_term(&cfg.s_points, &cfg.w, u, cfg.c)
            } else {
                in_u_c(&cfg.s_points, &cfg.w, u, cfg.c)
            };
            result.expect("validated inputs")
        });
        let hits = members.iter().filter(|&&m| m).count();
        let fraction = hits as f64 / cfg.samples_per_ball as f64;
        let stderr = (fraction * (1.0 - fraction) / cfg.samples_per_ball as f64).sqrt();
        outcomes.push(RadiusOutcome {
            radius: r,
            fraction,
            stderr,
            pass: fraction >= 1.0 - cfg.epsilon - 3.0 * stderr,
        });
    }
    Ok(outcomes)
}

fn binomial_pairs(d: usize) -> f64 {
    ((d + 1) * d) as f64 / 2.0
}

/// The explicit constant above which the two-term concentration bound is
/// guaranteed for `d−1 < γ ≤ d`:
/// `C₀′ = √5 · (π/2)² / arcsin[(ε / (2^{3γ/2 + d − 1} · C_μ² · C(d+1, 2)))^{1/(γ+1−d)}]`.
pub fn c0_prime(epsilon: f64, gamma: f64, d: usize, c_mu: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::parameter("epsilon must lie in (0, 1)"));
    }
    if d < 2 {
        return Err(Error::parameter("d must be at least 2"));
    }
    if !(gamma > d as f64 - 1.0 && gamma <= d as f64) {
        return Err(Error::parameter("gamma must lie in (d−1, d]"));
    }
    if c_mu < 1.0 {
        return Err(Error::parameter("regularity constant must be at least 1"));
    }
    let base = epsilon
        / (2f64.powf(1.5 * gamma + d as f64 - 1.0) * c_mu * c_mu * binomial_pairs(d));
    let arg = base.powf(1.0 / (gamma + 1.0 - d as f64));
    if arg > 1.0 {
        return Err(Error::parameter(
            "epsilon too large for the bound: arcsin argument exceeds 1",
        ));
    }
    Ok(5f64.sqrt() * (std::f64::consts::FRAC_PI_2).powi(2) / arg.asin())
}

/// Companion constant for a single fixed index pair (γ = d):
/// `C₀″ = √5 · (π/2)² / arcsin(ε / (2^{5d/2 − 1} · C_μ²))`.
pub fn c0_double_prime(epsilon: f64, d: usize, c_mu: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::parameter("epsilon must lie in (0, 1)"));
    }
    let arg = epsilon / (2f64.powf(2.5 * d as f64 - 1.0) * c_mu * c_mu);
    if arg > 1.0 {
        return Err(Error::parameter(
            "epsilon too large for the bound: arcsin argument exceeds 1",
        ));
    }
    Ok(5f64.sqrt() * (std::f64::consts::FRAC_PI_2).powi(2) / arg.asin())
}

/// Constant for the one-term variant when `γ > d`: covering the complement
/// of `U'_C` by the d+1 single cones `Cone^i(C⁻¹)` and applying the cone
/// measure bound with `m = d` gives
/// `C₀ = (π/2) / arcsin[(ε / ((d+1) · 2^{d + 3γ/2} · C_μ²))^{1/(γ−d)}]`.
pub fn c0_one_term(epsilon: f64, gamma: f64, d: usize, c_mu: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::parameter("epsilon must lie in (0, 1)"));
    }
    if !(gamma > d as f64) {
        return Err(Error::parameter("the one-term constant needs gamma > d"));
    }
    let base =
        epsilon / ((d as f64 + 1.0) * 2f64.powf(d as f64 + 1.5 * gamma) * c_mu * c_mu);
    let arg = base.powf(1.0 / (gamma - d as f64));
    if arg > 1.0 {
        return Err(Error::parameter(
            "epsilon too large for the bound: arcsin argument exceeds 1",
        ));
    }
    Ok(std::f64::consts::FRAC_PI_2 / arg.asin())
}
