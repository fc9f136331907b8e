//! Generalized sine functions of constant-curvature spaces and numerical
//! verification of their characterizing functional equation.
//!
//! For curvature `k`, `s_k(x)` is `sin(√k x)/√k`, `x`, or `sinh(√−k x)/√−k`
//! according to the sign of `k`. The multiples `c·s_k` are exactly the
//! measurable solutions of
//! `f(α+β) = f(α+δ)/f(δ)·f(β) + f(δ−β)/f(δ)·f(α)`;
//! this module evaluates that residual, the related Carmichael residual
//! `f(α+β)·f(β−α) = f(β)² − f(α)²`, and a grid membership test.

use crate::error::{Error, Result};

/// A multiple of the generalized sine: `x ↦ c · s_k(x)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneralizedSine {
    pub c: f64,
    pub k: f64,
}

impl GeneralizedSine {
    pub fn new(c: f64, k: f64) -> Self {
        GeneralizedSine { c, k }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.c * sk(self.k, x)
    }
}

/// The generalized sine `s_k(x)`, continuous in `k` at 0.
///
/// Near `k = 0` (when `|k|·x² < 1e−8`) the three-branch formula loses
/// digits to cancellation, so the series `x − k x³/6 + k² x⁵/120` is used;
/// at the crossover both branches agree to much better than 1e−10.
pub fn sk(k: f64, x: f64) -> f64 {
    let kx2 = k.abs() * x * x;
    if kx2 < 1e-8 {
        return x - k * x.powi(3) / 6.0 + k * k * x.powi(5) / 120.0;
    }
    if k > 0.0 {
        let r = k.sqrt();
        (r * x).sin() / r
    } else {
        let r = (-k).sqrt();
        (r * x).sinh() / r
    }
}

/// Residual of the functional equation at one parameter point:
/// `|f(α+β) − (f(α+δ)/f(δ)·f(β) + f(δ−β)/f(δ)·f(α))|`.
///
/// `δ` must avoid the zero set of `f`.
pub fn functional_equation_residual(
    f: &dyn Fn(f64) -> f64,
    alpha: f64,
    beta: f64,
    delta: f64,
) -> Result<f64> {
    let fd = f(delta);
    if fd.abs() <= 1e-12 {
        return Err(Error::parameter("delta lies in the zero set of f"));
    }
    let lhs = f(alpha + beta);
    let rhs = f(alpha + delta) / fd * f(beta) + f(delta - beta) / fd * f(alpha);
    Ok((lhs - rhs).abs())
}

/// Residual of Carmichael's equation:
/// `|f(α+β)·f(β−α) − (f(β)² − f(α)²)|`.
pub fn carmichael_residual(f: &dyn Fn(f64) -> f64, alpha: f64, beta: f64) -> f64 {
    (f(alpha + beta) * f(beta - alpha) - (f(beta).powi(2) - f(alpha).powi(2))).abs()
}

/// Uniform grid on `[lo, hi]` used for the membership test.
#[derive(Clone, Copy, Debug)]
pub struct ParamGrid {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl ParamGrid {
    pub fn new(lo: f64, hi: f64, points: usize) -> Result<Self> {
        if !(hi > lo) || points < 2 {
            return Err(Error::parameter("grid needs hi > lo and at least 2 points"));
        }
        Ok(ParamGrid { lo, hi, points })
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.points)
            .map(|i| {
                self.lo + (self.hi - self.lo) * (i as f64) / (self.points as f64 - 1.0)
            })
            .collect()
    }
}

/// Outcome of a grid membership test.
#[derive(Clone, Copy, Debug)]
pub struct MembershipReport {
    pub passes: bool,
    /// Largest residual over the grid, scaled by `max(1, |f(α+β)|)`.
    pub max_scaled_residual: f64,
    /// Parameter point attaining the maximum.
    pub worst: (f64, f64, f64),
    /// Grid points skipped because `δ` fell in the zero set of `f`.
    pub skipped_deltas: usize,
}

/// Test whether `f` satisfies the functional equation on a cubic grid
/// `(α, β, δ) ∈ grid³`, excluding `δ` in the zero set of `f`.
///
/// The residual at each point is scaled by `max(1, |f(α+β)|)` so that
/// large-amplitude members are not penalized. At least one admissible `δ`
/// is required.
pub fn membership_test(
    f: &dyn Fn(f64) -> f64,
    grid: &ParamGrid,
    tol: f64,
) -> Result<MembershipReport> {
    let values = grid.values();
    let deltas: Vec<f64> = values
        .iter()
        .copied()
        .filter(|&d| f(d).abs() > 1e-12)
        .collect();
    let skipped_deltas = values.len() - deltas.len();
    if deltas.is_empty() {
        return Err(Error::precondition(
            "no admissible delta values: f vanishes on the whole grid",
        ));
    }
    let mut max_scaled = 0.0;
    let mut worst = (values[0], values[0], deltas[0]);
    for &alpha in &values {
        for &beta in &values {
            let scale = f(alpha + beta).abs().max(1.0);
            for &delta in &deltas {
                let r = functional_equation_residual(f, alpha, beta, delta)? / scale;
                if r > max_scaled {
                    max_scaled = r;
                    worst = (alpha, beta, delta);
                }
            }
        }
    }
    Ok(MembershipReport {
        passes: max_scaled <= tol,
        max_scaled_residual: max_scaled,
        worst,
        skipped_deltas,
    })
}
