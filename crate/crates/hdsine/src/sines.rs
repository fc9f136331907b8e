//! The d-dimensional polar sine and hypersine root, their product-formula
//! decompositions, and the generalized law of sines.
//!
//! For vectors `v_1..v_{d+1}` and a distinguished vertex `w`, the polar sine
//! divides the (d+1)-content of the parallelotope spanned by `v_i − w` by
//! the d+1 edge lengths at `w`; the hypersine root divides the same content
//! by the d-th root of the product of the d+1 face contents through `w`.
//! Both take values in [−1, 1], signed exactly when the ambient dimension is
//! d+1, and are invariant under orthogonal maps and nonzero dilations.
//! Evaluation normalizes the shifted vectors first — an exact invariance —
//! so extreme input scales cost no accuracy.

use crate::error::{Error, Result};
use crate::linalg::{content, orthonormal_frame, unsigned_content, Vector, DEFAULT_TOL};

/// A distinguished vertex `w` plus an ordered tuple of `d+1` vectors: the
/// universal input to the sine functions and the inequality checks.
#[derive(Clone, Debug)]
pub struct PointConfig {
    w: Vector,
    vs: Vec<Vector>,
    d: usize,
}

impl PointConfig {
    /// Requires `vs.len() >= 2` (so `d >= 1`), matching ambient dimensions,
    /// and ambient dimension at least `d+1`.
    pub fn new(w: Vector, vs: Vec<Vector>) -> Result<Self> {
        if vs.len() < 2 {
            return Err(Error::invalid("need at least two vectors (d >= 1)"));
        }
        let n = w.dim();
        for v in &vs {
            if v.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: v.dim(),
                });
            }
        }
        let d = vs.len() - 1;
        if n < d + 1 {
            return Err(Error::invalid(format!(
                "ambient dimension {n} is smaller than d+1 = {}",
                d + 1
            )));
        }
        Ok(PointConfig { w, vs, d })
    }

    /// Tuple at the origin: `w = 0`.
    pub fn at_origin(vs: Vec<Vector>) -> Result<Self> {
        if vs.is_empty() {
            return Err(Error::invalid("empty vector tuple"));
        }
        let n = vs[0].dim();
        PointConfig::new(Vector::zeros(n), vs)
    }

    pub fn w(&self) -> &Vector {
        &self.w
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vs
    }

    pub fn intrinsic_dim(&self) -> usize {
        self.d
    }

    pub fn ambient_dim(&self) -> usize {
        self.w.dim()
    }

    /// The tuple `v_i − w`, which both sines are actually evaluated on.
    pub fn shifted(&self) -> Vec<Vector> {
        self.vs.iter().map(|v| v - &self.w).collect()
    }

    /// Same configuration with `u` substituted for the `i`-th vector.
    pub fn with_replaced(&self, i: usize, u: Vector) -> Result<Self> {
        if i > self.d {
            return Err(Error::invalid(format!("slot {i} out of range")));
        }
        let mut vs = self.vs.clone();
        vs[i] = u;
        PointConfig::new(self.w.clone(), vs)
    }
}

/// Value of a d-dimensional sine function, in [−1, 1]; signed exactly when
/// the ambient dimension equals d+1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SineValue {
    pub value: f64,
    pub signed: bool,
}

impl SineValue {
    fn checked(raw: f64, signed: bool) -> SineValue {
        assert!(
            raw.abs() <= 1.0 + 1e-9,
            "sine magnitude {raw} exceeds 1 beyond rounding; internal inconsistency"
        );
        SineValue {
            value: raw.clamp(-1.0, 1.0),
            signed,
        }
    }

    fn zero(signed: bool) -> SineValue {
        SineValue { value: 0.0, signed }
    }
}

/// Normalize each shifted vector; `None` if any of them is exactly zero
/// (the zero convention then applies).
fn normalized_shifted(cfg: &PointConfig) -> Option<Vec<Vector>> {
    cfg.shifted().iter().map(Vector::normalized).collect()
}

fn top_content(units: &[Vector], signed: bool) -> f64 {
    if signed {
        content(units).expect("validated tuple").value
    } else {
        unsigned_content(units)
    }
}

/// The d-dimensional polar sine at the vertex `w`:
/// `M_{d+1}(v_1 − w, …, v_{d+1} − w) / Π ‖v_j − w‖`, with the zero
/// convention when any edge at `w` vanishes.
pub fn polar_sine(cfg: &PointConfig) -> SineValue {
    let signed = cfg.ambient_dim() == cfg.d + 1;
    match normalized_shifted(cfg) {
        None => SineValue::zero(signed),
        Some(units) => SineValue::checked(top_content(&units, signed), signed),
    }
}

/// The d-th root of the d-dimensional hypersine at the vertex `w`:
/// `M_{d+1}(shifted) / (Π_j M_d(faces through w))^{1/d}`, with the zero
/// convention when any face content vanishes (under the default tolerance,
/// after normalization).
pub fn hypersine(cfg: &PointConfig) -> SineValue {
    let signed = cfg.ambient_dim() == cfg.d + 1;
    let units = match normalized_shifted(cfg) {
        None => return SineValue::zero(signed),
        Some(units) => units,
    };
    let d = cfg.d;
    let mut face_product = 1.0;
    let mut face: Vec<Vector> = Vec::with_capacity(d);
    for j in 0..=d {
        face.clear();
        face.extend(units.iter().enumerate().filter(|(t, _)| *t != j).map(|(_, v)| v.clone()));
        let m = unsigned_content(&face);
        // Unit vectors: any face content below the tolerance is treated as
        // degenerate, extending the paper's zero convention continuously.
        if m < DEFAULT_TOL {
            return SineValue::zero(signed);
        }
        face_product *= m;
    }
    let num = top_content(&units, signed);
    SineValue::checked(num / face_product.powf(1.0 / d as f64), signed)
}

/// Elevation sine of `u` over the span of `others`: `dist(u, span) / ‖u‖`.
fn elevation_sine_over(u: &Vector, others: &[Vector]) -> Result<f64> {
    let norm = u.norm();
    if norm == 0.0 {
        return Ok(0.0);
    }
    let frame = orthonormal_frame(others, None, DEFAULT_TOL)?;
    Ok((frame.distance_to(u) / norm).clamp(0.0, 1.0))
}

/// Right-hand side of the polar-sine product formula:
/// `sin(θ(v_{d+1} − w, span of the rest)) · |p_{d−1}sin_w(v_1, …, v_d)|`.
///
/// Agrees with `|polar_sine|` up to rounding; exposed separately so the two
/// evaluation routes can be compared.
pub fn polar_sine_product_form(cfg: &PointConfig) -> Result<f64> {
    if cfg.d < 2 {
        return Err(Error::invalid("product form needs d >= 2"));
    }
    let shifted = cfg.shifted();
    let (last, rest) = shifted.split_last().expect("d+1 >= 3 vectors");
    let elevation = elevation_sine_over(last, rest)?;
    let sub = PointConfig::at_origin(rest.to_vec())?;
    Ok(elevation * polar_sine(&sub).value.abs())
}

/// Right-hand side of the hypersine product formula:
/// `(Π_{i=1}^d sin(dihedral angle between the faces missing v_i and missing
/// v_{d+1}) · |g_{d−1}sin_w(v_1, …, v_d)|^{d−1})^{1/d}`.
///
/// The dihedral sines are evaluated with `v_{d+1} − w` as the witness, which
/// requires the shifted tuple to be linearly independent.
pub fn hypersine_product_form(cfg: &PointConfig) -> Result<f64> {
    if cfg.d < 2 {
        return Err(Error::invalid("product form needs d >= 2"));
    }
    let shifted = cfg.shifted();
    let d = cfg.d;
    let full = orthonormal_frame(&shifted, None, DEFAULT_TOL)?;
    if full.rank() != d + 1 {
        return Err(Error::precondition(
            "dihedral angles need linearly independent vectors",
        ));
    }
    let (last, rest) = shifted.split_last().expect("d+1 >= 3 vectors");
    // dist(v_{d+1}, span of all others) is the numerator of every factor.
    let num = orthonormal_frame(rest, None, DEFAULT_TOL)?.distance_to(last);
    let mut product = 1.0;
    for i in 0..d {
        let face_wo_i: Vec<Vector> = rest
            .iter()
            .enumerate()
            .filter(|(t, _)| *t != i)
            .map(|(_, v)| v.clone())
            .collect();
        let den = orthonormal_frame(&face_wo_i, None, DEFAULT_TOL)?.distance_to(last);
        product *= (num / den).clamp(0.0, 1.0);
    }
    let sub = PointConfig::at_origin(rest.to_vec())?;
    let lower = hypersine(&sub).value.abs();
    Ok((product * lower.powi(d as i32 - 1)).powf(1.0 / d as f64))
}

/// Generalized law of sines: for the `d+2` points `{w, v_1, …, v_{d+1}}` in
/// general position, the ratio
/// `|g_d sin_u(others)| / M_d(face opposite u)^{1/d}`
/// does not depend on which point `u` is taken as the apex.
///
/// `apex` indexes into the point list `[w, v_1, …, v_{d+1}]`.
pub fn law_of_sines_ratio(cfg: &PointConfig, apex: usize) -> Result<f64> {
    let mut points: Vec<Vector> = Vec::with_capacity(cfg.d + 2);
    points.push(cfg.w.clone());
    points.extend(cfg.vs.iter().cloned());
    if apex >= points.len() {
        return Err(Error::invalid(format!("apex {apex} out of range")));
    }
    let u = points[apex].clone();
    let rest: Vec<Vector> = points
        .iter()
        .enumerate()
        .filter(|(t, _)| *t != apex)
        .map(|(_, p)| p.clone())
        .collect();
    let edges: Vec<Vector> = rest.iter().map(|p| p - &u).collect();
    let simplex_frame = orthonormal_frame(&edges, None, DEFAULT_TOL)?;
    if simplex_frame.rank() != cfg.d + 1 {
        return Err(Error::precondition("degenerate simplex"));
    }
    let numerator = hypersine(&PointConfig::new(u, rest.clone())?).value.abs();
    // Content of the face opposite the apex, measured from its last vertex.
    let (base, face_rest) = rest.split_last().expect("at least two points");
    let face_edges: Vec<Vector> = face_rest.iter().map(|p| p - base).collect();
    let face_content = unsigned_content(&face_edges);
    if face_content == 0.0 {
        return Err(Error::precondition("degenerate opposite face"));
    }
    Ok(numerator / face_content.powf(1.0 / cfg.d as f64))
}
