//! Elevation and dihedral angles with their sine formulas, maximal
//! elevation, and membership-testable regions (balls, tubes, cones).
//!
//! All regions are closed (membership uses `<=`), so boundary samples are
//! classified deterministically.

use crate::error::{Error, Result};
use crate::linalg::{SubspaceFrame, Vector};

/// Elevation angle of `u` with respect to a nontrivial linear subspace `w`:
/// the smallest angle `u` makes with any nonzero element of the subspace.
/// Computed as `arcsin(dist(u, W) / ‖u‖)`; zero for `u = 0`.
pub fn elevation_angle(u: &Vector, w: &SubspaceFrame) -> Result<f64> {
    if u.dim() != w.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: w.ambient_dim(),
            got: u.dim(),
        });
    }
    Ok(elevation_sine(u, w)?.asin())
}

/// `sin(θ(u, W)) = dist(u, W) / ‖u‖`, clamped into [0, 1].
pub fn elevation_sine(u: &Vector, w: &SubspaceFrame) -> Result<f64> {
    if w.rank() == 0 {
        return Err(Error::invalid("elevation over the trivial subspace"));
    }
    if !w.is_linear() {
        return Err(Error::invalid("elevation angle needs a linear subspace"));
    }
    let norm = u.norm();
    if norm == 0.0 {
        return Ok(0.0);
    }
    Ok((w.distance_to(u) / norm).clamp(0.0, 1.0))
}

/// Maximal elevation `Θ(v_1, v_2, V) = max(θ(v_1, V), θ(v_2, V))`.
pub fn max_elevation(v1: &Vector, v2: &Vector, v: &SubspaceFrame) -> Result<f64> {
    Ok(elevation_angle(v1, v)?.max(elevation_angle(v2, v)?))
}

/// Sine of the dihedral angle between equidimensional subspaces `W` and `V`
/// meeting in codimension one, evaluated through a witness `w ∈ W ∖ V`:
/// `sin(α(W, V)) = dist(w, V) / dist(w, W ∩ V)`.
///
/// The result does not depend on the witness, and is symmetric in `(W, V)`.
pub fn dihedral_sine(w: &SubspaceFrame, v: &SubspaceFrame, witness: &Vector) -> Result<f64> {
    if w.ambient_dim() != v.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: w.ambient_dim(),
            got: v.ambient_dim(),
        });
    }
    if w.rank() != v.rank() || w.rank() == 0 {
        return Err(Error::invalid(format!(
            "dihedral angle needs equal nonzero dimensions, got {} and {}",
            w.rank(),
            v.rank()
        )));
    }
    let joint = w.span_union(v)?;
    if joint.rank() != w.rank() + 1 {
        return Err(Error::invalid(format!(
            "subspaces must meet in codimension one: dim(W+V) = {}, dim W = {}",
            joint.rank(),
            w.rank()
        )));
    }
    let tol = w.tolerance().max(v.tolerance());
    let scale = witness.norm().max(1.0);
    if w.distance_to(witness) > tol * scale {
        return Err(Error::invalid("witness does not lie in W"));
    }
    let dist_v = v.distance_to(witness);
    if dist_v <= tol * scale {
        return Err(Error::invalid("witness lies in V"));
    }
    let intersection = w.intersect(v)?;
    let dist_wv = intersection.distance_to(witness);
    Ok((dist_v / dist_wv).clamp(0.0, 1.0))
}

/// A witness vector in `W ∖ V` for [`dihedral_sine`]: the basis vector of
/// `W` farthest from `V`, or `None` when all of them lie inside `V`.
pub fn dihedral_witness(w: &SubspaceFrame, v: &SubspaceFrame) -> Option<Vector> {
    let best = w
        .basis()
        .iter()
        .map(|b| (b, v.distance_to(b)))
        .max_by(|a, b| a.1.total_cmp(&b.1))?;
    if best.1 > v.tolerance() {
        Some(best.0.clone())
    } else {
        None
    }
}

/// Tagged geometric region with a closed membership predicate.
#[derive(Clone, Debug)]
pub enum Region {
    /// `{u : ‖u − center‖ ≤ r}`
    Ball { center: Vector, r: f64 },
    /// `{u : dist(u, L) ≤ h}` for an affine subspace `L`
    Tube { frame: SubspaceFrame, h: f64 },
    /// `{u : dist(u, L) ≤ ‖u − apex‖ · sin θ}` for an affine `L` through the apex
    Cone {
        theta: f64,
        frame: SubspaceFrame,
        apex: Vector,
    },
}

impl Region {
    pub fn ball(center: Vector, r: f64) -> Result<Region> {
        if !(r > 0.0) {
            return Err(Error::parameter("ball radius must be positive"));
        }
        Ok(Region::Ball { center, r })
    }

    pub fn tube(frame: SubspaceFrame, h: f64) -> Result<Region> {
        if !(h >= 0.0) {
            return Err(Error::parameter("tube height must be nonnegative"));
        }
        Ok(Region::Tube { frame, h })
    }

    /// The apex must lie on the subspace within the frame tolerance.
    pub fn cone(theta: f64, frame: SubspaceFrame, apex: Vector) -> Result<Region> {
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
            return Err(Error::parameter("cone angle must be in [0, pi/2]"));
        }
        if apex.dim() != frame.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: frame.ambient_dim(),
                got: apex.dim(),
            });
        }
        if frame.distance_to(&apex) > frame.tolerance() * apex.norm().max(1.0) {
            return Err(Error::invalid("cone apex does not lie on its subspace"));
        }
        Ok(Region::Cone { theta, frame, apex })
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            Region::Ball { center, .. } => center.dim(),
            Region::Tube { frame, .. } => frame.ambient_dim(),
            Region::Cone { frame, .. } => frame.ambient_dim(),
        }
    }

    /// Closed membership test per the defining inequality.
    pub fn contains(&self, u: &Vector) -> bool {
        assert_eq!(
            u.dim(),
            self.ambient_dim(),
            "membership query across dimensions"
        );
        match self {
            Region::Ball { center, r } => (u - center).norm() <= *r,
            Region::Tube { frame, h } => frame.distance_to(u) <= *h,
            Region::Cone { theta, frame, apex } => {
                frame.distance_to(u) <= (u - apex).norm() * theta.sin()
            }
        }
    }
}
