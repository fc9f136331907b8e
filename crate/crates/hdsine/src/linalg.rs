//! Rank-tolerant inner-product linear algebra: Gram matrices, signed and
//! unsigned k-contents, orthonormal frames, projections, and distances to
//! linear and affine subspaces.
//!
//! Everything here works on dense real vectors in a fixed ambient dimension.
//! Contents of near-degenerate parallelotopes are clamped at zero instead of
//! going slightly negative, so downstream ratios stay well-defined.

use crate::error::{Error, Result};

/// Default relative tolerance used by every operation that accepts one.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Dense coordinate vector in a fixed ambient dimension.
///
/// Construction rejects non-finite coordinates; all other invariants
/// (matching dimensions across an operation) are checked by the operations
/// themselves.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector {
    coords: Vec<f64>,
}

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        for (index, c) in coords.iter().enumerate() {
            if !c.is_finite() {
                return Err(Error::NonFinite { index });
            }
        }
        Ok(Vector { coords })
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        Vector::new(coords.to_vec())
    }

    pub fn zeros(dim: usize) -> Self {
        Vector {
            coords: vec![0.0; dim],
        }
    }

    /// The `i`-th standard basis vector of `R^dim`.
    pub fn basis(dim: usize, i: usize) -> Self {
        assert!(i < dim, "basis index {i} out of range for dimension {dim}");
        let mut coords = vec![0.0; dim];
        coords[i] = 1.0;
        Vector { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dot of mismatched dimensions");
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scaled(&self, factor: f64) -> Vector {
        Vector {
            coords: self.coords.iter().map(|c| c * factor).collect(),
        }
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<Vector> {
        let n = self.norm();
        if n == 0.0 {
            None
        } else {
            Some(self.scaled(1.0 / n))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0.0)
    }
}

impl std::ops::Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        assert_eq!(self.dim(), rhs.dim(), "subtracting mismatched dimensions");
        Vector {
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl std::ops::Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        assert_eq!(self.dim(), rhs.dim(), "adding mismatched dimensions");
        Vector {
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl std::ops::Mul<f64> for &Vector {
    type Output = Vector;
    fn mul(self, rhs: f64) -> Vector {
        self.scaled(rhs)
    }
}

fn common_dim(vs: &[Vector]) -> Result<usize> {
    let n = vs[0].dim();
    for v in vs {
        if v.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v.dim(),
            });
        }
    }
    Ok(n)
}

/// Matrix of pairwise inner products `⟨v_i, v_j⟩`.
///
/// Symmetric by construction (each pair is computed once).
pub fn gram_matrix(vs: &[Vector]) -> Result<Vec<Vec<f64>>> {
    if vs.is_empty() {
        return Ok(Vec::new());
    }
    common_dim(vs)?;
    let k = vs.len();
    let mut g = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in i..k {
            let d = vs[i].dot(&vs[j]);
            g[i][j] = d;
            g[j][i] = d;
        }
    }
    Ok(g)
}

/// k-content of a parallelotope, signed exactly when `k` equals the ambient
/// dimension.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContentResult {
    pub value: f64,
    pub k: usize,
    pub signed: bool,
}

/// Unsigned k-content of the parallelotope spanned by `vs`.
///
/// Computed as the product of residual norms of a pivoted orthogonalization
/// of the raw vectors. In exact arithmetic this equals
/// `sqrt(det(Gram(vs)))`; working on the vectors instead of the Gram matrix
/// keeps relative accuracy for near-degenerate inputs, and residuals that
/// fall to zero play the role of clamped non-positive pivots so the content
/// is never NaN. Dimensions are assumed consistent.
pub(crate) fn unsigned_content(vs: &[Vector]) -> f64 {
    if vs.is_empty() {
        return 1.0;
    }
    let mut work: Vec<Vector> = vs.to_vec();
    let k = work.len();
    let mut product = 1.0;
    for step in 0..k {
        // Greedy pivot: largest remaining residual first.
        let (best, best_norm_sq) = work[step..]
            .iter()
            .enumerate()
            .map(|(i, v)| (step + i, v.norm_sq()))
            .fold((step, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        work.swap(step, best);
        let norm = best_norm_sq.max(0.0).sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        product *= norm;
        let q = work[step].scaled(1.0 / norm);
        for v in work.iter_mut().skip(step + 1) {
            let c = v.dot(&q);
            *v = &*v - &q.scaled(c);
        }
        work[step] = q;
    }
    product
}

/// Determinant by LU factorization with partial pivoting. Returns 0 when a
/// pivot vanishes exactly.
pub(crate) fn lu_det(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap();
        if m[pivot_row][col] == 0.0 {
            return 0.0;
        }
        if pivot_row != col {
            m.swap(pivot_row, col);
            det = -det;
        }
        det *= m[col][col];
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            for j in col..n {
                m[row][j] -= f * m[col][j];
            }
        }
    }
    det
}

/// Solve `A x = b` by LU with partial pivoting; `None` when `A` is singular
/// relative to its largest entry.
pub(crate) fn lu_solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = a.len();
    assert_eq!(b.len(), n);
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = row.clone();
            r.push(rhs);
            r
        })
        .collect();
    let scale = m
        .iter()
        .flat_map(|r| r[..n].iter())
        .fold(0.0f64, |acc, &x| acc.max(x.abs()));
    if scale == 0.0 {
        return None;
    }
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap();
        if m[pivot_row][col].abs() <= 1e-14 * scale {
            return None;
        }
        m.swap(pivot_row, col);
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            for j in col..=n {
                m[row][j] -= f * m[col][j];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = m[row][n];
        for j in row + 1..n {
            acc -= m[row][j] * x[j];
        }
        x[row] = acc / m[row][row];
    }
    Some(x)
}

fn check_orthonormal_basis(phi: &[Vector], n: usize) -> Result<()> {
    if phi.len() != n {
        return Err(Error::invalid(format!(
            "signed basis must have {n} vectors, got {}",
            phi.len()
        )));
    }
    for (i, a) in phi.iter().enumerate() {
        if a.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: a.dim(),
            });
        }
        for (j, b) in phi.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            if (a.dot(b) - target).abs() > 1e-8 {
                return Err(Error::invalid("signed basis is not orthonormal"));
            }
        }
    }
    Ok(())
}

/// k-content of the parallelotope spanned by `vs`, signed with respect to
/// the standard coordinate basis when `k` equals the ambient dimension.
pub fn content(vs: &[Vector]) -> Result<ContentResult> {
    content_with_basis(vs, None)
}

/// Like [`content`], but an explicit orthonormal basis may replace the
/// standard one for the signed (`k == n`) case. Which orthonormal basis is
/// used only affects the sign, never the magnitude.
pub fn content_with_basis(vs: &[Vector], signed_basis: Option<&[Vector]>) -> Result<ContentResult> {
    if vs.is_empty() {
        return Err(Error::invalid("content of an empty vector list"));
    }
    let n = common_dim(vs)?;
    let k = vs.len();
    if k > n {
        return Err(Error::invalid(format!(
            "content of {k} vectors in ambient dimension {n}"
        )));
    }
    if k < n {
        if signed_basis.is_some() {
            return Err(Error::invalid(
                "signed basis is only meaningful when k equals the ambient dimension",
            ));
        }
        return Ok(ContentResult {
            value: unsigned_content(vs),
            k,
            signed: false,
        });
    }
    // k == n: determinant with respect to the chosen orthonormal basis.
    let m: Vec<Vec<f64>> = match signed_basis {
        None => (0..n)
            .map(|row| vs.iter().map(|v| v.coords()[row]).collect())
            .collect(),
        Some(phi) => {
            check_orthonormal_basis(phi, n)?;
            phi.iter()
                .map(|p| vs.iter().map(|v| p.dot(v)).collect())
                .collect()
        }
    };
    Ok(ContentResult {
        value: lu_det(m),
        k,
        signed: true,
    })
}

/// Orthonormalized basis of a linear or affine subspace, with rank decided
/// under a relative tolerance.
///
/// The origin is the zero vector for linear subspaces. Projection and
/// distance treat the frame as affine: `P(u) = origin + Σ ⟨u − origin, b⟩ b`.
#[derive(Clone, Debug)]
pub struct SubspaceFrame {
    origin: Vector,
    basis: Vec<Vector>,
    tolerance: f64,
}

/// Orthonormal frame spanning the same subspace as `vs`.
///
/// With an origin the frame is affine: it spans `{v − origin}` anchored at
/// the origin. Input vectors whose residual after orthogonalization is at
/// most `tol` times the largest input norm are dropped; the number of
/// surviving vectors is the rank. Modified Gram-Schmidt with one
/// reorthogonalization pass.
pub fn orthonormal_frame(vs: &[Vector], origin: Option<&Vector>, tol: f64) -> Result<SubspaceFrame> {
    if tol <= 0.0 {
        return Err(Error::parameter("tolerance must be positive"));
    }
    let ambient = match (origin, vs.first()) {
        (Some(o), _) => o.dim(),
        (None, Some(v)) => v.dim(),
        (None, None) => {
            return Err(Error::invalid(
                "empty input without an origin leaves the ambient dimension undetermined",
            ))
        }
    };
    for v in vs {
        if v.dim() != ambient {
            return Err(Error::DimensionMismatch {
                expected: ambient,
                got: v.dim(),
            });
        }
    }
    let origin = origin.cloned().unwrap_or_else(|| Vector::zeros(ambient));
    let shifted: Vec<Vector> = vs.iter().map(|v| v - &origin).collect();
    let max_norm = shifted.iter().map(Vector::norm).fold(0.0f64, f64::max);
    let cutoff = tol * max_norm;
    let mut basis: Vec<Vector> = Vec::new();
    for v in &shifted {
        let mut r = v.clone();
        for b in &basis {
            let c = r.dot(b);
            r = &r - &b.scaled(c);
        }
        // One reorthogonalization pass.
        for b in &basis {
            let c = r.dot(b);
            r = &r - &b.scaled(c);
        }
        let norm = r.norm();
        if norm > cutoff {
            basis.push(r.scaled(1.0 / norm));
        }
    }
    Ok(SubspaceFrame {
        origin,
        basis,
        tolerance: tol,
    })
}

impl SubspaceFrame {
    /// Rank-0 frame (the trivial subspace, or a single affine point).
    pub fn empty(ambient: usize, tol: f64) -> Self {
        SubspaceFrame {
            origin: Vector::zeros(ambient),
            basis: Vec::new(),
            tolerance: tol,
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.origin.dim()
    }

    pub fn origin(&self) -> &Vector {
        &self.origin
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// A frame is linear when its origin is the zero vector.
    pub fn is_linear(&self) -> bool {
        self.origin.is_zero()
    }

    /// Orthogonal projection of `u` onto the (affine) subspace.
    pub fn project(&self, u: &Vector) -> Vector {
        assert_eq!(u.dim(), self.ambient_dim(), "projecting across dimensions");
        let rel = u - &self.origin;
        let mut p = self.origin.clone();
        for b in &self.basis {
            p = &p + &b.scaled(rel.dot(b));
        }
        p
    }

    /// `‖u − P(u)‖`, the distance from `u` to the subspace.
    pub fn distance_to(&self, u: &Vector) -> f64 {
        (u - &self.project(u)).norm()
    }

    /// Whether `u` lies in the subspace up to the frame tolerance,
    /// relative to `max(1, ‖u‖)`.
    pub fn contains(&self, u: &Vector) -> bool {
        self.distance_to(u) <= self.tolerance * u.norm().max(1.0)
    }

    /// Orthonormal basis of the orthogonal complement of the direction
    /// space, as a linear frame.
    pub fn complement(&self) -> SubspaceFrame {
        let n = self.ambient_dim();
        let mut basis = self.basis.clone();
        let established = basis.len();
        for i in 0..n {
            let e = Vector::basis(n, i);
            let mut r = e.clone();
            for b in &basis {
                let c = r.dot(b);
                r = &r - &b.scaled(c);
            }
            for b in &basis {
                let c = r.dot(b);
                r = &r - &b.scaled(c);
            }
            let norm = r.norm();
            if norm > self.tolerance {
                basis.push(r.scaled(1.0 / norm));
            }
        }
        SubspaceFrame {
            origin: Vector::zeros(n),
            basis: basis.split_off(established),
            tolerance: self.tolerance,
        }
    }

    /// Linear span of the direction spaces of `self` and `other`.
    pub fn span_union(&self, other: &SubspaceFrame) -> Result<SubspaceFrame> {
        let mut vs: Vec<Vector> = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        orthonormal_frame(&vs, None, self.tolerance.min(other.tolerance))
    }

    /// Intersection of two linear subspaces, computed as the complement of
    /// the span of the two complements under the shared rank tolerance.
    pub fn intersect(&self, other: &SubspaceFrame) -> Result<SubspaceFrame> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                got: other.ambient_dim(),
            });
        }
        let joined = self.complement().span_union(&other.complement())?;
        Ok(joined.complement())
    }
}

/// Residual of the determinant affine identity: for `u` in the affine hull
/// of `n` vectors `vs` in `R^n`,
/// `det(vs) = Σ_i det(vs with v_i replaced by u)`.
///
/// Returns `|lhs − Σ rhs_i|`. Errors when `u` is not in the affine hull
/// within a relative tolerance.
pub fn affine_det_identity_check(vs: &[Vector], u: &Vector) -> Result<f64> {
    if vs.is_empty() {
        return Err(Error::invalid("empty vector list"));
    }
    let n = common_dim(vs)?;
    if vs.len() != n {
        return Err(Error::invalid(format!(
            "need exactly {n} vectors in ambient dimension {n}, got {}",
            vs.len()
        )));
    }
    if u.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: u.dim(),
        });
    }
    let hull = orthonormal_frame(&vs[1..], Some(&vs[0]), DEFAULT_TOL)?;
    let scale = vs
        .iter()
        .map(Vector::norm)
        .fold(u.norm(), f64::max)
        .max(1.0);
    if hull.distance_to(u) > 1e-8 * scale {
        return Err(Error::precondition(
            "u is not in the affine hull of the input vectors",
        ));
    }
    let lhs = content(vs)?.value;
    let mut rhs = 0.0;
    let mut work = vs.to_vec();
    for i in 0..n {
        let saved = std::mem::replace(&mut work[i], u.clone());
        rhs += content(&work)?.value;
        work[i] = saved;
    }
    Ok((lhs - rhs).abs())
}
