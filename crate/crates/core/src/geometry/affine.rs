use nalgebra::{Matrix2, Vector2};

use super::Vec2;
use crate::error::{Error, Result};

/// An affine contraction `x ↦ Mx + t` of `R^d`, `d ∈ {1, 2}`, together with
/// the exact Lipschitz bounds `c_lower·|x−y| ≤ |φx−φy| ≤ c_upper·|x−y|`.
///
/// One-dimensional maps are stored in the top-left entry; the second
/// coordinate of points is then always zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineContraction {
    dim: usize,
    matrix: Matrix2<f64>,
    translation: Vec2,
    c_lower: f64,
    c_upper: f64,
}

/// `(σ_min, σ_max)` of the leading `dim × dim` block.
///
/// Splits `M` into a similarity and an anti-similarity part, whose norms
/// `q` and `r` give `σ_max = q + r`; `σ_min` is recovered as
/// `|det M| / σ_max` to avoid cancellation.
pub fn singular_values(matrix: &Matrix2<f64>, dim: usize) -> (f64, f64) {
    if dim == 1 {
        let a = matrix[(0, 0)].abs();
        return (a, a);
    }
    let (a, b, c, d) = (matrix[(0, 0)], matrix[(0, 1)], matrix[(1, 0)], matrix[(1, 1)]);
    let q = ((a + d) / 2.0).hypot((c - b) / 2.0);
    let r = ((a - d) / 2.0).hypot((c + b) / 2.0);
    let smax = q + r;
    let smin = if smax == 0.0 { 0.0 } else { (matrix.determinant().abs() / smax).min(smax) };
    (smin, smax)
}

/// Contraction constants `(c′, c)` of a linear part; rejects singular and
/// non-contracting matrices.
pub fn contraction_bounds(matrix: &Matrix2<f64>, dim: usize) -> Result<(f64, f64)> {
    check_dim(dim)?;
    let (smin, smax) = singular_values(matrix, dim);
    if !(smin > 0.0) || !smin.is_finite() {
        return Err(Error::SingularMatrix);
    }
    if !(smax < 1.0) {
        return Err(Error::NotContracting(smax));
    }
    Ok((smin, smax))
}

fn check_dim(dim: usize) -> Result<()> {
    match dim {
        1 | 2 => Ok(()),
        d => Err(Error::UnsupportedDimension(d)),
    }
}

fn rotation(deg: f64) -> Matrix2<f64> {
    let (s, c) = deg.to_radians().sin_cos();
    Matrix2::new(c, -s, s, c)
}

fn reflection_x() -> Matrix2<f64> {
    Matrix2::new(1.0, 0.0, 0.0, -1.0)
}

impl AffineContraction {
    pub fn new(dim: usize, matrix: Matrix2<f64>, translation: Vec2) -> Result<Self> {
        check_dim(dim)?;
        let (matrix, translation) = if dim == 1 {
            (
                Matrix2::new(matrix[(0, 0)], 0.0, 0.0, 0.0),
                Vector2::new(translation.x, 0.0),
            )
        } else {
            (matrix, translation)
        };
        let (c_lower, c_upper) = contraction_bounds(&matrix, dim)?;
        Ok(Self { dim, matrix, translation, c_lower, c_upper })
    }

    /// `x ↦ a·x + t` on the line.
    pub fn line(a: f64, t: f64) -> Result<Self> {
        Self::new(1, Matrix2::new(a, 0.0, 0.0, 0.0), Vector2::new(t, 0.0))
    }

    /// `ratio · R(rotation) · F`, fixing `fixed_point`, where `F` is the
    /// reflection across the x-axis when `reflect` is set (applied first).
    pub fn similarity_from_params(ratio: f64, rotation_deg: f64, fixed_point: Vec2, reflect: bool) -> Result<Self> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::RatioOutOfRange(ratio));
        }
        let mut m = rotation(rotation_deg) * ratio;
        if reflect {
            m *= reflection_x();
        }
        let t = fixed_point - m * fixed_point;
        Self::new(2, m, t)
    }

    /// The plane similarity sending `p1 ↦ q1` and `p2 ↦ q2`, orientation
    /// preserving unless `reflect`.
    pub fn similarity_from_pairs(p1: Vec2, q1: Vec2, p2: Vec2, q2: Vec2, reflect: bool) -> Result<Self> {
        let dp = p2 - p1;
        let dq = q2 - q1;
        let len = dp.norm();
        if len == 0.0 {
            return Err(Error::CoincidentPoints);
        }
        let ratio = dq.norm() / len;
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::RatioOutOfRange(ratio));
        }
        // Complex form z ↦ a·z + t (or a·z̄ + t): a = dq / dp.
        let (px, py) = if reflect { (dp.x, -dp.y) } else { (dp.x, dp.y) };
        let den = px * px + py * py;
        let re = (dq.x * px + dq.y * py) / den;
        let im = (dq.y * px - dq.x * py) / den;
        let mut m = Matrix2::new(re, -im, im, re);
        if reflect {
            m *= reflection_x();
        }
        let t = q1 - m * p1;
        Self::new(2, m, t)
    }

    /// The affine map of the line sending `p1 ↦ q1`, `p2 ↦ q2`.
    pub fn line_from_pairs(p1: f64, q1: f64, p2: f64, q2: f64) -> Result<Self> {
        if p1 == p2 {
            return Err(Error::CoincidentPoints);
        }
        let a = (q2 - q1) / (p2 - p1);
        if !(a.abs() > 0.0 && a.abs() < 1.0) {
            return Err(Error::RatioOutOfRange(a.abs()));
        }
        Self::line(a, q1 - a * p1)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &Matrix2<f64> {
        &self.matrix
    }

    pub fn translation(&self) -> &Vec2 {
        &self.translation
    }

    pub fn c_lower(&self) -> f64 {
        self.c_lower
    }

    pub fn c_upper(&self) -> f64 {
        self.c_upper
    }

    pub fn is_similarity(&self, tol: f64) -> bool {
        self.c_upper - self.c_lower <= tol * self.c_upper
    }

    pub fn apply(&self, x: &Vec2) -> Vec2 {
        self.matrix * x + self.translation
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AffineContraction) -> AffineContraction {
        let matrix = self.matrix * inner.matrix;
        let translation = self.matrix * inner.translation + self.translation;
        let (c_lower, c_upper) = singular_values(&matrix, self.dim);
        AffineContraction { dim: self.dim, matrix, translation, c_lower, c_upper }
    }

    /// Linear part determinant sign; negative for orientation-reversing maps.
    pub fn determinant(&self) -> f64 {
        if self.dim == 1 {
            self.matrix[(0, 0)]
        } else {
            self.matrix.determinant()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-12;

    fn v(x: f64, y: f64) -> Vec2 {
        Vec2::new(x, y)
    }

    #[test]
    fn params_examples() {
        let f = AffineContraction::similarity_from_params(0.5, 30.0, v(0.0, 0.0), false).unwrap();
        let expected = rotation(30.0) * 0.5;
        assert!((f.matrix() - expected).norm() < EPS);
        assert!(f.translation().norm() < EPS);
        assert!((f.c_lower() - 0.5).abs() < EPS && (f.c_upper() - 0.5).abs() < EPS);

        let p = v(1.0, 0.0);
        let g = AffineContraction::similarity_from_params(0.25, -60.0, p, false).unwrap();
        assert!((g.translation() - (p - g.matrix() * p)).norm() < EPS);
        assert!((g.apply(&p) - p).norm() < EPS);

        let h = AffineContraction::similarity_from_params(0.9, 0.0, v(0.0, 0.0), false).unwrap();
        let hh = h.compose(&h);
        assert!((hh.c_upper() - 0.81).abs() < EPS);

        assert_eq!(
            AffineContraction::similarity_from_params(1.0, 0.0, v(0.0, 0.0), false),
            Err(Error::RatioOutOfRange(1.0))
        );
    }

    #[test]
    fn reflection_is_applied_first() {
        let f = AffineContraction::similarity_from_params(0.5, 90.0, v(0.0, 0.0), true).unwrap();
        // (1,0) → reflect (1,0) → rotate (0,1) → scale (0,0.5)
        assert!((f.apply(&v(1.0, 0.0)) - v(0.0, 0.5)).norm() < EPS);
        // (0,1) → (0,-1) → (1,0) → (0.5,0)
        assert!((f.apply(&v(0.0, 1.0)) - v(0.5, 0.0)).norm() < EPS);
        assert!(f.determinant() < 0.0);
    }

    #[test]
    fn pairs_examples() {
        let a = v(0.0, 0.0);
        let c = v(1.0, 1.0);
        let o = v(0.5, 0.5);
        let f = AffineContraction::similarity_from_pairs(a, a, c, o, false).unwrap();
        assert!((f.matrix() - Matrix2::identity() * 0.5).norm() < EPS);

        let g = AffineContraction::similarity_from_pairs(a, c, c, o, false).unwrap();
        assert!((g.apply(&a) - c).norm() < EPS);
        assert!((g.apply(&c) - o).norm() < EPS);
        assert!((g.c_upper() - 0.5).abs() < EPS && (g.c_lower() - 0.5).abs() < EPS);

        let r = AffineContraction::similarity_from_pairs(v(0.0, 1.0), v(0.0, 1.0), v(1.0, 0.0), o, true).unwrap();
        assert!((r.apply(&v(0.0, 1.0)) - v(0.0, 1.0)).norm() < EPS);
        assert!((r.apply(&v(1.0, 0.0)) - o).norm() < EPS);
        assert!(r.determinant() < 0.0);

        assert_eq!(
            AffineContraction::similarity_from_pairs(a, a, a, c, false),
            Err(Error::CoincidentPoints)
        );
        assert!(matches!(
            AffineContraction::similarity_from_pairs(a, a, v(1.0, 0.0), v(0.0, 1.0), false),
            Err(Error::RatioOutOfRange(_))
        ));
    }

    #[test]
    fn bounds_examples() {
        let m = Matrix2::new(0.5, 0.2, 0.0, 0.3);
        let (lo, hi) = contraction_bounds(&m, 2).unwrap();
        // eigenvalues of MᵀM by the quadratic formula
        let mtm = m.transpose() * m;
        let tr = mtm.trace();
        let det = mtm.determinant();
        let disc = (tr * tr - 4.0 * det).sqrt();
        let l1 = ((tr - disc) / 2.0).sqrt();
        let l2 = ((tr + disc) / 2.0).sqrt();
        assert!((lo - l1).abs() <= 1e-12 * l1);
        assert!((hi - l2).abs() <= 1e-12 * l2);

        assert_eq!(contraction_bounds(&Matrix2::new(1.0, 0.0, 0.0, 0.5), 2), Err(Error::NotContracting(1.0)));
        assert_eq!(contraction_bounds(&Matrix2::new(0.5, 0.5, 0.5, 0.5), 2), Err(Error::SingularMatrix));
        assert_eq!(contraction_bounds(&Matrix2::identity(), 3), Err(Error::UnsupportedDimension(3)));
    }

    #[test]
    fn line_maps() {
        let f = AffineContraction::line(0.5, 0.5).unwrap();
        assert_eq!(f.apply(&v(1.0, 0.0)), v(1.0, 0.0));
        assert_eq!(f.c_upper(), 0.5);
        let g = AffineContraction::line_from_pairs(0.0, 1.0, 1.0, 0.75).unwrap();
        assert_eq!(g.apply(&v(1.0, 0.0)).x, 0.75);
        assert!(g.determinant() < 0.0);
    }
}
