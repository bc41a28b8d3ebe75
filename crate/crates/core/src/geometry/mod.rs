//! Metric substrate: points, affine contractions, convex polygons and
//! Hausdorff distance.

mod affine;
mod hausdorff;
mod polygon;

pub use affine::{contraction_bounds, singular_values, AffineContraction};
pub use hausdorff::{directed_hausdorff, hausdorff_distance, PointGrid};
pub use polygon::{polygon_in_union, polygons_disjoint, polygons_disjoint_within, uncovered_area, ConvexPolygon, Interval};

use crate::graph::VertexId;

/// Points of `R^d` are stored in the plane; for `d = 1` the second
/// coordinate is zero.
pub type Vec2 = nalgebra::Vector2<f64>;

/// A point of the disjoint union `K = ⊔ K_v`: coordinates plus the vertex
/// whose space it lives in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabeledPoint {
    pub vertex: VertexId,
    pub coords: Vec2,
}

impl LabeledPoint {
    pub fn new(vertex: VertexId, coords: Vec2) -> Self {
        Self { vertex, coords }
    }

    /// Distance within a common vertex space; `None` across vertices.
    pub fn distance(&self, other: &LabeledPoint) -> Option<f64> {
        (self.vertex == other.vertex).then(|| (self.coords - other.coords).norm())
    }
}

/// Axis-aligned box `[lo, hi]` used as the seed region of a vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedBox {
    pub lo: Vec2,
    pub hi: Vec2,
}

impl SeedBox {
    pub fn center(&self) -> Vec2 {
        (self.lo + self.hi) / 2.0
    }

    pub fn diameter(&self) -> f64 {
        (self.hi - self.lo).norm()
    }

    pub fn corners(&self) -> [Vec2; 4] {
        [self.lo, Vec2::new(self.hi.x, self.lo.y), self.hi, Vec2::new(self.lo.x, self.hi.y)]
    }

    pub fn contains(&self, p: &Vec2, slack: f64) -> bool {
        p.x >= self.lo.x - slack && p.x <= self.hi.x + slack && p.y >= self.lo.y - slack && p.y <= self.hi.y + slack
    }
}
