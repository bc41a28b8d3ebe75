//! Invariant lists of a Mauldin-Williams graph and the coding map.
//!
//! The cloud of vertex `v` at depth `n` is `{ φ_w(b_{r(w)}) : w ∈ E^n(v) }`
//! with `b_u` the seed-box center. Every point of `K_v` lies in some
//! cylinder `φ_w(K_{r(w)})`, and every cylinder has diameter at most
//! `diam · c^n`, which is the reported certificate.

mod search;

use std::collections::HashSet;

use rayon::prelude::*;

pub use search::{minimize_over_attractor, BallBound, MinimumBounds, SearchLimits};

use crate::error::{Error, Result};
use crate::geometry::{hausdorff_distance, AffineContraction, LabeledPoint, Vec2};
use crate::graph::{Path, VertexId};
use crate::system::MwGraphSpec;

pub const DEFAULT_POINT_BUDGET: u64 = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttractorOptions {
    pub point_budget: u64,
    /// Merge points falling in the same grid cell of side `bound / 4`.
    pub dedup: bool,
}

impl Default for AttractorOptions {
    fn default() -> Self {
        Self { point_budget: DEFAULT_POINT_BUDGET, dedup: false }
    }
}

/// Finite stand-in for one component `K_v`.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexCloud {
    pub vertex: VertexId,
    pub points: Vec<Vec2>,
    /// Two-sided Hausdorff certificate between `points` and `K_v`.
    pub resolution: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantListApprox {
    pub clouds: Vec<VertexCloud>,
    pub depth: usize,
    /// `diam · c^depth`.
    pub raw_bound: f64,
    /// Certified bound, including the dedup allowance when dedup ran.
    pub error_bound: f64,
    /// `|E^depth|`, the number of generated points before dedup.
    pub path_count: u128,
}

impl InvariantListApprox {
    pub fn cloud(&self, v: VertexId) -> &VertexCloud {
        &self.clouds[v.0]
    }

    pub fn point_count(&self) -> usize {
        self.clouds.iter().map(|c| c.points.len()).sum()
    }

    /// All sampled points, labelled by vertex.
    pub fn labeled_points(&self) -> impl Iterator<Item = LabeledPoint> + '_ {
        self.clouds.iter().flat_map(|c| c.points.iter().map(move |&p| LabeledPoint::new(c.vertex, p)))
    }
}

/// `diam · c^n`.
pub fn certified_bound(spec: &MwGraphSpec, depth: usize) -> f64 {
    spec.diameter() * spec.contraction().powi(depth as i32)
}

/// Smallest depth whose certificate `diam · c^n` is below `target`.
pub fn depth_for_bound(spec: &MwGraphSpec, target: f64) -> usize {
    let (diam, c) = (spec.diameter(), spec.contraction());
    if diam <= target || c <= 0.0 {
        return 0;
    }
    ((target / diam).ln() / c.ln()).floor() as usize + 1
}

/// Total number of paths of length `depth`.
pub fn path_total(spec: &MwGraphSpec, depth: usize) -> u128 {
    spec.graph().path_counts(depth).iter().fold(0u128, |a, &b| a.saturating_add(b))
}

/// Largest depth `≤ cap` whose point count fits in `budget`.
pub fn max_depth_within(spec: &MwGraphSpec, budget: u64, cap: usize) -> usize {
    (1..=cap).take_while(|&n| path_total(spec, n) <= budget as u128).last().unwrap_or(1)
}

/// `∪_{s(e)=v} φ_e(points(r(e)))` for every vertex, in edge order.
pub fn hutchinson_step(spec: &MwGraphSpec, clouds: &[Vec<Vec2>]) -> Vec<Vec<Vec2>> {
    let g = spec.graph();
    g.vertices()
        .map(|v| {
            let mut out = Vec::new();
            for &e in g.out_edges(v) {
                let f = spec.map(e);
                let src = &clouds[g.range(e).0];
                out.par_extend(src.par_iter().map(|p| f.apply(p)));
            }
            out
        })
        .collect()
}

pub fn invariant_list(spec: &MwGraphSpec, depth: usize, opts: &AttractorOptions) -> Result<InvariantListApprox> {
    if depth == 0 {
        return Err(Error::Precondition("depth must be at least 1".into()));
    }
    let required = path_total(spec, depth);
    if required > opts.point_budget as u128 {
        return Err(Error::PointBudget { depth, required, budget: opts.point_budget });
    }
    let mut clouds: Vec<Vec<Vec2>> = spec.seed_boxes().iter().map(|b| vec![b.center()]).collect();
    for _ in 0..depth {
        clouds = hutchinson_step(spec, &clouds);
    }
    let raw_bound = certified_bound(spec, depth);
    let mut error_bound = raw_bound;
    if opts.dedup && raw_bound > 0.0 {
        let cell = raw_bound / 4.0;
        for pts in &mut clouds {
            dedup_grid(pts, cell);
        }
        error_bound = raw_bound * (1.0 + (spec.dimension() as f64).sqrt() / 4.0);
    }
    let clouds = clouds
        .into_iter()
        .enumerate()
        .map(|(i, points)| VertexCloud { vertex: VertexId(i), points, resolution: error_bound })
        .collect();
    Ok(InvariantListApprox { clouds, depth, raw_bound, error_bound, path_count: required })
}

/// Keeps the first point of each grid cell, preserving order.
fn dedup_grid(points: &mut Vec<Vec2>, cell: f64) {
    let mut seen = HashSet::with_capacity(points.len());
    points.retain(|p| seen.insert(((p.x / cell).floor() as i64, (p.y / cell).floor() as i64)));
}

/// `φ_{w_1} ∘ … ∘ φ_{w_n}`.
pub fn path_map(spec: &MwGraphSpec, path: &Path) -> AffineContraction {
    let edges = path.edges();
    edges[1..].iter().fold(*spec.map(edges[0]), |acc, &e| acc.compose(spec.map(e)))
}

fn check_path(spec: &MwGraphSpec, path: &Path) -> Result<()> {
    // Paths are validated on construction, but may come from another graph.
    Path::new(spec.graph(), path.edges().to_vec()).map(|_| ())
}

/// `φ_w(base)`, a point of `K_{s(w)}` within `diam · c^n` of `π(α)` for
/// every infinite extension `α` of `w`.
pub fn coding_map_prefix(spec: &MwGraphSpec, path: &Path, base: &Vec2) -> Result<LabeledPoint> {
    check_path(spec, path)?;
    let r = path.range(spec.graph());
    if !spec.seed_box(r).contains(base, spec.slack()) {
        return Err(Error::Precondition(format!(
            "base point lies outside the seed box of `{}`",
            spec.graph().vertex_name(r)
        )));
    }
    // Apply innermost map first to keep rounding independent of path length.
    let x = path.edges().iter().rev().fold(*base, |x, &e| spec.map(e).apply(&x));
    Ok(LabeledPoint::new(path.source(spec.graph()), x))
}

/// `φ_w(cloud(r(w)))`, the sampled cylinder `K_w`.
pub fn cylinder_set(spec: &MwGraphSpec, path: &Path, approx: &InvariantListApprox) -> Result<Vec<Vec2>> {
    check_path(spec, path)?;
    let f = path_map(spec, path);
    Ok(approx.cloud(path.range(spec.graph())).points.par_iter().map(|p| f.apply(p)).collect())
}

/// Per vertex, `H(cloud(v), ∪_{s(e)=v} φ_e(cloud(r(e))))`.
pub fn invariance_residual(spec: &MwGraphSpec, approx: &InvariantListApprox) -> Result<Vec<f64>> {
    let clouds: Vec<Vec<Vec2>> = approx.clouds.iter().map(|c| c.points.clone()).collect();
    let image = hutchinson_step(spec, &clouds);
    clouds.iter().zip(&image).map(|(a, b)| hausdorff_distance(a, b)).collect()
}

/// Hausdorff distance between two approximations, maximised over vertices.
pub fn approx_distance(a: &InvariantListApprox, b: &InvariantListApprox) -> Result<f64> {
    a.clouds
        .iter()
        .zip(&b.clouds)
        .map(|(x, y)| hausdorff_distance(&x.points, &y.points))
        .try_fold(0.0, |acc, d| d.map(|d| f64::max(acc, d)))
}
