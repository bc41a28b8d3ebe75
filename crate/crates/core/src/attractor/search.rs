//! Best-first branch and bound over the coding tree of one vertex.
//!
//! A node is a path `w` from `v`. The cylinder `φ_w(K_{r(w)})` lies in the
//! ball of radius `c_w · diam(B_{r(w)}) / 2` around `φ_w(center B_{r(w)})`,
//! so an objective with Lipschitz constant `L` is bounded on the cylinder by
//! `g(center) ± L·radius`.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::geometry::{AffineContraction, Vec2};
use crate::graph::{EdgeId, Path, VertexId};
use crate::system::MwGraphSpec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchLimits {
    /// Stop once `hi - lo <= abs_width + rel_width * hi`.
    pub abs_width: f64,
    pub rel_width: f64,
    pub max_expansions: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        Self { abs_width: 1e-9, rel_width: 1e-3, max_expansions: 200_000 }
    }
}

/// Certified enclosure `lo <= min_{K_v} g <= hi`.
#[derive(Debug, Clone, PartialEq)]
pub struct MinimumBounds {
    pub lo: f64,
    pub hi: f64,
    /// Cylinder center realising `hi`.
    pub argmin: Vec2,
    pub argmin_path: Path,
    pub argmin_radius: f64,
    pub expansions: usize,
    /// The expansion cap was hit before the width target.
    pub exhausted: bool,
}

/// Bounds of `g` on one ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallBound {
    pub lo: f64,
    pub hi: f64,
}

struct Node {
    edges: Vec<EdgeId>,
    map: AffineContraction,
    range: VertexId,
    center: Vec2,
    radius: f64,
    bound: BallBound,
}

struct Key(f64, f64);

impl PartialEq for Key {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Key {}
impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.total_cmp(&other.1))
    }
}

/// Minimises `objective` over `K_v`. `bound(center, radius)` must enclose
/// the objective on the closed ball; `objective` is used for `hi` only
/// through `bound`.
pub fn minimize_over_attractor<B>(spec: &MwGraphSpec, v: VertexId, bound: B, limits: &SearchLimits) -> MinimumBounds
where
    B: Fn(&Vec2, f64) -> BallBound,
{
    let g = spec.graph();
    let make = |edges: Vec<EdgeId>, map: AffineContraction, range: VertexId| {
        let b = spec.seed_box(range);
        let center = map.apply(&b.center());
        let radius = map.c_upper() * b.diameter() / 2.0;
        Node { edges, map, range, center, radius, bound: bound(&center, radius) }
    };

    let mut nodes: Vec<Node> = Vec::new();
    let mut heap = BinaryHeap::new();
    let mut best: Option<usize> = None;
    let push = |node: Node, nodes: &mut Vec<Node>, heap: &mut BinaryHeap<_>, best: &mut Option<usize>| {
        let idx = nodes.len();
        if best.is_none_or(|b| node.bound.hi < nodes[b].bound.hi) {
            *best = Some(idx);
        }
        heap.push(Reverse((Key(node.bound.lo, node.radius), idx)));
        nodes.push(node);
    };

    for &e in g.out_edges(v) {
        push(make(vec![e], *spec.map(e), g.range(e)), &mut nodes, &mut heap, &mut best);
    }

    let mut expansions = 0;
    let mut exhausted = false;
    let mut lo = f64::NEG_INFINITY;
    while let Some(Reverse((Key(node_lo, _), idx))) = heap.pop() {
        lo = node_lo;
        let hi = nodes[best.expect("nonempty")].bound.hi;
        if hi - lo <= limits.abs_width + limits.rel_width * hi.abs() {
            break;
        }
        if expansions >= limits.max_expansions {
            exhausted = true;
            break;
        }
        expansions += 1;
        let (edges, map, range) = {
            let n = &nodes[idx];
            (n.edges.clone(), n.map, n.range)
        };
        for &e in g.out_edges(range) {
            let mut child = edges.clone();
            child.push(e);
            push(make(child, map.compose(spec.map(e)), g.range(e)), &mut nodes, &mut heap, &mut best);
        }
    }
    let b = &nodes[best.expect("vertex has outgoing edges")];
    let hi = b.bound.hi;
    MinimumBounds {
        lo: lo.min(hi),
        hi,
        argmin: b.center,
        argmin_path: Path::new(g, b.edges.clone()).expect("tree paths are composable"),
        argmin_radius: b.radius,
        expansions,
        exhausted,
    }
}
