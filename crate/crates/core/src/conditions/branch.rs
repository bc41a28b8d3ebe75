//! Branch points `B(M)`, the branch index and the graph separation condition.

use std::collections::HashMap;

use nalgebra::Matrix2;
use rayon::prelude::*;

use crate::attractor::{depth_for_bound, minimize_over_attractor, BallBound, InvariantListApprox, SearchLimits};
use crate::error::{Error, Result};
use crate::geometry::{singular_values, LabeledPoint, Vec2};
use crate::graph::EdgeId;
use crate::system::MwGraphSpec;

const RANK_EPS: f64 = 1e-12;

/// Solution set of `φ_e(y) = φ_f(y)`, i.e. `D y + d = 0` with
/// `D = M_e − M_f` and `d = t_e − t_f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PairSolution {
    Point(Vec2),
    Line { point: Vec2, direction: Vec2 },
    /// `D` is singular and `d` is off its column space.
    Inconsistent,
    /// `D = 0` and `d ≠ 0`: the gap is the constant `|d|`.
    Parallel { gap: f64 },
    /// The two maps coincide.
    Everywhere,
}

/// Evidence for one admissible pair `e < f` with equal source and range.
#[derive(Debug, Clone, PartialEq)]
pub struct PairCertificate {
    pub first: EdgeId,
    pub second: EdgeId,
    pub solution: PairSolution,
    /// Certified enclosure of `min_{y ∈ K_r} |φ_e(y) − φ_f(y)|`.
    pub gap_lower: f64,
    pub gap_upper: f64,
    /// Minimum over the sampled cloud.
    pub sampled_gap: f64,
    /// The sampled minimum lies within `σ_max(D) · error_bound` of the enclosure.
    pub agrees: bool,
    /// The search stopped on its width target rather than its expansion cap.
    pub converged: bool,
    /// A point of `K_r` realising `gap_upper` up to the search radius.
    pub witness: Vec2,
}

impl PairCertificate {
    pub fn is_branch_pair(&self, tol: f64) -> bool {
        self.gap_upper <= tol
    }
}

/// One clustered branch point `x = φ_e(y)` for every listed `e`.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchRecord {
    pub x: LabeledPoint,
    pub y: LabeledPoint,
    pub edges: Vec<EdgeId>,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchReport {
    pub branch_points: Vec<BranchRecord>,
    /// `min` over admissible pairs of the certified upper gap; infinite when
    /// no pair is admissible.
    pub min_cograph_gap: f64,
    pub min_gap_lower: f64,
    pub tol: f64,
    pub sample_depth: usize,
    pub pairs: Vec<PairCertificate>,
}

impl BranchReport {
    /// `#B(M)`: distinct branch points `x`, merged within `tol`.
    pub fn quotient_dimension(&self) -> usize {
        let mut xs: Vec<LabeledPoint> = Vec::new();
        for r in &self.branch_points {
            if !xs.iter().any(|p| p.distance(&r.x).is_some_and(|d| d <= self.tol)) {
                xs.push(r.x);
            }
        }
        xs.len()
    }

    /// `Φ(A) ⊆ K(X)`, which holds exactly when `B(M)` is empty.
    pub fn left_action_compact(&self) -> bool {
        self.branch_points.is_empty()
    }

    /// Every certificate agrees with the sampled scan.
    pub fn certificates_agree(&self) -> bool {
        self.pairs.iter().all(|p| p.agrees)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationWitness {
    pub first: EdgeId,
    pub second: EdgeId,
    pub y: LabeledPoint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphSeparation {
    pub holds: bool,
    pub min_gap: f64,
    pub witness: Option<SeparationWitness>,
}

/// `e(x, y) = #{e : s(e) = v(x), r(e) = v(y), |φ_e(y) − x| ≤ tol}`.
pub fn branch_index(spec: &MwGraphSpec, x: &LabeledPoint, y: &LabeledPoint, tol: f64) -> usize {
    branch_edges(spec, x, y, tol).len()
}

fn branch_edges(spec: &MwGraphSpec, x: &LabeledPoint, y: &LabeledPoint, tol: f64) -> Vec<EdgeId> {
    let g = spec.graph();
    if x.vertex.0 >= g.vertex_count() || y.vertex.0 >= g.vertex_count() {
        return Vec::new();
    }
    g.out_edges(x.vertex)
        .iter()
        .copied()
        .filter(|&e| g.range(e) == y.vertex && (spec.map(e).apply(&y.coords) - x.coords).norm() <= tol)
        .collect()
}

/// Pairs `e < f` with `s(e) = s(f)` and `r(e) = r(f)`.
pub fn admissible_pairs(spec: &MwGraphSpec) -> Vec<(EdgeId, EdgeId)> {
    let g = spec.graph();
    let mut out = Vec::new();
    for v in g.vertices() {
        let es = g.out_edges(v);
        for (i, &e) in es.iter().enumerate() {
            for &f in &es[i + 1..] {
                if g.range(e) == g.range(f) {
                    out.push((e.min(f), e.max(f)));
                }
            }
        }
    }
    out.sort();
    out
}

fn difference(spec: &MwGraphSpec, e: EdgeId, f: EdgeId) -> (Matrix2<f64>, Vec2) {
    let (a, b) = (spec.map(e), spec.map(f));
    (a.matrix() - b.matrix(), a.translation() - b.translation())
}

/// Classifies the solution set of `D y + d = 0`.
pub fn solve_pair(spec: &MwGraphSpec, e: EdgeId, f: EdgeId) -> PairSolution {
    let (d_mat, d) = difference(spec, e, f);
    let scale = spec.map(e).matrix().norm().max(spec.map(f).matrix().norm());
    let tscale = spec.map(e).translation().norm().max(spec.map(f).translation().norm()).max(1.0);
    let zero_mat = d_mat.norm() <= RANK_EPS * scale;
    if zero_mat {
        return if d.norm() <= RANK_EPS * tscale { PairSolution::Everywhere } else { PairSolution::Parallel { gap: d.norm() } };
    }
    if spec.dimension() == 1 {
        return PairSolution::Point(Vec2::new(-d.x / d_mat[(0, 0)], 0.0));
    }
    let det = d_mat.determinant();
    if det.abs() > RANK_EPS * d_mat.norm_squared() {
        let inv = d_mat.try_inverse().expect("nonsingular");
        return PairSolution::Point(-(inv * d));
    }
    // rank one: keep the dominant row as the defining equation r·y = b
    let (r0, r1) = (d_mat.row(0).transpose(), d_mat.row(1).transpose());
    let (r, b) = if r0.norm() >= r1.norm() { (r0, -d.x) } else { (r1, -d.y) };
    let point = r * (b / r.norm_squared());
    let residual = (d_mat * point + d).norm();
    if residual > 1e-9 * (d.norm() + d_mat.norm() * point.norm()).max(tscale * RANK_EPS) {
        return PairSolution::Inconsistent;
    }
    PairSolution::Line { point, direction: Vec2::new(-r.y, r.x) / r.norm() }
}

struct PairScan {
    cert: PairCertificate,
    hits: Vec<(LabeledPoint, LabeledPoint)>,
}

fn scan_pair(spec: &MwGraphSpec, approx: &InvariantListApprox, e: EdgeId, f: EdgeId, tol: f64) -> PairScan {
    let g = spec.graph();
    let (s, r) = (g.source(e), g.range(e));
    let (d_mat, d) = difference(spec, e, f);
    let lip = singular_values(&d_mat, spec.dimension()).1;
    let lip = if lip.is_finite() { lip } else { 0.0 };
    let gap = |y: &Vec2| (d_mat * y + d).norm();
    let solution = solve_pair(spec, e, f);

    let cloud = &approx.cloud(r).points;
    let sampled_gap = cloud.par_iter().map(gap).reduce(|| f64::INFINITY, f64::min);

    let (gap_lower, gap_upper, converged, search_witness) = match solution {
        PairSolution::Parallel { gap } => (gap, gap, true, None),
        PairSolution::Everywhere => (0.0, 0.0, true, None),
        _ => {
            let limits = SearchLimits {
                abs_width: (tol / 4.0).max(1e-12 * spec.diameter()),
                ..SearchLimits::default()
            };
            let m = minimize_over_attractor(
                spec,
                r,
                |c, rho| {
                    let v = gap(c);
                    BallBound { lo: (v - lip * rho).max(0.0), hi: v + lip * rho }
                },
                &limits,
            );
            (m.lo, m.hi, !m.exhausted, Some(m.argmin))
        }
    };
    let witness = match solution {
        PairSolution::Point(y) if gap_upper <= tol => y,
        _ => search_witness.unwrap_or_else(|| cloud.first().copied().unwrap_or_else(|| spec.seed_box(r).center())),
    };
    let slack = lip * approx.error_bound + 1e-12 * (1.0 + gap_upper.abs());
    let agrees = sampled_gap >= gap_lower - slack && sampled_gap <= gap_upper + slack;

    let mut hits = Vec::new();
    if gap_upper <= tol {
        let phi = spec.map(e);
        let mut push = |y: Vec2| hits.push((LabeledPoint::new(s, phi.apply(&y)), LabeledPoint::new(r, y)));
        match solution {
            PairSolution::Point(y) => push(y),
            PairSolution::Line { point, direction } => {
                for y in cloud.iter().filter(|y| gap(y) <= tol) {
                    push(point + direction * (y - point).dot(&direction));
                }
            }
            PairSolution::Everywhere => cloud.iter().for_each(|&y| push(y)),
            PairSolution::Inconsistent | PairSolution::Parallel { .. } => {}
        }
    }
    let cert = PairCertificate {
        first: e,
        second: f,
        solution,
        gap_lower,
        gap_upper,
        sampled_gap,
        agrees,
        converged,
        witness,
    };
    PairScan { cert, hits }
}

fn check_approx(spec: &MwGraphSpec, approx: &InvariantListApprox) -> Result<()> {
    if approx.clouds.len() != spec.graph().vertex_count() {
        return Err(Error::Precondition(format!(
            "approximation has {} clouds for {} vertices",
            approx.clouds.len(),
            spec.graph().vertex_count()
        )));
    }
    Ok(())
}

/// Detects `B(M)`.
///
/// Each admissible pair is solved exactly and its gap bounded over `K_r` by
/// branch and bound; isolated solutions are reported directly. Solution
/// lines and coinciding maps are intersected with the sampled cloud, which
/// needs `error_bound < tol / 4`.
pub fn branch_points(spec: &MwGraphSpec, approx: &InvariantListApprox, tol: f64) -> Result<BranchReport> {
    check_approx(spec, approx)?;
    if !(tol >= 0.0) {
        return Err(Error::Precondition("tolerance must be nonnegative".into()));
    }
    let scans: Vec<PairScan> =
        admissible_pairs(spec).into_par_iter().map(|(e, f)| scan_pair(spec, approx, e, f, tol)).collect();

    let needs_sampling = scans.iter().any(|s| {
        s.cert.is_branch_pair(tol) && matches!(s.cert.solution, PairSolution::Line { .. } | PairSolution::Everywhere)
    });
    if needs_sampling && !(approx.error_bound < tol / 4.0) {
        return Err(Error::ResolutionInsufficient {
            resolution: approx.error_bound,
            tol,
            suggested_depth: depth_for_bound(spec, tol / 4.0),
        });
    }

    let hits: Vec<(LabeledPoint, LabeledPoint)> = scans.iter().flat_map(|s| s.hits.iter().copied()).collect();
    let mut branch_points: Vec<BranchRecord> = cluster(&hits, tol)
        .into_iter()
        .map(|(x, y)| {
            let edges = branch_edges(spec, &x, &y, tol);
            BranchRecord { x, y, index: edges.len(), edges }
        })
        .collect();
    branch_points.sort_by(|a, b| {
        a.edges
            .cmp(&b.edges)
            .then(a.x.vertex.cmp(&b.x.vertex))
            .then(a.x.coords.x.total_cmp(&b.x.coords.x))
            .then(a.x.coords.y.total_cmp(&b.x.coords.y))
            .then(a.y.coords.x.total_cmp(&b.y.coords.x))
            .then(a.y.coords.y.total_cmp(&b.y.coords.y))
    });

    let pairs: Vec<PairCertificate> = scans.into_iter().map(|s| s.cert).collect();
    let min_cograph_gap = pairs.iter().map(|p| p.gap_upper).fold(f64::INFINITY, f64::min);
    let min_gap_lower = pairs.iter().map(|p| p.gap_lower).fold(f64::INFINITY, f64::min);
    Ok(BranchReport { branch_points, min_cograph_gap, min_gap_lower, tol, sample_depth: approx.depth, pairs })
}

/// Greedy clustering: a hit joins the first representative whose `x` and
/// `y` are both within `tol`.
fn cluster(hits: &[(LabeledPoint, LabeledPoint)], tol: f64) -> Vec<(LabeledPoint, LabeledPoint)> {
    let cell = if tol > 0.0 { tol } else { 1.0 };
    let key = |p: &LabeledPoint| (p.vertex.0, (p.coords.x / cell).floor() as i64, (p.coords.y / cell).floor() as i64);
    let mut grid: HashMap<(usize, i64, i64), Vec<usize>> = HashMap::new();
    let mut reps: Vec<(LabeledPoint, LabeledPoint)> = Vec::new();
    for &(x, y) in hits {
        let (v, i, j) = key(&x);
        let near = |d: &f64| *d <= tol;
        let found = (-1..=1).flat_map(|di| (-1..=1).map(move |dj| (v, i + di, j + dj))).any(|k| {
            grid.get(&k).is_some_and(|ids| {
                ids.iter().any(|&id| {
                    let (rx, ry) = &reps[id];
                    rx.distance(&x).as_ref().is_some_and(near) && ry.distance(&y).as_ref().is_some_and(near)
                })
            })
        });
        if !found {
            grid.entry((v, i, j)).or_default().push(reps.len());
            reps.push((x, y));
        }
    }
    reps
}

/// The graph separation condition from an existing branch report.
pub fn separation_from_report(spec: &MwGraphSpec, report: &BranchReport) -> GraphSeparation {
    let holds = report.min_cograph_gap > report.tol;
    let witness = if holds {
        None
    } else {
        report.pairs.iter().min_by(|a, b| a.gap_upper.total_cmp(&b.gap_upper)).map(|p| SeparationWitness {
            first: p.first,
            second: p.second,
            y: LabeledPoint::new(spec.graph().range(p.first), p.witness),
        })
    };
    GraphSeparation { holds, min_gap: report.min_cograph_gap, witness }
}

/// Pairwise disjointness of the cographs, up to `tol`. When it holds the
/// Cuntz-Pimsner algebra is isomorphic to the graph algebra `C*(G)`.
pub fn graph_separation(spec: &MwGraphSpec, approx: &InvariantListApprox, tol: f64) -> Result<GraphSeparation> {
    Ok(separation_from_report(spec, &branch_points(spec, approx, tol)?))
}
