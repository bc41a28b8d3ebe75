//! The declarative Mauldin-Williams graph: a directed multigraph whose
//! vertices carry seed regions and whose edges carry affine contractions
//! `φ_e : T_{r(e)} → T_{s(e)}`.

use crate::error::{Error, Result};
use crate::geometry::{AffineContraction, ConvexPolygon, Interval, SeedBox, Vec2};
use crate::graph::{EdgeId, Graph, VertexId};

/// Longest iterate tried when certifying that the seed boxes trap the
/// invariant list.
pub const MAX_INVARIANCE_DEPTH: usize = 12;
const INVARIANCE_PATH_LIMIT: u128 = 2_000_000;

/// One convex piece of a candidate open set.
#[derive(Debug, Clone, PartialEq)]
pub enum OpenCell {
    Interval(Interval),
    Polygon(ConvexPolygon),
}

impl OpenCell {
    pub fn points(&self) -> Vec<Vec2> {
        match self {
            OpenCell::Interval(i) => vec![Vec2::new(i.lo, 0.0), Vec2::new(i.hi, 0.0)],
            OpenCell::Polygon(p) => p.vertices().to_vec(),
        }
    }

    pub fn transform(&self, map: &AffineContraction) -> Result<OpenCell> {
        Ok(match self {
            OpenCell::Interval(i) => OpenCell::Interval(i.transform(map)?),
            OpenCell::Polygon(p) => OpenCell::Polygon(p.transform(map)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MwGraphSpec {
    pub name: String,
    pub notes: String,
    graph: Graph,
    dim: usize,
    seed_boxes: Vec<SeedBox>,
    maps: Vec<AffineContraction>,
    open_sets: Option<Vec<Vec<OpenCell>>>,
    invariance_depth: usize,
}

impl MwGraphSpec {
    /// Validates the standing assumptions: contraction maps, no sinks or
    /// sources, well-formed seed boxes that trap the invariant list, and
    /// candidate open sets inside their seed boxes.
    pub fn new(
        name: impl Into<String>,
        graph: Graph,
        dim: usize,
        seed_boxes: Vec<SeedBox>,
        maps: Vec<AffineContraction>,
        open_sets: Option<Vec<Vec<OpenCell>>>,
    ) -> Result<Self> {
        if !(1..=2).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if seed_boxes.len() != graph.vertex_count() {
            return Err(Error::InvalidGraph(format!(
                "{} seed boxes for {} vertices",
                seed_boxes.len(),
                graph.vertex_count()
            )));
        }
        for (v, b) in graph.vertices().zip(&seed_boxes) {
            let finite = b.lo.iter().chain(b.hi.iter()).all(|x| x.is_finite());
            let flat_ok = dim == 2 || (b.lo.y == 0.0 && b.hi.y == 0.0);
            if !finite || !flat_ok || b.lo.x >= b.hi.x || (dim == 2 && b.lo.y >= b.hi.y) {
                return Err(Error::InvalidSeedBox(graph.vertex_name(v).to_string()));
            }
        }
        if maps.len() != graph.edge_count() {
            return Err(Error::InvalidGraph(format!("{} maps for {} edges", maps.len(), graph.edge_count())));
        }
        for (e, m) in graph.edges().iter().zip(&maps) {
            if m.dim() != dim {
                return Err(Error::InvalidEdgeMap {
                    edge: e.name.clone(),
                    reason: format!("map is {}-dimensional, system is {dim}-dimensional", m.dim()),
                });
            }
        }
        let ss = graph.sinks_and_sources();
        if !ss.is_empty() {
            let names = |vs: &[VertexId]| vs.iter().map(|&v| graph.vertex_name(v).to_string()).collect::<Vec<_>>().join(", ");
            return Err(Error::InvalidGraph(format!(
                "graph must have no sinks and no sources (sinks: [{}], sources: [{}])",
                names(&ss.sinks),
                names(&ss.sources)
            )));
        }
        let mut spec = Self {
            name: name.into(),
            notes: String::new(),
            graph,
            dim,
            seed_boxes,
            maps,
            open_sets: None,
            invariance_depth: 0,
        };
        spec.invariance_depth = spec.certify_seed_boxes()?;
        if let Some(sets) = open_sets {
            spec.set_open_sets(sets)?;
        }
        Ok(spec)
    }

    fn set_open_sets(&mut self, sets: Vec<Vec<OpenCell>>) -> Result<()> {
        if sets.len() != self.graph.vertex_count() {
            return Err(Error::DegeneratePolygon(format!(
                "open sets given for {} of {} vertices",
                sets.len(),
                self.graph.vertex_count()
            )));
        }
        let slack = self.slack();
        for (v, cells) in self.graph.vertices().zip(&sets) {
            let b = self.seed_boxes[v.0];
            for cell in cells {
                match (cell, self.dim) {
                    (OpenCell::Interval(_), 1) | (OpenCell::Polygon(_), 2) => {}
                    _ => return Err(Error::DegeneratePolygon("open set cell has the wrong dimension".into())),
                }
                if !cell.points().iter().all(|p| b.contains(p, slack)) {
                    return Err(Error::DegeneratePolygon(format!(
                        "open set cell of vertex `{}` leaves its seed box",
                        self.graph.vertex_name(v)
                    )));
                }
            }
        }
        self.open_sets = Some(sets);
        Ok(())
    }

    /// Smallest `m` with `φ_w(B_{r(w)}) ⊆ B_{s(w)}` for every `w ∈ E^m`.
    ///
    /// Since the Hutchinson operator is monotone, `H^m(B) ⊆ B` gives
    /// `H^{km}(B) ⊆ B` for all `k`, so the invariant list lies in the boxes.
    fn certify_seed_boxes(&self) -> Result<usize> {
        let slack = self.slack();
        for m in 1..=MAX_INVARIANCE_DEPTH {
            let total: u128 = self.graph.path_counts(m).iter().fold(0u128, |a, &b| a.saturating_add(b));
            if total > INVARIANCE_PATH_LIMIT {
                break;
            }
            let ok = self.graph.vertices().all(|v| {
                let target = self.seed_boxes[v.0];
                let mut maps: Vec<(AffineContraction, VertexId)> =
                    self.graph.out_edges(v).iter().map(|&e| (self.maps[e.0], self.graph.range(e))).collect();
                for _ in 1..m {
                    maps = maps
                        .iter()
                        .flat_map(|(f, u)| {
                            self.graph.out_edges(*u).iter().map(move |&e| (f.compose(&self.maps[e.0]), self.graph.range(e)))
                        })
                        .collect();
                }
                maps.iter().all(|(f, u)| self.seed_boxes[u.0].corners().iter().all(|c| target.contains(&f.apply(c), slack)))
            });
            if ok {
                return Ok(m);
            }
        }
        Err(Error::SeedBoxNotInvariant { max_depth: MAX_INVARIANCE_DEPTH })
    }

    /// Absolute slack for geometric containment: `1e-9 · diam`.
    pub fn slack(&self) -> f64 {
        1e-9 * self.diameter().max(f64::MIN_POSITIVE)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn seed_box(&self, v: VertexId) -> &SeedBox {
        &self.seed_boxes[v.0]
    }

    pub fn seed_boxes(&self) -> &[SeedBox] {
        &self.seed_boxes
    }

    pub fn map(&self, e: EdgeId) -> &AffineContraction {
        &self.maps[e.0]
    }

    pub fn maps(&self) -> &[AffineContraction] {
        &self.maps
    }

    pub fn open_sets(&self) -> Option<&[Vec<OpenCell>]> {
        self.open_sets.as_deref()
    }

    /// Iterate length at which the seed boxes were certified.
    pub fn invariance_depth(&self) -> usize {
        self.invariance_depth
    }

    /// System contraction `c = max_e c_upper(φ_e)`.
    pub fn contraction(&self) -> f64 {
        self.maps.iter().map(AffineContraction::c_upper).fold(0.0, f64::max)
    }

    /// System lower constant `c′ = min_e c_lower(φ_e)`.
    pub fn contraction_lower(&self) -> f64 {
        self.maps.iter().map(AffineContraction::c_lower).fold(f64::INFINITY, f64::min)
    }

    /// Largest seed-box diameter.
    pub fn diameter(&self) -> f64 {
        self.seed_boxes.iter().map(SeedBox::diameter).fold(0.0, f64::max)
    }

    /// Number of edges `e` with `r(e) = v`.
    pub fn incoming_count(&self, v: VertexId) -> usize {
        self.graph.in_edges(v).len()
    }

    /// Copy of this system with a different candidate open-set family.
    pub fn with_open_sets(&self, sets: Option<Vec<Vec<OpenCell>>>) -> Result<Self> {
        let mut out = self.clone();
        out.open_sets = None;
        if let Some(s) = sets {
            out.set_open_sets(s)?;
        }
        Ok(out)
    }
}
