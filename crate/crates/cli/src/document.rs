//! The on-disk JSON description of a system.

use std::collections::BTreeMap;

use mwlab::geometry::{AffineContraction, ConvexPolygon, Interval, SeedBox, Vec2};
use mwlab::{Error, Graph, MwGraphSpec, OpenCell};
use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::error::CliResult;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub name: String,
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub notes: String,
    pub vertices: Vec<VertexDoc>,
    pub edges: Vec<EdgeDoc>,
    /// Candidate open sets: per vertex, a list of convex cells given by
    /// their corner points (an interval `[[lo], [hi]]` in one dimension).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub open_sets: Option<BTreeMap<String, Vec<Vec<Vec<f64>>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<Reference>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDoc {
    pub id: String,
    /// `[lo, hi]` corners.
    pub seed_box: [Vec<f64>; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub id: String,
    pub source: String,
    pub range: String,
    pub map: MapDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapDoc {
    Affine {
        matrix: Vec<Vec<f64>>,
        translation: Vec<f64>,
    },
    Similarity {
        ratio: f64,
        rotation_deg: f64,
        fixed_point: Vec<f64>,
        #[serde(default)]
        reflect: bool,
    },
    Pairs {
        p1: Vec<f64>,
        q1: Vec<f64>,
        p2: Vec<f64>,
        q2: Vec<f64>,
        #[serde(default)]
        reflect: bool,
    },
}

/// Stated K-groups of the Cuntz-Pimsner algebra, carried through to
/// reports verbatim. Never computed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Reference {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k0: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k1: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn point(v: &[f64], dim: usize, what: &str) -> Result<Vec2, String> {
    if v.len() != dim {
        return Err(format!("{what} has {} coordinates, expected {dim}", v.len()));
    }
    Ok(Vec2::new(v[0], if dim == 2 { v[1] } else { 0.0 }))
}

impl MapDoc {
    fn resolve(&self, dim: usize) -> Result<AffineContraction, String> {
        let err = |e: Error| e.to_string();
        match self {
            MapDoc::Affine { matrix, translation } => {
                if matrix.len() != dim || matrix.iter().any(|r| r.len() != dim) {
                    return Err(format!("matrix must be {dim}x{dim}"));
                }
                let m = if dim == 2 {
                    Matrix2::new(matrix[0][0], matrix[0][1], matrix[1][0], matrix[1][1])
                } else {
                    Matrix2::new(matrix[0][0], 0.0, 0.0, 0.0)
                };
                AffineContraction::new(dim, m, point(translation, dim, "translation")?).map_err(err)
            }
            MapDoc::Similarity { ratio, rotation_deg, fixed_point, reflect } => {
                let fp = point(fixed_point, dim, "fixed_point")?;
                if dim == 2 {
                    return AffineContraction::similarity_from_params(*ratio, *rotation_deg, fp, *reflect).map_err(err);
                }
                let flip = match rotation_deg.rem_euclid(360.0) {
                    r if r == 0.0 => false,
                    r if r == 180.0 => true,
                    _ => return Err("a similarity of the line rotates by 0 or 180 degrees".into()),
                };
                if !(*ratio > 0.0 && *ratio < 1.0) {
                    return Err(Error::RatioOutOfRange(*ratio).to_string());
                }
                let a = if flip != *reflect { -ratio } else { *ratio };
                AffineContraction::line(a, fp.x - a * fp.x).map_err(err)
            }
            MapDoc::Pairs { p1, q1, p2, q2, reflect } => {
                let (p1, q1) = (point(p1, dim, "p1")?, point(q1, dim, "q1")?);
                let (p2, q2) = (point(p2, dim, "p2")?, point(q2, dim, "q2")?);
                if dim == 2 {
                    AffineContraction::similarity_from_pairs(p1, q1, p2, q2, *reflect).map_err(err)
                } else {
                    AffineContraction::line_from_pairs(p1.x, q1.x, p2.x, q2.x).map_err(err)
                }
            }
        }
    }

    /// Ratio bound used to name a failing edge before full validation.
    fn sigma_max(&self, dim: usize) -> Option<f64> {
        match self {
            MapDoc::Affine { matrix, .. } if matrix.len() == dim && matrix.iter().all(|r| r.len() == dim) => {
                let m = if dim == 2 {
                    Matrix2::new(matrix[0][0], matrix[0][1], matrix[1][0], matrix[1][1])
                } else {
                    Matrix2::new(matrix[0][0], 0.0, 0.0, 0.0)
                };
                Some(mwlab::geometry::singular_values(&m, dim).1)
            }
            MapDoc::Similarity { ratio, .. } => Some(*ratio),
            MapDoc::Pairs { p1, q1, p2, q2, .. } => {
                let d = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
                Some(d(q1, q2) / d(p1, p2))
            }
            _ => None,
        }
    }
}

impl SpecDocument {
    pub fn from_json(text: &str) -> CliResult<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialise")
    }

    /// Validates the document into a system.
    pub fn resolve(&self) -> CliResult<MwGraphSpec> {
        let dim = self.dimension;
        if !(1..=2).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim).into());
        }
        let graph = Graph::new(
            self.vertices.iter().map(|v| v.id.clone()),
            self.edges.iter().map(|e| (e.id.clone(), e.source.clone(), e.range.clone())),
        )?;
        let mut boxes = Vec::with_capacity(self.vertices.len());
        for v in &self.vertices {
            let bad = || Error::InvalidSeedBox(v.id.clone());
            let lo = point(&v.seed_box[0], dim, "seed_box").map_err(|_| bad())?;
            let hi = point(&v.seed_box[1], dim, "seed_box").map_err(|_| bad())?;
            boxes.push(SeedBox { lo, hi });
        }
        let mut maps = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            if let Some(s) = e.map.sigma_max(dim).filter(|s| !(*s < 1.0)) {
                return Err(Error::NonContraction { edge: e.id.clone(), sigma_max: s }.into());
            }
            let map = e.map.resolve(dim).map_err(|reason| Error::InvalidEdgeMap { edge: e.id.clone(), reason })?;
            maps.push(map);
        }
        let open_sets = match &self.open_sets {
            None => None,
            Some(sets) => {
                for key in sets.keys() {
                    if graph.vertex_by_name(key).is_none() {
                        return Err(Error::UnknownVertex(key.clone()).into());
                    }
                }
                let mut out = Vec::with_capacity(self.vertices.len());
                for v in &self.vertices {
                    let cells = sets.get(&v.id).map(Vec::as_slice).unwrap_or_default();
                    out.push(cells.iter().map(|c| cell(c, dim, &v.id)).collect::<Result<Vec<_>, Error>>()?);
                }
                Some(out)
            }
        };
        let mut spec = MwGraphSpec::new(self.name.clone(), graph, dim, boxes, maps, open_sets)?;
        spec.notes = self.notes.clone();
        Ok(spec)
    }

    /// The document describing `spec`, with every map in affine form.
    pub fn from_spec(spec: &MwGraphSpec, reference: Option<Reference>) -> Self {
        let g = spec.graph();
        let dim = spec.dimension();
        let coords = |p: &Vec2| if dim == 2 { vec![p.x, p.y] } else { vec![p.x] };
        let vertices = g
            .vertices()
            .map(|v| {
                let b = spec.seed_box(v);
                VertexDoc { id: g.vertex_name(v).to_string(), seed_box: [coords(&b.lo), coords(&b.hi)] }
            })
            .collect();
        let edges = g
            .edge_ids()
            .map(|e| {
                let m = spec.map(e);
                let a = m.matrix();
                let matrix = if dim == 2 { vec![vec![a[(0, 0)], a[(0, 1)]], vec![a[(1, 0)], a[(1, 1)]]] } else { vec![vec![a[(0, 0)]]] };
                EdgeDoc {
                    id: g.edge(e).name.clone(),
                    source: g.vertex_name(g.source(e)).to_string(),
                    range: g.vertex_name(g.range(e)).to_string(),
                    map: MapDoc::Affine { matrix, translation: coords(m.translation()) },
                }
            })
            .collect();
        let open_sets = spec.open_sets().map(|sets| {
            g.vertices()
                .zip(sets)
                .map(|(v, cells)| {
                    let cells = cells.iter().map(|c| c.points().iter().map(&coords).collect()).collect();
                    (g.vertex_name(v).to_string(), cells)
                })
                .collect()
        });
        SpecDocument {
            name: spec.name.clone(),
            dimension: dim,
            notes: spec.notes.clone(),
            vertices,
            edges,
            open_sets,
            reference,
        }
    }
}

fn cell(points: &[Vec<f64>], dim: usize, vertex: &str) -> Result<OpenCell, Error> {
    let bad = |m: String| Error::DegeneratePolygon(format!("vertex `{vertex}`: {m}"));
    let pts: Vec<Vec2> = points.iter().map(|p| point(p, dim, "open set point")).collect::<Result<_, _>>().map_err(bad)?;
    if dim == 1 {
        if pts.len() != 2 {
            return Err(bad("an interval needs exactly two endpoints".into()));
        }
        Ok(OpenCell::Interval(Interval::new(pts[0].x, pts[1].x)?))
    } else {
        Ok(OpenCell::Polygon(ConvexPolygon::new(pts)?))
    }
}
