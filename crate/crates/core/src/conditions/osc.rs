//! The open set condition for a user-supplied candidate family `V_v`.

use crate::geometry::{polygon_in_union, polygons_disjoint_within, uncovered_area, ConvexPolygon, Interval};
use crate::graph::{EdgeId, VertexId};
use crate::system::{MwGraphSpec, OpenCell};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub enum OscFailure {
    /// `φ_e(V_{r(e)})` leaves `V_{s(e)}`; `uncovered` is the escaping area
    /// (length in one dimension).
    NotContained { edge: EdgeId, vertex: VertexId, uncovered: f64 },
    /// `φ_e(V_{r(e)})` and `φ_f(V_{r(f)})` overlap.
    Overlap { first: EdgeId, second: EdgeId },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OscReport {
    /// `None` when the spec carries no candidate open sets.
    pub holds: Option<bool>,
    pub failures: Vec<OscFailure>,
}

enum Cells {
    Intervals(Vec<Interval>),
    Polygons(Vec<ConvexPolygon>),
}

fn split(cells: &[OpenCell]) -> Cells {
    if cells.iter().all(|c| matches!(c, OpenCell::Interval(_))) {
        Cells::Intervals(cells.iter().filter_map(|c| if let OpenCell::Interval(i) = c { Some(*i) } else { None }).collect())
    } else {
        Cells::Polygons(cells.iter().filter_map(|c| if let OpenCell::Polygon(p) = c { Some(p.clone()) } else { None }).collect())
    }
}

fn image(spec: &MwGraphSpec, e: EdgeId) -> Result<Cells> {
    let sets = spec.open_sets().expect("checked by caller");
    let cells: Vec<OpenCell> =
        sets[spec.graph().range(e).0].iter().map(|c| c.transform(spec.map(e))).collect::<Result<_>>()?;
    Ok(split(&cells))
}

/// Checks (a) `φ_e(V_{r(e)}) ⊆ V_{s(e)}` up to a residual of `tol` times
/// the image size, and (b) pairwise disjoint images for distinct edges with
/// a common source, tolerating overlaps of depth `tol`. `tol = 0` is exact.
pub fn open_set_condition(spec: &MwGraphSpec, tol: f64) -> Result<OscReport> {
    let Some(sets) = spec.open_sets() else {
        return Ok(OscReport { holds: None, failures: Vec::new() });
    };
    let g = spec.graph();
    let images: Vec<Cells> = g.edge_ids().map(|e| image(spec, e)).collect::<Result<_>>()?;
    let mut failures = Vec::new();

    for e in g.edge_ids() {
        let v = g.source(e);
        let target = split(&sets[v.0]);
        let uncovered = match (&images[e.0], &target) {
            (Cells::Intervals(img), Cells::Intervals(cover)) => {
                let (lost, size): (f64, f64) = img.iter().map(|i| (i.uncovered_length(cover), i.length())).fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
                (lost > tol * size).then_some(lost)
            }
            (Cells::Polygons(img), Cells::Polygons(cover)) => {
                let bad = img.iter().any(|p| !polygon_in_union(p, cover, tol));
                bad.then(|| img.iter().map(|p| uncovered_area(p, cover)).sum())
            }
            // empty candidates on either side
            (Cells::Intervals(img), _) | (_, Cells::Intervals(img)) if img.is_empty() => None,
            _ => Some(f64::NAN),
        };
        if let Some(uncovered) = uncovered {
            failures.push(OscFailure::NotContained { edge: e, vertex: v, uncovered });
        }
    }

    for v in g.vertices() {
        let es = g.out_edges(v);
        for (i, &e) in es.iter().enumerate() {
            for &f in &es[i + 1..] {
                let disjoint = match (&images[e.0], &images[f.0]) {
                    (Cells::Intervals(a), Cells::Intervals(b)) => {
                        a.iter().all(|p| b.iter().all(|q| p.disjoint_within(q, tol)))
                    }
                    (Cells::Polygons(a), Cells::Polygons(b)) => {
                        a.iter().all(|p| b.iter().all(|q| polygons_disjoint_within(p, q, tol)))
                    }
                    _ => true,
                };
                if !disjoint {
                    failures.push(OscFailure::Overlap { first: e.min(f), second: e.max(f) });
                }
            }
        }
    }
    Ok(OscReport { holds: Some(failures.is_empty()), failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{AffineContraction, SeedBox, Vec2};
    use crate::graph::Graph;

    fn line_ifs(maps: &[(f64, f64)], open: Option<(f64, f64)>) -> MwGraphSpec {
        let g = Graph::from_indexed(1, &vec![(0, 0); maps.len()]).unwrap();
        let maps = maps.iter().map(|&(a, t)| AffineContraction::line(a, t).unwrap()).collect();
        let b = SeedBox { lo: Vec2::new(0.0, 0.0), hi: Vec2::new(1.0, 0.0) };
        let open = open.map(|(a, b)| vec![vec![OpenCell::Interval(Interval::new(a, b).unwrap())]]);
        MwGraphSpec::new("line", g, 1, vec![b], maps, open).unwrap()
    }

    #[test]
    fn binary_interval_satisfies_osc_exactly() {
        let spec = line_ifs(&[(0.5, 0.0), (0.5, 0.5)], Some((0.0, 1.0)));
        let r = open_set_condition(&spec, 0.0).unwrap();
        assert_eq!(r.holds, Some(true));
    }

    #[test]
    fn duplicate_maps_overlap() {
        let spec = line_ifs(&[(0.5, 0.25), (0.5, 0.25)], Some((0.0, 1.0)));
        let r = open_set_condition(&spec, 1e-6).unwrap();
        assert_eq!(r.holds, Some(false));
        assert_eq!(r.failures, vec![OscFailure::Overlap { first: EdgeId(0), second: EdgeId(1) }]);
    }

    #[test]
    fn escaping_image_is_reported() {
        // V = (0, 1/2) is not mapped into itself by x/2 + 1/2
        let spec = line_ifs(&[(0.5, 0.0), (0.5, 0.5)], Some((0.0, 0.5)));
        let r = open_set_condition(&spec, 1e-9).unwrap();
        assert_eq!(r.holds, Some(false));
        assert!(matches!(r.failures[0], OscFailure::NotContained { edge: EdgeId(1), uncovered, .. } if (uncovered - 0.25).abs() < 1e-12));
    }

    #[test]
    fn missing_candidate_is_unknown() {
        let spec = line_ifs(&[(0.5, 0.0), (0.5, 0.5)], None);
        assert_eq!(open_set_condition(&spec, 1e-6).unwrap().holds, None);
    }
}
