#![allow(dead_code)]

use mwlab::geometry::{AffineContraction, ConvexPolygon, Interval, SeedBox, Vec2};
use mwlab::{Graph, MwGraphSpec, OpenCell};
use proptest::prelude::*;

pub fn v(x: f64, y: f64) -> Vec2 {
    Vec2::new(x, y)
}

pub fn edges(list: &[(&str, &str, &str)]) -> Vec<(String, String, String)> {
    list.iter().map(|&(e, s, r)| (e.to_string(), s.to_string(), r.to_string())).collect()
}

/// Two unit squares, each map sending a square onto one quarter.
pub fn squares() -> MwGraphSpec {
    let g = Graph::new(
        ["v1", "v2"],
        edges(&[
            ("e1", "v1", "v1"),
            ("e2", "v1", "v1"),
            ("e3", "v1", "v1"),
            ("e4", "v2", "v1"),
            ("e5", "v1", "v2"),
            ("e6", "v2", "v2"),
            ("e7", "v2", "v2"),
            ("e8", "v2", "v2"),
        ]),
    )
    .unwrap();
    let pairs = |p1: (f64, f64), q1: (f64, f64), p2: (f64, f64), q2: (f64, f64), reflect: bool| {
        AffineContraction::similarity_from_pairs(v(p1.0, p1.1), v(q1.0, q1.1), v(p2.0, p2.1), v(q2.0, q2.1), reflect).unwrap()
    };
    let maps = vec![
        pairs((0., 0.), (0., 0.), (1., 1.), (0.5, 0.5), false),
        pairs((0., 0.), (1., 1.), (1., 1.), (0.5, 0.5), false),
        pairs((0., 1.), (0., 1.), (1., 0.), (0.5, 0.5), true),
        pairs((0., 0.), (2., 0.), (1., 1.), (2.5, 0.5), false),
        pairs((3., 0.), (1., 0.), (2., 1.), (0.5, 0.5), false),
        pairs((2., 1.), (2., 1.), (3., 0.), (2.5, 0.5), true),
        pairs((3., 0.), (3., 0.), (2., 1.), (2.5, 0.5), false),
        pairs((3., 1.), (3., 1.), (2., 0.), (2.5, 0.5), false),
    ];
    let boxes = vec![SeedBox { lo: v(0., 0.), hi: v(1., 1.) }, SeedBox { lo: v(2., 0.), hi: v(3., 1.) }];
    let open = vec![
        vec![OpenCell::Polygon(ConvexPolygon::rectangle(0., 0., 1., 1.).unwrap())],
        vec![OpenCell::Polygon(ConvexPolygon::rectangle(2., 0., 3., 1.).unwrap())],
    ];
    MwGraphSpec::new("squares", g, 2, boxes, maps, Some(open)).unwrap()
}

/// One-vertex system on the line with maps `x ↦ a x + t`.
pub fn line_ifs(maps: &[(f64, f64)], seed: (f64, f64), open: Option<(f64, f64)>) -> MwGraphSpec {
    let names: Vec<(String, String, String)> = (1..=maps.len()).map(|i| (format!("e{i}"), "v".into(), "v".into())).collect();
    let g = Graph::new(["v"], names).unwrap();
    let maps = maps.iter().map(|&(a, t)| AffineContraction::line(a, t).unwrap()).collect();
    let open = open.map(|(a, b)| vec![vec![OpenCell::Interval(Interval::new(a, b).unwrap())]]);
    MwGraphSpec::new("line", g, 1, vec![SeedBox { lo: v(seed.0, 0.), hi: v(seed.1, 0.) }], maps, open).unwrap()
}

/// `(ratio, rotation in degrees, fixed point)` for one planar similarity.
pub fn similarity_params() -> impl Strategy<Value = (f64, f64, (f64, f64))> {
    (0.2f64..0.5, -180.0f64..180.0, (-1.0f64..1.0, -1.0f64..1.0))
}

/// One-vertex planar system of similarities with fixed points in `[-1, 1]²`;
/// `[-6, 6]²` always traps the attractor.
pub fn plane_ifs(params: &[(f64, f64, (f64, f64))]) -> MwGraphSpec {
    let names: Vec<(String, String, String)> = (1..=params.len()).map(|i| (format!("e{i}"), "v".into(), "v".into())).collect();
    let g = Graph::new(["v"], names).unwrap();
    let maps = params
        .iter()
        .map(|&(r, rot, (x, y))| AffineContraction::similarity_from_params(r, rot, v(x, y), false).unwrap())
        .collect();
    MwGraphSpec::new("plane", g, 2, vec![SeedBox { lo: v(-6., -6.), hi: v(6., 6.) }], maps, None).unwrap()
}

pub fn plane_ifs_strategy() -> impl Strategy<Value = MwGraphSpec> {
    prop::collection::vec(similarity_params(), 2..=4).prop_map(|p| plane_ifs(&p))
}
