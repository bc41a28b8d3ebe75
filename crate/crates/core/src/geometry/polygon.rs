use super::{AffineContraction, Vec2};
use crate::error::{Error, Result};

fn cross(o: &Vec2, a: &Vec2, b: &Vec2) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

fn signed_area(pts: &[Vec2]) -> f64 {
    let n = pts.len();
    (0..n)
        .map(|i| {
            let (a, b) = (&pts[i], &pts[(i + 1) % n]);
            a.x * b.y - b.x * a.y
        })
        .sum::<f64>()
        / 2.0
}

/// A strictly convex polygon with counterclockwise vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Vec2>,
}

impl ConvexPolygon {
    /// Accepts either orientation; clockwise input is reversed.
    pub fn new(mut vertices: Vec<Vec2>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::DegeneratePolygon(format!("{} vertices", vertices.len())));
        }
        if vertices.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(Error::DegeneratePolygon("non-finite coordinate".into()));
        }
        let area = signed_area(&vertices);
        if area == 0.0 {
            return Err(Error::DegeneratePolygon("zero area".into()));
        }
        if area < 0.0 {
            vertices.reverse();
        }
        let n = vertices.len();
        for i in 0..n {
            let turn = cross(&vertices[i], &vertices[(i + 1) % n], &vertices[(i + 2) % n]);
            if turn <= 0.0 {
                return Err(Error::DegeneratePolygon(format!(
                    "not strictly convex at vertex {}",
                    (i + 1) % n
                )));
            }
        }
        Ok(Self { vertices })
    }

    /// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
    pub fn rectangle(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self> {
        Self::new(vec![Vec2::new(x0, y0), Vec2::new(x1, y0), Vec2::new(x1, y1), Vec2::new(x0, y1)])
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    /// Image under an affine contraction; orientation is restored if the map
    /// reverses it.
    pub fn transform(&self, map: &AffineContraction) -> Result<ConvexPolygon> {
        ConvexPolygon::new(self.vertices.iter().map(|p| map.apply(p)).collect())
    }

    fn edge_normals(&self) -> impl Iterator<Item = Vec2> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| {
            let d = self.vertices[(i + 1) % n] - self.vertices[i];
            Vec2::new(d.y, -d.x)
        })
    }

    fn project(&self, axis: &Vec2) -> (f64, f64) {
        self.vertices.iter().map(|p| p.dot(axis)).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
            (lo.min(x), hi.max(x))
        })
    }
}

/// Interiors of `p` and `q` are disjoint; touching boundaries count as
/// disjoint. Separating-axis test over both polygons' edge normals.
pub fn polygons_disjoint(p: &ConvexPolygon, q: &ConvexPolygon) -> bool {
    polygons_disjoint_within(p, q, 0.0)
}

/// As [`polygons_disjoint`], tolerating overlaps of depth at most `tol`.
pub fn polygons_disjoint_within(p: &ConvexPolygon, q: &ConvexPolygon, tol: f64) -> bool {
    p.edge_normals().chain(q.edge_normals()).any(|axis| {
        let slack = tol * axis.norm();
        let (p0, p1) = p.project(&axis);
        let (q0, q1) = q.project(&axis);
        p1 <= q0 + slack || q1 <= p0 + slack
    })
}

/// Sutherland–Hodgman clip of a convex ring against `{x : n·x ≤ c}`.
fn clip_halfplane(ring: &[Vec2], n: &Vec2, c: f64) -> Vec<Vec2> {
    let mut out = Vec::with_capacity(ring.len() + 1);
    let len = ring.len();
    for i in 0..len {
        let a = &ring[i];
        let b = &ring[(i + 1) % len];
        let da = n.dot(a) - c;
        let db = n.dot(b) - c;
        if da <= 0.0 {
            out.push(*a);
        }
        if (da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0) {
            let t = da / (da - db);
            out.push(a + (b - a) * t);
        }
    }
    out
}

/// Convex pieces of `ring \ cell` (up to boundaries).
fn subtract(ring: &[Vec2], cell: &ConvexPolygon) -> Vec<Vec<Vec2>> {
    let verts = cell.vertices();
    let m = verts.len();
    let mut pieces = Vec::new();
    let mut rest = ring.to_vec();
    for i in 0..m {
        if rest.len() < 3 {
            break;
        }
        let a = verts[i];
        let b = verts[(i + 1) % m];
        // outward normal of a CCW edge
        let n = Vec2::new(b.y - a.y, a.x - b.x);
        let c = n.dot(&a);
        let outside = clip_halfplane(&rest, &(-n), -c);
        if outside.len() >= 3 && signed_area(&outside) > 0.0 {
            pieces.push(outside);
        }
        rest = clip_halfplane(&rest, &n, c);
    }
    pieces
}

/// Area of `p` not covered by the union of `cover`.
pub fn uncovered_area(p: &ConvexPolygon, cover: &[ConvexPolygon]) -> f64 {
    let mut pieces = vec![p.vertices.clone()];
    for cell in cover {
        pieces = pieces.iter().flat_map(|piece| subtract(piece, cell)).collect();
        if pieces.is_empty() {
            return 0.0;
        }
    }
    pieces.iter().map(|piece| signed_area(piece).max(0.0)).sum()
}

/// `p` lies in the union of `cover` up to a residual of `tol · area(p)`.
pub fn polygon_in_union(p: &ConvexPolygon, cover: &[ConvexPolygon], tol: f64) -> bool {
    uncovered_area(p, cover) <= tol * p.area()
}

/// A nonempty open interval of the line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::DegeneratePolygon(format!("interval ({a}, {b})")));
        }
        Ok(Self { lo, hi })
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn transform(&self, map: &AffineContraction) -> Result<Interval> {
        let a = map.apply(&Vec2::new(self.lo, 0.0)).x;
        let b = map.apply(&Vec2::new(self.hi, 0.0)).x;
        Interval::new(a, b)
    }

    pub fn disjoint_within(&self, other: &Interval, tol: f64) -> bool {
        self.hi <= other.lo + tol || other.hi <= self.lo + tol
    }

    /// Length of `self` not covered by the union of `cover`.
    pub fn uncovered_length(&self, cover: &[Interval]) -> f64 {
        let mut pieces = vec![(self.lo, self.hi)];
        for c in cover {
            pieces = pieces
                .into_iter()
                .flat_map(|(a, b)| {
                    let mut out = Vec::with_capacity(2);
                    if c.lo > a {
                        out.push((a, b.min(c.lo)));
                    }
                    if c.hi < b {
                        out.push((a.max(c.hi), b));
                    }
                    out.into_iter().filter(|(x, y)| y > x)
                })
                .collect();
        }
        pieces.iter().map(|(a, b)| b - a).sum()
    }
}
