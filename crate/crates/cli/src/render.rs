//! Point-cloud export: sorted CSV and a point-splat PNG.

use std::fmt::Write as _;
use std::io::Cursor;

use image::{ImageFormat, Rgb, RgbImage};
use mwlab::attractor::InvariantListApprox;
use mwlab::geometry::Vec2;
use mwlab::MwGraphSpec;

const PALETTE: [[u8; 3]; 8] = [
    [31, 119, 180],
    [214, 39, 40],
    [44, 160, 44],
    [148, 103, 189],
    [255, 127, 14],
    [140, 86, 75],
    [227, 119, 194],
    [23, 190, 207],
];

/// `# …` comment line, then `vertex,x[,y]`, then points sorted by vertex
/// and coordinates.
pub fn cloud_csv(spec: &MwGraphSpec, approx: &InvariantListApprox) -> String {
    let g = spec.graph();
    let two = spec.dimension() == 2;
    let mut out = String::new();
    writeln!(
        out,
        "# depth={} paths={} points={} dedup_removed={} error_bound={:e}",
        approx.depth,
        approx.path_count,
        approx.point_count(),
        approx.path_count - approx.point_count() as u128,
        approx.error_bound
    )
    .unwrap();
    out.push_str(if two { "vertex,x,y\n" } else { "vertex,x\n" });
    for cloud in &approx.clouds {
        let mut pts: Vec<Vec2> = cloud.points.clone();
        pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
        let name = g.vertex_name(cloud.vertex);
        for p in pts {
            if two {
                writeln!(out, "{name},{},{}", p.x, p.y).unwrap();
            } else {
                writeln!(out, "{name},{}", p.x).unwrap();
            }
        }
    }
    out
}

/// Square window around the union of seed boxes, widened by 5% per side.
fn window(spec: &MwGraphSpec) -> (Vec2, f64) {
    let (mut lo, mut hi) = (Vec2::repeat(f64::INFINITY), Vec2::repeat(f64::NEG_INFINITY));
    for b in spec.seed_boxes() {
        lo = lo.inf(&b.lo);
        hi = hi.sup(&b.hi);
    }
    let size = hi - lo;
    let side = size.x.max(size.y) * 1.1;
    let center = (lo + hi) / 2.0;
    (center - Vec2::repeat(side / 2.0), side)
}

/// PNG bytes: white background, one colour per vertex, one pixel per point.
pub fn cloud_png(spec: &MwGraphSpec, approx: &InvariantListApprox, px: u32) -> Result<Vec<u8>, image::ImageError> {
    let px = px.max(1);
    let mut img = RgbImage::from_pixel(px, px, Rgb([255, 255, 255]));
    let (origin, side) = window(spec);
    let scale = px as f64 / side;
    for cloud in &approx.clouds {
        let color = Rgb(PALETTE[cloud.vertex.0 % PALETTE.len()]);
        for p in &cloud.points {
            let i = ((p.x - origin.x) * scale).floor();
            let j = ((p.y - origin.y) * scale).floor();
            if i >= 0.0 && j >= 0.0 && i < px as f64 && j < px as f64 {
                img.put_pixel(i as u32, px - 1 - j as u32, color);
            }
        }
    }
    let mut bytes = Cursor::new(Vec::new());
    img.write_to(&mut bytes, ImageFormat::Png)?;
    Ok(bytes.into_inner())
}
