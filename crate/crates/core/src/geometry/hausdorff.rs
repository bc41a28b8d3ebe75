use rayon::prelude::*;

use super::Vec2;
use crate::error::{Error, Result};

/// Uniform bucket grid for exact nearest-neighbour queries.
pub struct PointGrid<'a> {
    points: &'a [Vec2],
    origin: Vec2,
    cell: (f64, f64),
    dims: (i64, i64),
    starts: Vec<usize>,
    order: Vec<usize>,
}

impl<'a> PointGrid<'a> {
    /// Panics on an empty point set.
    pub fn new(points: &'a [Vec2]) -> Self {
        assert!(!points.is_empty(), "grid over an empty point set");
        let (mut lo, mut hi) = (points[0], points[0]);
        for p in points {
            lo = lo.inf(p);
            hi = hi.sup(p);
        }
        let (w, h) = (hi.x - lo.x, hi.y - lo.y);
        let target = (points.len() / 2).max(1) as f64;
        let (nx, ny) = match (w > 0.0, h > 0.0) {
            (true, true) => {
                let nx = (target * w / h).sqrt().ceil().clamp(1.0, target);
                (nx, (target / nx).ceil().max(1.0))
            }
            (true, false) => (target, 1.0),
            (false, true) => (1.0, target),
            (false, false) => (1.0, 1.0),
        };
        let cell = (if w > 0.0 { w / nx } else { 1.0 }, if h > 0.0 { h / ny } else { 1.0 });
        let dims = (nx as i64, ny as i64);
        let mut grid = PointGrid { points, origin: lo, cell, dims, starts: Vec::new(), order: Vec::new() };
        let keys: Vec<usize> = points.iter().map(|p| grid.flat(grid.cell_of(p))).collect();
        let ncells = (dims.0 * dims.1) as usize;
        let mut counts = vec![0usize; ncells + 1];
        for &k in &keys {
            counts[k + 1] += 1;
        }
        for i in 0..ncells {
            counts[i + 1] += counts[i];
        }
        let mut fill = counts.clone();
        let mut order = vec![0usize; points.len()];
        for (i, &k) in keys.iter().enumerate() {
            order[fill[k]] = i;
            fill[k] += 1;
        }
        grid.starts = counts;
        grid.order = order;
        grid
    }

    fn raw_cell(&self, p: &Vec2) -> (i64, i64) {
        (
            ((p.x - self.origin.x) / self.cell.0).floor() as i64,
            ((p.y - self.origin.y) / self.cell.1).floor() as i64,
        )
    }

    fn cell_of(&self, p: &Vec2) -> (i64, i64) {
        let (i, j) = self.raw_cell(p);
        (i.clamp(0, self.dims.0 - 1), j.clamp(0, self.dims.1 - 1))
    }

    fn flat(&self, (i, j): (i64, i64)) -> usize {
        (j * self.dims.0 + i) as usize
    }

    fn scan_cell(&self, c: (i64, i64), q: &Vec2, best: &mut f64) {
        if c.0 < 0 || c.1 < 0 || c.0 >= self.dims.0 || c.1 >= self.dims.1 {
            return;
        }
        let k = self.flat(c);
        for &idx in &self.order[self.starts[k]..self.starts[k + 1]] {
            let d = (self.points[idx] - q).norm_squared();
            if d < *best {
                *best = d;
            }
        }
    }

    /// Distance from `q` to the nearest stored point.
    pub fn nearest_distance(&self, q: &Vec2) -> f64 {
        let (qi, qj) = self.raw_cell(q);
        let gap_x = if qi < 0 { -qi } else { (qi - self.dims.0 + 1).max(0) };
        let gap_y = if qj < 0 { -qj } else { (qj - self.dims.1 + 1).max(0) };
        let step = self.cell.0.min(self.cell.1);
        let max_ring = gap_x.max(gap_y) + self.dims.0.max(self.dims.1);
        let mut best = f64::INFINITY;
        let mut r = gap_x.max(gap_y);
        loop {
            if r == 0 {
                self.scan_cell((qi, qj), q, &mut best);
            } else {
                for i in qi - r..=qi + r {
                    self.scan_cell((i, qj - r), q, &mut best);
                    self.scan_cell((i, qj + r), q, &mut best);
                }
                for j in qj - r + 1..qj + r {
                    self.scan_cell((qi - r, j), q, &mut best);
                    self.scan_cell((qi + r, j), q, &mut best);
                }
            }
            // Cells beyond ring r are at least r·step away from q.
            let bound = r as f64 * step;
            if best.is_finite() && best <= bound * bound || r >= max_ring {
                return best.sqrt();
            }
            r += 1;
        }
    }
}

/// `sup_{a∈A} inf_{b∈B} |a − b|`.
pub fn directed_hausdorff(a: &[Vec2], b: &[Vec2]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let grid = PointGrid::new(b);
    Ok(a.par_iter().map(|p| grid.nearest_distance(p)).reduce(|| 0.0, f64::max))
}

/// Symmetric Hausdorff distance between two finite point sets.
pub fn hausdorff_distance(a: &[Vec2], b: &[Vec2]) -> Result<f64> {
    Ok(directed_hausdorff(a, b)?.max(directed_hausdorff(b, a)?))
}
