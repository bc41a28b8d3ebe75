//! Hermite and Smith normal forms over the integers.
//!
//! Both reductions use elementary unimodular operations only and pick the
//! smallest nonzero entry as pivot, which keeps intermediate entries small
//! on the matrix sizes we care about (a few hundred rows at most).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// Row-style Hermite normal form: `u * m == h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermiteDecomposition {
    pub h: IntMatrix,
    pub u: IntMatrix,
}

impl HermiteDecomposition {
    /// Number of nonzero rows of `h`, i.e. the rank of the input.
    pub fn rank(&self) -> usize {
        (0..self.h.rows()).take_while(|&i| self.h.row(i).iter().any(|x| !x.is_zero())).count()
    }
}

/// `u * m * v == d` with `d` diagonal and `d[0] | d[1] | …`, all nonnegative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.d.diagonal()
    }

    pub fn rank(&self) -> usize {
        self.d.diagonal().iter().take_while(|x| !x.is_zero()).count()
    }
}

fn min_abs_in_column(m: &IntMatrix, col: usize, from_row: usize) -> Option<usize> {
    (from_row..m.rows())
        .filter(|&i| !m.get(i, col).is_zero())
        .min_by(|&a, &b| m.get(a, col).abs().cmp(&m.get(b, col).abs()))
}

/// Upper echelon form with positive pivots and entries above each pivot
/// reduced into `[0, pivot)`.
pub fn hermite_normal_form(m: &IntMatrix) -> HermiteDecomposition {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut r = 0;
    for c in 0..m.cols() {
        if r == m.rows() {
            break;
        }
        let Some(first) = min_abs_in_column(&h, c, r) else {
            continue;
        };
        h.swap_rows(r, first);
        u.swap_rows(r, first);
        loop {
            let mut done = true;
            for i in r + 1..h.rows() {
                if h.get(i, c).is_zero() {
                    continue;
                }
                let q = -h.get(i, c).div_floor(h.get(r, c));
                h.add_row_multiple(i, r, &q);
                u.add_row_multiple(i, r, &q);
                if !h.get(i, c).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
            let p = min_abs_in_column(&h, c, r).expect("column still has a nonzero entry");
            h.swap_rows(r, p);
            u.swap_rows(r, p);
        }
        if h.get(r, c).is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = -h.get(i, c).div_floor(h.get(r, c));
            h.add_row_multiple(i, r, &q);
            u.add_row_multiple(i, r, &q);
        }
        r += 1;
    }
    HermiteDecomposition { h, u }
}

fn min_abs_in_block(m: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in t..m.rows() {
        for j in t..m.cols() {
            let x = m.get(i, j);
            if x.is_zero() {
                continue;
            }
            let a = x.abs();
            if best.as_ref().is_none_or(|(_, b)| a < *b) {
                best = Some(((i, j), a));
            }
        }
    }
    best.map(|(pos, _)| pos)
}

/// Pivot candidate among column `t` (rows ≥ t) and row `t` (cols ≥ t).
fn min_abs_in_cross(m: &IntMatrix, t: usize) -> (usize, usize) {
    let col = (t..m.rows()).map(|i| (i, t));
    let row = (t + 1..m.cols()).map(|j| (t, j));
    col.chain(row)
        .filter(|&(i, j)| !m.get(i, j).is_zero())
        .min_by(|&(a, b), &(c, d)| m.get(a, b).abs().cmp(&m.get(c, d).abs()))
        .expect("cross has a nonzero entry")
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let mut d = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut v = IntMatrix::identity(m.cols());
    let steps = m.rows().min(m.cols());

    for t in 0..steps {
        let Some((pi, pj)) = min_abs_in_block(&d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..d.rows() {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = -d.get(i, t).div_floor(d.get(t, t));
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= d.get(i, t).is_zero();
            }
            for j in t + 1..d.cols() {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = -d.get(t, j).div_floor(d.get(t, t));
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= d.get(t, j).is_zero();
            }
            if !clean {
                let (i, j) = min_abs_in_cross(&d, t);
                d.swap_rows(t, i);
                u.swap_rows(t, i);
                d.swap_cols(t, j);
                v.swap_cols(t, j);
                continue;
            }
            // Row and column are clear; enforce divisibility of the rest.
            let pivot = d.get(t, t).clone();
            let offender = (t + 1..d.rows()).find(|&i| {
                (t + 1..d.cols()).any(|j| !d.get(i, j).is_multiple_of(&pivot))
            });
            match offender {
                Some(i) => {
                    let one = BigInt::from(1);
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithDecomposition { u, d, v }
}
