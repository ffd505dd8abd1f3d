//! Minimizing the upper envelope of lines over a closed interval.
//!
//! This is the two-variable LP `min t s.t. a_k·x + b_k <= t, lo <= x <= hi`.
//! Lines are sorted by slope and reduced to the convex upper hull; the
//! leftmost unconstrained minimizer sits at the breakpoint where hull slopes
//! turn nonnegative and is then clamped to `[lo, hi]`.

use alloc::vec::Vec;
use core::cmp::Ordering;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub slope: f64,
    pub offset: f64,
}

impl Line {
    pub const fn new(slope: f64, offset: f64) -> Self {
        Self { slope, offset }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        self.slope * x + self.offset
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnvelopeError {
    #[error("no lines given")]
    Empty,
    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeMin {
    pub x: f64,
    pub value: f64,
    /// Index of the first input line attaining the envelope at `x`.
    pub active: usize,
}

/// Order for hull construction: slope ascending, offset descending, index
/// ascending. The first line of each slope class dominates the rest.
fn hull_order(lines: &[Line], a: usize, b: usize) -> Ordering {
    let (la, lb) = (lines[a], lines[b]);
    la.slope
        .total_cmp(&lb.slope)
        .then(lb.offset.total_cmp(&la.offset))
        .then(a.cmp(&b))
}

/// `middle` never rises above the envelope of `left` and `right`
/// (slopes strictly increasing left to right).
fn is_redundant(left: Line, middle: Line, right: Line) -> bool {
    // x(left, right) <= x(left, middle)
    (left.offset - right.offset) * (middle.slope - left.slope)
        <= (left.offset - middle.offset) * (right.slope - left.slope)
}

fn crossing(a: Line, b: Line) -> f64 {
    (a.offset - b.offset) / (b.slope - a.slope)
}

/// Indices of the lines on the upper hull, slopes strictly increasing.
pub fn upper_hull(lines: &[Line]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..lines.len()).collect();
    order.sort_unstable_by(|&a, &b| hull_order(lines, a, b));
    let mut hull: Vec<usize> = Vec::with_capacity(order.len());
    for k in order {
        let line = lines[k];
        if let Some(&last) = hull.last() {
            if lines[last].slope == line.slope {
                continue;
            }
        }
        while hull.len() >= 2 {
            let m = hull[hull.len() - 1];
            let l = hull[hull.len() - 2];
            if is_redundant(lines[l], lines[m], line) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }
    hull
}

/// Hull lines that are active somewhere in `[lo, hi]`.
pub fn upper_hull_on(lines: &[Line], lo: f64, hi: f64) -> Vec<usize> {
    let hull = upper_hull(lines);
    let m = hull.len();
    (0..m)
        .filter(|&k| {
            let left = if k > 0 { crossing(lines[hull[k - 1]], lines[hull[k]]) } else { f64::NEG_INFINITY };
            let right = if k + 1 < m { crossing(lines[hull[k]], lines[hull[k + 1]]) } else { f64::INFINITY };
            left <= hi && right >= lo
        })
        .map(|k| hull[k])
        .collect()
}

/// Minimizes `max_k (a_k·x + b_k)` over `x ∈ [lo, hi]`; the smallest
/// minimizing `x` is returned.
pub fn envelope_min_max(lines: &[Line], lo: f64, hi: f64) -> Result<EnvelopeMin, EnvelopeError> {
    if lines.is_empty() {
        return Err(EnvelopeError::Empty);
    }
    if !(lo <= hi) {
        return Err(EnvelopeError::InvalidInterval { lo, hi });
    }
    let hull = upper_hull(lines);
    let first_rising = hull.partition_point(|&k| lines[k].slope < 0.0);
    let unconstrained = if first_rising == 0 {
        f64::NEG_INFINITY
    } else if first_rising == hull.len() {
        f64::INFINITY
    } else {
        crossing(lines[hull[first_rising - 1]], lines[hull[first_rising]])
    };
    let x = unconstrained.clamp(lo, hi);
    let (active, value) = evaluate(lines, x);
    Ok(EnvelopeMin { x, value, active })
}

/// Envelope value at `x` and the first line attaining it.
pub fn evaluate(lines: &[Line], x: f64) -> (usize, f64) {
    let mut best = (0, lines[0].eval(x));
    for (k, line) in lines.iter().enumerate().skip(1) {
        let v = line.eval(x);
        if v > best.1 {
            best = (k, v);
        }
    }
    best
}
