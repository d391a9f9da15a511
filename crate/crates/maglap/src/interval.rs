//! Closed-interval unions on the real line: merging, complements (gap sets),
//! intersections, and the `κ(λ) = 2 − λ` mirror used by the bipartite
//! refinement.
//!
//! Intervals closer than [`MERGE_TOL`] are merged; this sits below the
//! eigensolver residual, so gaps thinner than that are numerically
//! meaningless anyway. Zero-length intervals (single points) are legitimate
//! members of a union and are reported separately as isolated points.

/// Bands closer than this are merged; gaps shorter than this are suppressed.
pub const MERGE_TOL: f64 = 1e-9;

/// A closed interval `[lo, hi]` with `lo <= hi`; `lo == hi` is a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_point(&self) -> bool {
        self.length() < MERGE_TOL
    }

    pub fn contains(&self, x: f64, tol: f64) -> bool {
        x >= self.lo - tol && x <= self.hi + tol
    }
}

/// Merge intervals into a disjoint sorted union; pieces closer than
/// [`MERGE_TOL`] coalesce.
pub fn merge(intervals: &[Interval]) -> Vec<Interval> {
    let mut sorted: Vec<Interval> = intervals.to_vec();
    sorted.sort_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap().then(a.hi.partial_cmp(&b.hi).unwrap()));
    let mut out: Vec<Interval> = Vec::new();
    for iv in sorted {
        match out.last_mut() {
            Some(last) if iv.lo <= last.hi + MERGE_TOL => {
                last.hi = last.hi.max(iv.hi);
            }
            _ => out.push(iv),
        }
    }
    out
}

/// Maximal open subintervals of `[0, ambient_max]` disjoint from the merged
/// union, returned as closed endpoint pairs. Gaps shorter than [`MERGE_TOL`]
/// are suppressed. Assumes `union` is already merged and sorted.
pub fn gaps(union: &[Interval], ambient_max: f64) -> Vec<Interval> {
    let mut out = Vec::new();
    let mut cursor = 0.0f64;
    for iv in union {
        let lo = iv.lo.max(0.0);
        if lo - cursor >= MERGE_TOL {
            out.push(Interval::new(cursor, lo.min(ambient_max)));
        }
        cursor = cursor.max(iv.hi);
        if cursor >= ambient_max {
            break;
        }
    }
    if ambient_max - cursor >= MERGE_TOL {
        out.push(Interval::new(cursor, ambient_max));
    }
    out
}

/// Intersection of two merged sorted unions.
pub fn intersect(a: &[Interval], b: &[Interval]) -> Vec<Interval> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let lo = a[i].lo.max(b[j].lo);
        let hi = a[i].hi.min(b[j].hi);
        if lo <= hi {
            out.push(Interval::new(lo, hi));
        }
        if a[i].hi < b[j].hi {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

/// Image of a union under `κ(λ) = 2 − λ`, re-sorted.
pub fn kappa_mirror(union: &[Interval]) -> Vec<Interval> {
    let mut out: Vec<Interval> = union
        .iter()
        .map(|iv| Interval::new(2.0 - iv.hi, 2.0 - iv.lo))
        .collect();
    out.reverse();
    out
}

/// Split a union into its positive-length pieces and its isolated points.
pub fn split_points(union: &[Interval]) -> (Vec<Interval>, Vec<f64>) {
    let mut segments = Vec::new();
    let mut points = Vec::new();
    for iv in union {
        if iv.is_point() {
            points.push(0.5 * (iv.lo + iv.hi));
        } else {
            segments.push(*iv);
        }
    }
    (segments, points)
}

/// True when `x` lies in the union within `tol` (points included).
pub fn union_contains(union: &[Interval], x: f64, tol: f64) -> bool {
    union.iter().any(|iv| iv.contains(x, tol))
}
