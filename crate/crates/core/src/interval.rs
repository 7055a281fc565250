//! Finite unions of closed intervals and the symmetric-difference metric.

use serde::{Deserialize, Serialize};

/// A closed interval `[start, end]`. Serialized as a two-element array.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Interval {
    pub start: f64,
    pub end: f64,
}

impl Interval {
    pub fn new(start: f64, end: f64) -> Self {
        Self { start, end }
    }

    pub fn length(&self) -> f64 {
        self.end - self.start
    }

    pub fn contains(&self, t: f64) -> bool {
        self.start <= t && t <= self.end
    }
}

impl From<[f64; 2]> for Interval {
    fn from(a: [f64; 2]) -> Self {
        Interval::new(a[0], a[1])
    }
}

impl From<Interval> for [f64; 2] {
    fn from(i: Interval) -> Self {
        [i.start, i.end]
    }
}

/// Normalized (sorted, disjoint, merged) finite union of closed intervals.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalSet {
    spans: Vec<Interval>,
}

const MERGE_REL_TOL: f64 = 1e-12;

impl IntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Normalizes arbitrary spans. Reversed spans are flipped; spans whose gap
    /// is below `1e-12` times the largest endpoint magnitude are merged.
    pub fn from_spans<I: IntoIterator<Item = Interval>>(spans: I) -> Self {
        let mut v: Vec<Interval> = spans
            .into_iter()
            .map(|s| if s.end < s.start { Interval::new(s.end, s.start) } else { s })
            .collect();
        if v.is_empty() {
            return Self::empty();
        }
        v.sort_by(|a, b| a.start.total_cmp(&b.start));
        let scale = v.iter().fold(1.0f64, |m, s| m.max(s.start.abs()).max(s.end.abs()));
        let tol = MERGE_REL_TOL * scale;
        let mut out: Vec<Interval> = Vec::with_capacity(v.len());
        for s in v {
            match out.last_mut() {
                Some(last) if s.start - last.end < tol => last.end = last.end.max(s.end),
                _ => out.push(s),
            }
        }
        Self { spans: out }
    }

    pub fn spans(&self) -> &[Interval] {
        &self.spans
    }

    pub fn is_empty(&self) -> bool {
        self.spans.is_empty()
    }

    /// Lebesgue measure.
    pub fn measure(&self) -> f64 {
        self.spans.iter().map(Interval::length).sum()
    }

    pub fn contains(&self, t: f64) -> bool {
        let k = self.spans.partition_point(|s| s.start <= t);
        k > 0 && self.spans[k - 1].end >= t
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        IntervalSet::from_spans(self.spans.iter().chain(other.spans.iter()).copied())
    }

    pub fn intersection(&self, other: &IntervalSet) -> IntervalSet {
        let (a, b) = (&self.spans, &other.spans);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = a[i].start.max(b[j].start);
            let hi = a[i].end.min(b[j].end);
            if lo <= hi {
                out.push(Interval::new(lo, hi));
            }
            if a[i].end < b[j].end {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet::from_spans(out)
    }

    /// Measure of `(A \ B) ∪ (B \ A)`, computed by a boundary sweep.
    pub fn symmetric_difference_measure(&self, other: &IntervalSet) -> f64 {
        // (time, which set, +1 open / -1 close)
        let mut events: Vec<(f64, usize, i32)> =
            Vec::with_capacity(2 * (self.spans.len() + other.spans.len()));
        for (set, spans) in [(0, &self.spans), (1, &other.spans)] {
            for s in spans.iter() {
                events.push((s.start, set, 1));
                events.push((s.end, set, -1));
            }
        }
        events.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut cover = [0i32; 2];
        let mut total = 0.0;
        let mut prev = f64::NEG_INFINITY;
        for (t, set, delta) in events {
            if (cover[0] > 0) != (cover[1] > 0) {
                total += t - prev;
            }
            cover[set] += delta;
            prev = t;
        }
        total
    }
}

/// `d_Δ(A, B)` for two normalized sets.
pub fn interval_symmetric_difference_measure(a: &IntervalSet, b: &IntervalSet) -> f64 {
    a.symmetric_difference_measure(b)
}

pub fn interval_union(a: &IntervalSet, b: &IntervalSet) -> IntervalSet {
    a.union(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[(f64, f64)]) -> IntervalSet {
        IntervalSet::from_spans(v.iter().map(|&(a, b)| Interval::new(a, b)))
    }

    #[test]
    fn union_cases() {
        assert_eq!(set(&[(0.0, 1.0)]).union(&set(&[(2.0, 3.0)])), set(&[(0.0, 1.0), (2.0, 3.0)]));
        assert_eq!(set(&[(0.0, 2.0)]).union(&set(&[(1.0, 3.0)])), set(&[(0.0, 3.0)]));
        let a = set(&[(0.5, 1.0), (4.0, 7.5)]);
        assert_eq!(a.union(&a), a);
    }

    #[test]
    fn normalizes_touching_and_reversed() {
        let s = set(&[(2.0, 1.0), (1.0, 1.5), (3.0, 4.0)]);
        assert_eq!(s.spans(), &[Interval::new(1.0, 2.0), Interval::new(3.0, 4.0)]);
        assert_eq!(s.measure(), 2.0);
    }

    #[test]
    fn symmetric_difference_basic() {
        let a = set(&[(0.0, 1.0)]);
        assert_eq!(a.symmetric_difference_measure(&a), 0.0);
        assert_eq!(a.symmetric_difference_measure(&set(&[(0.0, 2.0)])), 1.0);
        assert_eq!(a.symmetric_difference_measure(&IntervalSet::empty()), 1.0);
        let b = set(&[(0.5, 3.0), (4.0, 5.0)]);
        assert!((a.symmetric_difference_measure(&b) - (0.5 + 2.0 + 1.0)).abs() < 1e-15);
    }

    #[test]
    fn zero_length_spans_are_measure_zero() {
        let a = set(&[(0.0, 1.0), (2.0, 2.0)]);
        let b = set(&[(0.0, 1.0)]);
        assert_eq!(a.symmetric_difference_measure(&b), 0.0);
    }

    #[test]
    fn intersection_and_contains() {
        let a = set(&[(0.0, 2.0), (3.0, 5.0)]);
        let b = set(&[(1.0, 4.0)]);
        assert_eq!(a.intersection(&b), set(&[(1.0, 2.0), (3.0, 4.0)]));
        assert!(a.contains(2.0) && a.contains(3.0) && !a.contains(2.5));
    }
}
