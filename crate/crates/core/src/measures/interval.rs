use serde::{Deserialize, Serialize};

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }
}

/// Finite union of disjoint closed intervals, kept sorted with touching
/// intervals merged.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "Vec<Interval>", into = "Vec<Interval>")]
pub struct IntervalUnion {
    parts: Vec<Interval>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        IntervalUnion { parts: Vec::new() }
    }

    pub fn interval(lo: f64, hi: f64) -> Self {
        Self::new([Interval::new(lo, hi)])
    }

    /// Normalizes arbitrary intervals: drops empty ones, sorts and merges.
    pub fn new(parts: impl IntoIterator<Item = Interval>) -> Self {
        let mut v: Vec<Interval> = parts.into_iter().filter(|p| p.lo <= p.hi).collect();
        v.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        let mut merged: Vec<Interval> = Vec::with_capacity(v.len());
        for p in v {
            match merged.last_mut() {
                Some(last) if p.lo <= last.hi => last.hi = last.hi.max(p.hi),
                _ => merged.push(p),
            }
        }
        IntervalUnion { parts: merged }
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn total_length(&self) -> f64 {
        self.parts.iter().map(Interval::width).sum()
    }

    pub fn hull(&self) -> Option<Interval> {
        Some(Interval::new(self.parts.first()?.lo, self.parts.last()?.hi))
    }

    pub fn contains(&self, x: f64) -> bool {
        let i = self.parts.partition_point(|p| p.hi < x);
        self.parts.get(i).is_some_and(|p| p.contains(x))
    }

    /// `other ⊆ self`.
    pub fn is_superset_of(&self, other: &IntervalUnion) -> bool {
        other.parts.iter().all(|q| self.parts.iter().any(|p| p.contains_interval(q)))
    }

    pub fn union(&self, other: &IntervalUnion) -> IntervalUnion {
        Self::new(self.parts.iter().chain(&other.parts).copied())
    }

    pub fn intersect(&self, other: &IntervalUnion) -> IntervalUnion {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.parts.len() && j < other.parts.len() {
            let (a, b) = (self.parts[i], other.parts[j]);
            if let Some(c) = a.intersect(&b) {
                out.push(c);
            }
            if a.hi < b.hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::new(out)
    }

    pub fn intersect_interval(&self, iv: Interval) -> IntervalUnion {
        self.intersect(&IntervalUnion::new([iv]))
    }
}

impl From<Vec<Interval>> for IntervalUnion {
    fn from(v: Vec<Interval>) -> Self {
        IntervalUnion::new(v)
    }
}

impl From<IntervalUnion> for Vec<Interval> {
    fn from(u: IntervalUnion) -> Self {
        u.parts
    }
}

impl From<Interval> for IntervalUnion {
    fn from(iv: Interval) -> Self {
        IntervalUnion::new([iv])
    }
}
