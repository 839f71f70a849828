//! Finite unions of subintervals of `[0,1]`.
//!
//! Endpoints are not tagged open or closed; the sets handled here differ
//! from their closures by finitely many points.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gaps at or below this width are fused by [`IntervalSet::normalize`].
pub const MERGE_TOLERANCE: f64 = 1e-12;

/// Invariants checked by the verification harness.
pub const PROPERTIES: &[&str] = &["intervals/inclusion-exclusion", "intervals/box-count-dominates"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "(f64, f64)", into = "(f64, f64)")]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const UNIT: Interval = Interval { lo: 0.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        !(self.hi > self.lo)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

impl From<(f64, f64)> for Interval {
    fn from((lo, hi): (f64, f64)) -> Self {
        Interval { lo, hi }
    }
}

impl From<Interval> for (f64, f64) {
    fn from(iv: Interval) -> Self {
        (iv.lo, iv.hi)
    }
}

/// Sorted, pairwise disjoint, nonempty subintervals of `[0,1]`.
///
/// Serializes as `[[lo, hi], ...]`; deserialization normalizes.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "Vec<Interval>", into = "Vec<Interval>")]
pub struct IntervalSet {
    intervals: Vec<Interval>,
}

impl From<Vec<Interval>> for IntervalSet {
    fn from(raw: Vec<Interval>) -> Self {
        IntervalSet::normalize(raw)
    }
}

impl From<IntervalSet> for Vec<Interval> {
    fn from(set: IntervalSet) -> Self {
        set.intervals
    }
}

/// Accumulates intervals, merging on the fly while input arrives sorted.
#[derive(Debug, Default)]
pub struct IntervalSetBuilder {
    intervals: Vec<Interval>,
    sorted: bool,
}

impl IntervalSetBuilder {
    pub fn new() -> Self {
        IntervalSetBuilder {
            intervals: Vec::new(),
            sorted: true,
        }
    }

    pub fn push(&mut self, lo: f64, hi: f64) {
        let lo = lo.max(0.0);
        let hi = hi.min(1.0);
        if !(hi > lo) {
            return;
        }
        if self.sorted {
            if let Some(last) = self.intervals.last_mut() {
                if lo < last.lo {
                    self.sorted = false;
                } else if lo <= last.hi + MERGE_TOLERANCE {
                    last.hi = last.hi.max(hi);
                    return;
                }
            }
        }
        self.intervals.push(Interval { lo, hi });
    }

    pub fn finish(self) -> IntervalSet {
        if self.sorted {
            IntervalSet {
                intervals: self.intervals,
            }
        } else {
            IntervalSet::normalize(self.intervals)
        }
    }
}

impl Extend<Interval> for IntervalSetBuilder {
    fn extend<I: IntoIterator<Item = Interval>>(&mut self, iter: I) {
        for iv in iter {
            self.push(iv.lo, iv.hi);
        }
    }
}

impl FromIterator<Interval> for IntervalSet {
    fn from_iter<I: IntoIterator<Item = Interval>>(iter: I) -> Self {
        let mut builder = IntervalSetBuilder::new();
        builder.extend(iter);
        builder.finish()
    }
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet::default()
    }

    pub fn unit() -> Self {
        IntervalSet {
            intervals: vec![Interval::UNIT],
        }
    }

    /// Clips to `[0,1]`, drops empty pieces, sorts and fuses pieces whose gap
    /// is at most [`MERGE_TOLERANCE`].
    pub fn normalize<I: IntoIterator<Item = Interval>>(raw: I) -> Self {
        let mut pieces: Vec<Interval> = raw
            .into_iter()
            .map(|iv| Interval::new(iv.lo.max(0.0), iv.hi.min(1.0)))
            .filter(|iv| iv.hi > iv.lo)
            .collect();
        pieces.sort_by(|x, y| x.lo.total_cmp(&y.lo));
        let mut out: Vec<Interval> = Vec::with_capacity(pieces.len());
        for iv in pieces {
            match out.last_mut() {
                Some(last) if iv.lo <= last.hi + MERGE_TOLERANCE => last.hi = last.hi.max(iv.hi),
                _ => out.push(iv),
            }
        }
        IntervalSet { intervals: out }
    }

    pub fn from_pairs(raw: &[(f64, f64)]) -> Self {
        Self::normalize(raw.iter().map(|&p| Interval::from(p)))
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn to_pairs(&self) -> Vec<(f64, f64)> {
        self.intervals.iter().map(|&iv| iv.into()).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn component_count(&self) -> usize {
        self.intervals.len()
    }

    /// Closed-interval containment.
    pub fn contains(&self, x: f64) -> bool {
        let idx = self.intervals.partition_point(|iv| iv.hi < x);
        self.intervals.get(idx).is_some_and(|iv| iv.lo <= x)
    }

    /// Distance from `x` to the nearest endpoint of any component.
    pub fn distance_to_boundary(&self, x: f64) -> f64 {
        let idx = self.intervals.partition_point(|iv| iv.hi < x);
        let mut best = f64::INFINITY;
        for iv in self.intervals[idx.saturating_sub(1)..].iter().take(3) {
            best = best.min((x - iv.lo).abs()).min((x - iv.hi).abs());
        }
        best
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let (xs, ys) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        let mut builder = IntervalSetBuilder::new();
        while i < xs.len() && j < ys.len() {
            let lo = xs[i].lo.max(ys[j].lo);
            let hi = xs[i].hi.min(ys[j].hi);
            builder.push(lo, hi);
            if xs[i].hi < ys[j].hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        builder.finish()
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        let mut merged = Vec::with_capacity(self.intervals.len() + other.intervals.len());
        let (xs, ys) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        while i < xs.len() || j < ys.len() {
            if j == ys.len() || (i < xs.len() && xs[i].lo <= ys[j].lo) {
                merged.push(xs[i]);
                i += 1;
            } else {
                merged.push(ys[j]);
                j += 1;
            }
        }
        merged.into_iter().collect()
    }

    /// `self \ other`.
    pub fn difference(&self, other: &IntervalSet) -> IntervalSet {
        let ys = &other.intervals;
        let mut builder = IntervalSetBuilder::new();
        let mut j = 0;
        for x in &self.intervals {
            let mut lo = x.lo;
            while j < ys.len() && ys[j].hi <= lo {
                j += 1;
            }
            let mut k = j;
            while k < ys.len() && ys[k].lo < x.hi {
                builder.push(lo, ys[k].lo);
                lo = lo.max(ys[k].hi);
                k += 1;
            }
            builder.push(lo, x.hi);
        }
        builder.finish()
    }

    pub fn symmetric_difference(&self, other: &IntervalSet) -> IntervalSet {
        self.difference(other).union(&other.difference(self))
    }

    /// Lebesgue measure.
    pub fn lebesgue(&self) -> f64 {
        self.intervals.iter().map(Interval::len).sum()
    }

    /// Whether `self ⊆ other` up to a leftover of measure at most `tol`.
    pub fn is_subset_of(&self, other: &IntervalSet, tol: f64) -> bool {
        self.difference(other).lebesgue() <= tol
    }

    /// Upper bound on `H^s_ρ` (any `ρ > mesh/2`) from the canonical cover:
    /// each component is split into `⌈len/mesh⌉` pieces of radius `mesh/2`.
    pub fn premeasure_upper(&self, s: f64, mesh: f64) -> Result<f64> {
        if !(s > 0.0) || !(mesh > 0.0) {
            return Err(Error::Domain(format!(
                "premeasure needs s > 0 and mesh > 0, got s = {s}, mesh = {mesh}"
            )));
        }
        Ok(self.canonical_pieces(mesh) as f64 * (mesh / 2.0).powf(s))
    }

    /// `Σ ⌈len_i / mesh⌉` over the components.
    pub fn canonical_pieces(&self, mesh: f64) -> u64 {
        self.intervals.iter().map(|iv| pieces_for(iv.len(), mesh)).sum()
    }

    /// The canonical equal-mesh cover behind [`IntervalSet::premeasure_upper`].
    pub fn canonical_cover(&self, mesh: f64, s: f64) -> Result<Cover> {
        if !(mesh > 0.0) {
            return Err(Error::Domain(format!("mesh must be positive, got {mesh}")));
        }
        let radius = mesh / 2.0;
        let mut pieces = Vec::new();
        for iv in &self.intervals {
            let k = pieces_for(iv.len(), mesh);
            for i in 0..k {
                let start = (iv.lo + i as f64 * mesh).min(iv.hi - mesh).max(iv.lo);
                pieces.push(CoverPiece {
                    center: start + radius,
                    radius,
                });
            }
        }
        Ok(Cover {
            pieces,
            mesh,
            s_value: s,
        })
    }

    /// Number of dyadic boxes `[j·scale, (j+1)·scale]` meeting the set in more
    /// than a boundary point.
    pub fn box_count(&self, scale: f64) -> Result<u64> {
        check_dyadic(scale)?;
        let boxes = (1.0 / scale).round() as i64;
        let mut count = 0u64;
        let mut last: i64 = -1;
        for iv in &self.intervals {
            let first = ((iv.lo / scale).floor() as i64).max(last + 1);
            let end = ((iv.hi / scale).ceil() as i64 - 1).min(boxes - 1);
            if end >= first {
                count += (end - first + 1) as u64;
                last = end;
            }
        }
        Ok(count)
    }
}

fn pieces_for(len: f64, mesh: f64) -> u64 {
    (((len - MERGE_TOLERANCE) / mesh).ceil() as u64).max(1)
}

pub(crate) fn check_dyadic(scale: f64) -> Result<()> {
    let k = -scale.log2();
    if !(scale > 0.0 && scale <= 1.0) || k.fract() != 0.0 {
        return Err(Error::Domain(format!(
            "box scale must be 2^-k for integer k ≥ 0, got {scale}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverPiece {
    pub center: f64,
    pub radius: f64,
}

/// A finite cover by balls of radius at most `mesh / 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cover {
    pub pieces: Vec<CoverPiece>,
    pub mesh: f64,
    pub s_value: f64,
}

impl Cover {
    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }

    /// `Σ r_i^s`.
    pub fn premeasure(&self) -> f64 {
        self.pieces.iter().map(|p| p.radius.powf(self.s_value)).sum()
    }

    pub fn as_set(&self) -> IntervalSet {
        IntervalSet::normalize(
            self.pieces
                .iter()
                .map(|p| Interval::new(p.center - p.radius, p.center + p.radius)),
        )
    }

    /// Whether the union of the pieces contains `set` up to merge tolerance.
    pub fn covers(&self, set: &IntervalSet) -> bool {
        set.is_subset_of(&self.as_set(), MERGE_TOLERANCE)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(raw: &[(f64, f64)]) -> IntervalSet {
        IntervalSet::from_pairs(raw)
    }

    #[test]
    fn normalize_examples() {
        assert!(set(&[(0.5, 0.2)]).is_empty());
        assert_eq!(set(&[(0.0, 0.3), (0.2, 0.5)]).to_pairs(), vec![(0.0, 0.5)]);
        assert_eq!(
            set(&[(0.0, 0.1), (0.1 + 1e-15, 0.2)]).to_pairs(),
            vec![(0.0, 0.2)]
        );
        assert_eq!(set(&[(-1.0, 0.3), (0.9, 2.0)]).to_pairs(), vec![(0.0, 0.3), (0.9, 1.0)]);
    }

    #[test]
    fn set_operation_examples() {
        let half = set(&[(0.0, 0.5)]);
        assert!(half.intersect(&IntervalSet::empty()).is_empty());
        assert_eq!(half.intersect(&set(&[(0.25, 1.0)])).to_pairs(), vec![(0.25, 0.5)]);
        assert_eq!(half.intersect(&IntervalSet::unit()), half);
        assert!(half.symmetric_difference(&half).is_empty());
        assert_eq!(half.union(&set(&[(0.5, 1.0)])).to_pairs(), vec![(0.0, 1.0)]);
        assert_eq!(
            IntervalSet::unit().difference(&set(&[(0.4, 0.6)])).to_pairs(),
            vec![(0.0, 0.4), (0.6, 1.0)]
        );
    }

    #[test]
    fn lebesgue_examples() {
        assert_eq!(IntervalSet::empty().lebesgue(), 0.0);
        let d = 0.125;
        assert_eq!(set(&[(0.0, d), (1.0 - d, 1.0)]).lebesgue(), 2.0 * d);
        assert!((set(&[(0.1, 0.2), (0.5, 0.9)]).lebesgue() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn premeasure_examples() {
        assert_eq!(IntervalSet::empty().premeasure_upper(0.4, 0.3).unwrap(), 0.0);
        let unit = IntervalSet::unit().premeasure_upper(1.0, 0.1).unwrap();
        assert!((unit - 0.5).abs() < 1e-12);
        let quarter = set(&[(0.0, 0.25)]).premeasure_upper(0.5, 0.25).unwrap();
        assert!((quarter - 0.125f64.sqrt()).abs() < 1e-12);
        assert!(IntervalSet::unit().premeasure_upper(0.0, 0.1).is_err());
        assert!(IntervalSet::unit().premeasure_upper(0.5, 0.0).is_err());
    }

    #[test]
    fn box_count_examples() {
        assert_eq!(IntervalSet::unit().box_count(0.125).unwrap(), 8);
        assert_eq!(IntervalSet::empty().box_count(0.25).unwrap(), 0);
        assert_eq!(set(&[(0.1, 0.3)]).box_count(0.25).unwrap(), 2);
        assert_eq!(set(&[(0.1, 0.2), (0.22, 0.3)]).box_count(0.25).unwrap(), 2);
        assert!(IntervalSet::unit().box_count(0.3).is_err());
    }

    #[test]
    fn canonical_cover_contains_set() {
        let x = set(&[(0.03, 0.31), (0.5, 0.52), (0.9, 1.0)]);
        let cover = x.canonical_cover(0.07, 0.5).unwrap();
        assert!(cover.covers(&x));
        assert!(cover.pieces.iter().all(|p| p.radius <= cover.mesh / 2.0));
        let direct = x.premeasure_upper(0.5, 0.07).unwrap();
        assert!((cover.premeasure() - direct).abs() < 1e-12);
    }

    #[test]
    fn premeasure_converges_to_half_measure() {
        let x = set(&[(0.013, 0.2), (0.333, 0.337), (0.71, 0.999)]);
        let leb = x.lebesgue();
        for k in 1..=20 {
            let mesh = 2f64.powi(-k);
            // radius convention: Σ r = (pieces · mesh) / 2
            let pre = x.premeasure_upper(1.0, mesh).unwrap();
            assert!(2.0 * pre >= leb - 1e-12);
            assert!(2.0 * pre - leb <= 2.0 * mesh * x.component_count() as f64 + 1e-12);
        }
    }

    fn arb_set() -> impl Strategy<Value = IntervalSet> {
        prop::collection::vec((0.0f64..1.0, 0.0f64..0.3), 0..12).prop_map(|raw| {
            IntervalSet::normalize(raw.into_iter().map(|(lo, w)| Interval::new(lo, lo + w)))
        })
    }

    proptest! {
        #[test]
        fn normalize_idempotent(x in arb_set()) {
            let again = IntervalSet::normalize(x.intervals().iter().copied());
            prop_assert_eq!(again, x);
        }

        #[test]
        fn inclusion_exclusion(x in arb_set(), y in arb_set()) {
            let lhs = x.union(&y).lebesgue() + x.intersect(&y).lebesgue();
            let rhs = x.lebesgue() + y.lebesgue();
            prop_assert!((lhs - rhs).abs() < 1e-12);
        }

        #[test]
        fn difference_partitions(x in arb_set(), y in arb_set()) {
            let parts = x.difference(&y).lebesgue() + x.intersect(&y).lebesgue();
            prop_assert!((parts - x.lebesgue()).abs() < 1e-12);
            prop_assert!(x.difference(&y).intersect(&y).lebesgue() < 1e-12);
        }

        #[test]
        fn box_count_dominates_measure(x in arb_set(), k in 0i32..14) {
            let scale = 2f64.powi(-k);
            prop_assert!(x.box_count(scale).unwrap() as f64 * scale >= x.lebesgue() - 1e-12);
        }

        #[test]
        fn premeasure_terms_shrink_with_s(mesh in 1e-4f64..0.99, s1 in 0.01f64..1.0, s2 in 0.01f64..1.0) {
            let (lo, hi) = if s1 < s2 { (s1, s2) } else { (s2, s1) };
            let r = mesh / 2.0;
            prop_assert!(r.powf(lo) >= r.powf(hi));
        }
    }
}
