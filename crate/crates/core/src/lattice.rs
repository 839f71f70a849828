//! Lattice counting `N(η, ξ)`, exponential sums, discrepancy and the
//! Erdős–Turán inequality.

use std::f64::consts::{PI, TAU};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::approx::FracParams;
use crate::error::{Error, Result};

/// Invariants checked by the verification harness.
pub const PROPERTIES: &[&str] = &[
    "lattice/oracle-equivalence",
    "lattice/large-regime-bound",
    "lattice/shift-invariance",
    "lattice/real-count-bound",
    "lattice/integer-count-bound",
    "lattice/erdos-turan",
    "lattice/erdos-turan-proof-chain",
    "lattice/integer-orthogonality",
];

/// Above this many points exponential sums use pairwise summation.
pub const PAIRWISE_THRESHOLD: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeQuery {
    pub params: FracParams,
    pub eta: f64,
    pub xi: f64,
}

impl LatticeQuery {
    pub fn new(params: FracParams, eta: f64, xi: f64) -> Result<Self> {
        params.validate()?;
        if !(eta > 0.0 && eta < 1.0 && xi > 0.0 && xi < 1.0) {
            return Err(Error::Domain(format!(
                "lattice query needs η, ξ ∈ (0,1), got η = {eta}, ξ = {xi}"
            )));
        }
        Ok(LatticeQuery { params, eta, xi })
    }

    /// `θ = η/a + ξ/b`.
    pub fn theta(&self) -> f64 {
        self.eta / self.params.a + self.xi / self.params.b
    }

    /// `⌊c⌋ ≤ p ≤ ⌈a+c⌉`.
    pub fn p_range(&self) -> (f64, f64) {
        let p = &self.params;
        (p.c.floor(), (p.a + p.c).ceil())
    }

    /// `⌊d⌋ ≤ q ≤ ⌈b+d⌉`.
    pub fn q_range(&self) -> (f64, f64) {
        let p = &self.params;
        (p.d.floor(), (p.b + p.d).ceil())
    }

    /// Whether `(p, q)` is counted: `|(p−c)/a − (q−d)/b| < θ`.
    pub fn is_close(&self, p: f64, q: f64) -> bool {
        let fp = &self.params;
        ((p - fp.c) / fp.a - (q - fp.d) / fp.b).abs() < self.theta()
    }

    /// Whether the query falls in the large regime `η + (a/b)ξ > 1/2`.
    pub fn is_large_regime(&self) -> bool {
        self.eta + self.params.a / self.params.b * self.xi > 0.5
    }
}

/// `N(η, ξ)` in `O(b)`: for each `q` only the `p` within `aθ` of
/// `c + a(q−d)/b` are tested.
pub fn count_n(query: &LatticeQuery) -> u64 {
    let fp = &query.params;
    let spread = fp.a * query.theta();
    let (p_min, p_max) = query.p_range();
    let (q_min, q_max) = query.q_range();
    let mut count = 0u64;
    let mut q = q_min;
    while q <= q_max {
        let center = fp.c + fp.a * (q - fp.d) / fp.b;
        let mut p = (center - spread).floor().max(p_min);
        let hi = (center + spread).ceil().min(p_max);
        while p <= hi {
            if query.is_close(p, q) {
                count += 1;
            }
            p += 1.0;
        }
        q += 1.0;
    }
    count
}

/// `N(η, ξ) / ((bη + a)·L)`.
pub fn bound_ratio_real(query: &LatticeQuery) -> f64 {
    let fp = &query.params;
    count_n(query) as f64 / ((fp.b * query.eta + fp.a) * fp.l())
}

/// `N(η, ξ)` and `N(η, ξ) / (bη + gcd(a, b))` for natural `a`, `b`.
pub fn count_n_integer_bound(query: &LatticeQuery) -> Result<(u64, f64)> {
    let fp = &query.params;
    let integral = |x: f64| x.fract() == 0.0 && x >= 1.0 && x < 2f64.powi(53);
    if !(integral(fp.a) && integral(fp.b)) {
        return Err(Error::Domain(format!(
            "gcd bound needs natural a, b, got a = {}, b = {}",
            fp.a, fp.b
        )));
    }
    let g = (fp.a as u64).gcd(&(fp.b as u64));
    let count = count_n(query);
    Ok((count, count as f64 / (fp.b * query.eta + g as f64)))
}

/// A finite multiset of points on `𝕋 = ℝ/ℤ`, stored reduced to `[0,1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplePoints {
    points: Vec<f64>,
}

impl SamplePoints {
    pub fn new(raw: impl IntoIterator<Item = f64>) -> Result<Self> {
        let points: Vec<f64> = raw.into_iter().map(reduce_mod1).collect();
        if points.is_empty() {
            return Err(Error::Domain("a point set needs at least one point".into()));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::Domain("points must be finite".into()));
        }
        Ok(SamplePoints { points })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// `Q`.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn reduce_mod1(x: f64) -> f64 {
    let r = x.rem_euclid(1.0);
    // rem_euclid can round up to exactly 1.0 for tiny negative inputs
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// `u_q = (a/b)(q + ⌊d⌋ − 1) − ad/b + c` for `q = 1..Q`,
/// `Q = ⌈b + d⌉ − ⌊d⌋ + 1`.
pub fn build_uq(params: &FracParams) -> Result<SamplePoints> {
    params.validate()?;
    let FracParams { a, b, c, d } = *params;
    let q_count = ((b + d).ceil() - d.floor() + 1.0) as u64;
    let shift = d.floor() - 1.0;
    SamplePoints::new((1..=q_count).map(|q| a / b * (q as f64 + shift) - a * d / b + c))
}

fn pairwise_sum(cos: &mut [f64], sin: &mut [f64]) -> (f64, f64) {
    if cos.len() <= 64 {
        return (cos.iter().sum(), sin.iter().sum());
    }
    let mid = cos.len() / 2;
    let (cl, cr) = cos.split_at_mut(mid);
    let (sl, sr) = sin.split_at_mut(mid);
    let (a, b) = pairwise_sum(cl, sl);
    let (c, d) = pairwise_sum(cr, sr);
    (a + c, b + d)
}

/// `Σ_{u ∈ 𝒰} e(ku)` as `(re, im)`.
pub fn exp_sum_complex(points: &SamplePoints, k: i64) -> (f64, f64) {
    let phase = |u: f64| TAU * reduce_mod1(k as f64 * u);
    if points.len() > PAIRWISE_THRESHOLD {
        let (mut cos, mut sin): (Vec<f64>, Vec<f64>) =
            points.points.iter().map(|&u| {
                let t = phase(u);
                (t.cos(), t.sin())
            })
            .unzip();
        pairwise_sum(&mut cos, &mut sin)
    } else {
        points.points.iter().fold((0.0, 0.0), |(re, im), &u| {
            let t = phase(u);
            (re + t.cos(), im + t.sin())
        })
    }
}

/// `|Σ_{u ∈ 𝒰} e(ku)|`.
pub fn exp_sum(points: &SamplePoints, k: i64) -> f64 {
    let (re, im) = exp_sum_complex(points, k);
    re.hypot(im)
}

/// `Σ_{q=1}^{b} e(kaq/b)` with phases reduced in integer arithmetic.
pub fn exp_sum_integer(a: u64, b: u64, k: u64) -> (f64, f64) {
    assert!(b > 0, "modulus must be positive");
    let step = ((k as u128 * a as u128) % b as u128) as u64;
    let mut residue = 0u64;
    let (mut re, mut im) = (0.0, 0.0);
    for _ in 0..b {
        residue = ((residue as u128 + step as u128) % b as u128) as u64;
        let t = TAU * residue as f64 / b as f64;
        re += t.cos();
        im += t.sin();
    }
    (re, im)
}

/// A closed arc `[lo, hi]` of `𝕋`, wrapping allowed, with `0 < hi − lo ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorusInterval {
    pub lo: f64,
    pub hi: f64,
}

impl TorusInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        let len = hi - lo;
        if !(len > 0.0 && len <= 1.0) || !lo.is_finite() {
            return Err(Error::Domain(format!(
                "torus interval needs 0 < hi − lo ≤ 1, got [{lo}, {hi}]"
            )));
        }
        Ok(TorusInterval { lo, hi })
    }

    /// `|I|`.
    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, u: f64) -> bool {
        let len = self.len();
        len >= 1.0 || (u - self.lo).rem_euclid(1.0) <= len
    }
}

/// `D(𝒰, I) = #(𝒰 ∩ I) − |I|·Q`.
pub fn discrepancy(points: &SamplePoints, interval: &TorusInterval) -> f64 {
    let inside = points.points.iter().filter(|&&u| interval.contains(u)).count();
    inside as f64 - interval.len() * points.len() as f64
}

/// `|Σ e(ku)|` for `k = 1..=k_max`, computed once and reused across `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpSums {
    q: usize,
    moduli: Vec<f64>,
}

impl ExpSums {
    pub fn new(points: &SamplePoints, k_max: u64) -> Self {
        ExpSums {
            q: points.len(),
            moduli: (1..=k_max as i64).map(|k| exp_sum(points, k)).collect(),
        }
    }

    pub fn k_max(&self) -> u64 {
        self.moduli.len() as u64
    }

    /// The right-hand side for cutoff `K ≤ k_max`.
    pub fn erdos_turan_rhs(&self, interval_len: f64, k: u64) -> f64 {
        assert!(k >= 1 && k <= self.k_max(), "K = {k} outside 1..={}", self.k_max());
        let kf = k as f64;
        let tail: f64 = self.moduli[..k as usize]
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let freq = (i + 1) as f64;
                (1.0 / kf + interval_len.min(1.0 / (PI * freq))) * m
            })
            .sum();
        self.q as f64 / (kf + 1.0) + 2.0 * tail
    }
}

/// `Q/(K+1) + 2 Σ_{k=1}^{K} (1/K + min(|I|, 1/(πk)))·|Σ_u e(ku)|`.
pub fn erdos_turan_rhs(points: &SamplePoints, interval: &TorusInterval, k: u64) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("K must be a positive integer".into()));
    }
    Ok(ExpSums::new(points, k).erdos_turan_rhs(interval.len(), k))
}

/// Discrepancy of `u_q` on `I = [−δ, δ]` with `δ = η + (a/b)ξ`, against the
/// Erdős–Turán right-hand side at cutoff `K` (default `⌊b/a⌋`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub q: usize,
    pub k: u64,
    pub interval: TorusInterval,
    pub discrepancy: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Float slack allowed when checking `|D| ≤ RHS`.
pub const ERDOS_TURAN_SLACK: f64 = 1e-9;

pub fn discrepancy_report(points: &SamplePoints, interval: TorusInterval, k: u64) -> Result<DiscrepancyReport> {
    let d = discrepancy(points, &interval);
    let rhs = erdos_turan_rhs(points, &interval, k)?;
    Ok(DiscrepancyReport {
        q: points.len(),
        k,
        interval,
        discrepancy: d,
        rhs,
        holds: d.abs() <= rhs + ERDOS_TURAN_SLACK,
    })
}

/// `⌊b/a⌋`, at least 1.
pub fn default_cutoff(params: &FracParams) -> u64 {
    ((params.b / params.a).floor() as u64).max(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn query(a: f64, b: f64, c: f64, d: f64, eta: f64, xi: f64) -> LatticeQuery {
        LatticeQuery::new(FracParams::new(a, b, c, d).unwrap(), eta, xi).unwrap()
    }

    fn brute_force(q: &LatticeQuery) -> u64 {
        let (p0, p1) = q.p_range();
        let (q0, q1) = q.q_range();
        let mut count = 0;
        let mut p = p0;
        while p <= p1 {
            let mut qq = q0;
            while qq <= q1 {
                let fp = &q.params;
                if ((p - fp.c) / fp.a - (qq - fp.d) / fp.b).abs() < fp_theta(q) {
                    count += 1;
                }
                qq += 1.0;
            }
            p += 1.0;
        }
        count
    }

    fn fp_theta(q: &LatticeQuery) -> f64 {
        q.eta / q.params.a + q.xi / q.params.b
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_n(&query(1.0, 1.0, 0.0, 0.0, 0.25, 0.25)), 2);
        assert_eq!(count_n(&query(2.0, 6.0, 0.0, 0.0, 0.1, 0.1)), 3);
        let tiny = query(1.0, 2f64.sqrt(), 0.0, 0.0, 1e-12, 1e-12);
        assert_eq!(count_n(&tiny), brute_force(&tiny));
        // only (0,0) coincides exactly
        assert_eq!(count_n(&tiny), 1);
    }

    #[test]
    fn ratio_examples() {
        let q = query(1.0, 1.0, 0.0, 0.0, 0.25, 0.25);
        assert!((bound_ratio_real(&q) - 1.6).abs() < 1e-12);
        let large = query(3.0, 40.0, 0.4, -0.3, 0.9, 0.9);
        assert!(large.is_large_regime());
        assert!(count_n(&large) as f64 <= 4.0 * (40.0 + 2.0));
    }

    #[test]
    fn integer_bound_examples() {
        for i in 1..50 {
            for j in 1..50 {
                let (eta, xi) = (i as f64 / 100.0, j as f64 / 100.0);
                let (count, ratio) = count_n_integer_bound(&query(4.0, 6.0, 0.0, 0.0, eta, xi)).unwrap();
                assert!(ratio.is_finite() && count > 0);
            }
        }
        let (count, ratio) = count_n_integer_bound(&query(7.0, 7.0, 0.0, 0.0, 0.3, 0.3)).unwrap();
        assert!(count as f64 <= 7.0 + 2.0 && ratio <= 1.0);
        let (_, ratio) = count_n_integer_bound(&query(1.0, 1000.0, 0.0, 0.0, 0.001, 0.1)).unwrap();
        assert!(ratio.is_finite());
        assert!(count_n_integer_bound(&query(1.5, 6.0, 0.0, 0.0, 0.1, 0.1)).is_err());
    }

    #[test]
    fn exp_sum_examples() {
        let q = 12;
        let uniform = SamplePoints::new((0..q).map(|j| j as f64 / q as f64)).unwrap();
        for k in 1..40 {
            let m = exp_sum(&uniform, k);
            if k % q == 0 {
                assert!((m - q as f64).abs() < 1e-9);
            } else {
                assert!(m < 1e-9, "k = {k}: {m}");
            }
        }
        let points = SamplePoints::new((1..=6).map(|q| 4.0 * q as f64 / 6.0)).unwrap();
        for k in 1..30 {
            let want = if k % 3 == 0 { 6.0 } else { 0.0 };
            assert!((exp_sum(&points, k) - want).abs() < 1e-9);
            let (re, im) = exp_sum_integer(4, 6, k as u64);
            assert!((re - want).abs() < 1e-9 && im.abs() < 1e-9);
        }
    }

    #[test]
    fn pairwise_path_matches_direct() {
        let n = PAIRWISE_THRESHOLD + 17;
        let points = SamplePoints::new((0..n).map(|j| (j as f64 * 0.618_033_988_749_895).fract())).unwrap();
        let (re, im) = exp_sum_complex(&points, 3);
        let (mut dre, mut dim) = (0.0, 0.0);
        for &u in points.points() {
            let t = TAU * (3.0 * u);
            dre += t.cos();
            dim += t.sin();
        }
        assert!((re - dre).abs() < 1e-6 && (im - dim).abs() < 1e-6);
    }

    #[test]
    fn discrepancy_examples() {
        let q = 10;
        let uniform = SamplePoints::new((0..q).map(|j| j as f64 / q as f64)).unwrap();
        let full = TorusInterval::new(0.0, 1.0).unwrap();
        assert!(discrepancy(&uniform, &full).abs() < 1e-12);
        let single = SamplePoints::new([0.5]).unwrap();
        let i = TorusInterval::new(0.4, 0.6).unwrap();
        assert!((discrepancy(&single, &i) - 0.8).abs() < 1e-12);
        let anything = SamplePoints::new([0.1, 0.1, 0.7, 0.93]).unwrap();
        assert_eq!(discrepancy(&anything, &full), 0.0);
        let wrap = TorusInterval::new(-0.1, 0.15).unwrap();
        assert!((discrepancy(&anything, &wrap) - (3.0 - 1.0)).abs() < 1e-12);
        assert!(TorusInterval::new(0.3, 0.3).is_err());
        assert!(TorusInterval::new(0.0, 1.5).is_err());
    }

    #[test]
    fn erdos_turan_examples() {
        let q = 16;
        let uniform = SamplePoints::new((0..q).map(|j| j as f64 / q as f64)).unwrap();
        let i = TorusInterval::new(0.2, 0.45).unwrap();
        let rhs = erdos_turan_rhs(&uniform, &i, q as u64 - 1).unwrap();
        assert!(rhs >= 0.0);
        assert!((rhs - q as f64 / q as f64).abs() < 1e-9);
        assert!(discrepancy(&uniform, &i).abs() <= rhs + ERDOS_TURAN_SLACK);
        assert!(erdos_turan_rhs(&uniform, &i, 0).is_err());
    }

    #[test]
    fn uq_examples() {
        let same = build_uq(&FracParams::new(3.0, 3.0, 0.0, 0.0).unwrap()).unwrap();
        assert!(same.points().iter().all(|&u| u.min(1.0 - u) < 1e-12));
        let half = build_uq(&FracParams::new(1.0, 2.0, 0.0, 0.0).unwrap()).unwrap();
        assert_eq!(half.points(), &[0.0, 0.5, 0.0]);
        let shifted = build_uq(&FracParams::new(1.0, 5.0, 0.0, 0.3).unwrap()).unwrap();
        assert_eq!(shifted.len(), 7);
    }

    proptest! {
        #[test]
        fn count_matches_brute_force(
            a in 1.0f64..40.0, k in 1.0f64..5.0, c in -2.0f64..2.0, d in -2.0f64..2.0,
            eta in 0.001f64..0.999, xi in 0.001f64..0.999,
        ) {
            let q = query(a, a * k, c, d, eta, xi);
            prop_assert_eq!(count_n(&q), brute_force(&q));
        }

        #[test]
        fn count_invariant_under_integer_shift(
            a in 1.0f64..30.0, k in 1.0f64..8.0, c in -2.0f64..2.0, d in -2.0f64..2.0,
            eta in 0.001f64..0.999, xi in 0.001f64..0.999, shift in -3i32..3,
        ) {
            let base = query(a, a * k, c, d, eta, xi);
            let moved = query(a, a * k, c + shift as f64, d, eta, xi);
            prop_assert_eq!(count_n(&base), count_n(&moved));
        }

        #[test]
        fn erdos_turan_holds(
            raw in prop::collection::vec(0.0f64..1.0, 1..60),
            lo in -1.0f64..1.0, len in 0.001f64..1.0, k in 1u64..30,
        ) {
            let points = SamplePoints::new(raw).unwrap();
            let i = TorusInterval::new(lo, lo + len).unwrap();
            let rhs = erdos_turan_rhs(&points, &i, k).unwrap();
            prop_assert!(discrepancy(&points, &i).abs() <= rhs + ERDOS_TURAN_SLACK);
        }
    }
}
