//! The product sets `F′(η, ξ)` and `E′(δ)` in `[0,1]²`.
//!
//! `F′(η, ξ) = {(x, y) : ‖ax+c‖ < η, ‖by+d‖ < ξ}` is the product of two
//! one-dimensional window sets. `E′(δ) = {‖ax+c‖·‖by+d‖ < δ²}` is covered by
//! `A′ = F′(δ, δ)` and the annulus products `F′(2^{j+1}δ, 2^{-j}δ)`,
//! `F′(2^{-j}δ, 2^{j+1}δ)` for `j ∈ J`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::approx::{dist_nearest_int, near_integer_set, DyadicIndices, FracParams};
use crate::error::{Error, Result};
use crate::intervals::{Interval, IntervalSet};

/// Invariants checked by the verification harness.
pub const PROPERTIES: &[&str] = &[
    "planar/product-identity",
    "planar/cover-membership",
    "planar/premeasure-bound",
    "planar/mc-calibration",
];

/// Fewest samples accepted by the Monte Carlo estimators.
pub const MIN_SAMPLES: u64 = 10_000;
/// Samples drawn from one generator position; blocks run in parallel.
const BLOCK: u64 = 4096;
/// 32-bit words consumed per sample (two `f64`s).
const WORDS_PER_SAMPLE: u64 = 4;

/// A product `X × Y` of normalized interval sets; its boxes are the
/// pairwise products of components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxSet {
    pub x: IntervalSet,
    pub y: IntervalSet,
}

impl BoxSet {
    pub fn product(x: IntervalSet, y: IntervalSet) -> Self {
        BoxSet { x, y }
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty() || self.y.is_empty()
    }

    pub fn box_count(&self) -> usize {
        self.x.intervals().len() * self.y.intervals().len()
    }

    pub fn boxes(&self) -> impl Iterator<Item = (Interval, Interval)> + '_ {
        self.x
            .intervals()
            .iter()
            .flat_map(move |&ix| self.y.intervals().iter().map(move |&iy| (ix, iy)))
    }

    pub fn area(&self) -> f64 {
        self.x.lebesgue() * self.y.lebesgue()
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        self.x.contains(x) && self.y.contains(y)
    }
}

/// `F′(η, ξ)`; a non-positive threshold gives `∅`, one of at least `1/2`
/// is vacuous.
pub fn compute_f2(p: &FracParams, eta: f64, xi: f64) -> Result<BoxSet> {
    p.validate()?;
    if eta.is_nan() || xi.is_nan() {
        return Err(Error::Domain("η and ξ must be numbers".into()));
    }
    Ok(BoxSet::product(
        near_integer_set(p.a, p.c, eta),
        near_integer_set(p.b, p.d, xi),
    ))
}

/// A cover of `F′(η, ξ)` by squares of side `min{η/a, ξ/b}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanarCover {
    pub squares: u64,
    pub mesh: f64,
    pub s: f64,
    /// `squares · mesh^{1+s}`.
    pub premeasure: f64,
    /// `ηξ · mesh^{s−1}`.
    pub bound: f64,
    pub ratio: f64,
    /// `squares / (ab · max{η/a, ξ/b} / min{η/a, ξ/b})`.
    pub count_ratio: f64,
}

pub fn cover_count_f2(p: &FracParams, eta: f64, xi: f64, s: f64) -> Result<PlanarCover> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::Domain(format!("planar cover needs s ∈ (0,1], got {s}")));
    }
    let set = compute_f2(p, eta, xi)?;
    let (wx, wy) = (eta / p.a, xi / p.b);
    let mesh = wx.min(wy);
    let squares = if set.is_empty() {
        0
    } else {
        set.x.canonical_pieces(mesh) * set.y.canonical_pieces(mesh)
    };
    let premeasure = squares as f64 * mesh.powf(1.0 + s);
    let bound = eta * xi * mesh.powf(s - 1.0);
    let count_bound = p.a * p.b * wx.max(wy) / mesh;
    let ratio_or_zero = |num: f64, den: f64| if num == 0.0 { 0.0 } else { num / den };
    Ok(PlanarCover {
        squares,
        mesh,
        s,
        premeasure,
        bound,
        ratio: ratio_or_zero(premeasure, bound),
        count_ratio: ratio_or_zero(squares as f64, count_bound),
    })
}

/// `‖ax+c‖·‖by+d‖ < δ²`.
pub fn membership_e2(p: &FracParams, delta: f64, x: f64, y: f64) -> bool {
    dist_nearest_int(p.a * x + p.c) * dist_nearest_int(p.b * y + p.d) < delta * delta
}

/// A seeded Monte Carlo estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

/// Fraction of uniform points of `[0,1]²` satisfying `pred`.
///
/// Sample `i` always reads the same generator words, so results do not
/// depend on the thread count.
pub fn mc_fraction(samples: u64, seed: u64, pred: impl Fn(f64, f64) -> bool + Sync) -> Result<McEstimate> {
    if samples < MIN_SAMPLES {
        return Err(Error::Domain(format!("need at least {MIN_SAMPLES} samples, got {samples}")));
    }
    let blocks = samples.div_ceil(BLOCK);
    let hits: u64 = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_word_pos(u128::from(block * BLOCK * WORDS_PER_SAMPLE));
            let start = block * BLOCK;
            let end = (start + BLOCK).min(samples);
            (start..end)
                .filter(|_| {
                    let x: f64 = rng.random();
                    let y: f64 = rng.random();
                    pred(x, y)
                })
                .count() as u64
        })
        .sum();
    let p = hits as f64 / samples as f64;
    Ok(McEstimate {
        estimate: p,
        stderr: (p * (1.0 - p) / samples as f64).sqrt(),
        samples,
        seed,
    })
}

/// Monte Carlo estimate of `λ²(E′(δ))`.
pub fn mc_measure_e2(p: &FracParams, delta: f64, samples: u64, seed: u64) -> Result<McEstimate> {
    p.validate()?;
    mc_fraction(samples, seed, |x, y| membership_e2(p, delta, x, y))
}

/// `λ²(E′(δ))` for `a = b = 1`, `c = d = 0`:
/// `4(δ² + δ²·log(1/(4δ²)))` below `δ = 1/2`, else `1`.
pub fn unit_e2_area(delta: f64) -> f64 {
    let d2 = delta * delta;
    if delta <= 0.0 {
        0.0
    } else if d2 >= 0.25 {
        1.0
    } else {
        4.0 * (d2 + d2 * (1.0 / (4.0 * d2)).ln())
    }
}

/// One annulus product `F′(η_j, ξ_j)` of the `B′` or `C′` cover.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Annulus {
    pub j: u32,
    pub eta: f64,
    pub xi: f64,
    pub set: BoxSet,
}

impl Annulus {
    fn new(p: &FracParams, j: u32, eta: f64, xi: f64) -> Result<Self> {
        Ok(Annulus {
            j,
            eta,
            xi,
            set: compute_f2(p, eta, xi)?,
        })
    }
}

/// `A′` exactly, `B′` and `C′` by covering annulus unions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanarDecomposition {
    pub params: FracParams,
    pub delta: f64,
    pub indices: DyadicIndices,
    pub a_prime: BoxSet,
    pub b_annuli: Vec<Annulus>,
    pub c_annuli: Vec<Annulus>,
}

/// Premeasure totals of a decomposition at one `s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionBounds {
    pub s: f64,
    pub a_premeasure: f64,
    pub b_premeasures: Vec<f64>,
    pub c_premeasures: Vec<f64>,
    pub total: f64,
    /// `b^{1−s}·δ^{2s}`.
    pub bound: f64,
    pub ratio: f64,
    /// `Σ_J area(B annuli) + Σ_J area(C annuli)`.
    pub annulus_area: f64,
    /// `annulus_area / (δ²·|J|)`, absent when `J = ∅`.
    pub area_ratio: Option<f64>,
}

pub fn decompose_e2(p: &FracParams, delta: f64) -> Result<PlanarDecomposition> {
    if !(delta > 0.0 && delta <= 0.5) {
        return Err(Error::Domain(format!("decomposition needs δ ∈ (0, 1/2], got {delta}")));
    }
    let indices = DyadicIndices::new(delta, p.a, p.b);
    let mut b_annuli = Vec::with_capacity(indices.j.len());
    let mut c_annuli = Vec::with_capacity(indices.j.len());
    for &j in &indices.j {
        let wide = 2f64.powi(j as i32 + 1) * delta;
        let narrow = 2f64.powi(-(j as i32)) * delta;
        b_annuli.push(Annulus::new(p, j, wide, narrow)?);
        c_annuli.push(Annulus::new(p, j, narrow, wide)?);
    }
    Ok(PlanarDecomposition {
        params: *p,
        delta,
        a_prime: compute_f2(p, delta, delta)?,
        indices,
        b_annuli,
        c_annuli,
    })
}

impl PlanarDecomposition {
    /// Whether `(x, y)` lies in `A′` or one of the annuli.
    pub fn covers(&self, x: f64, y: f64) -> bool {
        self.a_prime.contains(x, y)
            || self.b_annuli.iter().chain(&self.c_annuli).any(|an| an.set.contains(x, y))
    }

    pub fn bounds(&self, s: f64) -> Result<DecompositionBounds> {
        let p = &self.params;
        let pre = |eta: f64, xi: f64| cover_count_f2(p, eta, xi, s).map(|c| c.premeasure);
        let a_premeasure = pre(self.delta, self.delta)?;
        let b_premeasures = self.b_annuli.iter().map(|an| pre(an.eta, an.xi)).collect::<Result<Vec<_>>>()?;
        let c_premeasures = self.c_annuli.iter().map(|an| pre(an.eta, an.xi)).collect::<Result<Vec<_>>>()?;
        let total = a_premeasure + b_premeasures.iter().sum::<f64>() + c_premeasures.iter().sum::<f64>();
        let bound = p.b.powf(1.0 - s) * self.delta.powf(2.0 * s);
        let annulus_area: f64 = self.b_annuli.iter().chain(&self.c_annuli).map(|an| an.set.area()).sum();
        let j = self.indices.j.len();
        Ok(DecompositionBounds {
            s,
            a_premeasure,
            b_premeasures,
            c_premeasures,
            total,
            bound,
            ratio: total / bound,
            annulus_area,
            area_ratio: (j > 0).then(|| annulus_area / (self.delta * self.delta * j as f64)),
        })
    }
}
