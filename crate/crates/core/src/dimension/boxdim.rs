//! Truncated limsup sets `∪_{n_lo ≤ n ≤ n_hi} E_n(ψ(n)^{1/2})` and
//! box-counting slopes.
//!
//! Box-counting slopes are exploratory: they upper-indicate, and need not
//! equal, the Hausdorff dimension of the limsup set.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::approx::{compute_e, for_each_e_piece, FracParams, Part};
use crate::error::{Error, Result};
use crate::intervals::{check_dyadic, IntervalSet};
use crate::sequences::{PsiSpec, SequenceSpec};

/// Finest supported box scale is `2^-MAX_SCALE_EXPONENT`.
pub const MAX_SCALE_EXPONENT: u32 = 26;
pub const EXPLORATORY: &str = "exploratory";

/// `z` for the two-sided 95% band on the slope.
const BAND_Z: f64 = 1.96;

fn params_at(seq: &SequenceSpec, n: u64) -> Result<FracParams> {
    FracParams::try_from(seq.eval(n)?)
}

fn check_range(n_lo: u64, n_hi: u64) -> Result<()> {
    if n_lo == 0 || n_lo > n_hi {
        return Err(Error::Domain(format!("need 1 ≤ n_lo ≤ n_hi, got [{n_lo}, {n_hi}]")));
    }
    Ok(())
}

/// `∪_{n ∈ [n_lo, n_hi]} E_n(ψ(n)^{1/2})`.
pub fn truncated_limsup(seq: &SequenceSpec, psi: &PsiSpec, n_lo: u64, n_hi: u64) -> Result<IntervalSet> {
    check_range(n_lo, n_hi)?;
    let sets = (n_lo..=n_hi)
        .into_par_iter()
        .map(|n| compute_e(&params_at(seq, n)?, psi.eval(n, seq)?.sqrt()))
        .collect::<Result<Vec<_>>>()?;
    Ok(sets.iter().fold(IntervalSet::empty(), |acc, s| acc.union(s)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxDimEstimate {
    pub slope: f64,
    pub stderr: f64,
    /// `slope ± 1.96·stderr`.
    pub band: (f64, f64),
    pub scales: Vec<f64>,
    pub counts: Vec<u64>,
    pub label: String,
}

fn scale_exponents(scales: &[f64]) -> Result<Vec<u32>> {
    if scales.len() < 4 {
        return Err(Error::Domain(format!("need at least 4 scales, got {}", scales.len())));
    }
    scales
        .iter()
        .map(|&s| {
            check_dyadic(s)?;
            let k = (-s.log2()).round() as u32;
            if k > MAX_SCALE_EXPONENT {
                return Err(Error::Domain(format!(
                    "scale {s} is finer than 2^-{MAX_SCALE_EXPONENT}"
                )));
            }
            Ok(k)
        })
        .collect()
}

/// Least-squares slope of `log N(scale)` against `log(1/scale)`.
fn fit(scales: &[f64], counts: Vec<u64>) -> Result<BoxDimEstimate> {
    if counts.iter().any(|&c| c == 0) {
        return Err(Error::DegenerateFit("empty set has no box-counting slope".into()));
    }
    let xs: Vec<f64> = scales.iter().map(|s| -s.ln()).collect();
    let ys: Vec<f64> = counts.iter().map(|&c| (c as f64).ln()).collect();
    let m = xs.len() as f64;
    let x_bar = xs.iter().sum::<f64>() / m;
    let y_bar = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - x_bar).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all scales coincide".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - x_bar) * (y - y_bar)).sum();
    let slope = sxy / sxx;
    let ssr: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - y_bar - slope * (x - x_bar)).powi(2))
        .sum();
    let stderr = (ssr / (m - 2.0) / sxx).sqrt();
    Ok(BoxDimEstimate {
        slope,
        stderr,
        band: (slope - BAND_Z * stderr, slope + BAND_Z * stderr),
        scales: scales.to_vec(),
        counts,
        label: EXPLORATORY.into(),
    })
}

/// Box-counting slope of a fixed set.
pub fn box_dimension_of_set(set: &IntervalSet, scales: &[f64]) -> Result<BoxDimEstimate> {
    scale_exponents(scales)?;
    let counts = scales.iter().map(|&s| set.box_count(s)).collect::<Result<Vec<_>>>()?;
    fit(scales, counts)
}

/// Occupancy of the `2^k` dyadic boxes of `[0,1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct BoxBits {
    k: u32,
    words: Vec<u64>,
}

impl BoxBits {
    fn new(k: u32) -> Self {
        let boxes = 1u64 << k;
        BoxBits {
            k,
            words: vec![0; boxes.div_ceil(64) as usize],
        }
    }

    fn boxes(&self) -> u64 {
        1u64 << self.k
    }

    fn set(&mut self, i: u64) {
        self.words[(i / 64) as usize] |= 1 << (i % 64);
    }

    fn get(&self, i: u64) -> bool {
        self.words[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    fn set_range(&mut self, first: u64, end: u64) {
        let mut i = first;
        while i <= end {
            if i % 64 == 0 && end - i >= 63 {
                self.words[(i / 64) as usize] = u64::MAX;
                i += 64;
            } else {
                self.set(i);
                i += 1;
            }
        }
    }

    /// Marks the boxes a piece `[lo, hi]` meets, by the same rule as
    /// [`IntervalSet::box_count`].
    fn mark(&mut self, lo: f64, hi: f64) {
        let scale = 1.0 / self.boxes() as f64;
        let first = (lo / scale).floor().max(0.0) as u64;
        let end = (hi / scale).ceil() - 1.0;
        if end < first as f64 {
            return;
        }
        let end = (end as u64).min(self.boxes() - 1);
        self.set_range(first, end);
    }

    fn or_assign(&mut self, other: &BoxBits) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
    }

    fn coarsen(&self) -> BoxBits {
        let mut out = BoxBits::new(self.k - 1);
        for j in 0..out.boxes() {
            if self.get(2 * j) || self.get(2 * j + 1) {
                out.set(j);
            }
        }
        out
    }

    fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }
}

/// Box-counting slope of the truncated limsup set, streamed from the pieces
/// of each `E_n` so the union is never materialized.
pub fn estimate_box_dimension(
    seq: &SequenceSpec,
    psi: &PsiSpec,
    n_lo: u64,
    n_hi: u64,
    scales: &[f64],
) -> Result<BoxDimEstimate> {
    check_range(n_lo, n_hi)?;
    let ks = scale_exponents(scales)?;
    let k_max = *ks.iter().max().expect("at least four scales");
    let per_n = (n_lo..=n_hi)
        .into_par_iter()
        .map(|n| {
            let params = params_at(seq, n)?;
            let delta = psi.eval(n, seq)?.sqrt();
            let mut bits = BoxBits::new(k_max);
            if delta > 0.5 {
                bits.mark(0.0, 1.0);
            } else {
                for_each_e_piece(&params, delta, Part::Whole, |lo, hi| bits.mark(lo, hi))?;
            }
            Ok(bits)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut level = BoxBits::new(k_max);
    for bits in &per_n {
        level.or_assign(bits);
    }
    let mut counts_by_k = vec![0u64; k_max as usize + 1];
    loop {
        counts_by_k[level.k as usize] = level.count();
        if level.k == 0 {
            break;
        }
        level = level.coarsen();
    }
    let counts = ks.iter().map(|&k| counts_by_k[k as usize]).collect();
    fit(scales, counts)
}

/// `2^-k_lo, …, 2^-k_hi`.
pub fn dyadic_scales(k_lo: u32, k_hi: u32) -> Vec<f64> {
    (k_lo..=k_hi).map(|k| 2f64.powi(-(k as i32))).collect()
}
