//! The sets `F(η, ξ)` and `E(δ)` on `[0,1]`, the decomposition
//! `E(δ) = A(δ) ∪ B(δ) ∪ C(δ)`, and the covers built from them.
//!
//! `E(δ)` is computed exactly by walking the cells between consecutive
//! half-integer breakpoints of `ax + c` and `bx + d`. On a cell the nearest
//! integers `p`, `q` are fixed and
//!
//! ```text
//! ‖ax+c‖·‖bx+d‖ = ab·|(x − x_p)(x − x_q)|,   x_p = (p−c)/a,  x_q = (q−d)/b,
//! ```
//!
//! so the solution is an outer interval around `[x_p, x_q]` minus an inner
//! one, both with closed-form endpoints.

use serde::{Deserialize, Serialize};

use crate::config::cell_cap;
use crate::error::{Error, Result};
use crate::intervals::{Cover, IntervalSet, IntervalSetBuilder};
use crate::sequences::{compute_l, Coefficients};

/// Invariants checked by the verification harness.
pub const PROPERTIES: &[&str] = &[
    "approx/e-membership",
    "approx/decomposition-reconstruction",
    "approx/lemma-cover-contains",
    "approx/e-monotone",
    "approx/f-inside-e",
    "approx/f-cover-bound",
    "approx/hausdorff-bound",
    "approx/lebesgue-bound",
];

/// `(a, b, c, d)` with `1 ≤ a ≤ b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FracParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl FracParams {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let p = FracParams { a, b, c, d };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.a, self.b, self.c, self.d].iter().all(|v| v.is_finite());
        if !finite || !(1.0 <= self.a && self.a <= self.b) {
            return Err(Error::InvariantViolation(format!(
                "need finite parameters with 1 ≤ a ≤ b, got {self:?}"
            )));
        }
        Ok(())
    }

    /// `L = max{1, log b / a}`.
    pub fn l(&self) -> f64 {
        compute_l(self.a, self.b).unwrap_or(1.0)
    }
}

impl TryFrom<Coefficients> for FracParams {
    type Error = Error;

    fn try_from(co: Coefficients) -> Result<Self> {
        FracParams::new(co.a, co.b, co.c, co.d)
    }
}

/// `‖x‖`, the distance to the nearest integer.
pub fn dist_nearest_int(x: f64) -> f64 {
    (x - x.round()).abs()
}

/// `{x ∈ [0,1] : ‖slope·x + shift‖ < radius}`.
pub fn near_integer_set(slope: f64, shift: f64, radius: f64) -> IntervalSet {
    if radius >= 0.5 {
        return IntervalSet::unit();
    }
    let mut builder = IntervalSetBuilder::new();
    for_each_window(slope, shift, radius, 0.0, 1.0, |lo, hi| builder.push(lo, hi));
    builder.finish()
}

/// Visits the windows `((k − shift − r)/slope, (k − shift + r)/slope)` that meet
/// `[lo, hi]`, in increasing order, clipped to `[lo, hi]`.
fn for_each_window(slope: f64, shift: f64, radius: f64, lo: f64, hi: f64, mut f: impl FnMut(f64, f64)) {
    if !(radius > 0.0) || hi < lo {
        return;
    }
    let first = (slope * lo + shift - radius).ceil();
    let last = (slope * hi + shift + radius).floor();
    let mut k = first;
    while k <= last {
        let wlo = ((k - shift - radius) / slope).max(lo);
        let whi = ((k - shift + radius) / slope).min(hi);
        if whi > wlo {
            f(wlo, whi);
        }
        k += 1.0;
    }
}

/// `F(η, ξ) = {x ∈ [0,1] : ‖ax+c‖ < η, ‖bx+d‖ < ξ}`.
///
/// A threshold of at least `1/2` makes its constraint vacuous.
pub fn compute_f(p: &FracParams, eta: f64, xi: f64) -> Result<IntervalSet> {
    p.validate()?;
    let mut builder = IntervalSetBuilder::new();
    for_each_f_piece(p, eta, xi, |lo, hi| builder.push(lo, hi));
    Ok(builder.finish())
}

fn for_each_f_piece(p: &FracParams, eta: f64, xi: f64, mut f: impl FnMut(f64, f64)) {
    if !(eta > 0.0 && xi > 0.0) {
        return;
    }
    let xi_vacuous = xi >= 0.5;
    let mut visit_q = |wlo: f64, whi: f64| {
        if xi_vacuous {
            f(wlo, whi);
        } else {
            for_each_window(p.b, p.d, xi, wlo, whi, &mut f);
        }
    };
    if eta >= 0.5 {
        visit_q(0.0, 1.0);
    } else {
        for_each_window(p.a, p.c, eta, 0.0, 1.0, visit_q);
    }
}

/// Which part of `E(δ)` a cell walk produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    /// All of `E(δ)`.
    Whole,
    /// `B(δ)`: `‖ax+c‖ ≥ δ`.
    FarFromA,
    /// `C(δ)`: `‖bx+d‖ ≥ δ`.
    FarFromB,
}

/// One cell of the breakpoint walk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub lo: f64,
    pub hi: f64,
    /// `(p − c)/a` for the nearest integer `p` of `ax + c` on the cell.
    pub x_p: f64,
    /// `(q − d)/b` for the nearest integer `q` of `bx + d` on the cell.
    pub x_q: f64,
}

/// Upper estimate of the number of cells visited for `p`.
pub fn cell_estimate(p: &FracParams) -> u64 {
    (p.a.ceil() + p.b.ceil() + 4.0).min(u64::MAX as f64) as u64
}

/// Visits the cells of `[0,1]` on which both nearest integers are constant.
pub fn walk_cells(p: &FracParams, mut f: impl FnMut(Cell)) -> Result<()> {
    p.validate()?;
    let cells = cell_estimate(p);
    let cap = cell_cap();
    if cells > cap {
        return Err(Error::CellCapExceeded { cells, cap });
    }
    let mut x = 0.0f64;
    let mut pi = p.c.round();
    let mut qi = p.d.round();
    loop {
        let xa = (pi + 0.5 - p.c) / p.a;
        let xb = (qi + 0.5 - p.d) / p.b;
        let end = xa.min(xb).min(1.0);
        if end > x {
            f(Cell {
                lo: x,
                hi: end,
                x_p: (pi - p.c) / p.a,
                x_q: (qi - p.d) / p.b,
            });
        }
        if end >= 1.0 {
            break;
        }
        if xa <= end {
            pi += 1.0;
        }
        if xb <= end {
            qi += 1.0;
        }
        x = x.max(end);
    }
    Ok(())
}

/// At most four closed pieces, `lo ≤ hi`.
#[derive(Debug, Clone, Copy)]
struct Pieces {
    buf: [(f64, f64); 4],
    len: usize,
}

impl Pieces {
    fn single(lo: f64, hi: f64) -> Self {
        let mut p = Pieces {
            buf: [(0.0, 0.0); 4],
            len: 0,
        };
        if hi >= lo {
            p.buf[0] = (lo, hi);
            p.len = 1;
        }
        p
    }

    /// Removes the open interval `(rlo, rhi)`.
    fn remove_open(&mut self, rlo: f64, rhi: f64) {
        if !(rhi > rlo) {
            return;
        }
        let mut out = Pieces {
            buf: [(0.0, 0.0); 4],
            len: 0,
        };
        for &(lo, hi) in &self.buf[..self.len] {
            if rhi <= lo || rlo >= hi {
                out.push(lo, hi);
                continue;
            }
            if rlo >= lo {
                out.push(lo, rlo);
            }
            if rhi <= hi {
                out.push(rhi, hi);
            }
        }
        *self = out;
    }

    fn push(&mut self, lo: f64, hi: f64) {
        if self.len < self.buf.len() {
            self.buf[self.len] = (lo, hi);
            self.len += 1;
        }
    }

    fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.buf[..self.len].iter().copied()
    }
}

/// Solves `ab·|(x − x_p)(x − x_q)| < δ²` on a cell; `e = δ²/(ab)`.
fn solve_cell(cell: &Cell, e: f64) -> Pieces {
    let (l, r) = if cell.x_p <= cell.x_q {
        (cell.x_p, cell.x_q)
    } else {
        (cell.x_q, cell.x_p)
    };
    let h = (r - l) / 2.0;
    let g_out = e / ((h * h + e).sqrt() + h);
    let mut pieces = Pieces::single((l - g_out).max(cell.lo), (r + g_out).min(cell.hi));
    if h * h > e {
        let g_in = e / (h + (h * h - e).sqrt());
        pieces.remove_open(l + g_in, r - g_in);
    }
    pieces
}

/// Streams the pieces of `E(δ)` (or of `B(δ)`, `C(δ)`) in increasing order.
///
/// Pieces may be degenerate (`lo == hi`) where the true width is below the
/// resolution of a double.
pub fn for_each_e_piece(p: &FracParams, delta: f64, part: Part, mut f: impl FnMut(f64, f64)) -> Result<()> {
    p.validate()?;
    if !(delta > 0.0) {
        return Ok(());
    }
    let d2 = delta * delta;
    let e = d2 / (p.a * p.b);
    let ra = delta / p.a;
    let rb = delta / p.b;
    walk_cells(p, |cell| {
        let mut pieces = solve_cell(&cell, e);
        match part {
            Part::Whole => {}
            Part::FarFromA => pieces.remove_open(cell.x_p - ra, cell.x_p + ra),
            Part::FarFromB => pieces.remove_open(cell.x_q - rb, cell.x_q + rb),
        }
        for (lo, hi) in pieces.iter() {
            f(lo, hi);
        }
    })
}

/// `E(δ) = {x ∈ [0,1] : ‖ax+c‖·‖bx+d‖ < δ²}`.
pub fn compute_e(p: &FracParams, delta: f64) -> Result<IntervalSet> {
    p.validate()?;
    if delta > 0.5 {
        return Ok(IntervalSet::unit());
    }
    collect_part(p, delta, Part::Whole)
}

fn collect_part(p: &FracParams, delta: f64, part: Part) -> Result<IntervalSet> {
    let mut builder = IntervalSetBuilder::new();
    for_each_e_piece(p, delta, part, |lo, hi| builder.push(lo, hi))?;
    Ok(builder.finish())
}

/// The three pieces of `E(δ) = A(δ) ∪ B(δ) ∪ C(δ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    /// `‖ax+c‖ < δ` and `‖bx+d‖ < δ`.
    pub a: IntervalSet,
    /// `‖ax+c‖ ≥ δ` and the product is below `δ²`.
    pub b: IntervalSet,
    /// `‖bx+d‖ ≥ δ` and the product is below `δ²`.
    pub c: IntervalSet,
}

impl Decomposition {
    pub fn union(&self) -> IntervalSet {
        self.a.union(&self.b).union(&self.c)
    }
}

pub fn decompose_e(p: &FracParams, delta: f64) -> Result<Decomposition> {
    if !(delta > 0.0 && delta <= 0.5) {
        return Err(Error::Domain(format!("decomposition needs δ ∈ (0, 1/2], got {delta}")));
    }
    Ok(Decomposition {
        a: compute_f(p, delta, delta)?,
        b: collect_part(p, delta, Part::FarFromA)?,
        c: collect_part(p, delta, Part::FarFromB)?,
    })
}

/// Direct test of `‖ax+c‖·‖bx+d‖ < δ²`.
pub fn membership(p: &FracParams, delta: f64, x: f64) -> bool {
    dist_nearest_int(p.a * x + p.c) * dist_nearest_int(p.b * x + p.d) < delta * delta
}

/// A cover of `F(η, ξ)` by pieces of length `min{η/a, ξ/b}`, with the
/// counting bound `(bη + a)·L` it is measured against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FCover {
    pub cover: Cover,
    pub bound: f64,
}

impl FCover {
    pub fn pieces(&self) -> usize {
        self.cover.piece_count()
    }

    pub fn ratio(&self) -> f64 {
        self.pieces() as f64 / self.bound
    }
}

pub fn cover_f(p: &FracParams, eta: f64, xi: f64) -> Result<FCover> {
    if !(eta > 0.0 && eta < 1.0 && xi > 0.0 && xi < 1.0) {
        return Err(Error::Domain(format!("cover needs η, ξ ∈ (0,1), got η = {eta}, ξ = {xi}")));
    }
    let set = compute_f(p, eta, xi)?;
    let mesh = (eta / p.a).min(xi / p.b);
    Ok(FCover {
        cover: set.canonical_cover(mesh, 1.0)?,
        bound: (p.b * eta + p.a) * p.l(),
    })
}

/// The dyadic index sets `J`, `J₁`, `J₂` of the `B`/`C` annulus covers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadicIndices {
    /// `{j ≥ 0 : 2^{j+1}δ < 1}`.
    pub j: Vec<u32>,
    /// `{j ∈ J : 2^{2j} ≤ b/a}`.
    pub j1: Vec<u32>,
    /// `{j ∈ J : 2^{2j} ≥ b/a}`.
    pub j2: Vec<u32>,
}

impl DyadicIndices {
    pub fn new(delta: f64, a: f64, b: f64) -> Self {
        let mut j = Vec::new();
        if delta > 0.0 {
            let mut k = 0u32;
            while 2f64.powi(k as i32 + 1) * delta < 1.0 {
                j.push(k);
                k += 1;
            }
        }
        let ratio = b / a;
        let j1 = j.iter().copied().filter(|&k| 4f64.powi(k as i32) <= ratio).collect();
        let j2 = j.iter().copied().filter(|&k| 4f64.powi(k as i32) >= ratio).collect();
        DyadicIndices { j, j1, j2 }
    }
}

/// One `F(η, ξ)` in the decomposition cover, with its canonical piece count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverPart {
    pub j: Option<u32>,
    pub eta: f64,
    pub xi: f64,
    pub mesh: f64,
    pub pieces: u64,
}

impl CoverPart {
    fn build(p: &FracParams, j: Option<u32>, eta: f64, xi: f64) -> Result<Self> {
        let mesh = (eta / p.a).min(xi / p.b);
        let set = compute_f(p, eta, xi)?;
        let pieces = set.canonical_pieces(mesh);
        Ok(CoverPart {
            j,
            eta,
            xi,
            mesh,
            pieces,
        })
    }

    pub fn premeasure(&self, s: f64) -> f64 {
        self.pieces as f64 * (self.mesh / 2.0).powf(s)
    }
}

/// The multi-scale cover of `E(δ)`: `A = F(δ, δ)`, `B ⊆ ∪_J F(2^{j+1}δ, 2^{-j}δ)`,
/// `C ⊆ ∪_J F(2^{-j}δ, 2^{j+1}δ)`, each part at mesh `min{η/a, ξ/b}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaCover {
    pub delta: f64,
    pub indices: DyadicIndices,
    pub a_part: CoverPart,
    pub b_parts: Vec<CoverPart>,
    pub c_parts: Vec<CoverPart>,
}

impl LemmaCover {
    pub fn new(p: &FracParams, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta <= 0.5) {
            return Err(Error::Domain(format!("cover needs δ ∈ (0, 1/2], got {delta}")));
        }
        let indices = DyadicIndices::new(delta, p.a, p.b);
        let a_part = CoverPart::build(p, None, delta, delta)?;
        let mut b_parts = Vec::with_capacity(indices.j.len());
        let mut c_parts = Vec::with_capacity(indices.j.len());
        for &j in &indices.j {
            let wide = 2f64.powi(j as i32 + 1) * delta;
            let narrow = 2f64.powi(-(j as i32)) * delta;
            b_parts.push(CoverPart::build(p, Some(j), wide, narrow)?);
            c_parts.push(CoverPart::build(p, Some(j), narrow, wide)?);
        }
        Ok(LemmaCover {
            delta,
            indices,
            a_part,
            b_parts,
            c_parts,
        })
    }

    fn parts(&self) -> impl Iterator<Item = &CoverPart> {
        std::iter::once(&self.a_part).chain(&self.b_parts).chain(&self.c_parts)
    }

    /// `Σ r_i^s` over every piece of every part.
    pub fn premeasure(&self, s: f64) -> f64 {
        self.parts().map(|part| part.premeasure(s)).sum()
    }

    pub fn total_pieces(&self) -> u64 {
        self.parts().map(|part| part.pieces).sum()
    }

    /// The union of the covering `F`-sets (a superset of `E(δ)`).
    pub fn union_set(&self, p: &FracParams) -> Result<IntervalSet> {
        let mut acc = IntervalSet::empty();
        for part in self.parts() {
            acc = acc.union(&compute_f(p, part.eta, part.xi)?);
        }
        Ok(acc)
    }
}

/// `b(δ²/b)^s·L + a(δ²/(ab))^{s/2}·L`.
pub fn hausdorff_bound(p: &FracParams, delta: f64, s: f64) -> f64 {
    let d2 = delta * delta;
    let l = p.l();
    p.b * (d2 / p.b).powf(s) * l + p.a * (d2 / (p.a * p.b)).powf(s / 2.0) * l
}

/// `δ²·L·log(1/δ) + (a/b)^{1/2}·δ·L`.
pub fn lebesgue_bound(p: &FracParams, delta: f64) -> f64 {
    let l = p.l();
    delta * delta * l * (1.0 / delta).ln() + (p.a / p.b).sqrt() * delta * l
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{rngs::StdRng, Rng, SeedableRng};

    fn params(a: f64, b: f64, c: f64, d: f64) -> FracParams {
        FracParams::new(a, b, c, d).unwrap()
    }

    fn approx_pairs(got: &IntervalSet, want: &[(f64, f64)]) {
        let got = got.to_pairs();
        assert_eq!(got.len(), want.len(), "{got:?} vs {want:?}");
        for (g, w) in got.iter().zip(want) {
            assert!((g.0 - w.0).abs() < 1e-12 && (g.1 - w.1).abs() < 1e-12, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn nearest_int_distance() {
        assert!((dist_nearest_int(0.3) - 0.3).abs() < 1e-15);
        assert!((dist_nearest_int(-2.7) - 0.3).abs() < 1e-12);
        assert_eq!(dist_nearest_int(3.5), 0.5);
    }

    #[test]
    fn f_examples() {
        approx_pairs(&compute_f(&params(1.0, 2.0, 0.0, 0.0), 0.1, 0.1).unwrap(), &[(0.0, 0.05), (0.95, 1.0)]);
        let p = params(3.3, 17.0, 0.4, -1.2);
        assert_eq!(compute_f(&p, 0.6, 0.7).unwrap(), IntervalSet::unit());
        let d = 0.15;
        approx_pairs(&compute_f(&params(1.0, 1.0, 0.0, 0.0), d, d).unwrap(), &[(0.0, d), (1.0 - d, 1.0)]);
        assert!(compute_f(&FracParams { a: 0.5, b: 1.0, c: 0.0, d: 0.0 }, 0.1, 0.1).is_err());
    }

    #[test]
    fn e_examples() {
        approx_pairs(&compute_e(&params(1.0, 1.0, 0.0, 0.0), 0.2).unwrap(), &[(0.0, 0.2), (0.8, 1.0)]);
        assert_eq!(compute_e(&params(2.0, 9.0, 0.1, 0.2), 0.8).unwrap(), IntervalSet::unit());
        assert!(compute_e(&params(2.0, 9.0, 0.1, 0.2), 0.0).unwrap().is_empty());
    }

    #[test]
    fn e_measure_matches_monte_carlo() {
        let p = params(3.0, 7.0, 0.3, 0.6);
        let delta = 0.1;
        let exact = compute_e(&p, delta).unwrap().lebesgue();
        let mut rng = StdRng::seed_from_u64(7);
        let n = 1_000_000;
        let hits = (0..n).filter(|_| membership(&p, delta, rng.random::<f64>())).count();
        let freq = hits as f64 / n as f64;
        let se = (freq * (1.0 - freq) / n as f64).sqrt();
        assert!((freq - exact).abs() < 4.0 * se, "exact {exact}, mc {freq} ± {se}");
    }

    #[test]
    fn decomposition_examples() {
        let p = params(2.5, 9.1, 0.2, 0.7);
        let delta = 0.1;
        let dec = decompose_e(&p, delta).unwrap();
        let e = compute_e(&p, delta).unwrap();
        assert!(dec.union().symmetric_difference(&e).lebesgue() < 1e-10);
        assert!(dec.a.lebesgue() <= e.lebesgue() + 1e-15);

        let p = params(1.0, 1.0, 0.0, 0.0);
        let dec = decompose_e(&p, 0.2).unwrap();
        assert!(dec.b.difference(&dec.a).lebesgue() < 1e-15);
        assert!(dec.c.difference(&dec.a).lebesgue() < 1e-15);
        assert!(decompose_e(&p, 0.6).is_err());
    }

    #[test]
    fn membership_examples() {
        let p = params(1.0, 1.0, 0.0, 0.0);
        assert!(membership(&p, 0.2, 0.1));
        assert!(!membership(&p, 0.2, 0.5));
    }

    #[test]
    fn membership_agrees_with_set() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..20 {
            let a = rng.random_range(1.0..30.0);
            let b = rng.random_range(a..2000.0);
            let p = params(a, b, rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let delta = rng.random_range(0.01..0.5);
            let e = compute_e(&p, delta).unwrap();
            for _ in 0..5000 {
                let x: f64 = rng.random();
                if e.distance_to_boundary(x) < 1e-9 {
                    continue;
                }
                assert_eq!(membership(&p, delta, x), e.contains(x), "{p:?} δ={delta} x={x}");
            }
        }
    }

    #[test]
    fn cover_examples() {
        let p = params(1.0, 1.0, 0.0, 0.0);
        let cover = cover_f(&p, 0.1, 0.1).unwrap();
        assert_eq!(cover.pieces(), 2);
        assert!((cover.cover.mesh - 0.1).abs() < 1e-15);
        let f = compute_f(&p, 0.1, 0.1).unwrap();
        assert!(cover.cover.covers(&f));

        let p = params(7.5, 311.0, 0.25, -0.6);
        let cover = cover_f(&p, 0.13, 0.02).unwrap();
        assert!(cover.cover.covers(&compute_f(&p, 0.13, 0.02).unwrap()));
        assert!(cover.ratio().is_finite());
        assert!(cover_f(&p, 0.0, 0.1).is_err());
    }

    #[test]
    fn dyadic_index_sets() {
        let idx = DyadicIndices::new(0.1, 1.0, 16.0);
        assert_eq!(idx.j, vec![0, 1, 2]);
        assert_eq!(idx.j1, vec![0, 1, 2]);
        assert_eq!(idx.j2, vec![2]);
        assert!(DyadicIndices::new(0.5, 1.0, 2.0).j.is_empty());
    }

    #[test]
    fn lemma_cover_contains_e() {
        let p = params(3.7, 420.0, -0.4, 1.3);
        for &delta in &[0.01, 0.07, 0.3] {
            let cover = LemmaCover::new(&p, delta).unwrap();
            let e = compute_e(&p, delta).unwrap();
            assert!(e.is_subset_of(&cover.union_set(&p).unwrap(), 1e-12));
            assert!(cover.premeasure(0.5) > 0.0);
        }
    }

    #[test]
    fn cell_cap_guard() {
        let p = params(1.0, 1e12, 0.0, 0.0);
        assert!(matches!(compute_e(&p, 0.1), Err(Error::CellCapExceeded { .. })));
    }

    fn arb_params() -> impl Strategy<Value = FracParams> {
        (1.0f64..20.0, 1.0f64..40.0, -2.0f64..2.0, -2.0f64..2.0)
            .prop_map(|(a, k, c, d)| FracParams { a, b: a * k, c, d })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn e_monotone_in_delta(p in arb_params(), d1 in 0.001f64..0.5, d2 in 0.001f64..0.5) {
            let (lo, hi) = if d1 < d2 { (d1, d2) } else { (d2, d1) };
            let small = compute_e(&p, lo).unwrap();
            let big = compute_e(&p, hi).unwrap();
            prop_assert!(small.is_subset_of(&big, 1e-12));
        }

        #[test]
        fn f_inside_e(p in arb_params(), eta in 0.001f64..0.5, xi in 0.001f64..0.5) {
            let f = compute_f(&p, eta, xi).unwrap();
            let e = compute_e(&p, (eta * xi).sqrt()).unwrap();
            prop_assert!(f.is_subset_of(&e, 1e-12));
        }

        #[test]
        fn decomposition_reconstructs(p in arb_params(), delta in 0.001f64..0.5) {
            let dec = decompose_e(&p, delta).unwrap();
            let e = compute_e(&p, delta).unwrap();
            prop_assert!(dec.union().symmetric_difference(&e).lebesgue() < 1e-10);
            prop_assert!(dec.a.is_subset_of(&e, 1e-12));
        }
    }
}
