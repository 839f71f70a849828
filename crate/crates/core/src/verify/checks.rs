//! The check registry: one function per declared property.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{oracles, Instance};
use crate::approx::{
    compute_e, compute_f, cover_f, decompose_e, hausdorff_bound, lebesgue_bound, membership, near_integer_set, walk_cells,
    FracParams, LemmaCover,
};
use crate::dimension::{
    box_dimension_of_set, compute_tau, corollary_threshold, dyadic_scales, truncated_limsup, SeriesFamily,
    SeriesSpec,
};
use crate::error::{Error, Result};
use crate::intervals::IntervalSet;
use crate::lattice::{
    build_uq, count_n, count_n_integer_bound, bound_ratio_real, default_cutoff, discrepancy, discrepancy_report,
    exp_sum_integer, ExpSums, LatticeQuery, SamplePoints, TorusInterval, ERDOS_TURAN_SLACK,
};
use crate::planar::{compute_f2, decompose_e2, mc_fraction, membership_e2, MIN_SAMPLES};
use crate::sequences::{PsiSpec, SequenceSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    /// A theorem or construction identity; any violation fails the campaign.
    Exact,
    /// A standard-error gate on a Monte Carlo estimate.
    Statistical,
    /// An `O(·)` ratio; reported, never failed on.
    Empirical,
}

/// Per-check overrides of the instance distribution.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Caps {
    pub a_range: Option<(f64, f64)>,
    pub b_max: Option<f64>,
    /// Round `a` and `b` to natural numbers.
    pub integer: bool,
}

const fn caps(a_range: Option<(f64, f64)>, b_max: Option<f64>, integer: bool) -> Caps {
    Caps {
        a_range,
        b_max,
        integer,
    }
}

const DEFAULT: Caps = caps(None, None, false);
const EXPONENTIAL_BASES: Caps = caps(Some((1.01, 10.0)), Some(100.0), false);

pub struct CheckDef {
    pub id: &'static str,
    pub property: &'static str,
    pub kind: CheckKind,
    pub caps: Caps,
    pub run: fn(&Instance, bool) -> Result<Outcome>,
}

macro_rules! check {
    ($id:literal, $prop:literal, $kind:ident, $caps:expr, $run:ident) => {
        CheckDef {
            id: $id,
            property: $prop,
            kind: CheckKind::$kind,
            caps: $caps,
            run: $run,
        }
    };
}

pub static REGISTRY: &[CheckDef] = &[
    check!("count-oracle", "lattice/oracle-equivalence", Exact, caps(None, Some(200.0), false), count_oracle),
    check!("count-large-regime", "lattice/large-regime-bound", Exact, DEFAULT, count_large_regime),
    check!("count-shift", "lattice/shift-invariance", Exact, caps(None, Some(1e4), false), count_shift),
    check!("lattice-ratio", "lattice/real-count-bound", Empirical, DEFAULT, lattice_ratio),
    check!("gcd-ratio", "lattice/integer-count-bound", Empirical, caps(None, None, true), gcd_ratio),
    check!("erdos-turan", "lattice/erdos-turan", Exact, DEFAULT, erdos_turan),
    check!("erdos-turan-uq", "lattice/erdos-turan-proof-chain", Empirical, caps(None, Some(2000.0), false), erdos_turan_uq),
    check!("exp-sum-integer", "lattice/integer-orthogonality", Exact, caps(None, Some(500.0), true), exp_sum_integer_check),
    check!("e-membership", "approx/e-membership", Exact, caps(None, Some(1e4), false), e_membership),
    check!("decomposition", "approx/decomposition-reconstruction", Exact, DEFAULT, decomposition),
    check!("lemma-cover", "approx/lemma-cover-contains", Exact, DEFAULT, lemma_cover),
    check!("e-monotone", "approx/e-monotone", Exact, DEFAULT, e_monotone),
    check!("f-in-e", "approx/f-inside-e", Exact, DEFAULT, f_in_e),
    check!("f-cover-ratio", "approx/f-cover-bound", Empirical, DEFAULT, f_cover_ratio),
    check!("lemma34-ratio", "approx/hausdorff-bound", Empirical, DEFAULT, lemma34_ratio),
    check!("lemma35-ratio", "approx/lebesgue-bound", Empirical, DEFAULT, lemma35_ratio),
    check!("interval-algebra", "intervals/inclusion-exclusion", Exact, DEFAULT, interval_algebra),
    check!("box-count-measure", "intervals/box-count-dominates", Exact, DEFAULT, box_count_measure),
    check!("tau-numeric", "dimension/numeric-closed-agreement", Exact, EXPONENTIAL_BASES, tau_numeric),
    check!("corollary", "dimension/corollary-consistency", Exact, EXPONENTIAL_BASES, corollary),
    check!("tau-order", "dimension/thm12-dominates-plain", Exact, EXPONENTIAL_BASES, tau_order),
    check!("limsup-monotone", "dimension/limsup-monotone", Exact, EXPONENTIAL_BASES, limsup_monotone),
    check!("box-slope", "dimension/box-slope-at-most-one", Exact, DEFAULT, box_slope),
    check!("planar-product", "planar/product-identity", Exact, DEFAULT, planar_product),
    check!("planar-cover", "planar/cover-membership", Exact, caps(None, Some(1e4), false), planar_cover),
    check!("planar-ratio", "planar/premeasure-bound", Empirical, caps(None, Some(1e4), false), planar_ratio),
    check!("planar-mc", "planar/mc-calibration", Statistical, caps(None, Some(1e3), false), planar_mc),
];

pub fn check_ids() -> Vec<&'static str> {
    REGISTRY.iter().map(|c| c.id).collect()
}

pub(super) fn lookup(id: &str) -> Option<(u64, &'static CheckDef)> {
    REGISTRY
        .iter()
        .enumerate()
        .find(|(_, c)| c.id == id)
        .map(|(i, c)| (i as u64, c))
}

/// What one check concluded on one instance.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Outcome {
    pub applicable: bool,
    pub violation: Option<String>,
    pub values: Vec<f64>,
    pub trace: Option<Value>,
}

impl Outcome {
    fn skip() -> Self {
        Outcome::default()
    }

    fn require(ok: bool, detail: impl FnOnce() -> String) -> Self {
        Outcome {
            applicable: true,
            violation: (!ok).then(detail),
            ..Outcome::default()
        }
    }

    fn ratios(values: Vec<f64>) -> Self {
        let bad = values.iter().find(|v| !v.is_finite()).copied();
        Outcome {
            applicable: true,
            violation: bad.map(|v| format!("non-finite ratio {v}")),
            values,
            trace: None,
        }
    }

    pub(super) fn from_error(err: Error) -> Self {
        Outcome {
            applicable: true,
            violation: Some(format!("error: {err}")),
            ..Outcome::default()
        }
    }

    fn traced(mut self, verbose: bool, trace: impl FnOnce() -> Value) -> Self {
        if verbose {
            self.trace = Some(trace());
        }
        self
    }
}

fn aux_rng(inst: &Instance) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(inst.aux_seed)
}

/// Cells with their nearest-integer centres and root brackets, for replays.
fn cell_trace(p: &FracParams, delta: f64, limit: usize) -> Result<Value> {
    let e = delta * delta / (p.a * p.b);
    let mut cells = Vec::new();
    walk_cells(p, |cell| {
        if cells.len() < limit {
            let (l, r) = (cell.x_p.min(cell.x_q), cell.x_p.max(cell.x_q));
            let h = (r - l) / 2.0;
            let g_out = e / ((h * h + e).sqrt() + h);
            let inner = (h * h > e).then(|| {
                let g_in = e / (h + (h * h - e).sqrt());
                [l + g_in, r - g_in]
            });
            cells.push(json!({
                "cell": [cell.lo, cell.hi],
                "x_p": cell.x_p,
                "x_q": cell.x_q,
                "outer": [l - g_out, r + g_out],
                "inner": inner,
            }));
        }
    })?;
    Ok(Value::Array(cells))
}

fn set_trace(set: &IntervalSet, limit: usize) -> Value {
    json!({
        "components": set.component_count(),
        "measure": set.lebesgue(),
        "first": set.to_pairs().into_iter().take(limit).collect::<Vec<_>>(),
    })
}

fn count_oracle(inst: &Instance, verbose: bool) -> Result<Outcome> {
    let q = LatticeQuery::new(inst.params, inst.eta, inst.xi)?;
    let fast = count_n(&q);
    let naive = oracles::naive_count(&inst.params, inst.eta, inst.xi);
    Ok(Outcome::require(fast == naive, || format!("O(b) count {fast}, double loop {naive}")).traced(verbose, || {
        json!({
            "theta": q.theta(),
            "p_range": q.p_range(),
            "q_range": q.q_range(),
            "fast": fast,
            "naive": naive,
            "pairs": oracles::naive_pairs(&inst.params, inst.eta, inst.xi),
        })
    }))
}

fn count_large_regime(inst: &Instance, verbose: bool) -> Result<Outcome> {
    let q = LatticeQuery::new(inst.params, inst.eta, inst.xi)?;
    if !q.is_large_regime() {
        return Ok(Outcome::skip());
    }
    let count = count_n(&q);
    let cap = 4.0 * (inst.params.b + 2.0);
    Ok(Outcome::require(count as f64 <= cap, || format!("N = {count} exceeds 4(b+2) = {cap}"))
        .traced(verbose, || json!({ "count": count, "cap": cap, "theta": q.theta() })))
}

fn count_shift(inst: &Instance, verbose: bool) -> Result<Outcome> {
    let p = inst.params;
    let base = count_n(&LatticeQuery::new(p, inst.eta, inst.xi)?);
    let k = aux_rng(inst).random_range(-3..=3) as f64;
    let shifted_c = count_n(&LatticeQuery::new(FracParams { c: p.c + k, ..p }, inst.eta, inst.xi)?);
    let shifted_d = count_n(&LatticeQuery::new(FracParams { d: p.d + k, ..p }, inst.eta, inst.xi)?);
    Ok(Outcome::require(base == shifted_c && base == shifted_d, || {
        format!("N = {base}, with c+{k}: {shifted_c}, with d+{k}: {shifted_d}")
    })
    .traced(verbose, || json!({ "shift": k, "counts": [base, shifted_c, shifted_d] })))
}

fn lattice_ratio(inst: &Instance, verbose: bool) -> Result<Outcome> {
    let q = LatticeQuery::new(inst.params, inst.eta, inst.xi)?;
    let ratio = bound_ratio_real(&q);
    Ok(Outcome::ratios(vec![ratio]).traced(verbose, || json!({ "count": count_n(&q), "l": inst.params.l() })))
}

fn gcd_ratio(inst: &Instance, verbose: bool) -> Result<Outcome> {
    let q = LatticeQuery::new(inst.params, inst.eta, inst.xi)?;
    let (count, ratio) = count_n_integer_bound(&q)?;
    Ok(Outcome::ratios(vec![ratio]).traced(verbose, || json!({ "count": count })))
}

const ET_MAX_POINTS: u64 = 300;
const ET_INTERVALS: usize = 10;
const ET_MAX_K: u64 = 50;

fn erdos_turan(inst: &Instance, verbose: bool) -> Result<Outcome> {
    let mut rng = aux_rng(inst);
    let q = rng.random_range(1..=ET_MAX_POINTS);
    let raw: Vec<f64> = (0..q).map(|_| rng.random_range(-3.0..3.0)).collect();
    let points = SamplePoints::new(raw.iter().copied())?;
    let sums = ExpSums::new(&points, ET_MAX_K);
    let mut worst: Option<String> = None;
    let mut rows = Vec::new();
    for _ in 0..ET_INTERVALS {
        let lo = rng.random_range(-1.0..1.0);
        let len = 1.0 - rng.random::<f64>();
        let interval = TorusInterval::new(lo, lo + len)?;
        let d = discrepancy(&points, &interval);
        let d_oracle = oracles::torus_count(&raw, lo, lo + len) as f64 - len * q as f64;
        if (d - d_oracle).abs() > 1e-9 && worst.is_none() {
            worst = Some(format!("discrepancy {d} disagrees with direct count {d_oracle} on [{lo}, {}]", lo + len));
        }
        for k in 1..=ET_MAX_K {
            let rhs = sums.erdos_turan_rhs(len, k);
            if d.abs() > rhs + ERDOS_TURAN_SLACK && worst.is_none() {
                worst = Some(format!("|D| = {} > RHS = {rhs} at K = {k}, I = [{lo}, {}]", d.abs(), lo + len));
            }
        }
        rows.push(json!({ "interval": [lo, lo + len], "discrepancy": d }));
    }
    let ok = worst.is_none();
    Ok(Outcome::require(ok, || worst.unwrap_or_default())
        .traced(verbose, || json!({ "points": q, "intervals": rows })))
}

fn erdos_turan_uq(inst: &Instance, verbose: bool) -> Result<Outcome> {
    let p = inst.params;
    let delta = inst.eta + p.a / p.b * inst.xi;
    if 2.0 * delta > 1.0 {
        return Ok(Outcome::skip());
    }
    let points = build_uq(&p)?;
    let k = default_cutoff(&p);
    let report = discrepancy_report(&points, TorusInterval::new(-delta, delta)?, k)?;
    let ratio = report.rhs / ((p.a + delta * p.b) * p.l());
    let mut out = Outcome::ratios(vec![ratio]);
    if !report.holds {
        out.violation = Some(format!("|D| = {} > RHS = {}", report.discrepancy.abs(), report.rhs));
    }
    Ok(out.traced(verbose, || serde_json::to_value(&report).unwrap_or(Value::Null)))
}

fn exp_sum_integer_check(inst: &Instance, verbose: bool) -> Result<Outcome> {
    let (a, b) = (inst.params.a as u64, inst.params.b as u64);
    let g = num_integer::gcd(a, b);
    let k_max = 3 * b / g;
    let mut bad = None;
    for k in 1..=k_max {
        let (re, im) = exp_sum_integer(a, b, k);
        let want = oracles::integer_exp_sum_expected(a, b, k);
        if ((re - want).abs() > 1e-9 || im.abs() > 1e-9) && bad.is_none() {
            bad = Some(format!("k = {k}: sum = {re} + {im}i, expected {want}"));
        }
    }
    let ok = bad.is_none();
    Ok(Outcome::require(ok, || bad.unwrap_or_default())
        .traced(verbose, || json!({ "a": a, "b": b, "gcd": g, "k_max": k_max })))
}

const MEMBERSHIP_SAMPLES: usize = 10_000;
const ENDPOINT_SLACK: f64 = 1e-9;

fn e_membership(inst: &Instance, verbose: bool) -> Result<Outcome> {
    let p = inst.params;
    let set = compute_e(&p, inst.delta)?;
    let mut rng = aux_rng(inst);
    let mut disagreements = 0u64;
    let mut first = None;
    for _ in 0..MEMBERSHIP_SAMPLES {
        let x: f64 = rng.random();
        if membership(&p, inst.delta, x) != set.contains(x) && set.distance_to_boundary(x) >= ENDPOINT_SLACK {
            disagreements += 1;
            first.get_or_insert(x);
        }
    }
    Ok(Outcome::require(disagreements == 0, || {
        format!("{disagreements} disagreements away from endpoints, first at x = {}", first.unwrap_or(f64::NAN))
    })
    .traced(verbose, || {
        json!({ "set": set_trace(&set, 20), "cells": cell_trace(&p, inst.delta, 20).unwrap_or(Value::Null) })
    }))
}

fn decomposition(inst: &Instance, verbose: bool) -> Result<Outcome> {
    let p = inst.params;
    let e = compute_e(&p, inst.delta)?;
    let dec = decompose_e(&p, inst.delta)?;
    let gap = dec.union().symmetric_difference(&e).lebesgue();
    Ok(Outcome::require(gap < 1e-10, || format!("λ((A∪B∪C) Δ E) = {gap}")).traced(verbose, || {
        json!({
            "e": set_trace(&e, 10),
            "a": set_trace(&dec.a, 10),
            "b": set_trace(&dec.b, 10),
            "c": set_trace(&dec.c, 10),
            "gap": gap,
            "cells": cell_trace(&p, inst.delta, 20).unwrap_or(Value::Null),
        })
    }))
}

fn lemma_cover(inst: &Instance, verbose: bool) -> Result<Outcome> {
    let p = inst.params;
    let e = compute_e(&p, inst.delta)?;
    let cover = LemmaCover::new(&p, inst.delta)?;
    let outside = e.difference(&cover.union_set(&p)?).lebesgue();
    Ok(Outcome::require(outside <= 1e-12, || format!("λ(E minus cover) = {outside}"))
        .traced(verbose, || serde_json::to_value(&cover).unwrap_or(Value::Null)))
}

fn e_monotone(inst: &Instance, verbose: bool) -> Result<Outcome> {
    let p = inst.params;
    let small = compute_e(&p, inst.delta / 2.0)?;
    let large = compute_e(&p, inst.delta)?;
    let outside = small.difference(&large).lebesgue();
    Ok(Outcome::require(outside <= 1e-12, || format!("λ(E(δ/2) minus E(δ)) = {outside}"))
        .traced(verbose, || json!({ "small": set_trace(&small, 10), "large": set_trace(&large, 10) })))
}

fn f_in_e(inst: &Instance, verbose: bool) -> Result<Outcome> {
    let p = inst.params;
    let f = compute_f(&p, inst.eta, inst.xi)?;
    let e = compute_e(&p, (inst.eta * inst.xi).sqrt())?;
    let outside = f.difference(&e).lebesgue();
    Ok(Outcome::require(outside <= 1e-12, || format!("λ(F(η,ξ) minus E(√(ηξ))) = {outside}"))
        .traced(verbose, || json!({ "f": set_trace(&f, 10), "e": set_trace(&e, 10) })))
}

fn f_cover_ratio(inst: &Instance, verbose: bool) -> Result<Outcome> {
    let cover = cover_f(&inst.params, inst.eta, inst.xi)?;
    let ratio = cover.ratio();
    Ok(Outcome::ratios(vec![ratio])
        .traced(verbose, || json!({ "pieces": cover.pieces(), "bound": cover.bound, "mesh": cover.cover.mesh })))
}

/// Exponents at which the Hausdorff premeasure ratio is sampled.
pub const LEMMA34_EXPONENTS: [f64; 4] = [0.3, 0.5, 0.7, 0.9];

fn lemma34_ratio(inst: &Instance, verbose: bool) -> Result<Outcome> {
    let p = inst.params;
    let cover = LemmaCover::new(&p, inst.delta)?;
    let ratios = LEMMA34_EXPONENTS
        .iter()
        .map(|&s| cover.premeasure(s) / hausdorff_bound(&p, inst.delta, s))
        .collect();
    Ok(Outcome::ratios(ratios).traced(verbose, || {
        json!({ "pieces": cover.total_pieces(), "j": cover.indices.j.len(), "l": p.l() })
    }))
}

fn lemma35_ratio(inst: &Instance, verbose: bool) -> Result<Outcome> {
    let p = inst.params;
    let measure = compute_e(&p, inst.delta)?.lebesgue();
    let bound = lebesgue_bound(&p, inst.delta);
    Ok(Outcome::ratios(vec![measure / bound]).traced(verbose, || json!({ "measure": measure, "bound": bound })))
}

fn interval_algebra(inst: &Instance, verbose: bool) -> Result<Outcome> {
    let p = inst.params;
    let x = compute_e(&p, inst.delta)?;
    let y = compute_f(&p, inst.eta, inst.xi)?;
    let lhs = x.union(&y).lebesgue() + x.intersect(&y).lebesgue();
    let rhs = x.lebesgue() + y.lebesgue();
    Ok(Outcome::require((lhs - rhs).abs() <= 1e-9, || format!("λ(X∪Y) + λ(X∩Y) = {lhs}, λ(X) + λ(Y) = {rhs}"))
        .traced(verbose, || json!({ "x": set_trace(&x, 10), "y": set_trace(&y, 10) })))
}

fn box_count_measure(inst: &Instance, verbose: bool) -> Result<Outcome> {
    let x = compute_e(&inst.params, inst.delta)?;
    let measure = x.lebesgue();
    let mut rows = Vec::new();
    let mut bad = None;
    for k in [4, 8, 12, 16] {
        let scale = 2f64.powi(-k);
        let covered = x.box_count(scale)? as f64 * scale;
        if covered < measure - 1e-12 && bad.is_none() {
            bad = Some(format!("scale 2^-{k}: boxes cover {covered} < λ = {measure}"));
        }
        rows.push(json!([scale, covered]));
    }
    let ok = bad.is_none();
    Ok(Outcome::require(ok, || bad.unwrap_or_default()).traced(verbose, || json!({ "measure": measure, "boxes": rows })))
}

/// An exponential series instance: `a_n = aⁿ`, `b_n = bⁿ`, and either
/// `ψ = b^{-tn}` or `ψ = e^{-λn}` chosen from the auxiliary seed.
fn exponential_series(inst: &Instance, family: SeriesFamily) -> Result<Option<SeriesSpec>> {
    let p = inst.params;
    if p.b <= p.a * (1.0 + 1e-9) {
        return Ok(None);
    }
    let param = 0.1 + 4.9 * inst.xi;
    let psi = if inst.aux_seed % 2 == 0 {
        PsiSpec::ScaledBase { t: param }
    } else {
        PsiSpec::Exponential { lambda: param }
    };
    SeriesSpec::new(SequenceSpec::exponential(p.a, p.b)?, psi, family).map(Some)
}

fn tau_numeric(inst: &Instance, verbose: bool) -> Result<Outcome> {
    let Some(spec) = exponential_series(inst, SeriesFamily::Thm12)? else {
        return Ok(Outcome::skip());
    };
    let closed = compute_tau(&spec, false)?;
    let numeric = compute_tau(&spec, true)?;
    let gap = (closed.tau - numeric.tau).abs();
    Ok(Outcome::require(gap <= 1e-3, || format!("closed-form τ = {}, bisection τ = {}", closed.tau, numeric.tau))
        .traced(verbose, || json!({ "psi": spec.psi, "closed": closed, "numeric": numeric })))
}

fn corollary(inst: &Instance, verbose: bool) -> Result<Outcome> {
    let p = inst.params;
    if p.b <= p.a * (1.0 + 1e-9) {
        return Ok(Outcome::skip());
    }
    let threshold = corollary_threshold(p.a, p.b)?;
    let square_root_case = p.a * p.a <= p.b;
    let mut problems = Vec::new();
    if square_root_case && threshold != 0.0 {
        problems.push(format!("a² ≤ b but threshold = {threshold}"));
    }
    if square_root_case {
        let t = 0.1 + 4.9 * inst.xi;
        let seq = SequenceSpec::exponential(p.a, p.b)?;
        let psi = PsiSpec::ScaledBase { t };
        let full = compute_tau(&SeriesSpec::new(seq.clone(), psi.clone(), SeriesFamily::Thm12)?, false)?;
        let plain = compute_tau(&SeriesSpec::new(seq, psi, SeriesFamily::TauPlain)?, false)?;
        if (full.tau - plain.tau).abs() > 1e-12 {
            problems.push(format!("a² ≤ b but τ_thm12 = {} ≠ τ_plain = {}", full.tau, plain.tau));
        }
    }
    Ok(Outcome::require(problems.is_empty(), || problems.join("; "))
        .traced(verbose, || json!({ "threshold": threshold, "a_squared_le_b": square_root_case })))
}

fn tau_order(inst: &Instance, verbose: bool) -> Result<Outcome> {
    let (Some(full), Some(plain)) = (
        exponential_series(inst, SeriesFamily::Thm12)?,
        exponential_series(inst, SeriesFamily::TauPlain)?,
    ) else {
        return Ok(Outcome::skip());
    };
    let full = compute_tau(&full, false)?;
    let plain = compute_tau(&plain, false)?;
    Ok(Outcome::require(full.tau >= plain.tau, || format!("τ_thm12 = {} < τ_plain = {}", full.tau, plain.tau))
        .traced(verbose, || json!({ "thm12": full, "tau_plain": plain })))
}

fn limsup_monotone(inst: &Instance, verbose: bool) -> Result<Outcome> {
    let p = inst.params;
    if p.b <= p.a * (1.0 + 1e-9) {
        return Ok(Outcome::skip());
    }
    let seq = SequenceSpec::exponential(p.a, p.b)?;
    let psi = PsiSpec::ScaledBase { t: 0.5 + 2.0 * inst.xi };
    let narrow = truncated_limsup(&seq, &psi, 2, 3)?;
    let wide = truncated_limsup(&seq, &psi, 1, 3)?;
    let outside = narrow.difference(&wide).lebesgue();
    Ok(Outcome::require(outside <= 1e-12 && narrow.lebesgue() <= wide.lebesgue() + 1e-12, || {
        format!("λ(U[2,3]) = {}, λ(U[1,3]) = {}, leftover {outside}", narrow.lebesgue(), wide.lebesgue())
    })
    .traced(verbose, || json!({ "narrow": set_trace(&narrow, 10), "wide": set_trace(&wide, 10) })))
}

fn box_slope(inst: &Instance, verbose: bool) -> Result<Outcome> {
    let set = compute_e(&inst.params, inst.delta)?;
    if set.is_empty() {
        return Ok(Outcome::skip());
    }
    let est = box_dimension_of_set(&set, &dyadic_scales(1, 12))?;
    Ok(Outcome::require(est.slope <= 1.02, || format!("slope {} exceeds 1.02", est.slope))
        .traced(verbose, || serde_json::to_value(&est).unwrap_or(Value::Null)))
}

fn planar_product(inst: &Instance, verbose: bool) -> Result<Outcome> {
    let p = inst.params;
    let f = compute_f2(&p, inst.eta, inst.xi)?;
    let area = f.area();
    let x = near_integer_set(p.a, p.c, inst.eta).lebesgue();
    let y = near_integer_set(p.b, p.d, inst.xi).lebesgue();
    let closed = oracles::window_measure(p.a, p.c, inst.eta) * oracles::window_measure(p.b, p.d, inst.xi);
    // each summed endpoint carries its own rounding
    let tol = 1e-12 + 1e-15 * (f.x.component_count() + f.y.component_count()) as f64;
    let mut problems = Vec::new();
    if (area - x * y).abs() > 1e-12 {
        problems.push(format!("area {area}, product of 1-D measures {}", x * y));
    }
    if (area - closed).abs() > tol {
        problems.push(format!("area {area}, closed-form product {closed}"));
    }
    Ok(Outcome::require(problems.is_empty(), || problems.join("; "))
        .traced(verbose, || json!({ "area": area, "x": x, "y": y, "closed_form": closed, "boxes": f.box_count() })))
}

fn planar_cover(inst: &Instance, verbose: bool) -> Result<Outcome> {
    let p = inst.params;
    let dec = decompose_e2(&p, inst.delta)?;
    let mut rng = aux_rng(inst);
    let mut escaped = 0u64;
    let mut outside_e = 0u64;
    for _ in 0..MEMBERSHIP_SAMPLES {
        let (x, y): (f64, f64) = (rng.random(), rng.random());
        if membership_e2(&p, inst.delta, x, y) && !dec.covers(x, y) {
            escaped += 1;
        }
        let strictly_inside = dec.a_prime.x.distance_to_boundary(x) >= ENDPOINT_SLACK
            && dec.a_prime.y.distance_to_boundary(y) >= ENDPOINT_SLACK;
        if dec.a_prime.contains(x, y) && strictly_inside && !membership_e2(&p, inst.delta, x, y) {
            outside_e += 1;
        }
    }
    Ok(Outcome::require(escaped == 0 && outside_e == 0, || {
        format!("{escaped} members of E′ outside the cover, {outside_e} points of A′ outside E′")
    })
    .traced(verbose, || json!({ "j": dec.indices, "a_prime_area": dec.a_prime.area() })))
}

fn planar_ratio(inst: &Instance, verbose: bool) -> Result<Outcome> {
    let dec = decompose_e2(&inst.params, inst.delta)?;
    let bounds = dec.bounds(inst.s)?;
    Ok(Outcome::ratios(vec![bounds.ratio]).traced(verbose, || serde_json::to_value(&bounds).unwrap_or(Value::Null)))
}

/// Standard errors allowed between a Monte Carlo area and the exact one.
pub const MC_GATE: f64 = 4.0;

fn planar_mc(inst: &Instance, verbose: bool) -> Result<Outcome> {
    let p = inst.params;
    let f = compute_f2(&p, inst.eta, inst.xi)?;
    let area = f.area();
    let est = mc_fraction(4 * MIN_SAMPLES, inst.aux_seed, |x, y| f.contains(x, y))?;
    let gap = (est.estimate - area).abs();
    Ok(Outcome::require(gap <= MC_GATE * est.stderr + 1e-12, || {
        format!("MC area {} ± {}, exact {area}", est.estimate, est.stderr)
    })
    .traced(verbose, || json!({ "estimate": est, "area": area })))
}
