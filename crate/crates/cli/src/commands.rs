//! One handler per subcommand.

use std::path::Path;

use diophlab::approx::{compute_e, compute_f, cover_f, hausdorff_bound, lebesgue_bound, DyadicIndices, LemmaCover};
use diophlab::config::Model;
use diophlab::dimension::{
    check_convergence_conditions, compute_tau, corollary_threshold, dyadic_scales, estimate_box_dimension,
    BoxDimEstimate, ConditionsReport, SeriesFamily, SeriesSpec, TauResult,
};
use diophlab::lattice::{build_uq, count_n, default_cutoff, discrepancy_report, DiscrepancyReport, LatticeQuery, TorusInterval};
use diophlab::planar::{compute_f2, cover_count_f2, decompose_e2, mc_measure_e2, unit_e2_area, McEstimate, PlanarCover, MIN_SAMPLES};
use diophlab::verify::{replay_file, resolve_checks, run_campaign, CampaignReport, InstanceDistribution, ReplayResult};
use diophlab::{FracParams, IntervalSet, PsiSpec, SequenceSpec};
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::args::{check_unit, parse_grid, parse_psi, parse_range, usage, ParamArgs, PlanarOp, Window};
use crate::output::{compute, num, Output, Table};
use crate::CliError;

fn param_cells(p: &FracParams) -> Vec<String> {
    vec![num(p.a), num(p.b), num(p.c), num(p.d)]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetOutput {
    pub kind: String,
    pub params: FracParams,
    pub delta: Option<f64>,
    pub eta: Option<f64>,
    pub xi: Option<f64>,
    pub measure: f64,
    pub components: usize,
    pub set: IntervalSet,
}

pub fn set(params: &ParamArgs, delta: Option<f64>, eta: Option<f64>, xi: Option<f64>) -> Result<Output, CliError> {
    let p = params.params()?;
    let nonneg = |name: &str, v: f64| {
        if v >= 0.0 && v.is_finite() {
            Ok(())
        } else {
            Err(CliError::Usage(format!("--{name} must be a finite nonnegative number, got {v}")))
        }
    };
    let (kind, set) = match (delta, eta, xi) {
        (Some(d), None, None) => {
            nonneg("delta", d)?;
            ("E", compute_e(&p, d).map_err(compute)?)
        }
        (None, Some(e), Some(x)) => {
            nonneg("eta", e)?;
            nonneg("xi", x)?;
            ("F", compute_f(&p, e, x).map_err(compute)?)
        }
        _ => return Err(CliError::Usage("give either --delta or both --eta and --xi".into())),
    };
    let mut table = Table::new(&["lo", "hi"]);
    for (lo, hi) in set.to_pairs() {
        table.push(vec![num(lo), num(hi)]);
    }
    let out = SetOutput {
        kind: kind.into(),
        params: p,
        delta,
        eta,
        xi,
        measure: set.lebesgue(),
        components: set.component_count(),
        set,
    };
    Output::new(&out, table)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverOutput {
    pub params: FracParams,
    pub eta: f64,
    pub xi: f64,
    pub mesh: f64,
    pub pieces: usize,
    pub bound: f64,
    pub ratio: f64,
}

pub fn cover(params: &ParamArgs, window: &Window) -> Result<Output, CliError> {
    let p = params.params()?;
    window.validate()?;
    let c = cover_f(&p, window.eta, window.xi).map_err(compute)?;
    let out = CoverOutput {
        params: p,
        eta: window.eta,
        xi: window.xi,
        mesh: c.cover.mesh,
        pieces: c.pieces(),
        bound: c.bound,
        ratio: c.ratio(),
    };
    let mut table = Table::new(&["a", "b", "c", "d", "eta", "xi", "pieces", "bound", "ratio"]);
    let mut row = param_cells(&p);
    row.extend([num(out.eta), num(out.xi), out.pieces.to_string(), num(out.bound), num(out.ratio)]);
    table.push(row);
    Output::new(&out, table)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountOutput {
    pub params: FracParams,
    pub eta: f64,
    pub xi: f64,
    pub theta: f64,
    pub count: u64,
    /// `real` for (bη + a)L, `gcd` for bη + gcd(a, b).
    pub bound_kind: String,
    pub bound: f64,
    pub ratio: f64,
}

pub fn count(params: &ParamArgs, window: &Window, integer_bound: bool) -> Result<Output, CliError> {
    let p = params.params()?;
    window.validate()?;
    let q = LatticeQuery::new(p, window.eta, window.xi).map_err(usage)?;
    let (bound_kind, bound) = if integer_bound {
        let natural = |x: f64| x.fract() == 0.0 && (1.0..2f64.powi(53)).contains(&x);
        if !(natural(p.a) && natural(p.b)) {
            return Err(CliError::Usage("--integer-bound needs natural --a and --b".into()));
        }
        let g = (p.a as u64).gcd(&(p.b as u64));
        ("gcd", p.b * window.eta + g as f64)
    } else {
        ("real", (p.b * window.eta + p.a) * p.l())
    };
    let n = count_n(&q);
    let out = CountOutput {
        params: p,
        eta: window.eta,
        xi: window.xi,
        theta: q.theta(),
        count: n,
        bound_kind: bound_kind.into(),
        bound,
        ratio: n as f64 / bound,
    };
    let mut table = Table::new(&["a", "b", "c", "d", "eta", "xi", "count", "bound", "ratio"]);
    let mut row = param_cells(&p);
    row.extend([num(out.eta), num(out.xi), n.to_string(), num(bound), num(out.ratio)]);
    table.push(row);
    Output::new(&out, table)
}

pub fn discrepancy(params: &ParamArgs, window: &Window, k: Option<u64>) -> Result<Output, CliError> {
    let p = params.params()?;
    window.validate()?;
    let delta = window.eta + p.a / p.b * window.xi;
    if 2.0 * delta > 1.0 {
        return Err(CliError::Usage(format!(
            "η + (a/b)ξ = {delta} exceeds 1/2, so [−δ, δ] wraps the whole circle"
        )));
    }
    let points = build_uq(&p).map_err(compute)?;
    let k = k.unwrap_or_else(|| default_cutoff(&p));
    let interval = TorusInterval::new(-delta, delta).map_err(usage)?;
    let report: DiscrepancyReport = discrepancy_report(&points, interval, k).map_err(compute)?;
    let mut table = Table::new(&["q", "k", "lo", "hi", "discrepancy", "rhs", "holds"]);
    table.push(vec![
        report.q.to_string(),
        report.k.to_string(),
        num(report.interval.lo),
        num(report.interval.hi),
        num(report.discrepancy),
        num(report.rhs),
        report.holds.to_string(),
    ]);
    let failure = (!report.holds).then(|| format!("|D| = {} exceeds RHS = {}", report.discrepancy.abs(), report.rhs));
    Ok(Output::new(&report, table)?.failing(failure))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PremeasureRow {
    pub s: f64,
    pub pieces: u64,
    pub premeasure: f64,
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureOutput {
    pub params: FracParams,
    pub delta: f64,
    pub measure: f64,
    pub lebesgue_bound: f64,
    pub lebesgue_ratio: f64,
    pub indices: DyadicIndices,
    pub hausdorff: Vec<PremeasureRow>,
}

pub fn measure(params: &ParamArgs, delta: f64, exponents: &[f64]) -> Result<Output, CliError> {
    let p = params.params()?;
    if !(delta > 0.0 && delta <= 0.5) {
        return Err(CliError::Usage(format!("--delta must lie in (0, 1/2], got {delta}")));
    }
    for &s in exponents {
        if !(s > 0.0 && s <= 1.0) {
            return Err(CliError::Usage(format!("--s must lie in (0, 1], got {s}")));
        }
    }
    let measure = compute_e(&p, delta).map_err(compute)?.lebesgue();
    let bound = lebesgue_bound(&p, delta);
    let cover = LemmaCover::new(&p, delta).map_err(compute)?;
    let hausdorff: Vec<PremeasureRow> = exponents
        .iter()
        .map(|&s| {
            let premeasure = cover.premeasure(s);
            let hb = hausdorff_bound(&p, delta, s);
            PremeasureRow {
                s,
                pieces: cover.total_pieces(),
                premeasure,
                bound: hb,
                ratio: premeasure / hb,
            }
        })
        .collect();
    let out = MeasureOutput {
        params: p,
        delta,
        measure,
        lebesgue_bound: bound,
        lebesgue_ratio: measure / bound,
        indices: cover.indices.clone(),
        hausdorff,
    };
    let mut table = Table::new(&[
        "a",
        "b",
        "c",
        "d",
        "delta",
        "measure",
        "lebesgue_bound",
        "lebesgue_ratio",
        "s",
        "premeasure",
        "hausdorff_bound",
        "hausdorff_ratio",
    ]);
    let base = |s: Option<&PremeasureRow>| {
        let mut row = param_cells(&p);
        row.extend([num(delta), num(measure), num(bound), num(out.lebesgue_ratio)]);
        row.extend([
            num(s.map(|r| r.s)),
            num(s.map(|r| r.premeasure)),
            num(s.map(|r| r.bound)),
            num(s.map(|r| r.ratio)),
        ]);
        row
    };
    if out.hausdorff.is_empty() {
        table.push(base(None));
    }
    for r in &out.hausdorff {
        table.push(base(Some(r)));
    }
    Output::new(&out, table)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauOutput {
    #[serde(flatten)]
    pub result: TauResult,
    pub conditions: Option<ConditionsReport>,
}

pub struct TauArgs<'a> {
    pub family: SeriesFamily,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub model: Option<&'a Path>,
    pub psi: Option<&'a str>,
    pub psi_kind: Option<&'a str>,
    pub psi_param: Option<f64>,
    pub numeric: bool,
    pub s: Option<f64>,
}

pub fn tau(args: TauArgs) -> Result<Output, CliError> {
    let psi_flag = match (args.psi, args.psi_kind, args.psi_param) {
        (Some(text), _, _) => Some(parse_psi(text)?),
        (None, Some(kind), Some(param)) => Some(parse_psi(&format!("{kind}:{param}"))?),
        _ => None,
    };
    let (seq, psi) = match args.model {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            let model = Model::from_json(&text).map_err(usage)?;
            (model.seq, psi_flag.unwrap_or(model.psi))
        }
        None => {
            let (Some(a), Some(b)) = (args.a, args.b) else {
                return Err(CliError::Usage("give --a and --b, or --model".into()));
            };
            let psi = psi_flag.ok_or_else(|| CliError::Usage("give --psi or --psi-kind with --psi-param".into()))?;
            (SequenceSpec::exponential(a, b).map_err(usage)?, psi)
        }
    };
    if let Some(s) = args.s {
        if !(s > 0.0 && s <= 1.0) {
            return Err(CliError::Usage(format!("--s must lie in (0, 1], got {s}")));
        }
    }
    let spec = SeriesSpec::new(seq.clone(), psi.clone(), args.family).map_err(usage)?;
    let result = compute_tau(&spec, args.numeric).map_err(compute)?;
    let conditions = args
        .s
        .map(|s| check_convergence_conditions(&seq, &psi, s))
        .transpose()
        .map_err(compute)?;
    let mut table = Table::new(&["family", "tau", "method", "term", "threshold"]);
    let method = serde_json::to_value(result.method).map_err(compute)?;
    let method = method.as_str().unwrap_or_default().to_string();
    for t in &result.thresholds {
        table.push(vec![
            result.family.name().into(),
            num(result.tau),
            method.clone(),
            t.term.clone(),
            num(t.raw),
        ]);
    }
    Output::new(&TauOutput { result, conditions }, table)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub a: f64,
    pub b: f64,
    pub t: f64,
    pub tau_plain: f64,
    pub tau_thm12: f64,
    pub corollary_threshold: f64,
    pub boxdim: Option<BoxDimEstimate>,
    pub boxdim_error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanOutput {
    pub psi_kind: String,
    pub rows: Vec<ScanRow>,
    /// Grid points with b ≤ a or a ≤ 1, which have no exponential model.
    pub skipped: usize,
}

pub struct ScanArgs<'a> {
    pub a: &'a str,
    pub b: &'a str,
    pub t: &'a str,
    pub psi_kind: &'a str,
    pub boxdim: bool,
    pub n_range: &'a str,
    pub scales: &'a str,
}

pub fn scan(args: ScanArgs) -> Result<Output, CliError> {
    let a_grid = parse_grid("a", args.a)?;
    let b_grid = parse_grid("b", args.b)?;
    let t_grid = parse_grid("t", args.t)?;
    let make_psi = match args.psi_kind {
        "base" => |t: f64| PsiSpec::ScaledBase { t },
        "exp" => |t: f64| PsiSpec::Exponential { lambda: t },
        other => return Err(CliError::Usage(format!("--psi-kind must be base or exp, got {other}"))),
    };
    let (n_lo, n_hi) = parse_range("n-range", args.n_range)?;
    let (k_lo, k_hi) = parse_range("scales", args.scales)?;
    if args.boxdim && (n_lo == 0 || k_hi - k_lo < 3) {
        return Err(CliError::Usage("--boxdim needs n ≥ 1 and at least four scales".into()));
    }
    for &t in &t_grid {
        make_psi(t).validate().map_err(usage)?;
    }
    let mut grid = Vec::new();
    let mut skipped = 0;
    for &a in &a_grid {
        for &b in &b_grid {
            for &t in &t_grid {
                if a > 1.0 && a < b {
                    grid.push((a, b, t));
                } else {
                    skipped += 1;
                }
            }
        }
    }
    let scales = dyadic_scales(k_lo as u32, k_hi as u32);
    let rows = grid
        .par_iter()
        .map(|&(a, b, t)| -> diophlab::Result<ScanRow> {
            let seq = SequenceSpec::exponential(a, b)?;
            let psi = make_psi(t);
            let tau_of = |family| -> diophlab::Result<f64> {
                Ok(compute_tau(&SeriesSpec::new(seq.clone(), psi.clone(), family)?, false)?.tau)
            };
            let (boxdim, boxdim_error) = if args.boxdim {
                match estimate_box_dimension(&seq, &psi, n_lo, n_hi, &scales) {
                    Ok(est) => (Some(est), None),
                    Err(e) => (None, Some(e.to_string())),
                }
            } else {
                (None, None)
            };
            Ok(ScanRow {
                a,
                b,
                t,
                tau_plain: tau_of(SeriesFamily::TauPlain)?,
                tau_thm12: tau_of(SeriesFamily::Thm12)?,
                corollary_threshold: corollary_threshold(a, b)?,
                boxdim,
                boxdim_error,
            })
        })
        .collect::<diophlab::Result<Vec<_>>>()
        .map_err(compute)?;
    let mut table = Table::new(&["a", "b", "t", "tau_plain", "tau_thm12", "corollary_threshold", "boxdim_estimate"]);
    for r in &rows {
        table.push(vec![
            num(r.a),
            num(r.b),
            num(r.t),
            num(r.tau_plain),
            num(r.tau_thm12),
            num(r.corollary_threshold),
            num(r.boxdim.as_ref().map(|e| e.slope)),
        ]);
    }
    let out = ScanOutput {
        psi_kind: args.psi_kind.into(),
        rows,
        skipped,
    };
    Output::new(&out, table)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanarAreaOutput {
    pub params: FracParams,
    pub eta: f64,
    pub xi: f64,
    pub x_measure: f64,
    pub y_measure: f64,
    pub area: f64,
    pub boxes: usize,
    pub delta: Option<f64>,
    pub mc: Option<McEstimate>,
    /// Exact area of E′(δ) when a = b = 1 and c = d = 0.
    pub e2_exact: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanarCoverOutput {
    pub params: FracParams,
    pub eta: f64,
    pub xi: f64,
    #[serde(flatten)]
    pub cover: PlanarCover,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnulusRow {
    pub part: String,
    pub j: Option<u32>,
    pub eta: f64,
    pub xi: f64,
    pub boxes: usize,
    pub area: f64,
    pub premeasure: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanarDecomposeOutput {
    pub params: FracParams,
    pub delta: f64,
    pub s: f64,
    pub indices: DyadicIndices,
    pub pieces: Vec<AnnulusRow>,
    pub total: f64,
    pub bound: f64,
    pub ratio: f64,
    pub annulus_area: f64,
    pub area_ratio: Option<f64>,
}

pub fn planar(op: &PlanarOp, seed: u64) -> Result<Output, CliError> {
    match op {
        PlanarOp::Area {
            params,
            window,
            delta,
            samples,
        } => {
            let p = params.params()?;
            window.validate()?;
            if let Some(d) = delta {
                if !(*d >= 0.0 && d.is_finite()) {
                    return Err(CliError::Usage(format!("--delta must be finite and nonnegative, got {d}")));
                }
                if *samples < MIN_SAMPLES {
                    return Err(CliError::Usage(format!("--samples must be at least {MIN_SAMPLES}")));
                }
            }
            let f = compute_f2(&p, window.eta, window.xi).map_err(compute)?;
            let mc = delta
                .map(|d| mc_measure_e2(&p, d, *samples, seed))
                .transpose()
                .map_err(compute)?;
            let unit = p.a == 1.0 && p.b == 1.0 && p.c == 0.0 && p.d == 0.0;
            let out = PlanarAreaOutput {
                params: p,
                eta: window.eta,
                xi: window.xi,
                x_measure: f.x.lebesgue(),
                y_measure: f.y.lebesgue(),
                area: f.area(),
                boxes: f.box_count(),
                delta: *delta,
                mc,
                e2_exact: delta.filter(|_| unit).map(unit_e2_area),
            };
            let mut table = Table::new(&[
                "a",
                "b",
                "c",
                "d",
                "eta",
                "xi",
                "x_measure",
                "y_measure",
                "area",
                "boxes",
                "delta",
                "mc_estimate",
                "mc_stderr",
                "mc_samples",
                "e2_exact",
            ]);
            let mut row = param_cells(&p);
            row.extend([
                num(out.eta),
                num(out.xi),
                num(out.x_measure),
                num(out.y_measure),
                num(out.area),
                out.boxes.to_string(),
                num(out.delta),
                num(mc.map(|m| m.estimate)),
                num(mc.map(|m| m.stderr)),
                mc.map(|m| m.samples.to_string()).unwrap_or_default(),
                num(out.e2_exact),
            ]);
            table.push(row);
            Output::new(&out, table)
        }
        PlanarOp::Cover { params, window, s } => {
            let p = params.params()?;
            window.validate()?;
            if !(*s > 0.0 && *s <= 1.0) {
                return Err(CliError::Usage(format!("--s must lie in (0, 1], got {s}")));
            }
            let cover = cover_count_f2(&p, window.eta, window.xi, *s).map_err(compute)?;
            let mut table = Table::new(&[
                "a",
                "b",
                "c",
                "d",
                "eta",
                "xi",
                "s",
                "squares",
                "mesh",
                "premeasure",
                "bound",
                "ratio",
                "count_ratio",
            ]);
            let mut row = param_cells(&p);
            row.extend([
                num(window.eta),
                num(window.xi),
                num(*s),
                cover.squares.to_string(),
                num(cover.mesh),
                num(cover.premeasure),
                num(cover.bound),
                num(cover.ratio),
                num(cover.count_ratio),
            ]);
            table.push(row);
            let out = PlanarCoverOutput {
                params: p,
                eta: window.eta,
                xi: window.xi,
                cover,
            };
            Output::new(&out, table)
        }
        PlanarOp::Decompose { params, delta, s } => {
            let p = params.params()?;
            if !(*delta > 0.0 && *delta <= 0.5) {
                return Err(CliError::Usage(format!("--delta must lie in (0, 1/2], got {delta}")));
            }
            check_unit("s", *s)?;
            let dec = decompose_e2(&p, *delta).map_err(compute)?;
            let bounds = dec.bounds(*s).map_err(compute)?;
            let mut pieces = vec![AnnulusRow {
                part: "A".into(),
                j: None,
                eta: *delta,
                xi: *delta,
                boxes: dec.a_prime.box_count(),
                area: dec.a_prime.area(),
                premeasure: bounds.a_premeasure,
            }];
            for (part, annuli, premeasures) in [
                ("B", &dec.b_annuli, &bounds.b_premeasures),
                ("C", &dec.c_annuli, &bounds.c_premeasures),
            ] {
                for (ann, &pm) in annuli.iter().zip(premeasures) {
                    pieces.push(AnnulusRow {
                        part: part.into(),
                        j: Some(ann.j),
                        eta: ann.eta,
                        xi: ann.xi,
                        boxes: ann.set.box_count(),
                        area: ann.set.area(),
                        premeasure: pm,
                    });
                }
            }
            let mut table = Table::new(&["part", "j", "eta", "xi", "boxes", "area", "premeasure"]);
            for r in &pieces {
                table.push(vec![
                    r.part.clone(),
                    r.j.map(|j| j.to_string()).unwrap_or_default(),
                    num(r.eta),
                    num(r.xi),
                    r.boxes.to_string(),
                    num(r.area),
                    num(r.premeasure),
                ]);
            }
            let out = PlanarDecomposeOutput {
                params: p,
                delta: *delta,
                s: *s,
                indices: dec.indices.clone(),
                pieces,
                total: bounds.total,
                bound: bounds.bound,
                ratio: bounds.ratio,
                annulus_area: bounds.annulus_area,
                area_ratio: bounds.area_ratio,
            };
            Output::new(&out, table)
        }
    }
}

pub fn verify(count: u64, checks: &[String], seed: u64, failures: &Path) -> Result<(Output, usize), CliError> {
    let dist = InstanceDistribution::new(count, seed);
    dist.validate().map_err(usage)?;
    resolve_checks(checks).map_err(usage)?;
    let campaign = run_campaign(&dist, checks).map_err(compute)?;
    let report: CampaignReport = campaign.report;
    if !campaign.failures.is_empty() {
        std::fs::create_dir_all(failures).map_err(|e| CliError::Compute(format!("{}: {e}", failures.display())))?;
        for record in &campaign.failures {
            let path = failures.join(record.file_name());
            let text = serde_json::to_string_pretty(record).map_err(compute)?;
            std::fs::write(&path, text).map_err(|e| CliError::Compute(format!("{}: {e}", path.display())))?;
        }
    }
    let mut table = Table::new(&[
        "id",
        "property",
        "kind",
        "instances",
        "applicable",
        "violations",
        "ratio_max",
        "ratio_p99",
        "ratio_median",
        "passed",
    ]);
    for c in &report.checks {
        let kind = serde_json::to_value(c.kind).map_err(compute)?;
        table.push(vec![
            c.id.clone(),
            c.property.clone(),
            kind.as_str().unwrap_or_default().into(),
            c.instances.to_string(),
            c.applicable.to_string(),
            c.violation_count.to_string(),
            num(c.ratios.as_ref().map(|r| r.max)),
            num(c.ratios.as_ref().map(|r| r.p99)),
            num(c.ratios.as_ref().map(|r| r.median)),
            c.passed.to_string(),
        ]);
    }
    let failing: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.id.as_str()).collect();
    let failure = (!failing.is_empty()).then(|| {
        format!(
            "checks failed: {}; replay files in {}",
            failing.join(", "),
            failures.display()
        )
    });
    let written = campaign.failures.len();
    Ok((Output::new(&report, table)?.failing(failure), written))
}

pub fn replay(file: &Path, verbose: bool) -> Result<Output, CliError> {
    let result: ReplayResult = match replay_file(file, verbose) {
        Ok(r) => r,
        Err(diophlab::Error::Parse(msg)) => return Err(CliError::Usage(format!("{}: {msg}", file.display()))),
        Err(e) => return Err(compute(e)),
    };
    let mut table = Table::new(&["check", "index", "passed", "detail"]);
    table.push(vec![
        result.check.clone(),
        result.instance.index.to_string(),
        result.passed.to_string(),
        result.detail.clone().unwrap_or_default(),
    ]);
    let failure = (!result.passed).then(|| format!("{} failed: {}", result.check, result.detail.clone().unwrap_or_default()));
    Ok(Output::new(&result, table)?.failing(failure))
}
