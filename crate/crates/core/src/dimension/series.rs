//! Hypothesis series, their convergence and the exponent `τ`.
//!
//! For exponential and linear sequences with a parametric `ψ` every term is,
//! up to a constant factor, `e^{g·n}·n^{h}·(log n)^{l}` with `(g, h, l)` affine
//! in `s`, so convergence and thresholds are decided exactly. Tables fall back
//! to a tail ratio test.

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequences::{PsiSpec, SequenceKind, SequenceSpec};

/// Terms used by the numeric tail fit.
pub const N_MAX: u64 = 10_000;
/// Width of the ratio-test indifference band around 1.
pub const RATIO_BAND: f64 = 1e-3;
/// Bisection range for numeric thresholds.
pub const S_MIN: f64 = 1e-3;
pub const S_MAX: f64 = 1.0 - 1e-3;

/// Largest relative change between the two half-window mean log-ratios
/// for the ratio to count as stable.
pub const RATIO_DRIFT: f64 = 0.05;

const EXACT_EPS: f64 = 1e-12;
const FIT_EPS: f64 = 1e-9;
const BISECTION_STEPS: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesFamily {
    /// `b_n(ψ/b_n)^s + a_n(ψ/(a_n b_n))^{s/2}`.
    Thm12,
    /// `b_n(ψ/b_n)^s + gcd(a_n, b_n)(ψ/(a_n b_n))^{s/2}`.
    Thm11,
    /// The four-term series carrying the `log b_n / a_n` factors.
    Prop41,
    /// The `s`-free series whose convergence gives `λ(M(ψ)) = 0`.
    Lebesgue,
    /// `b_n(ψ/b_n)^s`.
    TauPlain,
}

impl SeriesFamily {
    pub const ALL: [SeriesFamily; 5] = [
        SeriesFamily::Thm12,
        SeriesFamily::Thm11,
        SeriesFamily::Prop41,
        SeriesFamily::Lebesgue,
        SeriesFamily::TauPlain,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SeriesFamily::Thm12 => "thm12",
            SeriesFamily::Thm11 => "thm11",
            SeriesFamily::Prop41 => "prop41",
            SeriesFamily::Lebesgue => "lebesgue",
            SeriesFamily::TauPlain => "tau-plain",
        }
    }

    fn terms(self) -> &'static [SubTerm] {
        use SubTerm::*;
        match self {
            SeriesFamily::Thm12 => &[Main, Cross],
            SeriesFamily::Thm11 => &[Main, CrossGcd],
            SeriesFamily::Prop41 => &[Main, MainLog, Cross, CrossLog],
            SeriesFamily::Lebesgue => &[LebPsiLog, LebPsiLogB, LebRatio, LebCrossLog],
            SeriesFamily::TauPlain => &[Main],
        }
    }

    pub fn depends_on_s(self) -> bool {
        self != SeriesFamily::Lebesgue
    }
}

impl fmt::Display for SeriesFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SeriesFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SeriesFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown series family `{s}`")))
    }
}

/// One summand of a hypothesis series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SubTerm {
    Main,
    MainLog,
    Cross,
    CrossGcd,
    CrossLog,
    LebPsiLog,
    LebPsiLogB,
    LebRatio,
    LebCrossLog,
}

impl SubTerm {
    fn label(self) -> &'static str {
        match self {
            SubTerm::Main => "b(psi/b)^s",
            SubTerm::MainLog => "b(psi/b)^s*log(b)/a",
            SubTerm::Cross => "a(psi/(ab))^(s/2)",
            SubTerm::CrossGcd => "gcd(a,b)(psi/(ab))^(s/2)",
            SubTerm::CrossLog => "(psi/(ab))^(s/2)*log(b)",
            SubTerm::LebPsiLog => "psi*log(1/psi)",
            SubTerm::LebPsiLogB => "(psi/a)*log(b)*log(1/psi)",
            SubTerm::LebRatio => "(psi*a/b)^(1/2)",
            SubTerm::LebCrossLog => "(psi/(ab))^(1/2)*log(b)",
        }
    }
}

/// A hypothesis series: the family's terms built from `seq` and `ψ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesSpec {
    pub seq: SequenceSpec,
    pub psi: PsiSpec,
    pub family: SeriesFamily,
}

/// Per-index logarithms shared by all terms.
struct LnParts {
    a: f64,
    b: f64,
    psi: f64,
    ln_log_b: f64,
    ln_log_inv_psi: f64,
}

impl SeriesSpec {
    pub fn new(seq: SequenceSpec, psi: PsiSpec, family: SeriesFamily) -> Result<Self> {
        seq.validate()?;
        psi.validate()?;
        if family == SeriesFamily::Thm11 && !seq.is_integer() {
            return Err(Error::Domain("thm11 needs integer-valued a_n, b_n".into()));
        }
        Ok(SeriesSpec { seq, psi, family })
    }

    /// Number of available terms; `None` for unbounded generators.
    pub fn len(&self) -> Option<usize> {
        match (self.seq.len(), self.psi.len()) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    fn check_s(&self, s: f64) -> Result<()> {
        let ok = if self.family.depends_on_s() {
            s > 0.0 && s < 1.0
        } else {
            s > 0.0 && s <= 1.0
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("{} needs s ∈ (0,1), got {s}", self.family)))
        }
    }

    fn ln_parts(&self, n: u64) -> Result<LnParts> {
        let (a, b) = self.seq.ln_ab(n)?;
        let psi = self.psi.ln_eval(n, &self.seq)?;
        Ok(LnParts {
            a,
            b,
            psi,
            ln_log_b: b.ln(),
            // log(1/ψ) with the refined logarithm, so the factor is ≥ 1
            ln_log_inv_psi: if psi >= -1.0 { 0.0 } else { (-psi).ln() },
        })
    }

    fn ln_sub_term(&self, term: SubTerm, p: &LnParts, s: f64, n: u64) -> Result<f64> {
        if p.psi == f64::NEG_INFINITY {
            return Ok(f64::NEG_INFINITY);
        }
        let main = p.b + s * (p.psi - p.b);
        let cross_tail = s / 2.0 * (p.psi - p.a - p.b);
        Ok(match term {
            SubTerm::Main => main,
            SubTerm::MainLog => main + p.ln_log_b - p.a,
            SubTerm::Cross => p.a + cross_tail,
            SubTerm::CrossGcd => self.seq.ln_gcd_n(n)? + cross_tail,
            SubTerm::CrossLog => cross_tail + p.ln_log_b,
            SubTerm::LebPsiLog => p.psi + p.ln_log_inv_psi,
            SubTerm::LebPsiLogB => p.psi - p.a + p.ln_log_b + p.ln_log_inv_psi,
            SubTerm::LebRatio => (p.psi + p.a - p.b) / 2.0,
            SubTerm::LebCrossLog => (p.psi - p.a - p.b) / 2.0 + p.ln_log_b,
        })
    }

    fn ln_terms(&self, s: f64, n: u64) -> Result<Vec<f64>> {
        let p = self.ln_parts(n)?;
        self.family
            .terms()
            .iter()
            .map(|&t| self.ln_sub_term(t, &p, s, n))
            .collect()
    }

    /// Closed-form growth of each sub-term, when the inputs allow it.
    fn growth_terms(&self) -> Result<Option<Vec<(SubTerm, Option<AffineGrowth>)>>> {
        let Some(g) = InputGrowth::of(&self.seq, &self.psi)? else {
            return Ok(None);
        };
        let half = 0.5;
        let main_s = g.psi - g.b;
        let cross_s = (g.psi - g.a - g.b) * half;
        let affine = |fixed: Growth, per_s: Growth| Some(AffineGrowth { fixed, per_s });
        let with_log_b = |fixed: Growth, per_s: Growth| g.log_b.and_then(|lb| affine(fixed + lb, per_s));
        let zero = Growth::ZERO;
        let terms = self
            .family
            .terms()
            .iter()
            .map(|&t| {
                let growth = match t {
                    SubTerm::Main => affine(g.b, main_s),
                    SubTerm::MainLog => with_log_b(g.b - g.a, main_s),
                    SubTerm::Cross => affine(g.a, cross_s),
                    SubTerm::CrossGcd => affine(g.gcd.expect("thm11 needs gcd growth"), cross_s),
                    SubTerm::CrossLog => with_log_b(zero, cross_s),
                    SubTerm::LebPsiLog => affine(g.psi + g.log_inv_psi, zero),
                    SubTerm::LebPsiLogB => with_log_b(g.psi - g.a + g.log_inv_psi, zero),
                    SubTerm::LebRatio => affine((g.psi + g.a - g.b) * half, zero),
                    SubTerm::LebCrossLog => with_log_b((g.psi - g.a - g.b) * half, zero),
                };
                (t, growth)
            })
            .collect();
        Ok(Some(terms))
    }

    /// Whether `τ` and verdicts can be computed in closed form.
    pub fn is_closed_form(&self) -> bool {
        matches!(InputGrowth::of(&self.seq, &self.psi), Ok(Some(_)))
    }
}

/// The `n`-th term of the series; `0` where `ψ(n) = 0`.
pub fn term_value(spec: &SeriesSpec, s: f64, n: u64) -> Result<f64> {
    spec.check_s(s)?;
    Ok(spec.ln_terms(s, n)?.into_iter().map(f64::exp).sum())
}

/// `e^{geo·n}·n^{poly}·(log n)^{log}`, up to a constant factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Growth {
    pub geo: f64,
    pub poly: f64,
    pub log: f64,
}

impl Growth {
    pub const ZERO: Growth = Growth { geo: 0.0, poly: 0.0, log: 0.0 };

    fn geo(geo: f64) -> Self {
        Growth { geo, ..Self::ZERO }
    }

    fn poly(poly: f64) -> Self {
        Growth { poly, ..Self::ZERO }
    }

    fn log(log: f64) -> Self {
        Growth { log, ..Self::ZERO }
    }

    /// Lexicographic test against `Σ e^{gn} n^{h} (log n)^{l}`.
    pub fn summable(&self) -> bool {
        for (value, target) in [(self.geo, 0.0), (self.poly, -1.0), (self.log, -1.0)] {
            if value < target - EXACT_EPS {
                return true;
            }
            if value > target + EXACT_EPS {
                return false;
            }
        }
        false
    }
}

impl Add for Growth {
    type Output = Growth;
    fn add(self, o: Growth) -> Growth {
        Growth {
            geo: self.geo + o.geo,
            poly: self.poly + o.poly,
            log: self.log + o.log,
        }
    }
}

impl Sub for Growth {
    type Output = Growth;
    fn sub(self, o: Growth) -> Growth {
        self + o * -1.0
    }
}

impl Mul<f64> for Growth {
    type Output = Growth;
    fn mul(self, k: f64) -> Growth {
        Growth {
            geo: self.geo * k,
            poly: self.poly * k,
            log: self.log * k,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct AffineGrowth {
    fixed: Growth,
    per_s: Growth,
}

impl AffineGrowth {
    fn at(&self, s: f64) -> Growth {
        self.fixed + self.per_s * s
    }

    /// `inf{s > 0 : term summable}`; `None` if no `s > 0` works.
    fn threshold(&self) -> Option<f64> {
        let comps = [
            (self.fixed.geo, self.per_s.geo, 0.0),
            (self.fixed.poly, self.per_s.poly, -1.0),
            (self.fixed.log, self.per_s.log, -1.0),
        ];
        for (c0, c1, target) in comps {
            if c1.abs() > EXACT_EPS {
                let root = (target - c0) / c1;
                return if c1 < 0.0 {
                    Some(root.max(0.0))
                } else if root > 0.0 {
                    Some(0.0)
                } else {
                    None
                };
            }
            if c0 < target - EXACT_EPS {
                return Some(0.0);
            }
            if c0 > target + EXACT_EPS {
                return None;
            }
        }
        None
    }
}

/// Growth of the inputs; `log_b` is `None` when `log b_n ≡ 0`.
struct InputGrowth {
    a: Growth,
    b: Growth,
    psi: Growth,
    log_b: Option<Growth>,
    log_inv_psi: Growth,
    gcd: Option<Growth>,
}

impl InputGrowth {
    fn of(seq: &SequenceSpec, psi: &PsiSpec) -> Result<Option<Self>> {
        let (a, b, log_b, gcd) = match &seq.kind {
            SequenceKind::Exponential { a, b } => {
                let log_b = (*b > 1.0).then(|| Growth::poly(1.0));
                let gcd = seq.ln_gcd_n(1).ok().map(Growth::geo);
                (Growth::geo(a.ln()), Growth::geo(b.ln()), log_b, gcd)
            }
            SequenceKind::Linear { .. } => {
                let gcd = seq.is_integer().then(|| Growth::poly(1.0));
                (Growth::poly(1.0), Growth::poly(1.0), Some(Growth::log(1.0)), gcd)
            }
            _ => return Ok(None),
        };
        let (psi_g, log_inv_psi) = match psi {
            PsiSpec::Power { t } => (Growth::poly(-t), if *t > 0.0 { Growth::log(1.0) } else { Growth::ZERO }),
            PsiSpec::Exponential { lambda } => {
                (Growth::geo(-lambda), if *lambda > 0.0 { Growth::poly(1.0) } else { Growth::ZERO })
            }
            PsiSpec::ScaledBase { t } => {
                let inv = match log_b {
                    Some(lb) if *t > 0.0 => lb,
                    _ => Growth::ZERO,
                };
                (b * -t, inv)
            }
            PsiSpec::ExplicitTable { .. } => return Ok(None),
        };
        Ok(Some(InputGrowth {
            a,
            b,
            psi: psi_g,
            log_b,
            log_inv_psi,
            gcd,
        }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Converges,
    Diverges,
    Inconclusive,
}

impl Verdict {
    fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Diverges, _) | (_, Diverges) => Diverges,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Converges,
        }
    }
}

/// What decided a sub-term's verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Evidence {
    /// The term is `e^{geo·n}·n^{poly}·(log n)^{log}` up to constants.
    Exponents { geo: f64, poly: f64, log: f64 },
    /// The term vanishes identically.
    Zero,
    /// Mean `log(t_{n+1}/t_n)` over each half of the tail window.
    TailRatio { window: (u64, u64), mean_log_ratio: (f64, f64) },
    /// Every term in the tail window is zero.
    ZeroTail { window: (u64, u64) },
    /// Too few terms to form a tail window.
    TooShort { terms: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermVerdict {
    pub term: String,
    pub verdict: Verdict,
    pub evidence: Evidence,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Convergence {
    pub family: SeriesFamily,
    pub s: f64,
    pub verdict: Verdict,
    pub terms: Vec<TermVerdict>,
}

impl Convergence {
    pub fn converges(&self) -> bool {
        self.verdict == Verdict::Converges
    }
}

/// Whether the series converges at `s`, with the deciding evidence per term.
pub fn converges(spec: &SeriesSpec, s: f64) -> Result<Convergence> {
    spec.check_s(s)?;
    let terms: Vec<TermVerdict> = match spec.growth_terms()? {
        Some(growths) => growths
            .into_iter()
            .map(|(t, g)| match g {
                Some(g) => {
                    let at = g.at(s);
                    TermVerdict {
                        term: t.label().into(),
                        verdict: if at.summable() { Verdict::Converges } else { Verdict::Diverges },
                        evidence: Evidence::Exponents {
                            geo: at.geo,
                            poly: at.poly,
                            log: at.log,
                        },
                    }
                }
                None => TermVerdict {
                    term: t.label().into(),
                    verdict: Verdict::Converges,
                    evidence: Evidence::Zero,
                },
            })
            .collect(),
        None => ratio_test(spec, s)?,
    };
    let verdict = terms.iter().fold(Verdict::Converges, |v, t| v.and(t.verdict));
    Ok(Convergence {
        family: spec.family,
        s,
        verdict,
        terms,
    })
}

/// Tail ratio test on a finite table, one verdict per sub-term.
fn ratio_test(spec: &SeriesSpec, s: f64) -> Result<Vec<TermVerdict>> {
    let len = spec.len().unwrap_or(N_MAX as usize);
    let labels = spec.family.terms();
    if len < 8 {
        return Ok(labels
            .iter()
            .map(|t| TermVerdict {
                term: t.label().into(),
                verdict: Verdict::Inconclusive,
                evidence: Evidence::TooShort { terms: len },
            })
            .collect());
    }
    let start = (len - len / 4).max(1) as u64;
    let end = len as u64;
    let mut ln_rows = Vec::with_capacity((end - start + 1) as usize);
    for n in start..=end {
        ln_rows.push(spec.ln_terms(s, n)?);
    }
    let band_lo = (1.0 - RATIO_BAND).ln();
    let band_hi = (1.0 + RATIO_BAND).ln();
    let verdicts = labels
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let column: Vec<f64> = ln_rows.iter().map(|row| row[i]).collect();
            let window = (start, end);
            if column.iter().all(|v| *v == f64::NEG_INFINITY) {
                return TermVerdict {
                    term: t.label().into(),
                    verdict: Verdict::Converges,
                    evidence: Evidence::ZeroTail { window },
                };
            }
            let ratios: Vec<f64> = column.windows(2).map(|w| w[1] - w[0]).collect();
            let mid = ratios.len() / 2;
            let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
            let (first, second) = (mean(&ratios[..mid]), mean(&ratios[mid..]));
            let drifting = (first - second).abs() > RATIO_DRIFT * first.abs().max(second.abs());
            let verdict = if !(first.is_finite() && second.is_finite()) || drifting {
                Verdict::Inconclusive
            } else if first < band_lo && second < band_lo {
                Verdict::Converges
            } else if first > band_hi && second > band_hi {
                Verdict::Diverges
            } else {
                Verdict::Inconclusive
            };
            TermVerdict {
                term: t.label().into(),
                verdict,
                evidence: Evidence::TailRatio {
                    window,
                    mean_log_ratio: (first, second),
                },
            }
        })
        .collect();
    Ok(verdicts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TauMethod {
    ClosedForm,
    NumericBisection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermThreshold {
    pub term: String,
    /// `inf{s > 0 : term summable}` before clamping; `None` if no `s > 0` works.
    pub raw: Option<f64>,
}

/// `ln` of partial sums of the whole series at one `s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartialSumTrace {
    pub s: f64,
    pub ln_partial_sums: Vec<(u64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauResult {
    pub family: SeriesFamily,
    /// The largest per-term threshold, clamped to `[0,1]`.
    pub tau: f64,
    pub method: TauMethod,
    pub thresholds: Vec<TermThreshold>,
    pub diagnostics: Vec<PartialSumTrace>,
}

/// `τ = inf{s > 0 : Σ terms < ∞}`, closed-form when possible unless
/// `force_numeric`.
pub fn compute_tau(spec: &SeriesSpec, force_numeric: bool) -> Result<TauResult> {
    if !spec.family.depends_on_s() {
        return Err(Error::Domain("the lebesgue series does not depend on s".into()));
    }
    let closed = if force_numeric { None } else { spec.growth_terms()? };
    let (method, thresholds) = match closed {
        Some(growths) => {
            let thresholds = growths
                .into_iter()
                .map(|(t, g)| TermThreshold {
                    term: t.label().into(),
                    raw: g.map_or(Some(0.0), |g| g.threshold()),
                })
                .collect();
            (TauMethod::ClosedForm, thresholds)
        }
        None => (TauMethod::NumericBisection, numeric_thresholds(spec)?),
    };
    let tau = thresholds
        .iter()
        .map(|t| t.raw.unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max)
        .clamp(0.0, 1.0);
    let diagnostics = [tau - 0.05, tau + 0.05]
        .into_iter()
        .map(|s| s.clamp(S_MIN, S_MAX))
        .map(|s| trace(spec, s))
        .collect::<Result<Vec<_>>>()?;
    Ok(TauResult {
        family: spec.family,
        tau,
        method,
        thresholds,
        diagnostics,
    })
}

fn trace(spec: &SeriesSpec, s: f64) -> Result<PartialSumTrace> {
    let last = spec.len().map_or(N_MAX, |l| l as u64);
    let checkpoints: Vec<u64> = [10, 100, 1_000, N_MAX]
        .into_iter()
        .filter(|&c| c <= last)
        .chain((last < N_MAX).then_some(last))
        .collect();
    let mut acc = f64::NEG_INFINITY;
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut next = checkpoints.iter().peekable();
    for n in 1..=last {
        for ln in spec.ln_terms(s, n)? {
            acc = log_add_exp(acc, ln);
        }
        if next.peek() == Some(&&n) {
            out.push((n, acc));
            next.next();
        }
    }
    Ok(PartialSumTrace {
        s,
        ln_partial_sums: out,
    })
}

fn log_add_exp(x: f64, y: f64) -> f64 {
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Fits `ln t_n ≈ g·n + h·ln n + c` through `n = N/4, N/2, N`.
fn tail_fit(spec: &SeriesSpec, term: usize, s: f64) -> Result<Option<(f64, f64)>> {
    let n1 = N_MAX / 4;
    let y: Vec<f64> = [n1, 2 * n1, 4 * n1]
        .into_iter()
        .map(|n| spec.ln_terms(s, n).map(|v| v[term]))
        .collect::<Result<_>>()?;
    if y.iter().any(|v| *v == f64::NEG_INFINITY) {
        return Ok(None);
    }
    let (d1, d2) = (y[1] - y[0], y[2] - y[1]);
    let g = (d2 - d1) / n1 as f64;
    let h = (d1 - g * n1 as f64) / std::f64::consts::LN_2;
    Ok(Some((g, h)))
}

fn numeric_verdict(spec: &SeriesSpec, term: usize, s: f64) -> Result<Verdict> {
    if spec.len().is_some() {
        let verdicts = ratio_test(spec, s)?;
        return Ok(verdicts[term].verdict);
    }
    Ok(match tail_fit(spec, term, s)? {
        None => Verdict::Converges,
        Some((g, h)) if g < -FIT_EPS || (g.abs() <= FIT_EPS && h < -1.0) => Verdict::Converges,
        Some(_) => Verdict::Diverges,
    })
}

fn numeric_thresholds(spec: &SeriesSpec) -> Result<Vec<TermThreshold>> {
    spec.family
        .terms()
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let endpoint = |s: f64| -> Result<bool> {
                match numeric_verdict(spec, i, s)? {
                    Verdict::Converges => Ok(true),
                    Verdict::Diverges => Ok(false),
                    Verdict::Inconclusive => Err(Error::Inconclusive(format!(
                        "tail of `{}` is neither clearly geometric nor clearly growing at s = {s}",
                        t.label()
                    ))),
                }
            };
            let raw = if endpoint(S_MIN)? {
                0.0
            } else if !endpoint(S_MAX)? {
                1.0
            } else {
                let (mut lo, mut hi) = (S_MIN, S_MAX);
                for _ in 0..BISECTION_STEPS {
                    let mid = 0.5 * (lo + hi);
                    match numeric_verdict(spec, i, mid)? {
                        Verdict::Converges => hi = mid,
                        Verdict::Diverges => lo = mid,
                        // inside the indifference band around the threshold
                        Verdict::Inconclusive => {
                            hi = mid;
                            break;
                        }
                    }
                }
                hi
            };
            Ok(TermThreshold {
                term: t.label().into(),
                raw: Some(raw),
            })
        })
        .collect()
}

/// `max{2 − log b / log a, 0}`; exactly `0` when `a² ≤ b`.
pub fn corollary_threshold(a: f64, b: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && a > 1.0 && b > a) {
        return Err(Error::Domain(format!("need 1 < a < b, got a = {a}, b = {b}")));
    }
    if a * a <= b {
        return Ok(0.0);
    }
    Ok((2.0 - b.ln() / a.ln()).max(0.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub family: SeriesFamily,
    pub convergence: Convergence,
    /// The conclusion the hypothesis licenses, when it holds.
    pub conclusion: Option<String>,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionsReport {
    pub s: f64,
    pub hypotheses: Vec<HypothesisReport>,
}

/// Evaluates every applicable hypothesis series at `s`.
pub fn check_convergence_conditions(seq: &SequenceSpec, psi: &PsiSpec, s: f64) -> Result<ConditionsReport> {
    let mut families = vec![SeriesFamily::Thm12, SeriesFamily::Prop41];
    if seq.is_integer() {
        families.push(SeriesFamily::Thm11);
    }
    families.push(SeriesFamily::Lebesgue);
    let hypotheses = families
        .into_iter()
        .map(|family| {
            let spec = SeriesSpec::new(seq.clone(), psi.clone(), family)?;
            let convergence = converges(&spec, s)?;
            let measure = if family == SeriesFamily::Lebesgue {
                "λ(M(ψ)) = 0"
            } else {
                "H^s(M(ψ)) = 0"
            };
            let (conclusion, status) = match convergence.verdict {
                Verdict::Converges => (Some(measure.to_string()), "hypothesis satisfied"),
                Verdict::Diverges => (None, "hypothesis not satisfied"),
                Verdict::Inconclusive => (None, "inconclusive"),
            };
            Ok(HypothesisReport {
                family,
                convergence,
                conclusion,
                status: status.into(),
            })
        })
        .collect::<Result<_>>()?;
    Ok(ConditionsReport { s, hypotheses })
}
