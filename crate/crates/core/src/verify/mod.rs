//! Seeded verification campaigns over randomized instances.
//!
//! Each check id is wired to exactly one property declared by a module's
//! `PROPERTIES` list; [`coverage_guard`] refuses to run when a declared
//! property has no check. Reports carry no timings, so the same seed and
//! build always produce the same bytes.

mod checks;
pub mod oracles;

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::approx::FracParams;
use crate::error::{Error, Result};

pub use checks::{check_ids, CheckKind};

/// Version of the report and failure-record JSON layout.
pub const SCHEMA_VERSION: u32 = 1;
/// Violations listed per check; the full count is always reported.
pub const MAX_LISTED_VIOLATIONS: usize = 20;

/// Ranges instances are drawn from. `a`, `b` and `δ` are log-uniform,
/// the rest uniform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceDistribution {
    pub a_range: (f64, f64),
    pub b_max: f64,
    pub shift_range: (f64, f64),
    pub eta_xi_range: (f64, f64),
    pub delta_range: (f64, f64),
    pub s_range: (f64, f64),
    pub count: u64,
    pub seed: u64,
}

impl Default for InstanceDistribution {
    fn default() -> Self {
        InstanceDistribution {
            a_range: (1.0, 100.0),
            b_max: 1e6,
            shift_range: (-2.0, 2.0),
            eta_xi_range: (1e-6, 1.0 - 1e-6),
            delta_range: (1e-4, 0.5),
            s_range: (0.05, 0.95),
            count: 100,
            seed: 0,
        }
    }
}

impl InstanceDistribution {
    pub fn new(count: u64, seed: u64) -> Self {
        InstanceDistribution {
            count,
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (a_lo, a_hi) = self.a_range;
        let ordered = |(lo, hi): (f64, f64)| lo.is_finite() && hi.is_finite() && lo <= hi;
        let problems = [
            (!(ordered(self.a_range) && 1.0 <= a_lo && a_hi <= self.b_max), "need 1 ≤ a_lo ≤ a_hi ≤ b_max"),
            (!ordered(self.shift_range), "shift range must be finite and ordered"),
            (
                !(ordered(self.eta_xi_range) && self.eta_xi_range.0 > 0.0 && self.eta_xi_range.1 < 1.0),
                "η, ξ range must lie in (0,1)",
            ),
            (
                !(ordered(self.delta_range) && self.delta_range.0 > 0.0 && self.delta_range.1 <= 0.5),
                "δ range must lie in (0, 1/2]",
            ),
            (
                !(ordered(self.s_range) && self.s_range.0 > 0.0 && self.s_range.1 < 1.0),
                "s range must lie in (0,1)",
            ),
            (self.count == 0, "count must be positive"),
        ];
        match problems.iter().find(|(bad, _)| *bad) {
            Some((_, msg)) => Err(Error::Domain(format!("instance distribution: {msg}"))),
            None => Ok(()),
        }
    }

    /// The instance a check sees at `index`; independent of every other
    /// (check, index) pair.
    fn sample(&self, check_no: u64, caps: &checks::Caps, index: u64) -> Instance {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream((check_no << 40) | index);
        let (a_lo, a_hi) = caps.a_range.unwrap_or(self.a_range);
        let b_max = caps.b_max.map_or(self.b_max, |cap| cap.min(self.b_max).max(a_hi));
        let mut a = log_uniform(&mut rng, a_lo, a_hi);
        let mut b = log_uniform(&mut rng, a, b_max);
        if caps.integer {
            a = a.round().max(1.0);
            b = b.round().max(a);
        }
        let c = uniform(&mut rng, self.shift_range);
        let d = uniform(&mut rng, self.shift_range);
        let eta = uniform(&mut rng, self.eta_xi_range);
        let xi = uniform(&mut rng, self.eta_xi_range);
        let delta = log_uniform(&mut rng, self.delta_range.0, self.delta_range.1);
        let s = uniform(&mut rng, self.s_range);
        let aux_seed = rng.random();
        Instance {
            index,
            params: FracParams { a, b, c, d },
            eta,
            xi,
            delta,
            s,
            aux_seed,
        }
    }
}

fn uniform(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (lo.ln() + (hi.ln() - lo.ln()) * rng.random::<f64>()).exp().clamp(lo, hi)
}

/// One randomized input. `aux_seed` drives any further sampling a check does.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub index: u64,
    pub params: FracParams,
    pub eta: f64,
    pub xi: f64,
    pub delta: f64,
    pub s: f64,
    pub aux_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationRecord {
    pub index: u64,
    pub detail: String,
}

/// Spread of an empirical ratio over a campaign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioStats {
    pub samples: u64,
    pub max: f64,
    pub p99: f64,
    pub median: f64,
    pub max_over_median: f64,
}

impl RatioStats {
    pub fn from_values(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let rank = |q: f64| sorted[((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len()) - 1];
        let max = sorted[sorted.len() - 1];
        let median = rank(0.5);
        Some(RatioStats {
            samples: sorted.len() as u64,
            max,
            p99: rank(0.99),
            median,
            max_over_median: if median > 0.0 { max / median } else { f64::MAX },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: String,
    pub property: String,
    pub kind: CheckKind,
    pub instances: u64,
    /// Instances the property applies to.
    pub applicable: u64,
    pub violation_count: u64,
    pub violations: Vec<ViolationRecord>,
    pub ratios: Option<RatioStats>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub distribution: InstanceDistribution,
    pub checks: Vec<CheckReport>,
    pub passed: bool,
}

impl CampaignReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Everything needed to rerun one failing (check, instance) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub schema_version: u32,
    pub check: String,
    pub seed: u64,
    pub instance: Instance,
    pub detail: String,
}

impl FailureRecord {
    pub fn file_name(&self) -> String {
        format!("{}-{}.json", self.check, self.instance.index)
    }
}

pub struct Campaign {
    pub report: CampaignReport,
    pub failures: Vec<FailureRecord>,
}

/// Fails when a declared property has no check, or a check names an
/// undeclared property.
pub fn coverage_guard() -> Result<()> {
    let declared: Vec<&str> = [
        crate::intervals::PROPERTIES,
        crate::approx::PROPERTIES,
        crate::lattice::PROPERTIES,
        crate::dimension::PROPERTIES,
        crate::planar::PROPERTIES,
    ]
    .concat();
    let wired: Vec<&str> = checks::REGISTRY.iter().map(|c| c.property).collect();
    let unwired: Vec<&str> = declared.iter().copied().filter(|p| !wired.contains(p)).collect();
    let unknown: Vec<&str> = wired.iter().copied().filter(|p| !declared.contains(p)).collect();
    let mut doubled: Vec<&str> = wired
        .iter()
        .enumerate()
        .filter(|(i, p)| wired[..*i].contains(p))
        .map(|(_, p)| *p)
        .collect();
    doubled.dedup();
    if unwired.is_empty() && unknown.is_empty() && doubled.is_empty() {
        return Ok(());
    }
    Err(Error::InvariantViolation(format!(
        "check coverage: unwired {unwired:?}, unknown {unknown:?}, wired twice {doubled:?}"
    )))
}

/// Resolves `all` and validates ids, preserving registry order.
pub fn resolve_checks(requested: &[String]) -> Result<Vec<&'static str>> {
    if requested.iter().any(|c| c == "all") {
        return Ok(check_ids());
    }
    let known = check_ids();
    for id in requested {
        if !known.contains(&id.as_str()) {
            return Err(Error::Domain(format!("unknown check `{id}`; known: {}", known.join(", "))));
        }
    }
    Ok(known.into_iter().filter(|k| requested.iter().any(|r| r == k)).collect())
}

pub fn run_campaign(dist: &InstanceDistribution, requested: &[String]) -> Result<Campaign> {
    coverage_guard()?;
    dist.validate()?;
    let ids = resolve_checks(requested)?;
    if ids.is_empty() {
        return Err(Error::Domain("no checks selected".into()));
    }
    let mut reports = Vec::with_capacity(ids.len());
    let mut failures = Vec::new();
    for id in ids {
        let (no, def) = checks::lookup(id).expect("resolved ids are registered");
        let outcomes: Vec<(Instance, checks::Outcome)> = (0..dist.count)
            .into_par_iter()
            .map(|i| {
                let inst = dist.sample(no, &def.caps, i);
                let outcome = (def.run)(&inst, false).unwrap_or_else(checks::Outcome::from_error);
                (inst, outcome)
            })
            .collect();
        let mut violations = Vec::new();
        let mut values = Vec::new();
        let mut applicable = 0;
        for (inst, outcome) in outcomes {
            if outcome.applicable {
                applicable += 1;
            }
            values.extend(outcome.values);
            if let Some(detail) = outcome.violation {
                failures.push(FailureRecord {
                    schema_version: SCHEMA_VERSION,
                    check: id.to_string(),
                    seed: dist.seed,
                    instance: inst.clone(),
                    detail: detail.clone(),
                });
                violations.push(ViolationRecord {
                    index: inst.index,
                    detail,
                });
            }
        }
        let violation_count = violations.len() as u64;
        violations.truncate(MAX_LISTED_VIOLATIONS);
        reports.push(CheckReport {
            id: id.to_string(),
            property: def.property.to_string(),
            kind: def.kind,
            instances: dist.count,
            applicable,
            violation_count,
            violations,
            ratios: RatioStats::from_values(&values),
            passed: violation_count == 0,
        });
    }
    let passed = reports.iter().all(|r| r.passed);
    Ok(Campaign {
        report: CampaignReport {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            distribution: dist.clone(),
            checks: reports,
            passed,
        },
        failures,
    })
}

/// Result of rerunning one recorded instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayResult {
    pub check: String,
    pub instance: Instance,
    pub passed: bool,
    pub detail: Option<String>,
    pub values: Vec<f64>,
    pub trace: Option<serde_json::Value>,
}

pub fn replay(record: &FailureRecord, verbose: bool) -> Result<ReplayResult> {
    if record.schema_version != SCHEMA_VERSION {
        return Err(Error::Parse(format!(
            "failure record has schema {}, expected {SCHEMA_VERSION}",
            record.schema_version
        )));
    }
    let (_, def) = checks::lookup(&record.check)
        .ok_or_else(|| Error::Parse(format!("unknown check `{}` in failure record", record.check)))?;
    let outcome = (def.run)(&record.instance, verbose).unwrap_or_else(checks::Outcome::from_error);
    Ok(ReplayResult {
        check: record.check.clone(),
        instance: record.instance.clone(),
        passed: outcome.violation.is_none(),
        detail: outcome.violation,
        values: outcome.values,
        trace: outcome.trace,
    })
}

pub fn replay_file(path: &Path, verbose: bool) -> Result<ReplayResult> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    let record: FailureRecord = serde_json::from_str(&text)?;
    replay(&record, verbose)
}

/// A record for an arbitrary (check, instance) pair, e.g. to replay a
/// passing instance.
pub fn record_for(dist: &InstanceDistribution, check: &str, index: u64) -> Result<FailureRecord> {
    let (no, def) = checks::lookup(check).ok_or_else(|| Error::Domain(format!("unknown check `{check}`")))?;
    Ok(FailureRecord {
        schema_version: SCHEMA_VERSION,
        check: check.to_string(),
        seed: dist.seed,
        instance: dist.sample(no, &def.caps, index),
        detail: String::new(),
    })
}
