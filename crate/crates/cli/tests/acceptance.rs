//! Acceptance criteria 1 to 11, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so every line is printed; exits
//! nonzero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use diophlab::approx::{compute_e, decompose_e, hausdorff_bound, lebesgue_bound, near_integer_set, LemmaCover};
use diophlab::dimension::{
    compute_tau, corollary_threshold, dyadic_scales, estimate_box_dimension, SeriesFamily, SeriesSpec,
};
use diophlab::lattice::{
    build_uq, count_n, discrepancy, exp_sum_integer, ExpSums, LatticeQuery, SamplePoints, TorusInterval,
    ERDOS_TURAN_SLACK,
};
use diophlab::planar::{compute_f2, mc_measure_e2, unit_e2_area};
use diophlab::verify::oracles;
use diophlab::{FracParams, PsiSpec, SequenceSpec};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

struct Verdict {
    passed: bool,
    detail: String,
}

fn log_uniform(rng: &mut StdRng, lo: f64, hi: f64) -> f64 {
    (lo.ln() + rng.random::<f64>() * (hi.ln() - lo.ln())).exp()
}

fn random_params(rng: &mut StdRng, a_max: f64, b_max: f64) -> FracParams {
    let a = log_uniform(rng, 1.0, a_max);
    let b = log_uniform(rng, a, b_max.max(a));
    let c = rng.random_range(-2.0..2.0);
    let d = rng.random_range(-2.0..2.0);
    FracParams::new(a, b, c, d).unwrap()
}

fn open_unit(rng: &mut StdRng) -> f64 {
    log_uniform(rng, 1e-6, 1.0 - 1e-6)
}

fn within(elapsed: Duration, limit_s: u64) -> bool {
    elapsed <= Duration::from_secs(limit_s)
}

fn counting_oracle() -> Verdict {
    let mut rng = StdRng::seed_from_u64(1);
    let start = Instant::now();
    let mut mismatches = 0;
    let total = 600;
    for _ in 0..total {
        let a = rng.random_range(1.0..=200.0);
        let b = rng.random_range(a..=200.0);
        let p = FracParams::new(a, b, rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)).unwrap();
        let (eta, xi) = (open_unit(&mut rng), open_unit(&mut rng));
        if count_n(&LatticeQuery::new(p, eta, xi).unwrap()) != oracles::naive_count(&p, eta, xi) {
            mismatches += 1;
        }
    }
    let t = start.elapsed();
    Verdict {
        passed: mismatches == 0 && within(t, 10),
        detail: format!("{total} instances, {mismatches} mismatches, {:.2}s", t.as_secs_f64()),
    }
}

fn large_regime() -> Verdict {
    let mut rng = StdRng::seed_from_u64(2);
    let start = Instant::now();
    let (mut seen, mut violations, mut max_ratio) = (0, 0, 0.0f64);
    while seen < 10_000 {
        let p = random_params(&mut rng, 100.0, 1e6);
        let (eta, xi) = (rng.random_range(0.0..1.0), rng.random_range(0.0..1.0));
        if !(eta > 0.0 && xi > 0.0) || eta + p.a / p.b * xi <= 0.5 {
            continue;
        }
        seen += 1;
        let n = count_n(&LatticeQuery::new(p, eta, xi).unwrap()) as f64;
        let cap = 4.0 * (p.b + 2.0);
        max_ratio = max_ratio.max(n / cap);
        if n > cap {
            violations += 1;
        }
    }
    let t = start.elapsed();
    Verdict {
        passed: violations == 0 && within(t, 60),
        detail: format!(
            "{seen} instances in the regime, {violations} violations, max N/(4(b+2)) = {max_ratio:.4}, {:.2}s",
            t.as_secs_f64()
        ),
    }
}

fn erdos_turan() -> Verdict {
    let mut rng = StdRng::seed_from_u64(3);
    let start = Instant::now();
    let (mut violations, mut count_mismatches, mut worst) = (0u64, 0u64, f64::INFINITY);
    for set_no in 0..200 {
        // half uniform random points, half the points (a/b)(q − 1) + … of a random line
        let raw: Vec<f64> = if set_no % 2 == 0 {
            let q = rng.random_range(1..=300);
            (0..q).map(|_| rng.random_range(-3.0..3.0)).collect()
        } else {
            let p = random_params(&mut rng, 100.0, 2000.0);
            build_uq(&p).unwrap().points().to_vec()
        };
        let points = SamplePoints::new(raw.iter().copied()).unwrap();
        let sums = ExpSums::new(&points, 50);
        for _ in 0..100 {
            let lo = rng.random_range(-1.0..1.0);
            let len = 1.0 - rng.random::<f64>();
            let interval = TorusInterval::new(lo, lo + len).unwrap();
            let d = discrepancy(&points, &interval);
            let direct = oracles::torus_count(&raw, lo, lo + len) as f64 - len * raw.len() as f64;
            if (d - direct).abs() > 1e-9 {
                count_mismatches += 1;
            }
            for k in 1..=50 {
                let rhs = sums.erdos_turan_rhs(len, k);
                worst = worst.min(rhs - d.abs());
                if d.abs() > rhs + ERDOS_TURAN_SLACK {
                    violations += 1;
                }
            }
        }
    }
    let t = start.elapsed();
    Verdict {
        passed: violations == 0 && count_mismatches == 0 && within(t, 300),
        detail: format!(
            "200 sets x 100 intervals x K 1..50, {violations} violations, {count_mismatches} count mismatches, \
             min RHS - |D| = {worst:.3e}, {:.2}s",
            t.as_secs_f64()
        ),
    }
}

fn integer_sums() -> Verdict {
    let mut rng = StdRng::seed_from_u64(4);
    let start = Instant::now();
    let (mut bad, mut evaluated, mut max_err) = (0u64, 0u64, 0.0f64);
    for pair in 0..50u64 {
        // every fifth pair shares a factor so gcd > 1 is exercised
        let (a, b) = if pair % 5 == 0 {
            let g = rng.random_range(2..=20u64);
            let a = rng.random_range(1..=500 / g);
            (g * a, g * rng.random_range(a..=500 / g))
        } else {
            let a = rng.random_range(1..=500u64);
            (a, rng.random_range(a..=500))
        };
        let g = num_gcd(a, b);
        for k in 1..=3 * b / g {
            let (re, im) = exp_sum_integer(a, b, k);
            let err = (re - oracles::integer_exp_sum_expected(a, b, k)).abs().max(im.abs());
            max_err = max_err.max(err);
            evaluated += 1;
            if err > 1e-9 {
                bad += 1;
            }
        }
    }
    let t = start.elapsed();
    Verdict {
        passed: bad == 0 && within(t, 30),
        detail: format!(
            "50 pairs, {evaluated} sums, {bad} outside 1e-9, max error {max_err:.2e}, {:.2}s",
            t.as_secs_f64()
        ),
    }
}

fn num_gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

fn dist_int(x: f64) -> f64 {
    (x - x.round()).abs()
}

fn set_membership() -> Verdict {
    let mut rng = StdRng::seed_from_u64(5);
    let start = Instant::now();
    let (mut disagreements, mut near_endpoint) = (0u64, 0u64);
    for _ in 0..100 {
        let p = random_params(&mut rng, 100.0, 1e4);
        let delta = log_uniform(&mut rng, 1e-4, 0.5);
        let set = compute_e(&p, delta).unwrap();
        let pairs = set.to_pairs();
        let ends: Vec<f64> = pairs.iter().flat_map(|&(lo, hi)| [lo, hi]).collect();
        for _ in 0..100_000 {
            let x: f64 = rng.random();
            let direct = dist_int(p.a * x + p.c) * dist_int(p.b * x + p.d) < delta * delta;
            let i = pairs.partition_point(|&(lo, _)| lo <= x);
            let contained = i > 0 && x <= pairs[i - 1].1;
            if direct != contained {
                let j = ends.partition_point(|&e| e < x);
                let gap = [j.checked_sub(1), Some(j)]
                    .into_iter()
                    .flatten()
                    .filter_map(|k| ends.get(k))
                    .map(|e| (e - x).abs())
                    .fold(f64::INFINITY, f64::min);
                if gap < 1e-9 {
                    near_endpoint += 1;
                } else {
                    disagreements += 1;
                }
            }
        }
    }
    let t = start.elapsed();
    Verdict {
        passed: disagreements == 0 && within(t, 120),
        detail: format!(
            "100 instances x 1e5 samples, {disagreements} disagreements, {near_endpoint} within 1e-9 of an endpoint, {:.2}s",
            t.as_secs_f64()
        ),
    }
}

fn reconstruction() -> Verdict {
    let mut rng = StdRng::seed_from_u64(6);
    let start = Instant::now();
    let (mut bad, mut worst) = (0, 0.0f64);
    for _ in 0..100 {
        let p = random_params(&mut rng, 100.0, 1e6);
        let delta = log_uniform(&mut rng, 1e-3, 0.5);
        let e = compute_e(&p, delta).unwrap();
        let gap = decompose_e(&p, delta).unwrap().union().symmetric_difference(&e).lebesgue();
        worst = worst.max(gap);
        if gap >= 1e-10 {
            bad += 1;
        }
    }
    let t = start.elapsed();
    Verdict {
        passed: bad == 0 && within(t, 60),
        detail: format!("100 instances, {bad} over 1e-10, max gap {worst:.2e}, {:.2}s", t.as_secs_f64()),
    }
}

struct Summary {
    max: f64,
    p99: f64,
    median: f64,
}

fn summarize(values: &mut [f64]) -> Summary {
    values.sort_by(f64::total_cmp);
    let rank = |q: f64| values[((q * values.len() as f64).ceil() as usize).clamp(1, values.len()) - 1];
    Summary {
        max: values[values.len() - 1],
        p99: rank(0.99),
        median: rank(0.5),
    }
}

fn measure_ratios() -> Verdict {
    const EXPONENTS: [f64; 4] = [0.3, 0.5, 0.7, 0.9];
    let mut rng = StdRng::seed_from_u64(7);
    let start = Instant::now();
    let mut lebesgue = Vec::new();
    let mut hausdorff: Vec<Vec<f64>> = vec![Vec::new(); EXPONENTS.len()];
    for _ in 0..1000 {
        let p = random_params(&mut rng, 100.0, 1e6);
        let delta = log_uniform(&mut rng, 1e-4, 0.5);
        lebesgue.push(compute_e(&p, delta).unwrap().lebesgue() / lebesgue_bound(&p, delta));
        let cover = LemmaCover::new(&p, delta).unwrap();
        for (i, &s) in EXPONENTS.iter().enumerate() {
            hausdorff[i].push(cover.premeasure(s) / hausdorff_bound(&p, delta, s));
        }
    }
    let mut passed = true;
    let mut parts = Vec::new();
    let mut report = |name: String, values: &mut Vec<f64>| {
        let finite = values.iter().all(|v| v.is_finite());
        let s = summarize(values);
        let sane = s.max <= 100.0 * s.median;
        passed &= finite && sane;
        parts.push(format!("{name}: max {:.3} p99 {:.3} median {:.3}", s.max, s.p99, s.median));
    };
    report("lebesgue".into(), &mut lebesgue);
    for (i, s) in EXPONENTS.iter().enumerate() {
        report(format!("hausdorff s={s}"), &mut hausdorff[i]);
    }
    let t = start.elapsed();
    Verdict {
        passed,
        detail: format!("1000 instances; {}; {:.2}s", parts.join("; "), t.as_secs_f64()),
    }
}

fn tau_agreement() -> Verdict {
    let mut rng = StdRng::seed_from_u64(8);
    let start = Instant::now();
    let (mut bad, mut errors, mut worst, mut square_cases, mut corollary_bad) = (0, 0, 0.0f64, 0, 0);
    for i in 0..100 {
        let a = 1.0 + rng.random_range(0.01..=9.0);
        let b = rng.random_range(a..=100.0);
        if b <= a {
            continue;
        }
        let param = rng.random_range(0.1..5.0);
        let psi = if i % 2 == 0 {
            PsiSpec::ScaledBase { t: param }
        } else {
            PsiSpec::Exponential { lambda: param }
        };
        let spec = SeriesSpec::new(SequenceSpec::exponential(a, b).unwrap(), psi, SeriesFamily::Thm12).unwrap();
        match (compute_tau(&spec, false), compute_tau(&spec, true)) {
            (Ok(closed), Ok(numeric)) => {
                let gap = (closed.tau - numeric.tau).abs();
                worst = worst.max(gap);
                if gap > 1e-3 {
                    bad += 1;
                }
            }
            _ => errors += 1,
        }
        if a * a <= b {
            square_cases += 1;
            if corollary_threshold(a, b).unwrap() != 0.0 {
                corollary_bad += 1;
            }
        }
    }
    let t = start.elapsed();
    Verdict {
        passed: bad == 0 && errors == 0 && corollary_bad == 0 && within(t, 60),
        detail: format!(
            "100 instances, {bad} over 1e-3, {errors} errors, max gap {worst:.2e}; \
             {square_cases} with a² ≤ b, {corollary_bad} nonzero thresholds; {:.2}s",
            t.as_secs_f64()
        ),
    }
}

fn worked_exponent() -> Verdict {
    let start = Instant::now();
    let seq = SequenceSpec::exponential(2.0, 3.0).unwrap();
    let psi = PsiSpec::ScaledBase { t: 1.0 };
    let tau = compute_tau(&SeriesSpec::new(seq.clone(), psi.clone(), SeriesFamily::Thm12).unwrap(), false).unwrap();
    let want_second = 2.0 * 2f64.ln() / (3f64.ln() + 6f64.ln());
    let mut raws: Vec<f64> = tau.thresholds.iter().filter_map(|t| t.raw).collect();
    raws.sort_by(f64::total_cmp);
    let closed_ok = (tau.tau - 0.5).abs() < 1e-12
        && raws.len() == 2
        && (raws[1] - 0.5).abs() < 1e-12
        && (raws[0] - want_second).abs() < 1e-12;
    let est = estimate_box_dimension(&seq, &psi, 8, 16, &dyadic_scales(6, 16));
    let t = start.elapsed();
    let (box_ok, box_detail) = match est {
        Ok(e) => (
            (e.slope - 0.5).abs() <= 0.15,
            format!("box slope {:.4} ± {:.4} (target 0.5 ± 0.15)", e.slope, 1.96 * e.stderr),
        ),
        Err(e) => (false, format!("box estimate failed: {e}")),
    };
    Verdict {
        passed: closed_ok && box_ok && within(t, 300),
        detail: format!(
            "τ = {}, thresholds {:?} (closed form {}); {box_detail}; {:.2}s",
            tau.tau,
            raws,
            if closed_ok { "ok" } else { "WRONG" },
            t.as_secs_f64()
        ),
    }
}

/// `4∫₀^{1/2} min(1/2, δ²/u) du` by composite Simpson on the curved part.
fn unit_area_quadrature(delta: f64) -> f64 {
    let d2 = delta * delta;
    let knee = 2.0 * d2;
    let n = 20_000;
    let h = (0.5 - knee) / n as f64;
    let f = |u: f64| d2 / u;
    let mut sum = f(knee) + f(0.5);
    for i in 1..n {
        sum += f(knee + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    4.0 * (0.5 * knee + sum * h / 3.0)
}

fn planar() -> Verdict {
    let mut rng = StdRng::seed_from_u64(10);
    let start = Instant::now();
    let (mut bad, mut worst) = (0, 0.0f64);
    for _ in 0..200 {
        let p = random_params(&mut rng, 100.0, 1e6);
        let (eta, xi) = (open_unit(&mut rng), open_unit(&mut rng));
        let f = compute_f2(&p, eta, xi).unwrap();
        let x = near_integer_set(p.a, p.c, eta).lebesgue();
        let y = near_integer_set(p.b, p.d, xi).lebesgue();
        let gap = (f.area() - x * y).abs();
        worst = worst.max(gap);
        if gap > 1e-12 {
            bad += 1;
        }
    }
    let unit = FracParams::new(1.0, 1.0, 0.0, 0.0).unwrap();
    let mut mc_parts = Vec::new();
    let mut mc_ok = true;
    for (i, delta) in [0.05, 0.1, 0.2, 0.3].into_iter().enumerate() {
        let exact = unit_area_quadrature(delta);
        let est = mc_measure_e2(&unit, delta, 1_000_000, 100 + i as u64).unwrap();
        let z = (est.estimate - exact).abs() / est.stderr;
        mc_ok &= z <= 4.0 && (exact - unit_e2_area(delta)).abs() < 1e-9;
        mc_parts.push(format!("δ={delta}: z={z:.2}"));
    }
    let t = start.elapsed();
    Verdict {
        passed: bad == 0 && mc_ok && within(t, 120),
        detail: format!(
            "200 products, {bad} over 1e-12, max gap {worst:.2e}; MC at 1e6 samples {}; {:.2}s",
            mc_parts.join(", "),
            t.as_secs_f64()
        ),
    }
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_diophlab"))
            .args(["verify", "--seed", "42", "--out"])
            .arg(&out)
            .arg("--failures")
            .arg(dir.path().join(format!("{name}-failures")))
            .status()
            .expect("run verify");
        (status.code(), std::fs::read(&out).unwrap_or_default())
    };
    let start = Instant::now();
    let (code1, first) = run("first.json");
    let (code2, second) = run("second.json");
    let t = start.elapsed();
    Verdict {
        passed: !first.is_empty() && first == second,
        detail: format!(
            "{} bytes, identical: {}, exit codes {:?}/{:?}, {:.2}s",
            first.len(),
            first == second,
            code1,
            code2,
            t.as_secs_f64()
        ),
    }
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 11] = [
        ("counting oracle equivalence", counting_oracle),
        ("large-regime count bound", large_regime),
        ("Erdős–Turán inequality", erdos_turan),
        ("integer exponential sums", integer_sums),
        ("E(δ) membership cross-validation", set_membership),
        ("decomposition reconstruction", reconstruction),
        ("measure-bound ratios", measure_ratios),
        ("τ closed form vs bisection", tau_agreement),
        ("worked exponent and box dimension", worked_exponent),
        ("planar product identity and MC", planar),
        ("verify determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let v = run();
        if !v.passed {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {} ({})",
            i + 1,
            if v.passed { "PASS" } else { "FAIL" },
            name,
            v.detail
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
