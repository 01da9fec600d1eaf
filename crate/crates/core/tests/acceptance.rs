//! Acceptance gate: one PASS/FAIL line per criterion, then a single assert.
//!
//! The report is printed and also written to
//! `$CARGO_TARGET_TMPDIR/acceptance.txt` so it survives output capture.

mod common;

use std::time::Instant;

use common::*;
use hflpr_core::case_study::PRIORITY_GROUPS;
use hflpr_core::consistency::calibration_moments;
use hflpr_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_190_501;

struct Line {
    pass: bool,
    name: String,
    detail: String,
}

#[derive(Default)]
struct Gate {
    lines: Vec<Line>,
}

impl Gate {
    fn record(&mut self, pass: bool, name: impl Into<String>, detail: impl Into<String>) {
        let line = Line {
            pass,
            name: name.into(),
            detail: detail.into(),
        };
        println!(
            "[{}] {}: {}",
            if line.pass { "PASS" } else { "FAIL" },
            line.name,
            line.detail
        );
        self.lines.push(line);
    }
}

fn worst_delta<'a>(checks: impl Iterator<Item = &'a Check>) -> (bool, String) {
    let mut pass = true;
    let mut worst = 0.0f64;
    let mut notes = Vec::new();
    for c in checks {
        pass &= c.pass;
        match c.delta {
            Some(d) => {
                worst = worst.max(d);
                if !c.pass {
                    notes.push(format!("{} {} vs {}", c.label, c.computed, c.published));
                }
            }
            None if !c.pass => notes.push(format!("{} {:?} vs {:?}", c.label, c.computed, c.published)),
            None => {}
        }
    }
    let mut detail = format!("max |delta| {worst:.4}");
    if !notes.is_empty() {
        detail.push_str(&format!("; off: {}", notes.join(", ")));
    }
    (pass, detail)
}

fn case_study(gate: &mut Gate) {
    let r = match run_case_study() {
        Ok(r) => r,
        Err(e) => {
            gate.record(false, "case study", format!("pipeline failed: {e}"));
            return;
        }
    };
    let (p, d) = worst_delta(r.group("dm_weights"));
    gate.record(p, "case study: expert weights within 0.005", d);
    let (p, d) = worst_delta(r.group("revised_b1"));
    gate.record(p, "case study: repaired B^1 (index 2) within 0.02", d);
    let (p, d) = worst_delta(r.group("collective"));
    gate.record(p, "case study: collective perfect relation (index 2) within 0.02", d);
    for (m, group) in PRIORITY_GROUPS.iter().enumerate() {
        let (p, d) = worst_delta(r.group(group));
        let rank = r.outcome.per_index[m].final_priority.ranking_string();
        gate.record(
            p,
            format!("case study: index {} priorities within 0.01, exact ranking", m + 1),
            format!("{d}; ranking {rank}"),
        );
    }
    let (p, d) = worst_delta(r.group("fused"));
    gate.record(
        p,
        "case study: fused priorities within 0.01, exact ranking",
        format!("{d}; ranking {}", r.outcome.fused.ranking_string()),
    );
}

fn calibration(gate: &mut Gate) {
    for (n, offset) in [(3, 0.0), (3, 0.2), (4, 0.0), (5, 0.4)] {
        let cfg = CalibrationConfig::with_offset(n, offset, 300, SEED);
        let res = match calibrate(&cfg) {
            Ok(r) => r,
            Err(e) => {
                gate.record(false, format!("calibration n={n} offset={offset}"), e.to_string());
                continue;
            }
        };
        let (mean, _) = calibration_moments(n, offset).unwrap();
        let crit = critical_value(n, offset).unwrap();
        let rel_mean = (res.mean - mean).abs() / mean;
        let rel_sugg = (res.suggested - crit).abs() / crit;
        gate.record(
            rel_mean <= 0.25 && rel_sugg <= 0.25,
            format!("calibration n={n} offset={offset}: mean and suggested within 25%"),
            format!(
                "mean {:.4} vs {mean} ({:+.1}%), suggested {:.4} vs {crit} ({:+.1}%), capped {}",
                res.mean,
                100.0 * (res.mean - mean) / mean,
                res.suggested,
                100.0 * (res.suggested - crit) / crit,
                res.capped
            ),
        );
    }
}

/// Algorithm I fuzz in threshold mode; returns the number of intermediate
/// relations that failed validation.
fn algorithm1_fuzz(gate: &mut Gate) -> (usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let runs = 1000;
    let (mut rising, mut capped, mut over_ten, mut max_iter) = (0, 0, 0, 0);
    let (mut checked, mut invalid) = (0usize, 0usize);
    let params = ConsistencyParams::default();
    for _ in 0..runs {
        let n = rng.random_range(3..=8);
        let b = random_hflpr(n, &scale(), CellGenerator::UniformPair, &mut rng).unwrap();
        let out = algorithm1_observed(&b, &params, |m| {
            checked += 1;
            if m.revalidate().is_err() {
                invalid += 1;
            }
        });
        let report = match out {
            Ok(r) => r,
            Err(Error::IterationCapExceeded { report }) => {
                capped += 1;
                *report
            }
            Err(e) => panic!("unexpected error: {e}"),
        };
        if report.hflgci_trace.windows(2).any(|w| w[1] > w[0] + 1e-12) {
            rising += 1;
        }
        max_iter = max_iter.max(report.iterations);
        if report.iterations > 10 {
            over_ten += 1;
        }
    }
    gate.record(
        rising == 0,
        "algorithm I: index trace non-increasing on 1000 fuzzed relations (n 3..=8)",
        format!("{rising}/{runs} traces rise at least once"),
    );
    gate.record(
        capped == 0,
        "algorithm I: terminates within 50 iterations",
        format!("{capped}/{runs} hit the cap"),
    );
    gate.record(
        over_ten == 0,
        "algorithm I: beta = 0.5 runs need at most 10 iterations",
        format!("{over_ten}/{runs} exceed 10; max {max_iter}"),
    );
    (checked, invalid)
}

fn algorithm2_fuzz(gate: &mut Gate) -> (usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let groups = 200;
    let (mut falling, mut over_cap, mut aborted) = (0, 0, 0);
    let (mut checked, mut invalid) = (0usize, 0usize);
    let mut notes = Vec::new();
    for g in 0..groups {
        let n = rng.random_range(3..=8);
        let k = rng.random_range(2..=5);
        let gamma = [0.8, 0.85, 0.9, 0.95][rng.random_range(0..4)];
        let ms: Vec<Hflpr> = (0..k)
            .map(|_| random_hflpr(n, &scale(), CellGenerator::UniformPair, &mut rng).unwrap())
            .collect();
        let problem = GroupProblem::new(ms, gamma);
        let trace = match algorithm2(&problem) {
            Ok(t) => t,
            Err(Error::ConsensusCapExceeded { trace, .. }) => {
                over_cap += 1;
                *trace
            }
            Err(e) => {
                aborted += 1;
                notes.push(format!("group {g}: {e}"));
                continue;
            }
        };
        if trace.rounds.windows(2).any(|w| w[1].wcd < w[0].wcd - 1e-12) {
            falling += 1;
        }
        for m in trace
            .final_matrices
            .iter()
            .chain([&trace.collective, &trace.aggregated])
        {
            checked += 1;
            if m.revalidate().is_err() {
                invalid += 1;
            }
        }
    }
    gate.record(
        falling == 0,
        "algorithm II: consensus degree non-decreasing on 200 fuzzed groups",
        format!("{falling}/{} traces fall at least once", groups - aborted),
    );
    let mut detail = format!("{over_cap} exceed n*k*10 rounds, {aborted} aborted before the loop");
    if !notes.is_empty() {
        detail.push_str(&format!(" ({})", notes.join("; ")));
    }
    gate.record(
        over_cap == 0 && aborted == 0,
        "algorithm II: terminates within the n*k*10 round cap",
        detail,
    );
    (checked, invalid)
}

fn perfect_relations(gate: &mut Gate) {
    let mut built = 0;
    let mut worst_index = 0.0f64;
    let mut worst_fixed = 0.0f64;
    let mut worst_resid = 0.0f64;
    for n in 3..=8 {
        for ratio in [6.0, 7.0] {
            for low in [0, n / 2, n - 1] {
                for slices in 1..=3 {
                    for ls in 0..slices {
                        let Some((b, alpha)) = try_perfect_with_index_zero(n, low, ratio, slices, ls) else {
                            continue;
                        };
                        built += 1;
                        worst_index = worst_index.max(consistency_index(&b, alpha, 1.0).unwrap().hflgci);
                        let p = perfect_hflpr(&b, PerfectMethod::Additive, 1.0);
                        worst_fixed = worst_fixed.max(max_abs_diff(&p, &b));
                        worst_resid = worst_resid.max(transitivity_residual(&b));
                    }
                }
            }
        }
    }
    gate.record(
        built > 0 && worst_index <= 1e-9,
        "index is 0 on constructively perfect relations",
        format!("{built} relations, max index {worst_index:.1e}"),
    );
    gate.record(
        built > 0 && worst_fixed <= 1e-9,
        "perfect_hflpr (additive form) is a fixed point on them",
        format!("max deviation {worst_fixed:.1e}"),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let mut worst_mult = 0.0f64;
    for _ in 0..100 {
        let n = rng.random_range(3..=8);
        let u: Vec<f64> = (0..n).map(|_| rng.random_range(0.2..5.0)).collect();
        let d: Vec<f64> = (0..n).map(|i| 0.05 * (n - 1 - i) as f64).collect();
        let b = multiplicative_perfect(&u, &d, rng.random_range(1..=3));
        let p = perfect_hflpr(&b, PerfectMethod::Multiplicative, 1.0);
        worst_mult = worst_mult.max(max_abs_diff(&p, &b));
    }
    gate.record(
        worst_mult <= 1e-9,
        "perfect_hflpr (default multiplicative form) is a fixed point on multiplicatively consistent relations",
        format!("100 relations, max deviation {worst_mult:.1e}"),
    );

    let mut resid_count = built;
    for _ in 0..200 {
        let n = rng.random_range(3..=8);
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let d: Vec<f64> = (0..n).map(|i| 0.05 * (n - 1 - i) as f64).collect();
        let b = additive_perfect(&v, &d, rng.random_range(1..=4));
        worst_resid = worst_resid.max(transitivity_residual(&b));
        resid_count += 1;
    }
    gate.record(
        worst_resid < 1e-9,
        "fuzzy-form transitivity residual below 1e-9 on perfect relations",
        format!("{resid_count} relations, max residual {worst_resid:.1e}"),
    );
}

fn runtime_scaling(gate: &mut Gate) {
    let params = ConsistencyParams::default();
    let median_time = |n: usize| {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + n as u64);
        let mut times: Vec<f64> = (0..31)
            .map(|_| {
                let b = random_hflpr(n, &scale(), CellGenerator::UniformPair, &mut rng).unwrap();
                let start = Instant::now();
                for _ in 0..20 {
                    let _ = std::hint::black_box(algorithm1(&b, &params));
                }
                start.elapsed().as_secs_f64()
            })
            .collect();
        times.sort_by(f64::total_cmp);
        times[times.len() / 2]
    };
    let (t4, t8) = (median_time(4), median_time(8));
    let ratio = t8 / t4;
    gate.record(
        ratio <= 32.0,
        "runtime: median algorithm I time ratio n=8 / n=4 at most 32",
        format!("ratio {ratio:.2}"),
    );
}

#[test]
fn primary_acceptance_criteria() {
    let mut gate = Gate::default();
    case_study(&mut gate);
    calibration(&mut gate);
    let (c1, i1) = algorithm1_fuzz(&mut gate);
    let (c2, i2) = algorithm2_fuzz(&mut gate);
    gate.record(
        i1 + i2 == 0,
        "every intermediate relation passes validation under fuzzing",
        format!("{} of {} relations invalid", i1 + i2, c1 + c2),
    );
    perfect_relations(&mut gate);
    runtime_scaling(&mut gate);

    let failed: Vec<&str> = gate.lines.iter().filter(|l| !l.pass).map(|l| l.name.as_str()).collect();
    let summary = format!(
        "{} of {} criteria pass",
        gate.lines.len() - failed.len(),
        gate.lines.len()
    );
    println!("{summary}");

    let text: String = gate
        .lines
        .iter()
        .map(|l| format!("[{}] {}: {}\n", if l.pass { "PASS" } else { "FAIL" }, l.name, l.detail))
        .chain(std::iter::once(format!("{summary}\n")))
        .collect();
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance.txt");
    std::fs::write(&path, text).expect("write acceptance report");

    assert!(failed.is_empty(), "failing criteria: {failed:#?}");
}
