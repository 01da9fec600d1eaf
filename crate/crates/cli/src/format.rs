//! Text renderings of reports.

use std::fmt::Write;

use hflpr_core::{CaseStudyReport, Check, ConsensusTrace, ConsistencyReport, Hflpr, MultiIndexOutcome};

use crate::Failure;

/// Number with at most four decimals and no trailing zeros.
pub fn short(x: f64) -> String {
    let s = format!("{x:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

/// `{s_a,s_b}` rendering of one cell.
fn cell(b: &Hflpr, i: usize, j: usize) -> String {
    let terms: Vec<String> = b
        .cell(i, j)
        .indices()
        .iter()
        .map(|x| format!("s{}", short(*x)))
        .collect();
    format!("{{{}}}", terms.join(","))
}

/// Matrix as aligned rows of term sets.
pub fn matrix_pretty(b: &Hflpr) -> String {
    let n = b.n();
    let cells: Vec<Vec<String>> = (0..n).map(|i| (0..n).map(|j| cell(b, i, j)).collect()).collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(0);
    let mut s = String::new();
    for row in &cells {
        let line: Vec<String> = row.iter().map(|c| format!("{c:<width$}")).collect();
        let _ = writeln!(s, "  {}", line.join("  ").trim_end());
    }
    s
}

fn weights(w: &[f64]) -> String {
    w.iter().map(|x| short(*x)).collect::<Vec<_>>().join(",")
}

pub fn check_pretty(r: &ConsistencyReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "Revised HFLPR:");
    s.push_str(&matrix_pretty(&r.final_matrix));
    if r.accepted {
        let _ = writeln!(
            s,
            "After adjusting the individual HFLPR {} times, the revised HFLPR with acceptable consistency is obtained.",
            r.adjustments
        );
    } else {
        let _ = writeln!(
            s,
            "After adjusting the individual HFLPR {} times, the iteration cap was reached without acceptable consistency.",
            r.adjustments
        );
    }
    let threshold = r.threshold.map_or("none".to_string(), short);
    let _ = writeln!(
        s,
        "HFLGCI: {:.6} (threshold {threshold}, slice {})",
        r.final_hflgci, r.optimal_slice
    );
    let _ = writeln!(s, "Priority weight:{}", weights(r.priority.weights()));
    let _ = writeln!(s, "Ranking: {}", r.priority.ranking_string());
    s
}

pub fn gdm_pretty(t: &ConsensusTrace) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "Ranking weight:{}", weights(t.final_priority.weights()));
    let _ = writeln!(
        s,
        "The numbers of iterations for this method to reach consensus is {}",
        t.modifications
    );
    let _ = writeln!(s, "Ranking: {}", t.final_priority.ranking_string());
    let _ = writeln!(
        s,
        "Worst consensus degree: {:.4} after {} checks",
        t.final_wcd(),
        t.rounds.len()
    );
    let _ = writeln!(s, "Decision maker weights: {}", weights(t.dm_weights.weights()));
    s
}

pub fn multi_pretty(o: &MultiIndexOutcome, names: &[String]) -> String {
    let mut s = String::new();
    for (m, t) in o.per_index.iter().enumerate() {
        let name = names.get(m).cloned().unwrap_or_else(|| format!("index {}", m + 1));
        let _ = writeln!(s, "[{name}] weight {}", short(o.index_weights.weights()[m]));
        for line in gdm_pretty(t).lines() {
            let _ = writeln!(s, "  {line}");
        }
    }
    let _ = writeln!(s, "Ranking weight:{}", weights(o.fused.weights()));
    let _ = writeln!(s, "Ranking: {}", o.fused.ranking_string());
    s
}

pub fn case_study_pretty(r: &CaseStudyReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<20} {:<24} {:>14} {:>14} {:>8} {:>6}  result",
        "group", "value", "computed", "published", "delta", "tol"
    );
    for c in &r.checks {
        let delta = c.delta.map_or("-".into(), |d| format!("{d:.4}"));
        let tol = c.tolerance.map_or("-".into(), short);
        let _ = writeln!(
            s,
            "{:<20} {:<24} {:>14} {:>14} {:>8} {:>6}  {}",
            c.group,
            c.label,
            c.computed,
            c.published,
            delta,
            tol,
            if c.pass { "PASS" } else { "FAIL" }
        );
    }
    let failed = r.checks.iter().filter(|c| !c.pass).count();
    let _ = writeln!(s, "Ranking: {}", r.outcome.fused.ranking_string());
    let _ = writeln!(
        s,
        "{} of {} values within tolerance",
        r.checks.len() - failed,
        r.checks.len()
    );
    s
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String, Failure> {
    let bytes = w.into_inner().map_err(|e| Failure::input(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn csv_err(e: csv::Error) -> Failure {
    Failure::input(e.to_string())
}

/// `i,j,indices` rows, 1-based, indices separated by spaces.
pub fn matrix_csv(b: &Hflpr) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["i", "j", "indices"]).map_err(csv_err)?;
    for i in 0..b.n() {
        for j in 0..b.n() {
            let idx: Vec<String> = b.cell(i, j).indices().iter().map(|x| x.to_string()).collect();
            w.write_record([(i + 1).to_string(), (j + 1).to_string(), idx.join(" ")])
                .map_err(csv_err)?;
        }
    }
    finish(w)
}

/// `alternative,weight,rank` rows, 1-based.
pub fn ranking_csv(weights: &[f64], ranking: &[usize]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["alternative", "weight", "rank"]).map_err(csv_err)?;
    for (a, x) in weights.iter().enumerate() {
        let rank = ranking.iter().position(|&r| r == a).map_or(0, |p| p + 1);
        w.serialize((a + 1, x, rank)).map_err(csv_err)?;
    }
    finish(w)
}

pub fn checks_csv(checks: &[Check]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for c in checks {
        w.serialize(c).map_err(csv_err)?;
    }
    finish(w)
}
