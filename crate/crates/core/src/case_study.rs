//! Bundled venture-fund evaluation: four experts, three funds, three
//! indices, with the published reference values it is checked against.

use serde::Serialize;

use crate::consensus::{solve_indices, MultiIndexOutcome};
use crate::consistency::{algorithm1, format_ranking, ConsistencyReport};
use crate::error::Result;
use crate::io::{parse_group, GroupSpec};

/// The bundled group document (all twelve relations and index weights).
pub const CASE_STUDY_JSON: &str = include_str!("../data/case_study.json");

/// Published expert weights for the economic-efficiency index.
pub const PUBLISHED_DM_WEIGHTS: [f64; 4] = [0.2523, 0.2478, 0.2488, 0.2512];

/// Published repaired relation of expert 1 on economic efficiency, upper
/// cells `(1,2)`, `(1,3)`, `(2,3)`.
pub const PUBLISHED_REVISED_B1: [&[f64]; 3] = [&[5.5408, 5.6658], &[4.0436, 4.1686, 4.2936], &[2.3707, 2.4957, 2.6207]];

/// Published collective perfect relation on economic efficiency, upper
/// cells `(1,2)`, `(1,3)`, `(2,3)`.
pub const PUBLISHED_COLLECTIVE: [[f64; 3]; 3] = [
    [4.9236, 5.5485, 5.5822],
    [4.0706, 5.4348, 5.9647],
    [3.1518, 3.8325, 4.5011],
];

/// Published per-index priorities.
pub const PUBLISHED_PRIORITIES: [[f64; 3]; 3] = [
    [0.3222, 0.4297, 0.2480],
    [0.4160, 0.2312, 0.3527],
    [0.4162, 0.3132, 0.2706],
];

/// Published per-index rankings (0-based alternatives).
pub const PUBLISHED_RANKINGS: [[usize; 3]; 3] = [[1, 0, 2], [0, 2, 1], [0, 1, 2]];

/// Published fused priority and ranking.
pub const PUBLISHED_FUSED: [f64; 3] = [0.3879, 0.3072, 0.3049];
pub const PUBLISHED_FUSED_RANKING: [usize; 3] = [0, 1, 2];

pub const DM_WEIGHT_TOL: f64 = 0.005;
pub const CELL_TOL: f64 = 0.02;
pub const PRIORITY_TOL: f64 = 0.01;
pub const FUSED_TOL: f64 = 0.01;

/// Index of the economic-efficiency problem within the bundle.
pub const ECONOMIC_INDEX: usize = 1;

/// Parses the bundled document.
pub fn case_study_spec() -> Result<GroupSpec> {
    parse_group(CASE_STUDY_JSON)?.to_spec()
}

/// One computed-versus-published comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    /// Criterion family, e.g. `dm_weights`.
    pub group: &'static str,
    pub label: String,
    pub computed: String,
    pub published: String,
    pub delta: Option<f64>,
    pub tolerance: Option<f64>,
    pub pass: bool,
}

impl Check {
    fn value(group: &'static str, label: String, computed: f64, published: f64, tol: f64) -> Self {
        let delta = (computed - published).abs();
        Self {
            group,
            label,
            computed: format!("{computed:.4}"),
            published: format!("{published:.4}"),
            delta: Some(delta),
            tolerance: Some(tol),
            pass: delta <= tol,
        }
    }

    fn exact(group: &'static str, label: String, computed: String, published: String) -> Self {
        Self {
            group,
            label,
            pass: computed == published,
            computed,
            published,
            delta: None,
            tolerance: None,
        }
    }
}

/// Pipeline outcome and every comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseStudyReport {
    pub outcome: MultiIndexOutcome,
    /// Repair report of expert 1 on economic efficiency.
    pub revised_b1: ConsistencyReport,
    pub index_names: Vec<String>,
    pub checks: Vec<Check>,
}

impl CaseStudyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Checks of one criterion family.
    pub fn group<'a>(&'a self, group: &'a str) -> impl Iterator<Item = &'a Check> + 'a {
        self.checks.iter().filter(move |c| c.group == group)
    }

    /// Whether every check of a family passes.
    pub fn group_passes(&self, group: &str) -> bool {
        self.group(group).all(|c| c.pass)
    }
}

/// Runs the full pipeline on the bundled data and compares it with the
/// published values.
pub fn run_case_study() -> Result<CaseStudyReport> {
    let spec = case_study_spec()?;
    let weights = spec.index_weights.clone().expect("bundled document is multi-index");
    let outcome = solve_indices(&spec.problems, &weights)?;
    let econ = &spec.problems[ECONOMIC_INDEX];
    let revised_b1 = algorithm1(&econ.matrices[0], &econ.consistency)?;

    let mut checks = Vec::new();
    let p = outcome.per_index[ECONOMIC_INDEX].dm_weights.weights();
    for (h, (&c, &e)) in p.iter().zip(&PUBLISHED_DM_WEIGHTS).enumerate() {
        checks.push(Check::value("dm_weights", format!("p_{}", h + 1), c, e, DM_WEIGHT_TOL));
    }

    let cells = [(0, 1), (0, 2), (1, 2)];
    for (&(i, j), published) in cells.iter().zip(PUBLISHED_REVISED_B1) {
        let got = revised_b1.final_matrix.cell(i, j);
        if got.len() != published.len() {
            checks.push(Check::exact(
                "revised_b1",
                format!("#b_{}{}", i + 1, j + 1),
                got.len().to_string(),
                published.len().to_string(),
            ));
            continue;
        }
        for (l, (&c, &e)) in got.indices().iter().zip(published).enumerate() {
            checks.push(Check::value(
                "revised_b1",
                format!("b_{}{}[{}]", i + 1, j + 1, l + 1),
                c,
                e,
                CELL_TOL,
            ));
        }
    }

    let coll = &outcome.per_index[ECONOMIC_INDEX].collective;
    for (&(i, j), published) in cells.iter().zip(PUBLISHED_COLLECTIVE) {
        for (l, (&c, &e)) in coll.cell(i, j).indices().iter().zip(&published).enumerate() {
            checks.push(Check::value(
                "collective",
                format!("b_{}{}[{}]", i + 1, j + 1, l + 1),
                c,
                e,
                CELL_TOL,
            ));
        }
    }

    for (m, trace) in outcome.per_index.iter().enumerate() {
        let group = PRIORITY_GROUPS[m];
        for (i, (&c, &e)) in trace
            .final_priority
            .weights()
            .iter()
            .zip(&PUBLISHED_PRIORITIES[m])
            .enumerate()
        {
            checks.push(Check::value(group, format!("w_{}", i + 1), c, e, PRIORITY_TOL));
        }
        checks.push(Check::exact(
            group,
            "ranking".into(),
            format_ranking(&trace.ranking),
            format_ranking(&PUBLISHED_RANKINGS[m]),
        ));
    }

    for (i, (&c, &e)) in outcome.fused.weights().iter().zip(&PUBLISHED_FUSED).enumerate() {
        checks.push(Check::value("fused", format!("w*_{}", i + 1), c, e, FUSED_TOL));
    }
    checks.push(Check::exact(
        "fused",
        "ranking".into(),
        format_ranking(&outcome.ranking),
        format_ranking(&PUBLISHED_FUSED_RANKING),
    ));

    Ok(CaseStudyReport {
        outcome,
        revised_b1,
        index_names: spec.index_names,
        checks,
    })
}

/// Check-family names of the per-index priorities.
pub const PRIORITY_GROUPS: [&str; 3] = ["priority_index1", "priority_index2", "priority_index3"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundle_parses_into_three_groups_of_four() {
        let spec = case_study_spec().unwrap();
        assert_eq!(spec.problems.len(), 3);
        for p in &spec.problems {
            assert_eq!(p.matrices.len(), 4);
            assert_eq!(p.matrices[0].n(), 3);
        }
        assert_eq!(spec.index_weights.unwrap().weights(), &[0.3, 0.5, 0.2]);
    }
}
