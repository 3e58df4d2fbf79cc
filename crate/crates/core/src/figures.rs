//! The four published equilibrium scenarios and the extra bases for which
//! equilibria are claimed to exist.

use serde::{Deserialize, Serialize};

use crate::equilibrium::{analyze, Analysis, EquilibriumError};
use crate::game::{payoff_weights, GameConfig, PayoffModel};

/// Allowed per-coordinate distance between a computed MAX point and its target.
pub const FIGURE_TOLERANCE: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureScenario {
    pub name: &'static str,
    pub base: (f64, f64),
    pub target: (f64, f64),
}

pub const FIGURE_SCENARIOS: [FigureScenario; 4] = [
    FigureScenario { name: "fig1", base: (0.1, 0.1), target: (0.4, 0.4) },
    FigureScenario { name: "fig2", base: (0.5, 0.5), target: (0.8, 0.8) },
    FigureScenario { name: "fig3", base: (1.0, 1.0), target: (1.0, 1.0) },
    FigureScenario { name: "fig4", base: (1.0, 0.5), target: (1.0, 0.8) },
];

/// Bases for which a nonempty equilibrium set is claimed without a figure.
pub const EXISTENCE_BASES: [(f64, f64); 4] = [(0.1, 1.0), (1.0, 0.1), (0.5, 0.1), (0.1, 0.5)];

#[derive(Debug, Clone)]
pub struct FigureOutcome {
    pub scenario: FigureScenario,
    pub analysis: Analysis,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub scenario: String,
    pub base: [f64; 2],
    pub target: [f64; 2],
    pub max_point: Option<[f64; 2]>,
    pub nash_count: usize,
    pub pass: bool,
}

pub fn matches_target(point: Option<[f64; 2]>, target: (f64, f64)) -> bool {
    match point {
        Some([x, y]) => {
            (x - target.0).abs() <= FIGURE_TOLERANCE + 1e-12
                && (y - target.1).abs() <= FIGURE_TOLERANCE + 1e-12
        }
        None => false,
    }
}

/// Runs one scenario with `template`'s χ, entangler and ε, and joint
/// information weights at the scenario's base pair.
pub fn run_figure(
    scenario: FigureScenario,
    template: &GameConfig,
    step: f64,
    tol: f64,
) -> Result<FigureOutcome, EquilibriumError> {
    let config = GameConfig {
        base_noise: scenario.base,
        ..*template
    };
    let weights = payoff_weights(&config)?;
    let analysis = analyze(&config, &weights, PayoffModel::Trace, step, tol)?;
    let pass = matches_target(analysis.report.max_point, scenario.target);
    Ok(FigureOutcome {
        scenario,
        analysis,
        pass,
    })
}

impl FigureOutcome {
    pub fn summary_row(&self) -> SummaryRow {
        SummaryRow {
            scenario: self.scenario.name.to_string(),
            base: [self.scenario.base.0, self.scenario.base.1],
            target: [self.scenario.target.0, self.scenario.target.1],
            max_point: self.analysis.report.max_point,
            nash_count: self.analysis.report.nash_count,
            pass: self.pass,
        }
    }
}

pub const SUMMARY_CSV_HEADER: &str =
    "scenario,base_a,base_b,target_a,target_b,max_a,max_b,nash_count,pass";

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from(SUMMARY_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let (ma, mb) = match r.max_point {
            Some([a, b]) => (format!("{a}"), format!("{b}")),
            None => ("none".into(), "none".into()),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.scenario, r.base[0], r.base[1], r.target[0], r.target[1], ma, mb, r.nash_count,
            if r.pass { "pass" } else { "FAIL" }
        ));
    }
    out
}
