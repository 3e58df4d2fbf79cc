use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use qgame::equilibrium::{analyze, Analysis, PRINT_CAP};
use qgame::export::{fmt_float, surface_csv, WeightsExport};
use qgame::figures::{run_figure, summary_csv, FigureOutcome, EXISTENCE_BASES, FIGURE_SCENARIOS};
use qgame::game::{payoff_weights, GameConfig, PayoffMode, PayoffModel};
use qgame::kraus::{derive_kraus, gamma_of, make_fock_space, qpdc_kraus, QuantumChannel};
use qgame::linalg::{ComplexMatrix, C64};

use crate::args::{Format, RunConfig};
use crate::error::CliError;

const DEFAULT_FIGURE_DIR: &str = "figures";

/// Writes `content` to `out`, or to stdout when no path is given.
fn emit(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, content).map_err(|e| CliError::io(path.display(), e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::io("stdout", e))
        }
    }
}

/// Diagnostics go to stdout when the payload went to a file, else to stderr.
fn note(cfg: &RunConfig, line: &str) {
    if cfg.out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Numerical(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Probe states for comparing channel actions.
fn probe_states() -> Vec<ComplexMatrix> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = [C64::new(h, 0.0), C64::new(h, 0.0)];
    let plus_i = [C64::new(h, 0.0), C64::new(0.0, h)];
    let mixed = ComplexMatrix::from_rows(&[
        [C64::new(0.7, 0.0), C64::new(0.2, -0.1)],
        [C64::new(0.2, 0.1), C64::new(0.3, 0.0)],
    ]);
    vec![
        ComplexMatrix::real_diag(&[1.0, 0.0]),
        ComplexMatrix::real_diag(&[0.0, 1.0]),
        ComplexMatrix::outer(&plus),
        ComplexMatrix::outer(&plus_i),
        mixed,
    ]
}

/// Largest entrywise difference between the actions of two channels on the probe states.
pub fn action_mismatch(a: &QuantumChannel, b: &QuantumChannel) -> Result<f64, CliError> {
    let mut worst: f64 = 0.0;
    for rho in probe_states() {
        let d = a.apply(&rho)?.max_abs_diff(&b.apply(&rho)?);
        worst = worst.max(d);
    }
    Ok(worst)
}

pub fn derive_kraus_cmd(cfg: &RunConfig) -> Result<(), CliError> {
    if cfg.levels < 2 {
        return Err(CliError::Usage(format!(
            "--levels must be >= 2 (the bath needs at least the vacuum and one excitation), got {}",
            cfg.levels
        )));
    }
    let params = cfg.hamiltonian()?;
    let space = make_fock_space(cfg.levels)?;
    let series = cfg.series();
    let channel = derive_kraus(&params, &space, &series)?;
    let gamma = gamma_of(&params);
    let mismatch = if cfg.levels == 2 {
        Some(action_mismatch(&channel, &qpdc_kraus(gamma)?)?)
    } else {
        None
    };
    let json = to_json(&channel.to_export())?;
    emit(cfg.out.as_deref(), &json)?;
    note(cfg, &format!("operators={}", channel.kraus().len()));
    note(cfg, &format!("completeness_defect={}", fmt_float(channel.completeness_defect())));
    note(cfg, &format!("gamma=sin^2(t*xi)={}", fmt_float(gamma)));
    if let Some(m) = mismatch {
        note(cfg, &format!("phase_damping_action_mismatch={}", fmt_float(m)));
        if params.angle().cos() < 0.0 && m > 1e-10 {
            note(cfg, "note: cos(t*xi) < 0, derived channel equals a Z rotation after phase damping");
        }
    }
    Ok(())
}

pub fn weights_cmd(cfg: &RunConfig) -> Result<(), CliError> {
    cfg.game.validate()?;
    let w = payoff_weights(&cfg.game)?;
    let export = WeightsExport::new(cfg.game.base_noise, cfg.game.chi, cfg.game.entangler, &w);
    emit(cfg.out.as_deref(), &to_json(&export)?)
}

fn run_analysis(cfg: &RunConfig) -> Result<Analysis, CliError> {
    cfg.validate_game()?;
    let w = payoff_weights(&cfg.game)?;
    Ok(analyze(&cfg.game, &w, PayoffModel::Trace, cfg.step, cfg.tol)?)
}

#[derive(Serialize)]
struct SurfaceJson<'a> {
    step: f64,
    axis: &'a [f64],
    payoff: Vec<Vec<f64>>,
    residual_a: Vec<Vec<f64>>,
    residual_b: Vec<Vec<f64>>,
    is_nash: Vec<Vec<bool>>,
}

fn surface_json(analysis: &Analysis) -> Result<String, CliError> {
    let s = &analysis.surface;
    let n = s.size();
    let grid = |f: &dyn Fn(usize, usize) -> f64| -> Vec<Vec<f64>> {
        (0..n).map(|i| (0..n).map(|j| f(i, j) + 0.0).collect()).collect()
    };
    let doc = SurfaceJson {
        step: s.step(),
        axis: s.axis(),
        payoff: grid(&|i, j| s.value(i, j)),
        residual_a: grid(&|i, j| analysis.residuals.r_a(i, j)),
        residual_b: grid(&|i, j| analysis.residuals.r_b(i, j)),
        is_nash: (0..n).map(|i| (0..n).map(|j| analysis.is_nash(i, j)).collect()).collect(),
    };
    to_json(&doc)
}

pub fn surface_cmd(cfg: &RunConfig) -> Result<(), CliError> {
    let analysis = run_analysis(cfg)?;
    let text = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => surface_csv(&analysis),
        Format::Json => surface_json(&analysis)?,
    };
    emit(cfg.out.as_deref(), &text)
}

fn point(p: [f64; 2]) -> String {
    format!("({}, {})", p[0], p[1])
}

pub fn nash_cmd(cfg: &RunConfig) -> Result<(), CliError> {
    let analysis = run_analysis(cfg)?;
    let report = &analysis.report;
    let text = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => to_json(report)?,
        Format::Csv => surface_csv(&analysis),
    };
    emit(cfg.out.as_deref(), &text)?;
    note(cfg, &format!("nash_count={}", report.nash_count));
    match report.max_point {
        Some(p) => note(cfg, &format!("max_point={}", point(p))),
        None => note(cfg, "no equilibrium at this tolerance"),
    }
    for (label, dom) in [("A", &report.dominant_a), ("B", &report.dominant_b)] {
        if let Some(d) = dom {
            note(cfg, &format!("dominant_{label}={} ties={:?}", d.value, d.ties));
        }
    }
    for p in report.nash.iter().take(PRINT_CAP) {
        note(cfg, &format!("nash {}", point([p.gamma_star_a, p.gamma_star_b])));
    }
    if report.nash_count > PRINT_CAP {
        note(cfg, &format!("... {} more (total {})", report.nash_count - PRINT_CAP, report.nash_count));
    }
    Ok(())
}

/// Result of `reproduce-figures`, before anything is written.
pub struct FigureRun {
    pub outcomes: Vec<FigureOutcome>,
    pub existence: Vec<((f64, f64), usize)>,
}

impl FigureRun {
    pub fn all_pass(&self) -> bool {
        self.outcomes.iter().all(|o| o.pass) && self.existence.iter().all(|(_, n)| *n > 0)
    }
}

/// Figures always use joint-information weights, whatever `--payoff-mode` says.
pub fn compute_figures(cfg: &RunConfig) -> Result<FigureRun, CliError> {
    cfg.validate_game()?;
    let template = GameConfig { payoff_mode: PayoffMode::JointInformation, ..cfg.game };
    let outcomes = FIGURE_SCENARIOS
        .iter()
        .map(|s| run_figure(*s, &template, cfg.step, cfg.tol))
        .collect::<Result<Vec<_>, _>>()?;
    let existence = EXISTENCE_BASES
        .iter()
        .map(|&base| {
            let game = GameConfig { base_noise: base, ..template };
            let w = payoff_weights(&game)?;
            let a = analyze(&game, &w, PayoffModel::Trace, cfg.step, cfg.tol)?;
            Ok((base, a.report.nash_count))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(FigureRun { outcomes, existence })
}

pub fn reproduce_figures_cmd(cfg: &RunConfig) -> Result<(), CliError> {
    let run = compute_figures(cfg)?;
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_FIGURE_DIR));
    let mut files: Vec<(PathBuf, String)> = Vec::new();
    for o in &run.outcomes {
        files.push((dir.join(format!("{}.csv", o.scenario.name)), surface_csv(&o.analysis)));
        files.push((dir.join(format!("{}.json", o.scenario.name)), to_json(&o.analysis.report)?));
    }
    let rows: Vec<_> = run.outcomes.iter().map(FigureOutcome::summary_row).collect();
    files.push((dir.join("summary.csv"), summary_csv(&rows)));

    fs::create_dir_all(&dir).map_err(|e| CliError::io(dir.display(), e))?;
    for (path, content) in &files {
        fs::write(path, content).map_err(|e| CliError::io(path.display(), e))?;
    }

    for o in &run.outcomes {
        let max = o.analysis.report.max_point.map(point).unwrap_or_else(|| "none".into());
        println!(
            "{} base={} target={} max={} nash_count={} {}",
            o.scenario.name,
            point([o.scenario.base.0, o.scenario.base.1]),
            point([o.scenario.target.0, o.scenario.target.1]),
            max,
            o.analysis.report.nash_count,
            if o.pass { "pass" } else { "FAIL" }
        );
    }
    for ((a, b), n) in &run.existence {
        println!(
            "existence base={} nash_count={} {}",
            point([*a, *b]),
            n,
            if *n > 0 { "pass" } else { "FAIL" }
        );
    }
    if run.all_pass() {
        Ok(())
    } else {
        let failed: Vec<_> = run
            .outcomes
            .iter()
            .filter(|o| !o.pass)
            .map(|o| o.scenario.name)
            .collect();
        Err(CliError::Mismatch(format!(
            "MAX point outside tolerance for {}; outputs written to {}",
            if failed.is_empty() { "existence checks".to_string() } else { failed.join(", ") },
            dir.display()
        )))
    }
}
