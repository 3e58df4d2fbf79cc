//! Acceptance criteria, one test per criterion, each printing a single
//! `[criterion N] PASS|FAIL ...` line. Run with
//! `cargo test -p qgame-cli --test acceptance -- --nocapture --test-threads=1`.

mod common;

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qgame::equilibrium::{analyze, dominant_strategies, hausdorff_distance, DEFAULT_STEP, DEFAULT_TOL};
use qgame::figures::{run_figure, EXISTENCE_BASES, FIGURE_SCENARIOS, FIGURE_TOLERANCE};
use qgame::game::{
    channel_game_final_state, entangler, information_weight, joint_probabilities, payoff_bruteforce,
    payoff_closed_form, payoff_closed_form_corrected, payoff_weights, EntanglerKind, GameConfig, PayoffModel,
    DEFAULT_EPSILON,
};
use qgame::kraus::{derive_kraus, gamma_of, make_fock_space, qpdc_kraus, HamiltonianParams, QuantumChannel, SeriesConfig};
use qgame::linalg::{ComplexMatrix, DensityMatrix, C64};

const SEED: u64 = 0x5eed_2024;

fn report(n: u32, name: &str, pass: bool, detail: &str) {
    println!("[criterion {n}] {} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
}

fn random_density(rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let g = ComplexMatrix::from_vec(
        2,
        2,
        (0..4)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
    )
    .unwrap();
    let m = &g * &g.dagger();
    let tr = m.trace().unwrap();
    m.scale(tr.inv())
}

/// `(t, ξ)` with `t > 0` and `|tξ| <= 10`.
fn random_params(rng: &mut ChaCha8Rng) -> HamiltonianParams {
    let angle: f64 = rng.gen_range(-10.0..=10.0);
    let t: f64 = rng.gen_range(0.1..=5.0);
    HamiltonianParams::new(angle / t, t).unwrap()
}

fn derived(params: &HamiltonianParams) -> QuantumChannel {
    let space = make_fock_space(2).unwrap();
    derive_kraus(params, &space, &SeriesConfig::default()).unwrap()
}

fn channel_error(a: &QuantumChannel, b: &QuantumChannel, states: &[ComplexMatrix]) -> f64 {
    states
        .iter()
        .map(|rho| a.apply(rho).unwrap().max_abs_diff(&b.apply(rho).unwrap()))
        .fold(0.0, f64::max)
}

#[test]
fn criterion_1_kraus_derivation() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let params: Vec<_> = (0..20).map(|_| random_params(&mut rng)).collect();
    let states: Vec<_> = (0..20).map(|_| random_density(&mut rng)).collect();
    let mut worst: f64 = 0.0;
    let mut worst_nonneg_cos: f64 = 0.0;
    let mut worst_with_z: f64 = 0.0;
    let mut negative_cos = 0;
    let z = ComplexMatrix::real_diag(&[1.0, -1.0]);
    for p in &params {
        let ch = derived(p);
        let qpdc = qpdc_kraus(gamma_of(p)).unwrap();
        let err = channel_error(&ch, &qpdc, &states);
        worst = worst.max(err);
        if p.angle().cos() >= 0.0 {
            worst_nonneg_cos = worst_nonneg_cos.max(err);
        } else {
            negative_cos += 1;
            // Same channel followed by a Z rotation.
            let rotated: Vec<_> = qpdc.kraus().iter().map(|k| &z * k).collect();
            let zq = QuantumChannel::new("z-qpdc", rotated).unwrap();
            worst_with_z = worst_with_z.max(channel_error(&ch, &zq, &states));
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = worst < 1e-10 && elapsed < 1.0;
    report(
        1,
        "derived channel equals phase damping with gamma=sin^2(t*xi)",
        pass,
        &format!(
            "max err {worst:.3e} (tol 1e-10) over 20 (t,xi) x 20 states, {elapsed:.3}s; \
             samples with cos(t*xi)<0: {negative_cos}; max err on cos>=0 samples {worst_nonneg_cos:.3e}; \
             cos<0 samples equal Z after phase damping to {worst_with_z:.3e}"
        ),
    );
    assert!(pass, "derived channel differs from phase damping whenever cos(t*xi) < 0");
}

#[test]
fn criterion_2_trace_preservation() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let derived_worst = (0..20)
        .map(|_| derived(&random_params(&mut rng)).completeness_defect())
        .fold(0.0, f64::max);
    let qpdc_worst = (0..=10)
        .map(|k| qpdc_kraus(k as f64 / 10.0).unwrap().completeness_defect())
        .fold(0.0, f64::max);
    let pass = derived_worst < 1e-10 && qpdc_worst < 1e-10;
    report(
        2,
        "completeness of Kraus sets",
        pass,
        &format!("derived max {derived_worst:.3e}, phase damping max {qpdc_worst:.3e} (tol 1e-10)"),
    );
    assert!(pass);
}

#[test]
fn criterion_3_entangler_contract() {
    let mut unitary_worst: f64 = 0.0;
    for k in 0..100 {
        let chi = FRAC_PI_2 * k as f64 / 99.0;
        for kind in [EntanglerKind::Ewl, EntanglerKind::PhaseDamping] {
            unitary_worst = unitary_worst.max(entangler(chi, kind).unitarity_defect());
        }
    }
    let ground = ComplexMatrix::basis(4, 0);
    let h = FRAC_1_SQRT_2;
    let ewl_want = [C64::new(h, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, h)];
    let ewl = entangler(FRAC_PI_2, EntanglerKind::Ewl).apply(&ground).unwrap();
    // (-1)^{±χ/2π} at χ = π/2 is e^{±iπ/4}.
    let plus = C64::from_polar(0.5, FRAC_PI_4);
    let minus = C64::from_polar(0.5, -FRAC_PI_4);
    let pd_want = [plus, minus, minus, plus];
    let pd = entangler(FRAC_PI_2, EntanglerKind::PhaseDamping).apply(&ground).unwrap();
    let diff = |a: &[C64], b: &[C64]| a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    let (e_ewl, e_pd) = (diff(&ewl, &ewl_want), diff(&pd, &pd_want));
    let pass = unitary_worst < 1e-12 && e_ewl < 1e-12 && e_pd < 1e-12;
    report(
        3,
        "entangler unitarity and pi/2 action",
        pass,
        &format!("unitarity defect {unitary_worst:.3e}, J|00> err {e_ewl:.3e}, J_PD|00> err {e_pd:.3e} (tol 1e-12)"),
    );
    assert!(pass);
}

#[test]
fn criterion_4_closed_form_audit() {
    let start = Instant::now();
    let mut literal_worst: f64 = 0.0;
    let mut corrected_worst: f64 = 0.0;
    for scenario in FIGURE_SCENARIOS {
        let cfg = GameConfig::with_base(scenario.base.0, scenario.base.1);
        let w = payoff_weights(&cfg).unwrap();
        for i in 0..=20 {
            for j in 0..=20 {
                let (x, y) = (i as f64 / 20.0, j as f64 / 20.0);
                let brute = payoff_bruteforce(x, y, &w, FRAC_PI_2, EntanglerKind::PhaseDamping).unwrap();
                literal_worst = literal_worst.max((payoff_closed_form(x, y, &w, FRAC_PI_2) - brute).abs());
                corrected_worst =
                    corrected_worst.max((payoff_closed_form_corrected(x, y, &w, FRAC_PI_2) - brute).abs());
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let literal_ok = literal_worst <= 1e-9;

    let readme = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../README.md")).unwrap_or_default();
    let documented = readme.contains("## Closed-form payoff discrepancy");
    let fig = run_figure(FIGURE_SCENARIOS[0], &GameConfig::default(), 0.1, DEFAULT_TOL).unwrap();
    let downstream_trace = fig.analysis.report.payoff_model == PayoffModel::Trace;

    let fallback_ok = corrected_worst <= 1e-9 && documented && downstream_trace;
    let pass = (literal_ok || fallback_ok) && elapsed < 5.0;
    let mode = if literal_ok { "transcribed closed form agrees" } else { "fallback: brute-force trace authoritative" };
    report(
        4,
        "closed-form payoff audit",
        pass,
        &format!(
            "{mode}; transcribed max err {literal_worst:.3e}, sign-corrected max err {corrected_worst:.3e} (tol 1e-9) \
             on 21x21 x 4 weight sets; discrepancy documented in README: {documented}; \
             downstream model trace: {downstream_trace}; {elapsed:.3}s"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_5_probability_normalization() {
    let mut worst: f64 = 0.0;
    for kind in [EntanglerKind::Ewl, EntanglerKind::PhaseDamping] {
        for chi in [0.0, FRAC_PI_4, FRAC_PI_2] {
            for i in 0..=20 {
                for j in 0..=20 {
                    let p = joint_probabilities(i as f64 / 20.0, j as f64 / 20.0, chi, kind).unwrap();
                    let s: f64 = p.iter().flatten().sum();
                    worst = worst.max((s - 1.0).abs());
                }
            }
        }
    }
    let pass = worst < 1e-10;
    report(5, "joint probabilities sum to one", pass, &format!("max |sum-1| {worst:.3e} (tol 1e-10)"));
    assert!(pass);
}

#[test]
fn criterion_6_figure_reproduction() {
    let start = Instant::now();
    let template = GameConfig::default();
    println!(
        "[criterion 6] interpretation: weights w_ik = -log2 max(p_ik, eps) fixed at the base pair; \
         surface over strategy noise (g*_A, g*_B) in [0,1]^2; residual r_A = F - max_x F(x, g*_B), \
         r_B = F - max_y F(g*_A, y); NE iff r_A, r_B >= -tol; MAX = highest payoff NE, ties by larger sum then larger g*_A; \
         chi={:.6}, entangler={}, step={}, tol={:e}, eps={:e}, match window +-{}",
        template.chi, template.entangler, DEFAULT_STEP, DEFAULT_TOL, template.epsilon, FIGURE_TOLERANCE
    );
    let mut all = true;
    let mut parts = Vec::new();
    for s in FIGURE_SCENARIOS {
        let o = run_figure(s, &template, DEFAULT_STEP, DEFAULT_TOL).unwrap();
        all &= o.pass;
        let max = o.analysis.report.max_point.map_or("none".to_string(), |p| format!("({}, {})", p[0], p[1]));
        parts.push(format!(
            "{} base ({}, {}) target ({}, {}) got {max} [{}]",
            s.name,
            s.base.0,
            s.base.1,
            s.target.0,
            s.target.1,
            if o.pass { "ok" } else { "miss" }
        ));
    }
    for base in EXISTENCE_BASES {
        let cfg = GameConfig { base_noise: base, ..template };
        let w = payoff_weights(&cfg).unwrap();
        let a = analyze(&cfg, &w, PayoffModel::Trace, DEFAULT_STEP, DEFAULT_TOL).unwrap();
        let n = a.report.nash_count;
        all &= n > 0;
        parts.push(format!("exists ({}, {}) nash_count {n} [{}]", base.0, base.1, if n > 0 { "ok" } else { "miss" }));
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = all && elapsed < 30.0;
    report(6, "MAX equilibrium points match targets", pass, &format!("{}; {elapsed:.2}s", parts.join("; ")));
    assert!(pass, "MAX equilibrium points differ from targets");
}

#[test]
fn criterion_7_property_suite() {
    // Density invariants over the normalization sweep.
    let mut density_ok = true;
    for kind in [EntanglerKind::Ewl, EntanglerKind::PhaseDamping] {
        for chi in [0.0, FRAC_PI_4, FRAC_PI_2] {
            for i in 0..=20 {
                for j in 0..=20 {
                    let rho = channel_game_final_state(i as f64 / 20.0, j as f64 / 20.0, chi, kind).unwrap();
                    density_ok &= DensityMatrix::new(rho.into_inner()).is_ok();
                }
            }
        }
    }

    // Dominance implies equilibrium on every figure and existence surface.
    let template = GameConfig::default();
    let bases: Vec<_> = FIGURE_SCENARIOS.iter().map(|s| s.base).chain(EXISTENCE_BASES).collect();
    let mut dominance_ok = true;
    let mut hausdorff_worst: f64 = 0.0;
    for &base in &bases {
        let cfg = GameConfig { base_noise: base, ..template };
        let w = payoff_weights(&cfg).unwrap();
        let fine = analyze(&cfg, &w, PayoffModel::Trace, 0.02, DEFAULT_TOL).unwrap();
        let (da, db) = dominant_strategies(&fine.surface, DEFAULT_TOL).unwrap();
        if let (Some(a), Some(b)) = (da, db) {
            for &x in &a.ties {
                for &y in &b.ties {
                    let (i, j) = ((x / 0.02).round() as usize, (y / 0.02).round() as usize);
                    dominance_ok &= fine.is_nash(i, j);
                }
            }
        }
        let coarse = analyze(&cfg, &w, PayoffModel::Trace, 0.04, DEFAULT_TOL).unwrap();
        hausdorff_worst = hausdorff_worst.max(hausdorff_distance(&coarse.report.nash, &fine.report.nash));
    }
    let refinement_ok = hausdorff_worst <= 0.04 + 1e-12;

    let determinism_ok = common::SUBCOMMAND_RUNS.iter().all(|args| common::rerun_is_identical(args));

    let pass = density_ok && dominance_ok && refinement_ok && determinism_ok;
    report(
        7,
        "property suite",
        pass,
        &format!(
            "density invariants {density_ok}; dominant=>NE {dominance_ok}; \
             Hausdorff(0.04, 0.02) max {hausdorff_worst:.3} (<= 0.04) {refinement_ok}; CLI reruns identical {determinism_ok}"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_8_trivial_limits() {
    let mut worst: f64 = 0.0;
    for s in FIGURE_SCENARIOS {
        for kind in [EntanglerKind::Ewl, EntanglerKind::PhaseDamping] {
            let cfg = GameConfig { base_noise: s.base, entangler: kind, ..GameConfig::default() };
            let w = payoff_weights(&cfg).unwrap();
            let f = payoff_bruteforce(0.0, 0.0, &w, cfg.chi, kind).unwrap();
            worst = worst.max((f - w.get(0, 0)).abs());
        }
    }
    let clamp = -(1e-10f64).log2();
    let clamp_err = (information_weight(0.0, DEFAULT_EPSILON) - clamp).abs();
    // A noiseless base leaves three outcomes with zero probability.
    let w = payoff_weights(&GameConfig::with_base(0.0, 0.0)).unwrap();
    let zero_cells = [(0, 1), (1, 0), (1, 1)];
    let cell_err = zero_cells.iter().map(|&(i, k)| (w.get(i, k) - clamp).abs()).fold(0.0, f64::max);
    let pass = worst <= 1e-12 && clamp_err <= 1e-12 && cell_err <= 1e-12;
    report(
        8,
        "trivial limits",
        pass,
        &format!("|F(0,0) - w00| max {worst:.3e}; clamp err {clamp_err:.3e}, zero-probability cells err {cell_err:.3e} (tol 1e-12)"),
    );
    assert!(pass);
}
