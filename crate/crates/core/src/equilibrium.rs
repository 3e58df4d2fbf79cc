//! Grid Nash equilibria and dominant strategies of the common-payoff game.
//!
//! Player A controls the first coordinate `γ*_A`, player B the second. The
//! best-response residual of A at `(x, y)` is `F(x, y) - max_x' F(x', y)`;
//! a node is a Nash point when both residuals are within `tol` of zero.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{ChannelGame, EntanglerKind, GameConfig, GameError, PayoffModel, PayoffWeights};

pub const DEFAULT_STEP: f64 = 0.02;
pub const DEFAULT_TOL: f64 = 1e-9;
/// Nash points echoed to a terminal before truncating.
pub const PRINT_CAP: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EquilibriumError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("no equilibrium at this tolerance")]
    NoEquilibrium,
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Validates `step` and returns the number of intervals `K = 1/step`.
pub fn grid_intervals(step: f64) -> Result<usize, EquilibriumError> {
    if !(step > 0.0 && step <= 0.5) {
        return Err(EquilibriumError::InvalidArgument(format!(
            "grid step must lie in (0, 0.5], got {step}"
        )));
    }
    let k = (1.0 / step).round();
    if (k * step - 1.0).abs() > 1e-9 {
        return Err(EquilibriumError::InvalidArgument(format!(
            "grid step {step} does not divide [0, 1]"
        )));
    }
    Ok(k as usize)
}

/// Payoff values on the `(K+1) x (K+1)` grid over `[0, 1]²`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceGrid {
    step: f64,
    axis: Vec<f64>,
    /// Row-major: index `i * (K+1) + j` holds `F(axis[i], axis[j])`.
    values: Vec<f64>,
}

impl SurfaceGrid {
    /// Evaluates `f(γ*_A, γ*_B)` at every node, in parallel over rows.
    pub fn from_fn<F>(step: f64, f: F) -> Result<Self, EquilibriumError>
    where
        F: Fn(f64, f64) -> f64 + Sync,
    {
        let k = grid_intervals(step)?;
        let axis: Vec<f64> = (0..=k).map(|j| j as f64 / k as f64).collect();
        let values: Vec<f64> = axis
            .par_iter()
            .flat_map_iter(|&x| axis.iter().map(move |&y| (x, y)).collect::<Vec<_>>())
            .map(|(x, y)| f(x, y))
            .collect();
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(EquilibriumError::InvalidArgument(format!(
                "surface value at node {pos} is not finite"
            )));
        }
        Ok(Self { step, axis, values })
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Number of nodes per axis.
    pub fn size(&self) -> usize {
        self.axis.len()
    }

    pub fn axis(&self) -> &[f64] {
        &self.axis
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.axis.len() + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Fills a surface with the game payoff for fixed weights.
pub fn payoff_surface(
    weights: &PayoffWeights,
    chi: f64,
    kind: EntanglerKind,
    model: PayoffModel,
    step: f64,
) -> Result<SurfaceGrid, EquilibriumError> {
    let game = ChannelGame::new(chi, kind)?;
    SurfaceGrid::from_fn(step, |x, y| model.evaluate(&game, x, y, weights))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualSurfaces {
    n: usize,
    pub r_a: Vec<f64>,
    pub r_b: Vec<f64>,
}

impl ResidualSurfaces {
    pub fn r_a(&self, i: usize, j: usize) -> f64 {
        self.r_a[i * self.n + j]
    }

    pub fn r_b(&self, i: usize, j: usize) -> f64 {
        self.r_b[i * self.n + j]
    }
}

pub fn residual_surfaces(surface: &SurfaceGrid) -> ResidualSurfaces {
    let n = surface.size();
    // Best response of A to each y (column max), of B to each x (row max).
    let col_max: Vec<f64> = (0..n)
        .map(|j| (0..n).map(|i| surface.value(i, j)).fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let row_max: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|j| surface.value(i, j)).fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let mut r_a = Vec::with_capacity(n * n);
    let mut r_b = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let f = surface.value(i, j);
            r_a.push(f - col_max[j]);
            r_b.push(f - row_max[i]);
        }
    }
    ResidualSurfaces { n, r_a, r_b }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NashPoint {
    pub gamma_star_a: f64,
    pub gamma_star_b: f64,
    pub payoff: f64,
}

/// Nodes with both residuals `>= -tol`, ascending by `(γ*_A, γ*_B)`.
pub fn nash_points(
    surface: &SurfaceGrid,
    residuals: &ResidualSurfaces,
    tol: f64,
) -> Result<Vec<NashPoint>, EquilibriumError> {
    check_tol(tol)?;
    let n = surface.size();
    let axis = surface.axis();
    // Row-major iteration already yields the required order.
    Ok((0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| residuals.r_a(i, j) >= -tol && residuals.r_b(i, j) >= -tol)
        .map(|(i, j)| NashPoint {
            gamma_star_a: axis[i],
            gamma_star_b: axis[j],
            payoff: surface.value(i, j),
        })
        .collect())
}

fn check_tol(tol: f64) -> Result<(), EquilibriumError> {
    if tol >= 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(EquilibriumError::InvalidArgument(format!(
            "tolerance must be a finite number >= 0, got {tol}"
        )))
    }
}

/// Nash point of largest payoff. Payoffs within `tol` of the best count as
/// tied; ties go to the larger `γ*_A + γ*_B`, then the larger `γ*_A`.
pub fn select_max_point(points: &[NashPoint], tol: f64) -> Result<NashPoint, EquilibriumError> {
    let best = points
        .iter()
        .map(|p| p.payoff)
        .fold(f64::NEG_INFINITY, f64::max);
    points
        .iter()
        .filter(|p| p.payoff >= best - tol)
        .max_by(|p, q| {
            (p.gamma_star_a + p.gamma_star_b)
                .total_cmp(&(q.gamma_star_a + q.gamma_star_b))
                .then(p.gamma_star_a.total_cmp(&q.gamma_star_a))
        })
        .copied()
        .ok_or(EquilibriumError::NoEquilibrium)
}

/// Dominant strategies of one player: the representative is the largest tied
/// value, `ties` lists them all in ascending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dominance {
    pub value: f64,
    pub ties: Vec<f64>,
}

/// `x*` dominates for A iff `F(x*, y) >= F(x, y) - tol` for every grid `x, y`;
/// analogously for B over the second coordinate.
pub fn dominant_strategies(
    surface: &SurfaceGrid,
    tol: f64,
) -> Result<(Option<Dominance>, Option<Dominance>), EquilibriumError> {
    check_tol(tol)?;
    let residuals = residual_surfaces(surface);
    let n = surface.size();
    let axis = surface.axis();
    let collect = |keep: &dyn Fn(usize) -> bool| {
        let ties: Vec<f64> = (0..n).filter(|&s| keep(s)).map(|s| axis[s]).collect();
        ties.last().copied().map(|value| Dominance { value, ties })
    };
    let dom_a = collect(&|i| (0..n).all(|j| residuals.r_a(i, j) >= -tol));
    let dom_b = collect(&|j| (0..n).all(|i| residuals.r_b(i, j) >= -tol));
    Ok((dom_a, dom_b))
}

/// Everything a `nash` run reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumReport {
    pub base: [f64; 2],
    pub chi: f64,
    pub entangler: EntanglerKind,
    pub payoff_model: PayoffModel,
    pub weights: [[f64; 2]; 2],
    pub nash_count: usize,
    pub nash: Vec<NashPoint>,
    pub max_point: Option<[f64; 2]>,
    pub max_payoff: Option<f64>,
    pub dominant_a: Option<Dominance>,
    pub dominant_b: Option<Dominance>,
    pub tol: f64,
    pub step: f64,
}

/// Surface, residuals and report for one configuration.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub surface: SurfaceGrid,
    pub residuals: ResidualSurfaces,
    pub report: EquilibriumReport,
}

impl Analysis {
    pub fn is_nash(&self, i: usize, j: usize) -> bool {
        self.residuals.r_a(i, j) >= -self.report.tol && self.residuals.r_b(i, j) >= -self.report.tol
    }
}

pub fn analyze(
    config: &GameConfig,
    weights: &PayoffWeights,
    model: PayoffModel,
    step: f64,
    tol: f64,
) -> Result<Analysis, EquilibriumError> {
    config.validate()?;
    check_tol(tol)?;
    let surface = payoff_surface(weights, config.chi, config.entangler, model, step)?;
    let residuals = residual_surfaces(&surface);
    let nash = nash_points(&surface, &residuals, tol)?;
    let max = select_max_point(&nash, tol).ok();
    let (dominant_a, dominant_b) = dominant_strategies(&surface, tol)?;
    let report = EquilibriumReport {
        base: [config.base_noise.0, config.base_noise.1],
        chi: config.chi,
        entangler: config.entangler,
        payoff_model: model,
        weights: weights.w,
        nash_count: nash.len(),
        max_point: max.map(|p| [p.gamma_star_a, p.gamma_star_b]),
        max_payoff: max.map(|p| p.payoff),
        nash,
        dominant_a,
        dominant_b,
        tol,
        step,
    };
    Ok(Analysis {
        surface,
        residuals,
        report,
    })
}

/// Largest distance from a point of one set to the nearest point of the other
/// (Chebyshev metric). Infinite if exactly one set is empty.
pub fn hausdorff_distance(a: &[NashPoint], b: &[NashPoint]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    if a.is_empty() || b.is_empty() {
        return f64::INFINITY;
    }
    let d = |p: &NashPoint, q: &NashPoint| {
        (p.gamma_star_a - q.gamma_star_a)
            .abs()
            .max((p.gamma_star_b - q.gamma_star_b).abs())
    };
    let directed = |from: &[NashPoint], to: &[NashPoint]| {
        from.iter()
            .map(|p| to.iter().map(|q| d(p, q)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    directed(a, b).max(directed(b, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::payoff_weights;

    #[test]
    fn step_validation() {
        assert_eq!(grid_intervals(0.02).unwrap(), 50);
        assert_eq!(grid_intervals(0.5).unwrap(), 2);
        assert!(grid_intervals(0.0).is_err());
        assert!(grid_intervals(0.6).is_err());
        assert!(grid_intervals(0.03).is_err());
        assert!(grid_intervals(f64::NAN).is_err());
    }

    #[test]
    fn surface_shape_and_corners() {
        let w = PayoffWeights::new([[0.4, 1.0], [2.0, 3.0]]).unwrap();
        let s = payoff_surface(&w, std::f64::consts::FRAC_PI_2, EntanglerKind::PhaseDamping, PayoffModel::Trace, 0.1)
            .unwrap();
        assert_eq!(s.size(), 11);
        assert_eq!(s.values().len(), 121);
        assert_eq!(s.axis()[0], 0.0);
        assert_eq!(s.axis()[10], 1.0);
        assert!((s.value(0, 0) - 0.4).abs() < 1e-12);
    }

    #[test]
    fn uniform_weights_corners_agree() {
        let w = PayoffWeights::uniform(1.0);
        for model in [PayoffModel::Trace, PayoffModel::ClosedForm] {
            let s = payoff_surface(&w, std::f64::consts::FRAC_PI_2, EntanglerKind::PhaseDamping, model, 0.5)
                .unwrap();
            assert!((s.value(0, 0) - 1.0).abs() < 1e-12);
            assert!((s.value(2, 2) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_surface_residuals_vanish() {
        let s = SurfaceGrid::from_fn(0.25, |_, _| 3.0).unwrap();
        let r = residual_surfaces(&s);
        assert!(r.r_a.iter().chain(&r.r_b).all(|&x| x == 0.0));
        let ne = nash_points(&s, &r, 0.0).unwrap();
        assert_eq!(ne.len(), 25);
        let (a, b) = dominant_strategies(&s, 0.0).unwrap();
        assert_eq!(a.unwrap().ties.len(), 5);
        assert_eq!(b.unwrap().ties.len(), 5);
    }

    #[test]
    fn single_peak_best_response() {
        let s = SurfaceGrid::from_fn(0.1, |x, _| -(x - 0.3) * (x - 0.3)).unwrap();
        let r = residual_surfaces(&s);
        for i in 0..s.size() {
            for j in 0..s.size() {
                if i == 3 {
                    assert_eq!(r.r_a(i, j), 0.0);
                } else {
                    assert!(r.r_a(i, j) < 0.0);
                }
            }
        }
    }

    #[test]
    fn separable_surface_dominance() {
        let s = SurfaceGrid::from_fn(0.05, |x, y| -(x - 0.6).powi(2) + y.sin()).unwrap();
        let (a, b) = dominant_strategies(&s, 1e-12).unwrap();
        let a = a.unwrap();
        assert_eq!(a.ties.len(), 1);
        assert!((a.value - 0.6).abs() < 1e-12);
        assert_eq!(b.unwrap().value, 1.0);
    }

    #[test]
    fn no_dominant_strategy_on_coordination_surface() {
        // Best response of A copies y, so no single x is always best.
        let s = SurfaceGrid::from_fn(0.25, |x, y| -(x - y).powi(2)).unwrap();
        let (a, b) = dominant_strategies(&s, 1e-12).unwrap();
        assert!(a.is_none() && b.is_none());
        let r = residual_surfaces(&s);
        assert_eq!(nash_points(&s, &r, 1e-12).unwrap().len(), 5);
    }

    #[test]
    fn max_point_tie_break() {
        let pts = [
            NashPoint { gamma_star_a: 0.2, gamma_star_b: 0.2, payoff: 1.0 },
            NashPoint { gamma_star_a: 0.6, gamma_star_b: 0.4, payoff: 1.0 },
            NashPoint { gamma_star_a: 0.4, gamma_star_b: 0.6, payoff: 1.0 },
            NashPoint { gamma_star_a: 0.0, gamma_star_b: 0.0, payoff: 0.5 },
        ];
        let best = select_max_point(&pts, 1e-12).unwrap();
        assert_eq!((best.gamma_star_a, best.gamma_star_b), (0.6, 0.4));
        assert_eq!(select_max_point(&pts[3..], 0.0).unwrap(), pts[3]);
        assert_eq!(select_max_point(&[], 0.0), Err(EquilibriumError::NoEquilibrium));
    }

    #[test]
    fn negative_tolerance_rejected() {
        let s = SurfaceGrid::from_fn(0.5, |_, _| 0.0).unwrap();
        let r = residual_surfaces(&s);
        assert!(nash_points(&s, &r, -1e-3).is_err());
        assert!(dominant_strategies(&s, -1.0).is_err());
    }

    #[test]
    fn hausdorff_basics() {
        let p = |a, b| NashPoint { gamma_star_a: a, gamma_star_b: b, payoff: 0.0 };
        assert_eq!(hausdorff_distance(&[], &[]), 0.0);
        assert_eq!(hausdorff_distance(&[p(0.0, 0.0)], &[]), f64::INFINITY);
        let d = hausdorff_distance(&[p(0.0, 0.0), p(1.0, 1.0)], &[p(0.0, 0.1)]);
        assert!((d - 1.0).abs() < 1e-15);
    }

    #[test]
    fn analyze_full_noise_base_is_flat() {
        // Base (1,1) makes every joint probability 1/4, so all weights are 2
        // and the payoff is 2 everywhere.
        let cfg = GameConfig::with_base(1.0, 1.0);
        let w = payoff_weights(&cfg).unwrap();
        let an = analyze(&cfg, &w, PayoffModel::Trace, 0.1, DEFAULT_TOL).unwrap();
        assert_eq!(an.report.nash_count, 121);
        assert_eq!(an.report.max_point, Some([1.0, 1.0]));
        assert_eq!(an.report.dominant_a.as_ref().unwrap().ties.len(), 11);
    }
}
