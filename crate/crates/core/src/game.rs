//! Two-player quantum game in which each player is a noise channel.
//!
//! A strategy is a phase-damping strength `γ* ∈ [0, 1]`. The initial state
//! `|00>` is entangled by `J`, both players' channels act on their own qubit,
//! `J†` undoes the entangler and the payoff operator is read off the
//! computational-basis populations.
//!
//! Payoff weights are the joint information `-log2 p_ik` of the noise
//! outcomes `(i, k)`, computed once at a fixed base noise pair. The same
//! weights serve both players, so the game has one common payoff function.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kraus::qpdc_pair;
use crate::linalg::{
    eig_hermitian, partial_trace, ComplexMatrix, DensityError, DensityMatrix,
    LinalgError, Subsystem, C64, I,
};

/// Default probability floor for the joint information.
pub const DEFAULT_EPSILON: f64 = 1e-10;
/// Tolerance used to decide whether a strategy matrix is unitary.
pub const UNITARY_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GameError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Density(#[from] DensityError),
}

fn check_gamma(name: &str, g: f64) -> Result<(), GameError> {
    if (0.0..=1.0).contains(&g) {
        Ok(())
    } else {
        Err(GameError::InvalidArgument(format!("{name} must lie in [0, 1], got {g}")))
    }
}

fn check_chi(chi: f64) -> Result<(), GameError> {
    if (0.0..=FRAC_PI_2).contains(&chi) {
        Ok(())
    } else {
        Err(GameError::InvalidArgument(format!("chi must lie in [0, pi/2], got {chi}")))
    }
}

/// Euler angles of a two-parameter strategy unitary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrategyAngles {
    pub theta: f64,
    pub phi: f64,
}

impl StrategyAngles {
    pub fn new(theta: f64, phi: f64) -> Result<Self, GameError> {
        if !(0.0..=PI).contains(&theta) || !(0.0..=FRAC_PI_2).contains(&phi) {
            return Err(GameError::InvalidArgument(format!(
                "strategy angles out of range: theta = {theta} (want [0, pi]), phi = {phi} (want [0, pi/2])"
            )));
        }
        Ok(Self { theta, phi })
    }

    /// `I = U(0, 0)`: cooperate.
    pub const IDENTITY: Self = Self { theta: 0.0, phi: 0.0 };
    /// `D = U(π, 0)`: defect.
    pub const DEFECT: Self = Self { theta: PI, phi: 0.0 };
}

/// `U(θ, φ) = [[e^{iφ} cos(θ/2), sin(θ/2)], [-sin(θ/2), e^{-iφ} cos(θ/2)]]`.
pub fn strategy_unitary(angles: StrategyAngles) -> ComplexMatrix {
    let (s, c) = (angles.theta / 2.0).sin_cos();
    let phase = C64::from_polar(1.0, angles.phi);
    ComplexMatrix::from_rows(&[
        [phase * c, C64::new(s, 0.0)],
        [C64::new(-s, 0.0), phase.conj() * c],
    ])
}

/// Exact `D = [[0, 1], [-1, 0]]`.
pub fn defect_matrix() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[0.0, 1.0], [-1.0, 0.0]])
}

pub fn hadamard() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[FRAC_1_SQRT_2, FRAC_1_SQRT_2], [FRAC_1_SQRT_2, -FRAC_1_SQRT_2]])
}

/// Which entangling gate opens and closes the protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EntanglerKind {
    /// `J(χ) = exp(i χ/2 D⊗D)`.
    #[serde(rename = "J")]
    Ewl,
    /// `J(χ) (H⊗H)`: Hadamard pre-rotation so phase damping acts on coherences.
    #[serde(rename = "JPD")]
    PhaseDamping,
}

impl EntanglerKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Ewl => "J",
            Self::PhaseDamping => "JPD",
        }
    }
}

impl fmt::Display for EntanglerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EntanglerKind {
    type Err = GameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "J" | "j" | "ewl" => Ok(Self::Ewl),
            "JPD" | "jpd" | "pd" => Ok(Self::PhaseDamping),
            other => Err(GameError::InvalidArgument(format!(
                "unknown entangler {other:?} (expected J or JPD)"
            ))),
        }
    }
}

/// `cos(χ/2) I⊗I + i sin(χ/2) D⊗D`, optionally followed by `H⊗H` on the right.
pub fn entangler(chi: f64, kind: EntanglerKind) -> ComplexMatrix {
    let (s, c) = (chi / 2.0).sin_cos();
    let d = defect_matrix();
    let j = &ComplexMatrix::identity(4).scale(C64::new(c, 0.0)) + &d.kron(&d).scale(I * s);
    match kind {
        EntanglerKind::Ewl => j,
        EntanglerKind::PhaseDamping => &j * &hadamard().kron(&hadamard()),
    }
}

/// Final state `J† (U_A ⊗ U_B) J |00>` of the unitary-strategy game.
pub fn ewl_pure_final_state(
    angles_a: StrategyAngles,
    angles_b: StrategyAngles,
    chi: f64,
    kind: EntanglerKind,
) -> Vec<C64> {
    let j = entangler(chi, kind);
    let local = strategy_unitary(angles_a).kron(&strategy_unitary(angles_b));
    let op = &(&j.dagger() * &local) * &j;
    op.apply(&ComplexMatrix::basis(4, 0))
        .expect("4x4 operator on a 4-vector")
}

/// How the payoff weights are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PayoffMode {
    #[serde(rename = "info")]
    JointInformation,
    #[serde(rename = "vn")]
    VonNeumann,
}

impl FromStr for PayoffMode {
    type Err = GameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "info" => Ok(Self::JointInformation),
            "vn" => Ok(Self::VonNeumann),
            other => Err(GameError::InvalidArgument(format!(
                "unknown payoff mode {other:?} (expected info or vn)"
            ))),
        }
    }
}

impl fmt::Display for PayoffMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::JointInformation => "info",
            Self::VonNeumann => "vn",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameConfig {
    pub chi: f64,
    pub entangler: EntanglerKind,
    /// `(γ_A, γ_B)` used for the payoff weights.
    pub base_noise: (f64, f64),
    pub epsilon: f64,
    pub payoff_mode: PayoffMode,
}

impl Default for GameConfig {
    fn default() -> Self {
        Self {
            chi: FRAC_PI_2,
            entangler: EntanglerKind::PhaseDamping,
            base_noise: (0.1, 0.1),
            epsilon: DEFAULT_EPSILON,
            payoff_mode: PayoffMode::JointInformation,
        }
    }
}

impl GameConfig {
    pub fn with_base(gamma_a: f64, gamma_b: f64) -> Self {
        Self {
            base_noise: (gamma_a, gamma_b),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), GameError> {
        check_chi(self.chi)?;
        check_gamma("gamma_a", self.base_noise.0)?;
        check_gamma("gamma_b", self.base_noise.1)?;
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(GameError::InvalidArgument(format!(
                "epsilon must lie in (0, 1), got {}",
                self.epsilon
            )));
        }
        Ok(())
    }
}

/// `w_ik`, indexed `[i][k]` with `i` for player A's outcome.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PayoffWeights {
    pub w: [[f64; 2]; 2],
}

impl PayoffWeights {
    pub fn new(w: [[f64; 2]; 2]) -> Result<Self, GameError> {
        if w.iter().flatten().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(GameError::InvalidArgument(format!(
                "payoff weights must be finite and non-negative: {w:?}"
            )));
        }
        Ok(Self { w })
    }

    pub fn uniform(value: f64) -> Self {
        Self { w: [[value; 2]; 2] }
    }

    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.w[i][k]
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (self.w[0][1] - self.w[1][0]).abs() <= tol
    }

    /// Weights in `|ik>` order: `[w00, w01, w10, w11]`.
    pub fn flat(&self) -> [f64; 4] {
        [self.w[0][0], self.w[0][1], self.w[1][0], self.w[1][1]]
    }
}

/// `-log2(max(p, ε))`, with `p` also capped at 1.
pub fn information_weight(p: f64, epsilon: f64) -> f64 {
    let p = p.min(1.0).max(epsilon);
    -p.log2()
}

/// Precomputed entangler and entangled initial state for a fixed `(χ, kind)`.
#[derive(Debug, Clone)]
pub struct ChannelGame {
    chi: f64,
    kind: EntanglerKind,
    j: ComplexMatrix,
    j_dag: ComplexMatrix,
    rho_in: ComplexMatrix,
}

impl ChannelGame {
    pub fn new(chi: f64, kind: EntanglerKind) -> Result<Self, GameError> {
        check_chi(chi)?;
        let j = entangler(chi, kind);
        let psi = j.apply(&ComplexMatrix::basis(4, 0))?;
        Ok(Self {
            chi,
            kind,
            j_dag: j.dagger(),
            j,
            rho_in: ComplexMatrix::outer(&psi),
        })
    }

    pub fn chi(&self) -> f64 {
        self.chi
    }

    pub fn kind(&self) -> EntanglerKind {
        self.kind
    }

    /// `J ρ_in J†` for `ρ_in = |00><00|`.
    pub fn entangled_input(&self) -> &ComplexMatrix {
        &self.rho_in
    }

    fn branch_ops(gamma_a: f64, gamma_b: f64) -> [[ComplexMatrix; 2]; 2] {
        let a = qpdc_pair(gamma_a);
        let b = qpdc_pair(gamma_b);
        [
            [a[0].kron(&b[0]), a[0].kron(&b[1])],
            [a[1].kron(&b[0]), a[1].kron(&b[1])],
        ]
    }

    /// `p_ik = tr((s_i ⊗ s_k) ρ' (s_i ⊗ s_k)†)`.
    pub fn joint_probabilities(&self, gamma_a: f64, gamma_b: f64) -> Result<[[f64; 2]; 2], GameError> {
        check_gamma("gamma_a", gamma_a)?;
        check_gamma("gamma_b", gamma_b)?;
        let ops = Self::branch_ops(gamma_a, gamma_b);
        let mut p = [[0.0; 2]; 2];
        for i in 0..2 {
            for k in 0..2 {
                p[i][k] = ops[i][k].conjugate(&self.rho_in)?.trace()?.re;
            }
        }
        Ok(p)
    }

    /// Unvalidated `J† σ J` with `σ = Σ_ik (s_i⊗s_k) ρ' (s_i⊗s_k)†`.
    fn final_matrix(&self, gamma_a: f64, gamma_b: f64) -> ComplexMatrix {
        let ops = Self::branch_ops(gamma_a, gamma_b);
        let sigma = ops
            .iter()
            .flatten()
            .fold(ComplexMatrix::zeros(4, 4), |acc, k| {
                &acc + &(&(k * &self.rho_in) * &k.dagger())
            });
        &(&self.j_dag * &sigma) * &self.j
    }

    pub fn final_state(&self, gamma_a: f64, gamma_b: f64) -> Result<DensityMatrix, GameError> {
        check_gamma("gamma_star_a", gamma_a)?;
        check_gamma("gamma_star_b", gamma_b)?;
        Ok(DensityMatrix::new(self.final_matrix(gamma_a, gamma_b))?)
    }

    /// `tr(P ρ_fin) = Σ_ik w_ik <ik|ρ_fin|ik>`. Strategies are assumed valid.
    pub fn payoff(&self, gamma_a: f64, gamma_b: f64, weights: &PayoffWeights) -> f64 {
        let rho = self.final_matrix(gamma_a, gamma_b);
        weights
            .flat()
            .iter()
            .enumerate()
            .map(|(idx, w)| w * rho[(idx, idx)].re)
            .sum()
    }
}

pub fn joint_probabilities(
    gamma_a: f64,
    gamma_b: f64,
    chi: f64,
    kind: EntanglerKind,
) -> Result<[[f64; 2]; 2], GameError> {
    ChannelGame::new(chi, kind)?.joint_probabilities(gamma_a, gamma_b)
}

/// Weights for `config`. Joint-information mode evaluates `-log2 p_ik` at the
/// base noise pair; von Neumann mode uses the classical strategies `{I, D}`
/// for both players.
pub fn payoff_weights(config: &GameConfig) -> Result<PayoffWeights, GameError> {
    config.validate()?;
    match config.payoff_mode {
        PayoffMode::JointInformation => {
            let (ga, gb) = config.base_noise;
            let p = joint_probabilities(ga, gb, config.chi, config.entangler)?;
            let mut w = [[0.0; 2]; 2];
            for i in 0..2 {
                for k in 0..2 {
                    w[i][k] = information_weight(p[i][k], config.epsilon);
                }
            }
            PayoffWeights::new(w)
        }
        PayoffMode::VonNeumann => {
            let s = classical_strategies();
            von_neumann_weights(config.chi, config.entangler, &s, &s, Subsystem::A)
        }
    }
}

pub fn channel_game_final_state(
    gamma_star_a: f64,
    gamma_star_b: f64,
    chi: f64,
    kind: EntanglerKind,
) -> Result<DensityMatrix, GameError> {
    ChannelGame::new(chi, kind)?.final_state(gamma_star_a, gamma_star_b)
}

pub fn payoff_bruteforce(
    gamma_star_a: f64,
    gamma_star_b: f64,
    weights: &PayoffWeights,
    chi: f64,
    kind: EntanglerKind,
) -> Result<f64, GameError> {
    check_gamma("gamma_star_a", gamma_star_a)?;
    check_gamma("gamma_star_b", gamma_star_b)?;
    Ok(ChannelGame::new(chi, kind)?.payoff(gamma_star_a, gamma_star_b, weights))
}

/// The four population coefficients multiplying `w00, w01, w10, w11` in the
/// published closed form for the Hadamard-rotated entangler, transcribed as
/// printed. The `w01` coefficient carries χ-dependent terms of the wrong sign,
/// so the four coefficients do not sum to one when `γ*_A ≠ γ*_B` and
/// `χ > 0`; see [`closed_form_coefficients_corrected`].
pub fn closed_form_coefficients(gamma_star_a: f64, gamma_star_b: f64, chi: f64) -> [f64; 4] {
    let a = (1.0 - gamma_star_a).sqrt();
    let b = (1.0 - gamma_star_b).sqrt();
    let c2 = (chi / 2.0).cos().powi(2);
    let c4 = c2 * c2;
    let chi_terms = 8.0 * (a - b) * c2 + 8.0 * (b - a) * c4;
    [
        (a + b + 1.0 + a * b) / 4.0,
        (a - b + 1.0 - a * b + chi_terms) / 4.0,
        (b - a + 1.0 - a * b + chi_terms) / 4.0,
        (a * b - b - a + 1.0) / 4.0,
    ]
}

/// Closed form with the `w01` χ-terms negated, which agrees with the trace
/// evaluation: the off-diagonal populations are `(1 - ab ± (a - b) cos 2χ)/4`.
pub fn closed_form_coefficients_corrected(gamma_star_a: f64, gamma_star_b: f64, chi: f64) -> [f64; 4] {
    let a = (1.0 - gamma_star_a).sqrt();
    let b = (1.0 - gamma_star_b).sqrt();
    let c2 = (chi / 2.0).cos().powi(2);
    let c4 = c2 * c2;
    let chi_terms = 8.0 * (a - b) * c2 + 8.0 * (b - a) * c4;
    [
        (a + b + 1.0 + a * b) / 4.0,
        (a - b + 1.0 - a * b - chi_terms) / 4.0,
        (b - a + 1.0 - a * b + chi_terms) / 4.0,
        (a * b - b - a + 1.0) / 4.0,
    ]
}

fn dot4(w: &PayoffWeights, c: [f64; 4]) -> f64 {
    w.flat().iter().zip(c).map(|(w, c)| w * c).sum()
}

/// Published closed-form payoff, as printed.
pub fn payoff_closed_form(gamma_star_a: f64, gamma_star_b: f64, weights: &PayoffWeights, chi: f64) -> f64 {
    dot4(weights, closed_form_coefficients(gamma_star_a, gamma_star_b, chi))
}

/// Closed-form payoff with the sign correction applied.
pub fn payoff_closed_form_corrected(
    gamma_star_a: f64,
    gamma_star_b: f64,
    weights: &PayoffWeights,
    chi: f64,
) -> f64 {
    dot4(weights, closed_form_coefficients_corrected(gamma_star_a, gamma_star_b, chi))
}

/// Which evaluator fills a payoff surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PayoffModel {
    /// Explicit `tr(P ρ_fin)`; authoritative.
    Trace,
    /// Published closed form, as printed (Hadamard-rotated entangler only).
    ClosedForm,
    /// Closed form with the sign correction (Hadamard-rotated entangler only).
    CorrectedClosedForm,
}

impl PayoffModel {
    pub fn evaluate(
        &self,
        game: &ChannelGame,
        gamma_star_a: f64,
        gamma_star_b: f64,
        weights: &PayoffWeights,
    ) -> f64 {
        match self {
            Self::Trace => game.payoff(gamma_star_a, gamma_star_b, weights),
            Self::ClosedForm => payoff_closed_form(gamma_star_a, gamma_star_b, weights, game.chi()),
            Self::CorrectedClosedForm => {
                payoff_closed_form_corrected(gamma_star_a, gamma_star_b, weights, game.chi())
            }
        }
    }
}

/// `{U(0, 0), U(π, 0)}`.
pub fn classical_strategies() -> [ComplexMatrix; 2] {
    [
        strategy_unitary(StrategyAngles::IDENTITY),
        strategy_unitary(StrategyAngles::DEFECT),
    ]
}

/// `-Σ λ log2 λ`, with `0 log 0 = 0`. Eigenvalues below zero from rounding
/// are dropped.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64, GameError> {
    let eig = eig_hermitian(rho)?;
    Ok(eig
        .values
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.log2())
        .sum::<f64>()
        .max(0.0))
}

/// Entanglement-entropy weights for unitary strategies:
/// `w_ik = S(tr_other(φ_ik))`, `φ_ik = (U_i ⊗ V_k) ρ' (U_i ⊗ V_k)†`.
/// `player` selects which factor is kept.
pub fn von_neumann_weights(
    chi: f64,
    kind: EntanglerKind,
    strategies_a: &[ComplexMatrix; 2],
    strategies_b: &[ComplexMatrix; 2],
    player: Subsystem,
) -> Result<PayoffWeights, GameError> {
    for u in strategies_a.iter().chain(strategies_b) {
        if u.rows() != 2 || u.cols() != 2 || u.unitarity_defect() > UNITARY_TOL {
            return Err(GameError::InvalidArgument(
                "von Neumann weights require 2x2 unitary strategies".into(),
            ));
        }
    }
    let game = ChannelGame::new(chi, kind)?;
    let mut w = [[0.0; 2]; 2];
    for (i, ua) in strategies_a.iter().enumerate() {
        for (k, ub) in strategies_b.iter().enumerate() {
            let phi = ua.kron(ub).conjugate(game.entangled_input())?;
            w[i][k] = von_neumann_entropy(&partial_trace(&phi, player)?)?;
        }
    }
    PayoffWeights::new(w)
}

pub fn von_neumann_weights_from_angles(
    chi: f64,
    kind: EntanglerKind,
    angles_a: [StrategyAngles; 2],
    angles_b: [StrategyAngles; 2],
    player: Subsystem,
) -> Result<PayoffWeights, GameError> {
    let sa = angles_a.map(strategy_unitary);
    let sb = angles_b.map(strategy_unitary);
    von_neumann_weights(chi, kind, &sa, &sb, player)
}
