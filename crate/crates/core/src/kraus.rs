//! Kraus operators of the second-order system/bath coupling
//! `H = xi (a†a b† + a†a b)` with `hbar = 1`.
//!
//! The principal system has two levels. Because `a†a` commutes with `H`, the
//! evolution of `|n>|0_bath>` is `exp(-i n t xi (b + b†)) |0_bath>`, and the
//! Kraus operator for bath outcome `k` is diagonal with entries
//! `<k| exp(-i n t xi (b + b†)) |0>` for `n = 0, 1`.
//!
//! The exponential is evaluated as a Taylor series in the truncated bath
//! space. Large arguments are split into equal time slices so that no single
//! series suffers catastrophic cancellation; each slice runs the same series.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{vec_norm, ComplexMatrix, LinalgError, C64, ZERO};

/// Completeness tolerance for `Σ S_k† S_k = I`.
pub const COMPLETENESS_TOL: f64 = 1e-10;
/// Default stop threshold on the norm of the next series term.
pub const DEFAULT_TERM_TOL: f64 = 1e-14;
/// Hard cap on series terms per slice.
pub const MAX_SERIES_TERMS: usize = 200;
/// Upper bound on `|angle| · ||b + b†||_F` inside one slice.
const SLICE_ARGUMENT: f64 = 1.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KrausError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("series did not converge within {terms} terms (last term norm {last_norm:e})")]
    Series { terms: usize, last_norm: f64 },
    #[error("channel is not trace preserving: max |Σ S†S - I| = {0:e}")]
    NotTracePreserving(f64),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Coupling constant and interaction time; only their product enters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianParams {
    pub xi: f64,
    pub t: f64,
}

impl HamiltonianParams {
    pub fn new(xi: f64, t: f64) -> Result<Self, KrausError> {
        if !xi.is_finite() || !t.is_finite() {
            return Err(KrausError::InvalidArgument(format!(
                "xi and t must be finite (xi = {xi}, t = {t})"
            )));
        }
        if t < 0.0 {
            return Err(KrausError::InvalidArgument(format!("t must be >= 0, got {t}")));
        }
        Ok(Self { xi, t })
    }

    /// The dimensionless angle `t·xi`.
    pub fn angle(&self) -> f64 {
        self.t * self.xi
    }
}

/// `gamma = sin²(t xi)`: the phase-damping strength produced by the coupling.
pub fn gamma_of(params: &HamiltonianParams) -> f64 {
    params.angle().sin().powi(2)
}

/// Truncated bath oscillator with `n_levels` Fock states.
#[derive(Debug, Clone, PartialEq)]
pub struct FockSpace {
    n_levels: usize,
    b: ComplexMatrix,
    b_dag: ComplexMatrix,
}

impl FockSpace {
    pub fn n_levels(&self) -> usize {
        self.n_levels
    }

    /// Annihilation operator.
    pub fn b(&self) -> &ComplexMatrix {
        &self.b
    }

    /// Creation operator.
    pub fn b_dag(&self) -> &ComplexMatrix {
        &self.b_dag
    }

    /// `b + b†` (real symmetric tridiagonal).
    pub fn quadrature(&self) -> ComplexMatrix {
        &self.b + &self.b_dag
    }

    /// Applies `b + b†` to a vector without forming the matrix.
    fn apply_quadrature(&self, v: &[C64]) -> Vec<C64> {
        let n = self.n_levels;
        (0..n)
            .map(|j| {
                let mut acc = ZERO;
                if j > 0 {
                    acc += v[j - 1] * (j as f64).sqrt();
                }
                if j + 1 < n {
                    acc += v[j + 1] * ((j + 1) as f64).sqrt();
                }
                acc
            })
            .collect()
    }

    fn quadrature_frobenius(&self) -> f64 {
        // ||b + b†||_F² = 2 Σ_{j=1}^{N-1} j
        let n = self.n_levels as f64;
        (n * (n - 1.0)).sqrt()
    }
}

pub fn make_fock_space(n_levels: usize) -> Result<FockSpace, KrausError> {
    if n_levels < 2 {
        return Err(KrausError::InvalidArgument(format!(
            "bath needs n_levels >= 2, got {n_levels}"
        )));
    }
    let mut b = ComplexMatrix::zeros(n_levels, n_levels);
    for j in 1..n_levels {
        b[(j - 1, j)] = C64::new((j as f64).sqrt(), 0.0);
    }
    let b_dag = b.dagger();
    Ok(FockSpace { n_levels, b, b_dag })
}

/// Coefficients `g(m, j)` of `(b + b†)^m |0> = Σ_j g(m, j) |j>`.
#[derive(Debug, Clone, PartialEq)]
pub struct GTable {
    n_levels: usize,
    rows: Vec<Vec<f64>>,
}

impl GTable {
    pub fn max_m(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn n_levels(&self) -> usize {
        self.n_levels
    }

    pub fn get(&self, m: usize, j: usize) -> f64 {
        self.rows[m][j]
    }

    pub fn row(&self, m: usize) -> &[f64] {
        &self.rows[m]
    }
}

/// Builds `g(m, ·)` for `m = 0..=max_m` by applying `b + b†` once per step.
pub fn g_table(max_m: usize, space: &FockSpace) -> GTable {
    let n = space.n_levels;
    let mut rows = Vec::with_capacity(max_m + 1);
    let mut current = vec![0.0; n];
    current[0] = 1.0;
    rows.push(current.clone());
    for _ in 0..max_m {
        let next: Vec<f64> = (0..n)
            .map(|j| {
                let lower = if j > 0 { (j as f64).sqrt() * current[j - 1] } else { 0.0 };
                let upper = if j + 1 < n { ((j + 1) as f64).sqrt() * current[j + 1] } else { 0.0 };
                lower + upper
            })
            .collect();
        rows.push(next.clone());
        current = next;
    }
    GTable { n_levels: n, rows }
}

/// Series stop rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesConfig {
    /// Stop once the next term's Euclidean norm drops below this.
    pub term_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self {
            term_tol: DEFAULT_TERM_TOL,
            max_terms: MAX_SERIES_TERMS,
        }
    }
}

impl SeriesConfig {
    pub fn with_term_tol(term_tol: f64) -> Self {
        Self {
            term_tol,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<(), KrausError> {
        if !(self.term_tol > 0.0) || !self.term_tol.is_finite() {
            return Err(KrausError::InvalidArgument(format!(
                "term_tol must be a positive finite number, got {}",
                self.term_tol
            )));
        }
        Ok(())
    }
}

/// `Σ_m (-i angle)^m / m! (b + b†)^m v`, truncated by the stop rule.
fn series_step(
    space: &FockSpace,
    v: &[C64],
    angle: f64,
    cfg: &SeriesConfig,
) -> Result<Vec<C64>, KrausError> {
    let mut sum = v.to_vec();
    let mut term = v.to_vec();
    let coeff = C64::new(0.0, -angle);
    for m in 1..cfg.max_terms {
        let next = space.apply_quadrature(&term);
        let factor = coeff / m as f64;
        term = next.into_iter().map(|z| z * factor).collect();
        let norm = vec_norm(&term);
        if !norm.is_finite() {
            return Err(KrausError::Series {
                terms: m,
                last_norm: norm,
            });
        }
        if norm < cfg.term_tol {
            return Ok(sum);
        }
        for (s, t) in sum.iter_mut().zip(&term) {
            *s += t;
        }
    }
    Err(KrausError::Series {
        terms: cfg.max_terms,
        last_norm: vec_norm(&term),
    })
}

/// Number of equal slices used for a given total angle.
pub fn slice_count(angle: f64, space: &FockSpace) -> usize {
    let arg = angle.abs() * space.quadrature_frobenius();
    ((arg / SLICE_ARGUMENT).ceil() as usize).max(1)
}

/// Bath amplitudes `<j| exp(-i n t xi (b + b†)) |0>` for system level `n`.
pub fn evolve_bath(
    n: usize,
    params: &HamiltonianParams,
    space: &FockSpace,
    cfg: &SeriesConfig,
) -> Result<Vec<C64>, KrausError> {
    if n > 1 {
        return Err(KrausError::InvalidArgument(format!(
            "principal system has two levels, got n = {n}"
        )));
    }
    cfg.validate()?;
    let angle = n as f64 * params.angle();
    let slices = slice_count(angle, space);
    let step = angle / slices as f64;
    let mut v = ComplexMatrix::basis(space.n_levels, 0);
    for _ in 0..slices {
        v = series_step(space, &v, step, cfg)?;
    }
    Ok(v)
}

/// Operator-sum representation on the two-level principal system.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumChannel {
    label: String,
    kraus: Vec<ComplexMatrix>,
}

impl QuantumChannel {
    /// Validates shapes and completeness `Σ S† S = I` within [`COMPLETENESS_TOL`].
    pub fn new(label: impl Into<String>, kraus: Vec<ComplexMatrix>) -> Result<Self, KrausError> {
        if kraus.is_empty() {
            return Err(KrausError::InvalidArgument("channel needs at least one Kraus operator".into()));
        }
        if let Some(bad) = kraus.iter().find(|k| k.rows() != 2 || k.cols() != 2) {
            return Err(KrausError::InvalidArgument(format!(
                "Kraus operators must be 2x2, got {}x{}",
                bad.rows(),
                bad.cols()
            )));
        }
        let channel = Self {
            label: label.into(),
            kraus,
        };
        let defect = channel.completeness_defect();
        if !(defect <= COMPLETENESS_TOL) {
            return Err(KrausError::NotTracePreserving(defect));
        }
        Ok(channel)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// `max |Σ_k S_k† S_k - I|`.
    pub fn completeness_defect(&self) -> f64 {
        let sum = self
            .kraus
            .iter()
            .fold(ComplexMatrix::zeros(2, 2), |acc, k| &acc + &(&k.dagger() * k));
        sum.max_abs_diff(&ComplexMatrix::identity(2))
    }

    /// `ρ ↦ Σ_k S_k ρ S_k†`.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix, KrausError> {
        let mut out = ComplexMatrix::zeros(rho.rows(), rho.cols());
        for k in &self.kraus {
            out = &out + &k.conjugate(rho)?;
        }
        Ok(out)
    }

    pub fn to_export(&self) -> ChannelExport {
        ChannelExport {
            label: self.label.clone(),
            kraus: self
                .kraus
                .iter()
                .map(|k| k.as_slice().iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }
}

/// JSON shape of an exported channel: each operator is a row-major list of
/// `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelExport {
    pub label: String,
    pub kraus: Vec<Vec<[f64; 2]>>,
}

impl ChannelExport {
    pub fn into_channel(self) -> Result<QuantumChannel, KrausError> {
        let ops = self
            .kraus
            .into_iter()
            .map(|flat| {
                let data = flat.into_iter().map(|[re, im]| C64::new(re, im)).collect();
                ComplexMatrix::from_vec(2, 2, data)
            })
            .collect::<Result<Vec<_>, _>>()?;
        QuantumChannel::new(self.label, ops)
    }
}

/// One Kraus operator per bath level `k`: `S_k = Σ_n <k|U_n|0> |n><n|`.
pub fn derive_kraus(
    params: &HamiltonianParams,
    space: &FockSpace,
    cfg: &SeriesConfig,
) -> Result<QuantumChannel, KrausError> {
    let ground = evolve_bath(0, params, space, cfg)?;
    let excited = evolve_bath(1, params, space, cfg)?;
    let kraus = (0..space.n_levels)
        .map(|k| ComplexMatrix::diag(&[ground[k], excited[k]]))
        .collect();
    QuantumChannel::new(
        format!(
            "coupling(t={}, xi={}, levels={})",
            params.t, params.xi, space.n_levels
        ),
        kraus,
    )
}

/// Phase-damping pair `S0 = diag(1, √(1-γ))`, `S1 = diag(0, √γ)`.
pub fn qpdc_kraus(gamma: f64) -> Result<QuantumChannel, KrausError> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(KrausError::InvalidArgument(format!(
            "gamma must lie in [0, 1], got {gamma}"
        )));
    }
    QuantumChannel::new(
        format!("phase-damping(gamma={gamma})"),
        qpdc_pair(gamma).to_vec(),
    )
}

/// The raw phase-damping matrices without channel validation. `gamma` is
/// assumed to be in `[0, 1]`.
pub(crate) fn qpdc_pair(gamma: f64) -> [ComplexMatrix; 2] {
    [
        ComplexMatrix::real_diag(&[1.0, (1.0 - gamma).sqrt()]),
        ComplexMatrix::real_diag(&[0.0, gamma.sqrt()]),
    ]
}

/// `<0| exp(-i angle (b + b†)) |0>` is the coherence factor of the derived
/// channel: `ρ_01 ↦ conj(c) ρ_01`.
pub fn coherence_factor(channel: &QuantumChannel) -> C64 {
    channel
        .kraus()
        .iter()
        .map(|k| k[(0, 0)] * k[(1, 1)].conj())
        .sum()
}
