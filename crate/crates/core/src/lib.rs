//! Open-system quantum games built from a system/bath coupling.
//!
//! * [`linalg`]: small dense complex matrices, partial traces, Hermitian eigensolver.
//! * [`kraus`]: Kraus operators of the coupling via a truncated Fock-space series,
//!   and the closed-form phase-damping pair.
//! * [`game`]: entanglers, joint-information payoff weights, channel-game evolution.
//! * [`equilibrium`]: payoff surfaces, best-response residuals, Nash and dominant points.
//! * [`figures`]: the reference equilibrium scenarios.
//! * [`export`]: CSV/JSON renderings.

pub mod equilibrium;
pub mod export;
pub mod figures;
pub mod game;
pub mod kraus;
pub mod linalg;

pub use equilibrium::{analyze, Analysis, EquilibriumError, EquilibriumReport, NashPoint, SurfaceGrid};
pub use game::{ChannelGame, EntanglerKind, GameConfig, GameError, PayoffMode, PayoffModel, PayoffWeights};
pub use kraus::{HamiltonianParams, KrausError, QuantumChannel};
pub use linalg::{ComplexMatrix, DensityMatrix, C64};
