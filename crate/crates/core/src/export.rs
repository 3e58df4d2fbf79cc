//! Deterministic text renderings of surfaces and weights.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::equilibrium::Analysis;
use crate::game::{EntanglerKind, PayoffWeights};

pub const SURFACE_CSV_HEADER: &str = "gamma_star_a,gamma_star_b,payoff,residual_a,residual_b,is_nash";

/// 17 significant digits in scientific notation; `-0` prints as `0`.
pub fn fmt_float(x: f64) -> String {
    format!("{:.16e}", x + 0.0)
}

/// Surface CSV, one row per node ordered by `(γ*_A, γ*_B)`.
pub fn surface_csv(analysis: &Analysis) -> String {
    let surface = &analysis.surface;
    let n = surface.size();
    let axis = surface.axis();
    let mut out = String::with_capacity(n * n * 120);
    out.push_str(SURFACE_CSV_HEADER);
    out.push('\n');
    for i in 0..n {
        for j in 0..n {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                fmt_float(axis[i]),
                fmt_float(axis[j]),
                fmt_float(surface.value(i, j)),
                fmt_float(analysis.residuals.r_a(i, j)),
                fmt_float(analysis.residuals.r_b(i, j)),
                analysis.is_nash(i, j)
            );
        }
    }
    out
}

/// JSON shape of exported payoff weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightsExport {
    #[serde(rename = "gamma_A")]
    pub gamma_a: f64,
    #[serde(rename = "gamma_B")]
    pub gamma_b: f64,
    pub chi: f64,
    pub entangler: EntanglerKind,
    pub w: [[f64; 2]; 2],
}

impl WeightsExport {
    pub fn new(base: (f64, f64), chi: f64, entangler: EntanglerKind, weights: &PayoffWeights) -> Self {
        Self {
            gamma_a: base.0,
            gamma_b: base.1,
            chi,
            entangler,
            w: weights.w,
        }
    }
}
