//! Truncated two-mode bright squeezed vacuum with a distinguishability angle.
//!
//! The photon-pair number `n` is the truncation index: a source of order
//! `n_max` keeps the sectors `n = 0..=n_max`, each holding exactly `2n`
//! photons. The pair distribution is thermal, `p_n = tanh^{2n}Γ / cosh²Γ`,
//! so the discarded weight is the geometric tail `tanh^{2(n_max+1)}Γ`.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{ln_cosh, ln_factorial};

/// Hard cap on the truncation order returned by [`choose_truncation`].
pub const DEFAULT_TRUNCATION_CAP: u32 = 200;

/// Default bound on the discarded pair weight.
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-12;

/// Tolerance when snapping an angle onto the endpoints of `[0, π/2]`.
const ALPHA_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourceParams {
    /// Parametric gain Γ.
    pub gamma: f64,
    /// Rotation of input mode 2 into its orthogonal partner, radians.
    pub alpha: f64,
    /// Largest pair number kept.
    pub n_max: u32,
}

impl SourceParams {
    pub fn new(gamma: f64, alpha: f64, n_max: u32) -> Result<Self> {
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "gamma must be >= 0, got {gamma}"
            )));
        }
        if !(alpha.is_finite() && (-ALPHA_SLACK..=FRAC_PI_2 + ALPHA_SLACK).contains(&alpha)) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in [0, pi/2], got {alpha}"
            )));
        }
        Ok(Self {
            gamma,
            alpha: alpha.clamp(0.0, FRAC_PI_2),
            n_max,
        })
    }

    pub fn validate(&self) -> Result<()> {
        Self::new(self.gamma, self.alpha, self.n_max).map(|_| ())
    }

    /// `(cos α, sin α)` with exact zeros at the endpoints, so that the
    /// fully (in)distinguishable outputs stay sparse.
    pub fn mixing(&self) -> (f64, f64) {
        if self.alpha.abs() <= ALPHA_SLACK {
            (1.0, 0.0)
        } else if (self.alpha - FRAC_PI_2).abs() <= ALPHA_SLACK {
            (0.0, 1.0)
        } else {
            (self.alpha.cos(), self.alpha.sin())
        }
    }
}

/// `A_n = tanhⁿΓ / (n! 2ⁿ coshΓ)`, the prefactor of the `n`-pair sector
/// after the beam splitter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairAmplitude {
    pub n: u32,
    pub a_n: f64,
    /// `ln A_n`; finite even where `a_n` underflows.
    pub ln_a_n: f64,
}

pub fn pair_amplitudes(params: &SourceParams) -> Vec<PairAmplitude> {
    let t = params.gamma.tanh();
    let ln_t = t.ln();
    let ln_cosh = ln_cosh(params.gamma);
    let mut a_n = (-ln_cosh).exp();
    let mut out = Vec::with_capacity(params.n_max as usize + 1);
    for n in 0..=params.n_max {
        let ln_a_n = if n == 0 {
            -ln_cosh
        } else {
            n as f64 * (ln_t - std::f64::consts::LN_2) - ln_factorial(n as u64) - ln_cosh
        };
        out.push(PairAmplitude { n, a_n, ln_a_n });
        a_n *= t / (2.0 * (n + 1) as f64);
    }
    out
}

/// Probability of exactly `n` pairs, `tanh^{2n}Γ / cosh²Γ`.
pub fn pair_probability(gamma: f64, n: u32) -> f64 {
    if n == 0 {
        return (-2.0 * ln_cosh(gamma)).exp();
    }
    let t2 = gamma.tanh().powi(2);
    (n as f64 * t2.ln() - 2.0 * ln_cosh(gamma)).exp()
}

/// Weight discarded by keeping `n <= n_max`: `Σ_{n>n_max} p_n = tanh^{2(n_max+1)}Γ`.
pub fn tail_weight(gamma: f64, n_max: u32) -> f64 {
    gamma.tanh().powi(2 * (n_max as i32 + 1))
}

/// Smallest `n_max` whose tail weight is below `tail_tolerance`, capped at
/// [`DEFAULT_TRUNCATION_CAP`].
pub fn choose_truncation(gamma: f64, tail_tolerance: f64) -> Result<u32> {
    choose_truncation_with_cap(gamma, tail_tolerance, DEFAULT_TRUNCATION_CAP)
}

pub fn choose_truncation_with_cap(gamma: f64, tail_tolerance: f64, cap: u32) -> Result<u32> {
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "gamma must be >= 0, got {gamma}"
        )));
    }
    if !(tail_tolerance > 0.0 && tail_tolerance < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "tail tolerance must lie in (0, 1), got {tail_tolerance}"
        )));
    }
    (0..=cap)
        .find(|&n| tail_weight(gamma, n) < tail_tolerance)
        .ok_or(Error::Capacity {
            what: "truncation order",
            required: cap as usize + 1,
            cap: cap as usize,
        })
}
