//! Intensity (`G_Q`) and rate (`C_Q`) two-detector correlators, and the
//! HOM visibilities built from them.
//!
//! `G_Q = ⟨n_a n_b⟩ / ⟨(n_a + n_b)²⟩`. The denominator depends only on the
//! total photon-number distribution, which is the same for every α, so it
//! drops out of the visibility.
//!
//! `C_Q = ⟨Π_NV n_a n_b / (n_a + n_b)² Π_NV⟩`, where the vacuum projector
//! amounts to assigning the value 0 to the zero-photon outcome.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::beamsplitter::expand_output;
use crate::error::{Error, Result};
use crate::fock::{Occupation4, SparseState};
use crate::loss::{visibility_eta, DetectionModel};
use crate::source::{choose_truncation, SourceParams, DEFAULT_TAIL_TOLERANCE};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationPair {
    pub g_q: f64,
    pub c_q: f64,
    pub g_numerator: f64,
    pub g_denominator: f64,
}

/// Sweep point with correlators at both endpoints of α.
///
/// On the lossless path `g_at_*` hold the ratio `G_Q`; on the lossy path
/// they hold the numerator `⟨n_a n_b⟩` of the detected counts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VisibilityRecord {
    pub gamma: f64,
    pub eta: f64,
    pub n_max: u32,
    pub g_at_0: f64,
    pub g_at_pi2: f64,
    pub c_at_0: f64,
    pub c_at_pi2: f64,
    pub v_g: f64,
    pub v_c: f64,
    pub delta_v: f64,
}

impl VisibilityRecord {
    pub(crate) fn from_endpoints(
        gamma: f64,
        eta: f64,
        n_max: u32,
        g: (f64, f64),
        c: (f64, f64),
    ) -> Result<Self> {
        let v_g = visibility(g.0, g.1)?;
        let v_c = visibility(c.0, c.1)?;
        Ok(Self {
            gamma,
            eta,
            n_max,
            g_at_0: g.0,
            g_at_pi2: g.1,
            c_at_0: c.0,
            c_at_pi2: c.1,
            v_g,
            v_c,
            delta_v: v_c - v_g,
        })
    }
}

/// `n_a n_b / (n_a + n_b)²` with the vacuum mapped to zero.
#[inline]
pub fn rate_product(n_a: u32, n_b: u32) -> f64 {
    let total = n_a + n_b;
    if total == 0 {
        0.0
    } else {
        (n_a as f64 * n_b as f64) / (total as f64 * total as f64)
    }
}

/// Returns `(numerator, denominator, value)` of `G_Q`.
pub fn g_q(state: &SparseState) -> Result<(f64, f64, f64)> {
    let num = state.expectation(|o| o.n_a() as f64 * o.n_b() as f64);
    let den = state.expectation(|o| (o.total() as f64).powi(2));
    if den == 0.0 {
        return Err(Error::UndefinedRatio { denominator: den });
    }
    Ok((num, den, num / den))
}

pub fn c_q(state: &SparseState) -> f64 {
    state.expectation(|o: &Occupation4| rate_product(o.n_a(), o.n_b()))
}

pub fn correlations(state: &SparseState) -> Result<CorrelationPair> {
    let (g_numerator, g_denominator, g) = g_q(state)?;
    Ok(CorrelationPair {
        g_q: g,
        c_q: c_q(state),
        g_numerator,
        g_denominator,
    })
}

/// `(f(π/2) − f(0)) / f(π/2)`.
pub fn visibility(f_at_0: f64, f_at_pi2: f64) -> Result<f64> {
    if !(f_at_pi2 > 0.0) {
        return Err(Error::UndefinedVisibility {
            reference: f_at_pi2,
        });
    }
    Ok((f_at_pi2 - f_at_0) / f_at_pi2)
}

/// How the pair-number cutoff is picked for each sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Truncation {
    Fixed(u32),
    Auto { tail: f64 },
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation::Auto {
            tail: DEFAULT_TAIL_TOLERANCE,
        }
    }
}

impl Truncation {
    pub fn resolve(&self, gamma: f64) -> Result<u32> {
        match *self {
            Truncation::Fixed(n) => Ok(n),
            Truncation::Auto { tail } => choose_truncation(gamma, tail),
        }
    }
}

/// Lossless correlators at α = 0 and α = π/2.
pub fn endpoint_correlations(gamma: f64, n_max: u32) -> Result<(CorrelationPair, CorrelationPair)> {
    let s0 = expand_output(&SourceParams::new(gamma, 0.0, n_max)?)?;
    let s1 = expand_output(&SourceParams::new(gamma, FRAC_PI_2, n_max)?)?;
    Ok((correlations(&s0)?, correlations(&s1)?))
}

fn lossless_record(gamma: f64, n_max: u32) -> Result<VisibilityRecord> {
    // a pure-vacuum output has G_Q = 0/0; report it as an undefined dip
    let (at0, at_pi2) = endpoint_correlations(gamma, n_max).map_err(|e| match e {
        Error::UndefinedRatio { denominator } => Error::UndefinedVisibility {
            reference: denominator,
        },
        other => other,
    })?;
    VisibilityRecord::from_endpoints(
        gamma,
        1.0,
        n_max,
        (at0.g_q, at_pi2.g_q),
        (at0.c_q, at_pi2.c_q),
    )
}

/// One record per Γ, in input order. Lossless evaluation when `η = 1`,
/// the detection-loss path otherwise. Failures carry the offending Γ.
pub fn sweep(
    gammas: &[f64],
    detection: DetectionModel,
    truncation: Truncation,
) -> Vec<Result<VisibilityRecord>> {
    gammas
        .par_iter()
        .map(|&gamma| {
            let point = || -> Result<VisibilityRecord> {
                let n_max = truncation.resolve(gamma)?;
                if detection.eta() == 1.0 {
                    lossless_record(gamma, n_max)
                } else {
                    visibility_eta(gamma, detection, n_max)
                }
            };
            point().map_err(|e| Error::AtGamma {
                gamma,
                source: Box::new(e),
            })
        })
        .collect()
}
