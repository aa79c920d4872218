//! Imperfect detection: every photon in every mode is registered
//! independently with probability η.
//!
//! A pre-loss count `y` becomes a detected count `x` with probability
//! `C(y,x) (1−η)^{y−x} ηˣ`. These squared loss amplitudes are evaluated
//! directly as binomial probabilities.
//!
//! The lossy intensity correlator is the bare numerator `⟨n_a n_b⟩` over
//! detected counts. The would-be denominator `⟨(n_a+n_b)²⟩` depends only on
//! the total photon distribution, which is α-independent before and after
//! loss, so it cancels in the visibility.
//!
//! Both observables depend only on the detected spatial totals. Since a sum
//! of independent Bernoulli trials over `a` and `a⊥` is itself binomial in
//! `n_a`, the primary path marginalizes to `(n_a, n_b)` before applying loss.
//! The full four-mode convolution is kept as [`lossy_outcome_distribution`].

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::beamsplitter::expand_output;
use crate::correlations::{rate_product, VisibilityRecord};
use crate::error::{Error, Result};
use crate::fock::{Occupation4, SparseState};
use crate::numeric::binomial_pmf;
use crate::source::SourceParams;

/// Detector model. Detectors are always photon-number resolving.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionModel {
    eta: f64,
}

impl DetectionModel {
    pub fn new(eta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "eta must lie in (0, 1], got {eta}"
            )));
        }
        Ok(Self { eta })
    }

    pub const fn perfect() -> Self {
        Self { eta: 1.0 }
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn number_resolving(&self) -> bool {
        true
    }
}

/// Table of `P(x detected | y present)` for `y = 0..=max_count`.
#[derive(Debug, Clone)]
pub struct LossKernel {
    rows: Vec<Vec<f64>>,
}

impl LossKernel {
    pub fn new(model: DetectionModel, max_count: u32) -> Self {
        let rows = (0..=max_count as u64)
            .map(|y| (0..=y).map(|x| binomial_pmf(y, x, model.eta)).collect())
            .collect();
        Self { rows }
    }

    pub fn max_count(&self) -> u32 {
        (self.rows.len() - 1) as u32
    }

    /// Probabilities of detecting `0..=y` photons out of `y`.
    pub fn row(&self, y: u32) -> &[f64] {
        &self.rows[y as usize]
    }
}

fn kernel_for(state: &SparseState, model: DetectionModel) -> LossKernel {
    let max = state
        .terms()
        .iter()
        .map(|(o, _)| o.total())
        .max()
        .unwrap_or(0);
    LossKernel::new(model, max)
}

/// Detected-outcome distribution over all four modes.
pub fn lossy_outcome_distribution(
    state: &SparseState,
    model: DetectionModel,
) -> BTreeMap<Occupation4, f64> {
    let kernel = kernel_for(state, model);
    let mut out = BTreeMap::new();
    for (occ, p) in state.probabilities() {
        let [ya, yap, yb, ybp] = occ.counts();
        for (xa, pa) in kernel.row(ya).iter().enumerate() {
            for (xap, pap) in kernel.row(yap).iter().enumerate() {
                let w2 = p * pa * pap;
                for (xb, pb) in kernel.row(yb).iter().enumerate() {
                    for (xbp, pbp) in kernel.row(ybp).iter().enumerate() {
                        let w = w2 * pb * pbp;
                        if w != 0.0 {
                            let det =
                                Occupation4::new(xa as u32, xap as u32, xb as u32, xbp as u32);
                            *out.entry(det).or_insert(0.0) += w;
                        }
                    }
                }
            }
        }
    }
    out
}

/// `(⟨n_a n_b⟩, ⟨rate product⟩)` over a four-mode detected distribution.
pub fn correlators_from_distribution(dist: &BTreeMap<Occupation4, f64>) -> (f64, f64) {
    dist.iter().fold((0.0, 0.0), |(g, c), (o, p)| {
        (
            g + p * o.n_a() as f64 * o.n_b() as f64,
            c + p * rate_product(o.n_a(), o.n_b()),
        )
    })
}

/// Detected distribution over the spatial totals `(n_a, n_b)`.
pub fn lossy_spatial_distribution(
    state: &SparseState,
    model: DetectionModel,
) -> BTreeMap<(u32, u32), f64> {
    let mut pre: BTreeMap<(u32, u32), f64> = BTreeMap::new();
    for (o, p) in state.probabilities() {
        *pre.entry((o.n_a(), o.n_b())).or_insert(0.0) += p;
    }
    let kernel = kernel_for(state, model);
    let mut out = BTreeMap::new();
    for ((ya, yb), p) in pre {
        for (xa, pa) in kernel.row(ya).iter().enumerate() {
            for (xb, pb) in kernel.row(yb).iter().enumerate() {
                let w = p * pa * pb;
                if w != 0.0 {
                    *out.entry((xa as u32, xb as u32)).or_insert(0.0) += w;
                }
            }
        }
    }
    out
}

fn spatial_expectation<F: Fn(u32, u32) -> f64>(
    state: &SparseState,
    model: DetectionModel,
    f: F,
) -> f64 {
    lossy_spatial_distribution(state, model)
        .into_iter()
        .map(|((xa, xb), p)| p * f(xa, xb))
        .sum()
}

/// `⟨n_a n_b⟩` over detected counts.
pub fn g_q_eta(state: &SparseState, model: DetectionModel) -> f64 {
    spatial_expectation(state, model, |a, b| a as f64 * b as f64)
}

/// `⟨n_a n_b / (n_a + n_b)²⟩` over detected counts, zero on no detection.
pub fn c_q_eta(state: &SparseState, model: DetectionModel) -> f64 {
    spatial_expectation(state, model, rate_product)
}

/// `⟨(n_a + n_b)²⟩` over detected counts.
pub fn detected_total_second_moment(state: &SparseState, model: DetectionModel) -> f64 {
    spatial_expectation(state, model, |a, b| ((a + b) as f64).powi(2))
}

/// Visibilities from the lossy correlators at α = 0 and α = π/2.
pub fn visibility_eta(gamma: f64, model: DetectionModel, n_max: u32) -> Result<VisibilityRecord> {
    let s0 = expand_output(&SourceParams::new(gamma, 0.0, n_max)?)?;
    let s1 = expand_output(&SourceParams::new(gamma, FRAC_PI_2, n_max)?)?;
    VisibilityRecord::from_endpoints(
        gamma,
        model.eta,
        n_max,
        (g_q_eta(&s0, model), g_q_eta(&s1, model)),
        (c_q_eta(&s0, model), c_q_eta(&s1, model)),
    )
}

/// Lossy correlators written directly as index sums over the analytically
/// known endpoint states, without building a [`SparseState`].
///
/// * α = 0: `|2k, 0, 2(n−k), 0⟩` with amplitude
///   `Z_nk = A_n (−1)ᵏ C(n,k) √((2k)! (2(n−k))!)`.
/// * α = π/2: `|k, l, n−k, n−l⟩` with amplitude
///   `Z_nkl = A_n (−1)ˡ C(n,k) C(n,l) √(k! l! (n−k)! (n−l)!)`.
pub mod index_sums {
    use crate::correlations::rate_product;
    use crate::numeric::{binomial_pmf, ln_binomial, ln_factorial};
    use crate::source::{pair_amplitudes, SourceParams};

    /// `(G_Q^η, C_Q^η)` at α = 0.
    pub fn indistinguishable(gamma: f64, eta: f64, n_max: u32) -> (f64, f64) {
        let params = SourceParams {
            gamma,
            alpha: 0.0,
            n_max,
        };
        let (mut g, mut c) = (0.0, 0.0);
        for amp in pair_amplitudes(&params) {
            let n = amp.n as u64;
            for k in 0..=n {
                let (ya, yb) = (2 * k, 2 * (n - k));
                let z2 = (2.0 * amp.ln_a_n
                    + 2.0 * ln_binomial(n, k)
                    + ln_factorial(ya)
                    + ln_factorial(yb))
                .exp();
                for l in 0..=ya {
                    let pl = binomial_pmf(ya, l, eta);
                    for m in 0..=yb {
                        let w = z2 * pl * binomial_pmf(yb, m, eta);
                        g += (l * m) as f64 * w;
                        c += rate_product(l as u32, m as u32) * w;
                    }
                }
            }
        }
        (g, c)
    }

    /// `(G_Q^η, C_Q^η)` at α = π/2.
    pub fn distinguishable(gamma: f64, eta: f64, n_max: u32) -> (f64, f64) {
        let params = SourceParams {
            gamma,
            alpha: std::f64::consts::FRAC_PI_2,
            n_max,
        };
        let (mut g, mut c) = (0.0, 0.0);
        for amp in pair_amplitudes(&params) {
            let n = amp.n as u64;
            for k in 0..=n {
                for l in 0..=n {
                    let z2 = (2.0 * amp.ln_a_n
                        + 2.0 * (ln_binomial(n, k) + ln_binomial(n, l))
                        + ln_factorial(k)
                        + ln_factorial(l)
                        + ln_factorial(n - k)
                        + ln_factorial(n - l))
                    .exp();
                    for m in 0..=k {
                        let pm = binomial_pmf(k, m, eta);
                        for p in 0..=l {
                            let pp = binomial_pmf(l, p, eta);
                            for s in 0..=n - k {
                                let ps = binomial_pmf(n - k, s, eta);
                                for r in 0..=n - l {
                                    let w = z2 * pm * pp * ps * binomial_pmf(n - l, r, eta);
                                    let (na, nb) = (m + p, s + r);
                                    g += (na * nb) as f64 * w;
                                    c += rate_product(na as u32, nb as u32) * w;
                                }
                            }
                        }
                    }
                }
            }
        }
        (g, c)
    }
}
