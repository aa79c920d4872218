//! Oracle cross-checks bundled for the `validate` command.

use std::f64::consts::FRAC_PI_2;

use crate::beamsplitter::{expand_output, expand_output_with, BsConvention, DEFAULT_MAX_TERMS};
use crate::classical::{classical_visibility, ClassicalEnsemble, IntensityLaw};
use crate::closed_form::eval_closed;
use crate::correlations::{correlations, endpoint_correlations, CorrelationPair};
use crate::error::Result;
use crate::loss::{
    c_q_eta, correlators_from_distribution, g_q_eta, index_sums, lossy_outcome_distribution,
    DetectionModel,
};
use crate::source::{choose_truncation, SourceParams};

pub const SERIES_REL_TOL: f64 = 1e-8;
pub const REDUCTION_TOL: f64 = 1e-10;
pub const LOSS_ORACLE_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct ValidationConfig {
    pub gammas: Vec<f64>,
    pub tail: f64,
    pub runs: u64,
    pub seed: u64,
    pub convention: BsConvention,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self {
            gammas: vec![0.1, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5],
            tail: 1e-12,
            runs: crate::classical::DEFAULT_RUNS,
            seed: 2024,
            convention: BsConvention::STANDARD,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    fn from_result(name: String, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((passed, detail)) => Self::new(name, passed, detail),
            Err(e) => Self::new(name, false, format!("error: {e}")),
        }
    }
}

fn rel_err(x: f64, reference: f64) -> f64 {
    ((x - reference) / reference).abs()
}

fn series_check(gamma: f64, tail: f64, convention: BsConvention) -> Result<(bool, String)> {
    // the comparison is relative, so the dropped pair weight is measured
    // against the size of the smallest correlator
    let cf = eval_closed(gamma);
    let n_max = choose_truncation(gamma, tail * cf.g0.min(1.0))?;
    let corr = |alpha: f64| -> Result<CorrelationPair> {
        let params = SourceParams::new(gamma, alpha, n_max)?;
        correlations(&expand_output_with(&params, convention, DEFAULT_MAX_TERMS)?)
    };
    let (a0, ap) = (corr(0.0)?, corr(FRAC_PI_2)?);
    let worst = [
        rel_err(a0.g_q, cf.g0),
        rel_err(a0.c_q, cf.c0),
        rel_err(ap.g_q, cf.gpi2),
        rel_err(ap.c_q, cf.cpi2),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    Ok((
        worst < SERIES_REL_TOL,
        format!("n_max={n_max} worst rel err {worst:.3e}"),
    ))
}

fn reduction_check(gamma: f64) -> Result<(bool, String)> {
    let n_max = 8;
    let perfect = DetectionModel::perfect();
    let mut worst = 0.0f64;
    for alpha in [0.0, FRAC_PI_2] {
        let state = expand_output(&SourceParams::new(gamma, alpha, n_max)?)?;
        let lossless = correlations(&state)?;
        worst = worst
            .max((g_q_eta(&state, perfect) - lossless.g_numerator).abs())
            .max((c_q_eta(&state, perfect) - lossless.c_q).abs());
    }
    Ok((worst < REDUCTION_TOL, format!("max abs diff {worst:.3e}")))
}

fn loss_oracle_check(gamma: f64, eta: f64, n_max: u32) -> Result<(bool, String)> {
    let model = DetectionModel::new(eta)?;
    let s0 = expand_output(&SourceParams::new(gamma, 0.0, n_max)?)?;
    let s1 = expand_output(&SourceParams::new(gamma, FRAC_PI_2, n_max)?)?;
    let generic0 = correlators_from_distribution(&lossy_outcome_distribution(&s0, model));
    let generic1 = correlators_from_distribution(&lossy_outcome_distribution(&s1, model));
    let direct0 = index_sums::indistinguishable(gamma, eta, n_max);
    let direct1 = index_sums::distinguishable(gamma, eta, n_max);
    let worst = [
        generic0.0 - direct0.0,
        generic0.1 - direct0.1,
        generic1.0 - direct1.0,
        generic1.1 - direct1.1,
    ]
    .into_iter()
    .map(f64::abs)
    .fold(0.0, f64::max);
    Ok((worst < LOSS_ORACLE_TOL, format!("max abs diff {worst:.3e}")))
}

fn classical_check(law: IntensityLaw, runs: u64, seed: u64) -> Result<(bool, String)> {
    let a = ClassicalEnsemble::new(runs, 1.0, law, seed)?;
    let b = ClassicalEnsemble::new(runs, 0.0, law, seed.wrapping_add(1))?;
    let v = classical_visibility(&a, &b)?;
    Ok((
        v.within_bound(0.5, 3.0),
        format!(
            "v_g={:.5}±{:.1e} v_c={:.5}±{:.1e}",
            v.v_g, v.v_g_stderr, v.v_c, v.v_c_stderr
        ),
    ))
}

/// Runs every check; never short-circuits.
pub fn run_validation(config: &ValidationConfig) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    for &g in &config.gammas {
        out.push(CheckOutcome::from_result(
            format!("series vs closed form, gamma={g}"),
            series_check(g, config.tail, config.convention),
        ));
    }
    for g in [0.25, 0.5, 1.0] {
        out.push(CheckOutcome::from_result(
            format!("eta=1 reduction, gamma={g}"),
            reduction_check(g),
        ));
    }
    out.push(CheckOutcome::from_result(
        "two-path loss oracle, gamma=0.5 eta=0.5".into(),
        loss_oracle_check(0.5, 0.5, 8),
    ));
    for law in IntensityLaw::ALL {
        out.push(CheckOutcome::from_result(
            format!("classical bound, {}", law.name()),
            classical_check(law, config.runs, config.seed),
        ));
    }
    out
}

/// Lossless endpoint correlators against the closed forms; used by callers
/// that want the numbers rather than a verdict.
pub fn series_relative_errors(gamma: f64, n_max: u32) -> Result<[f64; 4]> {
    let (a0, ap) = endpoint_correlations(gamma, n_max)?;
    let cf = eval_closed(gamma);
    Ok([
        rel_err(a0.g_q, cf.g0),
        rel_err(a0.c_q, cf.c0),
        rel_err(ap.g_q, cf.gpi2),
        rel_err(ap.c_q, cf.cpi2),
    ])
}
