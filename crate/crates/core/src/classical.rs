//! Monte Carlo model of classical pulses meeting at a balanced beam splitter.
//!
//! Each run draws a pair of pulse energies `(I₁, I₂)` and independent uniform
//! phases `φ₁, φ₂`. With the time integrals collapsed to a single overlap
//! parameter `ν = |∫E₁E₂*|² / (I₁I₂)`, the integrated output intensities are
//!
//! ```text
//! X   = √(ν I₁ I₂) cos(φ₁ − φ₂ + φ₀)
//! I_a = ½(I₁ + I₂) + X
//! I_b = ½(I₁ + I₂) − X
//! ```
//!
//! so `I_a I_b = ¼(I₁+I₂)² − X²`. The cross terms that vanish on average are
//! left in and average out over the phases.
//!
//! Runs are grouped in fixed chunks; chunk `i` draws from ChaCha8 stream `i`
//! of the seed, and chunk sums are reduced in index order. Results are
//! therefore bit-identical for any number of worker threads.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Runs per RNG stream.
const CHUNK: u64 = 4096;

pub const DEFAULT_RUNS: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntensityLaw {
    /// `I₁ = I₂ = 1` in every run.
    FixedEqual,
    /// `I₁, I₂` independent, exponentially distributed with unit mean.
    IndependentExponential,
}

impl IntensityLaw {
    pub const ALL: [IntensityLaw; 2] = [
        IntensityLaw::FixedEqual,
        IntensityLaw::IndependentExponential,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            IntensityLaw::FixedEqual => "fixed-equal",
            IntensityLaw::IndependentExponential => "independent-exponential",
        }
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> (f64, f64) {
        match self {
            IntensityLaw::FixedEqual => (1.0, 1.0),
            IntensityLaw::IndependentExponential => (Exp1.sample(rng), Exp1.sample(rng)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalEnsemble {
    pub runs: u64,
    /// Squared pulse overlap in `[0, 1]`.
    pub overlap: f64,
    pub intensity_law: IntensityLaw,
    pub seed: u64,
    /// Fixed phase `φ₀` added in input 2.
    pub phase_offset: f64,
}

impl ClassicalEnsemble {
    pub fn new(runs: u64, overlap: f64, intensity_law: IntensityLaw, seed: u64) -> Result<Self> {
        let e = Self {
            runs,
            overlap,
            intensity_law,
            seed,
            phase_offset: 0.0,
        };
        e.validate()?;
        Ok(e)
    }

    pub fn with_phase_offset(mut self, phi: f64) -> Self {
        self.phase_offset = phi;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::InvalidParameter("runs must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&self.overlap) {
            return Err(Error::InvalidParameter(format!(
                "overlap must lie in [0, 1], got {}",
                self.overlap
            )));
        }
        if !self.phase_offset.is_finite() {
            return Err(Error::InvalidParameter(
                "phase offset must be finite".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalResult {
    pub runs: u64,
    /// `⟨I_a I_b⟩`
    pub g_mean: f64,
    pub g_stderr: f64,
    /// `⟨I_a I_b / I_tot²⟩`
    pub c_mean: f64,
    pub c_stderr: f64,
    /// `⟨I_a⟩`
    pub ia_mean: f64,
    pub ia_stderr: f64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: u64,
    g: (f64, f64),
    c: (f64, f64),
    ia: (f64, f64),
}

impl Moments {
    fn push(&mut self, g: f64, c: f64, ia: f64) {
        self.count += 1;
        self.g.0 += g;
        self.g.1 += g * g;
        self.c.0 += c;
        self.c.1 += c * c;
        self.ia.0 += ia;
        self.ia.1 += ia * ia;
    }

    fn merge(mut self, o: &Moments) -> Self {
        self.count += o.count;
        self.g.0 += o.g.0;
        self.g.1 += o.g.1;
        self.c.0 += o.c.0;
        self.c.1 += o.c.1;
        self.ia.0 += o.ia.0;
        self.ia.1 += o.ia.1;
        self
    }
}

fn mean_stderr((sum, sum_sq): (f64, f64), n: u64) -> (f64, f64) {
    let n = n as f64;
    let mean = sum / n;
    if n < 2.0 {
        return (mean, f64::INFINITY);
    }
    let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
    (mean, (var / n).sqrt())
}

fn run_chunk(ensemble: &ClassicalEnsemble, chunk: u64) -> Result<Moments> {
    let mut rng = ChaCha8Rng::seed_from_u64(ensemble.seed);
    rng.set_stream(chunk);
    let start = chunk * CHUNK;
    let end = (start + CHUNK).min(ensemble.runs);
    let mut m = Moments::default();
    for run in start..end {
        let (i1, i2) = ensemble.intensity_law.draw(&mut rng);
        let phi1 = rng.random::<f64>() * TAU;
        let phi2 = rng.random::<f64>() * TAU;
        let total = i1 + i2;
        let x = (ensemble.overlap * i1 * i2).sqrt() * (phi1 - phi2 + ensemble.phase_offset).cos();
        let ia = 0.5 * total + x;
        let ib = 0.5 * total - x;
        let g = ia * ib;
        if !(g.is_finite() && total.is_finite()) {
            return Err(Error::NonFinite {
                run,
                detail: format!("I1={i1} I2={i2} Ia={ia} Ib={ib}"),
            });
        }
        if (ia + ib - total).abs() > 1e-12 * total.max(1.0) {
            return Err(Error::NonFinite {
                run,
                detail: format!("energy not conserved: Ia+Ib={} vs I1+I2={total}", ia + ib),
            });
        }
        let c = if total > 0.0 {
            g / (total * total)
        } else {
            0.0
        };
        m.push(g, c, ia);
    }
    Ok(m)
}

pub fn sample_products(ensemble: &ClassicalEnsemble) -> Result<ClassicalResult> {
    ensemble.validate()?;
    let chunks = ensemble.runs.div_ceil(CHUNK);
    let parts: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|i| run_chunk(ensemble, i))
        .collect::<Result<_>>()?;
    let total = parts.iter().fold(Moments::default(), |acc, m| acc.merge(m));
    let (g_mean, g_stderr) = mean_stderr(total.g, total.count);
    let (c_mean, c_stderr) = mean_stderr(total.c, total.count);
    let (ia_mean, ia_stderr) = mean_stderr(total.ia, total.count);
    Ok(ClassicalResult {
        runs: total.count,
        g_mean,
        g_stderr,
        c_mean,
        c_stderr,
        ia_mean,
        ia_stderr,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalVisibility {
    pub v_g: f64,
    pub v_g_stderr: f64,
    pub v_c: f64,
    pub v_c_stderr: f64,
    pub overlapped: ClassicalResult,
    pub orthogonal: ClassicalResult,
}

impl ClassicalVisibility {
    /// Whether both visibilities stay below `bound + sigmas·σ`.
    pub fn within_bound(&self, bound: f64, sigmas: f64) -> bool {
        self.v_g <= bound + sigmas * self.v_g_stderr && self.v_c <= bound + sigmas * self.v_c_stderr
    }
}

/// `(max − min) / max` of two independent means, with first-order error
/// propagation.
fn dip_visibility(a: (f64, f64), b: (f64, f64)) -> Result<(f64, f64)> {
    let (hi, lo) = if a.0 >= b.0 { (a, b) } else { (b, a) };
    if !(hi.0 > 0.0) {
        return Err(Error::UndefinedVisibility { reference: hi.0 });
    }
    let ratio = lo.0 / hi.0;
    let rel_lo = if lo.0 > 0.0 { lo.1 / lo.0 } else { 0.0 };
    let rel = (rel_lo.powi(2) + (hi.1 / hi.0).powi(2)).sqrt();
    Ok((1.0 - ratio, ratio * rel))
}

pub fn classical_visibility(
    overlapped: &ClassicalEnsemble,
    orthogonal: &ClassicalEnsemble,
) -> Result<ClassicalVisibility> {
    if overlapped.intensity_law != orthogonal.intensity_law || overlapped.runs != orthogonal.runs {
        return Err(Error::InvalidParameter(
            "ensembles must share intensity law and run count".into(),
        ));
    }
    let a = sample_products(overlapped)?;
    let b = sample_products(orthogonal)?;
    let (v_g, v_g_stderr) = dip_visibility((a.g_mean, a.g_stderr), (b.g_mean, b.g_stderr))?;
    let (v_c, v_c_stderr) = dip_visibility((a.c_mean, a.c_stderr), (b.c_mean, b.c_stderr))?;
    Ok(ClassicalVisibility {
        v_g,
        v_g_stderr,
        v_c,
        v_c_stderr,
        overlapped: a,
        orthogonal: b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ens(overlap: f64, law: IntensityLaw, seed: u64) -> ClassicalEnsemble {
        ClassicalEnsemble::new(200_000, overlap, law, seed).unwrap()
    }

    #[test]
    fn validation() {
        assert!(ClassicalEnsemble::new(0, 0.5, IntensityLaw::FixedEqual, 1).is_err());
        assert!(ClassicalEnsemble::new(10, 1.5, IntensityLaw::FixedEqual, 1).is_err());
    }

    #[test]
    fn full_overlap_equal_pulses() {
        // ⟨1 − cos²θ⟩ = 1/2; I_tot = 2 so the rate correlator is a quarter of it
        let r = sample_products(&ens(1.0, IntensityLaw::FixedEqual, 7)).unwrap();
        assert!((r.g_mean - 0.5).abs() < 3.0 * r.g_stderr);
        assert!((r.c_mean - 0.125).abs() < 3.0 * r.c_stderr);
        assert!((r.c_mean - r.g_mean / 4.0).abs() < 1e-12);
    }

    #[test]
    fn orthogonal_equal_pulses_are_deterministic() {
        let r = sample_products(&ens(0.0, IntensityLaw::FixedEqual, 7)).unwrap();
        assert_eq!(r.g_mean, 1.0);
        assert_eq!(r.g_stderr, 0.0);
        assert_eq!(r.c_mean, 0.25);
    }

    #[test]
    fn products_are_never_negative() {
        let r = sample_products(&ens(1.0, IntensityLaw::IndependentExponential, 3)).unwrap();
        assert!(r.g_mean >= 0.0 && r.c_mean >= 0.0);
    }

    #[test]
    fn singles_ignore_controlled_phase() {
        let base = ens(1.0, IntensityLaw::IndependentExponential, 11);
        let r0 = sample_products(&base).unwrap();
        let r1 = sample_products(&base.with_phase_offset(1.3)).unwrap();
        let sigma = (r0.ia_stderr.powi(2) + r1.ia_stderr.powi(2)).sqrt();
        assert!((r0.ia_mean - r1.ia_mean).abs() < 3.0 * sigma);
    }

    #[test]
    fn same_seed_is_bitwise_reproducible() {
        let e = ens(0.6, IntensityLaw::IndependentExponential, 42);
        assert_eq!(sample_products(&e).unwrap(), sample_products(&e).unwrap());
        let one_thread = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let serial = one_thread.install(|| sample_products(&e).unwrap());
        assert_eq!(serial, sample_products(&e).unwrap());
    }

    #[test]
    fn visibility_examples() {
        let v = classical_visibility(
            &ens(1.0, IntensityLaw::FixedEqual, 1),
            &ens(0.0, IntensityLaw::FixedEqual, 2),
        )
        .unwrap();
        assert!((v.v_g - 0.5).abs() <= 3.0 * v.v_g_stderr);
        assert!((v.v_c - 0.5).abs() <= 3.0 * v.v_c_stderr);

        let v = classical_visibility(
            &ens(1.0, IntensityLaw::IndependentExponential, 1),
            &ens(0.0, IntensityLaw::IndependentExponential, 2),
        )
        .unwrap();
        assert!(v.within_bound(0.5, 3.0));

        for law in IntensityLaw::ALL {
            let v = classical_visibility(&ens(0.0, law, 5), &ens(0.0, law, 6)).unwrap();
            assert!(v.v_g.abs() <= 3.0 * v.v_g_stderr + 1e-15, "{law:?}");
            assert!(v.v_c.abs() <= 3.0 * v.v_c_stderr + 1e-15, "{law:?}");
        }
    }

    #[test]
    fn mismatched_ensembles_are_rejected() {
        let a = ens(1.0, IntensityLaw::FixedEqual, 1);
        let b = ens(0.0, IntensityLaw::IndependentExponential, 1);
        assert!(classical_visibility(&a, &b).is_err());
    }
}
