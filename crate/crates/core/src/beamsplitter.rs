//! Balanced beam splitter acting on the distinguishable-photon squeezed vacuum.
//!
//! The `n`-pair sector of the output is
//! `A_n (a†+b†)ⁿ (cos α (a†−b†) + sin α (a⊥†−b⊥†))ⁿ |Ω⟩`.
//! Expanding the second factor by the number `l` of photons routed through
//! the orthogonal mode gives
//!
//! ```text
//! Σ_l C(n,l) cosⁿ⁻ˡα sinˡα · (a†+b†)ⁿ (a†−b†)ⁿ⁻ˡ · (a⊥†−b⊥†)ˡ
//! ```
//!
//! Several `(k, m)` index pairs of the first two binomials land on the same
//! power `q = k + m` of `b†`, so their coefficients are summed first:
//! `D(n,l,q) = Σ_{k+m=q} C(n,k) C(n−l,m) (−1)^m`. The sum alternates and
//! cancels to many orders of magnitude, so it is done in exact integer
//! arithmetic; everything else is assembled in log space.

use num_bigint::{BigInt, Sign};
use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{Occupation4, SparseState};
use crate::numeric::{bigint_to_f64, ln_binomial, ln_factorial, BinomialTable};
use crate::source::{pair_amplitudes, PairAmplitude, SourceParams};

/// Default bound on the number of stored output terms.
pub const DEFAULT_MAX_TERMS: usize = 10_000_000;

/// Mode map of the balanced beam splitter.
///
/// ```text
/// a₁  → (a + b)/√2
/// a₂  → (a − b)/√2
/// a₂⊥ → (a⊥ − b⊥)/√2
/// ```
///
/// `a₁⊥` is never populated by the source. Only the standard map is
/// physical; [`BsConvention::perturbed`] exists so that oracle checks can be
/// shown to catch a sign error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BsConvention {
    port2_b_sign: i8,
    port2_perp_b_sign: i8,
}

impl BsConvention {
    pub const STANDARD: Self = Self {
        port2_b_sign: -1,
        port2_perp_b_sign: -1,
    };

    /// Flips the sign of `b` in the `a₂` map, i.e. `a₂ → (a + b)/√2`.
    #[doc(hidden)]
    pub const fn perturbed() -> Self {
        Self {
            port2_b_sign: 1,
            port2_perp_b_sign: -1,
        }
    }
}

impl Default for BsConvention {
    fn default() -> Self {
        Self::STANDARD
    }
}

/// One output term tagged with its origin.
#[derive(Debug, Clone, Copy)]
struct SectorTerm {
    n: u32,
    perp: u32,
    occ: Occupation4,
    amp: f64,
}

/// Upper bound on the terms produced by [`expand_output`].
pub fn term_count_bound(params: &SourceParams) -> usize {
    let (c, s) = params.mixing();
    let mut count = 0usize;
    for n in 0..=params.n_max as usize {
        for l in 0..=n {
            if weight_vanishes(c, s, n, l) {
                continue;
            }
            count += (2 * n - l + 1) * (l + 1);
        }
    }
    count
}

fn weight_vanishes(c: f64, s: f64, n: usize, l: usize) -> bool {
    (c == 0.0 && l < n) || (s == 0.0 && l > 0)
}

/// `D(n,l,q)` for all `q = 0..=2n−l`.
fn collected_b_coefficients(table: &BinomialTable, n: usize, l: usize, b_sign: i8) -> Vec<BigInt> {
    let first = table.row(n);
    let second = table.row(n - l);
    let mut out = vec![BigInt::zero(); 2 * n - l + 1];
    for (m, cm) in second.iter().enumerate() {
        let negate = b_sign < 0 && m % 2 == 1;
        for (k, ck) in first.iter().enumerate() {
            let prod = ck * cm;
            if negate {
                out[k + m] -= prod;
            } else {
                out[k + m] += prod;
            }
        }
    }
    out
}

fn sector_terms(
    amp: &PairAmplitude,
    mixing: (f64, f64),
    convention: BsConvention,
    table: &BinomialTable,
) -> Vec<SectorTerm> {
    let n = amp.n as usize;
    let (c, s) = mixing;
    let mut out = Vec::new();
    if amp.a_n == 0.0 && amp.ln_a_n == f64::NEG_INFINITY {
        return out;
    }
    for l in 0..=n {
        if weight_vanishes(c, s, n, l) {
            continue;
        }
        let mut ln_weight = ln_binomial(n as u64, l as u64);
        if l < n {
            ln_weight += (n - l) as f64 * c.ln();
        }
        if l > 0 {
            ln_weight += l as f64 * s.ln();
        }
        let coeffs = collected_b_coefficients(table, n, l, convention.port2_b_sign);
        for (q, d) in coeffs.iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            let d_sign = if d.sign() == Sign::Minus { -1.0 } else { 1.0 };
            let ln_d = bigint_to_f64(d).abs().ln();
            let a = 2 * n - l - q;
            for p in 0..=l {
                let occ = Occupation4::new(a as u32, (l - p) as u32, q as u32, p as u32);
                let perp_sign = if convention.port2_perp_b_sign < 0 && p % 2 == 1 {
                    -1.0
                } else {
                    1.0
                };
                let ln_mag = amp.ln_a_n
                    + ln_weight
                    + ln_d
                    + ln_binomial(l as u64, p as u64)
                    + 0.5
                        * (ln_factorial(a as u64)
                            + ln_factorial((l - p) as u64)
                            + ln_factorial(q as u64)
                            + ln_factorial(p as u64));
                let value = d_sign * perp_sign * ln_mag.exp();
                if value != 0.0 {
                    out.push(SectorTerm {
                        n: amp.n,
                        perp: l as u32,
                        occ,
                        amp: value,
                    });
                }
            }
        }
    }
    out
}

fn expand_terms(
    params: &SourceParams,
    convention: BsConvention,
    max_terms: usize,
) -> Result<Vec<SectorTerm>> {
    params.validate()?;
    let bound = term_count_bound(params);
    if bound > max_terms {
        return Err(Error::Capacity {
            what: "output terms",
            required: bound,
            cap: max_terms,
        });
    }
    let mixing = params.mixing();
    let table = BinomialTable::new(params.n_max as usize);
    let amps = pair_amplitudes(params);
    let sectors: Vec<Vec<SectorTerm>> = amps
        .par_iter()
        .map(|amp| sector_terms(amp, mixing, convention, &table))
        .collect();
    let mut terms: Vec<SectorTerm> = sectors.into_iter().flatten().collect();
    terms.sort_unstable_by_key(|t| t.occ);
    Ok(terms)
}

/// Output state of the beam splitter for the truncated source.
pub fn expand_output(params: &SourceParams) -> Result<SparseState> {
    expand_output_with(params, BsConvention::STANDARD, DEFAULT_MAX_TERMS)
}

pub fn expand_output_with(
    params: &SourceParams,
    convention: BsConvention,
    max_terms: usize,
) -> Result<SparseState> {
    let terms = expand_terms(params, convention, max_terms)?;
    SparseState::from_sorted(
        terms.into_iter().map(|t| (t.occ, t.amp)).collect(),
        params.n_max,
    )
}

/// Output state with complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexState {
    pub terms: Vec<(Occupation4, Complex64)>,
    pub truncation_order: u32,
}

impl ComplexState {
    pub fn expectation<F>(&self, f: F) -> f64
    where
        F: Fn(&Occupation4) -> f64,
    {
        self.terms
            .iter()
            .map(|(o, amp)| amp.norm_sqr() * f(o))
            .sum()
    }
}

/// As [`expand_output`], with input port 2 (both its parallel and orthogonal
/// modes) carrying an extra phase `e^{iΦ}`.
pub fn expand_output_with_phase(params: &SourceParams, phi: f64) -> Result<ComplexState> {
    let terms = expand_terms(params, BsConvention::STANDARD, DEFAULT_MAX_TERMS)?;
    let port2 = Complex64::from_polar(1.0, phi);
    let terms = terms
        .into_iter()
        .map(|t| {
            // (n−l) photons via a₂ and l via a₂⊥, each carrying the port phase
            let phase = port2.powu(t.n - t.perp) * port2.powu(t.perp);
            (t.occ, phase * t.amp)
        })
        .collect();
    Ok(ComplexState {
        terms,
        truncation_order: params.n_max,
    })
}
