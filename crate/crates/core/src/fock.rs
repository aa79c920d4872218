//! Truncated four-mode Fock states.
//!
//! The output ports of the beam splitter are `a` and `b`; each carries a
//! parallel mode and an orthogonal (`⊥`) mode. Detectors do not resolve the
//! `⊥` label, so the spatial photon numbers are `n_a = a + a⊥` and
//! `n_b = b + b⊥`.
//!
//! Amplitudes are stored as `f64`: every state produced by the source and the
//! pinned beam-splitter convention has real coefficients. A complex
//! generalization only needs to change the amplitude type of [`SparseState`].

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Photon numbers in the modes `(a, a⊥, b, b⊥)`.
///
/// Ordering is lexicographic on the four counts, which fixes the canonical
/// iteration order of every state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Occupation4 {
    pub a: u32,
    pub a_perp: u32,
    pub b: u32,
    pub b_perp: u32,
}

impl Occupation4 {
    pub const VACUUM: Self = Self::new(0, 0, 0, 0);

    pub const fn new(a: u32, a_perp: u32, b: u32, b_perp: u32) -> Self {
        Self {
            a,
            a_perp,
            b,
            b_perp,
        }
    }

    /// Photons reaching detector `a`.
    #[inline]
    pub fn n_a(&self) -> u32 {
        self.a + self.a_perp
    }

    /// Photons reaching detector `b`.
    #[inline]
    pub fn n_b(&self) -> u32 {
        self.b + self.b_perp
    }

    #[inline]
    pub fn total(&self) -> u32 {
        self.n_a() + self.n_b()
    }

    pub fn counts(&self) -> [u32; 4] {
        [self.a, self.a_perp, self.b, self.b_perp]
    }
}

impl From<[u32; 4]> for Occupation4 {
    fn from(c: [u32; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }
}

impl TryFrom<[i64; 4]> for Occupation4 {
    type Error = Error;

    fn try_from(c: [i64; 4]) -> Result<Self> {
        let mut out = [0u32; 4];
        for (mode, (&count, slot)) in c.iter().zip(out.iter_mut()).enumerate() {
            *slot = u32::try_from(count).map_err(|_| Error::NegativeCount { mode, count })?;
        }
        Ok(out.into())
    }
}

impl fmt::Display for Occupation4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{},{},{},{}⟩", self.a, self.a_perp, self.b, self.b_perp)
    }
}

/// A normalized (up to truncation) pure state over [`Occupation4`].
///
/// Immutable after construction. Terms are kept sorted in canonical order and
/// never hold an exact zero amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseState {
    terms: Vec<(Occupation4, f64)>,
    truncation_order: u32,
    norm_deficit: f64,
}

/// Slack allowed on `Σ|amp|² ≤ 1` before construction is rejected.
const NORM_SLACK: f64 = 1e-12;

impl SparseState {
    /// Builds a state from explicit entries.
    ///
    /// Zero amplitudes are dropped. Duplicate occupations, occupations above
    /// `2 * truncation_order` photons and norms above one are rejected.
    pub fn new<I>(entries: I, truncation_order: u32) -> Result<Self>
    where
        I: IntoIterator<Item = (Occupation4, f64)>,
    {
        let limit = 2 * truncation_order;
        let mut seen = BTreeSet::new();
        let mut terms = Vec::new();
        for (occ, amp) in entries {
            if !seen.insert(occ) {
                return Err(Error::DuplicateOccupation(occ));
            }
            if occ.total() > limit {
                return Err(Error::OccupationTooLarge {
                    occupation: occ,
                    total: occ.total(),
                    limit,
                });
            }
            if !amp.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "non-finite amplitude {amp} on {occ}"
                )));
            }
            if amp != 0.0 {
                terms.push((occ, amp));
            }
        }
        terms.sort_unstable_by_key(|&(occ, _)| occ);
        Self::from_sorted(terms, truncation_order)
    }

    /// `terms` must be sorted, duplicate free and zero free.
    pub(crate) fn from_sorted(
        terms: Vec<(Occupation4, f64)>,
        truncation_order: u32,
    ) -> Result<Self> {
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(terms.iter().all(|&(_, amp)| amp != 0.0));
        let norm: f64 = terms.iter().map(|&(_, amp)| amp * amp).sum();
        if norm > 1.0 + NORM_SLACK {
            return Err(Error::NormExceeded(norm));
        }
        Ok(Self {
            terms,
            truncation_order,
            norm_deficit: (1.0 - norm).max(0.0),
        })
    }

    pub fn vacuum() -> Self {
        Self {
            terms: vec![(Occupation4::VACUUM, 1.0)],
            truncation_order: 0,
            norm_deficit: 0.0,
        }
    }

    pub fn terms(&self) -> &[(Occupation4, f64)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn truncation_order(&self) -> u32 {
        self.truncation_order
    }

    /// `1 - Σ|amp|²`, the weight removed by truncation.
    pub fn norm_deficit(&self) -> f64 {
        self.norm_deficit
    }

    pub fn amplitude(&self, occ: &Occupation4) -> f64 {
        self.terms
            .binary_search_by_key(occ, |&(o, _)| o)
            .map(|i| self.terms[i].1)
            .unwrap_or(0.0)
    }

    /// `Σ |amp|² f(occ)` for an observable diagonal in the Fock basis.
    pub fn expectation<F>(&self, f: F) -> f64
    where
        F: Fn(&Occupation4) -> f64,
    {
        self.terms.iter().map(|(occ, amp)| amp * amp * f(occ)).sum()
    }

    /// Iterator over `(occupation, probability)`.
    pub fn probabilities(&self) -> impl Iterator<Item = (Occupation4, f64)> + '_ {
        self.terms.iter().map(|&(occ, amp)| (occ, amp * amp))
    }

    /// Total weight `Σ|amp|²` in each photon-pair sector `N = 2n`; index `n`.
    pub fn pair_weights(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.truncation_order as usize + 1];
        for (occ, p) in self.probabilities() {
            let n = (occ.total() / 2) as usize;
            w[n] += p;
        }
        w
    }
}
