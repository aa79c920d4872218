//! Brute-force reference expansion: multiply out the creation-operator
//! polynomial one linear factor at a time, then attach the Fock
//! normalization. Shares no code with the library's sector expansion.

#![allow(dead_code)]

use std::collections::BTreeMap;

pub type Monomial = [u32; 4];

fn multiply(poly: &BTreeMap<Monomial, f64>, factor: &[(usize, f64)]) -> BTreeMap<Monomial, f64> {
    let mut out = BTreeMap::new();
    for (mono, coef) in poly {
        for &(mode, w) in factor {
            if w == 0.0 {
                continue;
            }
            let mut m = *mono;
            m[mode] += 1;
            *out.entry(m).or_insert(0.0) += coef * w;
        }
    }
    out
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Output amplitudes `(a, a⊥, b, b⊥) → amp` for pair numbers `0..=n_max`.
pub fn brute_force_output(
    gamma: f64,
    cos_a: f64,
    sin_a: f64,
    n_max: u32,
) -> BTreeMap<Monomial, f64> {
    let port1 = [(0usize, 1.0), (2, 1.0)];
    let port2 = [(0usize, cos_a), (2, -cos_a), (1, sin_a), (3, -sin_a)];
    let mut out = BTreeMap::new();
    for n in 0..=n_max {
        let mut poly = BTreeMap::from([([0u32; 4], 1.0)]);
        for _ in 0..n {
            poly = multiply(&poly, &port1);
        }
        for _ in 0..n {
            poly = multiply(&poly, &port2);
        }
        let prefactor =
            gamma.tanh().powi(n as i32) / (factorial(n) * 2f64.powi(n as i32) * gamma.cosh());
        for (mono, coef) in poly {
            let norm: f64 = mono.iter().map(|&c| factorial(c)).product::<f64>().sqrt();
            out.insert(mono, prefactor * coef * norm);
        }
    }
    out
}
