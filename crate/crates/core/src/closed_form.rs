//! Analytic values of the four correlators and two visibilities at the
//! endpoints α = 0 and α = π/2, summed to infinite order.
//!
//! ```text
//! G(0)   = ¼ sinh²Γ sech 2Γ          G(π/2) = ⅛ (2 − sech 2Γ)
//! C(0)   = ⅛ (tanh²Γ + sech²Γ ln sech²Γ)
//! C(π/2) = ⅛ (2 tanh²Γ + sech²Γ ln sech²Γ)
//! V_G    = 1 / (2 − sech 2Γ)
//! V_C    = sinh²Γ / (cosh 2Γ + ln sech²Γ − 1)
//! ```

use serde::{Deserialize, Serialize};

use crate::numeric::ln_cosh;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormSet {
    pub gamma: f64,
    pub g0: f64,
    pub c0: f64,
    pub gpi2: f64,
    pub cpi2: f64,
    pub vg: f64,
    pub vc: f64,
    /// Set at Γ = 0, where both visibilities are reported as their limit 1.
    pub limit: bool,
}

/// `ln sech²Γ = −2 ln cosh Γ`.
pub fn ln_sech2(gamma: f64) -> f64 {
    -2.0 * ln_cosh(gamma)
}

/// `sech 2Γ`, zero once `cosh 2Γ` overflows.
fn sech_2g(gamma: f64) -> f64 {
    let x = 2.0 * gamma.abs();
    if x > 700.0 {
        0.0
    } else {
        1.0 / x.cosh()
    }
}

/// `sech²Γ` without overflow.
fn sech2(gamma: f64) -> f64 {
    ln_sech2(gamma).exp()
}

pub fn g_alpha0(gamma: f64) -> f64 {
    // sinh²Γ sech 2Γ = tanh²Γ / (1 + tanh²Γ)
    let t2 = gamma.tanh().powi(2);
    0.25 * t2 / (1.0 + t2)
}

pub fn g_alpha_pi2(gamma: f64) -> f64 {
    0.125 * (2.0 - sech_2g(gamma))
}

pub fn c_alpha0(gamma: f64) -> f64 {
    0.125 * (gamma.tanh().powi(2) + sech2(gamma) * ln_sech2(gamma))
}

pub fn c_alpha_pi2(gamma: f64) -> f64 {
    0.125 * (2.0 * gamma.tanh().powi(2) + sech2(gamma) * ln_sech2(gamma))
}

/// `1 / (2 − sech 2Γ)`.
pub fn visibility_g(gamma: f64) -> f64 {
    1.0 / (2.0 - sech_2g(gamma))
}

/// `sinh²Γ / (cosh 2Γ + ln sech²Γ − 1)`, rewritten as
/// `1 / (2 + ln sech²Γ / sinh²Γ)` using `cosh 2Γ − 1 = 2 sinh²Γ`.
pub fn visibility_c(gamma: f64) -> f64 {
    let s2 = gamma.sinh().powi(2);
    if s2.is_infinite() {
        return 0.5;
    }
    1.0 / (2.0 + ln_sech2(gamma) / s2)
}

pub fn eval_closed(gamma: f64) -> ClosedFormSet {
    if gamma == 0.0 {
        return ClosedFormSet {
            gamma,
            g0: 0.0,
            c0: 0.0,
            gpi2: 0.0,
            cpi2: 0.0,
            vg: 1.0,
            vc: 1.0,
            limit: true,
        };
    }
    ClosedFormSet {
        gamma,
        g0: g_alpha0(gamma),
        c0: c_alpha0(gamma),
        gpi2: g_alpha_pi2(gamma),
        cpi2: c_alpha_pi2(gamma),
        vg: visibility_g(gamma),
        vc: visibility_c(gamma),
        limit: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn vacuum_limit_is_flagged() {
        let c = eval_closed(0.0);
        assert!(c.limit);
        assert_eq!((c.g0, c.c0, c.gpi2, c.cpi2), (0.0, 0.0, 0.0, 0.0));
        assert_eq!((c.vg, c.vc), (1.0, 1.0));
    }

    #[test]
    fn unit_gain_values() {
        // direct double-precision evaluation of the textbook expressions
        let g = 1.0f64;
        let sech2 = 1.0 / g.cosh().powi(2);
        let naive_g0 = 0.25 * g.sinh().powi(2) / (2.0 * g).cosh();
        let naive_c0 = 0.125 * (g.tanh().powi(2) + sech2 * sech2.ln());
        let naive_gp = 0.125 * (2.0 - 1.0 / (2.0 * g).cosh());
        let naive_cp = 0.125 * (2.0 * g.tanh().powi(2) + sech2 * sech2.ln());
        let c = eval_closed(g);
        assert!(close(c.g0, naive_g0, 1e-15));
        assert!(close(c.c0, naive_c0, 1e-15));
        assert!(close(c.gpi2, naive_gp, 1e-15));
        assert!(close(c.cpi2, naive_cp, 1e-15));
        assert!(close(c.g0, 0.091775, 1e-6));
        assert!(close(c.c0, 0.026959, 1e-6));
        assert!(close(c.gpi2, 0.216775, 1e-6));
        assert!(close(c.cpi2, 0.099462, 1e-6));
        assert!(close(c.vg, 0.5766355006486308, 1e-13));
        assert!(close(c.vc, 0.7289523061380395, 1e-13));
    }

    #[test]
    fn large_gain_values() {
        let c = eval_closed(3.0);
        assert!(close(c.vg, 0.5012424481755874, 1e-13));
        assert!(close(c.vc, 0.5117764613969066, 1e-13));
        let c = eval_closed(400.0);
        assert!(c.vg.is_finite() && c.vc.is_finite());
        assert!(close(c.vg, 0.5, 1e-12) && close(c.vc, 0.5, 1e-12));
    }

    #[test]
    fn visibility_identities_hold() {
        for i in 1..=300 {
            let g = i as f64 * 0.01;
            let c = eval_closed(g);
            assert!(close(c.vg, (c.gpi2 - c.g0) / c.gpi2, 1e-12), "g={g}");
            assert!(close(c.vc, (c.cpi2 - c.c0) / c.cpi2, 1e-12), "g={g}");
            let textbook = g.sinh().powi(2) / ((2.0 * g).cosh() + ln_sech2(g) - 1.0);
            assert!(close(c.vc, textbook, 1e-12), "g={g}");
        }
    }

    #[test]
    fn visibilities_are_ordered_above_half() {
        for i in 1..=300 {
            let c = eval_closed(i as f64 * 0.01);
            assert!(0.5 < c.vg && c.vg < c.vc && c.vc <= 1.0);
        }
    }

    #[test]
    fn asymptotic_limits() {
        let c = eval_closed(5.0);
        assert!(c.vg > 0.5 && c.vg < 0.502);
        assert!(c.vc > 0.5 && c.vc < 0.502);
        let c = eval_closed(1e-3);
        assert!(c.vg > 0.999 && c.vg <= 1.0);
        assert!(c.vc > 0.999 && c.vc <= 1.0);
    }
}
