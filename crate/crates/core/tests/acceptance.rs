//! Exit criteria. Each test prints one `PASS`/`FAIL` line; run with
//! `cargo test -p homrates-core --test acceptance -- --nocapture` to see them.

mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};
use std::time::{Duration, Instant};

use homrates_core::beamsplitter::{expand_output, expand_output_with_phase};
use homrates_core::classical::{classical_visibility, ClassicalEnsemble, IntensityLaw};
use homrates_core::closed_form::eval_closed;
use homrates_core::correlations::{correlations, endpoint_correlations, sweep, Truncation};
use homrates_core::loss::{
    c_q_eta, correlators_from_distribution, g_q_eta, index_sums, lossy_outcome_distribution,
    visibility_eta,
};
use homrates_core::source::{choose_truncation, tail_weight};
use homrates_core::{DetectionModel, Occupation4, SourceParams};

const GRID: [f64; 7] = [0.1, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5];

fn report(id: u32, title: &str, start: Instant, limit: Duration, ok: bool, detail: String) {
    let elapsed = start.elapsed();
    let in_time = elapsed < limit;
    let verdict = if ok && in_time { "PASS" } else { "FAIL" };
    println!(
        "[{verdict}] criterion {id}: {title} ({detail}; {:.2}s of {:.0}s)",
        elapsed.as_secs_f64(),
        limit.as_secs_f64()
    );
    assert!(ok, "criterion {id} failed: {detail}");
    assert!(in_time, "criterion {id} exceeded {limit:?}: {elapsed:?}");
}

fn rel(x: f64, r: f64) -> f64 {
    ((x - r) / r).abs()
}

#[test]
fn criterion_1_closed_form_agreement() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut failing = Vec::new();
    for &g in &GRID {
        let n = choose_truncation(g, 1e-12).unwrap();
        let (a0, ap) = endpoint_correlations(g, n).unwrap();
        let cf = eval_closed(g);
        let point = [
            rel(a0.g_q, cf.g0),
            rel(a0.c_q, cf.c0),
            rel(ap.g_q, cf.gpi2),
            rel(ap.c_q, cf.cpi2),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        if point >= 1e-8 {
            failing.push(format!("Γ={g} (n_max={n}) rel err {point:.2e}"));
        }
        worst = worst.max(point);
    }
    report(
        1,
        "truncated Fock G_Q, C_Q vs closed forms",
        start,
        Duration::from_secs(10),
        failing.is_empty(),
        format!(
            "worst rel err {worst:.2e}, limit 1e-8; over limit: [{}]",
            failing.join(", ")
        ),
    );
}

#[test]
fn criterion_2_visibility_values() {
    let start = Instant::now();
    let cf = eval_closed(1.0);
    let n = choose_truncation(1.0, 1e-12).unwrap();
    let rec = sweep(&[1.0], DetectionModel::perfect(), Truncation::Fixed(n))
        .remove(0)
        .unwrap();
    let checks = [
        (cf.vg, 0.576635),
        (cf.vc, 0.728948),
        (rec.v_g, 0.576635),
        (rec.v_c, 0.728948),
    ];
    let worst = checks
        .iter()
        .map(|(x, r)| (x - r).abs())
        .fold(0.0, f64::max);
    report(
        2,
        "V_G(1) and V_C(1) from fock and closed paths",
        start,
        Duration::from_secs(1),
        worst <= 1e-5,
        format!(
            "closed ({:.6}, {:.6}) fock ({:.6}, {:.6}); worst dev {worst:.1e}",
            cf.vg, cf.vc, rec.v_g, rec.v_c
        ),
    );
}

#[test]
fn criterion_3_figure_one_properties() {
    let start = Instant::now();
    let records: Vec<_> = sweep(&GRID, DetectionModel::perfect(), Truncation::default())
        .into_iter()
        .map(Result::unwrap)
        .collect();
    let mut ok = records.iter().all(|r| r.v_c > r.v_g && r.v_g > 0.5);
    ok &= records
        .windows(2)
        .all(|w| w[1].v_g < w[0].v_g && w[1].v_c < w[0].v_c);
    let closed: Vec<_> = GRID.iter().map(|&g| eval_closed(g)).collect();
    ok &= closed.iter().all(|c| c.vc > c.vg && c.vg > 0.5);
    ok &= closed
        .windows(2)
        .all(|w| w[1].vg < w[0].vg && w[1].vc < w[0].vc);
    let far = eval_closed(5.0);
    let asym = (0.5..0.502).contains(&far.vg) && far.vg > 0.5 && far.vc > 0.5 && far.vc < 0.502;
    report(
        3,
        "V_C > V_G > 1/2, decreasing, asymptote at Γ=5",
        start,
        Duration::from_secs(10),
        ok && asym,
        format!("V_G(5)={:.6} V_C(5)={:.6}", far.vg, far.vc),
    );
}

#[test]
fn criterion_4_unit_efficiency_reduction() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for g in [0.25, 0.5, 1.0] {
        for alpha in [0.0, FRAC_PI_2] {
            let s = expand_output(&SourceParams::new(g, alpha, 8).unwrap()).unwrap();
            let lossless = correlations(&s).unwrap();
            let perfect = DetectionModel::perfect();
            worst = worst
                .max((g_q_eta(&s, perfect) - lossless.g_numerator).abs())
                .max((c_q_eta(&s, perfect) - lossless.c_q).abs());
        }
    }
    report(
        4,
        "lossy path at η=1 equals lossless",
        start,
        Duration::from_secs(30),
        worst < 1e-10,
        format!("max abs diff {worst:.1e}"),
    );
}

#[test]
fn criterion_5_figure_two_properties() {
    let start = Instant::now();
    let mut ok = true;
    let mut detail = String::new();
    for g in [0.25, 0.5, 0.75] {
        let reference = visibility_eta(g, DetectionModel::perfect(), 8).unwrap().v_g;
        let vc = |eta: f64| {
            visibility_eta(g, DetectionModel::new(eta).unwrap(), 8)
                .unwrap()
                .v_c
        };
        for eta in [0.1, 0.25, 0.5, 0.75, 1.0] {
            ok &= vc(eta) >= reference - 1e-9;
        }
        let (near, far) = (vc(0.1), vc(0.75));
        ok &= (near - reference).abs() < (far - reference).abs();
        detail += &format!("Γ={g}: V_G={reference:.4} V_C(.1)={near:.4} V_C(.75)={far:.4}; ");
    }
    report(
        5,
        "rate visibility beats traditional for every η, tends to it as η→0",
        start,
        Duration::from_secs(60),
        ok,
        detail.trim_end_matches("; ").to_string(),
    );
}

#[test]
fn criterion_6_two_path_loss_oracle() {
    let start = Instant::now();
    let (g, eta, n) = (0.5, 0.5, 8);
    let model = DetectionModel::new(eta).unwrap();
    let s0 = expand_output(&SourceParams::new(g, 0.0, n).unwrap()).unwrap();
    let s1 = expand_output(&SourceParams::new(g, FRAC_PI_2, n).unwrap()).unwrap();
    let gen0 = correlators_from_distribution(&lossy_outcome_distribution(&s0, model));
    let gen1 = correlators_from_distribution(&lossy_outcome_distribution(&s1, model));
    let dir0 = index_sums::indistinguishable(g, eta, n);
    let dir1 = index_sums::distinguishable(g, eta, n);
    let worst = [
        gen0.0 - dir0.0,
        gen0.1 - dir0.1,
        gen1.0 - dir1.0,
        gen1.1 - dir1.1,
    ]
    .into_iter()
    .map(f64::abs)
    .fold(0.0, f64::max);
    report(
        6,
        "generic convolution vs explicit index sums",
        start,
        Duration::from_secs(30),
        worst < 1e-10,
        format!("max abs diff {worst:.1e}"),
    );
}

#[test]
fn criterion_7_classical_bound() {
    let start = Instant::now();
    let runs = 1_000_000;
    let mut ok = true;
    let mut detail = String::new();
    for (i, law) in IntensityLaw::ALL.into_iter().enumerate() {
        let seed = 100 + 10 * i as u64;
        let a = ClassicalEnsemble::new(runs, 1.0, law, seed).unwrap();
        let b = ClassicalEnsemble::new(runs, 0.0, law, seed + 1).unwrap();
        let v = classical_visibility(&a, &b).unwrap();
        ok &= v.within_bound(0.5, 3.0);
        if law == IntensityLaw::FixedEqual {
            ok &= (v.v_g - 0.5).abs() <= 3.0 * v.v_g_stderr;
            ok &= (v.v_c - 0.5).abs() <= 3.0 * v.v_c_stderr;
        }
        detail += &format!(
            "{}: v_g={:.4}±{:.0e} v_c={:.4}±{:.0e}; ",
            law.name(),
            v.v_g,
            v.v_g_stderr,
            v.v_c,
            v.v_c_stderr
        );
    }
    report(
        7,
        "classical Monte Carlo visibilities ≤ 1/2 + 3σ",
        start,
        Duration::from_secs(30),
        ok,
        detail.trim_end_matches("; ").to_string(),
    );
}

#[test]
fn criterion_8_structural_properties() {
    let start = Instant::now();
    let mut ok = true;

    let s0 = expand_output(&SourceParams::new(1.0, 0.0, 50).unwrap()).unwrap();
    ok &= s0
        .terms()
        .iter()
        .all(|(o, _)| o.a % 2 == 0 && o.b % 2 == 0 && o.a_perp == 0 && o.b_perp == 0);

    let mut worst_pair = 0.0f64;
    for alpha in [0.0, FRAC_PI_4, FRAC_PI_2] {
        let g = 0.8;
        let s = expand_output(&SourceParams::new(g, alpha, 30).unwrap()).unwrap();
        for (n, w) in s.pair_weights().iter().enumerate() {
            let expected = g.tanh().powi(2 * n as i32) / g.cosh().powi(2);
            worst_pair = worst_pair.max((w - expected).abs());
        }
        worst_pair = worst_pair.max((s.norm_deficit() - tail_weight(g, 30)).abs());
    }
    ok &= worst_pair < 1e-12;

    let params = SourceParams::new(0.5, 0.0, 3).unwrap();
    let base = expand_output_with_phase(&params, 0.0).unwrap();
    let na = |s: &homrates_core::beamsplitter::ComplexState| {
        s.expectation(|o: &Occupation4| o.n_a() as f64)
    };
    let mut worst_phase = 0.0f64;
    for phi in [0.0, FRAC_PI_3, PI] {
        let s = expand_output_with_phase(&params, phi).unwrap();
        worst_phase = worst_phase.max((na(&s) - na(&base)).abs());
        for ((o1, z1), (o2, z2)) in s.terms.iter().zip(&base.terms) {
            assert_eq!(o1, o2);
            worst_phase = worst_phase.max((z1.norm_sqr() - z2.norm_sqr()).abs());
        }
    }
    ok &= worst_phase < 1e-12;
    report(
        8,
        "even α=0 output, thermal pair weights, phase-blind singles",
        start,
        Duration::from_secs(5),
        ok,
        format!("pair weight dev {worst_pair:.1e}, phase dev {worst_phase:.1e}"),
    );
}

#[test]
fn criterion_9_small_instance_brute_force() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for n_max in 0..=4 {
        for alpha in [0.0, FRAC_PI_4, FRAC_PI_2] {
            let params = SourceParams::new(0.7, alpha, n_max).unwrap();
            let (c, s) = params.mixing();
            let oracle = common::brute_force_output(0.7, c, s, n_max);
            let state = expand_output(&params).unwrap();
            for (mono, amp) in &oracle {
                worst = worst.max((state.amplitude(&Occupation4::from(*mono)) - amp).abs());
            }
            for &(o, amp) in state.terms() {
                worst = worst.max((amp - oracle.get(&o.counts()).copied().unwrap_or(0.0)).abs());
            }
        }
    }
    report(
        9,
        "optimized expansion equals exhaustive monomial expansion",
        start,
        Duration::from_secs(5),
        worst <= 1e-13,
        format!("max abs diff {worst:.1e}"),
    );
}
