//! One function per subcommand, each producing a [`Table`].

use std::f64::consts::FRAC_PI_2;

use homrates_core::beamsplitter::{expand_output, BsConvention};
use homrates_core::classical::{classical_visibility, ClassicalEnsemble, IntensityLaw};
use homrates_core::closed_form::eval_closed;
use homrates_core::correlations::{correlations, sweep, Truncation, VisibilityRecord};
use homrates_core::source::{choose_truncation, tail_weight, DEFAULT_TRUNCATION_CAP};
use homrates_core::validation::{run_validation, CheckOutcome, ValidationConfig};
use homrates_core::{DetectionModel, Error, SourceParams};
use rayon::prelude::*;

use crate::args::{Command, Method, NMax, RunConfig};
use crate::error::CliError;
use crate::output::{num, Plot, Series, Table, UNDEFINED};

/// Upper bound on classical visibilities.
pub const CLASSICAL_BOUND: f64 = 0.5;
/// Allowed excess over the bound, in standard errors.
pub const CLASSICAL_SIGMAS: f64 = 3.0;
/// Lossy-run truncation below Γ = 1 when `--nmax auto`.
pub const LOSSY_LOW_GAIN_NMAX: u32 = 8;

struct Resolved {
    n_max: u32,
    warning: Option<String>,
}

fn resolve_nmax(cfg: &RunConfig, gamma: f64) -> Result<Resolved, CliError> {
    let auto = match cfg.n_max {
        NMax::Fixed(n) => {
            return Ok(Resolved {
                n_max: n,
                warning: None,
            })
        }
        NMax::Auto if cfg.command == Command::Lossy && gamma < 1.0 => {
            return Ok(Resolved {
                n_max: LOSSY_LOW_GAIN_NMAX,
                warning: None,
            })
        }
        NMax::Auto => choose_truncation(gamma, cfg.tail),
    };
    match auto {
        Ok(n_max) => Ok(Resolved {
            n_max,
            warning: None,
        }),
        Err(Error::Capacity { .. }) => {
            let n_max = DEFAULT_TRUNCATION_CAP;
            Ok(Resolved {
                n_max,
                warning: Some(format!(
                    "gamma={gamma}: tail {:e} not reachable below n_max={n_max}; \
                     dropped pair weight {:.3e}",
                    cfg.tail,
                    tail_weight(gamma, n_max)
                )),
            })
        }
        Err(e) => Err(e.into()),
    }
}

fn base_meta(cfg: &RunConfig) -> Vec<String> {
    let echo: Vec<String> = cfg.echo.iter().map(|(k, v)| format!("{k}={v}")).collect();
    vec![
        format!("homrates {}", env!("CARGO_PKG_VERSION")),
        format!("command={} {}", cfg.command, echo.join(" ")),
    ]
}

fn truncation_meta(meta: &mut Vec<String>, gammas: &[f64], resolved: &[Resolved]) {
    let orders: Vec<String> = gammas
        .iter()
        .zip(resolved)
        .map(|(g, r)| format!("{g}:{}", r.n_max))
        .collect();
    meta.push(format!("n_max {}", orders.join(" ")));
    for w in resolved.iter().filter_map(|r| r.warning.as_ref()) {
        eprintln!("warning: {w}");
        meta.push(format!("warning: {w}"));
    }
}

fn resolve_all(cfg: &RunConfig) -> Result<Vec<Resolved>, CliError> {
    cfg.gammas.iter().map(|&g| resolve_nmax(cfg, g)).collect()
}

fn degrees_to_radians(deg: f64) -> f64 {
    if deg == 90.0 {
        FRAC_PI_2
    } else {
        deg.to_radians()
    }
}

fn record(gamma: f64, eta: f64, n_max: u32) -> Result<Option<VisibilityRecord>, CliError> {
    let model = DetectionModel::new(eta)?;
    let mut out = sweep(&[gamma], model, Truncation::Fixed(n_max));
    match out.pop().expect("one point in, one out") {
        Ok(r) => Ok(Some(r)),
        Err(Error::AtGamma { source, .. })
            if matches!(*source, Error::UndefinedVisibility { .. }) =>
        {
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

fn cell(x: Option<f64>) -> String {
    x.map_or_else(|| UNDEFINED.to_string(), num)
}

pub fn visibility(cfg: &RunConfig) -> Result<Table, CliError> {
    let mut meta = base_meta(cfg);
    let want_fock = cfg.method != Method::Closed;
    let fock: Vec<Option<VisibilityRecord>> = if want_fock {
        let resolved = resolve_all(cfg)?;
        truncation_meta(&mut meta, &cfg.gammas, &resolved);
        cfg.gammas
            .par_iter()
            .zip(&resolved)
            .map(|(&g, r)| record(g, 1.0, r.n_max))
            .collect::<Result<_, _>>()?
    } else {
        Vec::new()
    };

    let mut rows = Vec::new();
    let mut plot = Plot {
        title: "Lossless HOM visibility".into(),
        x_label: "gain".into(),
        y_label: "visibility".into(),
        series: Vec::new(),
    };
    let mut series = |name: &str, pts: Vec<(f64, f64)>| {
        plot.series.push(Series {
            name: name.into(),
            points: pts,
        })
    };
    if want_fock {
        series(
            "V_G fock",
            fock.iter().flatten().map(|r| (r.gamma, r.v_g)).collect(),
        );
        series(
            "V_C fock",
            fock.iter().flatten().map(|r| (r.gamma, r.v_c)).collect(),
        );
    }
    if cfg.method != Method::Fock {
        let cf: Vec<_> = cfg.gammas.iter().map(|&g| eval_closed(g)).collect();
        series("V_G closed", cf.iter().map(|c| (c.gamma, c.vg)).collect());
        series("V_C closed", cf.iter().map(|c| (c.gamma, c.vc)).collect());
    }

    for (i, &g) in cfg.gammas.iter().enumerate() {
        if want_fock {
            let row = match &fock[i] {
                Some(r) => vec![
                    num(g),
                    num(r.g_at_0),
                    num(r.g_at_pi2),
                    num(r.c_at_0),
                    num(r.c_at_pi2),
                    num(r.v_g),
                    num(r.v_c),
                ],
                // vacuum only: G_Q is 0/0, C_Q is zero
                None => vec![
                    num(g),
                    UNDEFINED.into(),
                    UNDEFINED.into(),
                    num(0.0),
                    num(0.0),
                    UNDEFINED.into(),
                    UNDEFINED.into(),
                ],
            };
            rows.push([row, vec!["fock".into()]].concat());
        }
        if cfg.method != Method::Fock {
            let c = eval_closed(g);
            rows.push(vec![
                num(g),
                num(c.g0),
                num(c.gpi2),
                num(c.c0),
                num(c.cpi2),
                num(c.vg),
                num(c.vc),
                "closed".into(),
            ]);
        }
    }
    Ok(Table {
        meta,
        header: vec![
            "gamma",
            "G_alpha0",
            "G_alphapi2",
            "C_alpha0",
            "C_alphapi2",
            "V_G",
            "V_C",
            "method",
        ],
        rows,
        plot: Some(plot),
    })
}

pub fn lossy(cfg: &RunConfig) -> Result<Table, CliError> {
    let mut meta = base_meta(cfg);
    let resolved = resolve_all(cfg)?;
    truncation_meta(&mut meta, &cfg.gammas, &resolved);
    let points: Vec<(f64, u32, f64)> = cfg
        .gammas
        .iter()
        .zip(&resolved)
        .flat_map(|(&g, r)| cfg.etas.iter().map(move |&e| (g, r.n_max, e)))
        .collect();
    let records: Vec<Option<VisibilityRecord>> = points
        .par_iter()
        .map(|&(g, n, e)| record(g, e, n))
        .collect::<Result<_, _>>()?;

    let mut plot = Plot {
        title: "Visibility with detection loss".into(),
        x_label: "gain".into(),
        y_label: "visibility".into(),
        series: Vec::new(),
    };
    for &eta in &cfg.etas {
        for (label, pick) in [("V_G", true), ("V_C", false)] {
            let pts = points
                .iter()
                .zip(&records)
                .filter(|((_, _, e), _)| *e == eta)
                .filter_map(|((g, _, _), r)| r.map(|r| (*g, if pick { r.v_g } else { r.v_c })))
                .collect();
            plot.series.push(Series {
                name: format!("{label} eta={eta}"),
                points: pts,
            });
        }
    }

    let rows = points
        .iter()
        .zip(&records)
        .map(|(&(g, _, e), r)| {
            vec![
                num(g),
                num(e),
                cell(r.map(|r| r.v_g)),
                cell(r.map(|r| r.v_c)),
            ]
        })
        .collect();
    Ok(Table {
        meta,
        header: vec!["gamma", "eta", "V_G_eta", "V_C_eta"],
        rows,
        plot: Some(plot),
    })
}

pub fn dip(cfg: &RunConfig) -> Result<Table, CliError> {
    let mut meta = base_meta(cfg);
    let resolved = resolve_all(cfg)?;
    truncation_meta(&mut meta, &cfg.gammas, &resolved);
    let points: Vec<(f64, u32, f64)> = cfg
        .gammas
        .iter()
        .zip(&resolved)
        .flat_map(|(&g, r)| cfg.alphas_deg.iter().map(move |&a| (g, r.n_max, a)))
        .collect();
    let values: Vec<(f64, f64)> = points
        .par_iter()
        .map(|&(g, n, deg)| -> Result<(f64, f64), CliError> {
            if g == 0.0 {
                return Ok((0.0, 0.0));
            }
            let state = expand_output(&SourceParams::new(g, degrees_to_radians(deg), n)?)?;
            let c = correlations(&state)?;
            Ok((c.g_q, c.c_q))
        })
        .collect::<Result<_, _>>()?;

    let mut plot = Plot {
        title: "Correlators versus distinguishability".into(),
        x_label: "alpha (degrees)".into(),
        y_label: "correlator".into(),
        series: Vec::new(),
    };
    for &gamma in &cfg.gammas {
        let sel = || {
            points
                .iter()
                .zip(&values)
                .filter(move |((g, _, _), _)| *g == gamma)
        };
        plot.series.push(Series {
            name: format!("G_Q gamma={gamma}"),
            points: sel().map(|((_, _, a), v)| (*a, v.0)).collect(),
        });
        plot.series.push(Series {
            name: format!("C_Q gamma={gamma}"),
            points: sel().map(|((_, _, a), v)| (*a, v.1)).collect(),
        });
    }

    let rows = points
        .iter()
        .zip(&values)
        .map(|(&(g, _, a), &(gq, cq))| vec![num(g), num(a), num(gq), num(cq)])
        .collect();
    Ok(Table {
        meta,
        header: vec!["gamma", "alpha_deg", "G_Q", "C_Q"],
        rows,
        plot: Some(plot),
    })
}

pub fn classical(cfg: &RunConfig) -> Result<(Table, bool), CliError> {
    let mut meta = base_meta(cfg);
    meta.push(format!(
        "bound {CLASSICAL_BOUND} with {CLASSICAL_SIGMAS} standard errors; orthogonal seed = seed + 1"
    ));
    let mut rows = Vec::new();
    let mut all_pass = true;
    for law in IntensityLaw::ALL {
        let a = ClassicalEnsemble::new(cfg.runs, 1.0, law, cfg.seed)?;
        let b = ClassicalEnsemble::new(cfg.runs, 0.0, law, cfg.seed.wrapping_add(1))?;
        let v = classical_visibility(&a, &b)?;
        let pass = v.within_bound(CLASSICAL_BOUND, CLASSICAL_SIGMAS);
        all_pass &= pass;
        rows.push(vec![
            law.name().to_string(),
            cfg.runs.to_string(),
            cfg.seed.to_string(),
            num(v.v_g),
            num(v.v_g_stderr),
            num(v.v_c),
            num(v.v_c_stderr),
            if pass { "pass" } else { "fail" }.to_string(),
        ]);
    }
    let table = Table {
        meta,
        header: vec![
            "intensity_law",
            "runs",
            "seed",
            "v_g",
            "v_g_stderr",
            "v_c",
            "v_c_stderr",
            "bound",
        ],
        rows,
        plot: None,
    };
    Ok((table, all_pass))
}

pub fn validate(cfg: &RunConfig) -> Vec<CheckOutcome> {
    let convention = if cfg.perturb_sign {
        BsConvention::perturbed()
    } else {
        BsConvention::STANDARD
    };
    run_validation(&ValidationConfig {
        gammas: cfg.gammas.clone(),
        tail: cfg.tail,
        runs: cfg.runs,
        seed: cfg.seed,
        convention,
    })
}

pub fn validation_table(cfg: &RunConfig, outcomes: &[CheckOutcome]) -> Table {
    Table {
        meta: base_meta(cfg),
        header: vec!["check", "result", "detail"],
        rows: outcomes
            .iter()
            .map(|c| {
                vec![
                    c.name.clone(),
                    if c.passed { "PASS" } else { "FAIL" }.into(),
                    c.detail.clone(),
                ]
            })
            .collect(),
        plot: None,
    }
}

pub fn render_report(outcomes: &[CheckOutcome]) -> String {
    let width = outcomes.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for c in outcomes {
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!("{verdict}  {:width$}  {}\n", c.name, c.detail));
    }
    let failed = outcomes.iter().filter(|c| !c.passed).count();
    out.push_str(&format!("{} checks, {failed} failed\n", outcomes.len()));
    out
}
