// Copyright 2026 nhbath Contributors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;
use serde_json::json;

use nhbath_core::inversion::{
    asymptotic_model, survival_amplitude_spectral, DecayDecomposition, InversionOptions,
};
use nhbath_core::lattice::{evolve_lattice, evolve_lindblad, evolve_momentum, TimeSeries};
use nhbath_core::spectral::{
    coupling_regime, critical_gammas, detect_ep, find_poles, CriticalGammas, EpRecord,
};
use nhbath_core::sweep::{
    optimal_dissipation, phase_diagram, sweep_gamma, EventKind, PoleTrajectory,
};
use nhbath_core::{Error, Execution, ModelParams};

use crate::config::{axis, Format, Route, RunConfig};
use crate::error::CliError;
use crate::report::{Cell, Report, Table};

/// Cross-route agreement required by `verify` on `|c_a|`.
pub const ROUTE_TOLERANCE: f64 = 1e-4;
/// Master equation against amplitudes on the same short chain.
pub const LINDBLAD_TOLERANCE: f64 = 1e-8;

pub fn cx(z: Complex64) -> [Cell; 2] {
    [z.re.into(), z.im.into()]
}

fn name<T: std::fmt::Debug>(x: T) -> String {
    format!("{x:?}")
}

/// Critical rates and EP for a resonant emitter, `None` plus a warning when
/// detuned.
fn criticality(
    p: &ModelParams,
    warnings: &mut Vec<String>,
) -> Result<(Option<CriticalGammas>, Option<EpRecord>), CliError> {
    match critical_gammas(p) {
        Ok(c) => Ok((Some(c), detect_ep(p)?)),
        Err(e @ Error::DetunedCriticality { .. }) => {
            warnings.push(format!("{e}; critical rates omitted"));
            Ok((None, None))
        }
        Err(e) => Err(e.into()),
    }
}

pub fn poles(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = cfg.model()?;
    let set = find_poles(&p)?;
    let mut table = Table::new(&[
        "re_s",
        "im_s",
        "re_z",
        "im_z",
        "re_k",
        "im_k",
        "sheet",
        "kind",
        "on_boundary",
        "re_residue",
        "im_residue",
        "contributes",
    ]);
    for q in set.iter() {
        let mut row = Vec::with_capacity(12);
        row.extend(cx(q.s));
        row.extend(cx(q.z));
        row.extend(cx(q.k));
        row.push(name(q.sheet).into());
        row.push(name(q.kind).into());
        row.push(q.on_boundary.into());
        row.push(q.residue.map(|r| r.re).into());
        row.push(q.residue.map(|r| r.im).into());
        row.push(q.contributes.into());
        table.push(row);
    }

    let mut report = Report::new("poles", cfg, table, Format::Json);
    let (crit, ep) = criticality(&p, &mut report.warnings)?;
    report.result("poles", &set.poles);
    report.result("degenerate_quadratic", set.degenerate_quadratic);
    report.result("gamma_c1", crit.map(|c| c.gamma_c1));
    report.result("gamma_c2", crit.and_then(|c| c.gamma_c2));
    report.result("ep", ep);
    report.result("regime", coupling_regime(&p));
    if p.is_resonant() {
        report.result("asymptotic", asymptotic_model(&p)?);
    }
    Ok(report)
}

struct Curve {
    route: Route,
    c_a: Option<Vec<Complex64>>,
    p_s: Vec<f64>,
    norm: Vec<Option<f64>>,
}

impl Curve {
    fn from_series(route: Route, s: TimeSeries) -> Curve {
        let norm = s
            .p_s
            .iter()
            .zip(&s.b_norm)
            .map(|(a, b)| Some(a + b))
            .collect();
        Curve {
            route,
            c_a: s.c_a,
            p_s: s.p_s,
            norm,
        }
    }
}

fn max_gap<T: Copy>(a: &[T], b: &[T], d: impl Fn(T, T) -> f64) -> f64 {
    a.iter().zip(b).map(|(x, y)| d(*x, *y)).fold(0.0, f64::max)
}

fn spectral_decomposition(
    p: &ModelParams,
    ts: &[f64],
    report: &mut Report,
) -> Result<DecayDecomposition, CliError> {
    let opts = InversionOptions {
        execution: Execution::Parallel,
        ..InversionOptions::default()
    };
    let d = survival_amplitude_spectral(ts, p, &opts)?;
    if !d.converged() {
        report.warnings.push(format!(
            "branch-cut quadrature above tolerance (max error estimate {:e})",
            d.max_quadrature_error()
        ));
    }
    if d.tilted_contour {
        report
            .warnings
            .push("a second-sheet pole sits near the cut; integration rays were tilted".into());
    }
    Ok(d)
}

pub fn decay(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = cfg.model()?;
    let ts = cfg.time_grid();
    let routes = cfg.route.expand();

    let mut report = Report::new("decay", cfg, Table::default(), Format::Csv);
    let mut spectral = None;
    let mut curves = Vec::new();
    for &route in &routes {
        let curve = match route {
            Route::Spectral => {
                let d = spectral_decomposition(&p, &ts, &mut report)?;
                let c = Curve {
                    route,
                    c_a: Some(d.total.clone()),
                    p_s: d.survival_probability(),
                    norm: vec![None; ts.len()],
                };
                spectral = Some(d);
                c
            }
            Route::Lattice => {
                let s = evolve_lattice(&p, &cfg.lattice(&p, cfg.tmax), &ts)?;
                Curve::from_series(route, s)
            }
            Route::Momentum => {
                let s = evolve_momentum(&p, cfg.nmodes, &ts, cfg.rtol, cfg.atol)?;
                Curve::from_series(route, s)
            }
            Route::Lindblad => {
                let rho = evolve_lindblad(&p, cfg.lindblad_sites(), &ts, cfg.rtol, cfg.atol)?;
                Curve::from_series(route, rho.series)
            }
            Route::All => unreachable!("expanded above"),
        };
        curves.push(curve);
    }

    // component columns, only when the spectral route ran
    let mut columns: Vec<String> = ["t", "re_ca", "im_ca", "ps", "norm", "route"]
        .map(String::from)
        .to_vec();
    if let Some(d) = &spectral {
        let mut terms = Vec::new();
        for (i, term) in d.pole_terms.iter().enumerate() {
            let col = format!("pole_{}", i + 1);
            columns.push(format!("re_{col}"));
            columns.push(format!("im_{col}"));
            terms.push(json!({
                "column": col,
                "s": term.pole.s,
                "kind": term.pole.kind,
                "sheet": term.pole.sheet,
                "residue": term.residue,
            }));
        }
        if let Some(c) = &d.confluent {
            columns.extend(["re_confluent".into(), "im_confluent".into()]);
            report.diagnostic("confluent", json!({"s0": c.s0, "a": c.a, "b": c.b}));
        }
        columns.extend(["re_hankel1", "im_hankel1", "re_hankel2", "im_hankel2"].map(String::from));
        report.diagnostic("pole_terms", terms);
        report.diagnostic("census", d.census());
        report.diagnostic("max_quadrature_error", d.max_quadrature_error());
        report.diagnostic("quadrature_converged", d.converged());
    }
    let mut table = Table::new(&columns);
    for curve in &curves {
        for (i, &t) in ts.iter().enumerate() {
            let mut row: Vec<Cell> = vec![t.into()];
            match &curve.c_a {
                Some(c) => row.extend(cx(c[i])),
                None => row.extend([Cell::Empty, Cell::Empty]),
            }
            row.push(curve.p_s[i].into());
            row.push(curve.norm[i].into());
            row.push(curve.route.name().into());
            if let Some(d) = &spectral {
                let own = curve.route == Route::Spectral;
                let mut comps: Vec<Complex64> =
                    d.pole_terms.iter().map(|term| term.value(t)).collect();
                if let Some(c) = &d.confluent {
                    comps.push(c.value(t));
                }
                comps.push(d.hankel[i].h1);
                comps.push(d.hankel[i].h2);
                for z in comps {
                    if own {
                        row.extend(cx(z));
                    } else {
                        row.extend([Cell::Empty, Cell::Empty]);
                    }
                }
            }
            table.push(row);
        }
    }
    report.table = table;

    let mut pairs = Vec::new();
    for (i, a) in curves.iter().enumerate() {
        for b in &curves[i + 1..] {
            let dca = match (&a.c_a, &b.c_a) {
                (Some(x), Some(y)) => Some(max_gap(x, y, |u, v| (u - v).norm())),
                _ => None,
            };
            pairs.push(json!({
                "a": a.route.name(),
                "b": b.route.name(),
                "max_abs_dca": dca,
                "max_abs_dps": max_gap(&a.p_s, &b.p_s, |u, v| (u - v).abs()),
            }));
        }
    }
    if !pairs.is_empty() {
        report.diagnostic("pairwise_max_deviation", pairs);
    }
    for curve in &curves {
        if curve.route != Route::Spectral && p.gamma() == 0.0 {
            let drift = curve
                .norm
                .iter()
                .flatten()
                .map(|n| (n - 1.0).abs())
                .fold(0.0, f64::max);
            report.diagnostic(&format!("{}_norm_drift", curve.route.name()), drift);
        }
    }
    Ok(report)
}

pub fn trajectory_rows(panel: Option<f64>, tr: &PoleTrajectory, table: &mut Table) {
    for sample in &tr.samples {
        for tp in &sample.poles {
            let q = tp.pole;
            let mut row: Vec<Cell> = panel.map(Cell::Num).into_iter().collect();
            row.push(sample.gamma.into());
            row.push(tp.label.into());
            row.extend(cx(q.s));
            row.extend(cx(q.k));
            row.push(name(q.sheet).into());
            row.push(name(q.kind).into());
            table.push(row);
        }
    }
}

const TRAJECTORY_COLUMNS: [&str; 8] = [
    "gamma", "label", "re_s", "im_s", "re_k", "im_k", "sheet", "kind",
];

pub fn trajectory_columns(with_panel: bool) -> Vec<&'static str> {
    let mut cols = Vec::new();
    if with_panel {
        cols.push("g0");
    }
    cols.extend(TRAJECTORY_COLUMNS);
    cols
}

pub fn event_json(tr: &PoleTrajectory) -> serde_json::Value {
    tr.events
        .iter()
        .map(|e| match e.kind {
            EventKind::SheetCrossing { label, from, to } => json!({
                "type": "sheet_crossing",
                "gamma": e.gamma,
                "s": e.s,
                "label": label,
                "from": from,
                "to": to,
            }),
            EventKind::Coalescence { sheet, kind } => json!({
                "type": "coalescence",
                "gamma": e.gamma,
                "s": e.s,
                "sheet": sheet,
                "kind": kind,
            }),
        })
        .collect()
}

pub fn sweep(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = cfg.coupling()?;
    let tr = sweep_gamma(p.g0(), p.j(), cfg.gamma_range(p.g0())?, p.delta_omega0())?;
    let mut table = Table::new(&trajectory_columns(false));
    trajectory_rows(None, &tr, &mut table);
    let mut report = Report::new("sweep", cfg, table, Format::Csv);
    let (crit, _) = criticality(&p, &mut report.warnings)?;
    report.result("events", event_json(&tr));
    report.result("gamma_c1", crit.map(|c| c.gamma_c1));
    report.result("gamma_c2", crit.and_then(|c| c.gamma_c2));
    report.result("regime", coupling_regime(&p));
    Ok(report)
}

pub fn phase(cfg: &RunConfig) -> Result<Report, CliError> {
    if cfg.detuning != 0.0 {
        return Err(Error::DetunedCriticality {
            detuning: cfg.detuning,
        }
        .into());
    }
    let g0s = axis(cfg.g0_lo, cfg.g0_hi, cfg.ng0);
    let gamma_hi = cfg.gamma_hi_for(cfg.g0_hi);
    let gammas = axis(cfg.gamma_lo, gamma_hi, cfg.ngamma);
    let d = phase_diagram(&g0s, &gammas, cfg.j, Execution::Parallel)?;
    let mut table = Table::new(&[
        "g0",
        "gamma",
        "regime",
        "regime_boundary",
        "n_bound",
        "n_resonant",
        "n_antiresonant",
        "channel",
        "rate",
    ]);
    for c in &d.cells {
        table.push(vec![
            c.g0.into(),
            c.gamma.into(),
            name(c.regime).into(),
            c.regime_boundary.into(),
            c.n_bound.into(),
            c.n_resonant.into(),
            c.n_antiresonant.into(),
            name(c.dominant_channel).into(),
            c.rate.into(),
        ]);
    }
    let mut report = Report::new("phase-diagram", cfg, table, Format::Csv);
    report.result("shape", [g0s.len(), gammas.len()]);
    report.result("gamma_hi", gamma_hi);
    Ok(report)
}

pub fn optimal(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = cfg.coupling()?;
    if !p.is_resonant() {
        return Err(Error::DetunedCriticality {
            detuning: p.delta_omega0(),
        }
        .into());
    }
    let range = (cfg.gamma_lo, cfg.gamma_hi_for(p.g0()));
    let o = optimal_dissipation(p.g0(), p.j(), range, cfg.resolution)?;
    let crit = critical_gammas(&p)?;
    let mut table = Table::new(&["gamma_star", "rate_star", "expected_gamma", "discrepancy"]);
    table.push(vec![
        o.gamma_star.into(),
        o.rate_star.into(),
        o.expected_gamma.into(),
        o.discrepancy.into(),
    ]);
    let mut report = Report::new("optimal", cfg, table, Format::Json);
    report.result("optimum", o);
    report.result("gamma_c1", crit.gamma_c1);
    report.result("gamma_c2", crit.gamma_c2);
    report.result("regime", coupling_regime(&p));
    report.result("search_range", range);
    if o.discrepancy {
        report.warnings.push(format!(
            "optimum {} differs from the predicted critical rate {} by more than {}",
            o.gamma_star, o.expected_gamma, cfg.resolution
        ));
    }
    Ok(report)
}

/// Cross-checks the routes for one parameter set. The report is returned
/// even when a check fails; the caller maps the failure to the exit code.
pub fn verify(cfg: &RunConfig) -> Result<(Report, Option<String>), CliError> {
    let p = cfg.model()?;
    let ts = cfg.time_grid();
    let mut report = Report::new("verify", cfg, Table::default(), Format::Json);

    let spectral = spectral_decomposition(&p, &ts, &mut report)?;
    let lattice = evolve_lattice(&p, &cfg.lattice(&p, cfg.tmax), &ts)?
        .c_a
        .expect("lattice amplitudes");
    let momentum = evolve_momentum(&p, cfg.nmodes, &ts, cfg.rtol, cfg.atol)?
        .c_a
        .expect("momentum amplitudes");

    // short open chain, where the master equation is exact
    let n = 6;
    let short: Vec<f64> = axis(0.0, 2.0, 41);
    let rho = evolve_lindblad(&p, n, &short, 1e-12, 1e-14)?;
    let chain = cfg
        .lattice(&p, 2.0)
        .with_sites(n)
        .with_margin(0.0)
        .with_tolerances(1e-12, 1e-14);
    let amp = evolve_lattice(&p, &chain, &short)?;

    let d = |u: Complex64, v: Complex64| (u - v).norm();
    let checks = [
        (
            "spectral_vs_lattice",
            max_gap(&spectral.total, &lattice, d),
            ROUTE_TOLERANCE,
        ),
        (
            "momentum_vs_lattice",
            max_gap(&momentum, &lattice, d),
            ROUTE_TOLERANCE,
        ),
        (
            "lindblad_vs_amplitudes",
            max_gap(&rho.series.p_s, &amp.p_s, |u, v| (u - v).abs()),
            LINDBLAD_TOLERANCE,
        ),
    ];
    let mut table = Table::new(&["check", "value", "threshold", "pass"]);
    let mut failed = Vec::new();
    for (label, value, threshold) in checks {
        let pass = value < threshold;
        if !pass {
            failed.push(format!("{label} = {value:e} (limit {threshold:e})"));
        }
        table.push(vec![
            label.into(),
            value.into(),
            threshold.into(),
            pass.into(),
        ]);
    }
    report.table = table;
    report.diagnostic("census", spectral.census());
    report.diagnostic("quadrature_converged", spectral.converged());
    report.diagnostic("lindblad_sites", n);
    report.result("pass", failed.is_empty());
    let failure = (!failed.is_empty()).then(|| failed.join("; "));
    Ok((report, failure))
}
