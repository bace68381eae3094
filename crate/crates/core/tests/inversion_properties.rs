// Copyright 2026 nhbath Contributors
// SPDX-License-Identifier: Apache-2.0

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use nhbath_core::inversion::{hankel_contributions, survival_amplitude_spectral, InversionOptions};
use nhbath_core::spectral::StateKind;
use nhbath_core::{Execution, ModelParams};

const SETS: [(f64, f64); 9] = [
    (0.6, 0.05),
    (0.6, 0.5),
    (1.2, 1.1),
    (1.2, 1.35),
    (1.2, 2.0),
    (2.0, 2.0),
    (2.0, 3.7),
    (2.0, 4.5),
    (2.0, 3.464_101_615_137_754_6),
];

fn grid(t0: f64, t1: f64, n: usize) -> Vec<f64> {
    (0..=n)
        .map(|i| t0 + (t1 - t0) * i as f64 / n as f64)
        .collect()
}

/// Value at `t = 0` of a least-squares cubic through `(t, y)`.
fn extrapolate_to_zero(t: &[f64], y: &[f64]) -> f64 {
    let a = DMatrix::from_fn(t.len(), 4, |r, c| t[r].powi(c as i32));
    let b = DVector::from_column_slice(y);
    let coef = a.svd(true, true).solve(&b, 1e-14).unwrap();
    coef[0]
}

#[test]
fn amplitude_extrapolates_to_one_at_the_origin() {
    let ts = grid(0.01, 0.1, 30);
    for (g0, gamma) in SETS {
        let p = ModelParams::resonant(g0, gamma).unwrap();
        let d = survival_amplitude_spectral(&ts, &p, &InversionOptions::default()).unwrap();
        let re: Vec<f64> = d.total.iter().map(|c| c.re).collect();
        let im: Vec<f64> = d.total.iter().map(|c| c.im).collect();
        let c0 = Complex64::new(extrapolate_to_zero(&ts, &re), extrapolate_to_zero(&ts, &im));
        assert!((c0 - 1.0).norm() < 1e-3, "g0={g0} gamma={gamma}: {c0}");
    }
}

#[test]
fn hankel_tails_fall_as_three_halves_power() {
    let ts = grid(20.0, 60.0, 80);
    let lx: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let slope = |y: &[f64]| {
        let n = lx.len() as f64;
        let (mx, my) = (lx.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
        let sxy: f64 = lx.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
        let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
        sxy / sxx
    };
    for (g0, gamma) in SETS {
        let p = ModelParams::resonant(g0, gamma).unwrap();
        let opts = InversionOptions::default();
        let pairs: Vec<_> = ts
            .iter()
            .map(|&t| hankel_contributions(t, &p, &opts).unwrap())
            .collect();
        let l1: Vec<f64> = pairs.iter().map(|h| h.c1.norm().ln()).collect();
        let l2: Vec<f64> = pairs.iter().map(|h| h.c2.norm().ln()).collect();
        let (k1, k2) = (slope(&l1), slope(&l2));
        assert!((k1 + 1.5).abs() <= 0.1, "g0={g0} gamma={gamma}: {k1}");
        assert!((k2 + 1.5).abs() <= 0.1, "g0={g0} gamma={gamma}: {k2}");
    }
}

#[test]
fn anti_resonances_never_enter_the_sum() {
    for (g0, gamma, dw) in [(0.6, 0.05, 0.0), (0.8, 0.3, 0.0), (0.5, 0.2, 0.4)] {
        let p = ModelParams::new(g0, 1.0, gamma, dw).unwrap();
        let d = survival_amplitude_spectral(&[1.0], &p, &InversionOptions::default()).unwrap();
        let anti: Vec<_> = d
            .poles
            .iter()
            .filter(|q| q.kind == StateKind::AntiResonant)
            .collect();
        assert!(anti.iter().all(|q| !q.contributes));
        assert!(d
            .pole_terms
            .iter()
            .all(|t| t.pole.kind != StateKind::AntiResonant));
    }
    // the weak-coupling set has one
    let p = ModelParams::resonant(0.6, 0.05).unwrap();
    let d = survival_amplitude_spectral(&[1.0], &p, &InversionOptions::default()).unwrap();
    assert_eq!(d.poles.count(StateKind::AntiResonant), 1);
}

#[test]
fn confluent_branch_is_continuous_across_the_ep() {
    let gamma_ep = 2.0 * 3f64.sqrt();
    let ts = grid(0.01, 50.0, 100);
    let opts = InversionOptions::default();
    let at =
        survival_amplitude_spectral(&ts, &ModelParams::resonant(2.0, gamma_ep).unwrap(), &opts)
            .unwrap();
    assert!(at.census().confluent);
    for dg in [-1e-4, 1e-4] {
        let p = ModelParams::resonant(2.0, gamma_ep + dg).unwrap();
        let near = survival_amplitude_spectral(&ts, &p, &opts).unwrap();
        let jump = at
            .total
            .iter()
            .zip(&near.total)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(jump < 1e-3, "{dg}: {jump:e}");
    }
}

#[test]
fn execution_modes_agree_bitwise() {
    let ts = grid(0.01, 30.0, 64);
    let p = ModelParams::resonant(1.2, 1.1).unwrap();
    let seq = InversionOptions {
        execution: Execution::Sequential,
        ..InversionOptions::default()
    };
    let par = InversionOptions {
        execution: Execution::Parallel,
        ..InversionOptions::default()
    };
    let a = survival_amplitude_spectral(&ts, &p, &seq).unwrap();
    let b = survival_amplitude_spectral(&ts, &p, &par).unwrap();
    assert_eq!(a.total, b.total);
}
