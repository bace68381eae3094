// Copyright 2026 nhbath Contributors
// SPDX-License-Identifier: Apache-2.0

//! Single-excitation master equation on a short chain.
//!
//! Basis: `0 = |e,0>`, `n = |g,1_n>` for `n = 1..=N`, `N+1 = |g,0>`. Photon
//! loss `a_n` maps `|g,1_n>` to `|g,0>`, so
//!
//! ```text
//! d rho/dt = -i [H, rho] - gamma (P rho + rho P) + 2 gamma (sum_n rho_nn) |g,0><g,0|
//! ```
//!
//! with `P` the projector on the photon sites.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_grid, empty_series, integrate_on_grid, TimeSeries};
use crate::error::{Error, Result};
use crate::params::ModelParams;

/// Largest chain the dense density matrix is built for.
pub const MAX_LINDBLAD_SITES: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityCheck {
    pub trace: f64,
    /// `max |rho - rho^dagger|`.
    pub hermiticity_error: f64,
    pub min_eigenvalue: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LindbladSeries {
    /// `p_s = rho_ee`, `loss_accum = <g,0|rho|g,0>`; no amplitude.
    pub series: TimeSeries,
    pub checks: Vec<DensityCheck>,
}

fn hamiltonian(params: &ModelParams, n: usize) -> DMatrix<Complex64> {
    let dim = n + 2;
    let mut h = DMatrix::<Complex64>::zeros(dim, dim);
    h[(0, 0)] = params.delta_omega0().into();
    h[(0, 1)] = params.g0().into();
    h[(1, 0)] = params.g0().into();
    for site in 1..n {
        h[(site, site + 1)] = (-params.j()).into();
        h[(site + 1, site)] = (-params.j()).into();
    }
    h
}

fn unpack(y: &DVector<f64>, dim: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(dim, dim, |r, c| {
        let k = 2 * (r * dim + c);
        Complex64::new(y[k], y[k + 1])
    })
}

pub fn evolve_lindblad(
    params: &ModelParams,
    n_sites: usize,
    t_grid: &[f64],
    rtol: f64,
    atol: f64,
) -> Result<LindbladSeries> {
    if n_sites > MAX_LINDBLAD_SITES {
        return Err(Error::DimensionTooLarge {
            n_sites,
            max: MAX_LINDBLAD_SITES,
        });
    }
    if n_sites < 2 {
        return Err(Error::invalid(
            "nsites",
            format!("need at least 2 sites, got {n_sites}"),
        ));
    }
    check_grid(t_grid, None)?;
    let dim = n_sites + 2;
    let ground = dim - 1;
    let gamma = params.gamma();
    let h = hamiltonian(params, n_sites);
    let minus_i = Complex64::new(0.0, -1.0);

    let rhs = |_t: f64, y: &DVector<f64>, dy: &mut DVector<f64>| {
        let rho = unpack(y, dim);
        let mut d = (&h * &rho - &rho * &h) * minus_i;
        let mut fed = 0.0;
        for site in 1..=n_sites {
            fed += rho[(site, site)].re;
            for k in 0..dim {
                d[(site, k)] -= gamma * rho[(site, k)];
                d[(k, site)] -= gamma * rho[(k, site)];
            }
        }
        d[(ground, ground)] += 2.0 * gamma * fed;
        for r in 0..dim {
            for c in 0..dim {
                let k = 2 * (r * dim + c);
                dy[k] = d[(r, c)].re;
                dy[k + 1] = d[(r, c)].im;
            }
        }
    };

    let mut y0 = DVector::zeros(2 * dim * dim);
    y0[0] = 1.0;
    let states = integrate_on_grid(&rhs, y0, t_grid, rtol, atol)?;

    let mut series = empty_series(t_grid, false);
    let mut checks = Vec::with_capacity(states.len());
    for y in &states {
        let rho = unpack(y, dim);
        let photons: f64 = (1..=n_sites).map(|s| rho[(s, s)].re).sum();
        series.p_s.push(rho[(0, 0)].re);
        series.b_norm.push(photons);
        series.loss_accum.push(rho[(ground, ground)].re);

        let adjoint = rho.adjoint();
        let hermiticity_error = (&rho - &adjoint)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        let hermitian = (&rho + &adjoint) * Complex64::new(0.5, 0.0);
        let min_eigenvalue = hermitian
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        checks.push(DensityCheck {
            trace: rho.trace().re,
            hermiticity_error,
            min_eigenvalue,
        });
    }
    Ok(LindbladSeries { series, checks })
}
