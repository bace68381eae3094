// Copyright 2026 nhbath Contributors
// SPDX-License-Identifier: Apache-2.0

//! Direct time integration of the emitter + lattice model.
//!
//! Three independent formulations of the same single-excitation dynamics:
//!
//! * [`evolve_lattice`]: the real-space amplitudes on a truncated chain,
//! * [`evolve_momentum`]: the Friedrichs-Lee form over a discretised band,
//! * [`evolve_lindblad`]: the full master equation, including the quantum
//!   jumps into the ground state, on a short chain.
//!
//! [`siegert_profile`] gives the eigenvector belonging to a pole.

mod lindblad;
mod siegert;

use nalgebra::DVector;
use num_complex::Complex64;
use ode_solvers::{Dop853, OutputType, System};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ModelParams;

pub use lindblad::{evolve_lindblad, DensityCheck, LindbladSeries, MAX_LINDBLAD_SITES};
pub use siegert::{siegert_profile, SiegertProfile};

/// Sites over which the absorbing boundary ramps up its extra loss.
pub const ABSORBING_RAMP_SITES: usize = 20;

/// Peak extra loss (units of `J`) at the end of the absorbing ramp.
pub const ABSORBING_RAMP_HEIGHT: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Boundary {
    /// Amplitudes vanish beyond the last site.
    HardWall,
    /// Extra loss ramps linearly up over the last sites.
    Absorbing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeConfig {
    pub n_sites: usize,
    pub t_max: f64,
    pub rtol: f64,
    pub atol: f64,
    pub boundary: Boundary,
    /// Extra sites beyond the light cone `2 J t_max` a hard wall must keep.
    pub margin: f64,
}

impl LatticeConfig {
    pub const DEFAULT_MARGIN: f64 = 50.0;

    /// Hard-wall chain of `ceil(2 J t_max) + 50` sites.
    pub fn for_time(params: &ModelParams, t_max: f64) -> LatticeConfig {
        let cone = (2.0 * params.j() * t_max).max(0.0).ceil() as usize;
        LatticeConfig {
            n_sites: cone + Self::DEFAULT_MARGIN as usize,
            t_max,
            rtol: 1e-10,
            atol: 1e-12,
            boundary: Boundary::HardWall,
            margin: Self::DEFAULT_MARGIN,
        }
    }

    pub fn with_sites(mut self, n_sites: usize) -> Self {
        self.n_sites = n_sites;
        self
    }

    pub fn with_tolerances(mut self, rtol: f64, atol: f64) -> Self {
        self.rtol = rtol;
        self.atol = atol;
        self
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn with_margin(mut self, margin: f64) -> Self {
        self.margin = margin;
        self
    }

    pub fn validate(&self, params: &ModelParams) -> Result<()> {
        if self.n_sites < 2 {
            return Err(Error::invalid(
                "nsites",
                format!("need at least 2 sites, got {}", self.n_sites),
            ));
        }
        if !(self.t_max >= 0.0 && self.t_max.is_finite()) {
            return Err(Error::invalid(
                "tmax",
                format!("must be finite and >= 0, got {}", self.t_max),
            ));
        }
        if !(self.rtol > 0.0 && self.atol > 0.0) {
            return Err(Error::invalid("tolerance", "rtol and atol must be > 0"));
        }
        if self.boundary == Boundary::HardWall {
            let required = 2.0 * params.j() * self.t_max + self.margin;
            if (self.n_sites as f64) < required {
                return Err(Error::ReflectionRisk {
                    n_sites: self.n_sites,
                    t_max: self.t_max,
                    required,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub t: Vec<f64>,
    /// Emitter amplitude; absent for density-matrix evolution.
    pub c_a: Option<Vec<Complex64>>,
    /// Survival probability `|c_a|^2` (or `rho_ee`).
    pub p_s: Vec<f64>,
    /// Photon-sector norm.
    pub b_norm: Vec<f64>,
    /// Probability lost to the ground state.
    pub loss_accum: Vec<f64>,
}

impl TimeSeries {
    /// `p_s + b_norm + loss_accum - 1` at every sample.
    pub fn bookkeeping_error(&self) -> Vec<f64> {
        (0..self.t.len())
            .map(|i| self.p_s[i] + self.b_norm[i] + self.loss_accum[i] - 1.0)
            .collect()
    }
}

fn check_grid(t_grid: &[f64], t_max: Option<f64>) -> Result<()> {
    let mut prev = 0.0;
    for &t in t_grid {
        if !(t.is_finite() && t >= prev) {
            return Err(Error::invalid(
                "t_grid",
                "times must be finite, >= 0 and non-decreasing",
            ));
        }
        prev = t;
    }
    if let (Some(limit), Some(&last)) = (t_max, t_grid.last()) {
        if last > limit * (1.0 + 1e-12) {
            return Err(Error::invalid(
                "t_grid",
                format!("last time {last} exceeds t_max = {limit}"),
            ));
        }
    }
    Ok(())
}

/// Integrates `sys` from `t = 0` and returns the state at each grid time,
/// restarting the integrator on every grid interval so samples are exact
/// step endpoints.
pub(crate) fn integrate_on_grid<S>(
    sys: &S,
    y0: DVector<f64>,
    t_grid: &[f64],
    rtol: f64,
    atol: f64,
) -> Result<Vec<DVector<f64>>>
where
    S: Fn(f64, &DVector<f64>, &mut DVector<f64>),
{
    struct Rhs<'a, S>(&'a S);
    impl<S> System<f64, DVector<f64>> for Rhs<'_, S>
    where
        S: Fn(f64, &DVector<f64>, &mut DVector<f64>),
    {
        fn system(&self, x: f64, y: &DVector<f64>, dy: &mut DVector<f64>) {
            (self.0)(x, y, dy)
        }
    }

    let mut out = Vec::with_capacity(t_grid.len());
    let mut t = 0.0;
    let mut y = y0;
    for &target in t_grid {
        if target > t {
            let mut solver = Dop853::from_param(
                Rhs(sys),
                t,
                target,
                target - t,
                y.clone(),
                rtol,
                atol,
                0.9,
                0.0,
                0.333,
                6.0,
                target - t,
                0.0,
                1_000_000,
                1000,
                OutputType::Sparse,
            );
            solver
                .integrate()
                .map_err(|e| Error::ToleranceNotMet(e.to_string()))?;
            y =
                solver.y_out().last().cloned().ok_or_else(|| {
                    Error::ToleranceNotMet("integrator produced no output".into())
                })?;
            t = target;
        }
        out.push(y.clone());
    }
    Ok(out)
}

#[inline]
fn get(y: &DVector<f64>, i: usize) -> Complex64 {
    Complex64::new(y[2 * i], y[2 * i + 1])
}

#[inline]
fn set(dy: &mut DVector<f64>, i: usize, v: Complex64) {
    dy[2 * i] = v.re;
    dy[2 * i + 1] = v.im;
}

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Site-resolved loss rates `gamma_n`, `n = 1..=n_sites`.
fn site_losses(params: &ModelParams, config: &LatticeConfig) -> Vec<f64> {
    let n = config.n_sites;
    let mut losses = vec![params.gamma(); n];
    if config.boundary == Boundary::Absorbing {
        let ramp = ABSORBING_RAMP_SITES.min(n);
        for m in 0..ramp {
            let frac = (m + 1) as f64 / ramp as f64;
            losses[n - ramp + m] += ABSORBING_RAMP_HEIGHT * params.j() * frac;
        }
    }
    losses
}

/// Real-space amplitudes `c_a`, `b_1..b_N` from `c_a(0) = 1`:
///
/// ```text
/// i dc_a/dt = dw c_a + g0 b_1
/// i db_1/dt = g0 c_a - J b_2 - i gamma b_1
/// i db_n/dt = -J (b_{n+1} + b_{n-1}) - i gamma b_n
/// ```
pub fn evolve_lattice(
    params: &ModelParams,
    config: &LatticeConfig,
    t_grid: &[f64],
) -> Result<TimeSeries> {
    config.validate(params)?;
    check_grid(t_grid, Some(config.t_max))?;
    let n = config.n_sites;
    let (g0, j, dw) = (params.g0(), params.j(), params.delta_omega0());
    let losses = site_losses(params, config);
    // layout: [c_a, b_1..b_n] interleaved re/im, then accumulated loss
    let dim = 2 * (n + 1) + 1;
    let rhs = |_t: f64, y: &DVector<f64>, dy: &mut DVector<f64>| {
        let c = get(y, 0);
        let b1 = get(y, 1);
        set(dy, 0, -I * (dw * c + g0 * b1));
        let mut lost = 0.0;
        for site in 1..=n {
            let b = get(y, site);
            let left = if site == 1 {
                Complex64::new(0.0, 0.0)
            } else {
                get(y, site - 1)
            };
            let right = if site == n {
                Complex64::new(0.0, 0.0)
            } else {
                get(y, site + 1)
            };
            let gamma_n = losses[site - 1];
            let drive = if site == 1 { g0 * c } else { -j * left };
            set(dy, site, -I * (drive - j * right) - gamma_n * b);
            lost += 2.0 * gamma_n * b.norm_sqr();
        }
        dy[dim - 1] = lost;
    };
    let mut y0 = DVector::zeros(dim);
    y0[0] = 1.0;
    let states = integrate_on_grid(&rhs, y0, t_grid, config.rtol, config.atol)?;

    let mut series = empty_series(t_grid, true);
    for y in &states {
        let c = get(y, 0);
        let b_norm: f64 = (1..=n).map(|site| get(y, site).norm_sqr()).sum();
        push_sample(&mut series, c, b_norm, y[dim - 1]);
    }
    Ok(series)
}

/// Friedrichs-Lee form on the midpoint grid `k_m = (m + 1/2) pi / M`:
///
/// ```text
/// i dc_a/dt = dw c_a + sum_m dk g(k_m) c_m,   g(k) = sqrt(2/pi) g0 sin k
/// i dc_m/dt = omega(k_m) c_m + g(k_m) c_a,    omega(k) = -2J cos k - i gamma
/// ```
pub fn evolve_momentum(
    params: &ModelParams,
    n_modes: usize,
    t_grid: &[f64],
    rtol: f64,
    atol: f64,
) -> Result<TimeSeries> {
    if n_modes < 64 {
        return Err(Error::invalid(
            "nmodes",
            format!("need at least 64 modes, got {n_modes}"),
        ));
    }
    check_grid(t_grid, None)?;
    let (g0, j, gamma, dw) = (
        params.g0(),
        params.j(),
        params.gamma(),
        params.delta_omega0(),
    );
    let dk = std::f64::consts::PI / n_modes as f64;
    let ks: Vec<f64> = (0..n_modes).map(|m| (m as f64 + 0.5) * dk).collect();
    let couplings: Vec<f64> = ks
        .iter()
        .map(|k| (2.0 / std::f64::consts::PI).sqrt() * g0 * k.sin())
        .collect();
    let energies: Vec<f64> = ks.iter().map(|k| -2.0 * j * k.cos()).collect();
    let dim = 2 * (n_modes + 1) + 1;
    let rhs = |_t: f64, y: &DVector<f64>, dy: &mut DVector<f64>| {
        let c = get(y, 0);
        let mut field = Complex64::new(0.0, 0.0);
        let mut photons = 0.0;
        for m in 0..n_modes {
            let cm = get(y, m + 1);
            field += couplings[m] * cm;
            photons += cm.norm_sqr();
            set(
                dy,
                m + 1,
                -I * (energies[m] * cm + couplings[m] * c) - gamma * cm,
            );
        }
        set(dy, 0, -I * (dw * c + dk * field));
        dy[dim - 1] = 2.0 * gamma * dk * photons;
    };
    let mut y0 = DVector::zeros(dim);
    y0[0] = 1.0;
    let states = integrate_on_grid(&rhs, y0, t_grid, rtol, atol)?;

    let mut series = empty_series(t_grid, true);
    for y in &states {
        let b_norm: f64 = dk * (1..=n_modes).map(|m| get(y, m).norm_sqr()).sum::<f64>();
        push_sample(&mut series, get(y, 0), b_norm, y[dim - 1]);
    }
    Ok(series)
}

fn empty_series(t_grid: &[f64], with_amplitude: bool) -> TimeSeries {
    TimeSeries {
        t: t_grid.to_vec(),
        c_a: with_amplitude.then(|| Vec::with_capacity(t_grid.len())),
        p_s: Vec::with_capacity(t_grid.len()),
        b_norm: Vec::with_capacity(t_grid.len()),
        loss_accum: Vec::with_capacity(t_grid.len()),
    }
}

fn push_sample(series: &mut TimeSeries, c: Complex64, b_norm: f64, lost: f64) {
    if let Some(c_a) = series.c_a.as_mut() {
        c_a.push(c);
    }
    series.p_s.push(c.norm_sqr());
    series.b_norm.push(b_norm);
    series.loss_accum.push(lost);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(t_max: f64, n: usize) -> Vec<f64> {
        (0..=n).map(|i| t_max * i as f64 / n as f64).collect()
    }

    #[test]
    fn decoupled_emitter_rotates_freely() {
        let p = ModelParams::new(1e-300, 1.0, 0.2, 0.7).unwrap();
        let cfg = LatticeConfig::for_time(&p, 5.0);
        let s = evolve_lattice(&p, &cfg, &grid(5.0, 10)).unwrap();
        for (t, c) in s.t.iter().zip(s.c_a.unwrap()) {
            assert!((c - Complex64::new(0.0, -0.7 * t).exp()).norm() < 1e-9);
        }
        assert!(s.p_s.iter().all(|p| (p - 1.0).abs() < 1e-9));
    }

    #[test]
    fn zeno_onset() {
        let p = ModelParams::resonant(0.6, 0.0).unwrap();
        let cfg = LatticeConfig::for_time(&p, 0.01).with_tolerances(1e-13, 1e-15);
        let ts = [0.001, 0.002, 0.005, 0.01];
        let s = evolve_lattice(&p, &cfg, &ts).unwrap();
        for (t, ps) in ts.iter().zip(&s.p_s) {
            let quad = (0.6 * t) * (0.6 * t);
            assert!(((1.0 - ps) / quad - 1.0).abs() < 0.02);
        }
    }

    #[test]
    fn probability_bookkeeping() {
        let p = ModelParams::new(1.2, 1.0, 0.4, 0.3).unwrap();
        let cfg = LatticeConfig::for_time(&p, 10.0);
        let s = evolve_lattice(&p, &cfg, &grid(10.0, 40)).unwrap();
        assert!(s.bookkeeping_error().iter().all(|e| e.abs() < 1e-8));
        assert!(s.loss_accum.windows(2).all(|w| w[1] >= w[0] - 1e-14));
    }

    #[test]
    fn hard_wall_needs_room() {
        let p = ModelParams::resonant(1.0, 0.1).unwrap();
        let cfg = LatticeConfig::for_time(&p, 20.0).with_sites(60);
        assert!(matches!(
            evolve_lattice(&p, &cfg, &[1.0]),
            Err(Error::ReflectionRisk { .. })
        ));
        // absorbing boundary is allowed to be short
        let cfg = cfg.with_boundary(Boundary::Absorbing);
        assert!(evolve_lattice(&p, &cfg, &[1.0]).is_ok());
    }

    #[test]
    fn momentum_route_tracks_lattice() {
        let p = ModelParams::resonant(1.2, 1.35).unwrap();
        let ts = grid(10.0, 20);
        let cfg = LatticeConfig::for_time(&p, 10.0);
        let a = evolve_lattice(&p, &cfg, &ts).unwrap().c_a.unwrap();
        let b = evolve_momentum(&p, 512, &ts, 1e-10, 1e-12)
            .unwrap()
            .c_a
            .unwrap();
        let dev = a
            .iter()
            .zip(&b)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        assert!(dev < 1e-4, "{dev}");
    }

    #[test]
    fn rejects_bad_grids() {
        let p = ModelParams::resonant(1.0, 0.1).unwrap();
        let cfg = LatticeConfig::for_time(&p, 2.0);
        assert!(evolve_lattice(&p, &cfg, &[1.0, 0.5]).is_err());
        assert!(evolve_lattice(&p, &cfg, &[3.0]).is_err());
        assert!(evolve_momentum(&p, 32, &[1.0], 1e-10, 1e-12).is_err());
    }
}
