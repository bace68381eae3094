// Copyright 2026 nhbath Contributors
// SPDX-License-Identifier: Apache-2.0

//! Loss-rate sweeps: pole trajectories, sheet crossings and coalescences,
//! the optimal loss rate and coupling/loss phase maps.

mod phase;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::spectral::{
    bloch_wavenumber, classify_state, find_poles, pole_polynomial, EpKind, Pole, SheetLabel,
    StateKind,
};

pub use phase::{
    optimal_dissipation, phase_diagram, regime_report, OptimalDissipation, PhaseCell, PhaseDiagram,
    RegimeReport,
};

/// Width (units of `J`) to which event locations are bisected.
pub const EVENT_RESOLUTION: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaRange {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl GammaRange {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(
                "n",
                format!("need at least 2 grid points, got {n}"),
            ));
        }
        if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
            return Err(Error::invalid(
                "gamma",
                format!("need 0 <= lo < hi, got [{lo}, {hi}]"),
            ));
        }
        Ok(GammaRange { lo, hi, n })
    }

    pub fn points(&self) -> Vec<f64> {
        let step = (self.hi - self.lo) / (self.n - 1) as f64;
        (0..self.n)
            .map(|i| {
                if i + 1 == self.n {
                    self.hi
                } else {
                    self.lo + step * i as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrackedPole {
    /// Identity carried along the sweep.
    pub label: usize,
    pub pole: Pole,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSample {
    pub gamma: f64,
    /// Sorted by label.
    pub poles: Vec<TrackedPole>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum EventKind {
    /// Pole `label` passes through the branch cut between the sheets.
    SheetCrossing {
        label: usize,
        from: StateKind,
        to: StateKind,
    },
    /// The two poles coalesce.
    Coalescence { sheet: SheetLabel, kind: EpKind },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepEvent {
    pub gamma: f64,
    pub s: Complex64,
    pub kind: EventKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoleTrajectory {
    pub params: ModelParams,
    pub gamma_grid: Vec<f64>,
    pub samples: Vec<SweepSample>,
    pub events: Vec<SweepEvent>,
}

impl PoleTrajectory {
    pub fn coalescences(&self) -> impl Iterator<Item = &SweepEvent> {
        self.events
            .iter()
            .filter(|e| matches!(e.kind, EventKind::Coalescence { .. }))
    }

    pub fn crossings(&self) -> impl Iterator<Item = &SweepEvent> {
        self.events
            .iter()
            .filter(|e| matches!(e.kind, EventKind::SheetCrossing { .. }))
    }

    /// Positions of pole `label` along the grid (absent where it does not exist).
    pub fn path(&self, label: usize) -> Vec<Option<Complex64>> {
        self.samples
            .iter()
            .map(|s| s.poles.iter().find(|p| p.label == label).map(|p| p.pole.s))
            .collect()
    }
}

fn poles_at(base: &ModelParams, gamma: f64) -> Result<Vec<Pole>> {
    Ok(find_poles(&base.with_gamma(gamma)?)?.poles)
}

/// Labels sorted on `Im(s)` then `Re(s)`.
fn fresh_labels(poles: Vec<Pole>) -> Vec<TrackedPole> {
    let mut poles = poles;
    poles.sort_by(|a, b| a.s.im.total_cmp(&b.s.im).then(a.s.re.total_cmp(&b.s.re)));
    poles
        .into_iter()
        .enumerate()
        .map(|(label, pole)| TrackedPole { label, pole })
        .collect()
}

/// Assigns labels of `prev` to `next` by minimal total displacement.
fn match_labels(prev: &[TrackedPole], next: Vec<Pole>) -> Vec<TrackedPole> {
    if prev.len() != next.len() || next.is_empty() {
        return fresh_labels(next);
    }
    if next.len() == 1 {
        return vec![TrackedPole {
            label: prev[0].label,
            pole: next[0],
        }];
    }
    let straight = (prev[0].pole.s - next[0].s).norm() + (prev[1].pole.s - next[1].s).norm();
    let swapped = (prev[0].pole.s - next[1].s).norm() + (prev[1].pole.s - next[0].s).norm();
    let (a, b) = if straight <= swapped { (0, 1) } else { (1, 0) };
    let mut out = vec![
        TrackedPole {
            label: prev[0].label,
            pole: next[a],
        },
        TrackedPole {
            label: prev[1].label,
            pole: next[b],
        },
    ];
    out.sort_by_key(|p| p.label);
    out
}

fn nearest(poles: &[Pole], s: Complex64) -> Option<Pole> {
    poles
        .iter()
        .min_by(|a, b| (a.s - s).norm().total_cmp(&(b.s - s).norm()))
        .copied()
}

/// Real discriminant of the resonant pole equation as a function of `gamma`.
fn discriminant(base: &ModelParams, gamma: f64) -> Result<f64> {
    let [a, b, c] = pole_polynomial(&base.with_gamma(gamma)?);
    Ok((b * b - 4.0 * a * c).re)
}

/// Bisects `[lo, hi]` on the sign of `f`, which differs at the ends.
fn bisect<F>(mut lo: f64, mut hi: f64, tol: f64, mut f: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let f_lo = f(lo)?;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid)?;
        if v == 0.0 {
            return Ok(mid);
        }
        if (v > 0.0) == (f_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn sign_change(a: f64, b: f64) -> bool {
    (a < 0.0 && b >= 0.0) || (a > 0.0 && b <= 0.0)
}

/// Bisects on the sign of `Im k` of one pole between two bracketing samples.
///
/// The pole is followed by its distance to the chord joining the bracket
/// ends, which stays unambiguous when both poles leave a common point.
fn bisect_crossing(
    base: &ModelParams,
    lo: (f64, Pole),
    hi: (f64, Pole),
    tol: f64,
) -> Result<(f64, Complex64)> {
    let (mut lo, mut hi) = (lo, hi);
    let lo_positive = lo.1.k.im > 0.0;
    while hi.0 - lo.0 > tol {
        let g = 0.5 * (lo.0 + hi.0);
        if g <= lo.0 || g >= hi.0 {
            break;
        }
        let w = (g - lo.0) / (hi.0 - lo.0);
        let predicted = lo.1.s + (hi.1.s - lo.1.s) * w;
        let pole = nearest(&poles_at(base, g)?, predicted)
            .ok_or_else(|| Error::ToleranceNotMet("pole lost during bisection".into()))?;
        if (pole.k.im > 0.0) == lo_positive {
            lo = (g, pole);
        } else {
            hi = (g, pole);
        }
    }
    let s = 0.5 * (lo.1.s + hi.1.s);
    Ok((0.5 * (lo.0 + hi.0), s))
}

/// Sheet changes of identically labelled poles between two samples.
fn crossings_between(
    base: &ModelParams,
    left: &[TrackedPole],
    g_left: f64,
    right: &[TrackedPole],
    g_right: f64,
    tol: f64,
) -> Result<Vec<SweepEvent>> {
    let mut events = Vec::new();
    for tracked in left {
        let Some(now) = right.iter().find(|p| p.label == tracked.label) else {
            continue;
        };
        if now.pole.sheet == tracked.pole.sheet {
            continue;
        }
        let (k_lo, k_hi) = (tracked.pole.k.im, now.pole.k.im);
        let (g_cross, s) = if !sign_change(k_lo, k_hi) {
            // an end point sits on the cut edge to rounding
            if k_lo.abs() <= k_hi.abs() {
                (g_left, tracked.pole.s)
            } else {
                (g_right, now.pole.s)
            }
        } else {
            bisect_crossing(base, (g_left, tracked.pole), (g_right, now.pole), tol)?
        };
        events.push(SweepEvent {
            gamma: g_cross,
            s,
            kind: EventKind::SheetCrossing {
                label: tracked.label,
                from: tracked.pole.kind,
                to: now.pole.kind,
            },
        });
    }
    Ok(events)
}

/// Tracks the poles of the pole equation along a loss-rate grid.
///
/// Identities follow nearest-neighbour continuity; sheet crossings (sign of
/// `Im k`) and coalescences (sign of the discriminant, zero detuning only)
/// are located by bisection to [`EVENT_RESOLUTION`]. Labels are re-sorted
/// on `Im(s)` then `Re(s)` after each coalescence, where identities are not
/// defined.
pub fn sweep_gamma(
    g0: f64,
    j: f64,
    range: GammaRange,
    delta_omega0: f64,
) -> Result<PoleTrajectory> {
    let range = GammaRange::new(range.lo, range.hi, range.n)?;
    let base = ModelParams::new(g0, j, range.lo, delta_omega0)?;
    let grid = range.points();
    let tol = EVENT_RESOLUTION * j;
    let track_coalescence = base.is_resonant();

    let mut samples: Vec<SweepSample> = Vec::with_capacity(grid.len());
    let mut events = Vec::new();
    for (i, &gamma) in grid.iter().enumerate() {
        let poles = poles_at(&base, gamma)?;
        if i == 0 {
            samples.push(SweepSample {
                gamma,
                poles: fresh_labels(poles),
            });
            continue;
        }
        let prev = &samples[i - 1];
        let g_prev = prev.gamma;

        let mut coalesced = None;
        if track_coalescence && poles.len() == 2 && prev.poles.len() == 2 {
            let (d0, d1) = (discriminant(&base, g_prev)?, discriminant(&base, gamma)?);
            if sign_change(d0, d1) {
                let g_ep = bisect(g_prev, gamma, tol, |g| discriminant(&base, g))?;
                let at = poles_at(&base, g_ep)?;
                let s = 0.5 * (at[0].s + at[1].s);
                let at_ep = base.with_gamma(g_ep)?;
                let class = classify_state(bloch_wavenumber(Complex64::new(0.0, 1.0) * s, &at_ep)?);
                let kind = match class.kind {
                    StateKind::Bound => EpKind::Physical,
                    _ => EpKind::Virtual,
                };
                events.push(SweepEvent {
                    gamma: g_ep,
                    s,
                    kind: EventKind::Coalescence {
                        sheet: class.kind.sheet(),
                        kind,
                    },
                });
                coalesced = Some(g_ep);
            }
        }

        let current = match coalesced {
            Some(g_ep) => {
                // labels are re-sorted just past the EP; crossings are searched
                // on each side of it
                let delta = (10.0 * tol)
                    .min(0.5 * (g_ep - g_prev))
                    .min(0.5 * (gamma - g_ep));
                let left = match_labels(&prev.poles, poles_at(&base, g_ep - delta)?);
                let right = fresh_labels(poles_at(&base, g_ep + delta)?);
                let current = match_labels(&right, poles);
                events.extend(crossings_between(
                    &base,
                    &prev.poles,
                    g_prev,
                    &left,
                    g_ep - delta,
                    tol,
                )?);
                events.extend(crossings_between(
                    &base,
                    &right,
                    g_ep + delta,
                    &current,
                    gamma,
                    tol,
                )?);
                current
            }
            None => {
                let current = match_labels(&prev.poles, poles);
                events.extend(crossings_between(
                    &base,
                    &prev.poles,
                    g_prev,
                    &current,
                    gamma,
                    tol,
                )?);
                current
            }
        };
        samples.push(SweepSample {
            gamma,
            poles: current,
        });
    }
    events.sort_by(|a, b| a.gamma.total_cmp(&b.gamma));
    Ok(PoleTrajectory {
        params: base,
        gamma_grid: grid,
        samples,
        events,
    })
}
