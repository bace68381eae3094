// Copyright 2026 nhbath Contributors
// SPDX-License-Identifier: Apache-2.0

//! Closed-form spectral quantities of the emitter amplitude.
//!
//! The Laplace transform of the excited-state amplitude is
//!
//! ```text
//! c_a(s) = 1 / (s + i dw + i Sigma(s)),
//! Sigma(s) = i sigma (w - R(w)),   w = s + gamma,   R(w)^2 = w^2 + 4 J^2
//! ```
//!
//! with `sigma = g0^2 / (2 J^2)`. On the first (physical) Riemann sheet the
//! root is taken as `R(w) = w sqrt(1 + 4 J^2 / w^2)` with the principal square
//! root, which places the cut on the segment `Re(s) = -gamma, |Im(s)| <= 2J`
//! and makes `Sigma -> 0` as `Re(s) -> +inf`. The second sheet flips the sign
//! of `R`.
//!
//! Poles of either sheet are the roots of one quadratic (see [`find_poles`]);
//! each root is attributed to a sheet through its complex Bloch wavenumber.

mod critical;
mod poles;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ModelParams;

pub use critical::{
    coupling_regime, critical_gammas, detect_ep, CouplingRegime, CriticalGammas, EpKind, EpRecord,
    RegimeClass,
};
pub use poles::{
    find_poles, in_hankel_strip, pole_polynomial, residue, solve_quadratic, Pole, PoleSet,
};

/// Half-width (in units of `J`) of the excluded band around the branch cut.
pub const CUT_EXCLUSION: f64 = 1e-12;

/// Tolerance on `Im(k)` below which a state sits on the continuum boundary.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// `|denominator|` (units of `J`) below which `s` is treated as a pole.
pub const POLE_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SheetLabel {
    FirstSheet,
    SecondSheet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StateKind {
    Bound,
    Resonant,
    AntiResonant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateClass {
    pub kind: StateKind,
    /// `Im(k)` within [`BOUNDARY_TOL`] of zero: the state sits on the
    /// continuum edge and is reported as bound.
    pub on_boundary: bool,
}

impl StateKind {
    pub fn sheet(self) -> SheetLabel {
        match self {
            StateKind::Bound => SheetLabel::FirstSheet,
            StateKind::Resonant | StateKind::AntiResonant => SheetLabel::SecondSheet,
        }
    }
}

const I: Complex64 = Complex64::new(0.0, 1.0);

/// First-sheet root `R(w)` with `R(w)^2 = w^2 + 4 J^2`, `R(w) ~ w` at infinity.
///
/// At the real-axis crossing of the cut (`w ~ 0`) the right-hand limit `2J`
/// is returned.
pub(crate) fn first_sheet_root(w: Complex64, j: f64) -> Complex64 {
    if w.norm() < 0.25 * j {
        // analytic near w = 0; agrees with the principal form for Re(w) > 0
        let r = (w * w + 4.0 * j * j).sqrt();
        return if w.re >= 0.0 || w.norm() < CUT_EXCLUSION * j {
            r
        } else {
            -r
        };
    }
    w * (1.0 + 4.0 * j * j / (w * w)).sqrt()
}

fn check_off_cut(s: Complex64, params: &ModelParams) -> Result<()> {
    let j = params.j();
    let w = s + params.gamma();
    let tol = CUT_EXCLUSION * j;
    if w.re.abs() < tol && w.im.abs() <= 2.0 * j + tol && w.norm() >= tol {
        return Err(Error::BranchCutEvaluation { re: s.re, im: s.im });
    }
    Ok(())
}

fn sheet_root(s: Complex64, params: &ModelParams, sheet: SheetLabel) -> Complex64 {
    let r = first_sheet_root(s + params.gamma(), params.j());
    match sheet {
        SheetLabel::FirstSheet => r,
        SheetLabel::SecondSheet => -r,
    }
}

/// Bath self-energy `Sigma(s)` on the requested sheet.
pub fn self_energy(s: Complex64, params: &ModelParams, sheet: SheetLabel) -> Result<Complex64> {
    check_off_cut(s, params)?;
    let w = s + params.gamma();
    Ok(I * params.sigma() * (w - sheet_root(s, params, sheet)))
}

/// `s + i dw + i Sigma(s)`, the denominator of the Laplace amplitude.
pub fn amplitude_denominator(
    s: Complex64,
    params: &ModelParams,
    sheet: SheetLabel,
) -> Result<Complex64> {
    let sigma_s = self_energy(s, params, sheet)?;
    Ok(s + I * params.delta_omega0() + I * sigma_s)
}

/// Laplace transform `c_a(s)` of the excited-state amplitude.
pub fn laplace_amplitude(
    s: Complex64,
    params: &ModelParams,
    sheet: SheetLabel,
) -> Result<Complex64> {
    let d = amplitude_denominator(s, params, sheet)?;
    if d.norm() < POLE_TOL * params.j() {
        return Err(Error::PoleEvaluation {
            re: s.re,
            im: s.im,
            magnitude: d.norm(),
        });
    }
    Ok(1.0 / d)
}

/// Emitter element of the resolvent, `G_ee(z) = -i c_a(-i z)`.
pub fn resolvent_ee(z: Complex64, params: &ModelParams, sheet: SheetLabel) -> Result<Complex64> {
    Ok(-I * laplace_amplitude(-I * z, params, sheet)?)
}

/// Which sheet the Bromwich contour deformed onto the two Hankel rays sees at
/// `s`: the second sheet inside the strip `Re(s) < -gamma, |Im(s)| < 2J`
/// left of the cut, the first sheet everywhere else.
pub fn hankel_sheet(s: Complex64, params: &ModelParams) -> SheetLabel {
    if in_hankel_strip(s, params) {
        SheetLabel::SecondSheet
    } else {
        SheetLabel::FirstSheet
    }
}

/// `c_a(s)` continued across the cut into the Hankel strip.
///
/// Uses `R(w) = sqrt(w - 2iJ) sqrt(w + 2iJ)`, whose cuts lie on the Hankel
/// rays themselves, so the function is analytic across the original cut
/// segment. Equals [`laplace_amplitude`] on [`hankel_sheet`] wherever that is
/// defined. Returns `inf` exactly on a pole.
pub fn continued_amplitude(s: Complex64, params: &ModelParams) -> Complex64 {
    let j = params.j();
    let w = s + params.gamma();
    let r = (w - 2.0 * j * I).sqrt() * (w + 2.0 * j * I).sqrt();
    let d = s + I * params.delta_omega0() - params.sigma() * (w - r);
    1.0 / d
}

/// Complex Bloch wavenumber `k = -i log X` of the Siegert state at energy `z`,
/// `X = (g0^2 / (z - dw) - z - i gamma) / J`, with `Re(k)` in `(-pi, pi]`.
pub fn bloch_wavenumber(z: Complex64, params: &ModelParams) -> Result<Complex64> {
    // the g0^2 / (z - dw) term may not exceed ~1e15 J
    let g2 = params.g0() * params.g0();
    let tol = 1e-15 * g2 / params.j();
    let dz = z - params.delta_omega0();
    if dz.norm() <= tol {
        return Err(Error::DetuningSingularity { tol });
    }
    let x = (g2 / dz - z - I * params.gamma()) / params.j();
    // -i ln X = arg X - i ln|X|
    Ok(Complex64::new(x.arg(), -x.norm().ln()))
}

/// Bound for `Im(k) > 0`; resonant (outgoing) or anti-resonant (incoming)
/// for `Im(k) < 0` according to the sign of `Re(k)`.
pub fn classify_state(k: Complex64) -> StateClass {
    if k.im > BOUNDARY_TOL {
        StateClass {
            kind: StateKind::Bound,
            on_boundary: false,
        }
    } else if k.im < -BOUNDARY_TOL {
        let kind = if k.re >= 0.0 {
            StateKind::Resonant
        } else {
            StateKind::AntiResonant
        };
        StateClass {
            kind,
            on_boundary: k.re == 0.0,
        }
    } else {
        StateClass {
            kind: StateKind::Bound,
            on_boundary: true,
        }
    }
}
