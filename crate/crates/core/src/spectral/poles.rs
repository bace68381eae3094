// Copyright 2026 nhbath Contributors
// SPDX-License-Identifier: Apache-2.0

//! Roots of the pole equation and their classification.

use std::cmp::Ordering;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{bloch_wavenumber, classify_state, SheetLabel, StateKind, I};
use crate::error::{Error, Result};
use crate::params::ModelParams;

/// `|1 - 2 sigma|` below which the pole equation is treated as linear.
const LINEAR_TOL: f64 = 1e-12;

/// Residue denominators below this (units of `J`) signal a double root.
const RESIDUE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pole {
    pub s: Complex64,
    /// `z = i s`.
    pub z: Complex64,
    pub k: Complex64,
    pub sheet: SheetLabel,
    pub kind: StateKind,
    pub on_boundary: bool,
    /// Closed-form residue; absent for a (numerically) double root.
    pub residue: Option<Complex64>,
    /// Whether the pole is enclosed by the Bromwich contour once it is
    /// folded onto the Hankel rays.
    pub contributes: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoleSet {
    pub poles: Vec<Pole>,
    /// `g0 = J`: the quadratic term vanished and the linear equation was
    /// solved instead.
    pub degenerate_quadratic: bool,
}

impl PoleSet {
    pub fn len(&self) -> usize {
        self.poles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poles.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Pole> {
        self.poles.iter()
    }

    pub fn contributing(&self) -> impl Iterator<Item = &Pole> {
        self.poles.iter().filter(|p| p.contributes)
    }

    pub fn count(&self, kind: StateKind) -> usize {
        self.poles.iter().filter(|p| p.kind == kind).count()
    }
}

/// Coefficients `[a, b, c]` of `a s^2 + b s + c = 0`:
///
/// ```text
/// (1 - 2 sigma) s^2 - 2 [gamma sigma + i dw (sigma - 1)] s
///     - 4 sigma^2 J^2 - dw^2 - 2 i gamma sigma dw = 0
/// ```
pub fn pole_polynomial(params: &ModelParams) -> [Complex64; 3] {
    let sigma = params.sigma();
    let gamma = params.gamma();
    let dw = params.delta_omega0();
    let j = params.j();
    let a = Complex64::new(1.0 - 2.0 * sigma, 0.0);
    let b = -2.0 * Complex64::new(gamma * sigma, dw * (sigma - 1.0));
    let c = Complex64::new(
        -4.0 * sigma * sigma * j * j - dw * dw,
        -2.0 * gamma * sigma * dw,
    );
    [a, b, c]
}

/// Roots of `a s^2 + b s + c`. The larger-magnitude root comes from the
/// cancellation-free branch and the other from Vieta's product. `a == 0`
/// falls back to the linear equation; a vanishing linear term gives no root.
pub fn solve_quadratic(a: Complex64, b: Complex64, c: Complex64) -> Vec<Complex64> {
    roots_with_discriminant(a, b, c, b * b - 4.0 * a * c)
}

fn roots_with_discriminant(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    disc: Complex64,
) -> Vec<Complex64> {
    if a == Complex64::new(0.0, 0.0) {
        if b == Complex64::new(0.0, 0.0) {
            return Vec::new();
        }
        return vec![-c / b];
    }
    let sq = disc.sqrt();
    let q = if (b.conj() * sq).re >= 0.0 {
        -0.5 * (b + sq)
    } else {
        -0.5 * (b - sq)
    };
    if q == Complex64::new(0.0, 0.0) {
        return vec![Complex64::new(0.0, 0.0); 2];
    }
    vec![q / a, c / q]
}

/// Residue of `c_a(s)` at a simple pole `s` (on whichever sheet it lives):
///
/// ```text
/// r = ((sigma - 1) s + sigma gamma - i dw) / ((2 sigma - 1) s + sigma gamma + i (sigma - 1) dw)
/// ```
pub fn residue(s: Complex64, params: &ModelParams) -> Result<Complex64> {
    let sigma = params.sigma();
    let gamma = params.gamma();
    let dw = params.delta_omega0();
    let num = (sigma - 1.0) * s + sigma * gamma - I * dw;
    let den = (2.0 * sigma - 1.0) * s + sigma * gamma + I * ((sigma - 1.0) * dw);
    if den.norm() < RESIDUE_TOL * params.j() {
        return Err(Error::NearDegenerate { re: s.re, im: s.im });
    }
    Ok(num / den)
}

/// Open strip `Re(s) < -gamma, |Im(s)| < 2J` between the two Hankel rays.
pub fn in_hankel_strip(s: Complex64, params: &ModelParams) -> bool {
    s.re + params.gamma() < 0.0 && s.im.abs() < 2.0 * params.j()
}

/// A root of the pole equation is a pole of the contour-continued amplitude
/// iff it zeroes the denominator built from the ray-cut root
/// `sqrt(w - 2iJ) sqrt(w + 2iJ)` rather than from its negative.
fn enclosed_by_contour(s: Complex64, sheet: SheetLabel, params: &ModelParams) -> bool {
    let j = params.j();
    let w = s + params.gamma();
    let r = (w - 2.0 * j * I).sqrt() * (w + 2.0 * j * I).sqrt();
    let base = s + I * params.delta_omega0() - params.sigma() * w;
    let d_plus = (base + params.sigma() * r).norm();
    let d_minus = (base - params.sigma() * r).norm();
    if (d_plus - d_minus).abs() <= 1e-9 * (d_plus + d_minus).max(j) {
        // branch point: both roots vanish
        return sheet == SheetLabel::FirstSheet;
    }
    d_plus < d_minus
}

fn order(a: &Complex64, b: &Complex64, scale: f64) -> Ordering {
    if (a.re - b.re).abs() > 1e-12 * scale {
        a.re.total_cmp(&b.re)
    } else {
        a.im.total_cmp(&b.im)
    }
}

/// Roots of the pole equation, each classified by its Bloch wavenumber and
/// sorted by `Re(s)` then `Im(s)`.
pub fn find_poles(params: &ModelParams) -> Result<PoleSet> {
    let [a, b, c] = pole_polynomial(params);
    let degenerate_quadratic = a.re.abs() < LINEAR_TOL;
    let mut roots = if degenerate_quadratic {
        solve_quadratic(Complex64::new(0.0, 0.0), b, c)
    } else if params.is_resonant() {
        // 4 sigma^2 (gamma^2 - 4 (g0^2 - J^2)) in factored form, so that the
        // discriminant vanishes exactly at gamma = 2 sqrt(g0^2 - J^2)
        let (g0, j, gamma) = (params.g0(), params.j(), params.gamma());
        let sigma = params.sigma();
        let inner = if g0 > j {
            let gc = 2.0 * ((g0 - j) * (g0 + j)).sqrt();
            (gamma - gc) * (gamma + gc)
        } else {
            gamma * gamma + 4.0 * (j - g0) * (j + g0)
        };
        roots_with_discriminant(a, b, c, Complex64::new(4.0 * sigma * sigma * inner, 0.0))
    } else {
        solve_quadratic(a, b, c)
    };
    let scale = params.j() + params.gamma() + params.delta_omega0().abs();
    roots.sort_by(|x, y| order(x, y, scale));

    let mut poles = Vec::with_capacity(roots.len());
    for s in roots {
        let z = I * s;
        let k = bloch_wavenumber(z, params)?;
        let class = classify_state(k);
        let sheet = class.kind.sheet();
        poles.push(Pole {
            s,
            z,
            k,
            sheet,
            kind: class.kind,
            on_boundary: class.on_boundary,
            residue: residue(s, params).ok(),
            contributes: enclosed_by_contour(s, sheet, params),
        });
    }
    Ok(PoleSet {
        poles,
        degenerate_quadratic,
    })
}
