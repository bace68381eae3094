// Copyright 2026 nhbath Contributors
// SPDX-License-Identifier: Apache-2.0

//! Critical loss rates, coupling regimes and exceptional points.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{bloch_wavenumber, classify_state, SheetLabel, StateKind, I};
use crate::error::{Error, Result};
use crate::params::ModelParams;

const REGIME_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalGammas {
    /// `g0^2 / J`: a pole crosses the cut.
    pub gamma_c1: f64,
    /// `2 sqrt(g0^2 - J^2)`: the two poles coalesce. Only for `g0 > J`.
    pub gamma_c2: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CouplingRegime {
    Weak,
    Moderate,
    Strong,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegimeClass {
    pub regime: CouplingRegime,
    /// `g0 / J` sits on `1` or `sqrt 2`; the lower regime is reported.
    pub on_boundary: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EpKind {
    /// Coalescence of two bound states on the first sheet.
    Physical,
    /// Coalescence of two resonances on the second sheet.
    Virtual,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpRecord {
    pub gamma_ep: f64,
    pub s_ep: Complex64,
    pub kind: EpKind,
    pub regime: CouplingRegime,
    /// Sheet of the double root from its Bloch wavenumber.
    pub sheet: SheetLabel,
    /// The double root sits on the continuum edge (`g0 = sqrt 2 J`).
    pub on_boundary: bool,
}

fn require_resonant(params: &ModelParams) -> Result<()> {
    if params.is_resonant() {
        Ok(())
    } else {
        Err(Error::DetunedCriticality {
            detuning: params.delta_omega0(),
        })
    }
}

pub fn critical_gammas(params: &ModelParams) -> Result<CriticalGammas> {
    require_resonant(params)?;
    let (g0, j) = (params.g0(), params.j());
    let gamma_c2 = (g0 > j).then(|| 2.0 * ((g0 - j) * (g0 + j)).sqrt());
    Ok(CriticalGammas {
        gamma_c1: g0 * g0 / j,
        gamma_c2,
    })
}

pub fn coupling_regime(params: &ModelParams) -> RegimeClass {
    let ratio = params.g0() / params.j();
    let near = |x: f64| (ratio - x).abs() <= REGIME_TOL * x;
    if near(1.0) {
        RegimeClass {
            regime: CouplingRegime::Weak,
            on_boundary: true,
        }
    } else if near(std::f64::consts::SQRT_2) {
        RegimeClass {
            regime: CouplingRegime::Moderate,
            on_boundary: true,
        }
    } else {
        let regime = if ratio < 1.0 {
            CouplingRegime::Weak
        } else if ratio < std::f64::consts::SQRT_2 {
            CouplingRegime::Moderate
        } else {
            CouplingRegime::Strong
        };
        RegimeClass {
            regime,
            on_boundary: false,
        }
    }
}

/// Exceptional point reached by tuning `gamma` at fixed `g0`, `J`. The value
/// of `gamma` in `params` is ignored.
///
/// The kind is read off the Bloch wavenumber of the double root rather than
/// inferred from the coupling regime.
pub fn detect_ep(params: &ModelParams) -> Result<Option<EpRecord>> {
    require_resonant(params)?;
    let Some(gamma_ep) = critical_gammas(params)?.gamma_c2 else {
        return Ok(None);
    };
    let at_ep = params.with_gamma(gamma_ep)?;
    let sigma = at_ep.sigma();
    let s_ep = Complex64::new(sigma * gamma_ep / (1.0 - 2.0 * sigma), 0.0);
    let class = classify_state(bloch_wavenumber(I * s_ep, &at_ep)?);
    let kind = match class.kind {
        StateKind::Bound => EpKind::Physical,
        StateKind::Resonant | StateKind::AntiResonant => EpKind::Virtual,
    };
    Ok(Some(EpRecord {
        gamma_ep,
        s_ep,
        kind,
        regime: coupling_regime(params).regime,
        sheet: class.kind.sheet(),
        on_boundary: class.on_boundary,
    }))
}
