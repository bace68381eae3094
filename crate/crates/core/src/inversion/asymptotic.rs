// Copyright 2026 nhbath Contributors
// SPDX-License-Identifier: Apache-2.0

//! Long-time decay channel predicted from the pole census.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::spectral::{find_poles, StateKind};

/// Relative slack when comparing a bound-pole rate with `gamma`, so that a
/// pole sitting on the cut edge at `gamma = gamma_c1` counts as bound.
const EDGE_SLACK: f64 = 1e-12;

/// `|Im(s)|` (units of `J`) above which a bound pair oscillates.
const OSCILLATION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Channel {
    /// `t^{-3/2} exp(-gamma t)` branch-cut tail beating at `4J`.
    HankelEnvelope,
    /// A single real bound pole.
    BoundPole,
    /// A complex-conjugate bound pair beating at `2 |Im(s)|`.
    BoundPoleOscillating,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticModel {
    pub channel: Channel,
    /// Decay rate of `|c_a(t)|` at long times.
    pub rate: f64,
    /// Angular frequency of the oscillation of `P_s(t)`, if any.
    pub frequency: Option<f64>,
}

/// The slowest of `gamma` (branch-cut tail) and the contributing bound poles.
pub fn asymptotic_model(params: &ModelParams) -> Result<AsymptoticModel> {
    if !params.is_resonant() {
        return Err(Error::DetunedCriticality {
            detuning: params.delta_omega0(),
        });
    }
    let gamma = params.gamma();
    let poles = find_poles(params)?;
    let slowest = poles
        .contributing()
        .filter(|p| p.kind == StateKind::Bound)
        .min_by(|a, b| a.s.re.abs().total_cmp(&b.s.re.abs()));

    match slowest {
        Some(p) if p.s.re.abs() <= gamma * (1.0 + EDGE_SLACK) => {
            let oscillating = p.s.im.abs() > OSCILLATION_TOL * params.j();
            Ok(AsymptoticModel {
                channel: if oscillating {
                    Channel::BoundPoleOscillating
                } else {
                    Channel::BoundPole
                },
                rate: p.s.re.abs().min(gamma),
                frequency: oscillating.then(|| 2.0 * p.s.im.abs()),
            })
        }
        _ => Ok(AsymptoticModel {
            channel: Channel::HankelEnvelope,
            rate: gamma,
            frequency: Some(4.0 * params.j()),
        }),
    }
}
