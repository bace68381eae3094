// Copyright 2026 nhbath Contributors
// SPDX-License-Identifier: Apache-2.0

//! Physical parameters of the emitter + lossy lattice model.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coupling `g0`, hopping `J`, uniform loss `gamma` and emitter detuning
/// `delta_omega0`, all as angular frequencies in a common unit.
///
/// The dimensionless coupling `sigma = g0^2 / (2 J^2)` is always derived on
/// demand and never stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct ModelParams {
    g0: f64,
    j: f64,
    gamma: f64,
    delta_omega0: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    g0: f64,
    #[serde(rename = "J")]
    j: f64,
    gamma: f64,
    #[serde(default)]
    delta_omega0: f64,
}

impl TryFrom<RawParams> for ModelParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        ModelParams::new(raw.g0, raw.j, raw.gamma, raw.delta_omega0)
    }
}

impl From<ModelParams> for RawParams {
    fn from(p: ModelParams) -> Self {
        RawParams {
            g0: p.g0,
            j: p.j,
            gamma: p.gamma,
            delta_omega0: p.delta_omega0,
        }
    }
}

impl ModelParams {
    pub fn new(g0: f64, j: f64, gamma: f64, delta_omega0: f64) -> Result<Self> {
        if !g0.is_finite() || g0 <= 0.0 {
            return Err(Error::invalid(
                "g0",
                format!("must be finite and > 0, got {g0}"),
            ));
        }
        if !j.is_finite() || j <= 0.0 {
            return Err(Error::invalid(
                "J",
                format!("must be finite and > 0, got {j}"),
            ));
        }
        if !gamma.is_finite() || gamma < 0.0 {
            return Err(Error::invalid(
                "gamma",
                format!("must be finite and >= 0, got {gamma}"),
            ));
        }
        if !delta_omega0.is_finite() {
            return Err(Error::invalid(
                "detuning",
                format!("must be finite, got {delta_omega0}"),
            ));
        }
        Ok(ModelParams {
            g0,
            j,
            gamma,
            delta_omega0,
        })
    }

    /// Resonant emitter (`delta_omega0 = 0`) in units where `J = 1`.
    pub fn resonant(g0: f64, gamma: f64) -> Result<Self> {
        Self::new(g0, 1.0, gamma, 0.0)
    }

    pub fn g0(&self) -> f64 {
        self.g0
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn delta_omega0(&self) -> f64 {
        self.delta_omega0
    }

    /// `g0^2 / (2 J^2)`.
    pub fn sigma(&self) -> f64 {
        self.g0 * self.g0 / (2.0 * self.j * self.j)
    }

    pub fn is_resonant(&self) -> bool {
        self.delta_omega0 == 0.0
    }

    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Self::new(self.g0, self.j, gamma, self.delta_omega0)
    }

    pub fn with_g0(&self, g0: f64) -> Result<Self> {
        Self::new(g0, self.j, self.gamma, self.delta_omega0)
    }

    pub fn with_detuning(&self, delta_omega0: f64) -> Result<Self> {
        Self::new(self.g0, self.j, self.gamma, delta_omega0)
    }

    /// Same physics with every rate divided by `J`.
    pub fn normalized(&self) -> Self {
        ModelParams {
            g0: self.g0 / self.j,
            j: 1.0,
            gamma: self.gamma / self.j,
            delta_omega0: self.delta_omega0 / self.j,
        }
    }
}
