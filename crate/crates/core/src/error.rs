// Copyright 2026 nhbath Contributors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParams { name: &'static str, reason: String },

    #[error("s = {re} + {im}i lies on the branch cut Re(s) = -gamma, |Im(s)| <= 2J")]
    BranchCutEvaluation { re: f64, im: f64 },

    #[error(
        "s = {re} + {im}i sits on a pole of the Laplace amplitude (|denominator| = {magnitude:e})"
    )]
    PoleEvaluation { re: f64, im: f64, magnitude: f64 },

    #[error("z is within {tol:e} of the emitter detuning; Bloch wavenumber undefined")]
    DetuningSingularity { tol: f64 },

    #[error("pole at s = {re} + {im}i is (nearly) double; closed-form residue undefined")]
    NearDegenerate { re: f64, im: f64 },

    #[error("critical loss rates and exceptional points require zero detuning (got {detuning})")]
    DetunedCriticality { detuning: f64 },

    #[error("pole at s = {re} + {im}i lies within {distance:e} of a Hankel integration ray")]
    PoleOnPath { re: f64, im: f64, distance: f64 },

    #[error("t = {t} is below the spectral-route minimum t_min = {t_min}")]
    TimeTooSmall { t: f64, t_min: f64 },

    #[error("hard-wall lattice of {n_sites} sites reflects before t_max = {t_max} (needs more than {required})")]
    ReflectionRisk {
        n_sites: usize,
        t_max: f64,
        required: f64,
    },

    #[error("tolerance not met: {0}")]
    ToleranceNotMet(String),

    #[error("Lindblad basis with {n_sites} sites exceeds the cap of {max} sites")]
    DimensionTooLarge { n_sites: usize, max: usize },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParams {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad input rather than by a numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParams { .. }
                | Error::DetunedCriticality { .. }
                | Error::TimeTooSmall { .. }
                | Error::ReflectionRisk { .. }
                | Error::DimensionTooLarge { .. }
        )
    }
}
