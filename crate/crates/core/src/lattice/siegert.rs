// Copyright 2026 nhbath Contributors
// SPDX-License-Identifier: Apache-2.0

//! Siegert eigenvector `b_n = exp(i k n)` belonging to a pole.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::params::ModelParams;
use crate::spectral::Pole;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiegertProfile {
    /// Emitter amplitude `g0 b_1 / (z - dw)`.
    pub c_a: Complex64,
    /// `b_n` for `n = 1..=n_sites`.
    pub b: Vec<Complex64>,
    /// Largest residual of the eigenvalue equations, each scaled by the
    /// magnitude of the amplitude it determines.
    pub max_residual: f64,
}

/// Eigenvector of the effective Hamiltonian at energy `z = i s`:
///
/// ```text
/// z c_a = dw c_a + g0 b_1
/// z b_1 = g0 c_a - J b_2 - i gamma b_1
/// z b_n = -J (b_{n+1} + b_{n-1}) - i gamma b_n
/// ```
///
/// The last equation is checked for `n = 2..n_sites - 1` using the values of
/// the profile itself.
pub fn siegert_profile(pole: &Pole, params: &ModelParams, n_sites: usize) -> SiegertProfile {
    let i = Complex64::new(0.0, 1.0);
    let (g0, j, gamma, dw) = (
        params.g0(),
        params.j(),
        params.gamma(),
        params.delta_omega0(),
    );
    let z = pole.z;
    let b: Vec<Complex64> = (1..=n_sites)
        .map(|n| (i * pole.k * n as f64).exp())
        .collect();
    let c_a = g0 * b[0] / (z - dw);

    let mut max_residual = 0.0f64;
    let mut record = |lhs: Complex64, rhs: Complex64| {
        let scale = lhs.norm().max(rhs.norm()).max(f64::MIN_POSITIVE);
        max_residual = max_residual.max((lhs - rhs).norm() / scale);
    };
    record(z * c_a, dw * c_a + g0 * b[0]);
    if n_sites >= 2 {
        record(z * b[0], g0 * c_a - j * b[1] - i * gamma * b[0]);
    }
    for n in 1..n_sites.saturating_sub(1) {
        record(z * b[n], -j * (b[n + 1] + b[n - 1]) - i * gamma * b[n]);
    }
    SiegertProfile {
        c_a,
        b,
        max_residual,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{find_poles, StateKind};

    #[test]
    fn bound_profile_decays_and_solves_equations() {
        let p = ModelParams::resonant(2.0, 5.0).unwrap();
        let poles = find_poles(&p).unwrap();
        let bound = poles.iter().find(|q| q.kind == StateKind::Bound).unwrap();
        let prof = siegert_profile(bound, &p, 40);
        assert!(prof.max_residual < 1e-10, "{}", prof.max_residual);
        let ratio = prof.b[1].norm() / prof.b[0].norm();
        assert!((ratio - (-bound.k.im).exp()).abs() < 1e-12);
        assert!(ratio < 1.0);
    }

    #[test]
    fn resonant_profile_grows() {
        let p = ModelParams::resonant(0.6, 0.05).unwrap();
        let poles = find_poles(&p).unwrap();
        let res = poles
            .iter()
            .find(|q| q.kind == StateKind::Resonant)
            .unwrap();
        let prof = siegert_profile(res, &p, 30);
        assert!(prof.max_residual < 1e-10);
        assert!(prof.b.windows(2).all(|w| w[1].norm() > w[0].norm()));
        assert!(res.k.re > 0.0 && res.k.re < std::f64::consts::PI);
    }
}
