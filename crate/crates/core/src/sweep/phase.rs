// Copyright 2026 nhbath Contributors
// SPDX-License-Identifier: Apache-2.0

//! Optimal loss rate, coupling/loss phase map and per-coupling reports.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::inversion::{asymptotic_model, AsymptoticModel, Channel};
use crate::params::ModelParams;
use crate::spectral::{
    coupling_regime, critical_gammas, detect_ep, find_poles, CouplingRegime, EpRecord, StateKind,
};

/// Grid points used to bracket the maximum before golden-section refinement.
const SEARCH_POINTS: usize = 2001;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimalDissipation {
    pub gamma_star: f64,
    pub rate_star: f64,
    /// The critical rate the regime predicts for the optimum.
    pub expected_gamma: f64,
    /// `|gamma_star - expected_gamma| > resolution`.
    pub discrepancy: bool,
}

fn rate_at(base: &ModelParams, gamma: f64) -> Result<f64> {
    Ok(asymptotic_model(&base.with_gamma(gamma)?)?.rate)
}

/// Maximises the asymptotic decay rate over `gamma in [lo, hi]`.
///
/// A uniform grid brackets the maximum, which is then refined by golden
/// section to `resolution` (units of `J`).
pub fn optimal_dissipation(
    g0: f64,
    j: f64,
    search: (f64, f64),
    resolution: f64,
) -> Result<OptimalDissipation> {
    let (lo, hi) = search;
    if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::invalid(
            "gamma",
            format!("need 0 <= lo < hi, got [{lo}, {hi}]"),
        ));
    }
    if resolution.is_nan() || resolution <= 0.0 {
        return Err(Error::invalid("resolution", "must be positive"));
    }
    let base = ModelParams::new(g0, j, lo, 0.0)?;
    let step = (hi - lo) / (SEARCH_POINTS - 1) as f64;
    let mut best = (0, f64::NEG_INFINITY);
    for i in 0..SEARCH_POINTS {
        let r = rate_at(&base, lo + step * i as f64)?;
        if r > best.1 {
            best = (i, r);
        }
    }
    let mut a = lo + step * best.0.saturating_sub(1) as f64;
    let mut b = (lo + step * (best.0 + 1) as f64).min(hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let (mut f1, mut f2) = (rate_at(&base, x1)?, rate_at(&base, x2)?);
    while b - a > resolution {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = rate_at(&base, x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = rate_at(&base, x1)?;
        }
    }
    let gamma_star = 0.5 * (a + b);
    let rate_star = rate_at(&base, gamma_star)?;

    let crit = critical_gammas(&base)?;
    let expected_gamma = match coupling_regime(&base).regime {
        CouplingRegime::Strong => crit.gamma_c2.unwrap_or(crit.gamma_c1),
        _ => crit.gamma_c1,
    };
    Ok(OptimalDissipation {
        gamma_star,
        rate_star,
        expected_gamma,
        discrepancy: (gamma_star - expected_gamma).abs() > resolution,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseCell {
    pub g0: f64,
    pub gamma: f64,
    pub regime: CouplingRegime,
    pub regime_boundary: bool,
    pub n_bound: usize,
    pub n_resonant: usize,
    pub n_antiresonant: usize,
    pub dominant_channel: Channel,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseDiagram {
    pub j: f64,
    pub g0: Vec<f64>,
    pub gamma: Vec<f64>,
    /// Row-major: `cells[i * gamma.len() + k]` is `(g0[i], gamma[k])`.
    pub cells: Vec<PhaseCell>,
}

impl PhaseDiagram {
    pub fn cell(&self, i_g0: usize, i_gamma: usize) -> &PhaseCell {
        &self.cells[i_g0 * self.gamma.len() + i_gamma]
    }
}

fn phase_cell(g0: f64, gamma: f64, j: f64) -> Result<PhaseCell> {
    let p = ModelParams::new(g0, j, gamma, 0.0)?;
    let poles = find_poles(&p)?;
    let model = asymptotic_model(&p)?;
    let regime = coupling_regime(&p);
    Ok(PhaseCell {
        g0,
        gamma,
        regime: regime.regime,
        regime_boundary: regime.on_boundary,
        n_bound: poles.count(StateKind::Bound),
        n_resonant: poles.count(StateKind::Resonant),
        n_antiresonant: poles.count(StateKind::AntiResonant),
        dominant_channel: model.channel,
        rate: model.rate,
    })
}

/// Pole census and asymptotic channel on every `(g0, gamma)` cell.
pub fn phase_diagram(
    g0_grid: &[f64],
    gamma_grid: &[f64],
    j: f64,
    exec: Execution,
) -> Result<PhaseDiagram> {
    if g0_grid.is_empty() || gamma_grid.is_empty() {
        return Err(Error::invalid("grid", "empty axis"));
    }
    let pairs: Vec<(f64, f64)> = g0_grid
        .iter()
        .flat_map(|&g| gamma_grid.iter().map(move |&y| (g, y)))
        .collect();
    let cells = exec.try_map(&pairs, |&(g0, gamma)| phase_cell(g0, gamma, j))?;
    Ok(PhaseDiagram {
        j,
        g0: g0_grid.to_vec(),
        gamma: gamma_grid.to_vec(),
        cells,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub g0: f64,
    pub j: f64,
    pub regime: CouplingRegime,
    pub regime_boundary: bool,
    pub gamma_c1: f64,
    pub gamma_c2: Option<f64>,
    pub ep: Option<EpRecord>,
    pub optimal_gamma: f64,
    pub optimal_rate: f64,
    pub discrepancy: bool,
    pub channel_map: Vec<(f64, AsymptoticModel)>,
}

/// Critical rates, EP, optimum and the channel along `gamma_grid` for one
/// coupling. The optimum is searched over the span of `gamma_grid`.
pub fn regime_report(g0: f64, j: f64, gamma_grid: &[f64], resolution: f64) -> Result<RegimeReport> {
    let (lo, hi) = match (gamma_grid.first(), gamma_grid.last()) {
        (Some(&lo), Some(&hi)) if hi > lo => (lo, hi),
        _ => {
            return Err(Error::invalid(
                "gamma",
                "need an increasing grid of at least 2 points",
            ))
        }
    };
    let base = ModelParams::new(g0, j, lo, 0.0)?;
    let crit = critical_gammas(&base)?;
    let regime = coupling_regime(&base);
    let ep = match crit.gamma_c2 {
        Some(g) => detect_ep(&base.with_gamma(g)?)?,
        None => None,
    };
    let optimum = optimal_dissipation(g0, j, (lo, hi), resolution)?;
    let channel_map = gamma_grid
        .iter()
        .map(|&g| Ok((g, asymptotic_model(&base.with_gamma(g)?)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(RegimeReport {
        g0,
        j,
        regime: regime.regime,
        regime_boundary: regime.on_boundary,
        gamma_c1: crit.gamma_c1,
        gamma_c2: crit.gamma_c2,
        ep,
        optimal_gamma: optimum.gamma_star,
        optimal_rate: optimum.rate_star,
        discrepancy: optimum.discrepancy,
        channel_map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weak_optimum_at_cut_crossing() {
        let o = optimal_dissipation(0.8, 1.0, (0.0, 3.0), 1e-6).unwrap();
        assert!((o.gamma_star - 0.64).abs() < 1e-6, "{o:?}");
        assert!((o.rate_star - 0.64).abs() < 1e-6);
        assert!(!o.discrepancy);
    }

    #[test]
    fn strong_optimum_at_ep() {
        let o = optimal_dissipation(2.0, 1.0, (0.0, 6.0), 1e-6).unwrap();
        assert!((o.gamma_star - 2.0 * 3f64.sqrt()).abs() < 1e-6, "{o:?}");
        assert!(!o.discrepancy);
    }

    #[test]
    fn moderate_optimum_at_cut_crossing() {
        let o = optimal_dissipation(1.2, 1.0, (0.0, 4.0), 1e-6).unwrap();
        assert!((o.gamma_star - 1.44).abs() < 1e-6, "{o:?}");
    }

    #[test]
    fn zeno_suppression() {
        let p = ModelParams::resonant(1.0, 0.0).unwrap();
        let rates: Vec<f64> = [10.0, 100.0, 1000.0]
            .iter()
            .map(|&g| rate_at(&p, g).unwrap())
            .collect();
        assert!(rates[0] > rates[1] && rates[1] > rates[2]);
        // bound pole rate ~ g0^2 / gamma for gamma >> J
        assert!((rates[2] * 1000.0 - 1.0).abs() < 1e-2);
    }

    #[test]
    fn phase_cells_from_examples() {
        let d = phase_diagram(&[0.8, 1.2, 2.0], &[0.3, 2.0], 1.0, Execution::Parallel).unwrap();
        let c = d.cell(0, 0);
        assert_eq!(
            (c.regime, c.n_bound, c.n_resonant, c.dominant_channel),
            (CouplingRegime::Weak, 0, 1, Channel::HankelEnvelope)
        );
        let c = d.cell(2, 1);
        assert_eq!(
            (c.regime, c.n_bound, c.n_resonant, c.dominant_channel),
            (CouplingRegime::Strong, 2, 0, Channel::BoundPoleOscillating)
        );
        let c = d.cell(1, 1);
        assert_eq!(
            (c.regime, c.n_bound, c.n_resonant, c.dominant_channel),
            (CouplingRegime::Moderate, 1, 1, Channel::BoundPole)
        );
        let seq = phase_diagram(&[0.8, 1.2, 2.0], &[0.3, 2.0], 1.0, Execution::Sequential).unwrap();
        assert_eq!(seq, d);
    }

    #[test]
    fn report_collects_critical_data() {
        let grid: Vec<f64> = (0..=50).map(|i| 0.1 * i as f64).collect();
        let r = regime_report(2.0, 1.0, &grid, 1e-6).unwrap();
        assert_eq!(r.regime, CouplingRegime::Strong);
        assert!(r.ep.is_some());
        assert_eq!(r.channel_map.len(), grid.len());
        let max = r
            .channel_map
            .iter()
            .map(|(_, m)| m.rate)
            .fold(0.0, f64::max);
        assert!(r.optimal_rate >= max - 1e-12);
    }
}
