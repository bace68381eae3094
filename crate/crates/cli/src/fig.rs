// Copyright 2026 nhbath Contributors
// SPDX-License-Identifier: Apache-2.0

//! Data behind the published figures, with the caption parameters built in.

use serde_json::json;

use nhbath_core::inversion::{survival_amplitude_spectral, InversionOptions};
use nhbath_core::lattice::evolve_lattice;
use nhbath_core::sweep::{sweep_gamma, GammaRange};
use nhbath_core::{Execution, ModelParams};

use crate::commands::{event_json, trajectory_columns, trajectory_rows};
use crate::config::{Format, RunConfig};
use crate::error::CliError;
use crate::report::{Report, Table};

pub const FIGURE_IDS: [u32; 10] = [3, 4, 5, 6, 7, 8, 9, 10, 11, 13];

/// Caption parameters in units of `J`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Figure {
    /// Pole trajectories for each coupling over `gamma in [0, hi]`.
    Trajectories {
        couplings: &'static [f64],
        gamma_hi: f64,
    },
    /// `P_s(t)` at one coupling for each loss rate.
    Decay { g0: f64, gammas: &'static [f64] },
}

pub fn figure(id: u32) -> Option<Figure> {
    use Figure::*;
    Some(match id {
        3 => Trajectories {
            couplings: &[0.8],
            gamma_hi: 3.0,
        },
        4 => Decay {
            g0: 0.6,
            gammas: &[0.05],
        },
        5 => Decay {
            g0: 0.6,
            gammas: &[0.5],
        },
        6 => Trajectories {
            couplings: &[1.2],
            gamma_hi: 2.0,
        },
        7 => Decay {
            g0: 1.2,
            gammas: &[1.1, 1.35],
        },
        8 => Decay {
            g0: 1.2,
            gammas: &[2.0],
        },
        9 => Trajectories {
            couplings: &[2.0],
            gamma_hi: 5.0,
        },
        10 => Decay {
            g0: 2.0,
            gammas: &[2.0, 3.7],
        },
        11 => Decay {
            g0: 2.0,
            gammas: &[4.5],
        },
        13 => Trajectories {
            couplings: &[0.8, 1.2, 2.0],
            gamma_hi: 5.0,
        },
        _ => return None,
    })
}

pub fn run(id: u32, cfg: &RunConfig) -> Result<Report, CliError> {
    let fig = figure(id).ok_or_else(|| CliError::Invalid {
        key: "figure".into(),
        reason: format!("no data for figure {id}; available: {FIGURE_IDS:?}"),
    })?;
    let j = cfg.j;
    let command = format!("fig {id}");
    let mut report = match fig {
        Figure::Trajectories {
            couplings,
            gamma_hi,
        } => {
            let range = GammaRange::new(0.0, gamma_hi * j, cfg.ngamma)?;
            let trajectories =
                Execution::Parallel.try_map(couplings, |&g| sweep_gamma(g * j, j, range, 0.0))?;
            let mut table = Table::new(&trajectory_columns(true));
            let mut events = serde_json::Map::new();
            for (&g, tr) in couplings.iter().zip(&trajectories) {
                trajectory_rows(Some(g * j), tr, &mut table);
                events.insert(format!("g0={}", g * j), event_json(tr));
            }
            let mut report = Report::new(&command, cfg, table, Format::Csv);
            report.notes.push(format!(
                "figure {id}: g0/J in {couplings:?}, gamma/J from 0 to {gamma_hi}"
            ));
            report.result("events", events);
            report
        }
        Figure::Decay { g0, gammas } => {
            let ts = cfg.time_grid();
            let opts = InversionOptions {
                execution: Execution::Parallel,
                ..InversionOptions::default()
            };
            let curves = Execution::Sequential.try_map(gammas, |&gamma| {
                let p = ModelParams::new(g0 * j, j, gamma * j, 0.0)?;
                let spectral = survival_amplitude_spectral(&ts, &p, &opts)?;
                let lattice = evolve_lattice(&p, &cfg.lattice(&p, cfg.tmax), &ts)?;
                Ok::<_, CliError>((spectral, lattice))
            })?;
            let mut table = Table::new(&["g0", "gamma", "t", "ps_spectral", "ps_lattice"]);
            let mut deviations = Vec::new();
            for (&gamma, (spectral, lattice)) in gammas.iter().zip(&curves) {
                let ps = spectral.survival_probability();
                for (i, &t) in ts.iter().enumerate() {
                    table.push(vec![
                        (g0 * j).into(),
                        (gamma * j).into(),
                        t.into(),
                        ps[i].into(),
                        lattice.p_s[i].into(),
                    ]);
                }
                let c = lattice.c_a.as_deref().unwrap_or_default();
                let dev = spectral
                    .total
                    .iter()
                    .zip(c)
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                deviations.push(json!({
                    "gamma": gamma * j,
                    "max_abs_dca": dev,
                    "census": spectral.census(),
                }));
            }
            let mut report = Report::new(&command, cfg, table, Format::Csv);
            report
                .notes
                .push(format!("figure {id}: g0/J = {g0}, gamma/J in {gammas:?}"));
            if id == 7 {
                report
                    .notes
                    .push("normalized: caption value gamma/J = \"1,1\" read as 1.1".to_string());
            }
            report.diagnostic("spectral_vs_lattice", deviations);
            report
        }
    };
    report.result("figure", id);
    if cfg.g0.is_some() || cfg.gamma.is_some() {
        report
            .warnings
            .push("g0 and gamma come from the figure; the given values were ignored".into());
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_listed_figure_is_defined() {
        for id in FIGURE_IDS {
            assert!(figure(id).is_some(), "{id}");
        }
        assert!(figure(12).is_none());
        assert!(run(12, &RunConfig::default()).is_err());
    }
}
