// Copyright 2026 nhbath Contributors
// SPDX-License-Identifier: Apache-2.0

//! Run configuration: defaults, then a `key = value` file, then flags.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use nhbath_core::lattice::{LatticeConfig, MAX_LINDBLAD_SITES};
use nhbath_core::sweep::GammaRange;
use nhbath_core::ModelParams;

use crate::error::CliError;

/// Spectral route minimum time, in units of `1/J`.
pub const SPECTRAL_T_MIN: f64 = 1e-2;

/// Chain length used by the Lindblad route when `nsites` is not given.
pub const DEFAULT_LINDBLAD_SITES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Spectral,
    Lattice,
    Momentum,
    Lindblad,
    /// Spectral, lattice and momentum on the same grid.
    All,
}

impl Route {
    pub fn expand(self) -> Vec<Route> {
        match self {
            Route::All => vec![Route::Spectral, Route::Lattice, Route::Momentum],
            r => vec![r],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Route::Spectral => "spectral",
            Route::Lattice => "lattice",
            Route::Momentum => "momentum",
            Route::Lindblad => "lindblad",
            Route::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Which inputs a command needs, so validation can run before any work.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Needs {
    /// `g0` and `gamma`.
    Model,
    /// `g0` only; `gamma` is swept.
    Coupling,
    /// Neither; the command brings its own values.
    Nothing,
}

/// Every numeric input of a run. Serialises to the `params` block of a JSON
/// report, which parses back into the same value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RunConfig {
    pub g0: Option<f64>,
    #[serde(rename = "J")]
    pub j: f64,
    pub gamma: Option<f64>,
    pub detuning: f64,
    /// Defaults to `0.01 / J`.
    pub tmin: Option<f64>,
    pub tmax: f64,
    pub npoints: usize,
    /// Defaults to the light cone plus margin (lattice) or 8 (Lindblad).
    pub nsites: Option<usize>,
    pub nmodes: usize,
    pub route: Route,
    pub rtol: f64,
    pub atol: f64,
    pub gamma_lo: f64,
    /// Defaults to a range covering both critical loss rates.
    pub gamma_hi: Option<f64>,
    pub ngamma: usize,
    pub g0_lo: f64,
    pub g0_hi: f64,
    pub ng0: usize,
    pub resolution: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            g0: None,
            j: 1.0,
            gamma: None,
            detuning: 0.0,
            tmin: None,
            tmax: 50.0,
            npoints: 501,
            nsites: None,
            nmodes: 1024,
            route: Route::Spectral,
            rtol: 1e-10,
            atol: 1e-12,
            gamma_lo: 0.0,
            gamma_hi: None,
            ngamma: 301,
            g0_lo: 0.2,
            g0_hi: 3.0,
            ng0: 57,
            resolution: 1e-6,
        }
    }
}

/// Command-line flags; every field is optional so that unset flags fall
/// through to the config file and then to the defaults.
#[derive(Debug, Clone, Default, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct Flags {
    /// Emitter-lattice coupling
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g0: Option<f64>,
    /// Hopping rate
    #[arg(long = "J", global = true, allow_hyphen_values = true)]
    #[serde(rename = "J", skip_serializing_if = "Option::is_none")]
    pub j: Option<f64>,
    /// Uniform photon loss rate
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// Emitter detuning from the band centre
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detuning: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tmin: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tmax: Option<f64>,
    /// Samples on the time grid
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub npoints: Option<usize>,
    /// Lattice sites (lattice and Lindblad routes)
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nsites: Option<usize>,
    /// Momentum modes (momentum route)
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nmodes: Option<usize>,
    #[arg(long, global = true, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub route: Option<Route>,
    /// Integrator relative tolerance
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rtol: Option<f64>,
    /// Integrator absolute tolerance
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub atol: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_lo: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_hi: Option<f64>,
    /// Points on the loss-rate grid
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ngamma: Option<usize>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g0_lo: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g0_hi: Option<f64>,
    /// Points on the coupling grid
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ng0: Option<usize>,
    /// Target width of the optimal loss rate
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<f64>,
    /// Output file (stdout when absent)
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    #[serde(skip)]
    pub format: Option<Format>,
    /// Flat `key = value` file with keys named like the flags
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

/// `(line number, key, value)` for every non-blank, non-comment line.
pub fn parse_config_text(text: &str) -> Result<Vec<(usize, String, String)>, CliError> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Config {
                line: i + 1,
                reason: format!("expected `key = value`, got `{line}`"),
            });
        };
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() {
            return Err(CliError::Config {
                line: i + 1,
                reason: "empty key".into(),
            });
        }
        entries.push((i + 1, key.to_string(), value.to_string()));
    }
    Ok(entries)
}

/// A config value as JSON: numbers, `null` and quoted strings parse as such,
/// anything else is taken as a bare string.
fn scalar(value: &str) -> Value {
    match serde_json::from_str::<Value>(value) {
        Ok(v) if !v.is_object() && !v.is_array() => v,
        _ => Value::String(value.to_string()),
    }
}

fn parse_format(value: &str, line: usize) -> Result<Format, CliError> {
    match value.trim_matches('"') {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        other => Err(CliError::Config {
            line,
            reason: format!("format must be csv or json, got `{other}`"),
        }),
    }
}

/// Layers defaults, the config file and the flags, in increasing precedence.
pub fn resolve(
    flags: &Flags,
    file_text: Option<&str>,
) -> Result<(RunConfig, OutputSpec), CliError> {
    let Value::Object(mut layered) = serde_json::to_value(RunConfig::default()).expect("serialise")
    else {
        unreachable!()
    };
    let mut output = OutputSpec::default();

    if let Some(text) = file_text {
        for (line, key, value) in parse_config_text(text)? {
            match key.as_str() {
                "out" => output.path = Some(PathBuf::from(value.trim_matches('"'))),
                "format" => output.format = Some(parse_format(&value, line)?),
                k if layered.contains_key(k) => {
                    layered.insert(key, scalar(&value));
                }
                _ => {
                    return Err(CliError::Config {
                        line,
                        reason: format!("unknown key `{key}`"),
                    })
                }
            }
        }
    }

    let Value::Object(set) = serde_json::to_value(flags).expect("serialise") else {
        unreachable!()
    };
    layered.extend(set);
    if flags.out.is_some() {
        output.path.clone_from(&flags.out);
    }
    if flags.format.is_some() {
        output.format = flags.format;
    }

    let cfg = from_params_block(Value::Object(layered))?;
    Ok((cfg, output))
}

/// Parses a `params` block (as written in JSON reports) back into a config.
pub fn from_params_block(block: Value) -> Result<RunConfig, CliError> {
    serde_json::from_value(block).map_err(|e| CliError::Invalid {
        key: "config".into(),
        reason: e.to_string(),
    })
}

pub fn read_config_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Config {
        line: 0,
        reason: format!("cannot read {}: {e}", path.display()),
    })
}

fn invalid(key: &str, reason: impl Into<String>) -> CliError {
    CliError::Invalid {
        key: key.into(),
        reason: reason.into(),
    }
}

fn positive(key: &str, x: f64) -> Result<(), CliError> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(invalid(key, format!("must be finite and > 0, got {x}")))
    }
}

pub fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

impl RunConfig {
    pub fn t_min(&self) -> f64 {
        self.tmin.unwrap_or(SPECTRAL_T_MIN / self.j)
    }

    pub fn time_grid(&self) -> Vec<f64> {
        axis(self.t_min(), self.tmax, self.npoints)
    }

    pub fn model(&self) -> Result<ModelParams, CliError> {
        let g0 = self.g0.ok_or_else(|| invalid("g0", "required"))?;
        let gamma = self.gamma.ok_or_else(|| invalid("gamma", "required"))?;
        Ok(ModelParams::new(g0, self.j, gamma, self.detuning)?)
    }

    /// Model at `gamma = 0` for commands that sweep the loss rate.
    pub fn coupling(&self) -> Result<ModelParams, CliError> {
        let g0 = self.g0.ok_or_else(|| invalid("g0", "required"))?;
        Ok(ModelParams::new(g0, self.j, 0.0, self.detuning)?)
    }

    pub fn lattice(&self, params: &ModelParams, t_max: f64) -> LatticeConfig {
        let cfg = LatticeConfig::for_time(params, t_max).with_tolerances(self.rtol, self.atol);
        match self.nsites {
            Some(n) => cfg.with_sites(n),
            None => cfg,
        }
    }

    pub fn lindblad_sites(&self) -> usize {
        self.nsites.unwrap_or(DEFAULT_LINDBLAD_SITES)
    }

    /// Upper end of a loss-rate sweep: given, or 1.5 times the larger
    /// critical rate (at least `J`).
    pub fn gamma_hi_for(&self, g0: f64) -> f64 {
        self.gamma_hi.unwrap_or_else(|| {
            let c1 = g0 * g0 / self.j;
            let c2 = if g0 > self.j {
                2.0 * ((g0 - self.j) * (g0 + self.j)).sqrt()
            } else {
                0.0
            };
            (1.5 * c1.max(c2)).max(self.j)
        })
    }

    pub fn gamma_range(&self, g0: f64) -> Result<GammaRange, CliError> {
        Ok(GammaRange::new(
            self.gamma_lo,
            self.gamma_hi_for(g0),
            self.ngamma,
        )?)
    }

    /// Checks every input the command will use. Runs before any computation.
    pub fn validate(&self, needs: Needs, routes: &[Route]) -> Result<(), CliError> {
        positive("J", self.j)?;
        if !self.detuning.is_finite() {
            return Err(invalid("detuning", "must be finite"));
        }
        let t_min = self.t_min();
        if !(t_min.is_finite() && t_min >= 0.0) {
            return Err(invalid(
                "tmin",
                format!("must be finite and >= 0, got {t_min}"),
            ));
        }
        if !(self.tmax.is_finite() && self.tmax > t_min) {
            return Err(invalid(
                "tmax",
                format!("must be finite and > tmin = {t_min}, got {}", self.tmax),
            ));
        }
        if self.npoints < 2 {
            return Err(invalid("npoints", "need at least 2"));
        }
        positive("rtol", self.rtol)?;
        positive("atol", self.atol)?;
        positive("resolution", self.resolution)?;
        if self.nmodes < 64 {
            return Err(invalid(
                "nmodes",
                format!("need at least 64, got {}", self.nmodes),
            ));
        }
        if self.nsites.is_some_and(|n| n < 2) {
            return Err(invalid("nsites", "need at least 2"));
        }
        if !(self.gamma_lo.is_finite() && self.gamma_lo >= 0.0) {
            return Err(invalid("gamma-lo", "must be finite and >= 0"));
        }
        if let Some(hi) = self.gamma_hi {
            if !(hi.is_finite() && hi > self.gamma_lo) {
                return Err(invalid(
                    "gamma-hi",
                    format!("must exceed gamma-lo, got {hi}"),
                ));
            }
        }
        if self.ngamma < 2 {
            return Err(invalid("ngamma", "need at least 2"));
        }
        positive("g0-lo", self.g0_lo)?;
        if !(self.g0_hi.is_finite() && self.g0_hi > self.g0_lo) {
            return Err(invalid(
                "g0-hi",
                format!("must exceed g0-lo, got {}", self.g0_hi),
            ));
        }
        if self.ng0 < 2 {
            return Err(invalid("ng0", "need at least 2"));
        }

        let params = match needs {
            Needs::Model => Some(self.model()?),
            Needs::Coupling => {
                let p = self.coupling()?;
                self.gamma_range(p.g0())?;
                Some(p)
            }
            Needs::Nothing => None,
        };
        let Some(params) = params else {
            return Ok(());
        };
        for route in routes {
            match route {
                Route::Spectral if t_min < SPECTRAL_T_MIN / self.j => {
                    return Err(nhbath_core::Error::TimeTooSmall {
                        t: t_min,
                        t_min: SPECTRAL_T_MIN / self.j,
                    }
                    .into())
                }
                Route::Lattice => self.lattice(&params, self.tmax).validate(&params)?,
                Route::Lindblad if self.lindblad_sites() > MAX_LINDBLAD_SITES => {
                    return Err(nhbath_core::Error::DimensionTooLarge {
                        n_sites: self.lindblad_sites(),
                        max: MAX_LINDBLAD_SITES,
                    }
                    .into())
                }
                _ => {}
            }
        }
        Ok(())
    }
}
