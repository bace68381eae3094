// Copyright 2026 nhbath Contributors
// SPDX-License-Identifier: Apache-2.0

//! Exact time-domain amplitude from the poles and branch cuts of `c_a(s)`.
//!
//! ```text
//! c_a(t) = sum_k r_k exp(s_k t) + H1(t) + H2(t)
//! ```
//!
//! where the sum runs over the poles enclosed by the folded Bromwich contour:
//! first-sheet poles outside the Hankel strip and second-sheet poles inside
//! it. When two enclosed poles are closer than the exceptional-point window
//! their two terms are replaced by one confluent term built from contour
//! moments, which stays finite as the residues diverge.

mod asymptotic;
mod hankel;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::params::ModelParams;
use crate::quadrature::{circle_moments, QuadOptions};
use crate::spectral::{continued_amplitude, find_poles, Pole, PoleSet, SheetLabel, StateKind};

pub use asymptotic::{asymptotic_model, AsymptoticModel, Channel};
pub use hankel::{cut_discontinuity, CutEdge, HankelPair, PATH_TOL};
use hankel::{hankel_on_contour, Contour};

/// Number of moments kept in the confluent series.
const CONFLUENT_MOMENTS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InversionOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Smallest time served by the spectral route (units of `1/J`).
    pub t_min: f64,
    /// Pole separation (units of `J`) below which the confluent form is used.
    pub ep_window: f64,
    pub contour_nodes: usize,
    /// Confluent contour radius in units of `ep_window`.
    pub contour_radius: f64,
    #[serde(skip)]
    pub execution: Execution,
}

impl Default for InversionOptions {
    fn default() -> Self {
        InversionOptions {
            abs_tol: 1e-13,
            rel_tol: 1e-10,
            t_min: 1e-2,
            ep_window: 1e-3,
            contour_nodes: 128,
            contour_radius: 10.0,
            execution: Execution::default(),
        }
    }
}

impl InversionOptions {
    fn quad(&self) -> QuadOptions {
        QuadOptions {
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            max_intervals: 2000,
        }
    }

    fn check_time(&self, t: f64, params: &ModelParams) -> Result<()> {
        let t_min = self.t_min / params.j();
        if t.is_nan() || t < t_min || !t.is_finite() {
            return Err(Error::TimeTooSmall { t, t_min });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoleTerm {
    pub pole: Pole,
    pub residue: Complex64,
}

impl PoleTerm {
    pub fn value(&self, t: f64) -> Complex64 {
        self.residue * (self.pole.s * t).exp()
    }
}

/// Two coalescing poles folded into `exp(s0 t) sum_n M_n t^n / n!`, with
/// `M_n` the moments of `c_a` about `s0`; `a = M_0`, `b = M_1` give the
/// leading `(a + b t) exp(s0 t)` form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfluentTerm {
    pub poles: [Pole; 2],
    pub s0: Complex64,
    pub a: Complex64,
    pub b: Complex64,
    pub moments: Vec<Complex64>,
}

impl ConfluentTerm {
    pub fn value(&self, t: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut power = 1.0;
        for (n, m) in self.moments.iter().enumerate() {
            if n > 0 {
                power *= t / n as f64;
            }
            acc += m * power;
        }
        acc * (self.s0 * t).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TermCensus {
    pub bound: usize,
    pub resonant: usize,
    pub anti_resonant: usize,
    pub confluent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayDecomposition {
    pub params: ModelParams,
    pub t: Vec<f64>,
    /// All roots of the pole equation; `contributes` reflects the contour
    /// actually used.
    pub poles: PoleSet,
    pub pole_terms: Vec<PoleTerm>,
    pub confluent: Option<ConfluentTerm>,
    pub hankel: Vec<HankelPair>,
    pub total: Vec<Complex64>,
    /// A pole sat on a Hankel ray and the rays were tilted around it.
    pub tilted_contour: bool,
}

impl DecayDecomposition {
    /// Contributing terms by state kind; the two poles of a confluent term
    /// are both counted.
    pub fn census(&self) -> TermCensus {
        let mut census = TermCensus {
            confluent: self.confluent.is_some(),
            ..TermCensus::default()
        };
        let confluent_poles = self.confluent.iter().flat_map(|c| c.poles.iter());
        for pole in self
            .pole_terms
            .iter()
            .map(|p| &p.pole)
            .chain(confluent_poles)
        {
            match pole.kind {
                StateKind::Bound => census.bound += 1,
                StateKind::Resonant => census.resonant += 1,
                StateKind::AntiResonant => census.anti_resonant += 1,
            }
        }
        census
    }

    /// Sum of pole and confluent terms at sample `i`.
    pub fn pole_part(&self, i: usize) -> Complex64 {
        let t = self.t[i];
        let poles: Complex64 = self.pole_terms.iter().map(|p| p.value(t)).sum();
        poles
            + self
                .confluent
                .as_ref()
                .map_or(Complex64::new(0.0, 0.0), |c| c.value(t))
    }

    pub fn survival_probability(&self) -> Vec<f64> {
        self.total.iter().map(|c| c.norm_sqr()).collect()
    }

    /// Largest quadrature error estimate over the grid.
    pub fn max_quadrature_error(&self) -> f64 {
        self.hankel
            .iter()
            .map(|h| h.quadrature_error)
            .fold(0.0, f64::max)
    }

    pub fn converged(&self) -> bool {
        self.hankel.iter().all(|h| h.converged)
    }
}

struct Assembly {
    poles: PoleSet,
    roots: Vec<Complex64>,
    contour: Contour,
    pole_terms: Vec<PoleTerm>,
    confluent: Option<ConfluentTerm>,
}

fn assemble(params: &ModelParams, opts: &InversionOptions) -> Result<Assembly> {
    let mut poles = find_poles(params)?;
    let roots: Vec<Complex64> = poles.iter().map(|p| p.s).collect();
    let contour = Contour::new(params, &roots);
    if contour.tilted {
        for pole in poles.poles.iter_mut() {
            let second = contour.encloses_second_sheet(pole.s, params);
            pole.contributes = (pole.sheet == SheetLabel::SecondSheet) == second;
        }
    }

    let j = params.j();
    let enclosed: Vec<Pole> = poles.contributing().copied().collect();
    let mut pole_terms = Vec::new();
    let mut confluent = None;
    if enclosed.len() == 2 && (enclosed[0].s - enclosed[1].s).norm() < opts.ep_window * j {
        let s0 = 0.5 * (enclosed[0].s + enclosed[1].s);
        let moments = circle_moments(
            |s| continued_amplitude(s, params),
            s0,
            opts.contour_radius * opts.ep_window * j,
            opts.contour_nodes,
            CONFLUENT_MOMENTS,
        );
        confluent = Some(ConfluentTerm {
            poles: [enclosed[0], enclosed[1]],
            s0,
            a: moments[0],
            b: moments[1],
            moments,
        });
    } else {
        for pole in enclosed {
            let residue = match pole.residue {
                Some(r) => r,
                // double root without a partner inside the window: integrate
                None => circle_moments(
                    |s| continued_amplitude(s, params),
                    pole.s,
                    opts.ep_window * j,
                    opts.contour_nodes,
                    1,
                )[0],
            };
            pole_terms.push(PoleTerm { pole, residue });
        }
    }
    Ok(Assembly {
        poles,
        roots,
        contour,
        pole_terms,
        confluent,
    })
}

/// Both Hankel integrals at time `t` on the standard (or, if a pole sits on
/// a ray, tilted) contour.
pub fn hankel_contributions(
    t: f64,
    params: &ModelParams,
    opts: &InversionOptions,
) -> Result<HankelPair> {
    opts.check_time(t, params)?;
    let roots: Vec<Complex64> = find_poles(params)?.iter().map(|p| p.s).collect();
    let contour = Contour::new(params, &roots);
    Ok(hankel_on_contour(t, params, &contour, &roots, &opts.quad()))
}

/// `c_a(t)` on `t_grid` by residues plus Hankel integrals; grid points are
/// evaluated independently according to `opts.execution`.
pub fn survival_amplitude_spectral(
    t_grid: &[f64],
    params: &ModelParams,
    opts: &InversionOptions,
) -> Result<DecayDecomposition> {
    for &t in t_grid {
        opts.check_time(t, params)?;
    }
    let asm = assemble(params, opts)?;
    let quad = opts.quad();
    let hankel = opts.execution.map(t_grid, |&t| {
        hankel_on_contour(t, params, &asm.contour, &asm.roots, &quad)
    });
    let mut out = DecayDecomposition {
        params: *params,
        t: t_grid.to_vec(),
        poles: asm.poles,
        pole_terms: asm.pole_terms,
        confluent: asm.confluent,
        hankel,
        total: Vec::new(),
        tilted_contour: asm.contour.tilted,
    };
    out.total = (0..t_grid.len())
        .map(|i| out.pole_part(i) + out.hankel[i].h1 + out.hankel[i].h2)
        .collect();
    Ok(out)
}
