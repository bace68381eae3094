// Copyright 2026 nhbath Contributors
// SPDX-License-Identifier: Apache-2.0

//! Branch-cut (Hankel) contributions to the inverse Laplace transform.
//!
//! The Bromwich line is folded onto two rays leaving the branch points
//! `s = -gamma +- 2iJ` towards `Re(s) -> -inf`. Between the rays and left of
//! the original cut the continued amplitude lives on the second sheet, so the
//! jump across each ray is the difference of the two sheets there.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::quadrature::{adaptive_gk21, QuadOptions};
use crate::spectral::{find_poles, first_sheet_root};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Poles closer than this (units of `J`) to a ray trigger a tilted contour.
pub const PATH_TOL: f64 = 1e-6;

/// Tilt angle (radians) of a ray moved away from a pole.
const TILT: f64 = 0.05;

/// `y^2 = x t` is integrated up to `y^2 = Y2_MAX / cos(tilt)`: `e^{-50}` tail.
const Y2_MAX: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CutEdge {
    /// Ray from `-gamma + 2iJ`.
    Upper,
    /// Ray from `-gamma - 2iJ`.
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HankelPair {
    pub h1: Complex64,
    pub h2: Complex64,
    /// `h1 = c1 exp((-gamma + 2iJ) t)`.
    pub c1: Complex64,
    /// `h2 = c2 exp((-gamma - 2iJ) t)`.
    pub c2: Complex64,
    pub quadrature_error: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Ray {
    pub edge: CutEdge,
    pub origin: Complex64,
    /// Unit direction, `-1` for the untilted ray.
    pub dir: Complex64,
}

impl Ray {
    fn standard(params: &ModelParams, edge: CutEdge) -> Ray {
        let side = match edge {
            CutEdge::Upper => 1.0,
            CutEdge::Lower => -1.0,
        };
        Ray {
            edge,
            origin: Complex64::new(-params.gamma(), side * 2.0 * params.j()),
            dir: Complex64::new(-1.0, 0.0),
        }
    }

    /// Ray coordinate `u` with `p = origin + u dir`.
    fn coord(&self, p: Complex64) -> Complex64 {
        (p - self.origin) / self.dir
    }

    pub fn distance(&self, p: Complex64) -> f64 {
        let u = self.coord(p);
        if u.re <= 0.0 {
            (p - self.origin).norm()
        } else {
            u.im.abs()
        }
    }

    /// `p` lies on the side of the ray facing the other ray.
    fn inner_side(&self, p: Complex64) -> bool {
        let im = self.coord(p).im;
        match self.edge {
            CutEdge::Upper => im > 0.0,
            CutEdge::Lower => im < 0.0,
        }
    }

    /// First-sheet root `R` at `origin + x dir` in the factored form
    /// `sqrt(x d) sqrt(x d +- 4iJ)`, which stays accurate as `x -> 0`.
    fn root(&self, x: f64, sign: f64, j: f64) -> Complex64 {
        let xd = self.dir * x;
        let shift = match self.edge {
            CutEdge::Upper => 4.0 * j * I,
            CutEdge::Lower => -4.0 * j * I,
        };
        sign * xd.sqrt() * (xd + shift).sqrt()
    }

    /// Sign making [`Ray::root`] agree with the first-sheet root; constant
    /// along the ray since neither side vanishes for `x > 0`.
    fn root_sign(&self, params: &ModelParams) -> f64 {
        let j = params.j();
        let x = j;
        let w = self.origin + self.dir * x + params.gamma();
        let reference = first_sheet_root(w, j);
        let cand = self.root(x, 1.0, j);
        if (cand - reference).norm() <= (cand + reference).norm() {
            1.0
        } else {
            -1.0
        }
    }
}

/// The two integration rays, tilted away from any pole lying on them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Contour {
    pub upper: Ray,
    pub lower: Ray,
    pub tilted: bool,
}

impl Contour {
    pub fn new(params: &ModelParams, roots: &[Complex64]) -> Contour {
        let tol = PATH_TOL * params.j();
        let mut tilted = false;
        let mut place = |edge| {
            let ray = Ray::standard(params, edge);
            if roots.iter().all(|&p| ray.distance(p) >= tol) {
                return ray;
            }
            tilted = true;
            let options = [TILT, -TILT].map(|phi| Ray {
                dir: -Complex64::from_polar(1.0, phi),
                ..ray
            });
            let clearance = |r: &Ray| {
                roots
                    .iter()
                    .map(|&p| r.distance(p))
                    .fold(f64::INFINITY, f64::min)
            };
            if clearance(&options[0]) >= clearance(&options[1]) {
                options[0]
            } else {
                options[1]
            }
        };
        let upper = place(CutEdge::Upper);
        let lower = place(CutEdge::Lower);
        Contour {
            upper,
            lower,
            tilted,
        }
    }

    /// Region between the rays, left of the original cut, where the folded
    /// contour sees the second sheet.
    pub fn encloses_second_sheet(&self, s: Complex64, params: &ModelParams) -> bool {
        s.re + params.gamma() < 0.0 && self.upper.inner_side(s) && self.lower.inner_side(s)
    }
}

/// `(second sheet) - (first sheet)` of `c_a` just inside the upper ray, or
/// `(first) - (second)` for the lower one, written cancellation-free as
/// `+- 2 sigma R / (D_I D_II)`.
fn jump(x: f64, ray: &Ray, sign: f64, params: &ModelParams) -> Complex64 {
    let s = ray.origin + ray.dir * x;
    let w = s + params.gamma();
    let sigma = params.sigma();
    let r = ray.root(x, sign, params.j());
    let base = s + I * params.delta_omega0() - sigma * w;
    let d1 = base + sigma * r;
    let d2 = base - sigma * r;
    let v = 2.0 * sigma * r / (d1 * d2);
    match ray.edge {
        CutEdge::Upper => v,
        CutEdge::Lower => -v,
    }
}

/// Jump of `c_a` across the untilted ray of `edge` at distance `x` from the
/// branch point: `f_+^(II)(x) - f_+(x)` on the upper ray, `f_-(x) - f_-^(II)(x)`
/// on the lower one, with `f_+-(x) = c_a(-gamma - x +- 2iJ)`.
pub fn cut_discontinuity(x: f64, params: &ModelParams, edge: CutEdge) -> Result<Complex64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::invalid(
            "x",
            format!("must be finite and > 0, got {x}"),
        ));
    }
    let ray = Ray::standard(params, edge);
    let tol = PATH_TOL * params.j();
    for pole in find_poles(params)?.iter() {
        let distance = ray.distance(pole.s);
        if distance < tol {
            return Err(Error::PoleOnPath {
                re: pole.s.re,
                im: pole.s.im,
                distance,
            });
        }
    }
    Ok(jump(x, &ray, ray.root_sign(params), params))
}

struct RayIntegral {
    value: Complex64,
    error: f64,
    converged: bool,
}

/// `(-d / 2 pi i) \int_0^inf jump(x) exp((origin + x d) t) dx` with
/// `x = y^2 / t`.
fn ray_integral(
    t: f64,
    ray: &Ray,
    params: &ModelParams,
    roots: &[Complex64],
    opts: &QuadOptions,
) -> RayIntegral {
    let sign = ray.root_sign(params);
    let cos = (-ray.dir).re;
    let y_max = (Y2_MAX / cos).sqrt();
    let mut breaks = vec![0.0, y_max];
    for &p in roots {
        let u = ray.coord(p);
        if u.re > 0.0 {
            let y = (u.re * t).sqrt();
            if y < y_max {
                breaks.push(y);
            }
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let prefactor = -ray.dir / (2.0 * PI * I) * (ray.origin * t).exp();
    let q = adaptive_gk21(
        |y| {
            let x = y * y / t;
            if x == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            jump(x, ray, sign, params) * (ray.dir * (y * y)).exp() * (2.0 * y / t)
        },
        &breaks,
        opts,
    );
    RayIntegral {
        value: prefactor * q.value,
        error: prefactor.norm() * q.error,
        converged: q.converged,
    }
}

pub(crate) fn hankel_on_contour(
    t: f64,
    params: &ModelParams,
    contour: &Contour,
    roots: &[Complex64],
    opts: &QuadOptions,
) -> HankelPair {
    let up = ray_integral(t, &contour.upper, params, roots, opts);
    let lo = ray_integral(t, &contour.lower, params, roots, opts);
    let e1 = (Complex64::new(-params.gamma(), 2.0 * params.j()) * t).exp();
    let e2 = (Complex64::new(-params.gamma(), -2.0 * params.j()) * t).exp();
    HankelPair {
        h1: up.value,
        h2: lo.value,
        c1: up.value / e1,
        c2: lo.value / e2,
        quadrature_error: up.error + lo.error,
        converged: up.converged && lo.converged,
    }
}
