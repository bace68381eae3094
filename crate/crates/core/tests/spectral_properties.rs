// Copyright 2026 nhbath Contributors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;
use proptest::prelude::*;

use nhbath_core::quadrature::circle_moments;
use nhbath_core::spectral::{
    critical_gammas, find_poles, laplace_amplitude, pole_polynomial, self_energy, solve_quadratic,
    SheetLabel, StateKind,
};
use nhbath_core::ModelParams;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Textbook closed-form roots at zero detuning.
fn closed_form(g0: f64, j: f64, gamma: f64) -> [Complex64; 2] {
    let alpha = j * j / (g0 * g0) - 1.0;
    let disc = c(gamma * gamma + 4.0 * (j * j - g0 * g0), 0.0).sqrt();
    [
        (gamma + disc) / (2.0 * alpha),
        (gamma - disc) / (2.0 * alpha),
    ]
}

fn params() -> impl Strategy<Value = ModelParams> {
    (
        0.5f64..2.0,
        0.05f64..3.0,
        0.0f64..5.0,
        prop::bool::ANY,
        -1.5f64..1.5,
    )
        .prop_map(|(j, g, y, detuned, d)| {
            let dw = if detuned { d * j } else { 0.0 };
            ModelParams::new(g * j, j, y * j, dw).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn generic_roots_match_closed_form(
        j in 0.5f64..2.0,
        // the closed form itself cancels catastrophically as g0 -> J
        g in prop_oneof![0.05f64..0.99, 1.01f64..3.0],
        y in 0.0f64..5.0,
    ) {
        let p = ModelParams::new(g * j, j, y * j, 0.0).unwrap();
        let [a, b, cc] = pole_polynomial(&p);
        let roots = solve_quadratic(a, b, cc);
        prop_assert_eq!(roots.len(), 2);
        let oracle = closed_form(p.g0(), j, p.gamma());
        for o in oracle {
            let nearest = roots.iter().map(|r| (r - o).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(nearest <= 1e-10 * o.norm().max(j), "{} vs {:?}", o, roots);
        }
    }

    #[test]
    fn kind_sheet_and_real_part_are_consistent(p in params()) {
        let tol = 1e-9 * p.j();
        let gamma = p.gamma();
        for pole in find_poles(&p).unwrap().iter() {
            let re = pole.s.re;
            match pole.kind {
                StateKind::Bound => prop_assert!(re >= -gamma - tol && re <= tol, "{:?}", pole),
                StateKind::Resonant => prop_assert!(re < -gamma + tol, "{:?}", pole),
                StateKind::AntiResonant => prop_assert!(re > -tol, "{:?}", pole),
            }
            prop_assert_eq!(pole.sheet, pole.kind.sheet());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn self_energy_vanishes_at_large_real_part(p in params(), slope in -5.0f64..5.0) {
        let mags: Vec<f64> = [10.0, 100.0, 1000.0]
            .iter()
            .map(|&x| {
                let s = c(x * p.j(), slope * x * p.j());
                self_energy(s, &p, SheetLabel::FirstSheet).unwrap().norm()
            })
            .collect();
        prop_assert!(mags[0] > mags[1] && mags[1] > mags[2], "{:?}", mags);
    }

    #[test]
    fn sheets_differ_by_the_branch_root(p in params(), x in -6.0f64..6.0, y in -6.0f64..6.0) {
        let s = c(x, y);
        let w = s + p.gamma();
        prop_assume!(w.re.abs() > 1e-6 || w.im.abs() > 2.0 * p.j() + 1e-6);
        let diff = self_energy(s, &p, SheetLabel::SecondSheet).unwrap()
            - self_energy(s, &p, SheetLabel::FirstSheet).unwrap();
        let r = diff / (c(0.0, 1.0) * p.g0() * p.g0() / (p.j() * p.j()));
        let scale = w.norm_sqr() + 4.0 * p.j() * p.j();
        prop_assert!((r * r - (w * w + 4.0 * p.j() * p.j())).norm() <= 1e-12 * scale);
        // first-sheet branch: R / w has non-negative real part
        prop_assert!((r / w).re >= -1e-12);
    }

    #[test]
    fn residues_match_contour_quadrature(p in params()) {
        let set = find_poles(&p).unwrap();
        if set.len() == 2 {
            prop_assume!((set.poles[0].s - set.poles[1].s).norm() > 1e-3 * p.j());
        }
        for pole in set.iter() {
            let w = pole.s + p.gamma();
            let cut_distance = if w.im.abs() <= 2.0 * p.j() {
                w.re.abs()
            } else {
                (w - c(0.0, 2.0 * p.j() * w.im.signum())).norm()
            };
            if cut_distance < 1e-6 * p.j() {
                continue;
            }
            let sep = set.iter().map(|q| (q.s - pole.s).norm()).filter(|d| *d > 0.0).fold(f64::INFINITY, f64::min);
            // as wide as the nearest other singularity allows: the trapezoid
            // error falls like 4^-64 while round-off in the denominator
            // shrinks with the radius
            let radius = 0.25 * cut_distance.min(sep);
            let r = pole.residue.unwrap();
            let m = circle_moments(
                |s| laplace_amplitude(s, &p, pole.sheet).unwrap(),
                pole.s,
                radius,
                64,
                1,
            );
            prop_assert!((r - m[0]).norm() <= 1e-8 * r.norm().max(1.0), "{} vs {}", r, m[0]);
        }
    }

    #[test]
    fn pole_crosses_the_cut_at_gamma_c1(j in 0.5f64..2.0, g in 0.2f64..3.0) {
        let g0 = g * j;
        let gc1 = critical_gammas(&ModelParams::new(g0, j, 0.0, 0.0).unwrap()).unwrap().gamma_c1;
        let at = find_poles(&ModelParams::new(g0, j, gc1, 0.0).unwrap()).unwrap();
        let on_edge = at.iter().map(|q| (q.s.re + gc1).abs()).fold(f64::INFINITY, f64::min);
        prop_assert!(on_edge <= 1e-8 * j);
        let below = find_poles(&ModelParams::new(g0, j, gc1 * (1.0 - 1e-4), 0.0).unwrap()).unwrap();
        let above = find_poles(&ModelParams::new(g0, j, gc1 * (1.0 + 1e-4), 0.0).unwrap()).unwrap();
        let crossing = |set: &nhbath_core::spectral::PoleSet| {
            set.iter()
                .min_by(|a, b| (a.s.re + gc1).abs().total_cmp(&(b.s.re + gc1).abs()))
                .map(|q| q.kind)
        };
        let kinds = (crossing(&below), crossing(&above));
        prop_assert!(
            matches!(
                kinds,
                (Some(StateKind::Resonant), Some(StateKind::Bound))
                    | (Some(StateKind::Bound), Some(StateKind::Resonant))
            ),
            "{:?}",
            kinds
        );
    }

    #[test]
    fn double_root_at_gamma_c2(j in 0.5f64..2.0, g in 1.01f64..3.0) {
        let g0 = g * j;
        let gc2 = critical_gammas(&ModelParams::new(g0, j, 0.0, 0.0).unwrap())
            .unwrap()
            .gamma_c2
            .unwrap();
        let p = ModelParams::new(g0, j, gc2, 0.0).unwrap();
        let set = find_poles(&p).unwrap();
        prop_assert_eq!(set.len(), 2);
        prop_assert!((set.poles[0].s - set.poles[1].s).norm() < 1e-8 * j);
        let s = set.poles[0].s;
        let sigma = p.sigma();
        let den = (2.0 * sigma - 1.0) * s + gc2 * sigma;
        prop_assert!(den.norm() < 1e-8 * j);
    }
}
