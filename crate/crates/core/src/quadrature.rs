// Copyright 2026 nhbath Contributors
// SPDX-License-Identifier: Apache-2.0

//! Quadrature for complex-valued integrands.
//!
//! * [`adaptive_gk21`]: globally adaptive 10-point Gauss / 21-point Kronrod
//!   rule on a finite interval, bisecting the worst subinterval until the
//!   summed error estimate meets the tolerance.
//! * [`circle_moments`]: trapezoidal rule on a circle, which converges
//!   geometrically for integrands analytic in an annulus around the contour.

use std::f64::consts::PI;

use num_complex::Complex64;

// Kronrod abscissae on [0, 1]; odd indices are the 10-point Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_814_970_770,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_intervals: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

fn gk21<F>(f: &F, a: f64, b: f64) -> Segment
where
    F: Fn(f64) -> Complex64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut values = [(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)); 10];
    let mut kronrod = fc * WGK[10];
    let mut gauss = Complex64::new(0.0, 0.0);
    for i in 0..10 {
        let dx = half * XGK[i];
        let (lo, hi) = (f(center - dx), f(center + dx));
        values[i] = (lo, hi);
        kronrod += (lo + hi) * WGK[i];
        if i % 2 == 1 {
            gauss += (lo + hi) * WG[i / 2];
        }
    }
    // QUADPACK-style rescaling against the spread of f about its mean.
    let mean = kronrod * 0.5;
    let mut spread = WGK[10] * (fc - mean).norm();
    for (i, (lo, hi)) in values.iter().enumerate() {
        spread += WGK[i] * ((lo - mean).norm() + (hi - mean).norm());
    }
    let value = kronrod * half;
    let raw_err = ((kronrod - gauss) * half).norm();
    let spread = spread * half.abs();
    let error = if raw_err > 0.0 && spread > 0.0 {
        let scale = (200.0 * raw_err / spread).powf(1.5);
        (raw_err * scale.min(1.0)).max(50.0 * f64::EPSILON * value.norm())
    } else {
        raw_err
    };
    Segment { a, b, value, error }
}

/// Integrates `f` over `breakpoints[0]..breakpoints[last]`, starting from the
/// subintervals given by consecutive breakpoints.
pub fn adaptive_gk21<F>(f: F, breakpoints: &[f64], opts: &QuadOptions) -> QuadResult
where
    F: Fn(f64) -> Complex64,
{
    assert!(breakpoints.len() >= 2, "need at least one interval");
    let mut segments: Vec<Segment> = breakpoints
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| gk21(&f, w[0], w[1]))
        .collect();
    let mut evaluations = 21 * segments.len();

    loop {
        let value: Complex64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        let target = opts.abs_tol.max(opts.rel_tol * value.norm());
        if error <= target {
            return QuadResult {
                value,
                error,
                evaluations,
                converged: true,
            };
        }
        if segments.len() >= opts.max_intervals {
            return QuadResult {
                value,
                error,
                evaluations,
                converged: false,
            };
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("non-empty");
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            // interval exhausted at machine resolution
            segments.push(Segment { error: 0.0, ..seg });
            continue;
        }
        segments.push(gk21(&f, seg.a, mid));
        segments.push(gk21(&f, mid, seg.b));
        evaluations += 42;
    }
}

/// Moments `M_n = (1/2 pi i) \oint f(s) (s - center)^n ds`, `n = 0..n_moments`,
/// over the circle `|s - center| = radius` sampled at `nodes` equispaced points.
///
/// `M_0` is the sum of residues enclosed by the circle.
pub fn circle_moments<F>(
    f: F,
    center: Complex64,
    radius: f64,
    nodes: usize,
    n_moments: usize,
) -> Vec<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    let mut moments = vec![Complex64::new(0.0, 0.0); n_moments];
    for j in 0..nodes {
        let theta = 2.0 * PI * (j as f64 + 0.5) / nodes as f64;
        let offset = Complex64::from_polar(radius, theta);
        let mut weight = f(center + offset) * offset;
        for m in moments.iter_mut() {
            *m += weight;
            weight *= offset;
        }
    }
    for m in moments.iter_mut() {
        *m /= nodes as f64;
    }
    moments
}
