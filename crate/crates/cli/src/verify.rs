//! Invariant suite run by `cir verify`.

use cir_core::cir::cir_total;
use cir_core::effective1d::verify_roundtrip;
use cir_core::regsums::{hurwitz_zeta_half, sums_for};
use cir_core::scattering::{
    amplitudes_closed, amplitudes_via_eta, eta_pair, gh_chi, gh_chi_with, transmissions,
    ContactTerm,
};
use cir_core::wavefield::roundtrip_error;
use cir_core::{Complex64, WaveguideParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn sample(seed: u64, n: usize) -> Vec<WaveguideParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let k = 10f64.powf(rng.gen_range(-4.0..1.95f64.log10()));
            let a = 10f64.powf(rng.gen_range(-3.0..3f64.log10()));
            let q = rng.gen_range(-10.0..10.0);
            WaveguideParams::new(k, a, q).expect("sample inside the window")
        })
        .collect()
}

fn relative(x: Complex64, y: Complex64) -> f64 {
    let scale = x.norm().max(y.norm());
    if scale == 0.0 {
        0.0
    } else {
        (x - y).norm() / scale
    }
}

/// Worst value of `f` over the sample; a failed evaluation counts as infinite.
fn worst<F>(points: &[WaveguideParams], f: F) -> f64
where
    F: Fn(&WaveguideParams) -> Option<f64> + Sync,
{
    points
        .par_iter()
        .map(|p| f(p).unwrap_or(f64::INFINITY))
        .reduce(|| 0.0, f64::max)
}

fn check(name: &'static str, value: f64, bound: f64, what: &str) -> Check {
    Check {
        name,
        passed: value <= bound,
        detail: format!("{what} = {value:.3e} (bound {bound:.0e})"),
    }
}

pub fn run(samples: usize, seed: u64) -> Vec<Check> {
    let points = sample(seed, samples);
    let mut checks = Vec::new();

    let unitarity = worst(&points, |p| {
        let f = amplitudes_closed(p, &sums_for(p).ok()?).ok()?;
        let t = transmissions(&f).ok()?;
        Some(f.unitarity_residual().max((t.t_tot + t.r - 1.0).abs()))
    });
    checks.push(check("unitarity", unitarity, 1e-10, "max residual"));

    let routes = worst(&points, |p| {
        let s = sums_for(p).ok()?;
        let closed = amplitudes_closed(p, &s).ok()?;
        let via = amplitudes_via_eta(p, &eta_pair(&gh_chi(p, &s).ok()?).ok()?);
        Some(relative(closed.f_e, via.f_e).max(relative(closed.f_o, via.f_o)))
    });
    checks.push(check(
        "amplitude routes",
        routes,
        1e-12,
        "max relative difference",
    ));

    let effective = worst(&points, |p| {
        let f = amplitudes_closed(p, &sums_for(p).ok()?).ok()?;
        if f.transmission_amplitude().norm() <= 1e-3 {
            return Some(0.0);
        }
        verify_roundtrip(p).ok()
    });
    checks.push(check(
        "effective 1D roundtrip",
        effective,
        1e-10,
        "max |delta f|",
    ));

    // The series-limit on-site term is the one the axial wavefunction obeys.
    let wave_points: Vec<WaveguideParams> = [
        (0.0707, 0.5, 2.0),
        (7.07e-5, 0.1, 1.46),
        (0.0707, 0.01, -1.0),
        (0.5, 1.0, 0.7),
        (1.2, 0.3, -2.0),
    ]
    .iter()
    .map(|&(k, a, q)| WaveguideParams::new(k, a, q).expect("fixed point"))
    .collect();
    let wave = worst(&wave_points, |p| {
        let s = sums_for(p).ok()?;
        let e = eta_pair(&gh_chi_with(p, &s, ContactTerm::SeriesLimit).ok()?).ok()?;
        roundtrip_error(p, &e).ok()
    });
    checks.push(check(
        "contact strengths from wavefunction",
        wave,
        1e-6,
        "max relative error",
    ));

    let p = WaveguideParams::new(0.0707, 0.5, 0.0).expect("fixed point");
    let total = sums_for(&p).and_then(|s| cir_total(&p, &s));
    let (minus, plus) = match total {
        Ok(t) => (t.minus.unwrap_or(f64::NAN), t.plus.unwrap_or(f64::NAN)),
        Err(_) => (f64::NAN, f64::NAN),
    };
    checks.push(Check {
        name: "total resonance positions",
        passed: (minus - 0.42).abs() <= 0.02 && (plus - 3.04).abs() <= 0.02,
        detail: format!(
            "{minus:.5} and {plus:.5} at ka_perp = 0.0707, a = 0.5 (expected 0.42, 3.04)"
        ),
    });

    let p = WaveguideParams::new(7.07e-5, 1e-6, 0.0).expect("fixed point");
    let plus = sums_for(&p)
        .and_then(|s| cir_total(&p, &s))
        .ok()
        .and_then(|t| t.plus)
        .unwrap_or(f64::NAN);
    let zeta = hurwitz_zeta_half(1.0).map(|z| -z).unwrap_or(f64::NAN);
    checks.push(Check {
        name: "single-center limit",
        passed: (plus - 1.460_354_5).abs() <= 1e-3 && (plus - zeta).abs() <= 1e-3,
        detail: format!("{plus:.7} at a = 1e-6 (-zeta(1/2) = {zeta:.7})"),
    });
    checks
}
