//! Positions of the confinement-induced resonances on the `a⊥/a₃D` axis.
//!
//! Closed forms for the total (`1 + f_e + f_o = 0`), even (`1 + f_e = 0`),
//! odd (`1 + f_o = 0`) and dual (`f_e = f_o`) resonances, and a numerical
//! extremum finder that locates the same features directly on the
//! transmission curves.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::numeric::golden_section;
use crate::params::WaveguideParams;
use crate::regsums::RegularizedSums;
use crate::scattering::{amplitudes_closed, AmplitudePair};

/// Below this magnitude the dual-resonance prefactor is treated as zero.
pub const PREFACTOR_FLOOR: f64 = 1e-12;

/// Roots of the quadratic total-resonance condition.
///
/// `plus` is the larger root (the `+` branch of the square root), `minus`
/// the smaller one. Both are absent when the radicand is negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TotalCir {
    pub plus: Option<f64>,
    pub minus: Option<f64>,
    /// The radicand.
    pub discriminant: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CirSolutions {
    pub total_plus: Option<f64>,
    pub total_minus: Option<f64>,
    pub discriminant: f64,
    pub even: f64,
    pub odd: f64,
    pub dual: f64,
}

fn require_separation(p: &WaveguideParams) -> Result<()> {
    if p.is_single_center() {
        Err(Error::SingleCenterInput)
    } else {
        Ok(())
    }
}

/// ```text
/// a⊥/a₃D = −α/2 + 2a(1 − ε) ± √( β²/4 − (β/k) sin2ka + 4a²(1 + γ²)
///                                − 2aβ(γ + cos2ka) + (4aγ/k)(sin2ka + 2ka cos2ka) )
/// ```
pub fn cir_total(p: &WaveguideParams, s: &RegularizedSums) -> Result<TotalCir> {
    require_separation(p)?;
    let k = p.ka_perp();
    let a = p.a_half_sep();
    let ka = p.ka();
    let eps = p.epsilon();
    let (alpha, beta, gamma) = (s.alpha, s.beta, s.gamma);
    let (sin2, cos2) = libm::sincos(2.0 * ka);
    let centre = -0.5 * alpha + 2.0 * a * (1.0 - eps);
    let discriminant = 0.25 * beta * beta - beta / k * sin2 + 4.0 * a * a * (1.0 + gamma * gamma)
        - 2.0 * a * beta * (gamma + cos2)
        + 4.0 * a * gamma / k * (sin2 + 2.0 * ka * cos2);
    if !(discriminant >= 0.0) {
        return Ok(TotalCir {
            plus: None,
            minus: None,
            discriminant,
        });
    }
    let root = libm::sqrt(discriminant);
    Ok(TotalCir {
        plus: Some(centre + root),
        minus: Some(centre - root),
        discriminant,
    })
}

/// `−½(α + β) + sin(2ka)/k + 4a cos²(ka) + 2a(γ − ε)`.
///
/// Defined at `a = 0` too, where it reduces to `−α`.
pub fn cir_even(p: &WaveguideParams, s: &RegularizedSums) -> Result<f64> {
    let k = p.ka_perp();
    let a = p.a_half_sep();
    let ka = p.ka();
    let cos = libm::cos(ka);
    Ok(-0.5 * (s.alpha + s.beta)
        + libm::sin(2.0 * ka) / k
        + 4.0 * a * cos * cos
        + 2.0 * a * (s.gamma - p.epsilon()))
}

/// `−½(α − β) − sin(2ka)/k + 4a sin²(ka) − 2a(γ + ε)`.
pub fn cir_odd(p: &WaveguideParams, s: &RegularizedSums) -> Result<f64> {
    require_separation(p)?;
    let k = p.ka_perp();
    let a = p.a_half_sep();
    let ka = p.ka();
    let sin = libm::sin(ka);
    Ok(
        -0.5 * (s.alpha - s.beta) - libm::sin(2.0 * ka) / k + 4.0 * a * sin * sin
            - 2.0 * a * (s.gamma + p.epsilon()),
    )
}

/// ```text
/// [ (4ka²(ε − 1) + kaα) sin2ka − sin2ka/k − ½(α cos2ka − β) − 2a(ε cos2ka + γ) ]
///     / (cos2ka − 2ka sin2ka)
/// ```
pub fn cir_dual(p: &WaveguideParams, s: &RegularizedSums) -> Result<f64> {
    require_separation(p)?;
    let k = p.ka_perp();
    let a = p.a_half_sep();
    let ka = p.ka();
    let eps = p.epsilon();
    let (sin2, cos2) = libm::sincos(2.0 * ka);
    let prefactor = cos2 - 2.0 * ka * sin2;
    if !(prefactor.abs() >= PREFACTOR_FLOOR) {
        return Err(Error::DegeneratePrefactor { value: prefactor });
    }
    let bracket = (4.0 * k * a * a * (eps - 1.0) + ka * s.alpha) * sin2
        - sin2 / k
        - 0.5 * (s.alpha * cos2 - s.beta)
        - 2.0 * a * (eps * cos2 + s.gamma);
    Ok(bracket / prefactor)
}

pub fn cir_all(p: &WaveguideParams, s: &RegularizedSums) -> Result<CirSolutions> {
    let total = cir_total(p, s)?;
    Ok(CirSolutions {
        total_plus: total.plus,
        total_minus: total.minus,
        discriminant: total.discriminant,
        even: cir_even(p, s)?,
        odd: cir_odd(p, s)?,
        dual: cir_dual(p, s)?,
    })
}

/// Which feature of the transmission curves to locate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremumKind {
    /// Zeros of `T_tot = |1 + f_e + f_o|²`.
    TTotMin,
    /// Zeros of `T_e = |1 + f_e|²`.
    TeMin,
    /// Zeros of `T_o = |1 + f_o|²`.
    ToMin,
    /// Zeros of `R = |f_e − f_o|²`.
    RZero,
}

impl ExtremumKind {
    fn modulus(self, f: &AmplitudePair) -> f64 {
        let one = num_complex::Complex64::new(1.0, 0.0);
        match self {
            ExtremumKind::TTotMin => f.transmission_amplitude().norm(),
            ExtremumKind::TeMin => (one + f.f_e).norm(),
            ExtremumKind::ToMin => (one + f.f_o).norm(),
            ExtremumKind::RZero => f.reflection_amplitude().norm(),
        }
    }
}

/// Points of the uniform part of the search grid.
const BASE_POINTS: usize = 4001;
/// Geometric refinement around each single-channel resonance centre.
const CLUSTER_DECADES: i32 = 14;
const CLUSTER_PER_DECADE: i32 = 20;
/// Refined minima above this modulus are not zeros and are dropped.
const ZERO_THRESHOLD: f64 = 1e-6;

struct Curve<'a> {
    p: &'a WaveguideParams,
    s: &'a RegularizedSums,
}

impl Curve<'_> {
    fn at(&self, q: f64) -> Result<AmplitudePair> {
        amplitudes_closed(&self.p.with_inv_ratio(q)?, self.s)
    }

    fn modulus(&self, kind: ExtremumKind, q: f64) -> f64 {
        match self.at(q) {
            Ok(f) => kind.modulus(&f),
            // A pole of the amplitude is a point of full transmission in
            // that channel, never a zero of the modulus.
            Err(_) => f64::INFINITY,
        }
    }

    /// Centre of the single-channel resonance: `|f|²` is unimodal in the
    /// ratio, so a golden-section search over the whole range finds its peak.
    fn channel_centre(&self, lo: f64, hi: f64, odd: bool) -> f64 {
        golden_section(
            |q| match self.at(q) {
                Ok(f) if odd => -f.f_o.norm_sqr(),
                Ok(f) => -f.f_e.norm_sqr(),
                Err(_) => f64::NEG_INFINITY,
            },
            lo,
            hi,
            1e-13 * (hi - lo),
        )
    }
}

fn search_grid(lo: f64, hi: f64, centres: &[f64]) -> Vec<f64> {
    let mut grid: Vec<f64> = (0..BASE_POINTS)
        .map(|i| lo + (hi - lo) * (i as f64) / ((BASE_POINTS - 1) as f64))
        .collect();
    let span = hi - lo;
    for &c in centres {
        grid.push(c);
        for j in 0..=(CLUSTER_DECADES * CLUSTER_PER_DECADE) {
            let d = span * libm::pow(10.0, -(j as f64) / (CLUSTER_PER_DECADE as f64));
            for q in [c - d, c + d] {
                if q > lo && q < hi {
                    grid.push(q);
                }
            }
        }
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// Locate every zero of the chosen transmission or reflection curve in
/// `[lo, hi]`, to about `1e−12` relative in the ratio.
///
/// The curves are scanned on a uniform grid merged with geometric clusters
/// around the even and odd single-channel resonances, whose widths shrink
/// like `ka²·k` and would otherwise fall between grid points. Every strict
/// local minimum of the modulus is refined by golden-section search and kept
/// when the refined modulus is below `1e−6`.
pub fn find_extrema_numeric(
    p: &WaveguideParams,
    s: &RegularizedSums,
    lo: f64,
    hi: f64,
    kind: ExtremumKind,
) -> Result<Vec<f64>> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::NotBracketed { lo, hi });
    }
    let curve = Curve { p, s };
    let mut centres = Vec::new();
    centres.push(curve.channel_centre(lo, hi, false));
    if !p.is_single_center() {
        centres.push(curve.channel_centre(lo, hi, true));
    }
    let grid = search_grid(lo, hi, &centres);
    let values: Vec<f64> = grid.iter().map(|&q| curve.modulus(kind, q)).collect();

    let mut found: Vec<f64> = Vec::new();
    for i in 1..grid.len() - 1 {
        if !(values[i] < values[i - 1] && values[i] <= values[i + 1]) {
            continue;
        }
        let (a, b) = (grid[i - 1], grid[i + 1]);
        let xtol = 1e-13 * a.abs().max(b.abs()).max(1.0);
        let q = golden_section(|q| curve.modulus(kind, q), a, b, xtol);
        if curve.modulus(kind, q) <= ZERO_THRESHOLD {
            let tol = 1e-9 * q.abs().max(1.0);
            if found.last().is_none_or(|&prev| (q - prev).abs() > tol) {
                found.push(q);
            }
        }
    }
    if found.is_empty() {
        return Err(Error::NotBracketed { lo, hi });
    }
    Ok(found)
}
