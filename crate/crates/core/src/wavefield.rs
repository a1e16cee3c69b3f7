//! Reconstructed scattering wavefunction and recovery of the contact
//! strengths from it.
//!
//! On the axis `ρ = 0` the field is
//!
//! ```text
//! ψ(z) = −ν₁/(2|z−a|) − ν₂/(2|z+a|) + S(z)
//! S(z) = e^{ikz}/√π − (i/k)[ν₁e^{ik|z−a|} + ν₂e^{ik|z+a|}] − ½[ν₁Λ̃(2|z−a|) + ν₂Λ̃(2|z+a|)]
//! ```
//!
//! with `νⱼ = a₃D·ηⱼ`. The factor `1/√π = φₙ(0)` of every transverse mode is
//! kept in `S`, while [`psi0`] and [`psi_n`] return the longitudinal parts
//! without it.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::WaveguideParams;
use crate::regsums;
use crate::scattering::{AmplitudePair, EtaPair};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Relative agreement required between the two routes to `A₀`, `B₀`.
pub const ROUTE_TOLERANCE: f64 = 1e-12;

/// Offsets from the impurity used for the one-sided limits.
const LIMIT_OFFSETS: [f64; 3] = [1e-3, 5e-4, 2.5e-4];
/// Base step of the central difference for `S''`.
const SECOND_DERIVATIVE_STEP: f64 = 1e-4;

/// Open- and closed-channel coefficients of the scattered wave.
///
/// The closed-channel coefficients are stored reduced,
/// `Cₙ/(2cosh kₙa)` and `Dₙ/(2sinh kₙa)`: the plain `Cₙ`, `Dₙ` grow like
/// `e^{kₙa}/kₙ` and overflow for wide separations, whereas the reduced ones
/// fall off as `1/kₙ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeCoefficients {
    pub a0: Complex64,
    pub b0: Complex64,
    /// `Cₙ/(2cosh kₙa)` for `n = 1..=n_max`.
    pub cn_reduced: Vec<Complex64>,
    /// `Dₙ/(2sinh kₙa)` for `n = 1..=n_max`.
    pub dn_reduced: Vec<Complex64>,
    weighted_even: Complex64,
    weighted_odd: Complex64,
    epsilon: f64,
    a_half_sep: f64,
}

impl ModeCoefficients {
    /// `Cₙ/(2cosh kₙa)` for any `n ≥ 1`.
    pub fn c_reduced(&self, n: u32) -> Complex64 {
        -self.weighted_even * (0.5 * libm::sqrt(PI) / closed_momentum(n, self.epsilon))
    }

    /// `Dₙ/(2sinh kₙa)` for any `n ≥ 1`.
    pub fn d_reduced(&self, n: u32) -> Complex64 {
        -self.weighted_odd * (0.5 * libm::sqrt(PI) / closed_momentum(n, self.epsilon))
    }

    /// Plain `Cₙ = −(√π a₃D/kₙ) cosh(kₙa)(η₁ + η₂)`; overflows for large `kₙa`.
    pub fn cn(&self, n: u32) -> Complex64 {
        let kn = closed_momentum(n, self.epsilon);
        self.c_reduced(n) * (2.0 * libm::cosh(kn * self.a_half_sep))
    }

    /// Plain `Dₙ = −(√π a₃D/kₙ) sinh(kₙa)(η₁ − η₂)`; overflows for large `kₙa`.
    pub fn dn(&self, n: u32) -> Complex64 {
        let kn = closed_momentum(n, self.epsilon);
        self.d_reduced(n) * (2.0 * libm::sinh(kn * self.a_half_sep))
    }
}

fn closed_momentum(n: u32, eps: f64) -> f64 {
    2.0 * libm::sqrt(f64::from(n) + eps)
}

fn agree(x: Complex64, y: Complex64) -> f64 {
    let scale = x.norm().max(y.norm());
    if scale == 0.0 {
        0.0
    } else {
        (x - y).norm() / scale
    }
}

/// Mode coefficients from both the amplitudes and the contact strengths.
///
/// `A₀ = f_e/(2cos ka) + i f_o/(2sin ka)` must agree with
/// `A₀ = −i(√π/k)·a₃Dη₁` (and `B₀` likewise with `η₂`); a disagreement means
/// `f` and `e` were produced from different parameters or conventions and
/// is reported as [`Error::RouteMismatch`].
pub fn mode_coefficients(
    p: &WaveguideParams,
    f: &AmplitudePair,
    e: &EtaPair,
    n_max: u32,
) -> Result<ModeCoefficients> {
    if p.is_single_center() {
        return Err(Error::SingleCenterInput);
    }
    let a0 = 0.5 * (f.even_over_cos + I * f.odd_over_sin);
    let b0 = 0.5 * (f.even_over_cos - I * f.odd_over_sin);
    let prefactor = libm::sqrt(PI) / p.ka_perp();
    let a0_eta = -I * prefactor * e.weighted1();
    let b0_eta = -I * prefactor * e.weighted2();
    // Normwise: A₀ and B₀ can be far smaller than the two terms they are
    // built from.
    let terms = 0.5 * (f.even_over_cos.norm() + f.odd_over_sin.norm());
    let relative = |x: Complex64, y: Complex64| {
        let scale = x.norm().max(y.norm()).max(terms);
        if scale == 0.0 {
            0.0
        } else {
            (x - y).norm() / scale
        }
    };
    let relative = relative(a0, a0_eta).max(relative(b0, b0_eta));
    if !(relative <= ROUTE_TOLERANCE) {
        return Err(Error::RouteMismatch {
            what: "open-channel coefficients",
            relative,
        });
    }
    let mut m = ModeCoefficients {
        a0,
        b0,
        cn_reduced: Vec::new(),
        dn_reduced: Vec::new(),
        weighted_even: e.weighted_even,
        weighted_odd: e.weighted_odd,
        epsilon: p.epsilon(),
        a_half_sep: p.a_half_sep(),
    };
    m.cn_reduced = (1..=n_max).map(|n| m.c_reduced(n)).collect();
    m.dn_reduced = (1..=n_max).map(|n| m.d_reduced(n)).collect();
    Ok(m)
}

/// Open-channel part `ψ₀(z) = e^{ikz} + A₀e^{ik|z−a|} + B₀e^{ik|z+a|}`.
pub fn psi0(z: f64, p: &WaveguideParams, m: &ModeCoefficients) -> Complex64 {
    let k = p.ka_perp();
    let a = p.a_half_sep();
    Complex64::cis(k * z)
        + m.a0 * Complex64::cis(k * (z - a).abs())
        + m.b0 * Complex64::cis(k * (z + a).abs())
}

/// Closed-channel part `ψₙ(z)`, even plus odd:
/// `Cₙ/(2cosh kₙa)[e^{−kₙ|z−a|} + e^{−kₙ|z+a|}] + Dₙ/(2sinh kₙa)[e^{−kₙ|z−a|} − e^{−kₙ|z+a|}]`.
pub fn psi_n(z: f64, n: u32, p: &WaveguideParams, m: &ModeCoefficients) -> Complex64 {
    let kn = closed_momentum(n, p.epsilon());
    let right = libm::exp(-kn * (z - p.a_half_sep()).abs());
    let left = libm::exp(-kn * (z + p.a_half_sep()).abs());
    m.c_reduced(n) * (right + left) + m.d_reduced(n) * (right - left)
}

/// On-axis field at one point, split into its singular and regular parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisValue {
    pub z: f64,
    /// Coefficient of `1/|z−a|`, `−a₃Dη₁/2`.
    pub singular1: Complex64,
    /// Coefficient of `1/|z+a|`, `−a₃Dη₂/2`.
    pub singular2: Complex64,
    /// `S(z)`.
    pub regular: Complex64,
    a_half_sep: f64,
}

impl AxisValue {
    /// The full `ψ(z, ρ = 0)`; `None` on an impurity.
    pub fn total(&self) -> Option<Complex64> {
        let d1 = (self.z - self.a_half_sep).abs();
        let d2 = (self.z + self.a_half_sep).abs();
        if d1 == 0.0 || d2 == 0.0 {
            return None;
        }
        Some(self.singular1 / d1 + self.singular2 / d2 + self.regular)
    }
}

/// Evaluate `ψ(z, ρ = 0)` for contact strengths `e`.
pub fn psi_axis(z: f64, p: &WaveguideParams, e: &EtaPair) -> Result<AxisValue> {
    let (nu1, nu2) = (e.weighted1(), e.weighted2());
    Ok(AxisValue {
        z,
        singular1: -0.5 * nu1,
        singular2: -0.5 * nu2,
        regular: regular_part(z, p, nu1, nu2)?,
        a_half_sep: p.a_half_sep(),
    })
}

fn regular_part(z: f64, p: &WaveguideParams, nu1: Complex64, nu2: Complex64) -> Result<Complex64> {
    let k = p.ka_perp();
    let a = p.a_half_sep();
    let eps = p.epsilon();
    let (d1, d2) = ((z - a).abs(), (z + a).abs());
    let plane = Complex64::cis(k * z) / libm::sqrt(PI);
    let open = -(I / k) * (nu1 * Complex64::cis(k * d1) + nu2 * Complex64::cis(k * d2));
    let closed = -0.5
        * (nu1 * regsums::lambda_tilde(2.0 * d1, eps)?
            + nu2 * regsums::lambda_tilde(2.0 * d2, eps)?);
    Ok(plane + open + closed)
}

/// `S'(z)`, using `dΛ̃/dx = −F̃`.
fn regular_slope(z: f64, p: &WaveguideParams, nu1: Complex64, nu2: Complex64) -> Result<Complex64> {
    let k = p.ka_perp();
    let a = p.a_half_sep();
    let eps = p.epsilon();
    let (d1, d2) = ((z - a).abs(), (z + a).abs());
    let (s1, s2) = (sign(z - a), sign(z + a));
    let plane = I * k * Complex64::cis(k * z) / libm::sqrt(PI);
    let t1 = nu1 * s1 * (Complex64::cis(k * d1) + regsums::f_tilde(2.0 * d1, eps)?);
    let t2 = nu2 * s2 * (Complex64::cis(k * d2) + regsums::f_tilde(2.0 * d2, eps)?);
    Ok(plane + t1 + t2)
}

fn sign(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// `S''(z)` by Richardson-extrapolated central differences of `S'`.
fn regular_curvature(
    z: f64,
    p: &WaveguideParams,
    nu1: Complex64,
    nu2: Complex64,
) -> Result<Complex64> {
    let central = |h: f64| -> Result<Complex64> {
        let hi = regular_slope(z + h, p, nu1, nu2)?;
        let lo = regular_slope(z - h, p, nu1, nu2)?;
        Ok((hi - lo) / (2.0 * h))
    };
    let coarse = central(SECOND_DERIVATIVE_STEP)?;
    let fine = central(0.5 * SECOND_DERIVATIVE_STEP)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// `½ d²/dz²[(z² − a²)ψ] = S + 2zS' + ½(z² − a²)S''`; the singular parts
/// drop out identically.
fn regularized_curvature(
    z: f64,
    p: &WaveguideParams,
    nu1: Complex64,
    nu2: Complex64,
) -> Result<Complex64> {
    let a = p.a_half_sep();
    let s = regular_part(z, p, nu1, nu2)?;
    let ds = regular_slope(z, p, nu1, nu2)?;
    let d2s = regular_curvature(z, p, nu1, nu2)?;
    Ok(s + 2.0 * z * ds + 0.5 * (z * z - a * a) * d2s)
}

/// One-sided limit at `z → a⁺` (`side = 1`) or `z → −a⁻` (`side = −1`),
/// by two levels of Richardson extrapolation over the fixed offsets.
fn one_sided_limit(
    p: &WaveguideParams,
    side: f64,
    nu1: Complex64,
    nu2: Complex64,
) -> Result<Complex64> {
    let a = p.a_half_sep();
    let mut q = [Complex64::new(0.0, 0.0); 3];
    for (slot, &delta) in q.iter_mut().zip(LIMIT_OFFSETS.iter()) {
        *slot = regularized_curvature(side * (a + delta), p, nu1, nu2)?;
    }
    let r1 = 2.0 * q[1] - q[0];
    let r2 = 2.0 * q[2] - q[1];
    Ok((4.0 * r2 - r1) / 3.0)
}

/// Apply the regularization operator to the field built from `e`.
///
/// Returns `η₁ = ½ d²/dz²[(z−a)(z+a)ψ]` at `z → a⁺` and `η₂` likewise at
/// `z → −a⁻`. The weighted fields of the result are those of `e`, from
/// which the field was built.
pub fn eta_from_wavefunction(p: &WaveguideParams, e: &EtaPair) -> Result<EtaPair> {
    if p.is_single_center() {
        return Err(Error::SingleCenterInput);
    }
    let (nu1, nu2) = (e.weighted1(), e.weighted2());
    Ok(EtaPair {
        eta1: one_sided_limit(p, 1.0, nu1, nu2)?,
        eta2: one_sided_limit(p, -1.0, nu1, nu2)?,
        weighted_even: e.weighted_even,
        weighted_odd: e.weighted_odd,
    })
}

/// `max(|Δη₁|/|η₁|, |Δη₂|/|η₂|)` between `e` and its reconstruction.
pub fn roundtrip_error(p: &WaveguideParams, e: &EtaPair) -> Result<f64> {
    let back = eta_from_wavefunction(p, e)?;
    Ok(agree(back.eta1, e.eta1).max(agree(back.eta2, e.eta2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regsums::sums_for;
    use crate::scattering::{amplitudes_closed, eta_pair, gh_chi, gh_chi_with, ContactTerm};

    fn setup(
        k: f64,
        a: f64,
        q: f64,
        term: ContactTerm,
    ) -> (WaveguideParams, AmplitudePair, EtaPair) {
        let p = WaveguideParams::new(k, a, q).unwrap();
        let s = sums_for(&p).unwrap();
        let f = amplitudes_closed(&p, &s).unwrap();
        let e = eta_pair(&gh_chi_with(&p, &s, term).unwrap()).unwrap();
        (p, f, e)
    }

    #[test]
    fn routes_agree_and_mismatch_is_caught() {
        let (p, f, e) = setup(0.0707, 0.5, 2.0, ContactTerm::Published);
        let m = mode_coefficients(&p, &f, &e, 5).unwrap();
        assert_eq!(m.cn_reduced.len(), 5);
        let (_, _, other) = setup(0.0707, 0.5, 2.0, ContactTerm::SeriesLimit);
        assert!(matches!(
            mode_coefficients(&p, &f, &other, 5),
            Err(Error::RouteMismatch { .. })
        ));
    }

    #[test]
    fn even_only_amplitudes() {
        let p = WaveguideParams::new(0.3, 0.4, 1.0).unwrap();
        let z = Complex64::new(0.0, 0.0);
        let fe = Complex64::new(-0.2, -0.4);
        let f = AmplitudePair::from_amplitudes(p.ka(), fe, z);
        let nu_sum = f.even_over_cos / (-I * libm::sqrt(PI) / p.ka_perp());
        let e = EtaPair {
            eta1: 0.5 * nu_sum,
            eta2: 0.5 * nu_sum,
            weighted_even: nu_sum,
            weighted_odd: z,
        };
        let m = mode_coefficients(&p, &f, &e, 3).unwrap();
        assert_eq!(m.a0, m.b0);
        assert!((m.a0 - fe / (2.0 * libm::cos(p.ka()))).norm() < 1e-15);
        assert!(m.dn_reduced.iter().all(|d| d.norm() == 0.0));
        // ψₙ(0) = Cₙ e^{−kₙa}/cosh(kₙa); the odd part vanishes at z = 0.
        let kn = closed_momentum(2, p.epsilon());
        let expect = m.cn(2) * libm::exp(-kn * 0.4) / libm::cosh(kn * 0.4);
        assert!((psi_n(0.0, 2, &p, &m) - expect).norm() < 1e-15);
    }

    #[test]
    fn closed_channel_parity_and_decay() {
        let (p, f, e) = setup(0.5, 0.6, -0.7, ContactTerm::Published);
        let m = mode_coefficients(&p, &f, &e, 3).unwrap();
        let n = 1;
        let sym = psi_n(1.2, n, &p, &m) + psi_n(-1.2, n, &p, &m);
        let kn = closed_momentum(n, p.epsilon());
        let even_part = m.c_reduced(n) * (libm::exp(-kn * 0.6) + libm::exp(-kn * 1.8));
        assert!((sym - 2.0 * even_part).norm() < 1e-14);
        for &z in &[0.7f64, 1.0, 3.0, -0.7, -2.0] {
            let at_edge = psi_n(0.6 * z.signum(), n, &p, &m).norm();
            let bound = at_edge * libm::exp(-kn * (f64::abs(z) - 0.6));
            assert!(psi_n(z, n, &p, &m).norm() <= bound * (1.0 + 1e-12));
        }
    }

    #[test]
    fn open_channel_asymptotics() {
        let (p, f, e) = setup(0.0707, 0.5, 2.0, ContactTerm::Published);
        let m = mode_coefficients(&p, &f, &e, 1).unwrap();
        let k = p.ka_perp();
        let z = 20.0 / k;
        let fwd = psi0(z, &p, &m) - Complex64::cis(k * z) * (1.0 + f.f_e + f.f_o);
        assert!(fwd.norm() < 1e-12);
        let back =
            psi0(-z, &p, &m) - Complex64::cis(-k * z) - Complex64::cis(k * z) * (f.f_e - f.f_o);
        assert!(back.norm() < 1e-12);
    }

    #[test]
    fn symmetric_strengths_give_even_regular_part() {
        let p = WaveguideParams::new(0.2, 0.5, 1.0).unwrap();
        let nu = Complex64::new(0.3, -0.2);
        let e = EtaPair {
            eta1: nu,
            eta2: nu,
            weighted_even: 2.0 * nu,
            weighted_odd: Complex64::new(0.0, 0.0),
        };
        // The plane wave is not parity-symmetric, so compare the scattered part.
        let scattered = |z: f64| {
            psi_axis(z, &p, &e).unwrap().regular - Complex64::cis(0.2 * z) / libm::sqrt(PI)
        };
        for &z in &[0.1, 0.7, 2.3] {
            assert!((scattered(z) - scattered(-z)).norm() < 1e-14);
        }
    }

    #[test]
    fn plane_wave_recovers_source_term() {
        let p = WaveguideParams::non_interacting(0.0707, 0.5).unwrap();
        let g = gh_chi(&p, &sums_for(&p).unwrap()).unwrap();
        let e = eta_pair(&g).unwrap();
        let back = eta_from_wavefunction(&p, &e).unwrap();
        assert!((back.eta1 - g.chi).norm() < 1e-9 * g.chi.norm());
        assert!((back.eta2 - g.chi.conj()).norm() < 1e-9 * g.chi.norm());
    }

    #[test]
    fn series_limit_strengths_are_self_consistent() {
        for &(k, a, q) in &[(0.0707, 0.5, 2.0), (0.5, 0.2, -1.3), (1.2, 1.1, 0.4)] {
            let (p, _, e) = setup(k, a, q, ContactTerm::SeriesLimit);
            let err = roundtrip_error(&p, &e).unwrap();
            assert!(err < 1e-6, "({k},{a},{q}): {err}");
        }
    }

    #[test]
    fn published_strengths_miss_by_a_over_ratio() {
        let (p, _, e) = setup(0.0707, 0.5, 2.0, ContactTerm::Published);
        let back = eta_from_wavefunction(&p, &e).unwrap();
        // The recovered strength differs by −a·a₃D·η₁ = −(a/q)η₁.
        let expected = e.eta1 * (1.0 - 0.5 / 2.0);
        assert!((back.eta1 - expected).norm() < 1e-6 * e.eta1.norm());
    }
}
