//! Contact-strength system and the even/odd scattering amplitudes.
//!
//! The regularized contact strengths `η₁, η₂` at `z = ±a` solve
//!
//! ```text
//! G η₁ + H η₂ = χ,      H η₁ + G η₂ = χ*,      χ = e^{ika}(1 + 2iak)/√π
//! ```
//!
//! with `G = 1 + a₃D·g` and `H = a₃D·h`. The solve is carried out for the
//! products `a₃D·η`, which is what every downstream formula consumes; that
//! form stays finite at the unitary point `a⊥/a₃D = 0` and is exactly zero
//! without interaction. It is done in the parity basis
//! `a₃D(η₁ ± η₂) = (χ ± χ*) / (a⊥/a₃D + g ± h)`, which is the same 2×2 solve
//! without the cancellation that `η₁ − η₂` suffers when `ka → 0`.

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{Coupling, WaveguideParams};
use crate::regsums::{self, RegularizedSums};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Relative floor below which a denominator is treated as a pole.
pub const CONDITIONING_FLOOR: f64 = 1e-14;

/// Tolerance of the unitarity-circle check in [`transmissions`].
pub const UNITARITY_TOLERANCE: f64 = 1e-10;

/// Which value of `F̃` at coincident points enters the on-site term of `G`.
///
/// The on-site term is `−2a·a₃D·(1 + F̃₀)`. The published system uses
/// `F̃₀ = −ε`, and the resonance positions it predicts are those reproduced
/// by [`amplitudes_closed`]. The regularized series itself tends to
/// `F̃(0⁺, ε) = −1/2 − ε`; only that choice makes the contact strengths
/// exactly self-consistent with the reconstructed wavefunction (see
/// [`crate::wavefield::eta_from_wavefunction`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ContactTerm {
    #[default]
    Published,
    SeriesLimit,
}

impl ContactTerm {
    fn f_tilde_at_origin(self, eps: f64) -> Result<f64> {
        match self {
            ContactTerm::Published => Ok(-eps),
            ContactTerm::SeriesLimit => regsums::f_tilde(0.0, eps),
        }
    }
}

/// Coefficients of the contact-strength system.
///
/// `g_reduced` and `h_reduced` are `G` and `H` with the scattering length
/// factored out: `G = 1 + a₃D·g_reduced`, `H = a₃D·h_reduced`.
/// `even_reduced` and `odd_reduced` are `g_reduced ± h_reduced`, assembled
/// with `1 ± e^{2ika}` written as `2cos(ka)e^{ika}` and `−2i sin(ka)e^{ika}`;
/// subtracting the two fields instead loses every digit of the odd channel's
/// width once `ka ≲ 1e−6`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GhChi {
    pub g_reduced: Complex64,
    pub h_reduced: Complex64,
    pub even_reduced: Complex64,
    pub odd_reduced: Complex64,
    pub chi: Complex64,
    pub coupling: Coupling,
}

impl GhChi {
    /// `G`; infinite at `a⊥/a₃D = 0`.
    pub fn g(&self) -> Complex64 {
        Complex64::new(1.0, 0.0) + self.g_reduced * self.coupling.scattering_length()
    }

    /// `H`; infinite at `a⊥/a₃D = 0`.
    pub fn h(&self) -> Complex64 {
        self.h_reduced * self.coupling.scattering_length()
    }
}

/// Contact strengths and their products with `a₃D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaPair {
    pub eta1: Complex64,
    pub eta2: Complex64,
    /// `a₃D(η₁ + η₂)`.
    pub weighted_even: Complex64,
    /// `a₃D(η₁ − η₂)`.
    pub weighted_odd: Complex64,
}

impl EtaPair {
    /// `a₃D·η₁`.
    pub fn weighted1(&self) -> Complex64 {
        0.5 * (self.weighted_even + self.weighted_odd)
    }

    /// `a₃D·η₂`.
    pub fn weighted2(&self) -> Complex64 {
        0.5 * (self.weighted_even - self.weighted_odd)
    }
}

/// Even and odd confined scattering amplitudes.
///
/// Alongside `f_e`, `f_o` the reduced forms `f_e/cos(ka)` and `f_o/sin(ka)`
/// are kept, since mode coefficients and effective couplings divide by those
/// trigonometric factors; both amplitude routes produce the reduced forms
/// directly, so no `0/0` is ever evaluated at `ka → 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudePair {
    pub f_e: Complex64,
    pub f_o: Complex64,
    pub even_over_cos: Complex64,
    pub odd_over_sin: Complex64,
}

impl AmplitudePair {
    pub fn from_reduced(ka: f64, even_over_cos: Complex64, odd_over_sin: Complex64) -> Self {
        AmplitudePair {
            f_e: even_over_cos * libm::cos(ka),
            f_o: odd_over_sin * libm::sin(ka),
            even_over_cos,
            odd_over_sin,
        }
    }

    /// Build from plain amplitudes; the reduced forms are obtained by
    /// division and lose accuracy when `sin(ka)` or `cos(ka)` is tiny.
    pub fn from_amplitudes(ka: f64, f_e: Complex64, f_o: Complex64) -> Self {
        AmplitudePair {
            f_e,
            f_o,
            even_over_cos: f_e / libm::cos(ka),
            odd_over_sin: f_o / libm::sin(ka),
        }
    }

    pub fn zero() -> Self {
        let z = Complex64::new(0.0, 0.0);
        AmplitudePair {
            f_e: z,
            f_o: z,
            even_over_cos: z,
            odd_over_sin: z,
        }
    }

    /// `1 + f_e + f_o`, the transmission amplitude.
    pub fn transmission_amplitude(&self) -> Complex64 {
        Complex64::new(1.0, 0.0) + self.f_e + self.f_o
    }

    /// `f_e − f_o`, the reflection amplitude.
    pub fn reflection_amplitude(&self) -> Complex64 {
        self.f_e - self.f_o
    }

    /// `max(| |f_e|² + Re f_e |, | |f_o|² + Re f_o |)`.
    pub fn unitarity_residual(&self) -> f64 {
        let e = self.f_e.norm_sqr() + self.f_e.re;
        let o = self.f_o.norm_sqr() + self.f_o.re;
        e.abs().max(o.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmissionSet {
    pub t_tot: f64,
    pub t_e: f64,
    pub t_o: f64,
    pub r: f64,
}

/// Assemble `G`, `H` and `χ` with the published on-site term.
pub fn gh_chi(p: &WaveguideParams, s: &RegularizedSums) -> Result<GhChi> {
    gh_chi_with(p, s, ContactTerm::Published)
}

pub fn gh_chi_with(p: &WaveguideParams, s: &RegularizedSums, term: ContactTerm) -> Result<GhChi> {
    if p.is_single_center() {
        return Err(Error::SingleCenterInput);
    }
    let k = p.ka_perp();
    let a = p.a_half_sep();
    let ka = p.ka();
    let f0 = term.f_tilde_at_origin(p.epsilon())?;
    let e2 = Complex64::cis(2.0 * ka);
    let e1 = Complex64::cis(ka);
    let (sin, cos) = libm::sincos(ka);
    let g_reduced = Complex64::new(0.5 * s.alpha - 2.0 * a * (1.0 + f0), 1.0 / k);
    let h_reduced = 0.5 * s.beta + I * e2 / k - 2.0 * a * (e2 + s.gamma);
    let even_reduced =
        0.5 * (s.alpha + s.beta) + 2.0 * I * cos * e1 / k - 2.0 * a * (1.0 + f0 + e2 + s.gamma);
    let odd_reduced =
        0.5 * (s.alpha - s.beta) + 2.0 * sin * e1 / k - 2.0 * a * (1.0 + f0 - e2 - s.gamma);
    let chi = e1 * Complex64::new(1.0, 2.0 * ka) / libm::sqrt(PI);
    Ok(GhChi {
        g_reduced,
        h_reduced,
        even_reduced,
        odd_reduced,
        chi,
        coupling: p.coupling(),
    })
}

/// Solve the contact-strength system.
pub fn eta_pair(g: &GhChi) -> Result<EtaPair> {
    let chi = g.chi;
    let chi_c = chi.conj();
    let q = match g.coupling {
        Coupling::NonInteracting => {
            let zero = Complex64::new(0.0, 0.0);
            return Ok(EtaPair {
                eta1: chi,
                eta2: chi_c,
                weighted_even: zero,
                weighted_odd: zero,
            });
        }
        Coupling::Ratio(q) => q,
    };
    let even_den = g.even_reduced + q;
    let odd_den = g.odd_reduced + q;
    let scale = q.abs() + g.g_reduced.norm() + g.h_reduced.norm();
    let floor = CONDITIONING_FLOOR * scale;
    if even_den.norm() < floor || odd_den.norm() < floor {
        let det = (even_den * odd_den).norm();
        // Report |G² − H²| = |det| · a₃D².
        return Err(Error::IllConditioned {
            magnitude: det / (q * q),
        });
    }
    let weighted_even = (chi + chi_c) / even_den;
    let weighted_odd = (chi - chi_c) / odd_den;
    let eta1 = 0.5 * q * (weighted_even + weighted_odd);
    let eta2 = 0.5 * q * (weighted_even - weighted_odd);
    Ok(EtaPair {
        eta1,
        eta2,
        weighted_even,
        weighted_odd,
    })
}

/// Closed-form amplitudes.
///
/// ```text
/// f_e = −(cos²ka − ka·sin2ka) / { ½(1 + e^{2ika}) − ik[q/2 + (α+β)/4 − a(1 − ε + e^{2ika} + γ)] }
/// f_o = −(sin²ka + ka·sin2ka) / { ½(1 − e^{2ika}) − ik[q/2 + (α−β)/4 − a(1 − ε − e^{2ika} − γ)] }
/// ```
///
/// with `q = a⊥/a₃D` and `k = ka⊥`. The numerators are evaluated in their
/// factored forms `cos ka·(cos ka − 2ka sin ka)` and
/// `sin ka·(sin ka + 2ka cos ka)`.
pub fn amplitudes_closed(p: &WaveguideParams, s: &RegularizedSums) -> Result<AmplitudePair> {
    if p.is_single_center() {
        return Err(Error::SingleCenterInput);
    }
    let q = match p.coupling() {
        Coupling::NonInteracting => return Ok(AmplitudePair::zero()),
        Coupling::Ratio(q) => q,
    };
    let k = p.ka_perp();
    let a = p.a_half_sep();
    let ka = p.ka();
    let eps = p.epsilon();
    let (sin, cos) = libm::sincos(ka);
    let e2 = Complex64::cis(2.0 * ka);
    let ik = Complex64::new(0.0, k);

    // ½(1 ± e^{2ika}) as cos(ka)e^{ika} and −i sin(ka)e^{ika}: same value,
    // without the cancellation in 1 − cos 2ka at small ka.
    let e1 = Complex64::cis(ka);
    let even_den =
        cos * e1 - ik * (0.5 * q + 0.25 * (s.alpha + s.beta) - a * (1.0 - eps + e2 + s.gamma));
    let odd_den =
        -I * sin * e1 - ik * (0.5 * q + 0.25 * (s.alpha - s.beta) - a * (1.0 - eps - e2 - s.gamma));

    let even_num = cos - 2.0 * ka * sin;
    let odd_num = sin + 2.0 * ka * cos;
    guard_denominator(even_den, (even_num * cos).abs())?;
    guard_denominator(odd_den, (odd_num * sin).abs())?;
    Ok(AmplitudePair::from_reduced(
        ka,
        -even_num / even_den,
        -odd_num / odd_den,
    ))
}

fn guard_denominator(den: Complex64, numerator: f64) -> Result<()> {
    let m = den.norm();
    if !m.is_finite() || m == 0.0 || m < CONDITIONING_FLOOR * numerator {
        return Err(Error::IllConditioned { magnitude: m });
    }
    Ok(())
}

/// Amplitudes from the contact strengths:
/// `f_e = −i(√π/k) cos(ka)·a₃D(η₁ + η₂)`, `f_o = −(√π/k) sin(ka)·a₃D(η₁ − η₂)`.
pub fn amplitudes_via_eta(p: &WaveguideParams, e: &EtaPair) -> AmplitudePair {
    let prefactor = libm::sqrt(PI) / p.ka_perp();
    AmplitudePair::from_reduced(
        p.ka(),
        -I * prefactor * e.weighted_even,
        -prefactor * e.weighted_odd,
    )
}

/// Single-center even amplitude
/// `f_e = −(2i/k) / (a⊥/a₃D + 2i/k + Λ̃(0, ε))`, written as
/// `−1 / (1 − ik(a⊥/a₃D + Λ̃(0, ε))/2)`.
pub fn olshanii_fe(ka_perp: f64, coupling: Coupling) -> Result<Complex64> {
    let q = match coupling {
        Coupling::NonInteracting => return Ok(Complex64::new(0.0, 0.0)),
        Coupling::Ratio(q) => q,
    };
    let alpha = regsums::lambda_tilde(0.0, crate::params::epsilon(ka_perp))?;
    let c = 0.5 * ka_perp * (q + alpha);
    Ok(-1.0 / Complex64::new(1.0, -c))
}

/// Total, partial and reflected fluxes.
pub fn transmissions(f: &AmplitudePair) -> Result<TransmissionSet> {
    let residual = f.unitarity_residual();
    if !(residual <= UNITARITY_TOLERANCE) {
        return Err(Error::UnitarityViolation { residual });
    }
    let one = Complex64::new(1.0, 0.0);
    Ok(TransmissionSet {
        t_tot: f.transmission_amplitude().norm_sqr(),
        t_e: (one + f.f_e).norm_sqr(),
        t_o: (one + f.f_o).norm_sqr(),
        r: f.reflection_amplitude().norm_sqr(),
    })
}

/// Sums and closed-form amplitudes in one call.
pub fn amplitudes(p: &WaveguideParams) -> Result<AmplitudePair> {
    let s = regsums::sums_for(p)?;
    amplitudes_closed(p, &s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regsums::sums_for;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1e-300)
    }

    #[test]
    fn no_interaction_limits() {
        let p = WaveguideParams::non_interacting(0.0707, 0.5).unwrap();
        let s = sums_for(&p).unwrap();
        let g = gh_chi(&p, &s).unwrap();
        assert_eq!(g.g(), Complex64::new(1.0, 0.0));
        assert_eq!(g.h(), Complex64::new(0.0, 0.0));
        let e = eta_pair(&g).unwrap();
        assert_eq!(e.eta1, g.chi);
        assert_eq!(e.eta2, g.chi.conj());
        let f = amplitudes_closed(&p, &s).unwrap();
        assert_eq!(f.f_e.norm(), 0.0);
        assert_eq!(f.f_o.norm(), 0.0);

        let far = WaveguideParams::new(0.0707, 0.5, 1e12).unwrap();
        let f = amplitudes_closed(&far, &sums_for(&far).unwrap()).unwrap();
        assert!(f.f_e.norm() < 1e-9 && f.f_o.norm() < 1e-9);
    }

    #[test]
    fn single_center_rejected() {
        let p = WaveguideParams::new(0.0707, 0.0, 1.0).unwrap();
        let s = sums_for(&p).unwrap();
        assert_eq!(gh_chi(&p, &s), Err(Error::SingleCenterInput));
        assert_eq!(amplitudes_closed(&p, &s), Err(Error::SingleCenterInput));
    }

    #[test]
    fn g_minus_h_tends_to_one() {
        // G − H − 1 = O(a); shrink a by 10 and watch the deviation follow.
        let dev = |a: f64| {
            let p = WaveguideParams::new(0.0707, a, 2.0).unwrap();
            let g = gh_chi(&p, &sums_for(&p).unwrap()).unwrap();
            (g.g() - g.h() - 1.0).norm()
        };
        let (d1, d2) = (dev(1e-3), dev(1e-4));
        assert!(d2 < 0.2 * d1, "{d1} {d2}");
        assert!(dev(1e-7) < 1e-6);
    }

    #[test]
    fn eta_residual_and_symmetry() {
        let p = WaveguideParams::new(0.0707, 0.5, 2.0).unwrap();
        let g = gh_chi(&p, &sums_for(&p).unwrap()).unwrap();
        let e = eta_pair(&g).unwrap();
        let (gg, hh) = (g.g(), g.h());
        let r1 = gg * e.eta1 + hh * e.eta2 - g.chi;
        let r2 = hh * e.eta1 + gg * e.eta2 - g.chi.conj();
        let scale = g.chi.norm();
        assert!(r1.norm() < 1e-13 * scale && r2.norm() < 1e-13 * scale);
        assert!(gg.powi(2) - hh.powi(2) != Complex64::new(0.0, 0.0));

        let p = WaveguideParams::new(0.0707, 1e-8, 2.0).unwrap();
        let g = gh_chi(&p, &sums_for(&p).unwrap()).unwrap();
        let e = eta_pair(&g).unwrap();
        assert!(close(e.eta1, e.eta2, 1e-6));
    }

    #[test]
    fn parity_combinations_match_fields() {
        let p = WaveguideParams::new(0.8, 0.6, 1.0).unwrap();
        let g = gh_chi(&p, &sums_for(&p).unwrap()).unwrap();
        assert!(close(g.even_reduced, g.g_reduced + g.h_reduced, 1e-13));
        assert!(close(g.odd_reduced, g.g_reduced - g.h_reduced, 1e-13));
    }

    #[test]
    fn unitary_at_tiny_ka() {
        for &q in &[-2.5e-4, 0.0, 1.5] {
            let p = WaveguideParams::new(7.07e-5, 0.01, q).unwrap();
            let s = sums_for(&p).unwrap();
            let closed = amplitudes_closed(&p, &s).unwrap();
            assert!(closed.unitarity_residual() < 1e-12, "{q}: {closed:?}");
            let via = amplitudes_via_eta(&p, &eta_pair(&gh_chi(&p, &s).unwrap()).unwrap());
            assert!(via.unitarity_residual() < 1e-12, "{q}: {via:?}");
        }
    }

    #[test]
    fn decoupled_system() {
        let g = GhChi {
            g_reduced: Complex64::new(0.7, 3.0),
            h_reduced: Complex64::new(0.0, 0.0),
            even_reduced: Complex64::new(0.7, 3.0),
            odd_reduced: Complex64::new(0.7, 3.0),
            chi: Complex64::new(0.4, 0.2),
            coupling: Coupling::Ratio(1.5),
        };
        let e = eta_pair(&g).unwrap();
        assert!(close(e.eta1, g.chi / g.g(), 1e-14));
        assert!(close(e.eta2, g.chi.conj() / g.g(), 1e-14));
    }

    #[test]
    fn ill_conditioned_is_reported() {
        // Pick q so that q + g + h vanishes.
        let g = GhChi {
            g_reduced: Complex64::new(0.7, 0.0),
            h_reduced: Complex64::new(0.3, 0.0),
            even_reduced: Complex64::new(1.0, 0.0),
            odd_reduced: Complex64::new(0.4, 0.0),
            chi: Complex64::new(0.4, 0.2),
            coupling: Coupling::Ratio(-1.0),
        };
        assert!(matches!(eta_pair(&g), Err(Error::IllConditioned { .. })));
    }

    #[test]
    fn parity_of_eta_route() {
        let p = WaveguideParams::new(0.3, 0.7, 1.0).unwrap();
        let z = Complex64::new(0.0, 0.0);
        let sym = EtaPair {
            eta1: z,
            eta2: z,
            weighted_even: Complex64::new(0.3, -0.1),
            weighted_odd: z,
        };
        assert_eq!(amplitudes_via_eta(&p, &sym).f_o, z);
        let anti = EtaPair {
            weighted_even: z,
            weighted_odd: Complex64::new(0.3, -0.1),
            ..sym
        };
        assert_eq!(amplitudes_via_eta(&p, &anti).f_e, z);
    }

    #[test]
    fn both_amplitude_routes_agree() {
        for &(k, a, q) in &[(0.0707, 0.5, 2.0), (0.5, 1.3, -0.7), (1.9, 0.05, 4.0)] {
            let p = WaveguideParams::new(k, a, q).unwrap();
            let s = sums_for(&p).unwrap();
            let closed = amplitudes_closed(&p, &s).unwrap();
            let via = amplitudes_via_eta(&p, &eta_pair(&gh_chi(&p, &s).unwrap()).unwrap());
            assert!(close(via.f_e, closed.f_e, 1e-12));
            assert!(close(via.f_o, closed.f_o, 1e-12));
        }
    }

    #[test]
    fn olshanii_values() {
        let k = 0.1;
        let alpha = regsums::lambda_tilde(0.0, crate::params::epsilon(k)).unwrap();
        let f = olshanii_fe(k, Coupling::Ratio(-alpha)).unwrap();
        assert!((f + 1.0).norm() < 1e-15);
        let f = olshanii_fe(k, Coupling::Ratio(1.0 - alpha)).unwrap();
        let expect = Complex64::new(-400.0, -20.0) / 401.0;
        assert!((f - expect).norm() < 1e-14);
        assert_eq!(
            olshanii_fe(k, Coupling::NonInteracting).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        assert!(olshanii_fe(k, Coupling::Ratio(1e18)).unwrap().norm() < 1e-16);
    }

    #[test]
    fn transmission_examples() {
        let z = Complex64::new(0.0, 0.0);
        let f = AmplitudePair::from_amplitudes(0.3, Complex64::new(-1.0, 0.0), z);
        let t = transmissions(&f).unwrap();
        assert_eq!((t.t_tot, t.r, t.t_e, t.t_o), (0.0, 1.0, 0.0, 1.0));
        let t = transmissions(&AmplitudePair::zero()).unwrap();
        assert_eq!((t.t_tot, t.r, t.t_e, t.t_o), (1.0, 0.0, 1.0, 1.0));
        let bad = AmplitudePair::from_amplitudes(0.3, Complex64::new(0.5, 0.0), z);
        assert!(matches!(
            transmissions(&bad),
            Err(Error::UnitarityViolation { .. })
        ));
    }
}
