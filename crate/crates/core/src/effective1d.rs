//! Effective one-dimensional double-delta model.
//!
//! The reduced problem is `−½ψ'' + ½[g⁺δ(z−a) + g⁻δ(z+a)]ψ = (k²/2)ψ`.
//! Integrating across `z = ±a` gives the jump condition
//! `ψ'(±a⁺) − ψ'(±a⁻) = g^± ψ(±a)`: the `½` in front of the potential and the
//! `2m/ħ² = 2` of the kinetic term cancel, so the jump strength per delta is
//! `g^±` itself.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::WaveguideParams;
use crate::regsums;
use crate::scattering::{self, AmplitudePair};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Denominator magnitude below which [`g1d`] reports a resonance.
pub const RESONANCE_FLOOR: f64 = 1e-10;

/// Below this `|M₂₂|` the matching system is treated as singular.
pub const SINGULAR_FLOOR: f64 = 1e-14;

/// Delta strengths at `z = +a` and `z = −a`, in units of `ħ²/(m a⊥)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Effective1DCouplings {
    pub g_plus: Complex64,
    pub g_minus: Complex64,
}

/// `g^±` from the amplitudes, with the default resonance floor.
///
/// ```text
/// g⁺ = ik e^{−ika} [f_e/cos ka + i f_o/sin ka] / (1 + f_e + f_o)
/// g⁻ = ik e^{−ika} [f_e/cos ka − i f_o/sin ka] / (e^{−2ika} + f_e − f_o)
/// ```
pub fn g1d(p: &WaveguideParams, f: &AmplitudePair) -> Result<Effective1DCouplings> {
    g1d_with_floor(p, f, RESONANCE_FLOOR)
}

pub fn g1d_with_floor(
    p: &WaveguideParams,
    f: &AmplitudePair,
    floor: f64,
) -> Result<Effective1DCouplings> {
    let k = p.ka_perp();
    let ka = p.ka();
    let lead = I * k * Complex64::cis(-ka);
    let plus_den = f.transmission_amplitude();
    let minus_den = Complex64::cis(-2.0 * ka) + f.reflection_amplitude();
    for den in [plus_den, minus_den] {
        if den.norm() < floor {
            return Err(Error::AtResonance {
                denominator: den.norm(),
            });
        }
    }
    Ok(Effective1DCouplings {
        g_plus: lead * (f.even_over_cos + I * f.odd_over_sin) / plus_den,
        g_minus: lead * (f.even_over_cos - I * f.odd_over_sin) / minus_den,
    })
}

/// Transfer matrix across one delta of jump strength `c` at `z0`, acting on
/// the coefficients `(A, B)` of `A e^{ikz} + B e^{−ikz}`.
fn delta_matrix(c: Complex64, z0: f64, k: f64) -> [[Complex64; 2]; 2] {
    let beta = c / (2.0 * I * k);
    let one = Complex64::new(1.0, 0.0);
    [
        [one + beta, beta * Complex64::cis(-2.0 * k * z0)],
        [-beta * Complex64::cis(2.0 * k * z0), one - beta],
    ]
}

/// Lower row `(M₂₁, M₂₂)` of `M(a)·M(−a)`.
///
/// Expanded by hand with `1 − e^{4ika} = −2i sin(2ka) e^{2ika}`; multiplying
/// the two matrices numerically cancels terms of order `β⁺β⁻` down to `1/t`
/// and loses every digit once `|β|` reaches `1e8`.
fn product_lower_row(
    beta_plus: Complex64,
    beta_minus: Complex64,
    ka: f64,
) -> (Complex64, Complex64) {
    let e2 = Complex64::cis(2.0 * ka);
    let s2 = libm::sin(2.0 * ka);
    let bb = beta_plus * beta_minus;
    let m22 = Complex64::new(1.0, 0.0) - beta_plus - beta_minus - 2.0 * I * s2 * e2 * bb;
    let m21 = -beta_plus * e2 - beta_minus * e2.conj() - 2.0 * I * s2 * bb;
    (m21, m22)
}

/// Piecewise plane-wave solution of the double-delta problem for a wave
/// incident from the left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleDeltaSolution {
    pub t: Complex64,
    pub r: Complex64,
    /// Coefficients `(A, B)` between the deltas.
    pub middle: (Complex64, Complex64),
    pub amplitudes: AmplitudePair,
    k: f64,
    a: f64,
}

impl DoubleDeltaSolution {
    pub fn psi(&self, z: f64) -> Complex64 {
        let (fwd, back) = if z < -self.a {
            (Complex64::new(1.0, 0.0), self.r)
        } else if z <= self.a {
            self.middle
        } else {
            (self.t, Complex64::new(0.0, 0.0))
        };
        fwd * Complex64::cis(self.k * z) + back * Complex64::cis(-self.k * z)
    }
}

/// Solve the double-delta problem by transfer matrices.
pub fn double_delta_solve(g: &Effective1DCouplings, a: f64, k: f64) -> Result<DoubleDeltaSolution> {
    if !(k > 0.0) || !(a > 0.0) {
        return Err(Error::DomainError {
            what: "double-delta momentum and half-separation",
            value: if k > 0.0 { a } else { k },
        });
    }
    let left = delta_matrix(g.g_minus, -a, k);
    let beta = |c: Complex64| c / (2.0 * I * k);
    let (m21, m22) = product_lower_row(beta(g.g_plus), beta(g.g_minus), k * a);
    if !(m22.norm() >= SINGULAR_FLOOR) {
        return Err(Error::SingularMatrix {
            magnitude: m22.norm(),
        });
    }
    // Both deltas have unit determinant, so t = det M / M₂₂ = 1/M₂₂.
    let r = -m21 / m22;
    let t = 1.0 / m22;
    let one = Complex64::new(1.0, 0.0);
    let middle = (left[0][0] + left[0][1] * r, left[1][0] + left[1][1] * r);
    let f_e = 0.5 * (t - one + r);
    let f_o = 0.5 * (t - one - r);
    Ok(DoubleDeltaSolution {
        t,
        r,
        middle,
        amplitudes: AmplitudePair::from_amplitudes(k * a, f_e, f_o),
        k,
        a,
    })
}

/// Amplitudes of the double-delta problem, read off `t = 1 + f_e + f_o` and
/// `r = f_e − f_o`.
pub fn double_delta_scatter(g: &Effective1DCouplings, a: f64, k: f64) -> Result<AmplitudePair> {
    Ok(double_delta_solve(g, a, k)?.amplitudes)
}

/// `max(|Δf_e|, |Δf_o|)` between the waveguide amplitudes and those of the
/// effective model built from them.
pub fn verify_roundtrip(p: &WaveguideParams) -> Result<f64> {
    let s = regsums::sums_for(p)?;
    let f = scattering::amplitudes_closed(p, &s)?;
    let g = g1d(p, &f)?;
    let back = double_delta_scatter(&g, p.a_half_sep(), p.ka_perp())?;
    Ok((back.f_e - f.f_e).norm().max((back.f_o - f.f_o).norm()))
}
