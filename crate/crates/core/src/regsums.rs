//! Regularized closed-channel sums.
//!
//! With `tₙ = √(n + ε)` the two channel sums that appear in the on-axis
//! wavefunction are
//!
//! ```text
//! Λ(x, ε) = Σₙ₌₁ e^{−x tₙ} / tₙ = 2/x  + Λ̃(x, ε)
//! F(x, ε) = Σₙ₌₁ e^{−x tₙ}      = 2/x² + F̃(x, ε)
//! ```
//!
//! `Λ̃` and `F̃` are the finite parts left after removing the small-`x`
//! divergences. `dΛ̃/dx = −F̃`, `Λ̃(0, ε) = ζ(1/2, 1 + ε)` and
//! `F̃(0⁺, ε) = ζ(0, 1 + ε) = −1/2 − ε`.
//!
//! For `x < 5` the sums are evaluated by Euler–Maclaurin summation anchored at
//! `n = 64`: the first 63 terms are added directly, the tail integral is done
//! in closed form with the divergence cancelled analytically, and the
//! Bernoulli corrections are added until the next one drops below the
//! tolerance. The summands are completely monotone in `n`, so the remainder
//! is bounded by the first omitted correction. For `x ≥ 5` the raw series is
//! summed until the integral tail bound falls below the tolerance.

use crate::error::{Error, Result};
use crate::params::WaveguideParams;

/// Target absolute error of a regularized sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance(pub f64);

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance(1e-12)
    }
}

/// The three sums every closed form is written in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularizedSums {
    /// `Λ̃(0, ε) = ζ(1/2, 1 + ε)`.
    pub alpha: f64,
    /// `Λ̃(4a, ε)`.
    pub beta: f64,
    /// `F̃(4a, ε)`.
    pub gamma: f64,
}

/// Below this argument the Euler–Maclaurin route is used.
pub const RAW_SERIES_THRESHOLD: f64 = 5.0;

const ANCHOR: u32 = 64;
const MAX_CORRECTIONS: usize = 12;
const MAX_RAW_TERMS: u32 = 1_000_000;

/// `B₂ⱼ / (2j)!` for `j = 1..=12`.
const BERNOULLI_OVER_FACTORIAL: [f64; MAX_CORRECTIONS] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
    -3617.0 / 10_670_622_842_880_000.0,
    43_867.0 / 5_109_094_217_170_944_000.0,
    -174_611.0 / 802_857_662_698_291_200_000.0,
    77_683.0 / 14_101_100_039_391_805_440_000.0,
    -236_364_091.0 / 1_693_824_136_731_743_669_452_800_000.0,
];

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    /// Summand `e^{−xt}/t`.
    Lambda,
    /// Summand `e^{−xt}`.
    F,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Lambda => "lambda_tilde",
            Kind::F => "f_tilde",
        }
    }

    fn leading_power(self) -> usize {
        match self {
            Kind::Lambda => 1,
            Kind::F => 0,
        }
    }

    fn term(self, x: f64, t: f64) -> f64 {
        let e = libm::exp(-x * t);
        match self {
            Kind::Lambda => e / t,
            Kind::F => e,
        }
    }
}

/// `Λ̃(x, ε)` at the default tolerance.
pub fn lambda_tilde(x: f64, eps: f64) -> Result<f64> {
    lambda_tilde_tol(x, eps, Tolerance::default())
}

pub fn lambda_tilde_tol(x: f64, eps: f64, tol: Tolerance) -> Result<f64> {
    regularized(Kind::Lambda, x, eps, tol)
}

/// `F̃(x, ε)` at the default tolerance.
pub fn f_tilde(x: f64, eps: f64) -> Result<f64> {
    f_tilde_tol(x, eps, Tolerance::default())
}

pub fn f_tilde_tol(x: f64, eps: f64, tol: Tolerance) -> Result<f64> {
    regularized(Kind::F, x, eps, tol)
}

fn check_domain(x: f64, eps: f64) -> Result<()> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::DomainError {
            what: "regularized sum argument x",
            value: x,
        });
    }
    if !eps.is_finite() || eps <= -1.0 || eps > 0.0 {
        return Err(Error::DomainError {
            what: "regularized sum energy offset eps",
            value: eps,
        });
    }
    Ok(())
}

fn regularized(kind: Kind, x: f64, eps: f64, tol: Tolerance) -> Result<f64> {
    check_domain(x, eps)?;
    if x >= RAW_SERIES_THRESHOLD {
        raw_series(kind, x, eps, tol)
    } else {
        euler_maclaurin(kind, x, eps, tol)
    }
}

/// Direct summation with the integral tail bound; large `x` only.
fn raw_series(kind: Kind, x: f64, eps: f64, tol: Tolerance) -> Result<f64> {
    let mut sum = 0.0;
    let mut n = 1u32;
    loop {
        let t = libm::sqrt(f64::from(n) + eps);
        sum += kind.term(x, t);
        // Σ_{m>n} g(m) ≤ ∫_n^∞ g(u) du since g decreases.
        let tail = match kind {
            Kind::Lambda => 2.0 * libm::exp(-x * t) / x,
            Kind::F => 2.0 * (1.0 + x * t) * libm::exp(-x * t) / (x * x),
        };
        if tail < 0.01 * tol.0 {
            break;
        }
        n += 1;
        if n > MAX_RAW_TERMS {
            return Err(Error::NonConvergence {
                what: kind.name(),
                x,
                eps,
            });
        }
    }
    let divergence = match kind {
        Kind::Lambda => 2.0 / x,
        Kind::F => 2.0 / (x * x),
    };
    Ok(sum - divergence)
}

fn euler_maclaurin(kind: Kind, x: f64, eps: f64, tol: Tolerance) -> Result<f64> {
    let head: f64 = (1..ANCHOR)
        .map(|n| kind.term(x, libm::sqrt(f64::from(n) + eps)))
        .sum();
    let s = libm::sqrt(f64::from(ANCHOR) + eps);
    let y = x * s;
    // ∫_N^∞ summand du minus the removed divergence, regular at x = 0.
    let tail_integral = match kind {
        Kind::Lambda => 2.0 * s * expm1_over(y),
        Kind::F => 2.0 * s * s * plateau(y),
    };
    let endpoint = 0.5 * kind.term(x, s);
    let corrections = bernoulli_tail(kind, x, s, tol).ok_or(Error::NonConvergence {
        what: kind.name(),
        x,
        eps,
    })?;
    Ok(head + tail_integral + endpoint - corrections)
}

/// `expm1(−y)/y`, equal to −1 at `y = 0`.
fn expm1_over(y: f64) -> f64 {
    if y == 0.0 {
        -1.0
    } else {
        libm::expm1(-y) / y
    }
}

/// `[(1 + y)e^{−y} − 1] / y²`, equal to −1/2 at `y = 0`.
fn plateau(y: f64) -> f64 {
    if y < 2.0 {
        // Σ_{j≥2} (−1)^{j+1} (j−1) y^{j−2} / j!
        let mut sum = 0.0;
        let mut power_over_fact = 0.5; // y^{j−2}/j! at j = 2
        let mut sign = -1.0;
        for j in 2..60u32 {
            let term = sign * f64::from(j - 1) * power_over_fact;
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
            power_over_fact *= y / f64::from(j + 1);
            sign = -sign;
        }
        sum
    } else {
        ((1.0 + y) * libm::exp(-y) - 1.0) / (y * y)
    }
}

/// `Σⱼ B₂ⱼ/(2j)! · g^{(2j−1)}(N)`, stopping once a correction is negligible.
///
/// Derivatives in `u = t² − ε` are tracked exactly: the summand is kept as
/// `Σ_m c_m t^{−m} e^{−xt}` and `d/du = (1/2t) d/dt` maps
/// `t^{−m}e^{−xt} ↦ −(m/2) t^{−m−2}e^{−xt} − (x/2) t^{−m−1}e^{−xt}`.
fn bernoulli_tail(kind: Kind, x: f64, s: f64, tol: Tolerance) -> Option<f64> {
    const WIDTH: usize = 2 * (2 * MAX_CORRECTIONS) + 4;
    let mut coeffs = [0.0f64; WIDTH];
    coeffs[kind.leading_power()] = 1.0;
    let envelope = libm::exp(-x * s);
    let inv_s = 1.0 / s;

    let mut total = 0.0;
    let mut order = 0usize;
    for (j, &weight) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let target = 2 * j + 1;
        while order < target {
            differentiate(&mut coeffs, x);
            order += 1;
        }
        let mut value = 0.0;
        let mut power = 1.0;
        for &c in coeffs.iter() {
            value += c * power;
            power *= inv_s;
        }
        let correction = weight * value * envelope;
        total += correction;
        if correction.abs() < 1e-3 * tol.0 {
            return Some(total);
        }
    }
    None
}

fn differentiate(coeffs: &mut [f64], x: f64) {
    let mut next = [0.0f64; 64];
    let len = coeffs.len();
    for m in 0..len {
        let c = coeffs[m];
        if c == 0.0 {
            continue;
        }
        if m + 2 < len {
            next[m + 2] -= 0.5 * m as f64 * c;
        }
        if m + 1 < len {
            next[m + 1] -= 0.5 * x * c;
        }
    }
    coeffs.copy_from_slice(&next[..len]);
}

/// Hurwitz zeta `ζ(1/2, q)` for real `q > 0`.
///
/// Evaluated by Hermite's integral after shifting `q` to at least 2 with the
/// recurrence `ζ(s, q) = q^{−s} + ζ(s, q + 1)`. The integral
/// `2∫₀^∞ sin(½ atan(t/q)) / ((q² + t²)^{1/4} (e^{2πt} − 1)) dt` is done with
/// composite 20-point Gauss–Legendre on `[0, 7]`; the integrand is analytic
/// within distance 1 of the real axis and `e^{−14π}` bounds the cut-off.
/// This shares no code with [`lambda_tilde`], which makes the two usable as
/// cross-checks of each other.
pub fn hurwitz_zeta_half(q: f64) -> Result<f64> {
    if !q.is_finite() || q <= 0.0 {
        return Err(Error::DomainError {
            what: "hurwitz_zeta_half",
            value: q,
        });
    }
    let mut shifted = q;
    let mut direct = 0.0;
    while shifted < 2.0 {
        direct += 1.0 / libm::sqrt(shifted);
        shifted += 1.0;
    }
    let a = shifted;
    let root = libm::sqrt(a);
    let closed = 0.5 / root - 2.0 * root;

    let nodes = gauss_legendre_20();
    let panels = 28;
    let width = 7.0 / f64::from(panels);
    let mut integral = 0.0;
    for p in 0..panels {
        let mid = (f64::from(p) + 0.5) * width;
        let half = 0.5 * width;
        for &(node, weight) in nodes.iter() {
            let t = mid + half * node;
            let angle = 0.5 * libm::atan(t / a);
            let radius = libm::sqrt(libm::sqrt(a * a + t * t));
            let denom = libm::expm1(2.0 * core::f64::consts::PI * t);
            integral += half * weight * libm::sin(angle) / (radius * denom);
        }
    }
    Ok(direct + closed + 2.0 * integral)
}

/// Nodes and weights of 20-point Gauss–Legendre on `[−1, 1]`.
fn gauss_legendre_20() -> [(f64, f64); 20] {
    const N: usize = 20;
    let mut out = [(0.0, 0.0); N];
    for i in 0..N / 2 {
        // Tricomi initial guess, then Newton on P_N.
        let mut z = libm::cos(core::f64::consts::PI * (i as f64 + 0.75) / (N as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=N {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = N as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        out[i] = (-z, w);
        out[N - 1 - i] = (z, w);
    }
    out
}

/// `α`, `β`, `γ` for one parameter set.
///
/// At `a = 0` the limits `β = α`, `γ = F̃(0⁺, ε)` are returned.
pub fn sums_for(p: &WaveguideParams) -> Result<RegularizedSums> {
    sums_for_tol(p, Tolerance::default())
}

pub fn sums_for_tol(p: &WaveguideParams, tol: Tolerance) -> Result<RegularizedSums> {
    let eps = p.epsilon();
    let x = 4.0 * p.a_half_sep();
    Ok(RegularizedSums {
        alpha: lambda_tilde_tol(0.0, eps, tol)?,
        beta: lambda_tilde_tol(x, eps, tol)?,
        gamma: f_tilde_tol(x, eps, tol)?,
    })
}
