//! Problem inputs and channel kinematics.
//!
//! All three physical inputs are ratios: `ka⊥`, the half-separation `a/a⊥`
//! and the inverse scattering length `a⊥/a₃D`.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Strength of the atom–impurity contact interaction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coupling {
    /// `a⊥/a₃D`, any finite real. Positive values are repulsive `a₃D > 0`.
    Ratio(f64),
    /// `a₃D = 0`: the limit `a⊥/a₃D → ±∞`.
    NonInteracting,
}

impl Coupling {
    /// `a⊥/a₃D`, or `None` when there is no interaction.
    pub fn inv_ratio(self) -> Option<f64> {
        match self {
            Coupling::Ratio(q) => Some(q),
            Coupling::NonInteracting => None,
        }
    }

    /// `a₃D/a⊥`. Infinite at the unitary point `a⊥/a₃D = 0`.
    pub fn scattering_length(self) -> f64 {
        match self {
            Coupling::Ratio(q) => 1.0 / q,
            Coupling::NonInteracting => 0.0,
        }
    }
}

/// Validated, dimensionless problem inputs.
///
/// Fields are private so that every value in circulation satisfies
/// `0 < ka⊥ < 2`, `a ≥ 0` and finiteness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveguideParams {
    ka_perp: f64,
    a_half_sep: f64,
    coupling: Coupling,
}

impl WaveguideParams {
    pub fn new(ka_perp: f64, a_half_sep: f64, inv_ratio: f64) -> Result<Self> {
        Self::with_coupling(ka_perp, a_half_sep, Coupling::Ratio(inv_ratio))
    }

    pub fn non_interacting(ka_perp: f64, a_half_sep: f64) -> Result<Self> {
        Self::with_coupling(ka_perp, a_half_sep, Coupling::NonInteracting)
    }

    pub fn with_coupling(ka_perp: f64, a_half_sep: f64, coupling: Coupling) -> Result<Self> {
        validate(WaveguideParams {
            ka_perp,
            a_half_sep,
            coupling,
        })
    }

    /// Same waveguide and separation, different interaction strength.
    pub fn with_inv_ratio(&self, inv_ratio: f64) -> Result<Self> {
        Self::new(self.ka_perp, self.a_half_sep, inv_ratio)
    }

    pub fn ka_perp(&self) -> f64 {
        self.ka_perp
    }

    pub fn a_half_sep(&self) -> f64 {
        self.a_half_sep
    }

    pub fn coupling(&self) -> Coupling {
        self.coupling
    }

    /// `ka`, the phase accumulated between the centre and one impurity.
    pub fn ka(&self) -> f64 {
        self.ka_perp * self.a_half_sep
    }

    /// `a = 0` collapses the two impurities onto one; odd-channel quantities
    /// are undefined there.
    pub fn is_single_center(&self) -> bool {
        self.a_half_sep == 0.0
    }

    pub fn epsilon(&self) -> f64 {
        epsilon(self.ka_perp)
    }

    pub fn channels(&self) -> ChannelData {
        ChannelData {
            epsilon: self.epsilon(),
        }
    }
}

/// Check the invariants of a raw parameter set and return it unchanged.
pub fn validate(raw: WaveguideParams) -> Result<WaveguideParams> {
    if !raw.ka_perp.is_finite() {
        return Err(Error::NonFinite { field: "ka_perp" });
    }
    if !raw.a_half_sep.is_finite() {
        return Err(Error::NonFinite {
            field: "a_half_sep",
        });
    }
    if let Coupling::Ratio(q) = raw.coupling {
        if !q.is_finite() {
            return Err(Error::NonFinite { field: "inv_ratio" });
        }
    }
    if !(raw.ka_perp > 0.0 && raw.ka_perp < 2.0) {
        return Err(Error::OutOfBand {
            ka_perp: raw.ka_perp,
        });
    }
    if raw.a_half_sep < 0.0 {
        return Err(Error::NegativeSeparation {
            a_half_sep: raw.a_half_sep,
        });
    }
    Ok(raw)
}

/// `ε = −(ka⊥/2)²`.
pub fn epsilon(ka_perp: f64) -> f64 {
    let h = 0.5 * ka_perp;
    -h * h
}

/// Closed-channel momentum `kₙa⊥ = 2√(n + ε)` for `n ≥ 1`.
pub fn kn(p: &WaveguideParams, n: u32) -> f64 {
    p.channels().kn(n)
}

/// Energy offset and closed-channel momenta of one parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelData {
    pub epsilon: f64,
}

impl ChannelData {
    pub fn kn(&self, n: u32) -> f64 {
        debug_assert!(n >= 1, "closed channels start at n = 1");
        2.0 * libm::sqrt(f64::from(n) + self.epsilon)
    }

    /// `k₁, …, k_{n_max}`.
    pub fn momenta(&self, n_max: u32) -> Vec<f64> {
        (1..=n_max).map(|n| self.kn(n)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_figure_parameters() {
        assert!(WaveguideParams::new(0.0707, 0.5, 2.0).is_ok());
        assert!(WaveguideParams::new(7.07e-5, 0.01, 1.46).is_ok());
    }

    #[test]
    fn rejects_out_of_band_and_bad_fields() {
        assert_eq!(
            WaveguideParams::new(2.5, 0.5, 1.0),
            Err(Error::OutOfBand { ka_perp: 2.5 })
        );
        assert!(matches!(
            WaveguideParams::new(0.0, 0.5, 1.0),
            Err(Error::OutOfBand { .. })
        ));
        assert!(matches!(
            WaveguideParams::new(0.1, -0.5, 1.0),
            Err(Error::NegativeSeparation { .. })
        ));
        assert!(matches!(
            WaveguideParams::new(0.1, 0.5, f64::INFINITY),
            Err(Error::NonFinite { field: "inv_ratio" })
        ));
        assert!(matches!(
            WaveguideParams::new(f64::NAN, 0.5, 1.0),
            Err(Error::NonFinite { field: "ka_perp" })
        ));
    }

    #[test]
    fn epsilon_values() {
        assert!((epsilon(0.0707) + 1.249_62e-3).abs() < 1e-8);
        assert!((epsilon(7.07e-5) + 1.249_62e-9).abs() < 1e-14);
        let e = epsilon(2.0 - 1e-12);
        assert!(e > -1.0 && (e + 1.0 - 1e-12).abs() < 1e-15);
    }

    #[test]
    fn kn_values() {
        let p = WaveguideParams::new(1e-9, 0.5, 1.0).unwrap();
        assert!((kn(&p, 1) - 2.0).abs() < 1e-15);
        let p = WaveguideParams::new(0.0707, 0.5, 1.0).unwrap();
        let e = p.epsilon();
        assert_eq!(kn(&p, 1), 2.0 * (1.0 + e).sqrt());
        assert_eq!(kn(&p, 4), 2.0 * (4.0 + e).sqrt());
    }

    #[test]
    fn single_center_flag() {
        let p = WaveguideParams::non_interacting(0.1, 0.0).unwrap();
        assert!(p.is_single_center());
        assert_eq!(p.coupling().scattering_length(), 0.0);
    }
}
