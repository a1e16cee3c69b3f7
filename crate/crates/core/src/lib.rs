//! Scattering of a particle by two zero-range impurities fixed on the axis of
//! a harmonic waveguide.
//!
//! Units are fixed throughout: `ħ = m = a⊥ = 1`, so every public quantity is
//! a dimensionless ratio. Lengths are in units of the transverse oscillator
//! length `a⊥`, momenta in units of `1/a⊥`.
//!
//! The crate is `no_std` (it needs `alloc` for a few sequence-valued results)
//! and has no IO. File formats, sweeps and the command-line front end live in
//! the `cir-cli` crate.
//!
//! Module map:
//!
//! * [`params`]: validated problem inputs and channel kinematics.
//! * [`regsums`]: the regularized closed-channel sums `Λ̃`, `F̃` and `ζ(1/2, q)`.
//! * [`scattering`]: contact-strength system, even/odd amplitudes, transmissions.
//! * [`wavefield`]: reconstructed wavefunction and the contact-strength recovery.
//! * [`effective1d`]: effective double-delta couplings and a transfer-matrix solver.
//! * [`cir`]: closed-form resonance positions and a numerical extremum finder.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cir;
pub mod effective1d;
mod error;
mod numeric;
pub mod params;
pub mod regsums;
pub mod scattering;
pub mod wavefield;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use params::{ChannelData, Coupling, WaveguideParams};
pub use regsums::{RegularizedSums, Tolerance};
pub use scattering::{AmplitudePair, ContactTerm, EtaPair, GhChi, TransmissionSet};
