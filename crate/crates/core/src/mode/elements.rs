//! Linear optical elements acting on [`BogoliubovMode`] operators.
//!
//! Every element is a pure function returning fresh output modes. Physical
//! elements preserve the canonical commutator; the electro-optic channel does
//! not, and its output is a classical signal with commutator norm zero.

use num_complex::Complex64;

use super::{check_param, BogoliubovMode, ModeError};

pub fn check_transmission(eps: f64) -> Result<(), ModeError> {
    check_param("transmission", eps, eps > 0.0 && eps <= 1.0, "0 < ε ≤ 1")
}

pub fn check_gain(name: &'static str, gain: f64) -> Result<(), ModeError> {
    check_param(name, gain, gain >= 1.0, "≥ 1")
}

pub fn check_positive(name: &'static str, value: f64) -> Result<(), ModeError> {
    check_param(name, value, value > 0.0, "> 0")
}

/// Real orthogonal mixing `[[√ε, −√(1−ε)], [√(1−ε), √ε]]`.
///
/// With ε = 1/2 the second port is the sum `(in1 + in2)/√2` and the first the
/// difference `(in1 − in2)/√2`.
pub fn beamsplitter(
    in1: &BogoliubovMode,
    in2: &BogoliubovMode,
    transmission: f64,
) -> Result<(BogoliubovMode, BogoliubovMode), ModeError> {
    check_transmission(transmission)?;
    let t = transmission.sqrt();
    let r = (1.0 - transmission).sqrt();
    let out1 = &(in1 * t) - &(in2 * r);
    let out2 = &(in1 * r) + &(in2 * t);
    Ok((out1, out2))
}

/// Phase-insensitive amplifier with power gain `gain`, returning the amplified
/// signal and the idler that leaves through the internal mode.
pub fn ideal_linear_amplifier(
    signal: &BogoliubovMode,
    internal: &BogoliubovMode,
    gain: f64,
) -> Result<(BogoliubovMode, BogoliubovMode), ModeError> {
    check_gain("gain", gain)?;
    Ok(two_mode_squeeze(signal, internal, gain))
}

/// Pump phase of a degenerate amplifier restricted to the two values used by
/// the teleporter presets, so the conjugate coefficient stays exactly real.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pump {
    /// θ = 0, amplifies the in-phase quadrature.
    Zero,
    /// θ = π, amplifies the out-of-phase quadrature.
    Pi,
}

impl Pump {
    pub fn phase(self) -> f64 {
        match self {
            Pump::Zero => 0.0,
            Pump::Pi => std::f64::consts::PI,
        }
    }

    fn factor(self) -> Complex64 {
        match self {
            Pump::Zero => Complex64::new(1.0, 0.0),
            Pump::Pi => Complex64::new(-1.0, 0.0),
        }
    }
}

/// Single-mode squeezer: `√G·in + e^{iθ}√(G−1)·in†`.
pub fn degenerate_pa(
    input: &BogoliubovMode,
    gain: f64,
    pump_phase: f64,
) -> Result<BogoliubovMode, ModeError> {
    check_param("pump phase", pump_phase, true, "finite")?;
    single_mode_squeeze(input, gain, Complex64::from_polar(1.0, pump_phase))
}

/// [`degenerate_pa`] at one of the two preset pump phases.
pub fn degenerate_pa_pumped(
    input: &BogoliubovMode,
    gain: f64,
    pump: Pump,
) -> Result<BogoliubovMode, ModeError> {
    single_mode_squeeze(input, gain, pump.factor())
}

fn single_mode_squeeze(
    input: &BogoliubovMode,
    gain: f64,
    phase: Complex64,
) -> Result<BogoliubovMode, ModeError> {
    check_gain("gain", gain)?;
    let conj = input.dagger().scale(phase * (gain - 1.0).sqrt());
    Ok(&(input * gain.sqrt()) + &conj)
}

/// Two-mode squeezer producing an EPR pair when both inputs are vacua.
pub fn nondegenerate_pa(
    in1: &BogoliubovMode,
    in2: &BogoliubovMode,
    gain: f64,
) -> Result<(BogoliubovMode, BogoliubovMode), ModeError> {
    check_gain("parametric gain", gain)?;
    Ok(two_mode_squeeze(in1, in2, gain))
}

fn two_mode_squeeze(
    a: &BogoliubovMode,
    b: &BogoliubovMode,
    gain: f64,
) -> (BogoliubovMode, BogoliubovMode) {
    let g = gain.sqrt();
    let s = (gain - 1.0).sqrt();
    let out_a = &(a * g) + &(&b.dagger() * s);
    let out_b = &(b * g) + &(&a.dagger() * s);
    (out_a, out_b)
}

/// Combined homodyne photocurrent `K(in + v†)` of the electro-optic sender.
pub fn eo_classical_channel(
    input: &BogoliubovMode,
    vacuum: &BogoliubovMode,
    k: f64,
) -> Result<BogoliubovMode, ModeError> {
    check_positive("K", k)?;
    Ok(&(input + &vacuum.dagger()) * k)
}

/// Receiver modulation `λ·channel − v`.
pub fn displace_reconstruct(
    channel: &BogoliubovMode,
    vacuum: &BogoliubovMode,
    lambda: f64,
) -> Result<BogoliubovMode, ModeError> {
    check_positive("lambda", lambda)?;
    Ok(&(channel * lambda) - vacuum)
}
