//! The four teleportation constructions as ready-made circuits.
//!
//! Mode names follow the usual labelling: `a_in` is the signal, `v1`/`v2` the
//! environment vacua, `b1`/`b2` the EPR beams, `a_c` the optical classical
//! channel, `A_c` the electro-optic photocurrent, `a_out` the reconstruction,
//! and `e`/`f` the beams thrown away by the amplifier and the receiver.

use num_complex::Complex64;

use super::{Circuit, CircuitBuilder, CircuitError, Pump, Step};
use crate::mode::elements::{beamsplitter, check_gain, degenerate_pa_pumped};
use crate::mode::{BogoliubovMode, ModeError};

pub const SIGNAL: &str = "a_in";
pub const OUTPUT: &str = "a_out";
pub const CHANNEL: &str = "a_c";
pub const EO_CHANNEL: &str = "A_c";

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn teleporter_gain(gain: f64) -> Result<(), CircuitError> {
    if gain > 1.0 && gain.is_finite() {
        Ok(())
    } else {
        Err(CircuitError::Parameter {
            step: "teleporter".into(),
            source: ModeError::Parameter {
                name: "gain",
                value: gain,
                expected: "> 1 (receiver transmission 1/G must be below 1)",
            },
        })
    }
}

fn base() -> Result<CircuitBuilder, CircuitError> {
    let mut b = CircuitBuilder::new();
    b.input(SIGNAL, zero())?.vacuum("v1")?.vacuum("v2")?;
    Ok(b)
}

/// Electro-optic scheme: homodyne photocurrent `A_c = K(a_in + v1†)` drives a
/// modulator on `v2`, giving `a_out = λK(a_in + v1†) − v2`.
pub fn build_eo_classical(k: f64, lambda: f64) -> Result<Circuit, CircuitError> {
    let mut b = base()?;
    b.step(Step::eo_channel(k, SIGNAL, "v1", EO_CHANNEL))?
        .step(Step::displace(lambda, EO_CHANNEL, "v2", OUTPUT))?
        .output(OUTPUT)?;
    b.build()
}

/// All-optical classical scheme: ideal amplifier followed by an attenuator of
/// transmission 1/G.
pub fn build_ao_classical(gain: f64) -> Result<Circuit, CircuitError> {
    teleporter_gain(gain)?;
    let mut b = base()?;
    b.step(Step::amplifier(gain, SIGNAL, "v1", CHANNEL, "idler"))?
        .step(Step::beamsplitter(1.0 / gain, CHANNEL, "v2", OUTPUT, "f"))?
        .output(OUTPUT)?
        .discard("idler")?
        .discard("f")?;
    b.build()
}

/// All-optical quantum scheme: the vacua are replaced by an EPR pair of
/// parametric gain `h`. With `composite` the sender amplifier is the
/// beamsplitter/degenerate-amplifier construction fed by `b1`, otherwise the
/// ideal amplifier with `b1` as its internal mode.
pub fn build_ao_quantum(gain: f64, h: f64, composite: bool) -> Result<Circuit, CircuitError> {
    teleporter_gain(gain)?;
    let mut b = base()?;
    b.step(Step::nondegenerate(h, "v1", "v2", "b1", "b2"))?;
    let thrown = if composite {
        for s in composite_amp_steps(gain, SIGNAL, "b1", CHANNEL, "e") {
            b.step(s)?;
        }
        "e"
    } else {
        b.step(Step::amplifier(gain, SIGNAL, "b1", CHANNEL, "idler"))?;
        "idler"
    };
    b.step(Step::beamsplitter(1.0 / gain, CHANNEL, "b2", OUTPUT, "f"))?
        .output(OUTPUT)?
        .discard(thrown)?
        .discard("f")?;
    b.build()
}

/// Steps of the phase-sensitive amplifier pair that realises a linear
/// amplifier with an accessible internal mode.
///
/// The signal and internal beams are mixed 50:50 into `c` (sum) and `d`
/// (difference), amplified by degenerate amplifiers with opposite pump phases,
/// and recombined: the sum port is `√G·signal + √(G−1)·internal†`, the
/// difference port `√G·internal + √(G−1)·signal†`.
pub fn composite_amp_steps(gain: f64, signal: &str, internal: &str, amplified: &str, thrown: &str) -> Vec<Step> {
    vec![
        Step::beamsplitter(0.5, signal, internal, "d", "c"),
        Step::degenerate(gain, Pump::Zero, "c", "c'"),
        Step::degenerate(gain, Pump::Pi, "d", "d'"),
        Step::beamsplitter(0.5, "c'", "d'", thrown, amplified),
    ]
}

/// Stand-alone composite amplifier on the basis `{a_in, b1}`, outputs `a_c`
/// and discarded `e`.
pub fn build_composite_amplifier(gain: f64) -> Result<Circuit, CircuitError> {
    let mut b = CircuitBuilder::new();
    b.input(SIGNAL, zero())?.vacuum("b1")?;
    for s in composite_amp_steps(gain, SIGNAL, "b1", CHANNEL, "e") {
        b.step(s)?;
    }
    b.output(CHANNEL)?.discard("e")?;
    b.build()
}

/// The composite amplifier applied directly to mode operators; returns `(a_c, e)`.
pub fn composite_amplifier(
    signal: &BogoliubovMode,
    internal: &BogoliubovMode,
    gain: f64,
) -> Result<(BogoliubovMode, BogoliubovMode), ModeError> {
    check_gain("gain", gain)?;
    let (d, c) = beamsplitter(signal, internal, 0.5)?;
    let c2 = degenerate_pa_pumped(&c, gain, Pump::Zero)?;
    let d2 = degenerate_pa_pumped(&d, gain, Pump::Pi)?;
    let (e, a_c) = beamsplitter(&c2, &d2, 0.5)?;
    Ok((a_c, e))
}

/// A preset teleporter with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scheme {
    EoClassical { k: f64, lambda: f64 },
    AoClassical { gain: f64 },
    AoQuantum { gain: f64, h: f64, composite: bool },
}

impl Scheme {
    pub const NAMES: [&'static str; 3] = ["eo-classical", "ao-classical", "ao-quantum"];

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::EoClassical { .. } => Self::NAMES[0],
            Scheme::AoClassical { .. } => Self::NAMES[1],
            Scheme::AoQuantum { .. } => Self::NAMES[2],
        }
    }

    pub fn circuit(&self, alpha: Complex64) -> Result<Circuit, CircuitError> {
        let c = match *self {
            Scheme::EoClassical { k, lambda } => build_eo_classical(k, lambda)?,
            Scheme::AoClassical { gain } => build_ao_classical(gain)?,
            Scheme::AoQuantum { gain, h, composite } => build_ao_quantum(gain, h, composite)?,
        };
        Ok(c.with_signal_displacement(alpha))
    }

    /// Added noise per quadrature in the large-gain limit, where the
    /// approximate output equations hold.
    pub fn asymptotic_added_noise(&self) -> f64 {
        match *self {
            Scheme::EoClassical { k, lambda } => {
                let g = k * lambda;
                g * g + 1.0
            }
            Scheme::AoClassical { .. } => 2.0,
            Scheme::AoQuantum { h, .. } => 2.0 * (h.sqrt() - (h - 1.0).sqrt()).powi(2),
        }
    }

    pub fn channel_label(&self) -> &'static str {
        match self {
            Scheme::EoClassical { .. } => EO_CHANNEL,
            _ => CHANNEL,
        }
    }
}
