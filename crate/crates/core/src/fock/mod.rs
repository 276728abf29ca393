//! Brute-force cross-check: the same circuits simulated as state vectors in a
//! truncated number basis.
//!
//! Every element becomes the exponential of its quadratic generator acting on
//! the dense product-space amplitudes, with gain mapped to squeezing through
//! `√G = cosh r`. Nothing here reuses the coefficient algebra, so agreement
//! between the two is a genuine check. Memory grows as `cutoff^modes`; the
//! oracle is meant for a handful of modes at small gain.

mod state;
pub mod verify;

use std::collections::HashMap;

use thiserror::Error;

pub use state::{coherent_amplitudes, FockState, Generator, DEFAULT_TAIL_THRESHOLD};

use crate::circuit::{Circuit, Pump, Step};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("cutoff {cutoff} is too small (need at least 2)")]
    CutoffTooSmall { cutoff: usize },
    #[error("tail mass {mass:.3e} exceeds {threshold:.1e} after {stage}; increase the cutoff")]
    TailMass {
        stage: String,
        mass: f64,
        threshold: f64,
    },
    #[error("mode index {index} is invalid for a {modes}-mode state")]
    InvalidMode { index: usize, modes: usize },
    #[error("state was flagged untrusted by an earlier tail-mass violation")]
    Untrusted,
    #[error("unknown mode `{0}`")]
    UnknownMode(String),
    #[error("cannot simulate {0}")]
    Unsupported(String),
    #[error("{modes} modes at cutoff {cutoff} need more than {MAX_AMPLITUDES} amplitudes")]
    TooLarge { modes: usize, cutoff: usize },
}

/// Largest state vector the oracle will allocate (2 GiB of amplitudes).
pub const MAX_AMPLITUDES: usize = 1 << 27;

/// Squeezing parameter with `cosh r = √gain`.
pub fn squeezing(gain: f64) -> f64 {
    gain.sqrt().acosh()
}

#[derive(Debug, Clone, Copy)]
pub struct OracleOptions {
    pub cutoff: usize,
    pub tail_threshold: f64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            cutoff: 40,
            tail_threshold: DEFAULT_TAIL_THRESHOLD,
        }
    }
}

/// Final state of a simulated circuit and where each named mode lives.
#[derive(Debug, Clone)]
pub struct OracleRun {
    pub state: FockState,
    slots: HashMap<String, usize>,
}

impl OracleRun {
    pub fn slot(&self, name: &str) -> Result<usize, OracleError> {
        self.slots
            .get(name)
            .copied()
            .ok_or_else(|| OracleError::UnknownMode(name.to_string()))
    }
}

/// Simulates `circuit` in the number basis.
///
/// The electro-optic pair `eochan K s v1 -> ch` / `displace λ ch v2 -> out`
/// has no unitary of its own; it is replaced by the optical circuit with the
/// same output, a beamsplitter of transmission `g²/(1+g²)` between `s` and
/// `v2` followed by an amplifier of gain `1+g²` with internal mode `v1`,
/// where `g = λK`.
pub fn simulate(circuit: &Circuit, opts: OracleOptions) -> Result<OracleRun, OracleError> {
    let basis = circuit.basis();
    let signal = basis.signal_index().expect("validated circuit has a signal");
    let mut state = FockState::coherent_product(
        basis.len(),
        signal,
        circuit.signal_displacement(),
        opts.cutoff,
        opts.tail_threshold,
    )?;
    let mut slots: HashMap<String, usize> = basis
        .entries()
        .iter()
        .enumerate()
        .map(|(i, e)| (e.label.clone(), i))
        .collect();
    // channel name -> (K, signal slot, vacuum slot)
    let mut channels: HashMap<String, (f64, usize, usize)> = HashMap::new();
    let slot = |slots: &HashMap<String, usize>, name: &str| {
        slots
            .get(name)
            .copied()
            .ok_or_else(|| OracleError::Unsupported(format!("mode `{name}` (no Hilbert-space slot)")))
    };
    for step in circuit.steps() {
        let stage = step.to_string();
        match step {
            Step::Beamsplitter {
                transmission,
                inputs,
                outputs,
            } => {
                let (i, j) = (slot(&slots, &inputs[0])?, slot(&slots, &inputs[1])?);
                let angle = transmission.sqrt().min(1.0).acos();
                state.apply(Generator::Mix { i, j, angle }, &stage)?;
                slots.insert(outputs[0].clone(), i);
                slots.insert(outputs[1].clone(), j);
            }
            Step::Amplifier {
                gain,
                inputs,
                outputs,
            }
            | Step::NondegenerateAmp {
                gain,
                inputs,
                outputs,
            } => {
                let (i, j) = (slot(&slots, &inputs[0])?, slot(&slots, &inputs[1])?);
                let r = squeezing(*gain);
                state.apply(Generator::TwoModeSqueeze { i, j, r }, &stage)?;
                slots.insert(outputs[0].clone(), i);
                slots.insert(outputs[1].clone(), j);
            }
            Step::DegenerateAmp {
                gain,
                pump,
                input,
                output,
            } => {
                let i = slot(&slots, input)?;
                let phase = match pump {
                    Pump::Zero => 0.0,
                    Pump::Pi => std::f64::consts::PI,
                };
                let r = squeezing(*gain);
                state.apply(Generator::Squeeze { i, r, phase }, &stage)?;
                slots.insert(output.clone(), i);
            }
            Step::EoChannel { k, inputs, output } => {
                let (s, v) = (slot(&slots, &inputs[0])?, slot(&slots, &inputs[1])?);
                channels.insert(output.clone(), (*k, s, v));
            }
            Step::Displace {
                lambda,
                inputs,
                output,
            } => {
                let (k, s, v1) = channels.remove(&inputs[0]).ok_or_else(|| {
                    OracleError::Unsupported(format!(
                        "{stage}: the displaced channel must come straight from `eochan`"
                    ))
                })?;
                let v2 = slot(&slots, &inputs[1])?;
                let g2 = (k * lambda).powi(2);
                let angle = (g2 / (1.0 + g2)).sqrt().acos();
                state.apply(Generator::Mix { i: s, j: v2, angle }, &stage)?;
                let r = squeezing(1.0 + g2);
                state.apply(Generator::TwoModeSqueeze { i: s, j: v1, r }, &stage)?;
                slots.insert(output.clone(), s);
            }
        }
    }
    if let Some(name) = channels.keys().next() {
        return Err(OracleError::Unsupported(format!(
            "classical channel `{name}` that is never displaced onto a field"
        )));
    }
    Ok(OracleRun { state, slots })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::presets::build_eo_classical;
    use crate::mode::stats::SEPARABLE_LIMIT;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn state(modes: usize, alpha: Complex64) -> FockState {
        FockState::coherent_product(modes, 0, alpha, 40, DEFAULT_TAIL_THRESHOLD).unwrap()
    }

    #[test]
    fn vacuum_preparation() {
        let s = state(2, c(0.0, 0.0));
        assert_eq!(s.amplitudes()[0], c(1.0, 0.0));
        assert!((s.norm() - 1.0).abs() < 1e-12);
        let m = s.measure(1).unwrap();
        assert!((m.var_plus - 1.0).abs() < 1e-10 && (m.var_minus - 1.0).abs() < 1e-10);
    }

    #[test]
    fn coherent_preparation_moments() {
        let s = state(1, c(1.0, 0.0));
        let m = s.measure(0).unwrap();
        assert!((m.mean_photons - 1.0).abs() < 1e-10);
        assert!((s.norm() - 1.0).abs() < 1e-12);
        let m = state(1, c(0.5, 0.0)).measure(0).unwrap();
        assert!((m.mean_plus - 1.0).abs() < 1e-10);
        assert!((m.var_plus - 1.0).abs() < 1e-10 && (m.var_minus - 1.0).abs() < 1e-10);
    }

    #[test]
    fn preparation_tail_refused() {
        let err = FockState::coherent_product(1, 0, c(6.0, 0.0), 10, DEFAULT_TAIL_THRESHOLD);
        assert!(matches!(err, Err(OracleError::TailMass { .. })));
        let err = FockState::coherent_product(1, 0, c(0.0, 0.0), 1, DEFAULT_TAIL_THRESHOLD);
        assert!(matches!(err, Err(OracleError::CutoffTooSmall { .. })));
    }

    #[test]
    fn mixing_sign_convention() {
        // ⟨a₁⟩ → √ε x − √(1−ε) y, ⟨a₂⟩ → √(1−ε) x + √ε y
        let (x, eps) = (0.6, 0.3f64);
        let mut s = state(2, c(x, 0.0));
        let angle = eps.sqrt().acos();
        s.apply(Generator::Mix { i: 0, j: 1, angle }, "bs").unwrap();
        let m0 = s.measure(0).unwrap();
        let m1 = s.measure(1).unwrap();
        assert!((m0.mean_plus - 2.0 * eps.sqrt() * x).abs() < 1e-12);
        assert!((m1.mean_plus - 2.0 * (1.0 - eps).sqrt() * x).abs() < 1e-12);
        let mut s = FockState::coherent_product(2, 1, c(x, 0.0), 40, 1e-10).unwrap();
        s.apply(Generator::Mix { i: 0, j: 1, angle }, "bs").unwrap();
        assert!((s.measure(0).unwrap().mean_plus + 2.0 * (1.0 - eps).sqrt() * x).abs() < 1e-12);
    }

    #[test]
    fn transmissive_mix_is_identity() {
        let mut s = state(2, c(0.4, 0.2));
        let before = s.amplitudes().to_vec();
        s.apply(Generator::Mix { i: 0, j: 1, angle: 1f64.sqrt().acos() }, "bs").unwrap();
        assert_eq!(s.amplitudes(), &before[..]);
    }

    #[test]
    fn two_mode_squeezed_vacuum_correlations() {
        let h = 1.2f64;
        let mut s = state(2, c(0.0, 0.0));
        s.apply(Generator::TwoModeSqueeze { i: 0, j: 1, r: squeezing(h) }, "nopa").unwrap();
        let (m0, m1) = (s.measure(0).unwrap(), s.measure(1).unwrap());
        let (cp, cm) = s.covariances(0, 1).unwrap();
        let diff = m0.var_plus + m1.var_plus - 2.0 * cp;
        let sum = m0.var_minus + m1.var_minus + 2.0 * cm;
        let expected = 2.0 * (h.sqrt() - (h - 1.0).sqrt()).powi(2);
        assert!((diff - expected).abs() < 1e-6, "{diff} vs {expected}");
        assert!((sum - expected).abs() < 1e-6, "{sum} vs {expected}");
        assert!(diff < SEPARABLE_LIMIT);
        assert!((s.norm() - 1.0).abs() < 1e-8);
        // thermal marginal with mean H − 1
        assert!((m0.mean_photons - (h - 1.0)).abs() < 1e-8);
    }

    #[test]
    fn squeezed_vacuum_is_minimum_uncertainty() {
        let g = 1.2f64;
        let mut s = state(1, c(0.0, 0.0));
        s.apply(Generator::Squeeze { i: 0, r: squeezing(g), phase: 0.0 }, "dpa").unwrap();
        let m = s.measure(0).unwrap();
        assert!((m.var_plus * m.var_minus - 1.0).abs() < 1e-6);
        assert!((m.var_plus - (g.sqrt() + (g - 1.0).sqrt()).powi(2)).abs() < 1e-6);
    }

    #[test]
    fn coherent_overlap() {
        let s = state(2, c(0.3, 0.0));
        assert!((s.overlap(c(0.3, 0.0), 0).unwrap() - 1.0).abs() < 1e-8);
        let expected = (-(0.5f64 - 0.3).powi(2)).exp();
        assert!((s.overlap(c(0.5, 0.0), 0).unwrap() - expected).abs() < 1e-12);
        assert!((s.overlap(c(0.0, 0.0), 1).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn growth_beyond_cutoff_is_flagged() {
        let mut s = FockState::coherent_product(2, 0, c(0.0, 0.0), 8, 1e-10).unwrap();
        let err = s.apply(Generator::TwoModeSqueeze { i: 0, j: 1, r: squeezing(2.0) }, "nopa");
        assert!(matches!(err, Err(OracleError::TailMass { .. })));
        assert!(!s.is_trusted());
        assert_eq!(s.measure(0), Err(OracleError::Untrusted));
    }

    #[test]
    fn invalid_mode_index() {
        let mut s = state(2, c(0.0, 0.0));
        assert!(matches!(s.measure(2), Err(OracleError::InvalidMode { .. })));
        assert!(s
            .apply(Generator::Mix { i: 0, j: 0, angle: 0.1 }, "bs")
            .is_err());
    }

    #[test]
    fn eo_scheme_output_variance() {
        let run = simulate(&build_eo_classical(1.0, 1.0).unwrap(), OracleOptions::default()).unwrap();
        let m = run.state.measure(run.slot("a_out").unwrap()).unwrap();
        assert!((m.var_plus - 3.0).abs() < 1e-6, "{}", m.var_plus);
        assert!((m.var_minus - 3.0).abs() < 1e-6, "{}", m.var_minus);
    }
}
