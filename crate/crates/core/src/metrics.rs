//! Teleporter figures of merit: added noise, coherent-state fidelity, signal
//! transfer coefficients and input–output conditional variances.

use num_complex::Complex64;
use serde::Serialize;

use crate::circuit::RunResult;
use crate::mode::stats::{joint_stats, quadrature_stats, QuadratureStats, CLASSICAL_THRESHOLD};
use crate::mode::BogoliubovMode;

/// Fidelity of the best measure-and-prepare strategy for coherent inputs.
pub const CLASSICAL_FIDELITY: f64 = 0.5;

/// Margin applied before declaring a fidelity or transfer sum above its
/// classical bound, so rounding at the boundary never sets the flag.
pub const BOUNDARY_MARGIN: f64 = 1e-9;

/// `n± = V±_out − g²·V±_in`.
pub fn added_noise(out: &QuadratureStats, input: &QuadratureStats, gain: f64) -> (f64, f64) {
    let g2 = gain * gain;
    (
        out.var_plus - g2 * input.var_plus,
        out.var_minus - g2 * input.var_minus,
    )
}

/// Overlap `⟨β|ρ|β⟩` of a Gaussian state (given by its quadrature moments)
/// with the coherent state `|β⟩`.
///
/// With `σ` the quadrature covariance matrix plus the coherent state's
/// identity and `δ` the mean offset, `F = 2/√det σ · exp(−½ δᵀ σ⁻¹ δ)`.
pub fn gaussian_fidelity(state: &QuadratureStats, reference: Complex64) -> f64 {
    let a = 1.0 + state.var_plus;
    let b = state.cov_plus_minus;
    let d = 1.0 + state.var_minus;
    let det = a * d - b * b;
    let dx = state.mean_plus - 2.0 * reference.re;
    let dy = state.mean_minus + 2.0 * reference.im;
    let quad = (d * dx * dx - 2.0 * b * dx * dy + a * dy * dy) / det;
    2.0 / det.sqrt() * (-0.5 * quad).exp()
}

/// Fidelity with the input coherent state `alpha` of an output with amplitude
/// gain `gain` and added noise `(n⁺, n⁻)`, assuming no other displacement.
pub fn coherent_fidelity(gain: f64, noise: (f64, f64), alpha: Complex64) -> f64 {
    let v_plus = gain * gain + noise.0;
    let v_minus = gain * gain + noise.1;
    let (m_plus, m_minus) = (2.0 * alpha.re, -2.0 * alpha.im);
    let off = gain - 1.0;
    let exponent = off * off * m_plus * m_plus / (2.0 * (1.0 + v_plus))
        + off * off * m_minus * m_minus / (2.0 * (1.0 + v_minus));
    2.0 / ((1.0 + v_plus) * (1.0 + v_minus)).sqrt() * (-exponent).exp()
}

/// Signal-to-noise transfer `T± = g²·V±_in / V±_out`.
pub fn transfer_coefficients(
    out: &QuadratureStats,
    input: &QuadratureStats,
    gain: f64,
) -> (f64, f64) {
    let g2 = gain * gain;
    (
        g2 * input.var_plus / out.var_plus,
        g2 * input.var_minus / out.var_minus,
    )
}

/// Residual output variance given the input, per quadrature.
pub fn conditional_variance(input: &BogoliubovMode, output: &BogoliubovMode) -> (f64, f64) {
    let j = joint_stats(input, output);
    let cond = |v_in: f64, v_out: f64, c: f64| v_out * (1.0 - c * c / (v_in * v_out));
    (
        cond(j.first.var_plus, j.second.var_plus, j.cov_plus),
        cond(j.first.var_minus, j.second.var_minus, j.cov_minus),
    )
}

#[derive(Debug, Clone)]
pub struct ReportOptions {
    /// Mode whose variances decide the classical-channel flag.
    pub channel: Option<String>,
    pub classical_threshold: f64,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            channel: None,
            classical_threshold: CLASSICAL_THRESHOLD,
        }
    }
}

impl ReportOptions {
    pub fn with_channel(channel: &str) -> Self {
        Self {
            channel: Some(channel.to_string()),
            ..Self::default()
        }
    }
}

/// Summary of one teleporter run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TeleportReport {
    /// Amplitude gain on the signal input.
    pub signal_gain: f64,
    pub added_noise_plus: f64,
    pub added_noise_minus: f64,
    pub fidelity: f64,
    pub transfer_plus: f64,
    pub transfer_minus: f64,
    pub conditional_variance_plus: f64,
    pub conditional_variance_minus: f64,
    pub classical_channel_flag: bool,
    /// Fidelity above the classical 1/2.
    pub fidelity_flag: bool,
    /// `T⁺ + T⁻ > 1`.
    pub transfer_flag: bool,
}

impl TeleportReport {
    pub fn transfer_sum(&self) -> f64 {
        self.transfer_plus + self.transfer_minus
    }
}

pub fn teleport_report(run: &RunResult, opts: &ReportOptions) -> TeleportReport {
    let input = run.input();
    let output = run.output();
    let in_stats = quadrature_stats(input);
    let out_stats = quadrature_stats(output);
    let gain = run.signal_coefficient().norm();
    let (added_noise_plus, added_noise_minus) = added_noise(&out_stats, &in_stats, gain);
    let fidelity = gaussian_fidelity(&out_stats, input.displacement);
    let (transfer_plus, transfer_minus) = transfer_coefficients(&out_stats, &in_stats, gain);
    let (conditional_variance_plus, conditional_variance_minus) =
        conditional_variance(input, output);
    let classical_channel_flag = opts
        .channel
        .as_deref()
        .and_then(|name| run.mode(name))
        .map(|m| quadrature_stats(m).is_classical(opts.classical_threshold))
        .unwrap_or(false);
    TeleportReport {
        signal_gain: gain,
        added_noise_plus,
        added_noise_minus,
        fidelity,
        transfer_plus,
        transfer_minus,
        conditional_variance_plus,
        conditional_variance_minus,
        classical_channel_flag,
        fidelity_flag: fidelity > CLASSICAL_FIDELITY + BOUNDARY_MARGIN,
        transfer_flag: transfer_plus + transfer_minus > 1.0 + BOUNDARY_MARGIN,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::presets::{build_ao_classical, build_ao_quantum, build_eo_classical};
    use crate::circuit::CircuitBuilder;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn stats(var: f64) -> QuadratureStats {
        QuadratureStats {
            mean_plus: 0.0,
            mean_minus: 0.0,
            var_plus: var,
            var_minus: var,
            cov_plus_minus: 0.0,
            mean_photons: 0.0,
        }
    }

    fn identity_run(alpha: Complex64) -> RunResult {
        let mut b = CircuitBuilder::new();
        b.input("a", alpha).unwrap().output("a").unwrap();
        b.build().unwrap().run().unwrap()
    }

    #[test]
    fn added_noise_of_eq2_output() {
        let (p, m) = added_noise(&stats(3.0), &stats(1.0), 1.0);
        assert_eq!((p, m), (2.0, 2.0));
    }

    #[test]
    fn identity_has_no_penalty() {
        let r = teleport_report(&identity_run(c(0.3, -0.2)), &ReportOptions::default());
        assert_eq!((r.added_noise_plus, r.added_noise_minus), (0.0, 0.0));
        assert!((r.fidelity - 1.0).abs() < 1e-15);
        assert_eq!((r.transfer_plus, r.transfer_minus), (1.0, 1.0));
        assert!(r.conditional_variance_plus.abs() < 1e-15);
        assert!(r.conditional_variance_minus.abs() < 1e-15);
    }

    #[test]
    fn classical_bound() {
        assert!((coherent_fidelity(1.0, (2.0, 2.0), c(0.7, 0.1)) - 0.5).abs() < 1e-15);
        assert_eq!(coherent_fidelity(1.0, (0.0, 0.0), c(1.0, 0.0)), 1.0);
        let (tp, tm) = transfer_coefficients(&stats(3.0), &stats(1.0), 1.0);
        assert!((tp - 1.0 / 3.0).abs() < 1e-15 && (tm - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn quantum_fidelity_closed_form() {
        for h in [1.0f64, 1.5, 4.0, 25.0] {
            let s = (h.sqrt() - (h - 1.0).sqrt()).powi(2);
            let n = 2.0 * s;
            let f = coherent_fidelity(1.0, (n, n), c(0.5, 0.0));
            assert!((f - 1.0 / (1.0 + s)).abs() < 1e-14, "H = {h}");
        }
    }

    #[test]
    fn coherent_and_gaussian_forms_agree() {
        // non-unity gain: output mean g·⟨X_in⟩, variance g² + n
        let alpha = c(0.4, -0.9);
        let g = 1.7;
        let n = (0.8, 1.3);
        let out = QuadratureStats {
            mean_plus: g * 2.0 * alpha.re,
            mean_minus: -g * 2.0 * alpha.im,
            var_plus: g * g + n.0,
            var_minus: g * g + n.1,
            cov_plus_minus: 0.0,
            mean_photons: 0.0,
        };
        let a = coherent_fidelity(g, n, alpha);
        let b = gaussian_fidelity(&out, alpha);
        assert!((a - b).abs() < 1e-15, "{a} vs {b}");
        assert!(a < 1.0 && a > 0.0);
    }

    #[test]
    fn coherent_overlap_of_two_coherent_states() {
        // |⟨α|β⟩|² = exp(−|α − β|²)
        let beta = c(0.3, 0.4);
        let mut s = stats(1.0);
        s.mean_plus = 2.0 * beta.re;
        s.mean_minus = -2.0 * beta.im;
        let alpha = c(-0.2, 0.1);
        let expected = (-(beta - alpha).norm_sqr()).exp();
        assert!((gaussian_fidelity(&s, alpha) - expected).abs() < 1e-15);
    }

    #[test]
    fn classical_schemes_report() {
        for alpha in [c(0.0, 0.0), c(1.0, 0.0), c(0.3, -0.7)] {
            let eo = build_eo_classical(1.0, 1.0).unwrap().with_signal_displacement(alpha);
            let r = teleport_report(&eo.run().unwrap(), &ReportOptions::with_channel("A_c"));
            assert!((r.fidelity - 0.5).abs() < 1e-12);
            assert!((r.conditional_variance_plus - 2.0).abs() < 1e-12);
            assert!((r.transfer_sum() - 2.0 / 3.0).abs() < 1e-12);
            assert!(!r.fidelity_flag && !r.transfer_flag);
        }
    }

    #[test]
    fn conditional_variance_equals_added_noise_at_unity_gain() {
        for circuit in [
            build_ao_classical(7.0).unwrap(),
            build_ao_quantum(50.0, 3.0, true).unwrap(),
            build_eo_classical(2.0, 0.5).unwrap(),
        ] {
            let r = teleport_report(&circuit.run().unwrap(), &ReportOptions::default());
            assert!((r.conditional_variance_plus - r.added_noise_plus).abs() < 1e-10);
            assert!((r.conditional_variance_minus - r.added_noise_minus).abs() < 1e-10);
        }
    }

    #[test]
    fn classical_channel_flag_uses_named_mode() {
        let run = build_ao_classical(100.0).unwrap().run().unwrap();
        assert!(teleport_report(&run, &ReportOptions::with_channel("a_c")).classical_channel_flag);
        assert!(!teleport_report(&run, &ReportOptions::default()).classical_channel_flag);
        let run = build_ao_classical(10.0).unwrap().run().unwrap();
        assert!(!teleport_report(&run, &ReportOptions::with_channel("a_c")).classical_channel_flag);
    }

    #[test]
    fn quantum_scheme_beats_both_bounds() {
        let run = build_ao_quantum(1e6, 25.0, false).unwrap().run().unwrap();
        let r = teleport_report(&run, &ReportOptions::with_channel("a_c"));
        assert!((r.added_noise_plus - 0.0204).abs() < 1e-4);
        let s = (5.0 - 24f64.sqrt()).powi(2);
        assert!((r.fidelity - 1.0 / (1.0 + s * (1.0 - 1e-6))).abs() < 1e-12);
        assert!((r.transfer_plus - 0.980).abs() < 1e-3);
        assert!(r.fidelity_flag && r.transfer_flag);
    }
}
