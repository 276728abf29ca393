//! Quadrature moments of modes whose basis inputs are all in the vacuum state.
//!
//! Quadratures are `X⁺ = a + a†` and `X⁻ = i(a − a†)`, with the vacuum
//! variance normalised to 1. For an operator `Σ cₖ vₖ + h.c.` over vacuum
//! inputs the variance is `Σ |cₖ|²` and the symmetrised covariance of two such
//! operators is `Re Σ cₖ c'ₖ*`.

use num_complex::Complex64;
use serde::Serialize;

use super::{BogoliubovMode, Coeff};

/// Variance of two independent vacua in a sum or difference quadrature.
pub const SEPARABLE_LIMIT: f64 = 2.0;

/// Default classicality threshold on both quadrature variances (20 dB above vacuum).
pub const CLASSICAL_THRESHOLD: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureStats {
    pub mean_plus: f64,
    pub mean_minus: f64,
    pub var_plus: f64,
    pub var_minus: f64,
    /// Symmetrised covariance of `X⁺` with `X⁻` within the mode.
    pub cov_plus_minus: f64,
    pub mean_photons: f64,
}

impl QuadratureStats {
    /// Both quadrature uncertainties at or above `threshold`.
    pub fn is_classical(&self, threshold: f64) -> bool {
        self.var_plus >= threshold && self.var_minus >= threshold
    }

    pub fn uncertainty_product(&self) -> f64 {
        self.var_plus * self.var_minus
    }
}

fn cov(a: impl Iterator<Item = Complex64>, b: impl Iterator<Item = Complex64>) -> f64 {
    a.zip(b).map(|(x, y)| (x * y.conj()).re).sum()
}

fn padded(mode: &BogoliubovMode, n: usize) -> impl Iterator<Item = Coeff> + '_ {
    (0..n).map(move |k| mode.coeff(k))
}

pub fn quadrature_stats(mode: &BogoliubovMode) -> QuadratureStats {
    let c = mode.coeffs();
    let var_plus = c.iter().map(|c| c.plus().norm_sqr()).sum();
    let var_minus = c.iter().map(|c| c.minus().norm_sqr()).sum();
    let cov_plus_minus = cov(c.iter().map(Coeff::plus), c.iter().map(Coeff::minus));
    let d = mode.displacement;
    QuadratureStats {
        mean_plus: 2.0 * d.re,
        mean_minus: -2.0 * d.im,
        var_plus,
        var_minus,
        cov_plus_minus,
        mean_photons: d.norm_sqr() + c.iter().map(|c| c.beta.norm_sqr()).sum::<f64>(),
    }
}

/// Second moments of a pair of modes over the same basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JointStats {
    pub first: QuadratureStats,
    pub second: QuadratureStats,
    pub cov_plus: f64,
    pub cov_minus: f64,
}

impl JointStats {
    /// `Δ(X⁺₁ − X⁺₂)²`
    pub fn diff_plus_variance(&self) -> f64 {
        self.first.var_plus + self.second.var_plus - 2.0 * self.cov_plus
    }

    /// `Δ(X⁻₁ + X⁻₂)²`
    pub fn sum_minus_variance(&self) -> f64 {
        self.first.var_minus + self.second.var_minus + 2.0 * self.cov_minus
    }

    pub fn diff_plus_ratio(&self) -> f64 {
        self.diff_plus_variance() / SEPARABLE_LIMIT
    }

    pub fn sum_minus_ratio(&self) -> f64 {
        self.sum_minus_variance() / SEPARABLE_LIMIT
    }

    /// Normalised correlation of the two in-phase quadratures.
    pub fn correlation_plus(&self) -> f64 {
        self.cov_plus / (self.first.var_plus * self.second.var_plus).sqrt()
    }

    pub fn correlation_minus(&self) -> f64 {
        self.cov_minus / (self.first.var_minus * self.second.var_minus).sqrt()
    }
}

pub fn joint_stats(m1: &BogoliubovMode, m2: &BogoliubovMode) -> JointStats {
    let n = m1.len().max(m2.len());
    JointStats {
        first: quadrature_stats(m1),
        second: quadrature_stats(m2),
        cov_plus: cov(padded(m1, n).map(|c| c.plus()), padded(m2, n).map(|c| c.plus())),
        cov_minus: cov(padded(m1, n).map(|c| c.minus()), padded(m2, n).map(|c| c.minus())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mode::elements::nondegenerate_pa;
    use crate::mode::VacuumBasis;

    fn vacua() -> Vec<BogoliubovMode> {
        VacuumBasis::new("a_in", &["v1", "v2"])
            .unwrap()
            .initial_modes(Complex64::new(0.0, 0.0))
    }

    #[test]
    fn vacuum_normalisation() {
        let s = quadrature_stats(&vacua()[1]);
        assert_eq!((s.var_plus, s.var_minus), (1.0, 1.0));
        assert_eq!((s.mean_plus, s.mean_minus, s.mean_photons), (0.0, 0.0, 0.0));
        assert_eq!(s.cov_plus_minus, 0.0);
    }

    #[test]
    fn coherent_means() {
        let basis = VacuumBasis::new::<&str>("a", &[]).unwrap();
        let m = basis.mode(0, Complex64::new(0.5, 0.25));
        let s = quadrature_stats(&m);
        assert_eq!(s.mean_plus, 1.0);
        // X⁻ = i(a − a†) has mean i(α − α*) = −2 Im α
        assert_eq!(s.mean_minus, -0.5);
        assert!((s.mean_photons - 0.3125).abs() < 1e-15);
    }

    #[test]
    fn eq2_output_has_three_units_per_quadrature() {
        let m = vacua();
        let out = &(&m[0] + &m[1].dagger()) - &m[2];
        let s = quadrature_stats(&out);
        assert!((s.var_plus - 3.0).abs() < 1e-12);
        assert!((s.var_minus - 3.0).abs() < 1e-12);
    }

    #[test]
    fn independent_vacua_are_uncorrelated() {
        let m = vacua();
        let j = joint_stats(&m[1], &m[2]);
        assert_eq!((j.cov_plus, j.cov_minus), (0.0, 0.0));
        assert_eq!(j.diff_plus_variance(), SEPARABLE_LIMIT);
        assert_eq!(j.sum_minus_ratio(), 1.0);
    }

    #[test]
    fn self_covariance_is_variance() {
        let m = vacua();
        let h = 3.0;
        let (b1, _) = nondegenerate_pa(&m[1], &m[2], h).unwrap();
        let j = joint_stats(&b1, &b1);
        assert!((j.cov_plus - (2.0 * h - 1.0)).abs() < 1e-12);
        assert!((j.cov_minus - (2.0 * h - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn classicality_threshold() {
        let m = vacua();
        let g = 100.0f64;
        let a_c = &(&m[0] * g.sqrt()) + &(&m[1].dagger() * (g - 1.0).sqrt());
        let s = quadrature_stats(&a_c);
        assert!((s.var_plus - 199.0).abs() < 1e-10);
        assert!(s.is_classical(CLASSICAL_THRESHOLD));
        assert!(!quadrature_stats(&m[0]).is_classical(CLASSICAL_THRESHOLD));
    }
}
