//! Mode operators as exact linear combinations of vacuum annihilation and
//! creation operators, plus the optical elements that transform them.

mod basis;
pub mod elements;
pub mod stats;

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

pub use basis::{BasisEntry, BasisKind, VacuumBasis};

/// Absolute tolerance for the physical-mode commutator check.
pub const COMMUTATOR_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModeError {
    #[error("duplicate mode label `{0}`")]
    DuplicateLabel(String),
    #[error("basis already has a signal mode; cannot add `{0}` as a second one")]
    SecondSignal(String),
    #[error("{name} = {value} is out of range: expected {expected}")]
    Parameter {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
}

pub(crate) fn check_param(
    name: &'static str,
    value: f64,
    ok: bool,
    expected: &'static str,
) -> Result<(), ModeError> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(ModeError::Parameter {
            name,
            value,
            expected,
        })
    }
}

/// Coefficients multiplying one basis operator `v` and its adjoint `v†`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Coeff {
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl Coeff {
    pub const ZERO: Coeff = Coeff {
        alpha: Complex64::new(0.0, 0.0),
        beta: Complex64::new(0.0, 0.0),
    };

    pub fn new(alpha: Complex64, beta: Complex64) -> Self {
        Self { alpha, beta }
    }

    pub fn real(alpha: f64, beta: f64) -> Self {
        Self::new(Complex64::new(alpha, 0.0), Complex64::new(beta, 0.0))
    }

    /// Coefficient on `v` of the in-phase quadrature `a + a†`.
    pub fn plus(&self) -> Complex64 {
        self.alpha + self.beta.conj()
    }

    /// Coefficient on `v` of the out-of-phase quadrature `i(a − a†)`.
    pub fn minus(&self) -> Complex64 {
        Complex64::i() * (self.alpha - self.beta.conj())
    }
}

/// One optical mode operator `Σₖ (αₖ vₖ + βₖ vₖ†) + displacement`.
///
/// The coefficient vector is indexed by [`VacuumBasis`] position; missing
/// trailing entries are zero, so modes built before the basis grew remain valid.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BogoliubovMode {
    pub displacement: Complex64,
    coeffs: Vec<Coeff>,
}

impl BogoliubovMode {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis_vector(len: usize, index: usize, displacement: Complex64) -> Self {
        let mut coeffs = vec![Coeff::ZERO; len.max(index + 1)];
        coeffs[index].alpha = Complex64::new(1.0, 0.0);
        Self {
            displacement,
            coeffs,
        }
    }

    pub fn from_coeffs(displacement: Complex64, coeffs: Vec<Coeff>) -> Self {
        Self {
            displacement,
            coeffs,
        }
    }

    pub fn coeff(&self, index: usize) -> Coeff {
        self.coeffs.get(index).copied().unwrap_or(Coeff::ZERO)
    }

    pub fn coeffs(&self) -> &[Coeff] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The adjoint operator: α ↔ β*, displacement conjugated.
    pub fn dagger(&self) -> Self {
        Self {
            displacement: self.displacement.conj(),
            coeffs: self
                .coeffs
                .iter()
                .map(|c| Coeff::new(c.beta.conj(), c.alpha.conj()))
                .collect(),
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            displacement: self.displacement * factor,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| Coeff::new(c.alpha * factor, c.beta * factor))
                .collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        let n = self.len().max(other.len());
        let coeffs = (0..n)
            .map(|k| {
                let (a, b) = (self.coeff(k), other.coeff(k));
                Coeff::new(f(a.alpha, b.alpha), f(a.beta, b.beta))
            })
            .collect();
        Self {
            displacement: f(self.displacement, other.displacement),
            coeffs,
        }
    }

    /// `[a, a†] = Σ (|α|² − |β|²)`: 1 for a physical mode, 0 for a classical channel.
    pub fn commutator_norm(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.alpha.norm_sqr() - c.beta.norm_sqr())
            .sum()
    }

    pub fn is_physical(&self) -> bool {
        (self.commutator_norm() - 1.0).abs() <= COMMUTATOR_TOL
    }

    /// `[a₁, a₂†] = Σ (α₁ α₂* − β₁ β₂*)`.
    pub fn cross_commutator(&self, other: &Self) -> Complex64 {
        let n = self.len().max(other.len());
        (0..n)
            .map(|k| {
                let (a, b) = (self.coeff(k), other.coeff(k));
                a.alpha * b.alpha.conj() - a.beta * b.beta.conj()
            })
            .sum()
    }

    /// `[a₁, a₂] = Σ (α₁ β₂ − β₁ α₂)`.
    pub fn annihilator_commutator(&self, other: &Self) -> Complex64 {
        let n = self.len().max(other.len());
        (0..n)
            .map(|k| {
                let (a, b) = (self.coeff(k), other.coeff(k));
                a.alpha * b.beta - a.beta * b.alpha
            })
            .sum()
    }

    /// Largest absolute difference over displacement and all coefficients.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let d = self - other;
        d.coeffs
            .iter()
            .flat_map(|c| [c.alpha.norm(), c.beta.norm()])
            .fold(d.displacement.norm(), f64::max)
    }
}

impl Add for &BogoliubovMode {
    type Output = BogoliubovMode;
    fn add(self, rhs: Self) -> BogoliubovMode {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &BogoliubovMode {
    type Output = BogoliubovMode;
    fn sub(self, rhs: Self) -> BogoliubovMode {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &BogoliubovMode {
    type Output = BogoliubovMode;
    fn neg(self) -> BogoliubovMode {
        self.scale_real(-1.0)
    }
}

impl Mul<f64> for &BogoliubovMode {
    type Output = BogoliubovMode;
    fn mul(self, rhs: f64) -> BogoliubovMode {
        self.scale_real(rhs)
    }
}
