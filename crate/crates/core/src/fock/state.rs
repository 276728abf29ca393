use num_complex::Complex64;

use super::OracleError;
use crate::mode::stats::QuadratureStats;

/// Default limit on the population of the two highest number states of any mode.
///
/// Second moments computed from a truncated run are off by roughly 10 to 100
/// times the tail mass, so this keeps trusted results within 1e-6.
pub const DEFAULT_TAIL_THRESHOLD: f64 = 1e-8;

/// Largest step (in units of the generator's scalar parameter) of one
/// Taylor sub-step of the propagator.
const MAX_SUBSTEP: f64 = 0.1;

/// Dense state vector over `modes` truncated oscillators of dimension `cutoff`.
///
/// Mode 0 is the most significant digit of the flat index.
#[derive(Debug, Clone)]
pub struct FockState {
    cutoff: usize,
    modes: usize,
    amps: Vec<Complex64>,
    sqrt: Vec<f64>,
    tail_threshold: f64,
    max_tail: f64,
    trusted: bool,
}

/// Quadratic generator `G` of a Gaussian unitary `exp(G)`.
#[derive(Debug, Clone, Copy)]
pub enum Generator {
    /// `φ (a_j† a_i − a_i† a_j)`: `a_i → cos φ a_i − sin φ a_j`, `a_j → cos φ a_j + sin φ a_i`.
    Mix { i: usize, j: usize, angle: f64 },
    /// `r (a_i† a_j† − a_i a_j)`: `a_i → cosh r a_i + sinh r a_j†`.
    TwoModeSqueeze { i: usize, j: usize, r: f64 },
    /// `(r/2)(e^{iθ} a†² − e^{−iθ} a²)`: `a → cosh r a + e^{iθ} sinh r a†`.
    Squeeze { i: usize, r: f64, phase: f64 },
}

impl Generator {
    fn strength(&self) -> f64 {
        match *self {
            Generator::Mix { angle, .. } => angle.abs(),
            Generator::TwoModeSqueeze { r, .. } | Generator::Squeeze { r, .. } => r.abs(),
        }
    }

    fn modes(&self) -> (usize, Option<usize>) {
        match *self {
            Generator::Mix { i, j, .. } | Generator::TwoModeSqueeze { i, j, .. } => (i, Some(j)),
            Generator::Squeeze { i, .. } => (i, None),
        }
    }
}

impl FockState {
    /// Product state with `|displacement⟩` on mode `signal` and vacuum elsewhere.
    pub fn coherent_product(
        modes: usize,
        signal: usize,
        displacement: Complex64,
        cutoff: usize,
        tail_threshold: f64,
    ) -> Result<Self, OracleError> {
        if cutoff < 2 {
            return Err(OracleError::CutoffTooSmall { cutoff });
        }
        if (cutoff as f64).powi(modes as i32) > super::MAX_AMPLITUDES as f64 {
            return Err(OracleError::TooLarge { modes, cutoff });
        }
        if signal >= modes {
            return Err(OracleError::InvalidMode { index: signal, modes });
        }
        let coherent = coherent_amplitudes(displacement, cutoff);
        let kept: f64 = coherent.iter().map(|c| c.norm_sqr()).sum();
        let top: f64 = coherent[cutoff - 2..].iter().map(|c| c.norm_sqr()).sum();
        let tail = top + (1.0 - kept).max(0.0);
        if tail > tail_threshold {
            return Err(OracleError::TailMass {
                stage: "preparation".into(),
                mass: tail,
                threshold: tail_threshold,
            });
        }
        let len = cutoff.pow(modes as u32);
        let mut amps = vec![Complex64::new(0.0, 0.0); len];
        let stride = cutoff.pow((modes - 1 - signal) as u32);
        let norm = kept.sqrt();
        for (n, c) in coherent.iter().enumerate() {
            amps[n * stride] = c / norm;
        }
        Ok(Self {
            cutoff,
            modes,
            amps,
            sqrt: (0..=cutoff + 1).map(|n| (n as f64).sqrt()).collect(),
            tail_threshold,
            max_tail: tail,
            trusted: true,
        })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn is_trusted(&self) -> bool {
        self.trusted
    }

    /// Largest tail mass seen on any mode so far.
    pub fn max_tail(&self) -> f64 {
        self.max_tail
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Retained probability; moments are taken on the renormalised state.
    fn weight(&self) -> f64 {
        self.norm().powi(2)
    }

    fn stride(&self, mode: usize) -> usize {
        self.cutoff.pow((self.modes - 1 - mode) as u32)
    }

    fn level(&self, idx: usize, stride: usize) -> usize {
        (idx / stride) % self.cutoff
    }

    fn check_mode(&self, mode: usize) -> Result<(), OracleError> {
        if mode < self.modes {
            Ok(())
        } else {
            Err(OracleError::InvalidMode {
                index: mode,
                modes: self.modes,
            })
        }
    }

    /// `out = scale · G ψ` for the truncated generator.
    fn apply_generator(&self, gen: &Generator, scale: f64, psi: &[Complex64], out: &mut [Complex64]) {
        out.iter_mut().for_each(|o| *o = Complex64::new(0.0, 0.0));
        let n_max = self.cutoff - 1;
        let sq = &self.sqrt;
        match *gen {
            Generator::Mix { i, j, angle } => {
                let (si, sj) = (self.stride(i), self.stride(j));
                let c = scale * angle;
                for (idx, &amp) in psi.iter().enumerate() {
                    if amp == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let (ni, nj) = (self.level(idx, si), self.level(idx, sj));
                    // a_j† a_i
                    if ni > 0 && nj < n_max {
                        out[idx - si + sj] += amp * (c * sq[ni] * sq[nj + 1]);
                    }
                    // − a_i† a_j
                    if nj > 0 && ni < n_max {
                        out[idx + si - sj] -= amp * (c * sq[nj] * sq[ni + 1]);
                    }
                }
            }
            Generator::TwoModeSqueeze { i, j, r } => {
                let (si, sj) = (self.stride(i), self.stride(j));
                let c = scale * r;
                for (idx, &amp) in psi.iter().enumerate() {
                    if amp == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let (ni, nj) = (self.level(idx, si), self.level(idx, sj));
                    if ni < n_max && nj < n_max {
                        out[idx + si + sj] += amp * (c * sq[ni + 1] * sq[nj + 1]);
                    }
                    if ni > 0 && nj > 0 {
                        out[idx - si - sj] -= amp * (c * sq[ni] * sq[nj]);
                    }
                }
            }
            Generator::Squeeze { i, r, phase } => {
                let si = self.stride(i);
                let up = Complex64::from_polar(0.5 * scale * r, phase);
                let down = up.conj();
                for (idx, &amp) in psi.iter().enumerate() {
                    if amp == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let n = self.level(idx, si);
                    if n + 2 <= n_max {
                        out[idx + 2 * si] += amp * up * (sq[n + 1] * sq[n + 2]);
                    }
                    if n >= 2 {
                        out[idx - 2 * si] -= amp * down * (sq[n] * sq[n - 1]);
                    }
                }
            }
        }
    }

    /// `ψ ← exp(G) ψ` by sub-stepped Taylor series, then the tail check.
    ///
    /// The generator is truncated to the retained levels, so the propagator is
    /// unitary on the truncated space; whatever the exact state would hold
    /// above the cutoff is instead reflected back, which is why a heavy tail
    /// makes every moment of the run untrustworthy rather than just slightly
    /// low.
    pub fn apply(&mut self, gen: Generator, stage: &str) -> Result<(), OracleError> {
        let (i, j) = gen.modes();
        self.check_mode(i)?;
        if let Some(j) = j {
            self.check_mode(j)?;
            if i == j {
                return Err(OracleError::InvalidMode {
                    index: j,
                    modes: self.modes,
                });
            }
        }
        let steps = (gen.strength() / MAX_SUBSTEP).ceil().max(1.0) as usize;
        let h = 1.0 / steps as f64;
        let mut term = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        let mut next = term.clone();
        for _ in 0..steps {
            term.copy_from_slice(&self.amps);
            let mut k = 1.0;
            loop {
                self.apply_generator(&gen, h / k, &term, &mut next);
                std::mem::swap(&mut term, &mut next);
                let mut size = 0.0;
                for (a, t) in self.amps.iter_mut().zip(&term) {
                    *a += t;
                    size += t.norm_sqr();
                }
                if size.sqrt() < 1e-17 || k > 200.0 {
                    break;
                }
                k += 1.0;
            }
        }
        self.check_tail(stage)
    }

    /// Population of the two highest levels of each mode.
    pub fn tail_masses(&self) -> Vec<f64> {
        let mut tails = vec![0.0; self.modes];
        let strides: Vec<usize> = (0..self.modes).map(|m| self.stride(m)).collect();
        for (idx, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p == 0.0 {
                continue;
            }
            for (m, &s) in strides.iter().enumerate() {
                if self.level(idx, s) + 2 >= self.cutoff {
                    tails[m] += p;
                }
            }
        }
        tails
    }

    fn check_tail(&mut self, stage: &str) -> Result<(), OracleError> {
        let lost = (1.0 - self.norm().powi(2)).max(0.0);
        let worst = self.tail_masses().into_iter().fold(lost, f64::max);
        self.max_tail = self.max_tail.max(worst);
        if worst > self.tail_threshold {
            self.trusted = false;
            return Err(OracleError::TailMass {
                stage: stage.to_string(),
                mass: worst,
                threshold: self.tail_threshold,
            });
        }
        Ok(())
    }

    /// `Σ conj(ψ[idx + shift]) · w(idx) · ψ[idx]` over indices where `w` applies.
    fn matrix_element(
        &self,
        shift: isize,
        weight: impl Fn(usize) -> Option<f64>,
    ) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (idx, &amp) in self.amps.iter().enumerate() {
            if amp == Complex64::new(0.0, 0.0) {
                continue;
            }
            if let Some(w) = weight(idx) {
                let target = (idx as isize + shift) as usize;
                acc += self.amps[target].conj() * amp * w;
            }
        }
        acc
    }

    fn lowering(&self, mode: usize, power: usize) -> Complex64 {
        let s = self.stride(mode);
        self.matrix_element(-((power * s) as isize), |idx| {
            let n = self.level(idx, s);
            (n >= power).then(|| (n + 1 - power..=n).map(|k| self.sqrt[k]).product())
        })
    }

    fn number(&self, mode: usize) -> f64 {
        let s = self.stride(mode);
        self.amps
            .iter()
            .enumerate()
            .map(|(idx, a)| self.level(idx, s) as f64 * a.norm_sqr())
            .sum()
    }

    /// `⟨a_i a_j⟩` and `⟨a_i† a_j⟩` for `i ≠ j`.
    fn pair_moments(&self, i: usize, j: usize) -> (Complex64, Complex64) {
        let (si, sj) = (self.stride(i), self.stride(j));
        let n_max = self.cutoff - 1;
        let aa = self.matrix_element(-((si + sj) as isize), |idx| {
            let (ni, nj) = (self.level(idx, si), self.level(idx, sj));
            (ni > 0 && nj > 0).then(|| self.sqrt[ni] * self.sqrt[nj])
        });
        let ad_a = self.matrix_element(si as isize - sj as isize, |idx| {
            let (ni, nj) = (self.level(idx, si), self.level(idx, sj));
            (nj > 0 && ni < n_max).then(|| self.sqrt[nj] * self.sqrt[ni + 1])
        });
        (aa, ad_a)
    }

    fn trusted_or_err(&self) -> Result<(), OracleError> {
        if self.trusted {
            Ok(())
        } else {
            Err(OracleError::Untrusted)
        }
    }

    /// Quadrature moments of one mode.
    pub fn measure(&self, mode: usize) -> Result<QuadratureStats, OracleError> {
        self.check_mode(mode)?;
        self.trusted_or_err()?;
        let w = self.weight();
        let a = self.lowering(mode, 1) / w;
        let a2 = self.lowering(mode, 2) / w;
        let n = self.number(mode) / w;
        let mean_plus = 2.0 * a.re;
        let mean_minus = -2.0 * a.im;
        Ok(QuadratureStats {
            mean_plus,
            mean_minus,
            var_plus: 2.0 * a2.re + 2.0 * n + 1.0 - mean_plus * mean_plus,
            var_minus: -2.0 * a2.re + 2.0 * n + 1.0 - mean_minus * mean_minus,
            cov_plus_minus: -2.0 * a2.im - mean_plus * mean_minus,
            mean_photons: n,
        })
    }

    /// Covariances `(Cov(X⁺_i, X⁺_j), Cov(X⁻_i, X⁻_j))` of two distinct modes.
    pub fn covariances(&self, i: usize, j: usize) -> Result<(f64, f64), OracleError> {
        self.check_mode(i)?;
        self.check_mode(j)?;
        self.trusted_or_err()?;
        if i == j {
            let s = self.measure(i)?;
            return Ok((s.var_plus, s.var_minus));
        }
        let w = self.weight();
        let (ai, aj) = (self.lowering(i, 1) / w, self.lowering(j, 1) / w);
        let (aa, ad_a) = self.pair_moments(i, j);
        let (aa, ad_a) = (aa / w, ad_a / w);
        // ⟨a_i a_j†⟩ = ⟨a_j† a_i⟩ = conj⟨a_i† a_j⟩
        let a_adj = ad_a.conj();
        let pp = 2.0 * (aa.re + a_adj.re) - 4.0 * ai.re * aj.re;
        let mm = -2.0 * aa.re + 2.0 * a_adj.re - 4.0 * ai.im * aj.im;
        Ok((pp, mm))
    }

    /// Fidelity `⟨β|ρ|β⟩` of the reduced state of `mode` with a coherent state.
    pub fn overlap(&self, reference: Complex64, mode: usize) -> Result<f64, OracleError> {
        self.check_mode(mode)?;
        self.trusted_or_err()?;
        let bra: Vec<Complex64> = coherent_amplitudes(reference, self.cutoff)
            .into_iter()
            .map(|c| c.conj())
            .collect();
        let s = self.stride(mode);
        let block = s * self.cutoff;
        let mut total = 0.0;
        for outer in (0..self.amps.len()).step_by(block) {
            for inner in 0..s {
                let base = outer + inner;
                let proj: Complex64 = (0..self.cutoff)
                    .map(|n| bra[n] * self.amps[base + n * s])
                    .sum();
                total += proj.norm_sqr();
            }
        }
        Ok(total / self.weight())
    }
}

/// `⟨n|β⟩` for `n < cutoff`.
pub fn coherent_amplitudes(beta: Complex64, cutoff: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(cutoff);
    let mut c = Complex64::new((-0.5 * beta.norm_sqr()).exp(), 0.0);
    for n in 0..cutoff {
        out.push(c);
        c *= beta / ((n + 1) as f64).sqrt();
    }
    out
}
