//! Brute-force reference values from the truncated Fock basis.
//!
//! The prepared state ρ_G is built from D(α), S(ξ) and the thermal weights.
//! Delays enter through Heisenberg operators: for a Hamiltonian quadratic in
//! the ladder operators, U†(τ) â U(τ) = p â + q â† + s exactly, where (p, q, s)
//! is the first row of exp(K Ωτ) and K is the commutator action of Ĥ on
//! span{â, â†, 1}. Every expectation value is then a trace against ρ_G on
//! the truncated basis, so the basis only has to hold the prepared state and
//! not the strongly amplified evolved one.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::closed_form::{PhotonStats, QuadratureStats};
use crate::error::{Error, Result};
use crate::fock::{expm, hamiltonian_coeffs, GaussianEnsemble, LadderPolynomial};
use crate::params::{check_tau, ComplexAmplitude, GaussianParams, ProbePoint};

/// Largest |η| accepted by the characteristic-function oracle.
pub const MAX_PROBE_ETA: f64 = 2.0;

/// â(τ) = p â + q â† + s in the Heisenberg picture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeisenbergMode {
    pub p: Complex64,
    pub q: Complex64,
    pub s: Complex64,
}

impl HeisenbergMode {
    pub fn annihilation(&self) -> LadderPolynomial {
        LadderPolynomial::linear(self.p, self.q, self.s)
    }

    pub fn creation(&self) -> LadderPolynomial {
        self.annihilation().adjoint()
    }
}

/// Propagates â through exp(iĤτ) · exp(−iĤτ).
///
/// With Ĥ/ħ per unit Ωτ equal to (Ĥt)/r, i[Ĥ, â] = −(i/r)(2tc â† + tb*)
/// and i[Ĥ, â†] = (i/r)(2tc* â + tb).
pub fn heisenberg_mode(params: &GaussianParams, tau_scaled: f64) -> Result<HeisenbergMode> {
    let p = params.validate()?;
    check_tau(tau_scaled)?;
    let h = hamiltonian_coeffs(&p)?;
    let i = Complex64::new(0.0, 1.0);
    let zero = Complex64::new(0.0, 0.0);
    let rate = 1.0 / p.r;
    #[rustfmt::skip]
    let k = DMatrix::from_row_slice(3, 3, &[
        zero, -2.0 * i * h.c_times_t * rate, -i * h.b_times_t.conj() * rate,
        2.0 * i * h.c_times_t.conj() * rate, zero, i * h.b_times_t * rate,
        zero, zero, zero,
    ]);
    let flow = expm(&(k * Complex64::new(tau_scaled, 0.0)))?;
    Ok(HeisenbergMode {
        p: flow[(0, 0)],
        q: flow[(0, 1)],
        s: flow[(0, 2)],
    })
}

/// Reference evaluator for one parameter set on `dim` levels.
#[derive(Debug, Clone)]
pub struct FockOracle {
    params: GaussianParams,
    ensemble: GaussianEnsemble,
}

impl FockOracle {
    pub fn new(params: &GaussianParams, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::domain(
                "dim",
                format!("truncation dimension must be >= 2, got {dim}"),
            ));
        }
        let params = params.validate()?;
        Ok(FockOracle {
            params,
            ensemble: GaussianEnsemble::new(&params, dim)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.ensemble.dim
    }

    pub fn ensemble(&self) -> &GaussianEnsemble {
        &self.ensemble
    }

    /// Tr[ρ(t+τ) â].
    pub fn amplitude(&self, tau_scaled: f64) -> Result<ComplexAmplitude> {
        let a = heisenberg_mode(&self.params, tau_scaled)?.annihilation();
        self.ensemble.average(|ket| Ok(ket.dotc(&a.apply(ket))))
    }

    /// ⟨n̂(τ)⟩, Δn²(τ) and Q_M(τ) from ‖â(τ)u‖² and ‖n̂(τ)u‖².
    pub fn photon_stats(&self, tau_scaled: f64) -> Result<PhotonStats> {
        let mode = heisenberg_mode(&self.params, tau_scaled)?;
        let (a, a_dag) = (mode.annihilation(), mode.creation());
        let mut mean = 0.0;
        let mut second = 0.0;
        for (w, ket) in self.ensemble.weights.iter().zip(&self.ensemble.kets) {
            let lowered = a.apply(ket);
            let counted = a_dag.apply(&lowered);
            mean += w * lowered.norm_squared();
            second += w * counted.norm_squared();
        }
        let var_n = second - mean * mean;
        Ok(PhotonStats {
            mean_n: mean,
            var_n,
            mandel_q: (var_n - mean) / mean,
        })
    }

    fn quadrature_moments(&self, mode: &HeisenbergMode, lambda: f64) -> (f64, f64) {
        let x = LadderPolynomial::linear(
            mode.p * Complex64::cis(-lambda) + mode.q.conj() * Complex64::cis(lambda),
            mode.q * Complex64::cis(-lambda) + mode.p.conj() * Complex64::cis(lambda),
            Complex64::new(2.0 * (mode.s * Complex64::cis(-lambda)).re, 0.0),
        )
        .scaled(Complex64::new(FRAC_1_SQRT_2, 0.0));
        let mut mean = 0.0;
        let mut second = 0.0;
        for (w, ket) in self.ensemble.weights.iter().zip(&self.ensemble.kets) {
            let image = x.apply(ket);
            mean += w * ket.dotc(&image).re;
            second += w * image.norm_squared();
        }
        (mean, second - mean * mean)
    }

    /// Moments of x̂_λ(τ); the uncertainty product uses the measured
    /// variance at λ + π/2.
    pub fn quadrature(&self, tau_scaled: f64, lambda: f64) -> Result<QuadratureStats> {
        let mode = heisenberg_mode(&self.params, tau_scaled)?;
        let (mean_x, var_x) = self.quadrature_moments(&mode, lambda);
        let (_, var_orth) = self.quadrature_moments(&mode, lambda + std::f64::consts::FRAC_PI_2);
        Ok(QuadratureStats {
            lambda,
            mean_x,
            var_x,
            uncertainty_product: var_x * var_orth,
        })
    }

    /// ⟨â†(0)â†(τ)â(τ)â(0)⟩ / (⟨n̂(0)⟩⟨n̂(τ)⟩).
    pub fn g2(&self, tau_scaled: f64) -> Result<f64> {
        let a_tau = heisenberg_mode(&self.params, tau_scaled)?.annihilation();
        let a_0 = LadderPolynomial::linear(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        );
        let mut pair = 0.0;
        let mut mean_0 = 0.0;
        let mut mean_tau = 0.0;
        for (w, ket) in self.ensemble.weights.iter().zip(&self.ensemble.kets) {
            let lowered = a_0.apply(ket);
            pair += w * a_tau.apply(&lowered).norm_squared();
            mean_0 += w * lowered.norm_squared();
            mean_tau += w * a_tau.apply(ket).norm_squared();
        }
        Ok(pair / (mean_0 * mean_tau))
    }

    /// Tr[ρ(t+τ) e^{ηâ†} e^{−η*â}] as Σ p_n ⟨e^{η*â(τ)}u_n, e^{−η*â(τ)}u_n⟩.
    pub fn char_fn(&self, probe: &ProbePoint) -> Result<ComplexAmplitude> {
        let probe = probe.validate()?;
        if probe.eta_abs > MAX_PROBE_ETA {
            return Err(Error::domain(
                "eta_abs",
                format!(
                    "oracle probes need |eta| <= {MAX_PROBE_ETA}, got {}",
                    probe.eta_abs
                ),
            ));
        }
        let a = heisenberg_mode(&self.params, probe.tau_scaled)?.annihilation();
        let eta_conj = probe.eta().conj();
        let lower = a.scaled(-eta_conj);
        let raise_adjoint = a.scaled(eta_conj);
        self.ensemble.average(|ket| {
            let right = lower.exp_apply(ket)?;
            let left = raise_adjoint.exp_apply(ket)?;
            Ok(left.dotc(&right))
        })
    }
}

/// Heisenberg-picture g²(τ) on `dim` levels.
pub fn oracle_g2(params: &GaussianParams, tau_scaled: f64, dim: usize) -> Result<f64> {
    FockOracle::new(params, dim)?.g2(tau_scaled)
}

/// Normally ordered characteristic function on `dim` levels.
pub fn oracle_char_fn(
    params: &GaussianParams,
    probe: &ProbePoint,
    dim: usize,
) -> Result<ComplexAmplitude> {
    FockOracle::new(params, dim)?.char_fn(probe)
}

/// U†(τ) â U(τ) formed densely from the propagator on `dim` levels. Only the
/// low-index block is trustworthy; used to cross-check [`heisenberg_mode`].
pub fn dense_heisenberg_annihilation(
    params: &GaussianParams,
    tau_scaled: f64,
    dim: usize,
) -> Result<DMatrix<Complex64>> {
    let u = crate::fock::propagator(params, tau_scaled, dim)?;
    let a = crate::fock::FockOperator::annihilation(dim);
    Ok(u.matrix().adjoint() * a.matrix() * u.matrix())
}
