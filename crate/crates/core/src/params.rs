//! Parameter types shared by every other module, plus a few scalar helpers
//! that keep the hyperbolic closed forms finite.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex values such as A(τ), η, ξ(τ) and T(τ).
pub type ComplexAmplitude = Complex64;

/// Largest |x| accepted by [`stable_exp_pair`].
pub const EXP_ARG_LIMIT: f64 = 700.0;

/// Parameters of the displaced-squeezed thermal state and of the amplifier
/// dynamics that prepared it.
///
/// Angles are stored as given; every formula uses them only through periodic
/// functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianParams {
    /// Mean photon number of the initial thermal state.
    pub nbar: f64,
    /// Squeeze magnitude, strictly positive.
    pub r: f64,
    /// Squeeze phase θ in radians.
    pub theta: f64,
    /// Coherent amplitude magnitude |α|.
    pub alpha_abs: f64,
    /// Coherent phase φ in radians.
    pub phi: f64,
    /// Rate Ω = r/t, where t is the preparation time.
    pub omega: f64,
}

impl GaussianParams {
    /// Builds and validates a parameter set.
    pub fn new(
        nbar: f64,
        r: f64,
        theta: f64,
        alpha_abs: f64,
        phi: f64,
        omega: f64,
    ) -> Result<Self> {
        GaussianParams {
            nbar,
            r,
            theta,
            alpha_abs,
            phi,
            omega,
        }
        .validate()
    }

    /// The parameter set used by every figure: θ = φ = 0 and Ω = 1.
    pub fn figure(nbar: f64, r: f64, alpha_abs: f64) -> Result<Self> {
        Self::new(nbar, r, 0.0, alpha_abs, 0.0, 1.0)
    }

    /// Returns a copy of `self` iff every invariant holds.
    pub fn validate(&self) -> Result<Self> {
        check_finite("nbar", self.nbar)?;
        check_finite("r", self.r)?;
        check_finite("theta", self.theta)?;
        check_finite("alpha_abs", self.alpha_abs)?;
        check_finite("phi", self.phi)?;
        check_finite("omega", self.omega)?;
        if self.nbar < 0.0 {
            return Err(Error::domain(
                "nbar",
                format!("mean thermal photon number must be >= 0, got {}", self.nbar),
            ));
        }
        if self.r <= 0.0 {
            return Err(Error::domain(
                "r",
                format!(
                    "squeeze magnitude must be > 0 (coth(r/2) is singular at 0), got {}",
                    self.r
                ),
            ));
        }
        if self.alpha_abs < 0.0 {
            return Err(Error::domain(
                "alpha_abs",
                format!(
                    "coherent amplitude magnitude must be >= 0, got {}",
                    self.alpha_abs
                ),
            ));
        }
        if self.omega <= 0.0 {
            return Err(Error::domain(
                "omega",
                format!("rate must be > 0, got {}", self.omega),
            ));
        }
        Ok(*self)
    }

    /// α = |α| e^{iφ}.
    pub fn alpha(&self) -> ComplexAmplitude {
        Complex64::from_polar(self.alpha_abs, self.phi)
    }

    /// ξ = r e^{iθ}.
    pub fn xi(&self) -> ComplexAmplitude {
        Complex64::from_polar(self.r, self.theta)
    }

    /// Converts a physical delay τ into the dimensionless Ωτ.
    pub fn scaled_delay(&self, tau: f64) -> f64 {
        self.omega * tau
    }

    pub fn with_alpha_abs(self, alpha_abs: f64) -> Self {
        GaussianParams { alpha_abs, ..self }
    }

    pub fn with_nbar(self, nbar: f64) -> Self {
        GaussianParams { nbar, ..self }
    }

    pub fn with_phases(self, theta: f64, phi: f64) -> Self {
        GaussianParams { theta, phi, ..self }
    }
}

fn check_finite(field: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(field, format!("must be finite, got {value}")))
    }
}

/// A probe of the characteristic function: η = |η| e^{iω} at delay Ωτ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbePoint {
    pub eta_abs: f64,
    /// ω in radians.
    pub eta_phase: f64,
    /// Ωτ.
    pub tau_scaled: f64,
}

impl ProbePoint {
    pub fn new(eta_abs: f64, eta_phase: f64, tau_scaled: f64) -> Result<Self> {
        ProbePoint {
            eta_abs,
            eta_phase,
            tau_scaled,
        }
        .validate()
    }

    pub fn validate(&self) -> Result<Self> {
        check_finite("eta_abs", self.eta_abs)?;
        check_finite("eta_phase", self.eta_phase)?;
        check_finite("tau_scaled", self.tau_scaled)?;
        if self.eta_abs < 0.0 {
            return Err(Error::domain(
                "eta_abs",
                format!("must be >= 0, got {}", self.eta_abs),
            ));
        }
        check_tau(self.tau_scaled)?;
        Ok(*self)
    }

    pub fn eta(&self) -> ComplexAmplitude {
        Complex64::from_polar(self.eta_abs, self.eta_phase)
    }
}

pub(crate) fn check_tau(tau_scaled: f64) -> Result<()> {
    if !tau_scaled.is_finite() || tau_scaled < 0.0 {
        return Err(Error::domain(
            "tau_scaled",
            format!("scaled delay must be finite and >= 0, got {tau_scaled}"),
        ));
    }
    Ok(())
}

/// coth(r/2), evaluated as 1/tanh(r/2).
///
/// Stays accurate down to r ~ 1e-12 and saturates cleanly at 1 for large r.
pub fn coth_half(r: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::domain(
            "r",
            format!("coth(r/2) needs r > 0, got {r}"),
        ));
    }
    Ok(1.0 / (0.5 * r).tanh())
}

/// Returns (e^x, e^{-x}).
pub fn stable_exp_pair(x: f64) -> Result<(f64, f64)> {
    if !(x.abs() <= EXP_ARG_LIMIT) {
        return Err(Error::overflow("exp pair", x, EXP_ARG_LIMIT));
    }
    let up = x.exp();
    Ok((up, (-x).exp()))
}
