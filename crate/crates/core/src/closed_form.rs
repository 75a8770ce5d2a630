//! Exact one-time and two-time statistics of the evolving Gaussian state.
//!
//! Every delay is the dimensionless product Ωτ (`tau_scaled`). Direct
//! evaluation is allowed while Ωτ + r stays within [`HYPERBOLIC_LIMIT`];
//! beyond that the hyperbolics overflow and the functions return
//! [`Error::Overflow`]. The τ → ∞ limit of g²(τ) is available through
//! [`g2_asymptote`], which never evaluates a growing exponential.

use std::f64::consts::SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{check_tau, coth_half, ComplexAmplitude, GaussianParams, ProbePoint};

/// Largest Ωτ + r evaluated directly.
pub const HYPERBOLIC_LIMIT: f64 = 345.0;

/// Largest Ωτ accepted by [`amplitude_a`].
pub const AMPLITUDE_LIMIT: f64 = 690.0;

/// The four kernels n(τ), s(τ), u(τ), v(τ) of the two-time coherence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoTimeKernels {
    pub n_kernel: f64,
    pub s_kernel: f64,
    pub u_kernel: f64,
    pub v_kernel: f64,
}

/// Photon-number mean, variance and Mandel Q at one delay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonStats {
    pub mean_n: f64,
    pub var_n: f64,
    pub mandel_q: f64,
}

/// Statistics of the quadrature x̂_λ = (â e^{-iλ} + â† e^{iλ})/√2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureStats {
    pub lambda: f64,
    pub mean_x: f64,
    pub var_x: f64,
    /// Δx²_λ · Δx²_{λ+π/2}.
    pub uncertainty_product: f64,
}

/// ξ(τ), T(τ) and S(τ) for one probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeKernel {
    pub xi_tau: ComplexAmplitude,
    pub t: ComplexAmplitude,
    pub s: f64,
}

fn prepare(
    params: &GaussianParams,
    tau_scaled: f64,
    quantity: &'static str,
) -> Result<GaussianParams> {
    let p = params.validate()?;
    check_tau(tau_scaled)?;
    let arg = tau_scaled + p.r;
    if arg > HYPERBOLIC_LIMIT {
        return Err(Error::overflow(quantity, arg, HYPERBOLIC_LIMIT));
    }
    Ok(p)
}

fn finite(quantity: &'static str, value: f64, argument: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::overflow(quantity, argument, HYPERBOLIC_LIMIT))
    }
}

/// A(τ) = ⟨â(τ)⟩, the coherent amplitude carried forward by the amplifier.
///
/// With f = cosh + ½coth(r/2)sinh − ½(cosh − 1) and
/// g = −½sinh − ½coth(r/2)(cosh − 1), all at Ωτ, this is
/// A = α (f + e^{i(θ−2φ)} g).
pub fn amplitude_a(params: &GaussianParams, tau_scaled: f64) -> Result<ComplexAmplitude> {
    let p = params.validate()?;
    check_tau(tau_scaled)?;
    if tau_scaled > AMPLITUDE_LIMIT {
        return Err(Error::overflow("A(tau)", tau_scaled, AMPLITUDE_LIMIT));
    }
    let a = amplitude_unchecked(&p, tau_scaled)?;
    if a.re.is_finite() && a.im.is_finite() {
        Ok(a)
    } else {
        Err(Error::overflow("A(tau)", tau_scaled, AMPLITUDE_LIMIT))
    }
}

fn amplitude_unchecked(p: &GaussianParams, x: f64) -> Result<ComplexAmplitude> {
    let coth = coth_half(p.r)?;
    let (ch, sh) = (x.cosh(), x.sinh());
    // cosh(x) - 1 without cancellation near x = 0
    let ch_m1 = 2.0 * (0.5 * x).sinh().powi(2);
    let direct = ch + 0.5 * coth * sh - 0.5 * ch_m1;
    let conjugate = -0.5 * sh - 0.5 * coth * ch_m1;
    let rotation = Complex64::cis(p.theta - 2.0 * p.phi);
    Ok(p.alpha() * (direct + rotation * conjugate))
}

/// ξ(τ) = η cosh(Ωτ + r) + η* e^{iθ} sinh(Ωτ + r), with
/// T(τ) = ½ e^{iθ} sinh[2(Ωτ + r)] and S(τ) = cosh[2(Ωτ + r)].
pub fn squeeze_kernel(params: &GaussianParams, probe: &ProbePoint) -> Result<SqueezeKernel> {
    let probe = probe.validate()?;
    let p = prepare(params, probe.tau_scaled, "xi(tau)")?;
    let y = probe.tau_scaled + p.r;
    let eta = probe.eta();
    let squeeze_phase = Complex64::cis(p.theta);
    let xi_tau = eta * y.cosh() + eta.conj() * squeeze_phase * y.sinh();
    let t = 0.5 * squeeze_phase * (2.0 * y).sinh();
    let s = finite("S(tau)", (2.0 * y).cosh(), y)?;
    Ok(SqueezeKernel { xi_tau, t, s })
}

/// Normally ordered characteristic function χ(η) = Tr[ρ(t+τ) e^{ηâ†} e^{−η*â}].
///
/// Evaluated as exp(|η|²/2 − (n̄+½)|ξ(τ)|²) times the unit-modulus phase
/// exp(ηA* − η*A), so the α dependence never touches the modulus.
pub fn characteristic_function(
    params: &GaussianParams,
    probe: &ProbePoint,
) -> Result<ComplexAmplitude> {
    let kernel = squeeze_kernel(params, probe)?;
    let p = params.validate()?;
    let eta = probe.eta();
    let a = amplitude_unchecked(&p, probe.tau_scaled)?;
    let exponent = 0.5 * probe.eta_abs * probe.eta_abs - (p.nbar + 0.5) * kernel.xi_tau.norm_sqr();
    if exponent > crate::params::EXP_ARG_LIMIT {
        return Err(Error::overflow(
            "chi(eta)",
            exponent,
            crate::params::EXP_ARG_LIMIT,
        ));
    }
    // ηA* − η*A = 2i Im(ηA*)
    let phase = 2.0 * (eta * a.conj()).im;
    if !phase.is_finite() {
        return Err(Error::overflow(
            "chi(eta)",
            probe.tau_scaled + p.r,
            HYPERBOLIC_LIMIT,
        ));
    }
    Ok(Complex64::from_polar(exponent.exp(), phase))
}

/// |χ(η)| along the anti-squeezed direction 2ω = θ + π:
/// exp[½|η|²(1 − (2n̄+1)e^{−2(Ωτ+r)})].
pub fn chi_modulus_antisqueezed(
    params: &GaussianParams,
    tau_scaled: f64,
    eta_abs: f64,
) -> Result<f64> {
    let p = prepare(params, tau_scaled, "|chi(eta)|")?;
    if !(eta_abs >= 0.0) || !eta_abs.is_finite() {
        return Err(Error::domain(
            "eta_abs",
            format!("must be finite and >= 0, got {eta_abs}"),
        ));
    }
    let decay = (2.0 * p.nbar + 1.0) * (-2.0 * (tau_scaled + p.r)).exp();
    let exponent = 0.5 * eta_abs * eta_abs * (1.0 - decay);
    finite("|chi(eta)|", exponent.exp(), exponent)
}

/// ⟨x̂_λ⟩ = √2 Re[A(τ) e^{−iλ}].
pub fn quadrature_mean(params: &GaussianParams, tau_scaled: f64, lambda: f64) -> Result<f64> {
    let p = prepare(params, tau_scaled, "<x_lambda>")?;
    let a = amplitude_unchecked(&p, tau_scaled)?;
    finite(
        "<x_lambda>",
        SQRT_2 * (a * Complex64::cis(-lambda)).re,
        tau_scaled,
    )
}

/// Mean, variance and uncertainty product of x̂_λ.
pub fn quadrature_variance(
    params: &GaussianParams,
    tau_scaled: f64,
    lambda: f64,
) -> Result<QuadratureStats> {
    let p = prepare(params, tau_scaled, "var(x_lambda)")?;
    let mean_x = quadrature_mean(&p, tau_scaled, lambda)?;
    let y = tau_scaled + p.r;
    let half = p.nbar + 0.5;
    let offset = lambda - 0.5 * p.theta;
    let var_x =
        half * ((2.0 * y).exp() * offset.sin().powi(2) + (-2.0 * y).exp() * offset.cos().powi(2));
    let cos_sq = (p.theta - 2.0 * lambda).cos().powi(2);
    // cosh² − cos²·sinh² = 1 + sin²·sinh², which keeps the bound visible
    let sinh_sq = (2.0 * y).sinh().powi(2);
    let uncertainty_product = half * half * (1.0 + (1.0 - cos_sq) * sinh_sq);
    Ok(QuadratureStats {
        lambda,
        mean_x,
        var_x: finite("var(x_lambda)", var_x, y)?,
        uncertainty_product: finite("uncertainty product", uncertainty_product, y)?,
    })
}

/// Signal-to-noise ratio ⟨x̂_λ⟩² / Δx²_λ.
pub fn snr(params: &GaussianParams, tau_scaled: f64, lambda: f64) -> Result<f64> {
    let q = quadrature_variance(params, tau_scaled, lambda)?;
    finite("SNR", q.mean_x * q.mean_x / q.var_x, tau_scaled)
}

/// The SNR maximized over λ at φ = λ = θ/2.
pub fn snr_max(params: &GaussianParams, tau_scaled: f64) -> Result<f64> {
    let p = prepare(params, tau_scaled, "SNR_max")?;
    let coth = coth_half(p.r)?;
    let decay = (-tau_scaled).exp();
    let signal = coth * (1.0 - decay) + (1.0 + decay);
    let noise = (2.0 * p.nbar + 1.0) * (-2.0 * (tau_scaled + p.r)).exp();
    finite(
        "SNR_max",
        p.alpha_abs * p.alpha_abs * signal * signal / noise,
        tau_scaled,
    )
}

/// ⟨n̂(τ)⟩, Δn²(τ) and Q_M(τ).
pub fn photon_stats(params: &GaussianParams, tau_scaled: f64) -> Result<PhotonStats> {
    let p = prepare(params, tau_scaled, "photon statistics")?;
    let a = amplitude_unchecked(&p, tau_scaled)?;
    photon_stats_with(&p, tau_scaled, a)
}

fn mean_photon(p: &GaussianParams, y: f64, a: ComplexAmplitude) -> f64 {
    // (n̄+½)cosh 2y − ½ = (2n̄+1)sinh²y + n̄
    (2.0 * p.nbar + 1.0) * y.sinh().powi(2) + p.nbar + a.norm_sqr()
}

fn photon_stats_with(p: &GaussianParams, x: f64, a: ComplexAmplitude) -> Result<PhotonStats> {
    let y = x + p.r;
    let half = p.nbar + 0.5;
    let mean_n = finite("<n(tau)>", mean_photon(p, y, a), y)?;
    // (n̄+½)² cosh 4y − ¼ = 2(n̄+½)² sinh² 2y + n̄(n̄+1)
    let interference = 2.0 * (Complex64::cis(-p.theta) * a * a).re;
    let var_n = 2.0 * half * half * (2.0 * y).sinh().powi(2)
        + p.nbar * (p.nbar + 1.0)
        + half * (2.0 * (2.0 * y).cosh() * a.norm_sqr() - (2.0 * y).sinh() * interference);
    let var_n = finite("var n(tau)", var_n, y)?;
    if !(mean_n > 0.0) {
        return Err(Error::domain(
            "mean_n",
            "Mandel Q is undefined for a vanishing mean photon number",
        ));
    }
    Ok(PhotonStats {
        mean_n,
        var_n,
        mandel_q: (var_n - mean_n) / mean_n,
    })
}

/// Kernels n(τ), s(τ), u(τ), v(τ). Their hyperbolic arguments are Ωτ + 2r.
pub fn two_time_kernels(params: &GaussianParams, tau_scaled: f64) -> Result<TwoTimeKernels> {
    let p = prepare(params, tau_scaled, "two-time kernels")?;
    let a = amplitude_unchecked(&p, tau_scaled)?;
    Ok(kernels_with(&p, tau_scaled, a))
}

fn kernels_with(p: &GaussianParams, x: f64, a: ComplexAmplitude) -> TwoTimeKernels {
    let alpha = p.alpha();
    let sinh_r = p.r.sinh();
    // (n̄+½)cosh(x+2r) − ½cosh x = n̄ cosh(x+2r) + sinh(x+r) sinh r, likewise for s
    let n_kernel = p.nbar * (x + 2.0 * p.r).cosh() + (x + p.r).sinh() * sinh_r;
    let s_kernel = p.nbar * (x + 2.0 * p.r).sinh() + (x + p.r).cosh() * sinh_r;
    let u_kernel = 2.0 * (alpha * a.conj()).re;
    let v_kernel = 2.0 * (alpha * a * Complex64::cis(-p.theta)).re;
    TwoTimeKernels {
        n_kernel,
        s_kernel,
        u_kernel,
        v_kernel,
    }
}

/// Degree of second-order coherence g²(τ).
pub fn g2(params: &GaussianParams, tau_scaled: f64) -> Result<f64> {
    let p = prepare(params, tau_scaled, "g2(tau)")?;
    let a0 = p.alpha();
    let a = amplitude_unchecked(&p, tau_scaled)?;
    let k = kernels_with(&p, tau_scaled, a);
    let mean_0 = mean_photon(&p, p.r, a0);
    let mean_tau = mean_photon(&p, tau_scaled + p.r, a);
    let numerator = k.n_kernel * k.n_kernel + k.s_kernel * k.s_kernel + k.u_kernel * k.n_kernel
        - k.v_kernel * k.s_kernel;
    finite(
        "g2(tau)",
        1.0 + numerator / (mean_0 * mean_tau),
        tau_scaled + p.r,
    )
}

/// lim_{τ→∞} g²(τ).
///
/// Every kernel grows like e^{Ωτ} and ⟨n̂(τ)⟩ like e^{2Ωτ}; the limit is the
/// ratio of the leading coefficients:
///
/// * A(τ) → e^{Ωτ} α (1 + coth(r/2))/4 · (1 − e^{i(θ−2φ)})
/// * n(τ), s(τ) → e^{Ωτ} (n̄ e^{2r} + e^r sinh r)/2
/// * ⟨n̂(τ)⟩ → e^{2Ωτ} ((2n̄+1)e^{2r}/4 + |A_∞|²)
pub fn g2_asymptote(params: &GaussianParams) -> Result<f64> {
    let p = prepare(params, 0.0, "g2 asymptote")?;
    let coth = coth_half(p.r)?;
    let alpha = p.alpha();
    let a_inf = alpha * (0.25 * (1.0 + coth)) * (1.0 - Complex64::cis(p.theta - 2.0 * p.phi));
    let ns_inf = 0.5 * (p.nbar * (2.0 * p.r).exp() + p.r.exp() * p.r.sinh());
    let u_inf = 2.0 * (alpha * a_inf.conj()).re;
    let v_inf = 2.0 * (alpha * a_inf * Complex64::cis(-p.theta)).re;
    let mean_inf = 0.25 * (2.0 * p.nbar + 1.0) * (2.0 * p.r).exp() + a_inf.norm_sqr();
    let mean_0 = mean_photon(&p, p.r, alpha);
    let numerator = 2.0 * ns_inf * ns_inf + ns_inf * (u_inf - v_inf);
    finite("g2 asymptote", 1.0 + numerator / (mean_0 * mean_inf), p.r)
}
