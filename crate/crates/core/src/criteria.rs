//! Nonclassicality tests built from the closed forms.

use std::f64::consts::PI;

use crate::closed_form::{g2, photon_stats, quadrature_variance};
use crate::error::{Error, Result};
use crate::params::{check_tau, GaussianParams};

/// Outcome of the characteristic-function test (2n̄+1)e^{−2(Ωτ+r)} < 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiCriterion {
    pub value: f64,
    pub nonclassical: bool,
}

/// The three g²-based tests at one delay.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct G2Criteria {
    /// g²(0) < 1.
    pub sub_poissonian: bool,
    /// g²(0) < g²(τ).
    pub antibunched: bool,
    /// |g²(0) − 1| < |g²(τ) − 1|.
    pub rc88: bool,
}

/// Every criterion evaluated at one delay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriteriaReport {
    pub tau_scaled: f64,
    pub sub_poissonian: bool,
    pub antibunched_at_tau: bool,
    pub rc88_nonclassical_at_tau: bool,
    /// min_λ Δx²_λ < 1/2.
    pub quadrature_squeezed: bool,
    /// Analytic minimum over λ, attained at λ = θ/2.
    pub min_quadrature_variance: f64,
    /// Smallest variance found on the uniform λ grid; never below the analytic minimum.
    pub grid_quadrature_variance: f64,
    pub chi_criterion_value: f64,
    pub chi_nonclassical: bool,
    pub mandel_q: f64,
    pub mandel_nonclassical: bool,
}

/// (2n̄+1)e^{−2(Ωτ+r)}; depends on neither |α| nor φ.
pub fn chi_criterion(params: &GaussianParams, tau_scaled: f64) -> Result<ChiCriterion> {
    let p = params.validate()?;
    check_tau(tau_scaled)?;
    let value = (2.0 * p.nbar + 1.0) * (-2.0 * (tau_scaled + p.r)).exp();
    Ok(ChiCriterion {
        value,
        nonclassical: value < 1.0,
    })
}

pub fn g2_criteria(params: &GaussianParams, tau_scaled: f64) -> Result<G2Criteria> {
    let at_zero = g2(params, 0.0)?;
    let at_tau = g2(params, tau_scaled)?;
    Ok(G2Criteria {
        sub_poissonian: at_zero < 1.0,
        antibunched: at_zero < at_tau,
        rc88: (at_zero - 1.0).abs() < (at_tau - 1.0).abs(),
    })
}

/// |g²(0) − 1| − |g²(τ) − 1|; negative where the RC88 inequality signals nonclassicality.
pub fn rc88_gap(params: &GaussianParams, tau_scaled: f64) -> Result<f64> {
    let at_zero = g2(params, 0.0)?;
    let at_tau = g2(params, tau_scaled)?;
    Ok((at_zero - 1.0).abs() - (at_tau - 1.0).abs())
}

/// Min over λ of Δx²_λ at one delay: (n̄+½)e^{−2(Ωτ+r)}.
pub fn min_quadrature_variance(params: &GaussianParams, tau_scaled: f64) -> Result<f64> {
    Ok(quadrature_variance(params, tau_scaled, 0.5 * params.theta)?.var_x)
}

pub fn full_report(
    params: &GaussianParams,
    tau_scaled: f64,
    lambda_grid_size: usize,
) -> Result<CriteriaReport> {
    if lambda_grid_size < 4 {
        return Err(Error::domain(
            "lambda_grid_size",
            format!("need at least 4 angles, got {lambda_grid_size}"),
        ));
    }
    let p = params.validate()?;
    let g = g2_criteria(&p, tau_scaled)?;
    let chi = chi_criterion(&p, tau_scaled)?;
    let min_var = min_quadrature_variance(&p, tau_scaled)?;
    let mut grid_var = f64::INFINITY;
    for k in 0..lambda_grid_size {
        let lambda = PI * k as f64 / lambda_grid_size as f64;
        grid_var = grid_var.min(quadrature_variance(&p, tau_scaled, lambda)?.var_x);
    }
    let stats = photon_stats(&p, tau_scaled)?;
    Ok(CriteriaReport {
        tau_scaled,
        sub_poissonian: g.sub_poissonian,
        antibunched_at_tau: g.antibunched,
        rc88_nonclassical_at_tau: g.rc88,
        quadrature_squeezed: min_var < 0.5,
        min_quadrature_variance: min_var,
        grid_quadrature_variance: grid_var,
        chi_criterion_value: chi.value,
        chi_nonclassical: chi.nonclassical,
        mandel_q: stats.mandel_q,
        mandel_nonclassical: stats.mandel_q < 0.0,
    })
}
