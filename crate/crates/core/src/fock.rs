//! Dense operators on a truncated photon-number basis {|0⟩, …, |dim−1⟩}.
//!
//! Everything here is built from the ladder matrices and matrix
//! exponentials; nothing reads the closed forms.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{coth_half, ComplexAmplitude, GaussianParams};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Population allowed in the top levels of a prepared state.
pub const PREPARATION_LEAK_LIMIT: f64 = 1e-8;
/// Population allowed in the top levels after Schrödinger evolution.
pub const EVOLUTION_LEAK_LIMIT: f64 = 1e-6;

const MAX_TAYLOR_TERMS: usize = 80;

/// Number of top basis levels watched for leakage.
pub fn edge_width(dim: usize) -> usize {
    (dim / 10).max(2).min(dim)
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::domain(
            "dim",
            format!("truncation dimension must be >= 2, got {dim}"),
        ));
    }
    Ok(())
}

/// A dense complex matrix on the truncated number basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    matrix: DMatrix<Complex64>,
}

impl FockOperator {
    pub fn from_matrix(matrix: DMatrix<Complex64>) -> Self {
        assert!(matrix.is_square(), "Fock operators are square");
        FockOperator { matrix }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_matrix(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_matrix(DMatrix::identity(dim, dim))
    }

    /// â with entries ⟨n−1|â|n⟩ = √n.
    pub fn annihilation(dim: usize) -> Self {
        let mut m = DMatrix::zeros(dim, dim);
        for n in 1..dim {
            m[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
        }
        Self::from_matrix(m)
    }

    pub fn creation(dim: usize) -> Self {
        Self::annihilation(dim).adjoint()
    }

    pub fn number(dim: usize) -> Self {
        Self::from_matrix(DMatrix::from_diagonal(&DVector::from_fn(dim, |n, _| {
            Complex64::new(n as f64, 0.0)
        })))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self::from_matrix(self.matrix.adjoint())
    }

    pub fn compose(&self, rhs: &FockOperator) -> Self {
        Self::from_matrix(&self.matrix * &rhs.matrix)
    }

    pub fn plus(&self, rhs: &FockOperator) -> Self {
        Self::from_matrix(&self.matrix + &rhs.matrix)
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self::from_matrix(&self.matrix * factor)
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn apply(&self, ket: &DVector<Complex64>) -> DVector<Complex64> {
        &self.matrix * ket
    }

    /// Largest entry of X + X†.
    pub fn anti_hermitian_defect(&self) -> f64 {
        max_abs(&(&self.matrix + self.matrix.adjoint()))
    }

    pub fn hermitian_defect(&self) -> f64 {
        max_abs(&(&self.matrix - self.matrix.adjoint()))
    }

    /// max |(U†U − 1)_{jk}| over the lower `block` × `block` corner.
    pub fn unitarity_defect(&self, block: usize) -> f64 {
        let product = self.matrix.adjoint() * &self.matrix;
        let block = block.min(self.dim());
        let mut worst: f64 = 0.0;
        for j in 0..block {
            for k in 0..block {
                let target = if j == k { ONE } else { ZERO };
                worst = worst.max((product[(j, k)] - target).norm());
            }
        }
        worst
    }
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    max_norm(m.iter())
}

/// Largest modulus in a sequence of complex entries.
pub fn max_norm<'a>(entries: impl IntoIterator<Item = &'a Complex64>) -> f64 {
    entries.into_iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn one_norm(m: &DMatrix<Complex64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring of a Taylor series.
pub(crate) fn expm(m: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let n = m.nrows();
    let norm = one_norm(m);
    if !norm.is_finite() {
        return Err(Error::Convergence {
            what: "matrix exponential",
            iterations: 0,
        });
    }
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = m * Complex64::new(0.5f64.powi(squarings), 0.0);
    let mut sum = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    let mut converged = false;
    for k in 1..=MAX_TAYLOR_TERMS {
        term = (&term * &scaled) / Complex64::new(k as f64, 0.0);
        sum += &term;
        if one_norm(&term) <= 1e-18 * one_norm(&sum) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Convergence {
            what: "matrix exponential",
            iterations: MAX_TAYLOR_TERMS,
        });
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(sum)
}

/// exp(generator) for an anti-Hermitian generator.
pub fn build_unitary(generator: &FockOperator, dim: usize) -> Result<FockOperator> {
    if generator.dim() != dim {
        return Err(Error::domain(
            "dim",
            format!("generator has dim {}, requested {dim}", generator.dim()),
        ));
    }
    let defect = generator.anti_hermitian_defect();
    if defect > 1e-10 {
        return Err(Error::domain(
            "generator",
            format!("not anti-Hermitian (defect {defect:e})"),
        ));
    }
    Ok(FockOperator::from_matrix(expm(generator.matrix())?))
}

/// A polynomial of degree ≤ 2 in â and â†, applied without forming a matrix:
/// c₀ + c₁ â + c₂ â† + c₃ â² + c₄ â†² + c₅ â†â.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LadderPolynomial {
    pub constant: Complex64,
    pub a: Complex64,
    pub a_dag: Complex64,
    pub a_sq: Complex64,
    pub a_dag_sq: Complex64,
    pub number: Complex64,
}

impl LadderPolynomial {
    /// p â + q â† + s.
    pub fn linear(p: Complex64, q: Complex64, s: Complex64) -> Self {
        LadderPolynomial {
            constant: s,
            a: p,
            a_dag: q,
            ..Default::default()
        }
    }

    /// D(α) generator α â† − α* â.
    pub fn displacement(alpha: ComplexAmplitude) -> Self {
        Self::linear(-alpha.conj(), alpha, ZERO)
    }

    /// S(ξ) generator −(ξ/2) â†² + (ξ*/2) â².
    pub fn squeeze(xi: ComplexAmplitude) -> Self {
        LadderPolynomial {
            a_sq: 0.5 * xi.conj(),
            a_dag_sq: -0.5 * xi,
            ..Default::default()
        }
    }

    /// Formal adjoint.
    pub fn adjoint(&self) -> Self {
        LadderPolynomial {
            constant: self.constant.conj(),
            a: self.a_dag.conj(),
            a_dag: self.a.conj(),
            a_sq: self.a_dag_sq.conj(),
            a_dag_sq: self.a_sq.conj(),
            number: self.number.conj(),
        }
    }

    pub fn scaled(&self, f: Complex64) -> Self {
        LadderPolynomial {
            constant: self.constant * f,
            a: self.a * f,
            a_dag: self.a_dag * f,
            a_sq: self.a_sq * f,
            a_dag_sq: self.a_dag_sq * f,
            number: self.number * f,
        }
    }

    /// Action on a ket, identical to the truncated matrix products.
    pub fn apply(&self, ket: &DVector<Complex64>) -> DVector<Complex64> {
        let dim = ket.len();
        DVector::from_fn(dim, |n, _| {
            let nf = n as f64;
            let mut out = (self.constant + self.number * nf) * ket[n];
            if n + 1 < dim {
                out += self.a * (nf + 1.0).sqrt() * ket[n + 1];
            }
            if n + 2 < dim {
                out += self.a_sq * ((nf + 1.0) * (nf + 2.0)).sqrt() * ket[n + 2];
            }
            if n >= 1 {
                out += self.a_dag * nf.sqrt() * ket[n - 1];
            }
            if n >= 2 {
                out += self.a_dag_sq * (nf * (nf - 1.0)).sqrt() * ket[n - 2];
            }
            out
        })
    }

    pub fn to_operator(&self, dim: usize) -> FockOperator {
        let mut m = DMatrix::zeros(dim, dim);
        for k in 0..dim {
            let e = DVector::from_fn(dim, |n, _| if n == k { ONE } else { ZERO });
            m.set_column(k, &self.apply(&e));
        }
        FockOperator::from_matrix(m)
    }

    /// Upper bound on the operator norm of the non-constant part on `dim` levels.
    fn norm_bound(&self, dim: usize) -> f64 {
        let top = (dim.max(1) - 1) as f64;
        (self.a.norm() + self.a_dag.norm()) * top.sqrt()
            + (self.a_sq.norm() + self.a_dag_sq.norm()) * top
            + self.number.norm() * top
    }

    /// exp(self) |ket⟩, by a Taylor series on `m` sub-steps with ‖G/m‖ ≤ 1.
    pub fn exp_apply(&self, ket: &DVector<Complex64>) -> Result<DVector<Complex64>> {
        let steps = self.norm_bound(ket.len()).ceil().max(1.0) as usize;
        let sub = LadderPolynomial {
            constant: ZERO,
            ..*self
        }
        .scaled(Complex64::new(1.0 / steps as f64, 0.0));
        let mut state = ket.clone();
        for _ in 0..steps {
            let mut term = state.clone();
            let mut sum = state.clone();
            let mut converged = false;
            for k in 1..=MAX_TAYLOR_TERMS {
                term = sub.apply(&term) / Complex64::new(k as f64, 0.0);
                sum += &term;
                if term.norm() <= 1e-18 * sum.norm() {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(Error::Convergence {
                    what: "ladder exponential",
                    iterations: MAX_TAYLOR_TERMS,
                });
            }
            state = sum;
        }
        Ok(state * self.constant.exp())
    }
}

/// The preparation products tc and tb (ħ = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamiltonianCoeffs {
    pub c_times_t: Complex64,
    pub b_times_t: Complex64,
}

/// tc = −(i/2) r e^{iθ}, tb = −(i/2)(α e^{−iθ} + α* coth(r/2)) r.
pub fn hamiltonian_coeffs(params: &GaussianParams) -> Result<HamiltonianCoeffs> {
    let p = params.validate()?;
    let minus_half_i = Complex64::new(0.0, -0.5);
    let alpha = p.alpha();
    let coth = coth_half(p.r)?;
    Ok(HamiltonianCoeffs {
        c_times_t: minus_half_i * p.r * Complex64::cis(p.theta),
        b_times_t: minus_half_i * (alpha * Complex64::cis(-p.theta) + alpha.conj() * coth) * p.r,
    })
}

impl HamiltonianCoeffs {
    /// Ĥt = tc â†² + tc* â² + tb â + tb* â†.
    pub fn hamiltonian_times_t(&self) -> LadderPolynomial {
        LadderPolynomial {
            a: self.b_times_t,
            a_dag: self.b_times_t.conj(),
            a_sq: self.c_times_t.conj(),
            a_dag_sq: self.c_times_t,
            ..Default::default()
        }
    }
}

/// A dense density matrix on the truncated basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn from_matrix(matrix: DMatrix<Complex64>) -> Self {
        assert!(matrix.is_square(), "density matrices are square");
        DensityMatrix { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn hermitian_defect(&self) -> f64 {
        max_abs(&(&self.matrix - self.matrix.adjoint()))
    }

    /// Tr[ρ O].
    pub fn expectation(&self, op: &FockOperator) -> Complex64 {
        (&self.matrix * op.matrix()).trace()
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let hermitian = (&self.matrix + self.matrix.adjoint()) * Complex64::new(0.5, 0.0);
        hermitian
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Population in the top [`edge_width`] levels.
    pub fn edge_population(&self) -> f64 {
        let dim = self.dim();
        (dim - edge_width(dim)..dim)
            .map(|n| self.matrix[(n, n)].re)
            .sum()
    }
}

/// Thermal weights p_n ∝ (n̄/(n̄+1))^n renormalized on `dim` levels.
pub fn thermal_weights(nbar: f64, dim: usize) -> Result<Vec<f64>> {
    check_dim(dim)?;
    if !(nbar >= 0.0) || !nbar.is_finite() {
        return Err(Error::domain(
            "nbar",
            format!("must be finite and >= 0, got {nbar}"),
        ));
    }
    let ratio = nbar / (nbar + 1.0);
    let tail = ratio.powi(dim as i32);
    if tail > PREPARATION_LEAK_LIMIT {
        return Err(Error::Truncation {
            dim,
            leaked: tail,
            limit: PREPARATION_LEAK_LIMIT,
        });
    }
    let mut weights: Vec<f64> = std::iter::successors(Some(1.0), |w| Some(w * ratio))
        .take(dim)
        .collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    Ok(weights)
}

pub fn build_thermal(nbar: f64, dim: usize) -> Result<DensityMatrix> {
    let weights = thermal_weights(nbar, dim)?;
    let diag = DVector::from_iterator(dim, weights.into_iter().map(|w| Complex64::new(w, 0.0)));
    Ok(DensityMatrix::from_matrix(DMatrix::from_diagonal(&diag)))
}

/// ρ_G = D(α) S(ξ) ρ₀ S†(ξ) D†(α), kept as the weighted kets D S |n⟩.
#[derive(Debug, Clone)]
pub struct GaussianEnsemble {
    pub dim: usize,
    pub weights: Vec<f64>,
    pub kets: Vec<DVector<Complex64>>,
}

/// Thermal weights below this fraction of p₀ are dropped from the ensemble.
const WEIGHT_CUTOFF: f64 = 1e-20;

impl GaussianEnsemble {
    pub fn new(params: &GaussianParams, dim: usize) -> Result<Self> {
        let p = params.validate()?;
        let all = thermal_weights(p.nbar, dim)?;
        let squeeze = LadderPolynomial::squeeze(p.xi());
        let displace = LadderPolynomial::displacement(p.alpha());
        let mut weights = Vec::new();
        let mut kets = Vec::new();
        for (n, &w) in all.iter().enumerate() {
            if w < WEIGHT_CUTOFF * all[0] {
                break;
            }
            let basis = DVector::from_fn(dim, |k, _| if k == n { ONE } else { ZERO });
            kets.push(displace.exp_apply(&squeeze.exp_apply(&basis)?)?);
            weights.push(w);
        }
        let ensemble = GaussianEnsemble { dim, weights, kets };
        let leaked = ensemble.edge_population();
        if leaked > PREPARATION_LEAK_LIMIT {
            return Err(Error::Truncation {
                dim,
                leaked,
                limit: PREPARATION_LEAK_LIMIT,
            });
        }
        Ok(ensemble)
    }

    pub fn edge_population(&self) -> f64 {
        let from = self.dim - edge_width(self.dim);
        self.weights
            .iter()
            .zip(&self.kets)
            .map(|(w, ket)| w * ket.rows(from, self.dim - from).norm_squared())
            .sum()
    }

    /// Σ_n p_n f(|u_n⟩).
    pub fn average<F>(&self, mut f: F) -> Result<Complex64>
    where
        F: FnMut(&DVector<Complex64>) -> Result<Complex64>,
    {
        let mut total = ZERO;
        for (w, ket) in self.weights.iter().zip(&self.kets) {
            total += f(ket)? * *w;
        }
        Ok(total)
    }

    pub fn density_matrix(&self) -> DensityMatrix {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (w, ket) in self.weights.iter().zip(&self.kets) {
            m += (ket * ket.adjoint()) * Complex64::new(*w, 0.0);
        }
        DensityMatrix::from_matrix(m)
    }
}

/// The prepared Gaussian state on `dim` levels.
pub fn gaussian_state(params: &GaussianParams, dim: usize) -> Result<DensityMatrix> {
    check_dim(dim)?;
    Ok(GaussianEnsemble::new(params, dim)?.density_matrix())
}

/// exp(−iĤτ) on `dim` levels, with Ĥτ = (Ĥt)(Ωτ/r).
pub fn propagator(params: &GaussianParams, tau_scaled: f64, dim: usize) -> Result<FockOperator> {
    check_dim(dim)?;
    let p = params.validate()?;
    let coeffs = hamiltonian_coeffs(&p)?;
    let generator = coeffs
        .hamiltonian_times_t()
        .scaled(Complex64::new(0.0, -tau_scaled / p.r))
        .to_operator(dim);
    build_unitary(&generator, dim)
}

/// Schrödinger evolution ρ ↦ exp(−iĤτ) ρ exp(iĤτ).
pub fn evolve(
    state: &DensityMatrix,
    params: &GaussianParams,
    tau_scaled: f64,
) -> Result<DensityMatrix> {
    crate::params::check_tau(tau_scaled)?;
    if tau_scaled == 0.0 {
        return Ok(state.clone());
    }
    let dim = state.dim();
    let u = propagator(params, tau_scaled, dim)?;
    let evolved = DensityMatrix::from_matrix(u.matrix() * state.matrix() * u.matrix().adjoint());
    let leaked = evolved.edge_population();
    if leaked > EVOLUTION_LEAK_LIMIT {
        return Err(Error::Truncation {
            dim,
            leaked,
            limit: EVOLUTION_LEAK_LIMIT,
        });
    }
    Ok(evolved)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn ladder_operators() {
        let a = FockOperator::annihilation(6);
        assert_eq!(a.matrix()[(2, 3)], c(3f64.sqrt(), 0.0));
        assert_eq!(a.matrix()[(3, 2)], ZERO);
        assert_eq!(a.adjoint().adjoint(), a);
        let n = FockOperator::creation(6).compose(&a);
        assert!(max_norm((n.matrix() - FockOperator::number(6).matrix()).iter()) < 1e-14);
    }

    #[test]
    fn ladder_polynomial_matches_matrix_products() {
        let dim = 9;
        let a = FockOperator::annihilation(dim);
        let ad = FockOperator::creation(dim);
        let poly = LadderPolynomial {
            constant: c(0.3, -0.1),
            a: c(1.0, 2.0),
            a_dag: c(-0.5, 0.2),
            a_sq: c(0.1, 0.0),
            a_dag_sq: c(0.0, 0.7),
            number: c(-1.1, 0.4),
        };
        let dense = FockOperator::identity(dim)
            .scaled(poly.constant)
            .plus(&a.scaled(poly.a))
            .plus(&ad.scaled(poly.a_dag))
            .plus(&a.compose(&a).scaled(poly.a_sq))
            .plus(&ad.compose(&ad).scaled(poly.a_dag_sq))
            .plus(&ad.compose(&a).scaled(poly.number));
        let diff = max_norm((poly.to_operator(dim).matrix() - dense.matrix()).iter());
        assert!(diff < 1e-14, "{diff}");
        let adj =
            max_norm((poly.adjoint().to_operator(dim).matrix() - dense.adjoint().matrix()).iter());
        assert!(adj < 1e-14);
    }

    #[test]
    fn ladder_exponential_matches_dense_exponential() {
        let dim = 30;
        let poly = LadderPolynomial::squeeze(c(0.2, 0.1));
        let dense = expm(poly.to_operator(dim).matrix()).unwrap();
        let ket = DVector::from_fn(dim, |n, _| c(1.0 / (1.0 + n as f64), 0.1 * n as f64));
        let diff = (poly.exp_apply(&ket).unwrap() - &dense * &ket).norm();
        assert!(diff < 1e-12, "{diff}");
        let lin = LadderPolynomial::linear(c(0.3, 0.2), c(-0.1, 0.4), c(0.5, 1.0));
        let dense = expm(lin.to_operator(dim).matrix()).unwrap();
        let diff = (lin.exp_apply(&ket).unwrap() - &dense * &ket).norm();
        assert!(diff < 1e-12, "{diff}");
    }

    #[test]
    fn expm_of_small_known_matrices() {
        let zero = DMatrix::<Complex64>::zeros(4, 4);
        assert_eq!(expm(&zero).unwrap(), DMatrix::identity(4, 4));
        // rotation generator
        let g = DMatrix::from_row_slice(2, 2, &[ZERO, c(-2.0, 0.0), c(2.0, 0.0), ZERO]);
        let e = expm(&g).unwrap();
        assert!((e[(0, 0)] - c(2f64.cos(), 0.0)).norm() < 1e-14);
        assert!((e[(1, 0)] - c(2f64.sin(), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn build_unitary_rejects_non_anti_hermitian() {
        let a = FockOperator::annihilation(5);
        assert!(matches!(build_unitary(&a, 5), Err(Error::Domain { .. })));
        assert!(build_unitary(&FockOperator::zeros(5), 4).is_err());
        assert_eq!(
            build_unitary(&FockOperator::zeros(5), 5).unwrap(),
            FockOperator::identity(5)
        );
    }

    #[test]
    fn displacement_group_inverse() {
        let dim = 50;
        let alpha = c(0.8, -0.5);
        let d =
            build_unitary(&LadderPolynomial::displacement(alpha).to_operator(dim), dim).unwrap();
        let d_inv = build_unitary(
            &LadderPolynomial::displacement(-alpha).to_operator(dim),
            dim,
        )
        .unwrap();
        let prod = d.compose(&d_inv);
        for j in 0..dim / 2 {
            for k in 0..dim / 2 {
                let want = if j == k { ONE } else { ZERO };
                assert!((prod.matrix()[(j, k)] - want).norm() < 1e-8);
            }
        }
        assert!(d.unitarity_defect(dim / 2) < 1e-8);
    }

    #[test]
    fn squeezed_vacuum_quadrature_variance() {
        let dim = 60;
        let (r, theta) = (0.1, 0.6);
        let s = build_unitary(
            &LadderPolynomial::squeeze(Complex64::from_polar(r, theta)).to_operator(dim),
            dim,
        )
        .unwrap();
        let vac = DVector::from_fn(dim, |n, _| if n == 0 { ONE } else { ZERO });
        let psi = s.apply(&vac);
        let lambda = 0.5 * theta;
        let x = LadderPolynomial::linear(Complex64::cis(-lambda), Complex64::cis(lambda), ZERO)
            .scaled(c(std::f64::consts::FRAC_1_SQRT_2, 0.0));
        let xpsi = x.apply(&psi);
        let mean = psi.dotc(&xpsi).re;
        let var = xpsi.norm_squared() - mean * mean;
        assert!((var - 0.5 * (-2.0 * r).exp()).abs() < 1e-6, "{var}");
    }

    #[test]
    fn hamiltonian_coeff_examples() {
        let p = GaussianParams::new(0.1, 0.1, 0.0, 0.0, 0.0, 1.0).unwrap();
        let h = hamiltonian_coeffs(&p).unwrap();
        assert_eq!(h.b_times_t, ZERO);
        assert!((h.c_times_t - c(0.0, -0.05)).norm() < 1e-16);
        let h = hamiltonian_coeffs(&p.with_phases(PI, 0.0)).unwrap();
        assert!((h.c_times_t - c(0.0, 0.05)).norm() < 1e-15);
    }

    #[test]
    fn preparation_hamiltonian_reproduces_displaced_squeezed_thermal_state() {
        let dim = 40;
        let p = GaussianParams::new(0.2, 0.15, 0.7, 0.6, -0.4, 1.0).unwrap();
        let gen = hamiltonian_coeffs(&p)
            .unwrap()
            .hamiltonian_times_t()
            .scaled(c(0.0, -1.0))
            .to_operator(dim);
        let u = build_unitary(&gen, dim).unwrap();
        let rho0 = build_thermal(p.nbar, dim).unwrap();
        let prepared = u.matrix() * rho0.matrix() * u.matrix().adjoint();
        let target = gaussian_state(&p, dim).unwrap();
        let block = dim / 2;
        let diff = max_norm(
            (prepared - target.matrix())
                .view((0, 0), (block, block))
                .iter(),
        );
        assert!(diff < 1e-10, "{diff}");
    }

    #[test]
    fn thermal_state_moments() {
        let rho = build_thermal(0.1, 40).unwrap();
        let n = FockOperator::number(40);
        let mean = rho.expectation(&n).re;
        let second = rho.expectation(&n.compose(&n)).re;
        assert!((mean - 0.1).abs() < 1e-10);
        assert!((second - mean * mean - (0.01 + 0.1)).abs() < 1e-8);
        assert!((rho.trace() - 1.0).abs() < 1e-14);

        let vac = build_thermal(0.0, 5).unwrap();
        assert_eq!(vac.matrix()[(0, 0)], ONE);
        assert_eq!(vac.trace(), 1.0);

        assert!(matches!(
            build_thermal(0.1, 2),
            Err(Error::Truncation { .. })
        ));
        assert!(build_thermal(0.1, 1).is_err());
    }

    #[test]
    fn gaussian_state_is_a_state() {
        let p = GaussianParams::new(0.5, 0.3, 1.0, 1.0, 0.5, 1.0).unwrap();
        let rho = gaussian_state(&p, 60).unwrap();
        assert!((rho.trace() - 1.0).abs() < 1e-8);
        assert!(rho.hermitian_defect() < 1e-12);
        assert!(rho.min_eigenvalue() > -1e-10);

        let thermalish = gaussian_state(
            &GaussianParams::new(0.1, 1e-9, 0.0, 0.0, 0.0, 1.0).unwrap(),
            30,
        )
        .unwrap();
        let thermal = build_thermal(0.1, 30).unwrap();
        assert!(max_norm((thermalish.matrix() - thermal.matrix()).iter()) < 1e-8);

        assert!(matches!(
            gaussian_state(&p.with_alpha_abs(3.0), 8),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn gaussian_state_mean_photon_number() {
        // n̄ = 0: ⟨n̂⟩ = sinh² r + |α|²
        let p = GaussianParams::new(0.0, 0.1, 0.0, 1.0, 0.0, 1.0).unwrap();
        let rho = gaussian_state(&p, 40).unwrap();
        let mean = rho.expectation(&FockOperator::number(40)).re;
        assert!(
            (mean - (0.1f64.sinh().powi(2) + 1.0)).abs() < 1e-8,
            "{mean}"
        );
    }

    #[test]
    fn evolution_at_zero_delay_is_identity() {
        let p = GaussianParams::new(0.1, 0.1, 0.0, 0.5, 0.0, 1.0).unwrap();
        let rho = gaussian_state(&p, 30).unwrap();
        assert_eq!(evolve(&rho, &p, 0.0).unwrap(), rho);
    }

    #[test]
    fn evolution_preserves_trace_and_flags_leakage() {
        let p = GaussianParams::new(0.1, 0.2, 0.3, 0.3, 0.2, 1.0).unwrap();
        let rho = gaussian_state(&p, 60).unwrap();
        let out = evolve(&rho, &p, 0.1).unwrap();
        assert!((out.trace() - 1.0).abs() < 1e-8);
        assert!(propagator(&p, 0.1, 60).unwrap().unitarity_defect(30) < 1e-8);
        // the coherent amplitude is amplified by ~coth(r/2); a long delay runs off the basis
        let p = GaussianParams::new(0.1, 0.1, 0.0, 1.0, 0.0, 1.0).unwrap();
        let rho = gaussian_state(&p, 40).unwrap();
        assert!(matches!(
            evolve(&rho, &p, 0.5),
            Err(Error::Truncation { .. })
        ));
    }
}
