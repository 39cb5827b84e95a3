//! Dense complex linear-algebra primitives.
//!
//! Conventions used throughout the crate:
//! - inner product `⟨ζ, η⟩` is linear in the first argument and
//!   conjugate-linear in the second: `⟨ζ, η⟩ = Σ ζ_i conj(η_i)`;
//! - an antilinear operator with matrix `A` acts as `ζ ↦ A·conj(ζ)`;
//! - its adjoint (defined by `⟨Sζ, η⟩ = ⟨S†η, ζ⟩`) has matrix `Aᵀ`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::MatError;
use crate::tol::TolerancePolicy;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn cplx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `⟨ζ, η⟩`, linear in `ζ`.
pub fn inner(zeta: &CVec, eta: &CVec) -> Complex64 {
    eta.dotc(zeta)
}

pub fn frob(m: &CMat) -> f64 {
    m.norm()
}

pub fn all_finite_mat(m: &CMat) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn herm_residual(m: &CMat) -> f64 {
    (m - m.adjoint()).norm()
}

/// Hermitian eigendecomposition, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermEig {
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the eigenvectors, ordered like `values`.
    pub vectors: CMat,
}

impl HermEig {
    pub fn spectral_radius(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    /// Reassembles `f(A) = V diag(f(λ)) V*`.
    pub fn map(&self, f: impl Fn(f64) -> Complex64) -> CMat {
        let n = self.values.len();
        let d = DMatrix::from_diagonal(&DVector::from_iterator(n, self.values.iter().map(|&l| f(l))));
        &self.vectors * d * self.vectors.adjoint()
    }

    /// Sum of `v v*` over eigenvectors selected by `keep(λ)`.
    pub fn projection_where(&self, keep: impl Fn(f64) -> bool) -> CMat {
        let n = self.values.len();
        let d = DMatrix::from_diagonal(&DVector::from_iterator(
            n,
            self.values.iter().map(|&l| if keep(l) { C_ONE } else { C_ZERO }),
        ));
        &self.vectors * d * self.vectors.adjoint()
    }
}

pub fn herm_eig(a: &CMat, tol: &TolerancePolicy) -> Result<HermEig, MatError> {
    let scale = frob(a);
    let res = herm_residual(a);
    if res > tol.eq(scale) {
        return Err(MatError::NotHermitian {
            residual: res,
            tolerance: tol.eq(scale),
        });
    }
    if !all_finite_mat(a) {
        return Err(MatError::NonFinite);
    }
    let h = (a + a.adjoint()).scale(0.5);
    let eig = h.try_symmetric_eigen(f64::EPSILON * 4.0, 10_000).ok_or(MatError::EigFailed)?;
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMat::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(i));
    }
    Ok(HermEig { values, vectors })
}

/// Groups an ascending list into clusters separated by gaps larger than `gap`.
/// Returns half-open index ranges.
pub fn cluster_ascending(values: &[f64], gap: f64) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..values.len() {
        if values[i] - values[i - 1] > gap {
            out.push(start..i);
            start = i;
        }
    }
    if !values.is_empty() {
        out.push(start..values.len());
    }
    out
}

/// Least-squares solve `min ‖Ax − b‖`. Returns the minimizer and the residual.
///
/// The zero map is answered directly (`x = 0`); otherwise a condition estimate
/// above `cond_max` is rejected.
pub fn lin_solve(a: &CMat, b: &CVec, tol: &TolerancePolicy) -> Result<(CVec, f64), MatError> {
    if a.nrows() != b.len() {
        return Err(MatError::ShapeMismatch {
            expected: format!("rhs of length {}", a.nrows()),
            got: format!("{}", b.len()),
        });
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().fold(0.0f64, |m, &s| m.max(s));
    if smax == 0.0 {
        return Ok((CVec::zeros(a.ncols()), b.norm()));
    }
    let smin = svd.singular_values.iter().fold(f64::INFINITY, |m, &s| m.min(s));
    let cond = smax / smin.max(f64::MIN_POSITIVE);
    if cond > tol.cond_max {
        return Err(MatError::IllConditioned { cond, max: tol.cond_max });
    }
    let x = svd
        .solve(b, smax * f64::EPSILON * a.nrows().max(a.ncols()) as f64)
        .map_err(|_| MatError::EigFailed)?;
    let residual = (a * &x - b).norm();
    Ok((x, residual))
}

/// Multi-right-hand-side variant of [`lin_solve`]; solves `AX = B` column-wise.
pub fn lin_solve_mat(a: &CMat, b: &CMat, tol: &TolerancePolicy) -> Result<(CMat, f64), MatError> {
    let mut x = CMat::zeros(a.ncols(), b.ncols());
    let mut worst = 0.0f64;
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().fold(0.0f64, |m, &s| m.max(s));
    if smax == 0.0 {
        return Ok((x, frob(b)));
    }
    let smin = svd.singular_values.iter().fold(f64::INFINITY, |m, &s| m.min(s));
    let cond = smax / smin.max(f64::MIN_POSITIVE);
    if cond > tol.cond_max {
        return Err(MatError::IllConditioned { cond, max: tol.cond_max });
    }
    let eps = smax * f64::EPSILON * a.nrows().max(a.ncols()) as f64;
    for j in 0..b.ncols() {
        let col = CVec::from_column_slice(b.column(j).as_slice());
        let xj = svd.solve(&col, eps).map_err(|_| MatError::EigFailed)?;
        worst = worst.max((a * &xj - &col).norm());
        x.set_column(j, &xj);
    }
    Ok((x, worst))
}

pub fn matrix_inverse(a: &CMat, tol: &TolerancePolicy) -> Result<CMat, MatError> {
    let n = a.nrows();
    let (inv, _) = lin_solve_mat(a, &CMat::identity(n, n), tol)?;
    Ok(inv)
}

pub fn singular_values(a: &CMat) -> Vec<f64> {
    let svd = a.clone().svd(false, false);
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|x, y| y.partial_cmp(x).unwrap());
    s
}

/// Numerical rank at threshold `thresh · σ_max`.
pub fn rank_at(a: &CMat, thresh: f64) -> usize {
    let s = singular_values(a);
    let smax = s.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    s.iter().filter(|&&v| v > thresh * smax).count()
}

pub fn spectral_norm(a: &CMat) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// An antilinear operator on `C^dim`, acting as `ζ ↦ mat · conj(ζ)`.
#[derive(Debug, Clone)]
pub struct AntilinearOp {
    pub mat: CMat,
}

impl AntilinearOp {
    pub fn new(mat: CMat) -> Self {
        assert_eq!(mat.nrows(), mat.ncols(), "antilinear operator must be square");
        AntilinearOp { mat }
    }

    /// Plain entrywise conjugation.
    pub fn conjugation(dim: usize) -> Self {
        AntilinearOp { mat: CMat::identity(dim, dim) }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn apply(&self, zeta: &CVec) -> CVec {
        &self.mat * zeta.conjugate()
    }

    /// Adjoint under `⟨Sζ, η⟩ = ⟨S†η, ζ⟩`: the matrix transposes.
    pub fn adjoint(&self) -> AntilinearOp {
        AntilinearOp { mat: self.mat.transpose() }
    }

    /// The linear operator `self ∘ other` (antilinear twice).
    pub fn compose_antilinear(&self, other: &AntilinearOp) -> CMat {
        &self.mat * other.mat.conjugate()
    }

    /// The linear operator `self ∘ X ∘ self` for linear `X`.
    pub fn sandwich(&self, x: &CMat) -> CMat {
        &self.mat * x.conjugate() * self.mat.conjugate()
    }

    /// `‖J² − I‖` where `J` is this operator; zero for involutions.
    pub fn involution_residual(&self) -> f64 {
        let n = self.dim();
        (self.compose_antilinear(self) - CMat::identity(n, n)).norm()
    }

    /// `‖MᴴM − I‖`; zero exactly when the operator is antiunitary.
    pub fn antiunitary_residual(&self) -> f64 {
        let n = self.dim();
        (self.mat.adjoint() * &self.mat - CMat::identity(n, n)).norm()
    }
}

/// Polar data `S = J Δ^{1/2}` of an invertible antilinear operator.
///
/// `Δ = S†S` is linear positive definite and `J` is antiunitary. When `S` is
/// an involution (the modular case) `J` is additionally a conjugation,
/// `J² = I`, and `JΔJ = Δ^{-1}`.
pub fn antilinear_polar(s: &AntilinearOp, tol: &TolerancePolicy) -> Result<(AntilinearOp, CMat), MatError> {
    let sv = singular_values(&s.mat);
    let smax = sv.first().copied().unwrap_or(0.0);
    let smin = sv.last().copied().unwrap_or(0.0);
    if smax == 0.0 || smax / smin.max(f64::MIN_POSITIVE) > tol.cond_max {
        return Err(MatError::Singular { sigma_min: smin });
    }
    // Δ = S†S has matrix Sᵀ conj(S).
    let delta_raw = s.mat.transpose() * s.mat.conjugate();
    let delta = (&delta_raw + delta_raw.adjoint()).scale(0.5);
    let eig = herm_eig(&delta, tol)?;
    if eig.values.iter().any(|&l| l <= 0.0) {
        return Err(MatError::Singular { sigma_min: eig.values[0] });
    }
    let inv_sqrt = eig.map(|l| cplx(1.0 / l.sqrt(), 0.0));
    let j = AntilinearOp { mat: &s.mat * inv_sqrt.conjugate() };
    Ok((j, delta))
}
