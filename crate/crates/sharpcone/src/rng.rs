//! Seeded deterministic generators.
//!
//! A 64-bit splittable counter generator (SplitMix64) drives everything;
//! Gaussians come from Box–Muller. Identical seeds give bit-identical
//! streams on every platform.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::mat::{cplx, CMat, C_ZERO};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
    cached_gauss: Option<f64>,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed, cached_gauss: None }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in (0, 1].
    pub fn next_unit(&mut self) -> f64 {
        (((self.next_u64() >> 11) + 1) as f64) * (1.0 / 9007199254740992.0)
    }

    /// Derives an independent child stream.
    pub fn split(&mut self) -> SplitMix64 {
        SplitMix64::new(self.next_u64())
    }

    /// Standard normal via Box–Muller.
    pub fn gaussian(&mut self) -> f64 {
        if let Some(g) = self.cached_gauss.take() {
            return g;
        }
        let u1 = self.next_unit();
        let u2 = self.next_unit();
        let r = (-2.0 * u1.ln()).sqrt();
        let t = 2.0 * std::f64::consts::PI * u2;
        self.cached_gauss = Some(r * t.sin());
        r * t.cos()
    }

    pub fn gaussian_complex(&mut self) -> Complex64 {
        cplx(self.gaussian(), self.gaussian()) * std::f64::consts::FRAC_1_SQRT_2
    }

    /// Uniform in [lo, hi).
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * (self.next_unit() - f64::MIN_POSITIVE).max(0.0)
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut SplitMix64) -> CMat {
    CMat::from_fn(rows, cols, |_, _| rng.gaussian_complex())
}

/// Seeded Hermitian matrix `(G + G*)/2` with complex Gaussian `G`.
pub fn rand_hermitian(dim: usize, seed: u64) -> CMat {
    let mut rng = SplitMix64::new(seed);
    let g = gaussian_matrix(dim, dim, &mut rng);
    (&g + g.adjoint()).scale(0.5)
}

/// Seeded unitary via modified Gram–Schmidt on a Gaussian matrix.
pub fn rand_unitary(dim: usize, seed: u64) -> CMat {
    let mut rng = SplitMix64::new(seed);
    rand_unitary_from(dim, &mut rng)
}

pub fn rand_unitary_from(dim: usize, rng: &mut SplitMix64) -> CMat {
    loop {
        let g = gaussian_matrix(dim, dim, rng);
        if let Some(q) = gram_schmidt(&g) {
            return q;
        }
    }
}

fn gram_schmidt(g: &CMat) -> Option<CMat> {
    let n = g.nrows();
    let mut q = g.clone();
    for j in 0..n {
        for k in 0..j {
            let proj = q.column(k).dotc(&q.column(j));
            let col_k = q.column(k).clone_owned();
            for i in 0..n {
                q[(i, j)] -= proj * col_k[i];
            }
        }
        let norm = q.column(j).norm();
        if norm < 1e-8 {
            return None;
        }
        q.column_mut(j).unscale_mut(norm);
    }
    Some(q)
}

/// Seeded rank-`rank` orthogonal projection.
pub fn rand_projection(dim: usize, rank: usize, seed: u64) -> CMat {
    assert!(rank <= dim);
    let u = rand_unitary(dim, seed);
    let mut p = CMat::zeros(dim, dim);
    for k in 0..rank {
        let col = u.column(k);
        for i in 0..dim {
            for j in 0..dim {
                p[(i, j)] += col[i] * col[j].conj();
            }
        }
    }
    p
}

/// Seeded positive definite matrix with unit trace and eigenvalues bounded
/// away from zero.
pub fn rand_density(dim: usize, seed: u64, floor: f64) -> CMat {
    let mut rng = SplitMix64::new(seed);
    let u = rand_unitary_from(dim, &mut rng);
    let mut eigs: Vec<f64> = (0..dim).map(|_| floor + rng.uniform(0.0, 1.0)).collect();
    let total: f64 = eigs.iter().sum();
    for e in eigs.iter_mut() {
        *e /= total;
    }
    let mut d = CMat::zeros(dim, dim);
    for (k, &e) in eigs.iter().enumerate() {
        d[(k, k)] = cplx(e, 0.0);
    }
    &u * d * u.adjoint()
}

/// Seeded invertible matrix with singular values in `[min_sv, 1]`.
pub fn rand_invertible(dim: usize, seed: u64, min_sv: f64) -> CMat {
    let mut rng = SplitMix64::new(seed);
    let u = rand_unitary_from(dim, &mut rng);
    let v = rand_unitary_from(dim, &mut rng);
    let mut d = CMat::zeros(dim, dim);
    for k in 0..dim {
        d[(k, k)] = cplx(rng.uniform(min_sv, 1.0), 0.0);
    }
    &u * d * v.adjoint()
}

/// Hermitian combination of a matrix list with seeded Gaussian weights.
pub fn rand_hermitian_combination(mats: &[CMat], rng: &mut SplitMix64) -> CMat {
    let d = mats[0].nrows();
    let mut h = DMatrix::from_element(d, d, C_ZERO);
    for m in mats {
        let c = rng.gaussian_complex();
        h += m.map(|z| z * c) + m.adjoint().map(|z| z * c.conj());
    }
    (&h + h.adjoint()).scale(0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_streams() {
        let mut a = SplitMix64::new(7);
        let mut b = SplitMix64::new(7);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        let h1 = rand_hermitian(4, 42);
        let h2 = rand_hermitian(4, 42);
        assert_eq!(h1, h2);
    }

    #[test]
    fn unitary_is_unitary() {
        let u = rand_unitary(4, 7);
        let r = (u.adjoint() * &u - CMat::identity(4, 4)).norm();
        assert!(r < 1e-12, "residual {r}");
    }

    #[test]
    fn dim_one_cases() {
        let h = rand_hermitian(1, 3);
        assert!(h[(0, 0)].im.abs() < 1e-15);
        let u = rand_unitary(1, 3);
        assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn projection_is_projection() {
        let p = rand_projection(5, 2, 9);
        assert!((&p * &p - &p).norm() < 1e-12);
        assert!((&p - p.adjoint()).norm() < 1e-12);
        let tr: Complex64 = (0..5).map(|i| p[(i, i)]).sum();
        assert!((tr.re - 2.0).abs() < 1e-10);
    }

    #[test]
    fn density_has_unit_trace() {
        let d = rand_density(3, 5, 0.2);
        let tr: Complex64 = (0..3).map(|i| d[(i, i)]).sum();
        assert!((tr.re - 1.0).abs() < 1e-12);
    }
}
