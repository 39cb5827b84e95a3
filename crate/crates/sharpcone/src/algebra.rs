//! Finite-dimensional *-algebras as direct sums of matrix blocks with
//! multiplicities, in standard position.
//!
//! The Hilbert space of a block `(n, m)` is identified with the n×m complex
//! matrices (row-major); the algebra acts by left multiplication, its
//! commutant by right multiplication. `⟨V, W⟩ = Tr(W* V)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;
use crate::mat::{all_finite_mat, cplx, herm_eig, rank_at, CMat, CVec, C_ONE, C_ZERO};
use crate::tol::TolerancePolicy;

pub const DEFAULT_DIM_CAP: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockDims {
    pub n: usize,
    pub m: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub blocks: Vec<BlockDims>,
}

impl AlgebraSpec {
    pub fn new(blocks: Vec<(usize, usize)>) -> Self {
        AlgebraSpec {
            blocks: blocks.into_iter().map(|(n, m)| BlockDims { n, m }).collect(),
        }
    }

    /// Full matrix algebra M_n in standard form (one block, multiplicity n).
    pub fn factor(n: usize) -> Self {
        AlgebraSpec::new(vec![(n, n)])
    }

    pub fn dim_h(&self) -> usize {
        self.blocks.iter().map(|b| b.n * b.m).sum()
    }

    pub fn dim_algebra(&self) -> usize {
        self.blocks.iter().map(|b| b.n * b.n).sum()
    }

    pub fn validate(&self, cap: usize) -> Result<(), AlgebraError> {
        if self.blocks.is_empty() || self.blocks.iter().any(|b| b.n == 0 || b.m == 0) {
            return Err(AlgebraError::ShapeMismatch("blocks must be nonempty with n, m ≥ 1".into()));
        }
        let dim = self.dim_h();
        if dim > cap {
            return Err(AlgebraError::DimensionCap { dim, cap });
        }
        Ok(())
    }

    /// Flat offset of block `k` inside the Hilbert space.
    pub fn block_offset(&self, k: usize) -> usize {
        self.blocks[..k].iter().map(|b| b.n * b.m).sum()
    }
}

/// An element of the algebra: one n_k×n_k matrix per block.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    pub blocks: Vec<CMat>,
}

impl AlgebraElement {
    pub fn zeros(spec: &AlgebraSpec) -> Self {
        AlgebraElement {
            blocks: spec.blocks.iter().map(|b| CMat::zeros(b.n, b.n)).collect(),
        }
    }

    pub fn identity(spec: &AlgebraSpec) -> Self {
        AlgebraElement {
            blocks: spec.blocks.iter().map(|b| CMat::identity(b.n, b.n)).collect(),
        }
    }

    /// Central projection selecting the blocks flagged `true`.
    pub fn central(spec: &AlgebraSpec, pattern: &[bool]) -> Self {
        AlgebraElement {
            blocks: spec
                .blocks
                .iter()
                .zip(pattern)
                .map(|(b, &on)| if on { CMat::identity(b.n, b.n) } else { CMat::zeros(b.n, b.n) })
                .collect(),
        }
    }

    pub fn matches(&self, spec: &AlgebraSpec) -> bool {
        self.blocks.len() == spec.blocks.len()
            && self
                .blocks
                .iter()
                .zip(&spec.blocks)
                .all(|(m, b)| m.nrows() == b.n && m.ncols() == b.n)
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> AlgebraElement {
        AlgebraElement {
            blocks: self.blocks.iter().map(|a| a.map(|z| z * c)).collect(),
        }
    }

    pub fn mul(&self, other: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a * b).collect(),
        }
    }

    pub fn adjoint(&self) -> AlgebraElement {
        AlgebraElement {
            blocks: self.blocks.iter().map(|a| a.adjoint()).collect(),
        }
    }

    pub fn herm_residual(&self) -> f64 {
        self.blocks
            .iter()
            .map(|a| (a - a.adjoint()).norm())
            .fold(0.0, f64::max)
    }

    pub fn norm_frob(&self) -> f64 {
        self.blocks.iter().map(|a| a.norm_squared()).sum::<f64>().sqrt()
    }

    pub fn norm_op(&self) -> f64 {
        self.blocks.iter().map(crate::mat::spectral_norm).fold(0.0, f64::max)
    }

    /// Smallest eigenvalue of the Hermitian part across blocks.
    pub fn min_eig_herm(&self, tol: &TolerancePolicy) -> Result<f64, AlgebraError> {
        let mut lo = f64::INFINITY;
        for a in &self.blocks {
            let h = (a + a.adjoint()).scale(0.5);
            let e = herm_eig(&h, tol)?;
            lo = lo.min(e.values[0]);
        }
        Ok(lo)
    }
}

/// A vector of the Hilbert space: one n_k×m_k matrix per block.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub blocks: Vec<CMat>,
}

impl StateVector {
    pub fn zeros(spec: &AlgebraSpec) -> Self {
        StateVector {
            blocks: spec.blocks.iter().map(|b| CMat::zeros(b.n, b.m)).collect(),
        }
    }

    pub fn matches(&self, spec: &AlgebraSpec) -> bool {
        self.blocks.len() == spec.blocks.len()
            && self
                .blocks
                .iter()
                .zip(&spec.blocks)
                .all(|(m, b)| m.nrows() == b.n && m.ncols() == b.m)
    }

    pub fn all_finite(&self) -> bool {
        self.blocks.iter().all(all_finite_mat)
    }

    /// Row-major flattening, blocks in order.
    pub fn to_flat(&self) -> CVec {
        let len: usize = self.blocks.iter().map(|b| b.len()).sum();
        let mut v = CVec::zeros(len);
        let mut off = 0;
        for b in &self.blocks {
            for i in 0..b.nrows() {
                for j in 0..b.ncols() {
                    v[off + i * b.ncols() + j] = b[(i, j)];
                }
            }
            off += b.len();
        }
        v
    }

    pub fn from_flat(spec: &AlgebraSpec, v: &CVec) -> Self {
        assert_eq!(v.len(), spec.dim_h());
        let mut blocks = Vec::with_capacity(spec.blocks.len());
        let mut off = 0;
        for b in &spec.blocks {
            let mut m = CMat::zeros(b.n, b.m);
            for i in 0..b.n {
                for j in 0..b.m {
                    m[(i, j)] = v[off + i * b.m + j];
                }
            }
            blocks.push(m);
            off += b.n * b.m;
        }
        StateVector { blocks }
    }

    pub fn add(&self, o: &StateVector) -> StateVector {
        StateVector {
            blocks: self.blocks.iter().zip(&o.blocks).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &StateVector) -> StateVector {
        StateVector {
            blocks: self.blocks.iter().zip(&o.blocks).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> StateVector {
        StateVector {
            blocks: self.blocks.iter().map(|a| a.map(|z| z * c)).collect(),
        }
    }

    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(|b| b.norm_squared()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, o: &StateVector) -> Complex64 {
        self.blocks
            .iter()
            .zip(&o.blocks)
            .map(|(a, b)| {
                let mut s = C_ZERO;
                for i in 0..a.nrows() {
                    for j in 0..a.ncols() {
                        s += a[(i, j)] * b[(i, j)].conj();
                    }
                }
                s
            })
            .sum()
    }
}

/// An algebra in standard position together with its matrix-unit basis.
#[derive(Debug, Clone)]
pub struct Algebra {
    pub spec: AlgebraSpec,
    units: Vec<AlgebraElement>,
    embedded_units: Vec<CMat>,
}

/// Index of the matrix unit `e^k_{ij}` in the basis enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnitIndex {
    pub block: usize,
    pub row: usize,
    pub col: usize,
}

impl Algebra {
    pub fn new(spec: AlgebraSpec) -> Result<Self, AlgebraError> {
        spec.validate(DEFAULT_DIM_CAP)?;
        let mut units = Vec::with_capacity(spec.dim_algebra());
        for (k, b) in spec.blocks.iter().enumerate() {
            for i in 0..b.n {
                for j in 0..b.n {
                    let mut x = AlgebraElement::zeros(&spec);
                    x.blocks[k][(i, j)] = C_ONE;
                    units.push(x);
                }
            }
        }
        let embedded_units = units.iter().map(|u| embed(&spec, u)).collect();
        Ok(Algebra { spec, units, embedded_units })
    }

    pub fn dim_h(&self) -> usize {
        self.spec.dim_h()
    }

    pub fn dim(&self) -> usize {
        self.units.len()
    }

    /// Matrix-unit basis, blocks in order, (row, col) row-major.
    pub fn units(&self) -> &[AlgebraElement] {
        &self.units
    }

    pub fn embedded_units(&self) -> &[CMat] {
        &self.embedded_units
    }

    pub fn unit_indices(&self) -> Vec<UnitIndex> {
        let mut out = Vec::with_capacity(self.units.len());
        for (k, b) in self.spec.blocks.iter().enumerate() {
            for i in 0..b.n {
                for j in 0..b.n {
                    out.push(UnitIndex { block: k, row: i, col: j });
                }
            }
        }
        out
    }

    pub fn identity(&self) -> AlgebraElement {
        AlgebraElement::identity(&self.spec)
    }

    /// Minimal central projections: the block identities.
    pub fn minimal_central(&self) -> Vec<AlgebraElement> {
        (0..self.spec.blocks.len())
            .map(|k| {
                let mut pat = vec![false; self.spec.blocks.len()];
                pat[k] = true;
                AlgebraElement::central(&self.spec, &pat)
            })
            .collect()
    }
}

/// The dim×dim matrix of `x` acting block-wise by left multiplication,
/// `x_k ⊗ 1_{m_k}` under the row-major identification.
pub fn embed(spec: &AlgebraSpec, x: &AlgebraElement) -> CMat {
    let d = spec.dim_h();
    let mut out = CMat::zeros(d, d);
    let mut off = 0;
    for (k, b) in spec.blocks.iter().enumerate() {
        let xb = &x.blocks[k];
        for i in 0..b.n {
            for j in 0..b.n {
                let v = xb[(i, j)];
                if v != C_ZERO {
                    for a in 0..b.m {
                        out[(off + i * b.m + a, off + j * b.m + a)] = v;
                    }
                }
            }
        }
        off += b.n * b.m;
    }
    out
}

/// The dim×dim matrix of the commutant element acting by right
/// multiplication: `1_{n_k} ⊗ y_k` (i.e. `V ↦ V·y_kᵀ`).
pub fn embed_right(spec: &AlgebraSpec, y_blocks: &[CMat]) -> CMat {
    let d = spec.dim_h();
    let mut out = CMat::zeros(d, d);
    let mut off = 0;
    for (k, b) in spec.blocks.iter().enumerate() {
        let yb = &y_blocks[k];
        assert_eq!(yb.nrows(), b.m);
        for i in 0..b.n {
            for a in 0..b.m {
                for c in 0..b.m {
                    out[(off + i * b.m + a, off + i * b.m + c)] += yb[(a, c)];
                }
            }
        }
        off += b.n * b.m;
    }
    out
}

/// Extracts the block form of an embedded algebra element, together with the
/// residual `‖X − embed(extract(X))‖`.
pub fn extract(spec: &AlgebraSpec, x_embedded: &CMat) -> (AlgebraElement, f64) {
    let mut blocks = Vec::with_capacity(spec.blocks.len());
    let mut off = 0;
    for b in &spec.blocks {
        let mut m = CMat::zeros(b.n, b.n);
        for i in 0..b.n {
            for j in 0..b.n {
                let mut s = C_ZERO;
                for a in 0..b.m {
                    s += x_embedded[(off + i * b.m + a, off + j * b.m + a)];
                }
                m[(i, j)] = s / cplx(b.m as f64, 0.0);
            }
        }
        blocks.push(m);
        off += b.n * b.m;
    }
    let el = AlgebraElement { blocks };
    let residual = (x_embedded - embed(spec, &el)).norm();
    (el, residual)
}

/// Cyclic ⟺ every block of ξ has full column rank m_k.
pub fn check_cyclic(spec: &AlgebraSpec, xi: &StateVector) -> bool {
    xi.matches(spec)
        && xi
            .blocks
            .iter()
            .zip(&spec.blocks)
            .all(|(w, b)| rank_at(w, 1e-10) == b.m)
}

/// Separating ⟺ every block of ξ has full row rank n_k.
pub fn check_separating(spec: &AlgebraSpec, xi: &StateVector) -> bool {
    xi.matches(spec)
        && xi
            .blocks
            .iter()
            .zip(&spec.blocks)
            .all(|(w, b)| rank_at(w, 1e-10) == b.n)
}

/// Compression of an operator family to the range of a commuting projection.
#[derive(Debug, Clone)]
pub struct Reduction {
    /// Orthonormal basis of range(p), as columns.
    pub isometry: CMat,
    /// Compressed operators `Q* X Q`.
    pub operators: Vec<CMat>,
    /// Compressed vector `Q* ξ`.
    pub vector: CVec,
}

impl Reduction {
    pub fn dim(&self) -> usize {
        self.isometry.ncols()
    }

    /// Re-expands a compressed operator to the ambient space (zero off range(p)).
    pub fn expand(&self, x: &CMat) -> CMat {
        &self.isometry * x * self.isometry.adjoint()
    }
}

/// Reduces the family `ops` and the vector `xi` by a projection `p` that
/// commutes with every member of `ops`.
pub fn reduce(ops: &[CMat], p: &CMat, xi: &CVec, tol: &TolerancePolicy) -> Result<Reduction, AlgebraError> {
    let d = p.nrows();
    for x in ops {
        let comm = (p * x - x * p).norm();
        if comm > tol.eq(x.norm()) {
            return Err(AlgebraError::NotCommuting(comm));
        }
    }
    let eig = herm_eig(p, tol)?;
    let kept: Vec<usize> = (0..d).filter(|&i| eig.values[i] > 0.5).collect();
    let mut q = CMat::zeros(d, kept.len());
    for (col, &i) in kept.iter().enumerate() {
        q.set_column(col, &eig.vectors.column(i));
    }
    let proj_residual = (&q * q.adjoint() - p).norm();
    if proj_residual > tol.eq(1.0) * 10.0 {
        return Err(AlgebraError::ShapeMismatch(format!(
            "p is not a projection (residual {proj_residual:.3e})"
        )));
    }
    let operators = ops.iter().map(|x| q.adjoint() * x * &q).collect();
    let vector = q.adjoint() * xi;
    Ok(Reduction { isometry: q, operators, vector })
}

/// Trace of a square complex matrix.
pub fn trace(m: &CMat) -> Complex64 {
    let mut t = C_ZERO;
    for i in 0..m.nrows().min(m.ncols()) {
        t += m[(i, i)];
    }
    t
}

/// Trace inner product `⟨A, B⟩ = Tr(B* A)`.
pub fn trace_inner(a: &CMat, b: &CMat) -> Complex64 {
    let mut s = C_ZERO;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            s += a[(i, j)] * b[(i, j)].conj();
        }
    }
    s
}

/// Row-major flattening of a dim×dim operator into a dim² vector.
pub fn vec_of_mat(m: &CMat) -> CVec {
    let (r, c) = (m.nrows(), m.ncols());
    let mut v = CVec::zeros(r * c);
    for i in 0..r {
        for j in 0..c {
            v[i * c + j] = m[(i, j)];
        }
    }
    v
}

pub fn mat_of_vec(v: &CVec, rows: usize, cols: usize) -> CMat {
    let mut m = CMat::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = v[i * cols + j];
        }
    }
    m
}

pub fn identity_mat(d: usize) -> CMat {
    DMatrix::identity(d, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2_spec() -> AlgebraSpec {
        AlgebraSpec::factor(2)
    }

    #[test]
    fn embed_identity_is_identity() {
        let spec = m2_spec();
        let e = embed(&spec, &AlgebraElement::identity(&spec));
        assert_eq!(e, CMat::identity(4, 4));
    }

    #[test]
    fn embed_scalar_block() {
        let spec = AlgebraSpec::new(vec![(1, 1)]);
        let mut x = AlgebraElement::zeros(&spec);
        x.blocks[0][(0, 0)] = cplx(3.0, -1.0);
        let e = embed(&spec, &x);
        assert_eq!(e.nrows(), 1);
        assert_eq!(e[(0, 0)], cplx(3.0, -1.0));
    }

    #[test]
    fn embed_projection_has_rank_two() {
        // one block n = m = 2; x = diag(1,0) acts as a rank-2 projection on C^4
        let spec = m2_spec();
        let mut x = AlgebraElement::zeros(&spec);
        x.blocks[0][(0, 0)] = C_ONE;
        let p = embed(&spec, &x);
        assert!((&p * &p - &p).norm() < 1e-14);
        assert_eq!(rank_at(&p, 1e-10), 2);
    }

    #[test]
    fn flat_roundtrip() {
        let spec = AlgebraSpec::new(vec![(2, 2), (1, 1)]);
        let mut xi = StateVector::zeros(&spec);
        xi.blocks[0][(0, 1)] = cplx(1.0, 2.0);
        xi.blocks[1][(0, 0)] = cplx(-0.5, 0.0);
        let flat = xi.to_flat();
        assert_eq!(flat.len(), 5);
        let back = StateVector::from_flat(&spec, &flat);
        assert_eq!(back, xi);
    }

    #[test]
    fn cyclic_separating_rank_conditions() {
        let spec = m2_spec();
        // ξ0 = ρ^{1/2}, ρ = diag(2/3, 1/3): invertible block
        let mut xi = StateVector::zeros(&spec);
        xi.blocks[0][(0, 0)] = cplx((2.0f64 / 3.0).sqrt(), 0.0);
        xi.blocks[0][(1, 1)] = cplx((1.0f64 / 3.0).sqrt(), 0.0);
        assert!(check_cyclic(&spec, &xi));
        assert!(check_separating(&spec, &xi));

        let zero = StateVector::zeros(&spec);
        assert!(!check_cyclic(&spec, &zero));
        assert!(!check_separating(&spec, &zero));

        // n=2, m=1: separating impossible by dimension count
        let tall = AlgebraSpec::new(vec![(2, 1)]);
        let mut v = StateVector::zeros(&tall);
        v.blocks[0][(0, 0)] = C_ONE;
        assert!(check_cyclic(&tall, &v));
        assert!(!check_separating(&tall, &v));
    }

    #[test]
    fn embed_right_commutes_with_embed() {
        let spec = AlgebraSpec::new(vec![(2, 2), (1, 2)]);
        let alg = Algebra::new(spec.clone()).unwrap();
        let mut rng = crate::rng::SplitMix64::new(3);
        let y: Vec<CMat> = spec
            .blocks
            .iter()
            .map(|b| crate::rng::gaussian_matrix(b.m, b.m, &mut rng))
            .collect();
        let r = embed_right(&spec, &y);
        for u in alg.embedded_units() {
            assert!((u * &r - &r * u).norm() < 1e-12);
        }
    }

    #[test]
    fn extract_inverts_embed() {
        let spec = AlgebraSpec::new(vec![(2, 2), (3, 3)]);
        let alg = Algebra::new(spec.clone()).unwrap();
        let mut rng = crate::rng::SplitMix64::new(5);
        let x = AlgebraElement {
            blocks: spec
                .blocks
                .iter()
                .map(|b| crate::rng::gaussian_matrix(b.n, b.n, &mut rng))
                .collect(),
        };
        let (back, residual) = extract(&spec, &embed(&spec, &x));
        assert!(residual < 1e-12);
        for (a, b) in back.blocks.iter().zip(&x.blocks) {
            assert!((a - b).norm() < 1e-12);
        }
        assert_eq!(alg.dim(), 13);
    }

    #[test]
    fn reduce_by_block_identity() {
        // M_2 ⊕ M_1 with p = second block identity: compression keeps M_1 on C^m
        let spec = AlgebraSpec::new(vec![(2, 2), (1, 1)]);
        let alg = Algebra::new(spec.clone()).unwrap();
        let pat = AlgebraElement::central(&spec, &[false, true]);
        let p = embed(&spec, &pat);
        let xi = CVec::from_fn(5, |i, _| cplx(1.0 + i as f64, 0.0));
        let tol = TolerancePolicy::default();
        let red = reduce(alg.embedded_units(), &p, &xi, &tol).unwrap();
        assert_eq!(red.dim(), 1);
        // identity on p kept; M_2 units compressed to zero
        let nonzero: Vec<f64> = red.operators.iter().map(|o| o.norm()).collect();
        assert!(nonzero[..4].iter().all(|&v| v < 1e-12));
        assert!((nonzero[4] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reduce_rejects_noncommuting() {
        let spec = m2_spec();
        let alg = Algebra::new(spec.clone()).unwrap();
        let p = crate::rng::rand_projection(4, 2, 13);
        let tol = TolerancePolicy::default();
        let xi = CVec::zeros(4);
        assert!(matches!(
            reduce(alg.embedded_units(), &p, &xi, &tol),
            Err(AlgebraError::NotCommuting(_))
        ));
    }
}
