//! Linear subspaces of B(H) with algebra structure: commutants, centers,
//! minimal central projections, membership tests.

use num_complex::Complex64;

use crate::error::AlgebraError;
use crate::mat::{cluster_ascending, herm_eig, CMat, CVec, C_ZERO};
use crate::rng::{rand_hermitian_combination, SplitMix64};
use crate::tol::TolerancePolicy;

const COMMUTANT_SEED: u64 = 0x5ee0_c0de_517e_ca11;
const NULLSPACE_REL: f64 = 1e-7;

/// A subspace of dim×dim operators, stored with an orthonormal basis under
/// the trace inner product.
#[derive(Debug, Clone)]
pub struct OperatorSubspace {
    pub ambient_dim: usize,
    pub basis: Vec<CMat>,
    pub is_algebra: bool,
    pub is_selfadjoint: bool,
}

impl OperatorSubspace {
    /// Spans the given operators, orthonormalizing and dropping dependent ones.
    pub fn from_span(ops: &[CMat], ambient_dim: usize) -> Self {
        let basis = orthonormalize(ops);
        OperatorSubspace { ambient_dim, basis, is_algebra: false, is_selfadjoint: false }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Orthogonal projection of `t` onto the span; returns (member?, residual).
    pub fn is_member(&self, t: &CMat, tol: &TolerancePolicy) -> (bool, f64) {
        let mut proj = CMat::zeros(self.ambient_dim, self.ambient_dim);
        for q in &self.basis {
            let c = crate::algebra::trace_inner(t, q);
            proj += q.map(|z| z * c);
        }
        let residual = (t - proj).norm();
        (residual <= tol.eq_rel * t.norm(), residual)
    }

    /// Checks pairwise products stay in the span. Quadratic in the dimension;
    /// meant for small structured spaces.
    pub fn check_algebra(&self, tol: &TolerancePolicy) -> bool {
        for a in &self.basis {
            for b in &self.basis {
                let (ok, _) = self.is_member(&(a * b), tol);
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    pub fn check_selfadjoint(&self, tol: &TolerancePolicy) -> bool {
        self.basis.iter().all(|b| self.is_member(&b.adjoint(), tol).0)
    }

    /// The unit of the algebra (its support projection on H), solved from
    /// `u·b = b·u = b` over the span.
    pub fn unit(&self, tol: &TolerancePolicy) -> Result<CMat, AlgebraError> {
        let r = self.dim();
        let d = self.ambient_dim;
        if r == 0 {
            return Ok(CMat::zeros(d, d));
        }
        // Least squares for coefficients c: Σ c_i (Q_i B_j, B_j Q_i) = (B_j, B_j)
        let rows = 2 * r * d * d;
        let mut m = CMat::zeros(rows, r);
        let mut rhs = CVec::zeros(rows);
        for (jj, b) in self.basis.iter().enumerate() {
            for (ii, q) in self.basis.iter().enumerate() {
                let left = q * b;
                let right = b * q;
                for i in 0..d {
                    for j in 0..d {
                        let row_l = jj * 2 * d * d + i * d + j;
                        let row_r = jj * 2 * d * d + d * d + i * d + j;
                        m[(row_l, ii)] = left[(i, j)];
                        m[(row_r, ii)] = right[(i, j)];
                    }
                }
            }
            for i in 0..d {
                for j in 0..d {
                    rhs[jj * 2 * d * d + i * d + j] = b[(i, j)];
                    rhs[jj * 2 * d * d + d * d + i * d + j] = b[(i, j)];
                }
            }
        }
        let (c, residual) = crate::mat::lin_solve(&m, &rhs, tol)?;
        let scale = self.basis.iter().map(|b| b.norm()).fold(0.0, f64::max);
        if residual > tol.eq(scale) * 10.0 {
            return Err(AlgebraError::NoUnit(residual));
        }
        let mut u = CMat::zeros(d, d);
        for (i, q) in self.basis.iter().enumerate() {
            u += q.map(|z| z * c[i]);
        }
        Ok(u)
    }
}

/// Modified Gram–Schmidt under the trace inner product.
pub fn orthonormalize(ops: &[CMat]) -> Vec<CMat> {
    let mut basis: Vec<CMat> = Vec::new();
    for op in ops {
        let mut v = op.clone();
        let scale = v.norm();
        if scale == 0.0 {
            continue;
        }
        for _ in 0..2 {
            for q in &basis {
                let c = crate::algebra::trace_inner(&v, q);
                v -= q.map(|z| z * c);
            }
        }
        let n = v.norm();
        if n > 1e-10 * scale.max(1.0) {
            basis.push(v.unscale(n));
        }
    }
    basis
}

/// All operators commuting with every given operator (and their adjoints).
///
/// The result is a self-adjoint unital algebra. Starts from the commutant of
/// a generic Hermitian combination (read off its eigenspaces), then cuts by
/// every generator.
pub fn commutant(ops: &[CMat], tol: &TolerancePolicy) -> OperatorSubspace {
    assert!(!ops.is_empty(), "commutant of an empty family");
    let d = ops[0].nrows();
    let mut gens: Vec<CMat> = Vec::with_capacity(2 * ops.len());
    for o in ops {
        gens.push(o.clone());
        gens.push(o.adjoint());
    }

    let mut rng = SplitMix64::new(COMMUTANT_SEED ^ (d as u64));
    let h = rand_hermitian_combination(&gens, &mut rng);
    let mut basis: Vec<CMat> = if h.norm() < 1e-12 {
        // trivial generators: start from all of B(H)
        let mut full = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut m = CMat::zeros(d, d);
                m[(i, j)] = Complex64::new(1.0, 0.0);
                full.push(m);
            }
        }
        full
    } else {
        let eig = herm_eig(&h, tol).expect("hermitian by construction");
        let gap = tol.cluster_abs * eig.spectral_radius().max(1.0);
        let clusters = cluster_ascending(&eig.values, gap);
        let mut b = Vec::new();
        for cl in clusters {
            let cols: Vec<CVec> = cl.clone().map(|i| eig.vectors.column(i).clone_owned()).collect();
            for p in &cols {
                for q in &cols {
                    let mut m = CMat::zeros(d, d);
                    for i in 0..d {
                        for j in 0..d {
                            m[(i, j)] = p[i] * q[j].conj();
                        }
                    }
                    b.push(m);
                }
            }
        }
        b
    };

    for g in &gens {
        basis = cut_by_commutation(&basis, g);
        if basis.is_empty() {
            break;
        }
    }
    OperatorSubspace { ambient_dim: d, basis, is_algebra: true, is_selfadjoint: true }
}

/// Restricts an orthonormal family to the kernel of `T ↦ gT − Tg`.
fn cut_by_commutation(basis: &[CMat], g: &CMat) -> Vec<CMat> {
    if basis.is_empty() {
        return Vec::new();
    }
    let d = basis[0].nrows();
    let r = basis.len();
    let mut k = CMat::zeros(d * d, r);
    for (col, t) in basis.iter().enumerate() {
        let c = g * t - t * g;
        for i in 0..d {
            for j in 0..d {
                k[(i * d + j, col)] = c[(i, j)];
            }
        }
    }
    let svd = k.svd(false, true);
    let smax = svd.singular_values.iter().fold(0.0f64, |m, &s| m.max(s));
    let thresh = NULLSPACE_REL * smax.max(1.0);
    let vt = svd.v_t.expect("svd with v requested");
    debug_assert!(vt.nrows() == r, "orthonormal basis cannot exceed ambient dimension");
    let mut out = Vec::new();
    for row in 0..vt.nrows() {
        if svd.singular_values[row] <= thresh {
            let mut m = CMat::zeros(d, d);
            for (col, t) in basis.iter().enumerate() {
                let coef = vt[(row, col)].conj();
                m += t.map(|z| z * coef);
            }
            out.push(m);
        }
    }
    orthonormalize(&out)
}

pub fn double_commutant(ops: &[CMat], tol: &TolerancePolicy) -> OperatorSubspace {
    let first = commutant(ops, tol);
    commutant(&first.basis, tol)
}

/// Center `S ∩ S'`: the members of `S` commuting with all of `S`.
pub fn center(s: &OperatorSubspace, tol: &TolerancePolicy) -> OperatorSubspace {
    let mut basis = s.basis.clone();
    for g in &s.basis {
        basis = cut_by_commutation(&basis, g);
        let adj = g.adjoint();
        basis = cut_by_commutation(&basis, &adj);
        if basis.is_empty() {
            break;
        }
    }
    OperatorSubspace {
        ambient_dim: s.ambient_dim,
        basis,
        is_algebra: true,
        is_selfadjoint: s.is_selfadjoint,
    }
}

/// Mutually orthogonal minimal projections of the center, summing to the
/// unit of `S`. Spectrally splits a seeded random Hermitian central element,
/// retrying with fresh seeds on ambiguous clusterings.
pub fn minimal_central_projections(
    s: &OperatorSubspace,
    tol: &TolerancePolicy,
) -> Result<Vec<CMat>, AlgebraError> {
    let z_center = center(s, tol);
    let unit = s.unit(tol)?;
    let want = z_center.dim();
    if want == 0 {
        return Err(AlgebraError::DegenerateCenter { attempts: 0 });
    }
    let mut seed_rng = SplitMix64::new(COMMUTANT_SEED ^ 0xa11_cafe);
    for _attempt in 0..8 {
        let mut rng = seed_rng.split();
        let z = rand_hermitian_combination(&z_center.basis, &mut rng);
        let eig = match herm_eig(&z, tol) {
            Ok(e) => e,
            Err(_) => continue,
        };
        let gap = tol.cluster_abs * eig.spectral_radius().max(1.0);
        let clusters = cluster_ascending(&eig.values, gap);
        let mut projs = Vec::new();
        let mut ok = true;
        for cl in clusters {
            let mean: f64 = eig.values[cl.clone()].iter().sum::<f64>() / cl.len() as f64;
            let mut p = CMat::zeros(s.ambient_dim, s.ambient_dim);
            for i in cl {
                let v = eig.vectors.column(i);
                for a in 0..s.ambient_dim {
                    for b in 0..s.ambient_dim {
                        p[(a, b)] += v[a] * v[b].conj();
                    }
                }
            }
            // discard the kernel cluster outside the support of S
            let on_support = (&unit * &p).norm();
            if mean.abs() <= gap && on_support < tol.eq(1.0) * 10.0 {
                continue;
            }
            projs.push(p);
        }
        if projs.len() != want {
            ok = false;
        }
        if ok {
            // validate: members of the center, orthogonal, sum to the unit
            let mut sum = CMat::zeros(s.ambient_dim, s.ambient_dim);
            'validate: for (i, p) in projs.iter().enumerate() {
                if !z_center.is_member(p, tol).0 {
                    ok = false;
                    break 'validate;
                }
                for q in projs.iter().skip(i + 1) {
                    if (p * q).norm() > tol.eq(1.0) {
                        ok = false;
                        break 'validate;
                    }
                }
            }
            for p in &projs {
                sum += p;
            }
            if (sum - &unit).norm() > tol.eq(1.0) * 10.0 {
                ok = false;
            }
            if ok {
                return Ok(projs);
            }
        }
    }
    Err(AlgebraError::DegenerateCenter { attempts: 8 })
}

/// Dimension equality plus mutual basis membership.
pub fn subspace_eq(a: &OperatorSubspace, b: &OperatorSubspace, tol: &TolerancePolicy) -> bool {
    a.dim() == b.dim()
        && a.basis.iter().all(|m| b.is_member(m, tol).0)
        && b.basis.iter().all(|m| a.is_member(m, tol).0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{embed, embed_right, Algebra, AlgebraSpec};
    use crate::mat::cplx;

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    #[test]
    fn commutant_of_identity_is_everything() {
        let ops = vec![CMat::identity(2, 2)];
        let c = commutant(&ops, &tol());
        assert_eq!(c.dim(), 4);
    }

    #[test]
    fn commutant_of_full_m2_is_scalars() {
        let alg = Algebra::new(AlgebraSpec::new(vec![(2, 1)])).unwrap();
        let c = commutant(alg.embedded_units(), &tol());
        assert_eq!(c.dim(), 1);
        let (ok, _) = c.is_member(&CMat::identity(2, 2), &tol());
        assert!(ok);
    }

    #[test]
    fn commutant_of_standard_m2_is_right_multiplications() {
        let spec = AlgebraSpec::factor(2);
        let alg = Algebra::new(spec.clone()).unwrap();
        let c = commutant(alg.embedded_units(), &tol());
        assert_eq!(c.dim(), 4); // Σ m_k²
        // right multiplications are members
        for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let mut y = CMat::zeros(2, 2);
            y[(a, b)] = cplx(1.0, 0.0);
            let r = embed_right(&spec, &[y]);
            assert!(c.is_member(&r, &tol()).0);
        }
        // a right multiplication is not a member of embedded M (except scalars)
        let m_space = OperatorSubspace::from_span(alg.embedded_units(), 4);
        let mut y = CMat::zeros(2, 2);
        y[(0, 1)] = cplx(1.0, 0.0);
        let r = embed_right(&spec, &[y]);
        assert!(!m_space.is_member(&r, &tol()).0);
    }

    #[test]
    fn double_commutant_of_distinct_diagonal() {
        // one diagonal matrix with distinct entries on C³ generates the diagonals
        let d = CMat::from_diagonal(&CVec::from_vec(vec![cplx(1.0, 0.0), cplx(2.0, 0.0), cplx(5.0, 0.0)]));
        let s = double_commutant(&[d], &tol());
        assert_eq!(s.dim(), 3);
        assert!(s.is_member(&CMat::identity(3, 3), &tol()).0);
    }

    #[test]
    fn double_commutant_recovers_embedded_algebra() {
        let spec = AlgebraSpec::new(vec![(2, 2), (1, 1)]);
        let alg = Algebra::new(spec.clone()).unwrap();
        let s = double_commutant(alg.embedded_units(), &tol());
        assert_eq!(s.dim(), alg.dim());
        for u in alg.embedded_units() {
            assert!(s.is_member(u, &tol()).0);
        }
    }

    #[test]
    fn center_of_full_matrix_algebra_is_scalars() {
        let alg = Algebra::new(AlgebraSpec::new(vec![(2, 1)])).unwrap();
        let s = OperatorSubspace {
            ambient_dim: 2,
            basis: orthonormalize(alg.embedded_units()),
            is_algebra: true,
            is_selfadjoint: true,
        };
        let z = center(&s, &tol());
        assert_eq!(z.dim(), 1);
    }

    #[test]
    fn center_of_diagonal_algebra_is_itself() {
        let mut basis = Vec::new();
        for i in 0..3 {
            let mut m = CMat::zeros(3, 3);
            m[(i, i)] = cplx(1.0, 0.0);
            basis.push(m);
        }
        let s = OperatorSubspace { ambient_dim: 3, basis, is_algebra: true, is_selfadjoint: true };
        let z = center(&s, &tol());
        assert_eq!(z.dim(), 3);
    }

    #[test]
    fn center_of_two_block_algebra() {
        let spec = AlgebraSpec::new(vec![(2, 1), (1, 1)]);
        let alg = Algebra::new(spec.clone()).unwrap();
        let s = OperatorSubspace {
            ambient_dim: 3,
            basis: orthonormalize(alg.embedded_units()),
            is_algebra: true,
            is_selfadjoint: true,
        };
        let z = center(&s, &tol());
        assert_eq!(z.dim(), 2);
        for k in 0..2 {
            let pat: Vec<bool> = (0..2).map(|i| i == k).collect();
            let p = embed(&spec, &crate::algebra::AlgebraElement::central(&spec, &pat));
            assert!(z.is_member(&p, &tol()).0);
        }
    }

    #[test]
    fn minimal_central_projections_of_blocks() {
        let spec = AlgebraSpec::new(vec![(2, 1), (1, 1)]);
        let alg = Algebra::new(spec.clone()).unwrap();
        let s = OperatorSubspace {
            ambient_dim: 3,
            basis: orthonormalize(alg.embedded_units()),
            is_algebra: true,
            is_selfadjoint: true,
        };
        let ps = minimal_central_projections(&s, &tol()).unwrap();
        assert_eq!(ps.len(), 2);
        let mut sum = CMat::zeros(3, 3);
        for p in &ps {
            assert!((p * p - p).norm() < 1e-9);
            sum += p;
        }
        assert!((sum - CMat::identity(3, 3)).norm() < 1e-9);
    }

    #[test]
    fn minimal_central_projections_full_algebra() {
        let alg = Algebra::new(AlgebraSpec::new(vec![(2, 1)])).unwrap();
        let s = OperatorSubspace {
            ambient_dim: 2,
            basis: orthonormalize(alg.embedded_units()),
            is_algebra: true,
            is_selfadjoint: true,
        };
        let ps = minimal_central_projections(&s, &tol()).unwrap();
        assert_eq!(ps.len(), 1);
        assert!((&ps[0] - CMat::identity(2, 2)).norm() < 1e-9);
    }

    #[test]
    fn diagonal_algebra_has_three_coordinate_projections() {
        let mut basis = Vec::new();
        for i in 0..3 {
            let mut m = CMat::zeros(3, 3);
            m[(i, i)] = cplx(1.0, 0.0);
            basis.push(m);
        }
        let s = OperatorSubspace { ambient_dim: 3, basis, is_algebra: true, is_selfadjoint: true };
        let ps = minimal_central_projections(&s, &tol()).unwrap();
        assert_eq!(ps.len(), 3);
        for p in &ps {
            let tr = crate::algebra::trace(p);
            assert!((tr.re - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn is_member_basics() {
        let spec = AlgebraSpec::factor(2);
        let alg = Algebra::new(spec).unwrap();
        let s = OperatorSubspace {
            ambient_dim: 4,
            basis: orthonormalize(alg.embedded_units()),
            is_algebra: true,
            is_selfadjoint: true,
        };
        let (ok, r) = s.is_member(&s.basis[0].clone(), &tol());
        assert!(ok && r < 1e-13);
    }

    #[test]
    fn triple_commutant_equals_single() {
        for seed in 0..10u64 {
            let mut rng = SplitMix64::new(900 + seed);
            let d = 3 + (seed % 3) as usize;
            let a = crate::rng::gaussian_matrix(d, d, &mut rng);
            let once = commutant(&[a.clone()], &tol());
            let thrice = commutant(&commutant(&once.basis, &tol()).basis, &tol());
            assert!(subspace_eq(&once, &thrice, &tol()), "seed {seed}");
        }
    }
}
