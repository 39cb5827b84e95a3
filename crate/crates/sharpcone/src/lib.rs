//! Finite-dimensional realization of the order, cone and Jordan structure of
//! matrix *-algebras in standard position: modular data from a cyclic
//! separating vector, the positive cone `M₊ξ0` with its order and Jordan
//! operations, splitting of cone-induced positive maps into homomorphic and
//! antihomomorphic parts, and detection/recovery of projections from cone
//! data. Every structural statement is backed by seeded numerical suites.

pub mod algebra;
pub mod cone;
pub mod embedding;
pub mod error;
pub mod feasibility;
pub mod mat;
pub mod modular;
pub mod recovery;
pub mod report;
pub mod rng;
pub mod run;
pub mod scenario;
pub mod subspace;
pub mod tol;

pub use algebra::{Algebra, AlgebraElement, AlgebraSpec, StateVector};
pub use mat::{AntilinearOp, CMat, CVec};
pub use tol::TolerancePolicy;
