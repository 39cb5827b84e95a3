//! Error types, one enum per subsystem.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MatError {
    #[error("matrix is not Hermitian: symmetry residual {residual:.3e} exceeds {tolerance:.3e}")]
    NotHermitian { residual: f64, tolerance: f64 },
    #[error("linear system is ill-conditioned: condition estimate {cond:.3e} exceeds {max:.3e}")]
    IllConditioned { cond: f64, max: f64 },
    #[error("operator is singular within tolerance (smallest singular value {sigma_min:.3e})")]
    Singular { sigma_min: f64 },
    #[error("eigenvalue iteration failed to converge")]
    EigFailed,
    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },
    #[error("non-finite entry encountered")]
    NonFinite,
}

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("dimension cap exceeded: dim H = {dim} > {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("center clustering ambiguous after {attempts} attempts")]
    DegenerateCenter { attempts: usize },
    #[error("projection does not commute with the algebra (residual {0:.3e})")]
    NotCommuting(f64),
    #[error("subspace has no unit (residual {0:.3e})")]
    NoUnit(f64),
    #[error(transparent)]
    Mat(#[from] MatError),
}

#[derive(Debug, Error)]
pub enum ModularError {
    #[error("vector is not cyclic and separating: {0}")]
    NotCyclicSeparating(String),
    #[error("modular flow left the algebra (membership residual {0:.3e})")]
    NotInvariant(f64),
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Error)]
pub enum ConeError {
    #[error("vector is not in the cone (floor {floor:.3e}, herm residual {herm:.3e})")]
    NotInCone { floor: f64, herm: f64 },
    #[error("vector is not projective (residual {0:.3e})")]
    NotProjective(f64),
    #[error("representing operator is not Hermitian (residual {0:.3e})")]
    NotHermitianRep(f64),
    #[error("no representing operator within tolerance (residual {0:.3e})")]
    NotRepresentable(f64),
    #[error("order-route and operator-route checks disagree: {0}")]
    RouteConflict(String),
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Modular(#[from] ModularError),
}

#[derive(Debug, Error)]
pub enum FeasibilityError {
    #[error("ambient dimensions disagree: {0}")]
    ShapeMismatch(String),
    #[error(transparent)]
    Mat(#[from] MatError),
}

#[derive(Debug, Error)]
pub enum EmbedError {
    #[error("representation is not a *-homomorphism (residual {0:.3e})")]
    BadRepresentation(f64),
    #[error("a minimal central summand is neither multiplicative nor antimultiplicative (block {block}, residuals {mult:.3e} / {anti:.3e})")]
    UnclassifiableBlock { block: usize, mult: f64, anti: f64 },
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("lemma violated: proper inclusion with common cyclic separating vector (dims {0} < {1})")]
    LemmaViolated(usize, usize),
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Modular(#[from] ModularError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Feasibility(#[from] FeasibilityError),
}

#[derive(Debug, Error)]
pub enum RecoveryError {
    #[error("projection is not central: {0}")]
    NotCentral(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("conditions passed but assembly is inconsistent: {0}")]
    ReconstructionFailed(String),
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Cone(#[from] ConeError),
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error("unknown label: {0}")]
    UnknownLabel(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Modular(#[from] ModularError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error(transparent)]
    Recovery(#[from] RecoveryError),
}
