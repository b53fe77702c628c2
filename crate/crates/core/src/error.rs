use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("grade {0} out of range 0..=4")]
    GradeOutOfRange(usize),
    #[error("expected a pure bivector")]
    NotBivector,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiffError {
    #[error("finite-difference step must be positive and finite, got {0}")]
    BadStep(f64),
    #[error("field `{field}` evaluated to a non-finite value at {point:?}")]
    NonFinite { field: String, point: crate::sta::SpacetimePoint },
    #[error("field `{0}` is not grade-homogeneous")]
    MixedGrade(String),
    #[error("field `{0}` depends on time where a static field is required")]
    TimeDependent(String),
    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Diff(#[from] DiffError),
    #[error("field `{0}` has a magnetic part; a pure electric bivector is required")]
    NotElectric(String),
    #[error("boost speed {0} must lie in (-1, 1)")]
    Superluminal(f64),
    #[error("off-shell: omega^2 - k^2 = {got}, branch requires {expected}")]
    OffShell { got: f64, expected: f64 },
    #[error("profile {profile} does not solve the {branch} transverse Helmholtz equation")]
    ProfileMismatch { profile: &'static str, branch: &'static str },
    #[error("constant 2-form of the Hertz potential is zero")]
    ZeroTwoForm,
    #[error("mass parameter must be positive, got {0}")]
    BadMass(f64),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpinorError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Diff(#[from] DiffError),
    #[error("spinor is singular (|psi psi~| = {0:e}); no polar decomposition exists")]
    SingularSpinor(f64),
    #[error("spinor must be an even multivector")]
    NotEven,
    #[error("off-shell plane wave: the Dirac-like operator has full rank (smallest singular value {0:e})")]
    OffShell(f64),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectrumError {
    #[error("flavour index {n} exceeds N = {big_n}; the mass would be negative")]
    NegativeMass { n: i64, big_n: f64 },
    #[error("K and mg/e are both zero")]
    DegenerateInput,
    #[error("flavour set is empty")]
    EmptySet,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Diff(#[from] DiffError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Spinor(#[from] SpinorError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{path}: {source}")]
    Io { path: std::path::PathBuf, source: std::io::Error },
}
