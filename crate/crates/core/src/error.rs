use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid stability datum: {0}")]
    InvalidStability(String),

    #[error("tuple is not admissible: {0} geometric factors (at most one allowed)")]
    NotAdmissible(usize),

    #[error("phase step {value} on factor {factor} is below 1")]
    InvalidPhaseStep { factor: usize, value: f64 },

    #[error("{0} is not stable for this stability condition")]
    NotStable(String),

    #[error("unsupported object: {0}")]
    UnsupportedObject(String),

    #[error("rearrangement blocked: Ext^1({upper}, {lower}) = {dim} with phases {lower_phase} < {upper_phase}")]
    RearrangementBlocked {
        lower: String,
        upper: String,
        lower_phase: f64,
        upper_phase: f64,
        dim: u64,
    },

    #[error("Hom^0({from}, {to}) = {dim} between HN factors of phases {from_phase} > {to_phase}")]
    HomVanishingFailed {
        from: String,
        to: String,
        from_phase: f64,
        to_phase: f64,
        dim: u64,
    },

    #[error("support property violated by {generator}: |Z| = {charge_norm} < C * ||v|| = {bound}")]
    SupportViolated {
        generator: String,
        charge_norm: f64,
        bound: f64,
    },

    #[error("inconsistent factor data at {index}: residual {residual:e} exceeds {tolerance:e}")]
    InconsistentData {
        index: String,
        residual: f64,
        tolerance: f64,
    },

    #[error("dimension mismatch: expected {expected} factors, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("class (0, 0) has no stability predicate")]
    ZeroClass,

    #[error("quadrature did not converge after {nodes} nodes (last change {change:e})")]
    QuadratureNotConverged { nodes: usize, change: f64 },

    #[error("flow came within the guard radius of z = 0 at {z_re} + {z_im}i without decaying")]
    FlowSingular { z_re: f64, z_im: f64 },

    #[error("Re W failed to decrease at sample {index}")]
    NonMonotone { index: usize },

    #[error("saddle tracking lost at step {step}: moved {moved:e}, separation {separation:e}")]
    TrackingLost {
        step: usize,
        moved: f64,
        separation: f64,
    },

    #[error("step size collapsed near z = {z_re} + {z_im}i")]
    StepCollapse { z_re: f64, z_im: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
