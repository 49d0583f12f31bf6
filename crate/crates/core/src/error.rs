use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("cluster has no bodies")]
    EmptyCluster,

    #[error("bodies {first} and {second} overlap or touch (boundary distance {distance:e})")]
    OverlappingBodies {
        first: usize,
        second: usize,
        distance: f64,
    },

    #[error("body {index}: {reason}")]
    InvalidBody { index: usize, reason: String },

    #[error("bodies do not fit in a ball of diameter {domain_diameter} (need {required})")]
    DomainTooSmall { domain_diameter: f64, required: f64 },

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("degenerate mesh: panel {panel} has area {area:e} (mean {mean:e})")]
    DegenerateMesh { panel: usize, area: f64, mean: f64 },

    #[error("points coincide: |x - y| = {distance:e} is below the floor {floor:e}")]
    CoincidentPoints { distance: f64, floor: f64 },

    #[error("wavenumber must satisfy Im k >= 0, got Im k = {0}")]
    InvalidWavenumber(f64),

    #[error("invalid plane wave: {0}")]
    InvalidPlaneWave(String),

    #[error("boundary operator solve failed on the mean-zero subspace (residual {residual:e})")]
    SingularOperator { residual: f64 },

    #[error("tensor {index} has the wrong sign: {which} eigenvalue {eigenvalue:e}")]
    WrongSignTensor {
        index: usize,
        which: &'static str,
        eigenvalue: f64,
    },

    #[error("expected {expected} body tensors, got {found}")]
    TensorCountMismatch { expected: usize, found: usize },

    #[error("Foldy system is singular (pivot {pivot:e})")]
    SingularSystem { pivot: f64 },

    #[error("direct solve limited to {cap} bodies, cluster has {bodies}")]
    CapExceeded { bodies: usize, cap: usize },

    #[error("Neumann iteration did not converge in {iterations} iterations (last relative increment {increment:e})")]
    NoConvergence { iterations: usize, increment: f64 },

    #[error("Neumann iteration diverged after {iterations} iterations (relative increment {increment:e})")]
    Divergence { iterations: usize, increment: f64 },

    #[error("far-field pattern requires a real wavenumber (Im k = 0), got Im k = {0}")]
    ComplexWavenumberFarField(f64),

    #[error("observation point {point} coincides with the center of body {body}")]
    CoincidentWithCenter { point: usize, body: usize },

    #[error("size parameter ka = {ka} exceeds the dipole-mode limit 0.2")]
    SizeParameterTooLarge { ka: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
