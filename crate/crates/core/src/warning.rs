use core::fmt;

/// Non-fatal diagnostics collected while running a computation.
#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// `C_Li <= 0`: the sufficient invertibility condition fails.
    InvertibilityCondition { c_li: f64 },
    /// `C_L2i <= 0`: the Neumann-series contraction estimate is not below one.
    ContractionEstimate { estimate: f64 },
    /// The regime left-hand side exceeds the configured threshold.
    RegimeThreshold { value: f64, threshold: f64 },
    /// A solution violates `||(A,B)|| <= eps^3 ||E|| / (C_Li mu-)`.
    NormBound { lhs: f64, rhs: f64 },
    /// Constants evaluated with `|k|` for a complex wavenumber.
    HeuristicConstants { im_k: f64 },
    /// Near-field point closer to the cluster than `delta`.
    NearFieldTooClose { point: usize, distance: f64, delta: f64 },
    /// Symmetrization of a boundary-element tensor removed a visible asymmetry.
    TensorAsymmetry { body: usize, asymmetry: f64 },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::InvertibilityCondition { c_li } => {
                write!(f, "invertibility condition fails: C_Li = {c_li:e} <= 0")
            }
            Warning::ContractionEstimate { estimate } => write!(
                f,
                "Neumann contraction estimate {estimate:e} >= 1; the series may diverge"
            ),
            Warning::RegimeThreshold { value, threshold } => write!(
                f,
                "regime value {value:e} exceeds threshold {threshold:e}"
            ),
            Warning::NormBound { lhs, rhs } => {
                write!(f, "solution norm {lhs:e} exceeds the a priori bound {rhs:e}")
            }
            Warning::HeuristicConstants { im_k } => write!(
                f,
                "Im k = {im_k} > 0: constants evaluated with |k| are heuristic"
            ),
            Warning::NearFieldTooClose {
                point,
                distance,
                delta,
            } => write!(
                f,
                "near-field point {point} lies {distance:e} from the cluster, closer than delta = {delta:e}"
            ),
            Warning::TensorAsymmetry { body, asymmetry } => write!(
                f,
                "body {body}: tensor asymmetry {asymmetry:e} removed by symmetrization"
            ),
        }
    }
}
