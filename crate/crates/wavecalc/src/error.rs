//! Error type shared across the crate.
//!
//! Every operation that can leave its domain of validity reports a typed
//! error instead of returning a silently wrong field. The closed-form layer
//! is exact *because* it refuses inputs outside the term classes it can
//! handle; those refusals are the variants below.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum WaveError {
    /// A half-line Hilbert or sign-kernel transform met a term whose
    /// oscillation changes sign along some ray (|k| >= |alpha|), so no
    /// single closed-form image exists.
    #[error("term is not sign-definite along rays: {term}")]
    SignIndefiniteTerm { term: String },

    /// Closed-form Hilbert transforms act on mirror pairs of terms; this
    /// term's required partner (opposite frequency, matched coefficient)
    /// is missing from the field.
    #[error("term lacks its mirror partner required for a closed-form transform: {term}")]
    UnpairedTerm { term: String },

    /// A zero-frequency term appeared where the transform of a constant or
    /// polynomial tail is not representable in the term algebra.
    #[error("zero-frequency term has no closed-form image under this transform: {term}")]
    ZeroFrequencyTerm { term: String },

    /// Products and repeated gradients can push the direction-monomial
    /// degree past what the algebra tracks (degree 2).
    #[error("direction-monomial degree {degree} exceeds the supported maximum of 2")]
    MonomialDegreeTooHigh { degree: u32 },

    /// Sampling at the origin requires the 1/r parts to cancel; they did not.
    #[error("field has a non-removable singularity at the origin: {detail}")]
    NonRemovableSingularity { detail: String },

    /// Radial operators (dilation, half-line Hilbert, multiplication by r)
    /// are anchored at the coordinate origin and cannot act on a field whose
    /// center has been translated away from it.
    #[error("operator `{op}` requires an origin-centered field")]
    OffCenterField { op: &'static str },

    /// The linear solve for the inverse dilation found no consistent
    /// preimage in the candidate term space.
    #[error("inverse dilation solve is inconsistent (residual {residual:.3e})")]
    InverseDilationInconsistent { residual: f64 },

    /// Relativistic packet parameters need |v| < c.
    #[error("speed {speed} is not below the light speed {c}; relativistic packet undefined")]
    SuperluminalRelativistic { speed: f64, c: f64 },

    /// A tapered oscillatory quadrature failed its own consistency check
    /// (refinement and extrapolation disagree beyond any useful tolerance).
    #[error("quadrature failed to converge: {detail}")]
    QuadratureDivergence { detail: String },

    /// The inverse dilation integral ∫₀^r f dt requires f to be integrable
    /// at the origin along every ray.
    #[error("field is not integrable at the origin: {detail}")]
    NonIntegrableOrigin { detail: String },

    /// An angular finite-difference error estimate exceeded its budget,
    /// so gradient-based operator output would be unreliable.
    #[error("angular resolution insufficient: estimated error {estimate:.3e} exceeds budget {budget:.3e}")]
    AngularResolutionInsufficient { estimate: f64, budget: f64 },

    /// A dense eigensolve did not converge.
    #[error("eigenvalue solver failed: {detail}")]
    EigenSolverFailure { detail: String },

    /// The standard inner product of two identical-velocity packets is a
    /// divergent delta-normalized quantity, not a number.
    #[error("inner product diverges for coinciding momenta (p = p'); only distinct velocities give a finite value")]
    DivergentProduct,

    /// The propagation grid cannot represent the packet's top frequency.
    #[error("grid Nyquist wavenumber {available:.3} is below the required {required:.3}")]
    NyquistViolation { required: f64, available: f64 },

    /// The tracked core region would leave the (windowed) periodic box
    /// before the final time, invalidating every metric after that.
    #[error("moving core region exits the usable box at t = {time:.3}")]
    CoreExitedBox { time: f64 },

    /// Two grids that must match (for pointwise field arithmetic) do not.
    #[error("fields live on different grids")]
    GridMismatch,

    /// Parameter validation failure (non-positive mass, empty grid, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, WaveError>;
