//! Errors shared by the geometry, tracing and topology modules.

/// Errors that can occur anywhere in the library.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Semi-axes must be strictly positive and finite.
    BadAxes(String),
    /// Chart parameters outside the chart's open domain.
    DomainViolation(String),
    /// Chart tangent vectors degenerate (Gram determinant below threshold).
    SingularChart { gram_det: f64 },
    /// Ambient point does not satisfy the defining equation.
    OffSurface { residual: f64 },
    /// Requested a direction attached to a non-simple principal curvature.
    DegenerateDirection {
        tag: crate::curvature::DegeneracyTag,
    },
    /// Confocal inversion needs all four coordinates away from zero.
    OnCoordinateHyperplane { min_abs_coord: f64 },
    /// Operation requires a surface of a specific axis-degeneracy class.
    WrongAxisClass {
        expected: &'static str,
        got: crate::surface::AxisClass,
    },
    /// Cubic must be normalized to unit constant term first.
    NotNormalized,
    /// Slice parameter λ coincides with a squared semi-axis.
    PoleContact { lambda: f64 },
    /// Slice parameter lies in the torus interval where the two-sphere
    /// conformal construction does not apply.
    WrongSignature { lambda: f64 },
    /// Arclength integrand failed its integrability audit.
    DivergentIntegral(String),
    /// Trace seed sits where the requested field is undefined.
    SeedDegenerate { gap: f64 },
    /// Curves approach each other too closely for linking computation.
    CurvesTooClose { min_distance: f64 },
    /// No projection direction produced a generic crossing diagram.
    NonGenericProjection { attempts: usize },
    /// No stereographic pole far enough from every curve sample.
    NoValidPole { best_distance: f64 },
    /// I/O error surfaced through the CLI layer.
    Io(String),
}

impl std::fmt::Display for Error {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Error::BadAxes(msg) => write!(f, "bad semi-axes: {msg}"),
            Error::DomainViolation(msg) => write!(f, "chart domain violation: {msg}"),
            Error::SingularChart { gram_det } => {
                write!(f, "singular chart point (Gram determinant {gram_det:.3e})")
            }
            Error::OffSurface { residual } => {
                write!(f, "point off the surface (|Q - 1| = {residual:.3e})")
            }
            Error::DegenerateDirection { tag } => {
                write!(f, "principal direction undefined at a {tag:?} point")
            }
            Error::OnCoordinateHyperplane { min_abs_coord } => write!(
                f,
                "point too close to a coordinate hyperplane (min |x_i| = {min_abs_coord:.3e})"
            ),
            Error::WrongAxisClass { expected, got } => {
                write!(f, "operation requires {expected}, surface is {got:?}")
            }
            Error::NotNormalized => write!(f, "cubic is not normalized to unit constant term"),
            Error::PoleContact { lambda } => {
                write!(f, "slice parameter {lambda} equals a squared semi-axis")
            }
            Error::WrongSignature { lambda } => write!(
                f,
                "slice parameter {lambda} lies in the torus interval; no rectangle chart exists"
            ),
            Error::DivergentIntegral(msg) => write!(f, "divergent arclength integral: {msg}"),
            Error::SeedDegenerate { gap } => {
                write!(
                    f,
                    "trace seed degenerate (relative curvature gap {gap:.3e})"
                )
            }
            Error::CurvesTooClose { min_distance } => {
                write!(
                    f,
                    "curves too close for linking (min distance {min_distance:.3e})"
                )
            }
            Error::NonGenericProjection { attempts } => {
                write!(f, "no generic projection after {attempts} attempts")
            }
            Error::NoValidPole { best_distance } => {
                write!(
                    f,
                    "no valid stereographic pole (best clearance {best_distance:.3e})"
                )
            }
            Error::Io(msg) => write!(f, "i/o: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
