//! Principal configurations of tridimensional ellipsoids in R⁴.
//!
//! Computes, for every degeneracy pattern of the four semi-axes:
//!
//! - principal curvatures and direction fields (chart pencil and ambient
//!   shape-operator routes),
//! - umbilic points and partially umbilic curves, with verification reports,
//! - the triply orthogonal confocal coordinate system and its quartic slices,
//! - numerically integrated principal curvature lines with closed-leaf
//!   detection and slice confinement,
//! - conformal principal charts built from arclength integrals,
//! - linking numbers of the singular curves on the 3-sphere image, by signed
//!   crossings and by the Gauss double integral.
//!
//! The `verify` module packages the full acceptance checklist consumed by the
//! CLI's `verify` subcommand.

pub mod chart;
pub mod confocal;
pub mod conformal;
pub mod cubic;
pub mod curvature;
pub mod discriminant;
pub mod error;
pub mod forms;
pub mod jet;
pub mod loci;
pub mod numerics;
pub mod quadrature;
pub mod surface;
pub mod topology;
pub mod tracer;
pub mod verify;

pub use chart::{Chart, ChartKind};
pub use curvature::{classify_point, principal_curvatures, DegeneracyTag, Frame, PrincipalData};
pub use error::{Error, Result};
pub use surface::{AxisClass, Ellipsoid4, SurfacePoint, EPS_DEG, TAU_AXIS};
