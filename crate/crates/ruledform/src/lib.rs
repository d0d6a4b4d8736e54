//! Ruled hypersurfaces in the nonflat complex space forms CP² and CH²,
//! built by erecting a perpendicular complex projective line over each
//! point of a plane curve, together with numerical verification of the
//! closed-form geometry: shape operators, principal curvatures, spine
//! curvature, the two-parameter isometry actions, and the common point
//! shared by all extended rulings.

pub mod ambient;
pub mod cli;
pub mod curves;
pub mod error;
pub mod groups;
pub mod ruled;
pub mod sample;
pub mod svg;
pub mod verify;

pub use ambient::{coincide_residual, AmbientConfig, CVec, ProjPoint, C64};
pub use curves::{CurveEval, CurveFamily, FamilyKind, GeneralCurve, PlaneCurve};
pub use error::{GeomError, Result};
pub use ruled::{FrameAtPoint, HyperPoint, ShapeData};
pub use verify::{CheckRecord, FdConfig, FdScheme, Tolerances, VerifyReport};
