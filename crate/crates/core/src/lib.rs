//! Teichmüller–Randers geometry at desk scale.
//!
//! Two layers live here:
//!
//! * exact formulas on the upper half-plane, which is simultaneously the
//!   Teichmüller space of the torus and the model for every Teichmüller disc
//!   ([`halfplane`], [`weakmetric`], [`torus`]);
//! * a finite-dimensional model of the infinitesimal theory: quadratic
//!   differentials with the L¹ norm, Beltrami differentials with the L∞ norm,
//!   the Teichmüller dual norm, and its Randers deformation ([`modelspace`],
//!   [`randers`]).
//!
//! [`verify`] bundles every property suite into reports with deterministic
//! seeds; the `trm` binary is a thin front end over it.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod halfplane;
pub mod literal;
pub mod modelspace;
pub mod quadrature;
pub mod randers;
pub mod sampling;
pub mod tolerances;
pub mod torus;
pub mod verify;
pub mod weakmetric;

pub use error::{Error, Result};
pub use halfplane::{Boundary, HPoint, HTangent, Moebius};
pub use modelspace::{ModelBeltrami, ModelQD, ModelSpace};
pub use randers::RandersForm;
pub use tolerances::Tolerances;
pub use torus::{FoliationVec, RayReport, Verdict};
pub use weakmetric::WeightParam;

pub use num_complex::Complex64;
