//! Two-input production functions viewed as graph surfaces in R³.
//!
//! The crate evaluates a production function together with its first and
//! second partial derivatives ([`Jet2`]), turns that record into the
//! fundamental forms of the Monge patch `(u, v, f(u, v))`, and reads off
//! Gaussian and mean curvature. Closed-form curvature expressions for the
//! VES and Kadiyala families live in [`curvature`]; [`harness`] provides grid
//! sweeps, seeded parameter sampling, a finite-difference oracle and the
//! randomized returns-to-scale verification runs.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod autodiff;
pub mod curvature;
mod error;
pub mod harness;
pub mod models;
pub mod surface;

pub use autodiff::Jet2;
pub use curvature::{
    DevelopabilityReason, DevelopabilityVerdict, ReturnsToScale, Theorem1Prediction,
};
pub use error::{Error, Result};
pub use harness::grid::{GridSpec, Spacing};
pub use harness::report::{GridReport, ReportFormat};
pub use models::{DomainMode, HeightField, KadiyalaParams, Model, VesParams};
pub use surface::{CurvatureReport, FundamentalForms, SignClass};
