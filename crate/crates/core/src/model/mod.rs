//! Mechanics of the prestressed bistable ribbon (hair-clip mechanism):
//! buckled mode shape, lateral displacement, critical load, energy
//! barrier, actuation torque, snap timescale, and the HCM-side frequency
//! cap.
//!
//! All functions are pure over immutable value types.

mod geometry;
mod material;
mod mechanics;
mod mode_shape;

pub use geometry::{section_split, Geometry};
pub use material::MaterialSpec;
pub use mechanics::{
    actuation_torque, critical_load, energy_barrier, evaluate_chain, hcm_frequency_cap,
    snap_timescale, HcmDerived, PcrModel,
};
pub use mode_shape::{resolve_mode_shape, ClosureSpec, ClosureTag, ModeShape, SHAPE_CONSTANT};

use crate::numerics::NumericsError;
use thiserror::Error;

/// Errors from the mechanics chain.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum ModelError {
    /// An input violated a type invariant (non-positive dimension, D >= l, ...).
    #[error("validation error: {0}")]
    Validation(String),
    /// An evaluation point fell outside the model's domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// The resolved shape cannot transmit actuation (A1 = 0 or L1 = 0).
    #[error("degenerate shape: {0}")]
    DegenerateShape(String),
    /// A numeric routine underneath failed.
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

impl ModelError {
    /// True for failures of the numeric machinery (as opposed to input
    /// validation); drives the CLI exit-code split.
    pub fn is_numeric(&self) -> bool {
        match self {
            ModelError::Validation(_) | ModelError::Domain(_) => false,
            ModelError::DegenerateShape(_) => true,
            ModelError::Numerics(e) => {
                !matches!(e, NumericsError::Domain(_))
            }
        }
    }
}
