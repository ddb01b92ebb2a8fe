//! Design toolkit for servo-driven hair-clip-mechanism (HCM) compliant robots.
//!
//! A hair-clip mechanism is an in-plane prestressed bistable ribbon that
//! snaps between two stable shapes. Driven by a hobby servo, it makes a
//! compact high-frequency undulation drive for swimming robots. This crate
//! evaluates the mechanics chain for a candidate (geometry, material, servo)
//! triple and searches catalogs for feasible high-frequency designs:
//!
//! * [`numerics`] — Bessel function of the first kind of fractional order,
//!   adaptive Simpson quadrature, and root bracketing.
//! * [`model`] — buckled mode shape, lateral displacement, critical load,
//!   energy barrier, actuation torque, snap timescale, HCM frequency cap.
//! * [`drive`] — servo coupling: servo-side frequency cap, design factor,
//!   overall design frequency, speed estimate.
//! * [`catalog`] — material/servo catalogs and prototype presets, with a
//!   canonical text format.
//! * [`search`] — deterministic parameter sweeps (CSV) and exhaustive
//!   feasibility search over catalog combinations.
//! * [`report`] — JSON report documents with sorted keys.
//!
//! All quantities use the mm–tonne–second unit system: lengths in mm,
//! forces in N, torques and energies in mm·N, Young's modulus in MPa,
//! density in tonne/mm³. In this system E/ρ is directly in mm²/s², so
//! `sqrt(E/ρ)` is a wave speed in mm/s.

pub mod catalog;
pub mod drive;
pub mod fmt;
pub mod model;
pub mod numerics;
pub mod report;
pub mod search;

pub use catalog::{Catalog, CatalogError, Preset};
pub use drive::{
    design_factor, design_frequency, estimate_speed, evaluate_design, servo_frequency_cap,
    DesignEvaluation, EvalOptions, Limiting, ServoCapMode, ServoSpec, SpeedBand,
};
pub use model::{
    actuation_torque, critical_load, energy_barrier, hcm_frequency_cap, resolve_mode_shape,
    section_split, snap_timescale, ClosureSpec, Geometry, HcmDerived, MaterialSpec, ModeShape,
    ModelError, PcrModel, SHAPE_CONSTANT,
};
pub use numerics::{bessel_j, first_positive_root, integrate, NumericsError, Quadrature, Tolerance};
pub use search::{
    is_feasible, search, sweep, sweep_to_csv, GridSpec, Objective, SearchConfig, SearchError,
    SweepParam, SweepRow, SweepSpec, ThicknessRange,
};
