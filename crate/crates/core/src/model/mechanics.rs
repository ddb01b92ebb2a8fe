//! Scalar mechanics chain: critical load, energy barrier, actuation
//! torque, snap timescale, and the HCM-side frequency cap.

use super::{resolve_mode_shape, ClosureSpec, Geometry, MaterialSpec, ModeShape, ModelError};

/// How the buckling critical load P_cr is obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PcrModel {
    /// Use a measured or externally computed value (N).
    Direct { p_cr: f64 },
    /// Euler strip column: P_cr = π²·E·I / l² with I = h·t³/12.
    EulerStrip,
}

impl PcrModel {
    pub fn render(&self) -> String {
        match *self {
            PcrModel::Direct { p_cr } => format!("direct({})", crate::fmt::render_f64(p_cr)),
            PcrModel::EulerStrip => "euler_strip".to_string(),
        }
    }
}

/// Critical load of the ribbon (N).
pub fn critical_load(g: &Geometry, mat: &MaterialSpec, model: &PcrModel) -> Result<f64, ModelError> {
    g.validate()?;
    mat.validate()?;
    match *model {
        PcrModel::Direct { p_cr } => {
            if !p_cr.is_finite() || p_cr <= 0.0 {
                return Err(ModelError::Validation(format!(
                    "direct P_cr must be finite and > 0, got {p_cr}"
                )));
            }
            Ok(p_cr)
        }
        PcrModel::EulerStrip => {
            let second_moment = g.width * g.thickness.powi(3) / 12.0;
            Ok(std::f64::consts::PI.powi(2) * mat.youngs_modulus * second_moment
                / (g.half_length * g.half_length))
        }
    }
}

/// Energy barrier between the two stable states: U_barr = 3·P_cr·D (mm·N).
pub fn energy_barrier(p_cr: f64, prestress: f64) -> f64 {
    3.0 * p_cr * prestress
}

/// Maximum torque required at the servo horn to snap the ribbon (mm·N):
/// `2·U_barr·L_horn / (2·u(L1))`, i.e. `U_barr·L_horn / u(L1)` after the
/// shared factor cancels (the two renderings agree bit for bit).
pub fn actuation_torque(u_barr: f64, horn_length: f64, u_l1: f64) -> Result<f64, ModelError> {
    if !u_barr.is_finite() || u_barr <= 0.0 {
        return Err(ModelError::Validation(format!(
            "U_barr must be finite and > 0, got {u_barr}"
        )));
    }
    if !horn_length.is_finite() || horn_length <= 0.0 {
        return Err(ModelError::Validation(format!(
            "L_horn must be finite and > 0, got {horn_length}"
        )));
    }
    if u_l1 == 0.0 {
        return Err(ModelError::DegenerateShape(
            "u(L1) = 0: the resolved shape cannot transmit actuation (A1 = 0 or L1 = 0)".into(),
        ));
    }
    if !u_l1.is_finite() || u_l1 < 0.0 {
        return Err(ModelError::Validation(format!(
            "u(L1) must be finite and >= 0, got {u_l1}"
        )));
    }
    Ok(u_barr * horn_length / u_l1)
}

/// Characteristic duration of an elastic snap-through event (s):
/// t* = (2l)² / (t·sqrt(E/ρ_s)).
pub fn snap_timescale(g: &Geometry, mat: &MaterialSpec) -> Result<f64, ModelError> {
    g.validate()?;
    mat.validate()?;
    let span = 2.0 * g.half_length;
    Ok(span * span / (g.thickness * mat.specific_modulus().sqrt()))
}

/// HCM-side frequency cap: f_m,HCM = 1 / (2·t*), in Hz.
pub fn hcm_frequency_cap(t_star: f64) -> Result<f64, ModelError> {
    if !t_star.is_finite() || t_star <= 0.0 {
        return Err(ModelError::Validation(format!(
            "t_star must be finite and > 0, got {t_star}"
        )));
    }
    Ok(1.0 / (2.0 * t_star))
}

/// Every intermediate of the ribbon-side chain for one design point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HcmDerived {
    /// Critical load P_cr (N).
    pub p_cr: f64,
    /// Energy barrier U_barr = 3·P_cr·D (mm·N).
    pub u_barr: f64,
    /// Required actuation torque at the horn (mm·N).
    pub t_act: f64,
    /// Actuation-point displacement u(L1) (mm).
    pub u_l1: f64,
    /// Tip displacement u(l) (mm).
    pub u_tip: f64,
    /// Snap timescale t* (s).
    pub t_star: f64,
    /// HCM frequency cap 1/(2·t*) (Hz).
    pub f_m_hcm: f64,
}

/// Run the ribbon-side chain for one (geometry, material) pair with the
/// given closure, P_cr model, and servo horn length. Returns every
/// intermediate; fails with a degenerate-shape error when the resolved
/// shape has u(L1) = 0.
pub fn evaluate_chain(
    g: &Geometry,
    mat: &MaterialSpec,
    closure: &ClosureSpec,
    pcr_model: &PcrModel,
    horn_length: f64,
) -> Result<HcmDerived, ModelError> {
    let shape: ModeShape = resolve_mode_shape(g, closure)?;
    let l1 = g.core_length();
    let u_l1 = shape.lateral_displacement(l1)?;
    let u_tip = shape.lateral_displacement(g.half_length)?;
    let p_cr = critical_load(g, mat, pcr_model)?;
    let u_barr = energy_barrier(p_cr, g.prestress);
    let t_act = actuation_torque(u_barr, horn_length, u_l1)?;
    let t_star = snap_timescale(g, mat)?;
    let f_m_hcm = hcm_frequency_cap(t_star)?;
    Ok(HcmDerived { p_cr, u_barr, t_act, u_l1, u_tip, t_star, f_m_hcm })
}
