//! Servo coupling: servo-side frequency cap, design factor, overall
//! design frequency, speed estimate, and the assembled design evaluation.

use crate::model::{
    evaluate_chain, ClosureSpec, Geometry, HcmDerived, MaterialSpec, ModelError, PcrModel,
};

/// A hobby servo, per its datasheet.
#[derive(Debug, Clone, PartialEq)]
pub struct ServoSpec {
    pub name: String,
    /// Stall torque T_servo (mm·N), taken as the torque capacity.
    pub stall_torque: f64,
    /// No-load angular speed (rad/s).
    pub speed: f64,
    /// Servo weight (g).
    pub weight: f64,
    /// Horn length L_horn (mm).
    pub horn_length: f64,
    /// Datasheet frequency cap f_m,servo (Hz), used in reference cap mode.
    pub f_ref: f64,
}

impl ServoSpec {
    pub fn new(
        name: impl Into<String>,
        stall_torque: f64,
        speed: f64,
        weight: f64,
        horn_length: f64,
        f_ref: f64,
    ) -> Result<Self, ModelError> {
        let s = ServoSpec { name: name.into(), stall_torque, speed, weight, horn_length, f_ref };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.name.is_empty() {
            return Err(ModelError::Validation("servo name must not be empty".into()));
        }
        for (field, v) in [
            ("T_servo", self.stall_torque),
            ("speed", self.speed),
            ("weight", self.weight),
            ("L_horn", self.horn_length),
            ("f_ref", self.f_ref),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(ModelError::Validation(format!(
                    "servos.{}.{field} must be finite and > 0, got {v}",
                    self.name
                )));
            }
        }
        Ok(())
    }
}

/// How the servo-side frequency cap is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ServoCapMode {
    /// Horn-tip linear speed over the per-period stroke travel:
    /// `speed·L_horn / (4·u(L1))`.
    Dimensional,
    /// Use the datasheet f_ref column verbatim.
    Reference,
}

impl ServoCapMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ServoCapMode::Dimensional => "dimensional",
            ServoCapMode::Reference => "reference",
        }
    }
}

/// Servo-side frequency cap (Hz) from the horn-tip linear speed
/// `speed·L_horn` divided by the per-period stroke travel `4·u(L1)`.
pub fn servo_frequency_cap(servo: &ServoSpec, u_l1: f64) -> Result<f64, ModelError> {
    servo.validate()?;
    if u_l1 == 0.0 {
        return Err(ModelError::DegenerateShape(
            "u(L1) = 0: servo stroke is undefined for a flat shape".into(),
        ));
    }
    if !u_l1.is_finite() || u_l1 < 0.0 {
        return Err(ModelError::Validation(format!(
            "u(L1) must be finite and >= 0, got {u_l1}"
        )));
    }
    Ok(servo.speed * servo.horn_length / (4.0 * u_l1))
}

/// Design factor α = T_servo / T_act; feasible designs want α above a
/// threshold (1.0 by default).
pub fn design_factor(t_servo: f64, t_act: f64) -> f64 {
    t_servo / t_act
}

/// Which side limits the design frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Limiting {
    Hcm,
    Servo,
}

impl Limiting {
    pub fn as_str(&self) -> &'static str {
        match self {
            Limiting::Hcm => "hcm",
            Limiting::Servo => "servo",
        }
    }
}

/// Overall design frequency: the smaller of the HCM and servo caps. An
/// exact tie reports the servo as limiting (the servo is the swappable
/// component, so that flag is the actionable one).
pub fn design_frequency(f_hcm: f64, f_servo: f64) -> (f64, Limiting) {
    if f_servo <= f_hcm {
        (f_servo, Limiting::Servo)
    } else {
        (f_hcm, Limiting::Hcm)
    }
}

/// Default speed band in body lengths per beat.
pub const DEFAULT_BPB_LO: f64 = 0.34;
pub const DEFAULT_BPB_HI: f64 = 0.54;

/// Swimming-speed band in body lengths per second, together with the
/// per-beat coefficients that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedBand {
    /// Lower speed estimate (BL/s).
    pub lo: f64,
    /// Upper speed estimate (BL/s).
    pub hi: f64,
    /// Lower bound in BL per beat.
    pub bpb_lo: f64,
    /// Upper bound in BL per beat.
    pub bpb_hi: f64,
}

/// Estimate the swimming-speed band at undulation frequency `f` (Hz).
/// A beat is a half undulation period, so there are `2·f` beats per
/// second: speed = 2·f·(BL/beat).
pub fn estimate_speed(f: f64, bpb_lo: f64, bpb_hi: f64) -> Result<SpeedBand, ModelError> {
    if !f.is_finite() || f < 0.0 {
        return Err(ModelError::Validation(format!(
            "frequency must be finite and >= 0, got {f}"
        )));
    }
    if !(bpb_lo.is_finite() && bpb_hi.is_finite() && 0.0 <= bpb_lo && bpb_lo <= bpb_hi) {
        return Err(ModelError::Validation(format!(
            "speed band coefficients must satisfy 0 <= lo <= hi, got [{bpb_lo}, {bpb_hi}]"
        )));
    }
    Ok(SpeedBand { lo: 2.0 * f * bpb_lo, hi: 2.0 * f * bpb_hi, bpb_lo, bpb_hi })
}

/// Options for a full design evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalOptions {
    pub closure: ClosureSpec,
    pub pcr: PcrModel,
    pub servo_cap: ServoCapMode,
    /// Feasibility threshold on the design factor.
    pub alpha_min: f64,
    pub bpb_lo: f64,
    pub bpb_hi: f64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            closure: ClosureSpec::end_shortening_default(),
            pcr: PcrModel::EulerStrip,
            servo_cap: ServoCapMode::Dimensional,
            alpha_min: 1.0,
            bpb_lo: DEFAULT_BPB_LO,
            bpb_hi: DEFAULT_BPB_HI,
        }
    }
}

impl EvalOptions {
    pub fn validate(&self) -> Result<(), ModelError> {
        self.closure.validate()?;
        if !self.alpha_min.is_finite() || self.alpha_min <= 0.0 {
            return Err(ModelError::Validation(format!(
                "alpha_min must be finite and > 0, got {}",
                self.alpha_min
            )));
        }
        Ok(())
    }
}

/// The full derived chain for one (geometry, material, servo) triple.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignEvaluation {
    pub geometry: Geometry,
    pub material: String,
    pub servo: String,
    pub hcm: HcmDerived,
    /// Design factor α = T_servo / T_act.
    pub alpha: f64,
    /// Whether α met the configured threshold (an infeasible design is
    /// still reported, not an error).
    pub alpha_feasible: bool,
    /// Servo-side frequency cap (Hz).
    pub f_m_servo: f64,
    /// Overall design frequency min(f_m_hcm, f_m_servo) (Hz).
    pub f_design: f64,
    pub limiting: Limiting,
    /// Speed band at f_design.
    pub speed_band: SpeedBand,
    /// Ribbon mass plus servo weight (g); carried through to reports and
    /// used as a search tiebreaker, not by the mechanics itself.
    pub moving_mass_g: f64,
}

/// Ribbon mass (both halves, t·h·2l·ρ_s tonnes) plus servo weight, in g.
pub fn moving_mass_g(g: &Geometry, mat: &MaterialSpec, servo: &ServoSpec) -> f64 {
    g.thickness * g.width * 2.0 * g.half_length * mat.density * 1e6 + servo.weight
}

/// Run the full chain: section split, mode shape, displacements, critical
/// load, energy barrier, actuation torque, design factor, snap timescale,
/// both frequency caps, design frequency, and the speed band.
pub fn evaluate_design(
    g: &Geometry,
    mat: &MaterialSpec,
    servo: &ServoSpec,
    opts: &EvalOptions,
) -> Result<DesignEvaluation, ModelError> {
    opts.validate()?;
    servo.validate()?;
    let hcm = evaluate_chain(g, mat, &opts.closure, &opts.pcr, servo.horn_length)?;
    let alpha = design_factor(servo.stall_torque, hcm.t_act);
    let f_m_servo = match opts.servo_cap {
        ServoCapMode::Dimensional => servo_frequency_cap(servo, hcm.u_l1)?,
        ServoCapMode::Reference => servo.f_ref,
    };
    let (f_design, limiting) = design_frequency(hcm.f_m_hcm, f_m_servo);
    let speed_band = estimate_speed(f_design, opts.bpb_lo, opts.bpb_hi)?;
    Ok(DesignEvaluation {
        geometry: *g,
        material: mat.name.clone(),
        servo: servo.name.clone(),
        hcm,
        alpha,
        alpha_feasible: alpha >= opts.alpha_min,
        f_m_servo,
        f_design,
        limiting,
        speed_band,
        moving_mass_g: moving_mass_g(g, mat, servo),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn a66bhlw() -> ServoSpec {
        ServoSpec::new("A66BHLW", 3234.0, 15.4, 66.0, 25.0, 13.6).unwrap()
    }

    fn mg90s() -> ServoSpec {
        ServoSpec::new("MG90S", 245.0, 10.5, 14.0, 10.0, 4.5).unwrap()
    }

    fn cfrp() -> MaterialSpec {
        MaterialSpec::new("CFRP", 64e3, 1.6e-9, Some(40e12), vec![0.5, 0.79]).unwrap()
    }

    fn petg() -> MaterialSpec {
        MaterialSpec::new("PETG", 1.7e3, 1.25e-9, Some(1.42e12), vec![0.381, 0.762]).unwrap()
    }

    #[test]
    fn servo_cap_arithmetic() {
        // 15.4·25 / (4·7) = 13.75 Hz
        let s = ServoSpec::new("S", 100.0, 15.4, 10.0, 25.0, 1.0).unwrap();
        assert_eq!(servo_frequency_cap(&s, 7.0).unwrap(), 13.75);
        // doubling the stroke halves the cap
        assert_eq!(
            servo_frequency_cap(&s, 14.0).unwrap(),
            0.5 * servo_frequency_cap(&s, 7.0).unwrap()
        );
    }

    #[test]
    fn servo_cap_degenerate_stroke() {
        assert!(matches!(
            servo_frequency_cap(&a66bhlw(), 0.0),
            Err(ModelError::DegenerateShape(_))
        ));
    }

    #[test]
    fn design_factor_reference_points() {
        assert_abs_diff_eq!(design_factor(245.0, 188.7), 1.30, epsilon = 0.01);
        assert_abs_diff_eq!(design_factor(3234.0, 1177.0), 2.75, epsilon = 0.01);
        assert_eq!(design_factor(42.0, 42.0), 1.0);
    }

    #[test]
    fn design_factor_scale_invariant() {
        for k in [0.5, 2.0, 117.3] {
            assert_relative_eq!(
                design_factor(245.0 * k, 188.7 * k),
                design_factor(245.0, 188.7),
                max_relative = 1e-15
            );
        }
    }

    #[test]
    fn design_frequency_min_and_tie() {
        assert_eq!(design_frequency(14.8, 4.5), (4.5, Limiting::Servo));
        assert_eq!(design_frequency(21.0, 13.6), (13.6, Limiting::Servo));
        assert_eq!(design_frequency(4.5, 14.8), (4.5, Limiting::Hcm));
        assert_eq!(design_frequency(7.0, 7.0), (7.0, Limiting::Servo));
    }

    #[test]
    fn speed_band_reference_point() {
        let b = estimate_speed(10.0, DEFAULT_BPB_LO, DEFAULT_BPB_HI).unwrap();
        // 2·10·0.34 lands one ulp above the decimal literal 6.8; the
        // upper bound is bit-exact.
        assert_abs_diff_eq!(b.lo, 6.8, epsilon = 4.0 * f64::EPSILON * 6.8);
        assert_eq!(b.hi, 10.8);
    }

    #[test]
    fn speed_band_degenerate_and_unit() {
        let z = estimate_speed(0.0, DEFAULT_BPB_LO, DEFAULT_BPB_HI).unwrap();
        assert_eq!((z.lo, z.hi), (0.0, 0.0));
        let one = estimate_speed(1.0, DEFAULT_BPB_LO, DEFAULT_BPB_HI).unwrap();
        assert_eq!(one.lo, 0.68);
        assert_eq!(one.hi, 1.08);
    }

    #[test]
    fn speed_band_homogeneous_in_frequency() {
        let b1 = estimate_speed(3.7, DEFAULT_BPB_LO, DEFAULT_BPB_HI).unwrap();
        let b2 = estimate_speed(7.4, DEFAULT_BPB_LO, DEFAULT_BPB_HI).unwrap();
        assert_eq!(b2.lo, 2.0 * b1.lo);
        assert_eq!(b2.hi, 2.0 * b1.hi);
    }

    #[test]
    fn carbonfish_reference_mode_is_servo_limited() {
        let g = Geometry::new(137.0, 10.0, 0.5, 10.0, 2.1).unwrap();
        let opts = EvalOptions {
            closure: ClosureSpec::Calibrated { u_target: 36.0 },
            servo_cap: ServoCapMode::Reference,
            ..EvalOptions::default()
        };
        let e = evaluate_design(&g, &cfrp(), &a66bhlw(), &opts).unwrap();
        assert_eq!(e.f_design, 13.6);
        assert_eq!(e.limiting, Limiting::Servo);
        assert!(e.hcm.f_m_hcm > 13.6);
        assert_relative_eq!(e.hcm.f_m_hcm, 21.060_509_751_241_27, max_relative = 1e-12);
        assert!(e.alpha_feasible);
    }

    #[test]
    fn coral_reference_mode_matches_datasheet_cap() {
        let g = Geometry::new(87.0, 11.8, 0.762, 15.0, 1.9).unwrap();
        let opts = EvalOptions {
            servo_cap: ServoCapMode::Reference,
            ..EvalOptions::default()
        };
        let e = evaluate_design(&g, &petg(), &mg90s(), &opts).unwrap();
        assert!((e.hcm.f_m_hcm - 14.8).abs() / 14.8 < 0.05);
        assert_eq!(e.f_design, 4.5);
        assert_eq!(e.limiting, Limiting::Servo);
    }

    #[test]
    fn evaluation_invariants() {
        let g = Geometry::new(137.0, 10.0, 0.5, 10.0, 2.1).unwrap();
        let e = evaluate_design(&g, &cfrp(), &a66bhlw(), &EvalOptions::default()).unwrap();
        assert!(e.f_design <= e.hcm.f_m_hcm && e.f_design <= e.f_m_servo);
        assert_eq!(e.alpha.to_bits(), (a66bhlw().stall_torque / e.hcm.t_act).to_bits());
        assert_eq!((e.limiting == Limiting::Servo), (e.f_m_servo <= e.hcm.f_m_hcm));
        assert!((e.hcm.f_m_hcm * 2.0 * e.hcm.t_star - 1.0).abs() <= 4.0 * f64::EPSILON);
    }

    #[test]
    fn flat_shape_propagates_degenerate_error() {
        let g = Geometry::new(137.0, 10.0, 0.5, 10.0, 2.1).unwrap();
        let opts = EvalOptions {
            closure: ClosureSpec::Explicit { a1: 0.0 },
            ..EvalOptions::default()
        };
        let r = evaluate_design(&g, &cfrp(), &a66bhlw(), &opts);
        assert!(matches!(r, Err(ModelError::DegenerateShape(_))));
    }

    #[test]
    fn moving_mass_includes_both_halves_and_servo() {
        let g = Geometry::new(100.0, 10.0, 0.5, 10.0, 1.0).unwrap();
        let m = moving_mass_g(&g, &cfrp(), &a66bhlw());
        // 0.5·10·200·1.6e-9 t = 1.6e-6 t = 1.6 g, plus 66 g servo
        assert_abs_diff_eq!(m, 67.6, epsilon = 1e-9);
    }
}
