//! Browser bindings for the HCM design toolkit. Three operations are
//! exposed, all JSON-string in / JSON-string out so the JS side stays a
//! plain `fetch`-free static page:
//!
//! * [`catalog_json`] — the built-in catalog, for populating controls;
//! * [`evaluate`] — full design evaluation report;
//! * [`mode_shape_curve`] — sampled phi(z) and u(z) profiles;
//! * [`sweep_curve`] — one varied parameter against the torque and
//!   frequency outputs.
//!
//! Errors come back as `{"error": "...", "kind": "validation"|"numeric"}`
//! rather than thrown exceptions.

use serde::Deserialize;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use hcm_core::catalog::builtin_catalog;
use hcm_core::report::{eval_report, to_json_string};
use hcm_core::{
    evaluate_design, resolve_mode_shape, sweep, ClosureSpec, EvalOptions, Geometry, GridSpec,
    MaterialSpec, ModelError, PcrModel, Preset, ServoCapMode, ServoSpec, SweepParam, SweepSpec,
};

#[derive(Deserialize)]
struct GeometryInput {
    l: f64,
    #[serde(rename = "D")]
    d: f64,
    t: f64,
    h: f64,
    r: f64,
}

#[derive(Deserialize)]
struct ClosureInput {
    kind: String,
    #[serde(default)]
    value: Option<f64>,
}

#[derive(Deserialize)]
struct PcrInput {
    kind: String,
    #[serde(default)]
    value: Option<f64>,
}

#[derive(Deserialize)]
struct DesignInput {
    #[serde(default)]
    preset: Option<String>,
    #[serde(default)]
    geometry: Option<GeometryInput>,
    #[serde(default)]
    material: Option<String>,
    #[serde(default)]
    servo: Option<String>,
    #[serde(default)]
    closure: Option<ClosureInput>,
    #[serde(default)]
    pcr: Option<PcrInput>,
    #[serde(default)]
    servo_cap: Option<String>,
    #[serde(default)]
    alpha_min: Option<f64>,
}

#[derive(Deserialize)]
struct VaryInput {
    param: String,
    min: f64,
    max: f64,
    step: f64,
}

#[derive(Deserialize)]
struct SweepInput {
    #[serde(flatten)]
    design: DesignInput,
    vary: VaryInput,
    #[serde(default)]
    fix_shape: bool,
}

fn error_json(msg: &str, kind: &str) -> String {
    json!({ "error": msg, "kind": kind }).to_string()
}

fn model_error_json(e: &ModelError) -> String {
    error_json(&e.to_string(), if e.is_numeric() { "numeric" } else { "validation" })
}

struct Resolved {
    geometry: Geometry,
    material: MaterialSpec,
    servo: ServoSpec,
    preset: Option<(String, Preset)>,
    opts: EvalOptions,
}

fn resolve(input: &DesignInput) -> Result<Resolved, String> {
    let cat = builtin_catalog();
    let (geometry, preset) = match (&input.preset, &input.geometry) {
        (Some(name), _) => {
            let p = cat
                .presets
                .get(name)
                .ok_or(error_json(&format!("unknown preset \"{name}\""), "validation"))?;
            (p.geometry, Some((name.clone(), p.clone())))
        }
        (None, Some(g)) => {
            let geometry = Geometry::new(g.l, g.d, g.t, g.h, g.r)
                .map_err(|e| model_error_json(&e))?;
            (geometry, None)
        }
        (None, None) => {
            return Err(error_json("pass \"preset\" or \"geometry\"", "validation"))
        }
    };
    let material_name = input
        .material
        .clone()
        .or(preset.as_ref().map(|(_, p)| p.material.clone()))
        .ok_or(error_json("pass \"material\"", "validation"))?;
    let material = cat
        .materials
        .get(&material_name)
        .ok_or(error_json(&format!("unknown material \"{material_name}\""), "validation"))?
        .clone();
    let servo_name = input
        .servo
        .clone()
        .or(preset.as_ref().and_then(|(_, p)| p.servo.clone()))
        .ok_or(error_json("this preset has no servo; pass \"servo\"", "validation"))?;
    let servo = cat
        .servos
        .get(&servo_name)
        .ok_or(error_json(&format!("unknown servo \"{servo_name}\""), "validation"))?
        .clone();

    let closure = match &input.closure {
        Some(c) => match (c.kind.as_str(), c.value) {
            ("calibrated", Some(v)) => ClosureSpec::Calibrated { u_target: v },
            ("end_shortening", v) => ClosureSpec::EndShortening { kappa: v.unwrap_or(1.0) },
            ("explicit", Some(v)) => ClosureSpec::Explicit { a1: v },
            (kind, _) => {
                return Err(error_json(
                    &format!("bad closure {kind} (calibrated/end_shortening/explicit, with value)"),
                    "validation",
                ))
            }
        },
        None => match preset.as_ref().and_then(|(_, p)| p.u_tip_ref) {
            Some(u) => ClosureSpec::Calibrated { u_target: u },
            None => ClosureSpec::end_shortening_default(),
        },
    };
    let pcr = match &input.pcr {
        Some(p) => match (p.kind.as_str(), p.value) {
            ("euler", _) => PcrModel::EulerStrip,
            ("direct", Some(v)) => PcrModel::Direct { p_cr: v },
            (kind, _) => {
                return Err(error_json(&format!("bad pcr kind {kind}"), "validation"))
            }
        },
        None => PcrModel::EulerStrip,
    };
    let servo_cap = match input.servo_cap.as_deref() {
        None | Some("dimensional") => ServoCapMode::Dimensional,
        Some("reference") => ServoCapMode::Reference,
        Some(other) => {
            return Err(error_json(&format!("bad servo_cap {other}"), "validation"))
        }
    };
    let opts = EvalOptions {
        closure,
        pcr,
        servo_cap,
        alpha_min: input.alpha_min.unwrap_or(1.0),
        ..EvalOptions::default()
    };
    Ok(Resolved { geometry, material, servo, preset, opts })
}

/// The built-in catalog as JSON (materials, servos, presets), for
/// populating the demo's controls.
#[wasm_bindgen]
pub fn catalog_json() -> String {
    let cat = builtin_catalog();
    let materials: Vec<Value> = cat
        .materials
        .values()
        .map(|m| {
            json!({
                "name": m.name,
                "E": m.youngs_modulus,
                "rho_s": m.density,
                "specific_modulus": m.specific_modulus(),
                "thicknesses": m.thicknesses,
            })
        })
        .collect();
    let servos: Vec<Value> = cat
        .servos
        .values()
        .map(|s| {
            json!({
                "name": s.name,
                "T_servo": s.stall_torque,
                "speed": s.speed,
                "weight": s.weight,
                "L_horn": s.horn_length,
                "f_ref": s.f_ref,
            })
        })
        .collect();
    let presets: Vec<Value> = cat
        .presets
        .iter()
        .map(|(name, p)| {
            json!({
                "name": name,
                "geometry": {
                    "l": p.geometry.half_length,
                    "D": p.geometry.prestress,
                    "t": p.geometry.thickness,
                    "h": p.geometry.width,
                    "r": p.geometry.section_ratio,
                },
                "material": p.material,
                "servo": p.servo,
                "T_act_ref": p.t_act_ref,
                "u_tip_ref": p.u_tip_ref,
            })
        })
        .collect();
    json!({ "materials": materials, "servos": servos, "presets": presets }).to_string()
}

/// Evaluate one design; returns the same JSON report as the CLI.
#[wasm_bindgen]
pub fn evaluate(input_json: &str) -> String {
    let input: DesignInput = match serde_json::from_str(input_json) {
        Ok(v) => v,
        Err(e) => return error_json(&format!("bad input: {e}"), "validation"),
    };
    let resolved = match resolve(&input) {
        Ok(r) => r,
        Err(e) => return e,
    };
    match evaluate_design(&resolved.geometry, &resolved.material, &resolved.servo, &resolved.opts)
    {
        Ok(e) => {
            let preset_ref = resolved.preset.as_ref().map(|(n, p)| (n.as_str(), p));
            to_json_string(&eval_report(&e, &resolved.servo, &resolved.opts, preset_ref))
        }
        Err(e) => model_error_json(&e),
    }
}

/// Sample the resolved mode shape: `{ a1, l1, z: [...], phi: [...],
/// u: [...] }` with 121 points along the half ribbon. The displacement is
/// accumulated segment by segment, so the whole curve costs one pass.
#[wasm_bindgen]
pub fn mode_shape_curve(input_json: &str) -> String {
    let input: DesignInput = match serde_json::from_str(input_json) {
        Ok(v) => v,
        Err(e) => return error_json(&format!("bad input: {e}"), "validation"),
    };
    let resolved = match resolve(&input) {
        Ok(r) => r,
        Err(e) => return e,
    };
    let shape = match resolve_mode_shape(&resolved.geometry, &resolved.opts.closure) {
        Ok(s) => s,
        Err(e) => return model_error_json(&e),
    };
    let l = resolved.geometry.half_length;
    const POINTS: usize = 121;
    let mut zs = Vec::with_capacity(POINTS);
    let mut phis = Vec::with_capacity(POINTS);
    let mut us = Vec::with_capacity(POINTS);
    let mut u_acc = 0.0;
    let mut z_prev = 0.0;
    for i in 0..POINTS {
        let z = l * i as f64 / (POINTS - 1) as f64;
        let phi = match shape.torsion_angle(z) {
            Ok(v) => v,
            Err(e) => return model_error_json(&e),
        };
        if i > 0 {
            let du = hcm_core::integrate(
                |zeta| shape.torsion_angle(zeta).unwrap_or(f64::NAN),
                z_prev,
                z,
                &hcm_core::Tolerance::default(),
            );
            match du {
                Ok(q) => u_acc += q.value,
                Err(e) => return model_error_json(&ModelError::Numerics(e)),
            }
        }
        zs.push(z);
        phis.push(phi);
        us.push(u_acc);
        z_prev = z;
    }
    json!({
        "a1": shape.a1,
        "l1": resolved.geometry.core_length(),
        "z": zs,
        "phi": phis,
        "u": us,
    })
    .to_string()
}

/// Sweep one parameter and return plottable columns:
/// `{ x: [...], t_act: [...], f_m_hcm: [...], f_m_servo: [...],
/// f_design: [...], alpha: [...], u_tip: [...], errors: [...] }`.
/// Failed grid points hold null in the numeric columns.
#[wasm_bindgen]
pub fn sweep_curve(input_json: &str) -> String {
    let input: SweepInput = match serde_json::from_str(input_json) {
        Ok(v) => v,
        Err(e) => return error_json(&format!("bad input: {e}"), "validation"),
    };
    let resolved = match resolve(&input.design) {
        Ok(r) => r,
        Err(e) => return e,
    };
    let Some(param) = SweepParam::parse(&input.vary.param) else {
        return error_json(
            &format!("unknown parameter \"{}\" (l, D, t, h, r)", input.vary.param),
            "validation",
        );
    };
    let spec = SweepSpec {
        varied: vec![(
            param,
            GridSpec { min: input.vary.min, max: input.vary.max, step: input.vary.step },
        )],
        base_geometry: resolved.geometry,
        material: resolved.material.name.clone(),
        servo: resolved.servo.name.clone(),
        closure: resolved.opts.closure,
        pcr: resolved.opts.pcr,
        servo_cap: resolved.opts.servo_cap,
        alpha_min: resolved.opts.alpha_min,
        fix_shape: input.fix_shape,
    };
    let cat = builtin_catalog();
    let rows = match sweep(&spec, &cat) {
        Ok(r) => r,
        Err(e) => return error_json(&e.to_string(), "validation"),
    };
    let mut x = Vec::new();
    let mut t_act = Vec::new();
    let mut f_m_hcm = Vec::new();
    let mut f_m_servo = Vec::new();
    let mut f_design = Vec::new();
    let mut alpha = Vec::new();
    let mut u_tip = Vec::new();
    let mut errors: Vec<Value> = Vec::new();
    for row in &rows {
        x.push(row.varied[0].1);
        match &row.outcome {
            Ok(e) => {
                t_act.push(json!(e.hcm.t_act));
                f_m_hcm.push(json!(e.hcm.f_m_hcm));
                f_m_servo.push(json!(e.f_m_servo));
                f_design.push(json!(e.f_design));
                alpha.push(json!(e.alpha));
                u_tip.push(json!(e.hcm.u_tip));
                errors.push(Value::Null);
            }
            Err(msg) => {
                for col in [
                    &mut t_act,
                    &mut f_m_hcm,
                    &mut f_m_servo,
                    &mut f_design,
                    &mut alpha,
                    &mut u_tip,
                ] {
                    col.push(Value::Null);
                }
                errors.push(json!(msg));
            }
        }
    }
    json!({
        "param": param.as_str(),
        "x": x,
        "t_act": t_act,
        "f_m_hcm": f_m_hcm,
        "f_m_servo": f_m_servo,
        "f_design": f_design,
        "alpha": alpha,
        "u_tip": u_tip,
        "errors": errors,
    })
    .to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_json_lists_everything() {
        let v: Value = serde_json::from_str(&catalog_json()).unwrap();
        assert_eq!(v["materials"].as_array().unwrap().len(), 3);
        assert_eq!(v["servos"].as_array().unwrap().len(), 7);
        assert_eq!(v["presets"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn evaluate_carbonfish_preset() {
        let out = evaluate(r#"{"preset":"carbonfish","servo_cap":"reference"}"#);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["f_design"], 13.6);
        assert_eq!(v["limiting"], "servo");
    }

    #[test]
    fn evaluate_custom_geometry() {
        let out = evaluate(
            r#"{"geometry":{"l":100,"D":10,"t":0.5,"h":10,"r":2},
                "material":"CFRP","servo":"A66BHLW"}"#,
        );
        let v: Value = serde_json::from_str(&out).unwrap();
        assert!(v["f_design"].as_f64().unwrap() > 0.0);
    }

    #[test]
    fn evaluate_reports_errors_as_json() {
        let v: Value = serde_json::from_str(&evaluate(r#"{"preset":"nope"}"#)).unwrap();
        assert!(v["error"].as_str().unwrap().contains("nope"));
        assert_eq!(v["kind"], "validation");

        let v: Value = serde_json::from_str(&evaluate(
            r#"{"preset":"carbonfish","closure":{"kind":"explicit","value":0.0}}"#,
        ))
        .unwrap();
        assert_eq!(v["kind"], "numeric");
    }

    #[test]
    fn mode_shape_curve_is_consistent() {
        let out = mode_shape_curve(r#"{"preset":"carbonfish"}"#);
        let v: Value = serde_json::from_str(&out).unwrap();
        let z = v["z"].as_array().unwrap();
        let u = v["u"].as_array().unwrap();
        assert_eq!(z.len(), 121);
        assert_eq!(u.len(), 121);
        assert_eq!(u[0], 0.0);
        // calibrated closure from the preset's u_tip_ref = 36
        let tip = u.last().unwrap().as_f64().unwrap();
        assert!((tip - 36.0).abs() < 1e-6, "tip {tip}");
    }

    #[test]
    fn sweep_curve_shape() {
        let out = sweep_curve(
            r#"{"preset":"carbonfish","vary":{"param":"D","min":5,"max":20,"step":5},
                "fix_shape":true}"#,
        );
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["x"].as_array().unwrap().len(), 4);
        let t0 = v["t_act"][0].as_f64().unwrap();
        let t3 = v["t_act"][3].as_f64().unwrap();
        assert!((t3 / t0 - 4.0).abs() < 1e-9);
    }
}
