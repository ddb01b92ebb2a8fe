//! JSON report documents. Built as `serde_json::Value` objects, whose
//! map is ordered, so keys always serialize sorted and repeated runs are
//! byte-identical.

use serde_json::{json, Map, Value};

use crate::catalog::Preset;
use crate::drive::{DesignEvaluation, EvalOptions, ServoSpec};

/// Units for every numeric field a report can carry.
fn units_block() -> Value {
    json!({
        "geometry": "mm (l, D, t, h; r dimensionless)",
        "l1": "mm",
        "l2": "mm",
        "p_cr": "N",
        "u_barr": "mm*N",
        "t_act": "mm*N",
        "u_l1": "mm",
        "u_tip": "mm",
        "t_star": "s",
        "f_m_hcm": "Hz",
        "f_m_servo": "Hz",
        "f_design": "Hz",
        "alpha": "dimensionless",
        "speed_band": "BL/s",
        "speed_band_at_10hz": "BL/s",
        "moving_mass": "g",
    })
}

fn evaluation_fields(e: &DesignEvaluation) -> Map<String, Value> {
    let g = &e.geometry;
    let mut m = Map::new();
    m.insert(
        "geometry".into(),
        json!({
            "l": g.half_length,
            "D": g.prestress,
            "t": g.thickness,
            "h": g.width,
            "r": g.section_ratio,
        }),
    );
    m.insert("l1".into(), json!(g.core_length()));
    m.insert("l2".into(), json!(g.outer_length()));
    m.insert("material".into(), json!(e.material));
    m.insert("servo".into(), json!(e.servo));
    m.insert("p_cr".into(), json!(e.hcm.p_cr));
    m.insert("u_barr".into(), json!(e.hcm.u_barr));
    m.insert("t_act".into(), json!(e.hcm.t_act));
    m.insert("u_l1".into(), json!(e.hcm.u_l1));
    m.insert("u_tip".into(), json!(e.hcm.u_tip));
    m.insert("t_star".into(), json!(e.hcm.t_star));
    m.insert("f_m_hcm".into(), json!(e.hcm.f_m_hcm));
    m.insert("alpha".into(), json!(e.alpha));
    m.insert("alpha_feasible".into(), json!(e.alpha_feasible));
    m.insert("f_m_servo".into(), json!(e.f_m_servo));
    m.insert("f_design".into(), json!(e.f_design));
    m.insert("limiting".into(), json!(e.limiting.as_str()));
    m.insert(
        "speed_band".into(),
        json!({ "lo": e.speed_band.lo, "hi": e.speed_band.hi }),
    );
    m.insert("moving_mass".into(), json!(e.moving_mass_g));
    m
}

/// Full single-design report: every evaluation field, the modes used,
/// a units block, and (for presets) the catalog reference values.
pub fn eval_report(
    e: &DesignEvaluation,
    servo: &ServoSpec,
    opts: &EvalOptions,
    preset: Option<(&str, &Preset)>,
) -> Value {
    let mut m = evaluation_fields(e);
    // Unsimplified rendering of the torque relation,
    // 2·U_barr·L_horn / (2·u(L1)); agrees with t_act bit for bit.
    m.insert(
        "t_act_unsimplified".into(),
        json!((2.0 * e.hcm.u_barr * servo.horn_length) / (2.0 * e.hcm.u_l1)),
    );
    m.insert("closure".into(), json!(opts.closure.render()));
    m.insert("pcr_model".into(), json!(opts.pcr.render()));
    m.insert("servo_cap_mode".into(), json!(opts.servo_cap.as_str()));
    m.insert("alpha_min".into(), json!(opts.alpha_min));
    // Speed band at the 10 Hz operating point, alongside the one at
    // f_design, for comparison with measured prototype numbers.
    let at10 = crate::drive::estimate_speed(10.0, opts.bpb_lo, opts.bpb_hi)
        .expect("static band coefficients");
    m.insert(
        "speed_band_at_10hz".into(),
        json!({ "lo": at10.lo, "hi": at10.hi }),
    );
    if let Some((name, p)) = preset {
        let mut refs = Map::new();
        refs.insert("preset".into(), json!(name));
        if let Some(t) = p.t_act_ref {
            refs.insert("t_act_ref".into(), json!(t));
            refs.insert("alpha_ref".into(), json!(servo.stall_torque / t));
        }
        if let Some(u) = p.u_tip_ref {
            refs.insert("u_tip_ref".into(), json!(u));
        }
        refs.insert(
            "note".into(),
            json!("catalog reference values, reported for comparison, not asserted"),
        );
        m.insert("references".into(), Value::Object(refs));
    }
    m.insert("units".into(), units_block());
    Value::Object(m)
}

/// Ranked search results as a JSON array (one evaluation object per
/// feasible design, plus its rank).
pub fn search_report(results: &[DesignEvaluation]) -> Value {
    let items: Vec<Value> = results
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let mut m = evaluation_fields(e);
            m.insert("rank".into(), json!(i + 1));
            Value::Object(m)
        })
        .collect();
    json!({ "results": items, "units": units_block() })
}

/// Serialize a report with a trailing newline; keys are already sorted
/// by the ordered map underneath.
pub fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serialization");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin_catalog;
    use crate::drive::{evaluate_design, ServoCapMode};
    use crate::model::ClosureSpec;

    fn carbonfish_eval() -> (DesignEvaluation, ServoSpec, EvalOptions) {
        let cat = builtin_catalog();
        let p = &cat.presets["carbonfish"];
        let servo = cat.servos[p.servo.as_deref().unwrap()].clone();
        let opts = EvalOptions {
            closure: ClosureSpec::Calibrated { u_target: 36.0 },
            servo_cap: ServoCapMode::Reference,
            ..EvalOptions::default()
        };
        let e =
            evaluate_design(&p.geometry, &cat.materials[&p.material], &servo, &opts).unwrap();
        (e, servo, opts)
    }

    #[test]
    fn keys_are_sorted_and_output_deterministic() {
        let cat = builtin_catalog();
        let (e, servo, opts) = carbonfish_eval();
        let preset = Some(("carbonfish", &cat.presets["carbonfish"]));
        let s1 = to_json_string(&eval_report(&e, &servo, &opts, preset));
        let s2 = to_json_string(&eval_report(&e, &servo, &opts, preset));
        assert_eq!(s1, s2);
        let r = eval_report(&e, &servo, &opts, preset);
        let keys: Vec<&String> = r.as_object().unwrap().keys().collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn report_carries_reference_block() {
        let cat = builtin_catalog();
        let (e, servo, opts) = carbonfish_eval();
        let r = eval_report(&e, &servo, &opts, Some(("carbonfish", &cat.presets["carbonfish"])));
        assert_eq!(r["references"]["t_act_ref"], 1177.0);
        assert_eq!(r["references"]["u_tip_ref"], 36.0);
        assert!(r["references"]["note"].as_str().unwrap().contains("not asserted"));
        assert_eq!(r["f_design"], 13.6);
        assert_eq!(r["limiting"], "servo");
        // alpha against the reference torque: 3234/1177
        let a = r["references"]["alpha_ref"].as_f64().unwrap();
        assert!((a - 2.75).abs() < 0.01);
    }

    #[test]
    fn torque_renderings_agree_bitwise() {
        let (e, servo, opts) = carbonfish_eval();
        let r = eval_report(&e, &servo, &opts, None);
        assert_eq!(
            r["t_act"].as_f64().unwrap().to_bits(),
            r["t_act_unsimplified"].as_f64().unwrap().to_bits()
        );
    }

    #[test]
    fn search_report_ranks_from_one() {
        let (e, _, _) = carbonfish_eval();
        let r = search_report(&[e.clone(), e]);
        assert_eq!(r["results"][0]["rank"], 1);
        assert_eq!(r["results"][1]["rank"], 2);
    }
}
