//! Deterministic design-space exploration: parameter sweeps (CSV) and
//! exhaustive feasibility search over geometry grid × material ×
//! thickness × servo combinations.
//!
//! Grid points are evaluated independently and the final list is sorted
//! by a canonical objective, so the output does not depend on enumeration
//! order or on any parallelism an embedder might add.

use crate::catalog::Catalog;
use crate::drive::{evaluate_design, DesignEvaluation, EvalOptions, ServoCapMode};
use crate::fmt::render_f64;
use crate::model::{resolve_mode_shape, ClosureSpec, Geometry, ModelError, PcrModel};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SearchError {
    #[error("validation error: {0}")]
    Validation(String),
    #[error("unknown {kind} \"{name}\"")]
    UnknownName { kind: &'static str, name: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// An inclusive arithmetic grid `min, min+step, ..., <= max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl GridSpec {
    /// A grid holding exactly one value.
    pub fn fixed(v: f64) -> Self {
        GridSpec { min: v, max: v, step: 1.0 }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if !(self.min.is_finite() && self.max.is_finite() && self.step.is_finite()) {
            return Err(SearchError::Validation(format!(
                "grid bounds must be finite, got {}:{}:{}",
                self.min, self.max, self.step
            )));
        }
        if self.step <= 0.0 {
            return Err(SearchError::Validation(format!(
                "grid step must be > 0, got {}",
                self.step
            )));
        }
        if self.min > self.max {
            return Err(SearchError::Validation(format!(
                "grid min {} exceeds max {}",
                self.min, self.max
            )));
        }
        if self.len() > 10_000_000 {
            return Err(SearchError::Validation(format!(
                "grid {}:{}:{} has more than 1e7 points",
                self.min, self.max, self.step
            )));
        }
        Ok(())
    }

    /// Number of points (validated grids only). A small forward slack
    /// keeps `max` in the grid despite accumulated rounding.
    pub fn len(&self) -> usize {
        ((self.max - self.min) / self.step + 1e-9) as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false // a valid grid always holds at least `min`
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.min + i as f64 * self.step).collect()
    }
}

/// How thickness is enumerated in a search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThicknessRange {
    /// Use each material's catalog-listed sheet thicknesses (default).
    CatalogListed,
    /// Sweep a continuous grid; values not in the material's catalog are
    /// marked extrapolated in outputs.
    Grid(GridSpec),
}

/// Ranking key for search results. Every variant falls back to the full
/// canonical tiebreak chain (f_design desc, alpha desc, moving mass asc,
/// then the input tuple), so the order is always total and deterministic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Objective {
    /// f_design first (undulation frequency is the headline parameter).
    #[default]
    FrequencyFirst,
    /// Design factor (torque margin) first.
    AlphaFirst,
    /// Lightest moving mass first.
    LightestFirst,
}

impl Objective {
    pub fn as_str(&self) -> &'static str {
        match self {
            Objective::FrequencyFirst => "frequency",
            Objective::AlphaFirst => "alpha",
            Objective::LightestFirst => "lightest",
        }
    }
}

/// Configuration of an exhaustive search.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub l: GridSpec,
    pub d: GridSpec,
    pub h: GridSpec,
    pub r: GridSpec,
    pub t: ThicknessRange,
    /// Material name filter; `None` means every catalog material.
    pub materials: Option<Vec<String>>,
    /// Servo name filter; `None` means every catalog servo.
    pub servos: Option<Vec<String>>,
    pub closure: ClosureSpec,
    pub pcr: PcrModel,
    pub servo_cap: ServoCapMode,
    /// Feasibility requires alpha >= alpha_min ...
    pub alpha_min: f64,
    /// ... and f_design >= f_target (Hz).
    pub f_target: f64,
    pub objective: Objective,
}

impl SearchConfig {
    /// A config with every geometry parameter pinned to one value and the
    /// defaults elsewhere.
    pub fn at_point(l: f64, d: f64, h: f64, r: f64) -> Self {
        SearchConfig {
            l: GridSpec::fixed(l),
            d: GridSpec::fixed(d),
            h: GridSpec::fixed(h),
            r: GridSpec::fixed(r),
            t: ThicknessRange::CatalogListed,
            materials: None,
            servos: None,
            closure: ClosureSpec::end_shortening_default(),
            pcr: PcrModel::EulerStrip,
            servo_cap: ServoCapMode::Dimensional,
            alpha_min: 1.0,
            f_target: 0.0,
            objective: Objective::FrequencyFirst,
        }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        self.l.validate()?;
        self.d.validate()?;
        self.h.validate()?;
        self.r.validate()?;
        if let ThicknessRange::Grid(g) = &self.t {
            g.validate()?;
        }
        if !self.alpha_min.is_finite() || self.alpha_min <= 0.0 {
            return Err(SearchError::Validation(format!(
                "alpha_min must be finite and > 0, got {}",
                self.alpha_min
            )));
        }
        if !self.f_target.is_finite() || self.f_target < 0.0 {
            return Err(SearchError::Validation(format!(
                "f_target must be finite and >= 0, got {}",
                self.f_target
            )));
        }
        self.closure.validate().map_err(SearchError::Model)?;
        Ok(())
    }
}

/// Feasibility gate: torque margin and frequency target both met.
pub fn is_feasible(e: &DesignEvaluation, alpha_min: f64, f_target: f64) -> bool {
    e.alpha >= alpha_min && e.f_design >= f_target
}

fn filtered_names(
    all: impl Iterator<Item = String>,
    filter: &Option<Vec<String>>,
    kind: &'static str,
    exists: impl Fn(&str) -> bool,
) -> Result<Vec<String>, SearchError> {
    match filter {
        None => Ok(all.collect()),
        Some(names) => {
            let mut picked = Vec::new();
            for n in names {
                if !exists(n) {
                    return Err(SearchError::UnknownName { kind, name: n.clone() });
                }
                if !picked.contains(n) {
                    picked.push(n.clone());
                }
            }
            picked.sort();
            Ok(picked)
        }
    }
}

/// Total comparison implementing the canonical ranking for `objective`.
fn canonical_cmp(a: &DesignEvaluation, b: &DesignEvaluation, objective: Objective) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    let freq = |a: &DesignEvaluation, b: &DesignEvaluation| b.f_design.total_cmp(&a.f_design);
    let alpha = |a: &DesignEvaluation, b: &DesignEvaluation| b.alpha.total_cmp(&a.alpha);
    let mass =
        |a: &DesignEvaluation, b: &DesignEvaluation| a.moving_mass_g.total_cmp(&b.moving_mass_g);
    let head = match objective {
        Objective::FrequencyFirst => freq(a, b).then(alpha(a, b)).then(mass(a, b)),
        Objective::AlphaFirst => alpha(a, b).then(freq(a, b)).then(mass(a, b)),
        Objective::LightestFirst => mass(a, b).then(freq(a, b)).then(alpha(a, b)),
    };
    if head != Ordering::Equal {
        return head;
    }
    // Final tiebreak: the lexicographic input tuple.
    a.geometry
        .half_length
        .total_cmp(&b.geometry.half_length)
        .then(a.geometry.prestress.total_cmp(&b.geometry.prestress))
        .then(a.geometry.thickness.total_cmp(&b.geometry.thickness))
        .then(a.geometry.width.total_cmp(&b.geometry.width))
        .then(a.geometry.section_ratio.total_cmp(&b.geometry.section_ratio))
        .then_with(|| a.material.cmp(&b.material))
        .then_with(|| a.servo.cmp(&b.servo))
}

/// Exhaustively evaluate every grid × material × thickness × servo
/// combination, keep the feasible ones, and rank them canonically.
///
/// Combinations whose geometry violates an invariant (for instance
/// D >= l) and combinations whose evaluation fails numerically are
/// skipped, not errors: the search reports what works. Zero feasible
/// results is an empty list.
pub fn search(cfg: &SearchConfig, cat: &Catalog) -> Result<Vec<DesignEvaluation>, SearchError> {
    cfg.validate()?;
    let materials = filtered_names(
        cat.materials.keys().cloned(),
        &cfg.materials,
        "material",
        |n| cat.materials.contains_key(n),
    )?;
    let servos = filtered_names(cat.servos.keys().cloned(), &cfg.servos, "servo", |n| {
        cat.servos.contains_key(n)
    })?;

    let opts_for = |cfg: &SearchConfig| EvalOptions {
        closure: cfg.closure,
        pcr: cfg.pcr,
        servo_cap: cfg.servo_cap,
        alpha_min: cfg.alpha_min,
        ..EvalOptions::default()
    };
    let opts = opts_for(cfg);

    let mut results = Vec::new();
    for material in &materials {
        let mat = &cat.materials[material];
        let thicknesses = match &cfg.t {
            ThicknessRange::CatalogListed => mat.thicknesses.clone(),
            ThicknessRange::Grid(g) => g.values(),
        };
        for servo in &servos {
            let servo_spec = &cat.servos[servo];
            for l in cfg.l.values() {
                for d in cfg.d.values() {
                    for &t in &thicknesses {
                        for h in cfg.h.values() {
                            for r in cfg.r.values() {
                                let Ok(geometry) = Geometry::new(l, d, t, h, r) else {
                                    continue;
                                };
                                let Ok(e) = evaluate_design(&geometry, mat, servo_spec, &opts)
                                else {
                                    continue;
                                };
                                if is_feasible(&e, cfg.alpha_min, cfg.f_target) {
                                    results.push(e);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    results.sort_by(|a, b| canonical_cmp(a, b, cfg.objective));
    Ok(results)
}

/// A sweepable design parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    HalfLength,
    Prestress,
    Thickness,
    Width,
    SectionRatio,
}

impl SweepParam {
    /// Short name used in CSV headers and CLI flags.
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepParam::HalfLength => "l",
            SweepParam::Prestress => "D",
            SweepParam::Thickness => "t",
            SweepParam::Width => "h",
            SweepParam::SectionRatio => "r",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "l" => Some(SweepParam::HalfLength),
            "D" => Some(SweepParam::Prestress),
            "t" => Some(SweepParam::Thickness),
            "h" => Some(SweepParam::Width),
            "r" => Some(SweepParam::SectionRatio),
            _ => None,
        }
    }

    fn apply(&self, g: &mut Geometry, v: f64) {
        match self {
            SweepParam::HalfLength => g.half_length = v,
            SweepParam::Prestress => g.prestress = v,
            SweepParam::Thickness => g.thickness = v,
            SweepParam::Width => g.width = v,
            SweepParam::SectionRatio => g.section_ratio = v,
        }
    }
}

/// A one- or two-parameter sweep around a base design.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// One or two distinct varied parameters with their grids.
    pub varied: Vec<(SweepParam, GridSpec)>,
    pub base_geometry: Geometry,
    pub material: String,
    pub servo: String,
    pub closure: ClosureSpec,
    pub pcr: PcrModel,
    pub servo_cap: ServoCapMode,
    pub alpha_min: f64,
    /// Resolve the mode shape once at the base geometry and hold the
    /// amplitude fixed across the sweep. This is the setting under which
    /// the classic proportionalities (T_act ∝ D, t³, h) are exact.
    pub fix_shape: bool,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), SearchError> {
        if self.varied.is_empty() || self.varied.len() > 2 {
            return Err(SearchError::Validation(format!(
                "sweeps vary one or two parameters, got {}",
                self.varied.len()
            )));
        }
        if self.varied.len() == 2 && self.varied[0].0 == self.varied[1].0 {
            return Err(SearchError::Validation(format!(
                "varied parameters must be distinct, got {} twice",
                self.varied[0].0.as_str()
            )));
        }
        for (_, g) in &self.varied {
            g.validate()?;
        }
        self.closure.validate().map_err(SearchError::Model)?;
        Ok(())
    }
}

/// One sweep grid point: the varied values plus either a full evaluation
/// or an error tag (a failed point does not abort the sweep).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub varied: Vec<(SweepParam, f64)>,
    pub geometry: Geometry,
    /// True when the row's thickness is not one of the material's
    /// catalog-listed sheets (model-extrapolated).
    pub t_extrapolated: bool,
    pub outcome: Result<DesignEvaluation, String>,
}

/// Evaluate a sweep. Rows appear in lexicographic grid order (first
/// varied parameter outermost); each row is a pure function of its grid
/// point.
pub fn sweep(spec: &SweepSpec, cat: &Catalog) -> Result<Vec<SweepRow>, SearchError> {
    spec.validate()?;
    let mat = cat.materials.get(&spec.material).ok_or_else(|| SearchError::UnknownName {
        kind: "material",
        name: spec.material.clone(),
    })?;
    let servo = cat.servos.get(&spec.servo).ok_or_else(|| SearchError::UnknownName {
        kind: "servo",
        name: spec.servo.clone(),
    })?;
    spec.base_geometry.validate()?;

    let closure = if spec.fix_shape {
        let resolved = resolve_mode_shape(&spec.base_geometry, &spec.closure)?;
        ClosureSpec::Explicit { a1: resolved.a1 }
    } else {
        spec.closure
    };
    let opts = EvalOptions {
        closure,
        pcr: spec.pcr,
        servo_cap: spec.servo_cap,
        alpha_min: spec.alpha_min,
        ..EvalOptions::default()
    };

    let outer = spec.varied[0].1.values();
    let inner: Vec<f64> =
        if spec.varied.len() == 2 { spec.varied[1].1.values() } else { vec![f64::NAN] };

    let listed = |t: f64| mat.thicknesses.contains(&t);

    let mut rows = Vec::with_capacity(outer.len() * inner.len());
    for &a in &outer {
        for &b in &inner {
            let mut geometry = spec.base_geometry;
            let mut varied = vec![(spec.varied[0].0, a)];
            spec.varied[0].0.apply(&mut geometry, a);
            if spec.varied.len() == 2 {
                spec.varied[1].0.apply(&mut geometry, b);
                varied.push((spec.varied[1].0, b));
            }
            let t_extrapolated = !listed(geometry.thickness);
            let outcome = geometry
                .validate()
                .and_then(|()| evaluate_design(&geometry, mat, servo, &opts))
                .map_err(|e| e.to_string());
            rows.push(SweepRow { varied, geometry, t_extrapolated, outcome });
        }
    }
    Ok(rows)
}

/// Fixed CSV column order after the varied parameters: the design tuple,
/// names, then every evaluation field in declaration order.
const EVAL_COLUMNS: [&str; 22] = [
    "l",
    "D",
    "t",
    "h",
    "r",
    "material",
    "servo",
    "p_cr",
    "u_barr",
    "t_act",
    "u_l1",
    "u_tip",
    "t_star",
    "f_m_hcm",
    "alpha",
    "alpha_feasible",
    "f_m_servo",
    "f_design",
    "limiting",
    "speed_lo",
    "speed_hi",
    "moving_mass_g",
];

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Render sweep rows as CSV: header row, LF line endings, shortest
/// round-trip float rendering. Failed rows carry their error in the last
/// column and leave the computed columns empty.
pub fn sweep_to_csv(spec: &SweepSpec, rows: &[SweepRow]) -> String {
    let mut out = String::new();
    for (param, _) in &spec.varied {
        out.push_str(param.as_str());
        out.push(',');
    }
    out.push_str(&EVAL_COLUMNS.join(","));
    out.push_str(",t_extrapolated,error\n");

    for row in rows {
        let mut fields: Vec<String> = Vec::with_capacity(EVAL_COLUMNS.len() + 4);
        for (_, v) in &row.varied {
            fields.push(render_f64(*v));
        }
        let g = &row.geometry;
        fields.extend([
            render_f64(g.half_length),
            render_f64(g.prestress),
            render_f64(g.thickness),
            render_f64(g.width),
            render_f64(g.section_ratio),
        ]);
        match &row.outcome {
            Ok(e) => {
                fields.extend([
                    csv_field(&e.material),
                    csv_field(&e.servo),
                    render_f64(e.hcm.p_cr),
                    render_f64(e.hcm.u_barr),
                    render_f64(e.hcm.t_act),
                    render_f64(e.hcm.u_l1),
                    render_f64(e.hcm.u_tip),
                    render_f64(e.hcm.t_star),
                    render_f64(e.hcm.f_m_hcm),
                    render_f64(e.alpha),
                    e.alpha_feasible.to_string(),
                    render_f64(e.f_m_servo),
                    render_f64(e.f_design),
                    e.limiting.as_str().to_string(),
                    render_f64(e.speed_band.lo),
                    render_f64(e.speed_band.hi),
                    render_f64(e.moving_mass_g),
                    row.t_extrapolated.to_string(),
                    String::new(),
                ]);
            }
            Err(msg) => {
                fields.extend([csv_field(&spec.material), csv_field(&spec.servo)]);
                fields.extend(std::iter::repeat_n(String::new(), 15));
                fields.push(row.t_extrapolated.to_string());
                fields.push(csv_field(msg));
            }
        }
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin_catalog;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn carbonfish_base() -> SweepSpec {
        SweepSpec {
            varied: vec![(SweepParam::Prestress, GridSpec { min: 5.0, max: 20.0, step: 5.0 })],
            base_geometry: Geometry::new(137.0, 10.0, 0.5, 10.0, 2.1).unwrap(),
            material: "CFRP".into(),
            servo: "A66BHLW".into(),
            closure: ClosureSpec::end_shortening_default(),
            pcr: PcrModel::EulerStrip,
            servo_cap: ServoCapMode::Dimensional,
            alpha_min: 1.0,
            fix_shape: true,
        }
    }

    #[test]
    fn grid_values_inclusive() {
        let g = GridSpec { min: 5.0, max: 20.0, step: 5.0 };
        assert_eq!(g.values(), vec![5.0, 10.0, 15.0, 20.0]);
        let g1 = GridSpec { min: 0.25, max: 1.0, step: 0.25 };
        assert_eq!(g1.values(), vec![0.25, 0.5, 0.75, 1.0]);
        assert_eq!(GridSpec::fixed(2.1).values(), vec![2.1]);
    }

    #[test]
    fn grid_rejects_bad_specs() {
        assert!(GridSpec { min: 1.0, max: 0.0, step: 0.5 }.validate().is_err());
        assert!(GridSpec { min: 0.0, max: 1.0, step: 0.0 }.validate().is_err());
        assert!(GridSpec { min: 0.0, max: 1.0, step: -0.5 }.validate().is_err());
        assert!(GridSpec { min: 0.0, max: f64::INFINITY, step: 1.0 }.validate().is_err());
    }

    #[test]
    fn fixed_shape_torque_proportional_to_prestress() {
        let cat = builtin_catalog();
        let rows = sweep(&carbonfish_base(), &cat).unwrap();
        assert_eq!(rows.len(), 4);
        let torques: Vec<f64> =
            rows.iter().map(|r| r.outcome.as_ref().unwrap().hcm.t_act).collect();
        let base = torques[0] / 5.0;
        for (i, t) in torques.iter().enumerate() {
            let d = 5.0 * (i + 1) as f64;
            assert_relative_eq!(*t, base * d, max_relative = 1e-12);
        }
    }

    #[test]
    fn thickness_sweep_cubic_ratios() {
        let cat = builtin_catalog();
        let mut spec = carbonfish_base();
        spec.varied =
            vec![(SweepParam::Thickness, GridSpec { min: 0.25, max: 1.0, step: 0.25 })];
        let rows = sweep(&spec, &cat).unwrap();
        let torques: Vec<f64> =
            rows.iter().map(|r| r.outcome.as_ref().unwrap().hcm.t_act).collect();
        assert_eq!(torques[1] / torques[0], 8.0); // 0.5 vs 0.25
        assert_eq!(torques[3] / torques[1], 8.0); // 1.0 vs 0.5
        assert_eq!(torques[3] / torques[0], 64.0);
    }

    #[test]
    fn length_sweep_frequency_ratio() {
        let cat = builtin_catalog();
        let mut spec = carbonfish_base();
        spec.varied = vec![(SweepParam::HalfLength, GridSpec { min: 87.0, max: 137.0, step: 50.0 })];
        let rows = sweep(&spec, &cat).unwrap();
        let f: Vec<f64> = rows.iter().map(|r| r.outcome.as_ref().unwrap().hcm.f_m_hcm).collect();
        assert_relative_eq!(f[1] / f[0], (137.0f64 / 87.0).powi(-2), max_relative = 1e-12);
    }

    #[test]
    fn two_parameter_sweep_lexicographic() {
        let cat = builtin_catalog();
        let mut spec = carbonfish_base();
        spec.varied = vec![
            (SweepParam::Thickness, GridSpec { min: 0.25, max: 1.0, step: 0.25 }),
            (SweepParam::Width, GridSpec { min: 5.0, max: 15.0, step: 5.0 }),
        ];
        let rows = sweep(&spec, &cat).unwrap();
        assert_eq!(rows.len(), 12);
        // outer parameter changes slowest
        assert_eq!(rows[0].varied, vec![(SweepParam::Thickness, 0.25), (SweepParam::Width, 5.0)]);
        assert_eq!(rows[1].varied[1].1, 10.0);
        assert_eq!(rows[2].varied, vec![(SweepParam::Thickness, 0.25), (SweepParam::Width, 15.0)]);
        assert_eq!(rows[3].varied[0].1, 0.5);
    }

    #[test]
    fn infeasible_points_become_error_rows() {
        let cat = builtin_catalog();
        let mut spec = carbonfish_base();
        // D sweeps past l = 137 -> invalid geometry rows, not an abort
        spec.varied =
            vec![(SweepParam::Prestress, GridSpec { min: 100.0, max: 180.0, step: 40.0 })];
        let rows = sweep(&spec, &cat).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows[0].outcome.is_ok());
        assert!(rows[2].outcome.is_err());
        let csv = sweep_to_csv(&spec, &rows);
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.lines().nth(3).unwrap().contains("geometry.D"));
    }

    #[test]
    fn csv_is_deterministic_and_lf_terminated() {
        let cat = builtin_catalog();
        let spec = carbonfish_base();
        let a = sweep_to_csv(&spec, &sweep(&spec, &cat).unwrap());
        let b = sweep_to_csv(&spec, &sweep(&spec, &cat).unwrap());
        assert_eq!(a, b);
        assert!(!a.contains('\r'));
        assert!(a.ends_with('\n'));
        let header = a.lines().next().unwrap();
        assert!(header.starts_with("D,l,D,t,h,r,material,servo,p_cr,"));
    }

    #[test]
    fn extrapolated_thickness_flagged() {
        let cat = builtin_catalog();
        let mut spec = carbonfish_base();
        spec.varied =
            vec![(SweepParam::Thickness, GridSpec { min: 0.25, max: 0.5, step: 0.25 })];
        let rows = sweep(&spec, &cat).unwrap();
        assert!(rows[0].t_extrapolated); // 0.25 not a CFRP sheet
        assert!(!rows[1].t_extrapolated); // 0.5 is
    }

    #[test]
    fn feasibility_gate_on_reference_factors() {
        // against the coral prototype's catalog numbers: alpha 1.3 at a
        // 4.5 Hz servo cap
        let cat = builtin_catalog();
        let mut cfg = SearchConfig::at_point(87.0, 11.8, 15.0, 1.9);
        cfg.materials = Some(vec!["PETG".into()]);
        cfg.servos = Some(vec!["MG90S".into()]);
        cfg.servo_cap = ServoCapMode::Reference;
        let mut e = search(&cfg, &cat).unwrap().remove(0);
        e.alpha = 245.0 / 188.7;
        e.f_design = 4.5;
        assert!(is_feasible(&e, 1.0, 4.0));
        assert!(!is_feasible(&e, 1.0, 10.0)); // 4.5 Hz < 10 Hz target
        assert!(!is_feasible(&e, 10.0, 4.0)); // alpha 1.3 < 10
        assert!(is_feasible(&e, e.alpha, e.f_design)); // thresholds inclusive
    }

    #[test]
    fn search_finds_carbonfish_point() {
        let cat = builtin_catalog();
        let mut cfg = SearchConfig::at_point(137.0, 10.0, 10.0, 2.1);
        cfg.materials = Some(vec!["CFRP".into()]);
        cfg.servos = Some(vec!["A66BHLW".into()]);
        cfg.servo_cap = ServoCapMode::Reference;
        cfg.f_target = 10.0;
        let results = search(&cfg, &cat).unwrap();
        // catalog thicknesses 0.5 and 0.79 both clear 10 Hz at reference cap
        assert_eq!(results.len(), 2);
        assert!(results.iter().any(|e| e.geometry.thickness == 0.5));
        assert_eq!(results[0].f_design, 13.6);
        assert!(results.iter().all(|e| is_feasible(e, cfg.alpha_min, cfg.f_target)));
    }

    #[test]
    fn search_with_slow_servo_is_empty() {
        let cat = builtin_catalog();
        let mut cfg = SearchConfig::at_point(137.0, 10.0, 10.0, 2.1);
        cfg.materials = Some(vec!["CFRP".into()]);
        cfg.servos = Some(vec!["DS3230MG".into()]); // f_ref 3.08 Hz
        cfg.servo_cap = ServoCapMode::Reference;
        cfg.f_target = 10.0;
        let results = search(&cfg, &cat).unwrap();
        assert!(results.is_empty());
    }

    #[test]
    fn search_rejects_unknown_filter_names() {
        let cat = builtin_catalog();
        let mut cfg = SearchConfig::at_point(137.0, 10.0, 10.0, 2.1);
        cfg.servos = Some(vec!["NoSuchServo".into()]);
        assert!(matches!(
            search(&cfg, &cat),
            Err(SearchError::UnknownName { kind: "servo", .. })
        ));
    }

    #[test]
    fn search_skips_invalid_geometry_combinations() {
        let cat = builtin_catalog();
        // D grid extends past l: the invalid points are skipped silently.
        let mut cfg = SearchConfig::at_point(87.0, 11.8, 15.0, 1.9);
        cfg.d = GridSpec { min: 11.8, max: 200.0, step: 90.0 };
        cfg.materials = Some(vec!["PETG".into()]);
        cfg.servos = Some(vec!["MG90S".into()]);
        let results = search(&cfg, &cat).unwrap();
        assert!(results.iter().all(|e| e.geometry.prestress < e.geometry.half_length));
    }

    #[test]
    fn moving_mass_tiebreak_prefers_lighter_servo() {
        // MG90S (14 g) and SG92R (9 g) share every torque/speed figure, so
        // rows tie on f_design and alpha; SG92R must sort first on mass.
        let cat = builtin_catalog();
        let mut cfg = SearchConfig::at_point(87.0, 11.8, 15.0, 1.9);
        cfg.materials = Some(vec!["PETG".into()]);
        cfg.servos = Some(vec!["MG90S".into(), "SG92R".into()]);
        cfg.servo_cap = ServoCapMode::Reference;
        let results = search(&cfg, &cat).unwrap();
        assert_eq!(results.len(), 4); // two thicknesses x two servos
        assert_eq!(results[0].servo, "SG92R");
    }

    #[test]
    fn coral_point_is_feasible_at_four_hertz() {
        let cat = builtin_catalog();
        let mut cfg = SearchConfig::at_point(87.0, 11.8, 15.0, 1.9);
        cfg.materials = Some(vec!["PETG".into()]);
        cfg.servos = Some(vec!["MG90S".into()]);
        cfg.servo_cap = ServoCapMode::Reference;
        cfg.f_target = 4.0;
        let results = search(&cfg, &cat).unwrap();
        let coral: Vec<_> =
            results.iter().filter(|e| e.geometry.thickness == 0.762).collect();
        assert_eq!(coral.len(), 1);
        assert_eq!(coral[0].f_design, 4.5);
        assert!(coral[0].alpha >= 1.0);

        cfg.f_target = 10.0;
        assert!(search(&cfg, &cat).unwrap().is_empty());
    }

    #[test]
    fn alpha_threshold_ten_rejects_everything() {
        let cat = builtin_catalog();
        let mut cfg = SearchConfig::at_point(87.0, 11.8, 15.0, 1.9);
        cfg.materials = Some(vec!["PETG".into()]);
        cfg.servos = Some(vec!["MG90S".into()]);
        cfg.servo_cap = ServoCapMode::Reference;
        cfg.alpha_min = 10.0;
        let results = search(&cfg, &cat).unwrap();
        assert!(results.iter().all(|e| e.alpha >= 10.0));
    }

    #[test]
    fn monotone_in_prestress_and_width_with_fixed_shape() {
        let cat = builtin_catalog();
        let mut spec = carbonfish_base();
        spec.varied = vec![
            (SweepParam::Prestress, GridSpec { min: 4.0, max: 20.0, step: 4.0 }),
            (SweepParam::Width, GridSpec { min: 5.0, max: 20.0, step: 5.0 }),
        ];
        let rows = sweep(&spec, &cat).unwrap();
        let torque = |i: usize| rows[i].outcome.as_ref().unwrap().hcm.t_act;
        let cols = 4;
        for i in 0..rows.len() {
            if i % cols != cols - 1 {
                assert!(torque(i + 1) >= torque(i), "not monotone in h at {i}");
            }
            if i + cols < rows.len() {
                assert!(torque(i + cols) >= torque(i), "not monotone in D at {i}");
            }
        }
    }

    #[test]
    fn sweep_rows_reproducible_in_isolation() {
        let cat = builtin_catalog();
        let spec = carbonfish_base();
        let rows = sweep(&spec, &cat).unwrap();
        // re-run the third grid point alone
        let mut single = spec.clone();
        single.varied = vec![(SweepParam::Prestress, GridSpec::fixed(15.0))];
        let alone = sweep(&single, &cat).unwrap();
        assert_eq!(alone[0].outcome, rows[2].outcome);
    }

    #[test]
    fn rejects_duplicate_varied_params() {
        let mut spec = carbonfish_base();
        spec.varied = vec![
            (SweepParam::Prestress, GridSpec::fixed(5.0)),
            (SweepParam::Prestress, GridSpec::fixed(10.0)),
        ];
        assert!(matches!(sweep(&spec, &builtin_catalog()), Err(SearchError::Validation(_))));
    }

    #[test]
    fn speed_band_scales_with_design_frequency() {
        let cat = builtin_catalog();
        let rows = sweep(&carbonfish_base(), &cat).unwrap();
        for row in &rows {
            let e = row.outcome.as_ref().unwrap();
            assert_abs_diff_eq!(e.speed_band.lo, 2.0 * e.f_design * 0.34, epsilon = 1e-12);
            assert_abs_diff_eq!(e.speed_band.hi, 2.0 * e.f_design * 0.54, epsilon = 1e-12);
        }
    }
}
