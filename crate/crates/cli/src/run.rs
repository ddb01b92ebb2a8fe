//! Command implementations and the error-to-exit-code mapping.

use std::fmt;
use std::fs;

use hcm_core::catalog::{builtin_catalog, parse_catalog, serialize_catalog};
use hcm_core::report::{eval_report, search_report, to_json_string};
use hcm_core::{
    evaluate_design, sweep, sweep_to_csv, Catalog, CatalogError, ClosureSpec, EvalOptions,
    Geometry, GridSpec, MaterialSpec, ModelError, SearchConfig, SearchError, ServoCapMode,
    ServoSpec, SweepParam, SweepSpec, ThicknessRange,
};

use crate::args::{
    parse_closure, parse_fix, parse_geometry_tuple, parse_objective, parse_pcr, parse_servo_cap,
    parse_vary, CatalogAction, Cli, Command, DesignSelector, EvalArgs, ModelFlags, SearchArgs,
    SweepArgs,
};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Catalog(CatalogError),
    Model(ModelError),
    Search(SearchError),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => write!(f, "{m}"),
            CliError::Catalog(e) => write!(f, "{e}"),
            CliError::Model(e) => write!(f, "{e}"),
            CliError::Search(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    /// 2 for validation/usage problems, 3 for numeric failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) | CliError::Catalog(_) => 2,
            CliError::Model(e) => {
                if e.is_numeric() {
                    3
                } else {
                    2
                }
            }
            CliError::Search(SearchError::Model(e)) => {
                if e.is_numeric() {
                    3
                } else {
                    2
                }
            }
            CliError::Search(_) => 2,
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Model(e)
    }
}

impl From<CatalogError> for CliError {
    fn from(e: CatalogError) -> Self {
        CliError::Catalog(e)
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        CliError::Search(e)
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

fn load_catalog(path: &Option<String>) -> Result<Catalog, CliError> {
    match path {
        None => Ok(builtin_catalog()),
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| CliError::Io(format!("cannot read catalog {p}: {e}")))?;
            Ok(parse_catalog(&text)?)
        }
    }
}

fn emit(output: &Option<String>, content: &str) -> Result<(), CliError> {
    match output {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => fs::write(path, content)
            .map_err(|e| CliError::Io(format!("cannot write {path}: {e}"))),
    }
}

/// A resolved design: concrete geometry, material, servo, and the preset
/// it came from (if any).
struct ResolvedDesign<'a> {
    geometry: Geometry,
    material: &'a MaterialSpec,
    servo: &'a ServoSpec,
    preset: Option<(&'a str, &'a hcm_core::Preset)>,
}

fn resolve_design<'a>(
    sel: &DesignSelector,
    cat: &'a Catalog,
) -> Result<ResolvedDesign<'a>, CliError> {
    let lookup_material = |name: &str| {
        cat.materials
            .get(name)
            .ok_or(CliError::Usage(format!("unknown material \"{name}\"")))
    };
    let lookup_servo = |name: &str| {
        cat.servos.get(name).ok_or(CliError::Usage(format!("unknown servo \"{name}\"")))
    };

    if let Some(name) = &sel.preset {
        let (key, preset) = cat
            .presets
            .get_key_value(name.as_str())
            .ok_or(CliError::Usage(format!("unknown preset \"{name}\"")))?;
        let material = lookup_material(sel.material.as_deref().unwrap_or(&preset.material))?;
        let servo_name = sel
            .servo
            .as_deref()
            .or(preset.servo.as_deref())
            .ok_or(CliError::Usage(format!(
                "preset \"{name}\" has no servo on file; pass --servo NAME"
            )))?;
        let servo = lookup_servo(servo_name)?;
        return Ok(ResolvedDesign {
            geometry: preset.geometry,
            material,
            servo,
            preset: Some((key.as_str(), preset)),
        });
    }

    let Some(tuple) = &sel.geometry else {
        return usage("pass either --preset NAME or --geometry l,D,t,h,r");
    };
    let [l, d, t, h, r] = parse_geometry_tuple(tuple).map_err(CliError::Usage)?;
    let geometry = Geometry::new(l, d, t, h, r)?;
    let material_name = sel
        .material
        .as_deref()
        .ok_or(CliError::Usage("--geometry requires --material NAME".into()))?;
    let servo_name = sel
        .servo
        .as_deref()
        .ok_or(CliError::Usage("--geometry requires --servo NAME".into()))?;
    Ok(ResolvedDesign {
        geometry,
        material: lookup_material(material_name)?,
        servo: lookup_servo(servo_name)?,
        preset: None,
    })
}

/// Closure default: the preset's calibrated tip target when it has one,
/// otherwise the geometry-only end-shortening closure.
fn resolve_options(
    flags: &ModelFlags,
    preset: Option<(&str, &hcm_core::Preset)>,
) -> Result<EvalOptions, CliError> {
    let closure = match &flags.closure {
        Some(s) => parse_closure(s).map_err(CliError::Usage)?,
        None => match preset.and_then(|(_, p)| p.u_tip_ref) {
            Some(u_tip) => ClosureSpec::Calibrated { u_target: u_tip },
            None => ClosureSpec::end_shortening_default(),
        },
    };
    let pcr = match &flags.pcr {
        Some(s) => parse_pcr(s).map_err(CliError::Usage)?,
        None => hcm_core::PcrModel::EulerStrip,
    };
    let servo_cap = match &flags.servo_cap {
        Some(s) => parse_servo_cap(s).map_err(CliError::Usage)?,
        None => ServoCapMode::Dimensional,
    };
    Ok(EvalOptions { closure, pcr, servo_cap, alpha_min: flags.alpha_min, ..EvalOptions::default() })
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Eval(args) => run_eval(args),
        Command::Sweep(args) => run_sweep(args),
        Command::Search(args) => run_search(args),
        Command::Catalog(args) => match args.action {
            CatalogAction::List { catalog, output } => {
                let cat = load_catalog(&catalog)?;
                emit(&output, &serialize_catalog(&cat))
            }
            CatalogAction::Validate { path } => {
                let cat = load_catalog(&Some(path))?;
                println!(
                    "ok: {} materials, {} servos, {} presets",
                    cat.materials.len(),
                    cat.servos.len(),
                    cat.presets.len()
                );
                Ok(())
            }
        },
    }
}

fn run_eval(args: EvalArgs) -> Result<(), CliError> {
    let cat = load_catalog(&args.catalog)?;
    let design = resolve_design(&args.design, &cat)?;
    let opts = resolve_options(&args.model, design.preset)?;
    let evaluation = evaluate_design(&design.geometry, design.material, design.servo, &opts)?;
    let report = eval_report(&evaluation, design.servo, &opts, design.preset);
    emit(&args.output, &to_json_string(&report))
}

fn run_sweep(args: SweepArgs) -> Result<(), CliError> {
    let cat = load_catalog(&args.catalog)?;
    // Default base design: the carbonfish preset.
    let mut selector = args.design.clone();
    if selector.preset.is_none() && selector.geometry.is_none() {
        selector.preset = Some("carbonfish".into());
    }
    let design = resolve_design(&selector, &cat)?;
    let opts = resolve_options(&args.model, design.preset)?;

    let mut varied = Vec::new();
    for v in &args.vary {
        varied.push(parse_vary(v).map_err(CliError::Usage)?);
    }
    if varied.len() > 2 {
        return usage("at most two --vary flags are supported");
    }
    let mut base_geometry = design.geometry;
    for f in &args.fixed {
        let (param, value) = parse_fix(f).map_err(CliError::Usage)?;
        if varied.iter().any(|(p, _)| *p == param) {
            return usage(format!(
                "parameter \"{}\" appears in both --vary and --fix",
                param.as_str()
            ));
        }
        apply_param(&mut base_geometry, param, value);
    }

    let spec = SweepSpec {
        varied,
        base_geometry,
        material: design.material.name.clone(),
        servo: design.servo.name.clone(),
        closure: opts.closure,
        pcr: opts.pcr,
        servo_cap: opts.servo_cap,
        alpha_min: opts.alpha_min,
        fix_shape: args.fix_shape,
    };
    let rows = sweep(&spec, &cat)?;
    emit(&args.output, &sweep_to_csv(&spec, &rows))
}

fn apply_param(g: &mut Geometry, param: SweepParam, value: f64) {
    match param {
        SweepParam::HalfLength => g.half_length = value,
        SweepParam::Prestress => g.prestress = value,
        SweepParam::Thickness => g.thickness = value,
        SweepParam::Width => g.width = value,
        SweepParam::SectionRatio => g.section_ratio = value,
    }
}

fn run_search(args: SearchArgs) -> Result<(), CliError> {
    let cat = load_catalog(&args.catalog)?;
    let mut grids: Vec<(SweepParam, GridSpec)> = Vec::new();
    for g in &args.grid {
        let parsed = parse_vary(g).map_err(CliError::Usage)?;
        if grids.iter().any(|(p, _)| *p == parsed.0) {
            return usage(format!("duplicate --grid for \"{}\"", parsed.0.as_str()));
        }
        grids.push(parsed);
    }
    let take = |param: SweepParam| -> Result<GridSpec, CliError> {
        grids
            .iter()
            .find(|(p, _)| *p == param)
            .map(|(_, g)| *g)
            .ok_or(CliError::Usage(format!(
                "search needs --grid {0}=MIN:MAX:STEP (use MIN=MAX for a fixed {0})",
                param.as_str()
            )))
    };

    let opts_flags = &args.model;
    let closure = match &opts_flags.closure {
        Some(s) => parse_closure(s).map_err(CliError::Usage)?,
        None => ClosureSpec::end_shortening_default(),
    };
    let pcr = match &opts_flags.pcr {
        Some(s) => parse_pcr(s).map_err(CliError::Usage)?,
        None => hcm_core::PcrModel::EulerStrip,
    };
    let servo_cap = match &opts_flags.servo_cap {
        Some(s) => parse_servo_cap(s).map_err(CliError::Usage)?,
        None => ServoCapMode::Dimensional,
    };

    let cfg = SearchConfig {
        l: take(SweepParam::HalfLength)?,
        d: take(SweepParam::Prestress)?,
        h: take(SweepParam::Width)?,
        r: take(SweepParam::SectionRatio)?,
        t: grids
            .iter()
            .find(|(p, _)| *p == SweepParam::Thickness)
            .map(|(_, g)| ThicknessRange::Grid(*g))
            .unwrap_or(ThicknessRange::CatalogListed),
        materials: args.materials.clone(),
        servos: args.servos.clone(),
        closure,
        pcr,
        servo_cap,
        alpha_min: args.model.alpha_min,
        f_target: args.target_freq,
        objective: parse_objective(&args.objective).map_err(CliError::Usage)?,
    };
    let mut results = hcm_core::search(&cfg, &cat)?;
    if let Some(limit) = args.limit {
        results.truncate(limit);
    }
    let report = search_report(&results);
    emit(&args.output, &to_json_string(&report))
}
