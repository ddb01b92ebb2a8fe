//! Flag definitions and the small parsers for structured flag values.

use clap::{Args, Parser, Subcommand};
use hcm_core::{ClosureSpec, GridSpec, Objective, PcrModel, ServoCapMode, SweepParam};

#[derive(Parser, Debug)]
#[command(
    name = "hcm",
    version,
    about = "Design toolkit for servo-driven hair-clip-mechanism compliant robots"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate one design (a preset or an explicit geometry/material/servo)
    /// and print a JSON report.
    Eval(EvalArgs),
    /// Sweep one or two design parameters around a base design; prints CSV.
    Sweep(SweepArgs),
    /// Exhaustively search geometry grids against catalog materials and
    /// servos; prints a ranked JSON list of feasible designs.
    Search(SearchArgs),
    /// Inspect or validate catalog files.
    Catalog(CatalogArgs),
}

#[derive(Args, Debug, Clone)]
pub struct DesignSelector {
    /// Preset name from the catalog (pink, coral, carbonfish in the
    /// built-in one).
    #[arg(long)]
    pub preset: Option<String>,
    /// Explicit geometry as l,D,t,h,r (mm; r dimensionless).
    #[arg(long, value_name = "L,D,T,H,R", conflicts_with = "preset")]
    pub geometry: Option<String>,
    /// Material name (required with --geometry; overrides the preset's).
    #[arg(long)]
    pub material: Option<String>,
    /// Servo name (required with --geometry and for presets without one;
    /// overrides the preset's).
    #[arg(long)]
    pub servo: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct ModelFlags {
    /// Amplitude closure: calibrated=U_TIP | end-shortening[=KAPPA] |
    /// explicit=A1. Default: calibrated with the preset's reference tip
    /// displacement when it has one, otherwise end-shortening=1.
    #[arg(long)]
    pub closure: Option<String>,
    /// Critical-load model: euler | direct=P_CR. Default: euler.
    #[arg(long)]
    pub pcr: Option<String>,
    /// Servo frequency cap: dimensional (speed*L_horn/4u(L1)) or
    /// reference (datasheet f_ref). Default: dimensional.
    #[arg(long, value_name = "MODE")]
    pub servo_cap: Option<String>,
    /// Feasibility threshold on the design factor alpha.
    #[arg(long, default_value_t = 1.0)]
    pub alpha_min: f64,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub design: DesignSelector,
    #[command(flatten)]
    pub model: ModelFlags,
    /// Catalog file (defaults to the built-in catalog).
    #[arg(long)]
    pub catalog: Option<String>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub output: Option<String>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Varied parameter as NAME=MIN:MAX:STEP (NAME one of l, D, t, h, r);
    /// repeat once for a two-parameter sweep.
    #[arg(long, value_name = "NAME=MIN:MAX:STEP", required = true)]
    pub vary: Vec<String>,
    /// Pin a base parameter as NAME=VALUE; must not overlap --vary.
    #[arg(long = "fix", value_name = "NAME=VALUE")]
    pub fixed: Vec<String>,
    /// Resolve the mode shape at the base design and hold the amplitude
    /// fixed across the sweep.
    #[arg(long)]
    pub fix_shape: bool,
    #[command(flatten)]
    pub design: DesignSelector,
    #[command(flatten)]
    pub model: ModelFlags,
    #[arg(long)]
    pub catalog: Option<String>,
    #[arg(long)]
    pub output: Option<String>,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    /// Geometry grid as NAME=MIN:MAX:STEP; required once for each of
    /// l, D, h, r. A t grid is optional (default: each material's
    /// catalog-listed thicknesses; a t grid marks results extrapolated).
    #[arg(long, value_name = "NAME=MIN:MAX:STEP", required = true)]
    pub grid: Vec<String>,
    /// Restrict to these materials (comma-separated names).
    #[arg(long, value_delimiter = ',')]
    pub materials: Option<Vec<String>>,
    /// Restrict to these servos (comma-separated names).
    #[arg(long, value_delimiter = ',')]
    pub servos: Option<Vec<String>>,
    /// Required design frequency (Hz).
    #[arg(long, default_value_t = 0.0)]
    pub target_freq: f64,
    /// Ranking key: frequency | alpha | lightest.
    #[arg(long, default_value = "frequency")]
    pub objective: String,
    /// Keep only the first N ranked results.
    #[arg(long)]
    pub limit: Option<usize>,
    #[command(flatten)]
    pub model: ModelFlags,
    #[arg(long)]
    pub catalog: Option<String>,
    #[arg(long)]
    pub output: Option<String>,
}

#[derive(Args, Debug)]
pub struct CatalogArgs {
    #[command(subcommand)]
    pub action: CatalogAction,
}

#[derive(Subcommand, Debug)]
pub enum CatalogAction {
    /// Print the canonical serialization of a catalog.
    List {
        #[arg(long)]
        catalog: Option<String>,
        #[arg(long)]
        output: Option<String>,
    },
    /// Parse and validate a catalog file; exits 0 when valid.
    Validate { path: String },
}

/// "NAME=MIN:MAX:STEP" -> (param, grid)
pub fn parse_vary(s: &str) -> Result<(SweepParam, GridSpec), String> {
    let (name, rest) = s.split_once('=').ok_or(format!(
        "expected NAME=MIN:MAX:STEP, got \"{s}\""
    ))?;
    let param = SweepParam::parse(name.trim())
        .ok_or(format!("unknown parameter \"{name}\" (expected l, D, t, h, or r)"))?;
    let parts: Vec<&str> = rest.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected MIN:MAX:STEP after =, got \"{rest}\""));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|_| format!("\"{p}\" is not a number")))
        .collect::<Result<_, _>>()?;
    Ok((param, GridSpec { min: nums[0], max: nums[1], step: nums[2] }))
}

/// "NAME=VALUE" -> (param, value)
pub fn parse_fix(s: &str) -> Result<(SweepParam, f64), String> {
    let (name, rest) = s.split_once('=').ok_or(format!("expected NAME=VALUE, got \"{s}\""))?;
    let param = SweepParam::parse(name.trim())
        .ok_or(format!("unknown parameter \"{name}\" (expected l, D, t, h, or r)"))?;
    let v: f64 = rest.trim().parse().map_err(|_| format!("\"{rest}\" is not a number"))?;
    Ok((param, v))
}

/// "L,D,T,H,R" -> the five geometry numbers
pub fn parse_geometry_tuple(s: &str) -> Result<[f64; 5], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 5 {
        return Err(format!("expected 5 comma-separated values l,D,t,h,r, got {}", parts.len()));
    }
    let mut out = [0.0; 5];
    for (i, p) in parts.iter().enumerate() {
        out[i] = p.trim().parse().map_err(|_| format!("\"{p}\" is not a number"))?;
    }
    Ok(out)
}

pub fn parse_closure(s: &str) -> Result<ClosureSpec, String> {
    let (kind, value) = match s.split_once('=') {
        Some((k, v)) => (k.trim(), Some(v.trim())),
        None => (s.trim(), None),
    };
    let number = |v: Option<&str>, what: &str| -> Result<f64, String> {
        let v = v.ok_or(format!("closure {what} requires a value, e.g. {what}=36"))?;
        v.parse().map_err(|_| format!("\"{v}\" is not a number"))
    };
    match kind {
        "calibrated" => Ok(ClosureSpec::Calibrated { u_target: number(value, "calibrated")? }),
        "end-shortening" | "end_shortening" => Ok(ClosureSpec::EndShortening {
            kappa: match value {
                None => 1.0,
                Some(v) => v.parse().map_err(|_| format!("\"{v}\" is not a number"))?,
            },
        }),
        "explicit" => Ok(ClosureSpec::Explicit { a1: number(value, "explicit")? }),
        other => Err(format!(
            "unknown closure \"{other}\" (expected calibrated=U, end-shortening[=K], explicit=A1)"
        )),
    }
}

pub fn parse_pcr(s: &str) -> Result<PcrModel, String> {
    let (kind, value) = match s.split_once('=') {
        Some((k, v)) => (k.trim(), Some(v.trim())),
        None => (s.trim(), None),
    };
    match kind {
        "euler" | "euler-strip" | "euler_strip" => Ok(PcrModel::EulerStrip),
        "direct" => {
            let v = value.ok_or("pcr direct requires a value, e.g. direct=1.23".to_string())?;
            let p_cr: f64 = v.parse().map_err(|_| format!("\"{v}\" is not a number"))?;
            Ok(PcrModel::Direct { p_cr })
        }
        other => Err(format!("unknown pcr model \"{other}\" (expected euler or direct=P)")),
    }
}

pub fn parse_servo_cap(s: &str) -> Result<ServoCapMode, String> {
    match s.trim() {
        "dimensional" => Ok(ServoCapMode::Dimensional),
        "reference" => Ok(ServoCapMode::Reference),
        other => Err(format!(
            "unknown servo-cap mode \"{other}\" (expected dimensional or reference)"
        )),
    }
}

pub fn parse_objective(s: &str) -> Result<Objective, String> {
    match s.trim() {
        "frequency" => Ok(Objective::FrequencyFirst),
        "alpha" => Ok(Objective::AlphaFirst),
        "lightest" => Ok(Objective::LightestFirst),
        other => Err(format!(
            "unknown objective \"{other}\" (expected frequency, alpha, or lightest)"
        )),
    }
}
