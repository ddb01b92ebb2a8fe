//! Material and servo catalogs plus prototype presets, with a canonical
//! structured-text file format.
//!
//! The built-in catalog ships three typical HCM sheet materials, seven
//! common hobby servos, and the three prototype presets (`pink`, `coral`,
//! `carbonfish`) including their measured reference values. Catalogs are
//! immutable after construction and safe for concurrent reads.

mod format;

pub use format::{parse_catalog, serialize_catalog};

use std::collections::BTreeMap;

use crate::model::{Geometry, MaterialSpec, ModelError};
use crate::drive::ServoSpec;
use thiserror::Error;

/// Errors raised while parsing or validating a catalog document.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum CatalogError {
    /// Malformed document text.
    #[error("syntax error at line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    /// A field violated its invariant; `field` is the dotted path, e.g.
    /// `materials.PETG.E`.
    #[error("invalid value for {field}: {msg}")]
    Validation { field: String, msg: String },
    /// A preset references a material or servo that is not in the catalog.
    #[error("preset {preset} references unknown {kind} \"{name}\"")]
    DanglingReference { preset: String, kind: &'static str, name: String },
    /// An entry name appears twice within a section.
    #[error("duplicate {kind} entry \"{name}\"")]
    Duplicate { kind: &'static str, name: String },
}

/// One prototype preset: a geometry bound to catalog entries, plus
/// optional measured reference values (reported alongside computed
/// results, never asserted against them).
#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub geometry: Geometry,
    pub material: String,
    /// Some prototypes were driven by hand rather than a specific servo.
    pub servo: Option<String>,
    /// Reference actuation torque (mm·N), if one was reported.
    pub t_act_ref: Option<f64>,
    /// Reference tip displacement (mm), if one was reported.
    pub u_tip_ref: Option<f64>,
}

/// An immutable, validated catalog of materials, servos, and presets.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Catalog {
    pub materials: BTreeMap<String, MaterialSpec>,
    pub servos: BTreeMap<String, ServoSpec>,
    pub presets: BTreeMap<String, Preset>,
}

impl Catalog {
    /// Check cross-references and entry invariants.
    pub fn validate(&self) -> Result<(), CatalogError> {
        for (name, mat) in &self.materials {
            check_name("materials", name)?;
            if name != &mat.name {
                return Err(CatalogError::Validation {
                    field: format!("materials.{name}.name"),
                    msg: format!("entry key does not match name field \"{}\"", mat.name),
                });
            }
            mat.validate().map_err(|e| model_to_catalog(e, &format!("materials.{name}")))?;
        }
        for (name, servo) in &self.servos {
            check_name("servos", name)?;
            if name != &servo.name {
                return Err(CatalogError::Validation {
                    field: format!("servos.{name}.name"),
                    msg: format!("entry key does not match name field \"{}\"", servo.name),
                });
            }
            servo.validate().map_err(|e| model_to_catalog(e, &format!("servos.{name}")))?;
        }
        for (name, preset) in &self.presets {
            check_name("presets", name)?;
            preset
                .geometry
                .validate()
                .map_err(|e| model_to_catalog(e, &format!("presets.{name}")))?;
            if !self.materials.contains_key(&preset.material) {
                return Err(CatalogError::DanglingReference {
                    preset: name.clone(),
                    kind: "material",
                    name: preset.material.clone(),
                });
            }
            if let Some(servo) = &preset.servo {
                if !self.servos.contains_key(servo) {
                    return Err(CatalogError::DanglingReference {
                        preset: name.clone(),
                        kind: "servo",
                        name: servo.clone(),
                    });
                }
            }
            for (field, v) in [("T_act_ref", preset.t_act_ref), ("u_tip_ref", preset.u_tip_ref)] {
                if let Some(v) = v {
                    if !v.is_finite() || v <= 0.0 {
                        return Err(CatalogError::Validation {
                            field: format!("presets.{name}.{field}"),
                            msg: format!("must be finite and > 0, got {v}"),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

fn model_to_catalog(e: ModelError, prefix: &str) -> CatalogError {
    let msg = e.to_string();
    // Geometry/material messages already carry their own field names; keep
    // them and prepend the entry path.
    CatalogError::Validation { field: prefix.to_string(), msg }
}

pub(crate) fn check_name(section: &str, name: &str) -> Result<(), CatalogError> {
    let ok = !name.is_empty()
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
    if ok {
        Ok(())
    } else {
        Err(CatalogError::Validation {
            field: format!("{section}.{name}"),
            msg: "entry names must be non-empty and use only [A-Za-z0-9_-]".into(),
        })
    }
}

/// The built-in catalog: three sheet materials, seven servos, and the
/// prototype presets `pink`, `coral`, and `carbonfish`.
///
/// Steel ships without a preset: steel prototypes have not been built,
/// but the sheets behave like the other materials in the model.
pub fn builtin_catalog() -> Catalog {
    let mut materials = BTreeMap::new();
    for m in [
        MaterialSpec {
            name: "PETG".into(),
            youngs_modulus: 1.7e3,
            density: 1.25e-9,
            specific_modulus: Some(1.42e12),
            thicknesses: vec![0.381, 0.762],
        },
        MaterialSpec {
            name: "CFRP".into(),
            youngs_modulus: 64e3,
            density: 1.6e-9,
            specific_modulus: Some(40e12),
            thicknesses: vec![0.5, 0.79],
        },
        MaterialSpec {
            name: "steel".into(),
            youngs_modulus: 200e3,
            density: 7.8e-9,
            specific_modulus: Some(25e12),
            thicknesses: vec![0.15, 0.5],
        },
    ] {
        materials.insert(m.name.clone(), m);
    }

    let mut servos = BTreeMap::new();
    for (name, stall_torque, speed, weight, horn_length, f_ref) in [
        ("MG90S", 245.0, 10.5, 14.0, 10.0, 4.5),
        ("B24CLM", 588.0, 12.3, 22.0, 20.0, 6.15),
        ("A66BHLW", 3234.0, 15.4, 66.0, 25.0, 13.6),
        ("A06CLS", 294.0, 20.1, 7.0, 13.0, 17.0),
        ("DS3230MG", 3381.0, 6.16, 58.0, 25.0, 3.08),
        ("SG92R", 245.0, 10.5, 9.0, 10.0, 4.5),
        ("ZOSKAY", 3430.0, 9.5, 60.0, 25.0, 4.76),
    ] {
        servos.insert(
            name.to_string(),
            ServoSpec {
                name: name.into(),
                stall_torque,
                speed,
                weight,
                horn_length,
                f_ref,
            },
        );
    }

    let mut presets = BTreeMap::new();
    presets.insert(
        "pink".to_string(),
        Preset {
            geometry: Geometry::new(87.5, 17.1, 0.381, 15.0, 6.0).expect("builtin geometry"),
            material: "PETG".into(),
            servo: None,
            t_act_ref: Some(28.3),
            u_tip_ref: None,
        },
    );
    presets.insert(
        "coral".to_string(),
        Preset {
            geometry: Geometry::new(87.0, 11.8, 0.762, 15.0, 1.9).expect("builtin geometry"),
            material: "PETG".into(),
            servo: Some("MG90S".into()),
            t_act_ref: Some(188.7),
            u_tip_ref: None,
        },
    );
    presets.insert(
        "carbonfish".to_string(),
        Preset {
            geometry: Geometry::new(137.0, 10.0, 0.5, 10.0, 2.1).expect("builtin geometry"),
            material: "CFRP".into(),
            servo: Some("A66BHLW".into()),
            t_act_ref: Some(1177.0),
            u_tip_ref: Some(36.0),
        },
    );

    let cat = Catalog { materials, servos, presets };
    debug_assert!(cat.validate().is_ok());
    cat
}
