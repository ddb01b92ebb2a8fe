//! The catalog file format: a UTF-8 structured-text document with three
//! top-level sections. Units are fixed by the format (mm, MPa, tonne/mm³,
//! mm·N, rad/s, g, Hz); values are plain decimal numbers, never unit
//! strings.
//!
//! ```text
//! [materials]
//!
//! [materials.PETG]
//! E = 1700.0
//! rho_s = 1.25e-9
//! specific_modulus = 1420000000000.0
//! thicknesses = [0.381, 0.762]
//!
//! [servos]
//!
//! [servos.MG90S]
//! T_servo = 245.0
//! speed = 10.5
//! weight = 14.0
//! L_horn = 10.0
//! f_ref = 4.5
//!
//! [presets]
//!
//! [presets.coral]
//! l = 87.0
//! D = 11.8
//! t = 0.762
//! h = 15.0
//! r = 1.9
//! material = PETG
//! servo = MG90S
//! T_act_ref = 188.7
//! ```
//!
//! Canonical serialization: the three section markers in fixed order,
//! entries sorted by name, fields in the order shown above, floats in
//! shortest round-trip decimal rendering. `parse(serialize(c)) == c` for
//! every valid catalog, and serializing a parsed document canonicalizes
//! it in one pass. `#` starts a comment; comments are accepted on input
//! and never emitted.

use super::{check_name, Catalog, CatalogError, Preset};
use crate::drive::ServoSpec;
use crate::fmt::render_f64;
use crate::model::{Geometry, MaterialSpec};

const SECTIONS: [&str; 3] = ["materials", "servos", "presets"];

#[derive(Debug)]
struct RawEntry {
    section: usize, // index into SECTIONS
    name: String,
    header_line: usize,
    fields: Vec<(String, String, usize)>, // key, raw value, line
}

/// Parse a catalog document, validating syntax, field sets, invariants,
/// and cross-references.
pub fn parse_catalog(text: &str) -> Result<Catalog, CatalogError> {
    let entries = tokenize(text)?;

    let mut catalog = Catalog::default();
    for entry in &entries {
        match SECTIONS[entry.section] {
            "materials" => {
                let m = build_material(entry)?;
                if catalog.materials.insert(m.name.clone(), m).is_some() {
                    return Err(CatalogError::Duplicate {
                        kind: "material",
                        name: entry.name.clone(),
                    });
                }
            }
            "servos" => {
                let s = build_servo(entry)?;
                if catalog.servos.insert(s.name.clone(), s).is_some() {
                    return Err(CatalogError::Duplicate { kind: "servo", name: entry.name.clone() });
                }
            }
            _ => {
                let p = build_preset(entry)?;
                if catalog.presets.insert(entry.name.clone(), p).is_some() {
                    return Err(CatalogError::Duplicate { kind: "preset", name: entry.name.clone() });
                }
            }
        }
    }
    catalog.validate()?;
    Ok(catalog)
}

fn tokenize(text: &str) -> Result<Vec<RawEntry>, CatalogError> {
    let mut entries: Vec<RawEntry> = Vec::new();
    let mut current: Option<RawEntry> = None;

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }

        if let Some(header) = line.strip_prefix('[') {
            let header = header.strip_suffix(']').ok_or(CatalogError::Syntax {
                line: line_no,
                msg: format!("unterminated section header \"{line}\""),
            })?;
            if let Some(e) = current.take() {
                entries.push(e);
            }
            match header.split_once('.') {
                None => {
                    // Bare section markers are structural only; entries
                    // carry their own section in the dotted header.
                    SECTIONS.iter().position(|s| *s == header).ok_or_else(|| {
                        CatalogError::Syntax {
                            line: line_no,
                            msg: format!(
                                "unknown section \"{header}\" (expected materials, servos, presets)"
                            ),
                        }
                    })?;
                }
                Some((section_name, entry_name)) => {
                    let section =
                        SECTIONS.iter().position(|s| *s == section_name).ok_or_else(|| {
                            CatalogError::Syntax {
                                line: line_no,
                                msg: format!("unknown section \"{section_name}\""),
                            }
                        })?;
                    check_name(section_name, entry_name)?;
                    current = Some(RawEntry {
                        section,
                        name: entry_name.to_string(),
                        header_line: line_no,
                        fields: Vec::new(),
                    });
                }
            }
            continue;
        }

        let (key, value) = line.split_once('=').ok_or_syntax(line_no, line)?;
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() || value.is_empty() {
            return Err(CatalogError::Syntax {
                line: line_no,
                msg: format!("expected \"key = value\", got \"{line}\""),
            });
        }
        let entry = current.as_mut().ok_or(CatalogError::Syntax {
            line: line_no,
            msg: "field outside of any [section.entry] header".into(),
        })?;
        if entry.fields.iter().any(|(k, _, _)| k == key) {
            return Err(CatalogError::Syntax {
                line: line_no,
                msg: format!(
                    "duplicate field \"{key}\" in {}.{}",
                    SECTIONS[entry.section], entry.name
                ),
            });
        }
        entry.fields.push((key.to_string(), value.to_string(), line_no));
    }
    if let Some(e) = current.take() {
        entries.push(e);
    }
    Ok(entries)
}

trait OkOrSyntax<'a> {
    fn ok_or_syntax(self, line: usize, text: &str) -> Result<(&'a str, &'a str), CatalogError>;
}

impl<'a> OkOrSyntax<'a> for Option<(&'a str, &'a str)> {
    fn ok_or_syntax(self, line: usize, text: &str) -> Result<(&'a str, &'a str), CatalogError> {
        self.ok_or(CatalogError::Syntax {
            line,
            msg: format!("expected \"key = value\", got \"{text}\""),
        })
    }
}

struct FieldReader<'a> {
    entry: &'a RawEntry,
    path: String,
    taken: Vec<String>,
}

impl<'a> FieldReader<'a> {
    fn new(entry: &'a RawEntry) -> Self {
        let path = format!("{}.{}", SECTIONS[entry.section], entry.name);
        FieldReader { entry, path, taken: Vec::new() }
    }

    fn raw(&mut self, key: &str) -> Option<(&'a str, usize)> {
        self.taken.push(key.to_string());
        self.entry
            .fields
            .iter()
            .find(|(k, _, _)| k == key)
            .map(|(_, v, line)| (v.as_str(), *line))
    }

    fn number(&mut self, key: &str) -> Result<f64, CatalogError> {
        let (v, line) = self.raw(key).ok_or_else(|| CatalogError::Validation {
            field: format!("{}.{key}", self.path),
            msg: format!("missing required field (line {})", self.entry.header_line),
        })?;
        parse_number(v, line, &format!("{}.{key}", self.path))
    }

    fn number_opt(&mut self, key: &str) -> Result<Option<f64>, CatalogError> {
        match self.raw(key) {
            None => Ok(None),
            Some((v, line)) => {
                parse_number(v, line, &format!("{}.{key}", self.path)).map(Some)
            }
        }
    }

    fn number_list(&mut self, key: &str) -> Result<Vec<f64>, CatalogError> {
        let (v, line) = self.raw(key).ok_or_else(|| CatalogError::Validation {
            field: format!("{}.{key}", self.path),
            msg: format!("missing required field (line {})", self.entry.header_line),
        })?;
        let field = format!("{}.{key}", self.path);
        let inner = v
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or(CatalogError::Syntax {
                line,
                msg: format!("{field}: expected a bracketed list like [0.5, 0.79]"),
            })?
            .trim();
        if inner.is_empty() {
            return Ok(Vec::new());
        }
        inner
            .split(',')
            .map(|item| parse_number(item.trim(), line, &field))
            .collect()
    }

    fn name(&mut self, key: &str) -> Result<String, CatalogError> {
        let (v, line) = self.raw(key).ok_or_else(|| CatalogError::Validation {
            field: format!("{}.{key}", self.path),
            msg: format!("missing required field (line {})", self.entry.header_line),
        })?;
        check_name_value(v, line, &format!("{}.{key}", self.path))
    }

    fn name_opt(&mut self, key: &str) -> Result<Option<String>, CatalogError> {
        match self.raw(key) {
            None => Ok(None),
            Some((v, line)) => {
                check_name_value(v, line, &format!("{}.{key}", self.path)).map(Some)
            }
        }
    }

    /// Reject any field not consumed by the callers above.
    fn finish(self) -> Result<(), CatalogError> {
        for (k, _, line) in &self.entry.fields {
            if !self.taken.contains(k) {
                return Err(CatalogError::Validation {
                    field: format!("{}.{k}", self.path),
                    msg: format!("unknown field (line {line})"),
                });
            }
        }
        Ok(())
    }
}

fn parse_number(v: &str, line: usize, field: &str) -> Result<f64, CatalogError> {
    let x: f64 = v.parse().map_err(|_| CatalogError::Syntax {
        line,
        msg: format!("{field}: \"{v}\" is not a decimal number"),
    })?;
    if !x.is_finite() {
        return Err(CatalogError::Validation {
            field: field.to_string(),
            msg: format!("must be finite, got {v}"),
        });
    }
    Ok(x)
}

fn check_name_value(v: &str, line: usize, field: &str) -> Result<String, CatalogError> {
    if v.is_empty() || !v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
        return Err(CatalogError::Syntax {
            line,
            msg: format!("{field}: \"{v}\" is not a valid name"),
        });
    }
    Ok(v.to_string())
}

fn build_material(entry: &RawEntry) -> Result<MaterialSpec, CatalogError> {
    let mut r = FieldReader::new(entry);
    let youngs_modulus = r.number("E")?;
    let density = r.number("rho_s")?;
    let specific_modulus = r.number_opt("specific_modulus")?;
    let thicknesses = r.number_list("thicknesses")?;
    r.finish()?;
    Ok(MaterialSpec {
        name: entry.name.clone(),
        youngs_modulus,
        density,
        specific_modulus,
        thicknesses,
    })
}

fn build_servo(entry: &RawEntry) -> Result<ServoSpec, CatalogError> {
    let mut r = FieldReader::new(entry);
    let stall_torque = r.number("T_servo")?;
    let speed = r.number("speed")?;
    let weight = r.number("weight")?;
    let horn_length = r.number("L_horn")?;
    let f_ref = r.number("f_ref")?;
    r.finish()?;
    Ok(ServoSpec { name: entry.name.clone(), stall_torque, speed, weight, horn_length, f_ref })
}

fn build_preset(entry: &RawEntry) -> Result<Preset, CatalogError> {
    let mut r = FieldReader::new(entry);
    let l = r.number("l")?;
    let d = r.number("D")?;
    let t = r.number("t")?;
    let h = r.number("h")?;
    let ratio = r.number("r")?;
    let material = r.name("material")?;
    let servo = r.name_opt("servo")?;
    let t_act_ref = r.number_opt("T_act_ref")?;
    let u_tip_ref = r.number_opt("u_tip_ref")?;
    r.finish()?;
    let geometry = Geometry::new(l, d, t, h, ratio).map_err(|e| CatalogError::Validation {
        field: format!("presets.{}", entry.name),
        msg: e.to_string(),
    })?;
    Ok(Preset { geometry, material, servo, t_act_ref, u_tip_ref })
}

/// Render a catalog in canonical form (see the module docs). The output
/// is byte-identical across runs for equal catalogs.
pub fn serialize_catalog(catalog: &Catalog) -> String {
    let mut out = String::new();

    out.push_str("[materials]\n");
    for (name, m) in &catalog.materials {
        out.push_str(&format!("\n[materials.{name}]\n"));
        out.push_str(&format!("E = {}\n", render_f64(m.youngs_modulus)));
        out.push_str(&format!("rho_s = {}\n", render_f64(m.density)));
        if let Some(sm) = m.specific_modulus {
            out.push_str(&format!("specific_modulus = {}\n", render_f64(sm)));
        }
        let list: Vec<String> = m.thicknesses.iter().map(|t| render_f64(*t)).collect();
        out.push_str(&format!("thicknesses = [{}]\n", list.join(", ")));
    }

    out.push_str("\n[servos]\n");
    for (name, s) in &catalog.servos {
        out.push_str(&format!("\n[servos.{name}]\n"));
        out.push_str(&format!("T_servo = {}\n", render_f64(s.stall_torque)));
        out.push_str(&format!("speed = {}\n", render_f64(s.speed)));
        out.push_str(&format!("weight = {}\n", render_f64(s.weight)));
        out.push_str(&format!("L_horn = {}\n", render_f64(s.horn_length)));
        out.push_str(&format!("f_ref = {}\n", render_f64(s.f_ref)));
    }

    out.push_str("\n[presets]\n");
    for (name, p) in &catalog.presets {
        out.push_str(&format!("\n[presets.{name}]\n"));
        out.push_str(&format!("l = {}\n", render_f64(p.geometry.half_length)));
        out.push_str(&format!("D = {}\n", render_f64(p.geometry.prestress)));
        out.push_str(&format!("t = {}\n", render_f64(p.geometry.thickness)));
        out.push_str(&format!("h = {}\n", render_f64(p.geometry.width)));
        out.push_str(&format!("r = {}\n", render_f64(p.geometry.section_ratio)));
        out.push_str(&format!("material = {}\n", p.material));
        if let Some(servo) = &p.servo {
            out.push_str(&format!("servo = {servo}\n"));
        }
        if let Some(t) = p.t_act_ref {
            out.push_str(&format!("T_act_ref = {}\n", render_f64(t)));
        }
        if let Some(u) = p.u_tip_ref {
            out.push_str(&format!("u_tip_ref = {}\n", render_f64(u)));
        }
    }

    out
}

#[cfg(test)]
mod tests {
    use super::super::builtin_catalog;
    use super::*;

    #[test]
    fn builtin_round_trips() {
        let c = builtin_catalog();
        let text = serialize_catalog(&c);
        let back = parse_catalog(&text).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn serialization_is_deterministic() {
        let a = serialize_catalog(&builtin_catalog());
        let b = serialize_catalog(&builtin_catalog());
        assert_eq!(a, b);
    }

    #[test]
    fn serialize_then_parse_is_canonical_after_one_pass() {
        let c = builtin_catalog();
        let once = serialize_catalog(&c);
        let twice = serialize_catalog(&parse_catalog(&once).unwrap());
        assert_eq!(once, twice);
    }

    #[test]
    fn empty_catalog_round_trips() {
        let empty = Catalog::default();
        let text = serialize_catalog(&empty);
        assert_eq!(text, "[materials]\n\n[servos]\n\n[presets]\n");
        let back = parse_catalog(&text).unwrap();
        assert_eq!(back, empty);
    }

    #[test]
    fn negative_modulus_names_the_field() {
        let mut text = serialize_catalog(&builtin_catalog());
        text = text.replace("E = 1700.0", "E = -5.0");
        let err = parse_catalog(&text).unwrap_err();
        match err {
            CatalogError::Validation { field, msg } => {
                assert_eq!(field, "materials.PETG");
                assert!(msg.contains('E'), "{msg}");
            }
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn dangling_servo_reference_rejected() {
        let mut text = serialize_catalog(&builtin_catalog());
        text = text.replace("servo = MG90S", "servo = Z9");
        let err = parse_catalog(&text).unwrap_err();
        assert!(matches!(
            err,
            CatalogError::DanglingReference { kind: "servo", ref name, .. } if name == "Z9"
        ));
    }

    #[test]
    fn unknown_field_rejected_with_path() {
        let text = "[materials.X]\nE = 1.0\nrho_s = 1e-9\nthicknesses = [0.5]\ncolor = 3\n";
        let err = parse_catalog(text).unwrap_err();
        match err {
            CatalogError::Validation { field, .. } => assert_eq!(field, "materials.X.color"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_field_rejected_with_path() {
        let text = "[materials.X]\nE = 1.0\nthicknesses = [0.5]\n";
        let err = parse_catalog(text).unwrap_err();
        match err {
            CatalogError::Validation { field, .. } => assert_eq!(field, "materials.X.rho_s"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn syntax_error_reports_line() {
        let text = "[materials]\n\n[materials.X]\nE == 1.0\n";
        let err = parse_catalog(text).unwrap_err();
        match err {
            // "E == 1.0" splits at the first '='; "= 1.0" is not a number.
            CatalogError::Syntax { line, .. } => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_section_reports_line() {
        let text = "\n[widgets]\n";
        let err = parse_catalog(text).unwrap_err();
        assert!(matches!(err, CatalogError::Syntax { line: 2, .. }));
    }

    #[test]
    fn duplicate_field_rejected() {
        let text = "[servos.S]\nT_servo = 1\nT_servo = 2\nspeed = 1\nweight = 1\nL_horn = 1\nf_ref = 1\n";
        let err = parse_catalog(text).unwrap_err();
        assert!(matches!(err, CatalogError::Syntax { line: 3, .. }));
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let text = "# a catalog\n[materials]\n\n[materials.X] # inline\nE = 1.0\nrho_s = 1e-9 # per datasheet\nthicknesses = [0.5]\n";
        let c = parse_catalog(text).unwrap();
        assert_eq!(c.materials["X"].density, 1e-9);
    }

    #[test]
    fn non_finite_numbers_rejected() {
        let text = "[materials.X]\nE = inf\nrho_s = 1e-9\nthicknesses = [0.5]\n";
        assert!(parse_catalog(text).is_err());
        let text2 = "[materials.X]\nE = NaN\nrho_s = 1e-9\nthicknesses = [0.5]\n";
        assert!(parse_catalog(text2).is_err());
    }
}
