use super::ModelError;

/// Ribbon geometry of a hair-clip mechanism, in mm.
///
/// The half ribbon of length `l` splits into a core (actuated) section of
/// length `L1` and an outer section `L2 = l - L1`, with `r = L2/L1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    /// Half ribbon length l (mm).
    pub half_length: f64,
    /// Prestressing displacement D imposed at assembly (mm).
    pub prestress: f64,
    /// Sheet thickness t (mm).
    pub thickness: f64,
    /// Ribbon width h (mm).
    pub width: f64,
    /// Section ratio r = L2/L1 (dimensionless).
    pub section_ratio: f64,
}

impl Geometry {
    /// Build a geometry from the `(l, D, t, h, r)` tuple, validating the
    /// type invariants.
    pub fn new(l: f64, d: f64, t: f64, h: f64, r: f64) -> Result<Self, ModelError> {
        let g = Geometry {
            half_length: l,
            prestress: d,
            thickness: t,
            width: h,
            section_ratio: r,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let check_pos = |name: &str, v: f64| -> Result<(), ModelError> {
            if !v.is_finite() || v <= 0.0 {
                Err(ModelError::Validation(format!(
                    "geometry.{name} must be finite and > 0, got {v}"
                )))
            } else {
                Ok(())
            }
        };
        check_pos("l", self.half_length)?;
        check_pos("D", self.prestress)?;
        check_pos("t", self.thickness)?;
        check_pos("h", self.width)?;
        check_pos("r", self.section_ratio)?;
        if self.prestress >= self.half_length {
            return Err(ModelError::Validation(format!(
                "geometry.D ({}) must be smaller than geometry.l ({})",
                self.prestress, self.half_length
            )));
        }
        Ok(())
    }

    /// Core section length L1 = l / (1 + r).
    pub fn core_length(&self) -> f64 {
        self.half_length / (1.0 + self.section_ratio)
    }

    /// Outer section length L2 = l - L1 (so L1 + L2 = l exactly).
    pub fn outer_length(&self) -> f64 {
        self.half_length - self.core_length()
    }
}

/// Split the half ribbon into `(L1, L2)` core and outer section lengths.
pub fn section_split(g: &Geometry) -> (f64, f64) {
    (g.core_length(), g.outer_length())
}
