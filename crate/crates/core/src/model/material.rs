use super::ModelError;

/// Sheet material of the ribbon.
///
/// Units: `youngs_modulus` in MPa, `density` in tonne/mm³. In the
/// mm–tonne–second system the specific modulus E/ρ is directly in mm²/s².
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialSpec {
    pub name: String,
    /// Young's modulus E (MPa).
    pub youngs_modulus: f64,
    /// Density ρ_s (tonne/mm³).
    pub density: f64,
    /// Datasheet E/ρ_s (mm²/s²), when it differs from the quotient of the
    /// rounded E and ρ_s columns. `None` falls back to the computed value.
    pub specific_modulus: Option<f64>,
    /// Commercially available sheet thicknesses (mm).
    pub thicknesses: Vec<f64>,
}

impl MaterialSpec {
    pub fn new(
        name: impl Into<String>,
        youngs_modulus: f64,
        density: f64,
        specific_modulus: Option<f64>,
        thicknesses: Vec<f64>,
    ) -> Result<Self, ModelError> {
        let m = MaterialSpec {
            name: name.into(),
            youngs_modulus,
            density,
            specific_modulus,
            thicknesses,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.name.is_empty() {
            return Err(ModelError::Validation("material name must not be empty".into()));
        }
        if !self.youngs_modulus.is_finite() || self.youngs_modulus <= 0.0 {
            return Err(ModelError::Validation(format!(
                "materials.{}.E must be finite and > 0, got {}",
                self.name, self.youngs_modulus
            )));
        }
        if !self.density.is_finite() || self.density <= 0.0 {
            return Err(ModelError::Validation(format!(
                "materials.{}.rho_s must be finite and > 0, got {}",
                self.name, self.density
            )));
        }
        if let Some(sm) = self.specific_modulus {
            if !sm.is_finite() || sm <= 0.0 {
                return Err(ModelError::Validation(format!(
                    "materials.{}.specific_modulus must be finite and > 0, got {sm}",
                    self.name
                )));
            }
        }
        if !(self.youngs_modulus / self.density).is_finite() {
            return Err(ModelError::Validation(format!(
                "materials.{}: E/rho_s overflows",
                self.name
            )));
        }
        for (i, t) in self.thicknesses.iter().enumerate() {
            if !t.is_finite() || *t <= 0.0 {
                return Err(ModelError::Validation(format!(
                    "materials.{}.thicknesses[{i}] must be finite and > 0, got {t}",
                    self.name
                )));
            }
        }
        Ok(())
    }

    /// Specific modulus E/ρ_s in mm²/s²: the datasheet value when present,
    /// otherwise computed from E and ρ_s.
    pub fn specific_modulus(&self) -> f64 {
        self.specific_modulus.unwrap_or(self.youngs_modulus / self.density)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn computed_specific_modulus_fallback() {
        let m = MaterialSpec::new("CFRP", 64e3, 1.6e-9, None, vec![0.5, 0.79]).unwrap();
        assert_eq!(m.specific_modulus(), 64e3 / 1.6e-9);
        assert_eq!(m.specific_modulus(), 40e12);
    }

    #[test]
    fn datasheet_specific_modulus_wins() {
        let m = MaterialSpec::new("PETG", 1.7e3, 1.25e-9, Some(1.42e12), vec![0.381]).unwrap();
        assert_eq!(m.specific_modulus(), 1.42e12);
    }

    #[test]
    fn rejects_nonpositive_fields() {
        assert!(MaterialSpec::new("X", -5.0, 1e-9, None, vec![0.5]).is_err());
        assert!(MaterialSpec::new("X", 1e3, 0.0, None, vec![0.5]).is_err());
        assert!(MaterialSpec::new("X", 1e3, 1e-9, None, vec![0.0]).is_err());
        assert!(MaterialSpec::new("X", 1e3, 1e-9, Some(-1.0), vec![0.5]).is_err());
        assert!(MaterialSpec::new("", 1e3, 1e-9, None, vec![0.5]).is_err());
    }

    #[test]
    fn error_names_the_field() {
        let err = MaterialSpec::new("X", -5.0, 1e-9, None, vec![0.5]).unwrap_err();
        assert!(err.to_string().contains("materials.X.E"), "{err}");
    }
}
