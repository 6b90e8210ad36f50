//! JSON configuration for vehicle and engine parameters.
//!
//! Every field is optional; missing values fall back to the built-in
//! defaults. Unknown keys are rejected so typos fail loudly instead of
//! silently running with defaults.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::vehicle::{BsfcParams, VehicleParams};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct VehicleDoc {
    mass_kg: Option<f64>,
    air_density_kg_m3: Option<f64>,
    frontal_area_m2: Option<f64>,
    drag_coefficient: Option<f64>,
    rolling_friction: Option<f64>,
    gravity_m_s2: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct BsfcDoc {
    #[serde(rename = "beta0_g_per_J")]
    beta0: Option<f64>,
    #[serde(rename = "gamma_g_per_J_W2")]
    gamma: Option<f64>,
    #[serde(rename = "p0_W")]
    p0: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigDoc {
    vehicle: Option<VehicleDoc>,
    bsfc: Option<BsfcDoc>,
}

fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 {
        Ok(value)
    } else {
        Err(Error::Domain { name, value })
    }
}

fn non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::Domain { name, value })
    }
}

/// Parse a JSON parameter document, merging it over the defaults.
pub fn load_params(text: &str) -> Result<(VehicleParams, BsfcParams)> {
    let doc: ConfigDoc = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let v = doc.vehicle.unwrap_or_default();
    let b = doc.bsfc.unwrap_or_default();
    let pv = VehicleParams::default();
    let pb = BsfcParams::default();
    let vehicle = VehicleParams {
        mass: positive("mass_kg", v.mass_kg.unwrap_or(pv.mass))?,
        air_density: positive("air_density_kg_m3", v.air_density_kg_m3.unwrap_or(pv.air_density))?,
        frontal_area: positive("frontal_area_m2", v.frontal_area_m2.unwrap_or(pv.frontal_area))?,
        drag_coeff: positive("drag_coefficient", v.drag_coefficient.unwrap_or(pv.drag_coeff))?,
        rolling_friction: non_negative(
            "rolling_friction",
            v.rolling_friction.unwrap_or(pv.rolling_friction),
        )?,
        gravity: positive("gravity_m_s2", v.gravity_m_s2.unwrap_or(pv.gravity))?,
    };
    let bsfc = BsfcParams {
        beta0: positive("beta0_g_per_J", b.beta0.unwrap_or(pb.beta0))?,
        gamma: positive("gamma_g_per_J_W2", b.gamma.unwrap_or(pb.gamma))?,
        p0: positive("p0_W", b.p0.unwrap_or(pb.p0))?,
    };
    Ok((vehicle, bsfc))
}

/// Read and parse a parameter file.
pub fn load_params_file(path: &std::path::Path) -> Result<(VehicleParams, BsfcParams)> {
    load_params(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_yields_defaults() {
        let (v, b) = load_params("{}").unwrap();
        assert_eq!(v, VehicleParams::default());
        assert_eq!(b, BsfcParams::default());
    }

    #[test]
    fn full_document_overrides_everything() {
        let text = r#"{
            "vehicle": {
                "mass_kg": 1200.0,
                "air_density_kg_m3": 1.0,
                "frontal_area_m2": 1.8,
                "drag_coefficient": 0.25,
                "rolling_friction": 0.007,
                "gravity_m_s2": 9.8
            },
            "bsfc": {
                "beta0_g_per_J": 7.0e-5,
                "gamma_g_per_J_W2": 1.0e-13,
                "p0_W": 25000.0
            }
        }"#;
        let (v, b) = load_params(text).unwrap();
        assert_eq!(v.mass, 1200.0);
        assert_eq!(v.air_density, 1.0);
        assert_eq!(v.frontal_area, 1.8);
        assert_eq!(v.drag_coeff, 0.25);
        assert_eq!(v.rolling_friction, 0.007);
        assert_eq!(v.gravity, 9.8);
        assert_eq!(b.beta0, 7.0e-5);
        assert_eq!(b.gamma, 1.0e-13);
        assert_eq!(b.p0, 25000.0);
    }

    #[test]
    fn partial_document_merges_over_defaults() {
        let (v, b) = load_params(r#"{"vehicle": {"mass_kg": 2000.0}}"#).unwrap();
        assert_eq!(v.mass, 2000.0);
        assert_eq!(v.drag_coeff, VehicleParams::default().drag_coeff);
        assert_eq!(b, BsfcParams::default());
    }

    #[test]
    fn unknown_keys_are_rejected_by_name() {
        let err = load_params(r#"{"vehicle": {"mass": 1000.0}}"#).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("mass"), "message should name the key: {msg}");
        assert!(load_params(r#"{"engine": {}}"#).is_err());
    }

    #[test]
    fn non_positive_values_are_rejected() {
        assert!(matches!(
            load_params(r#"{"vehicle": {"mass_kg": 0.0}}"#),
            Err(Error::Domain { name: "mass_kg", .. })
        ));
        assert!(load_params(r#"{"bsfc": {"p0_W": -1.0}}"#).is_err());
        // Zero rolling friction is physically fine.
        assert!(load_params(r#"{"vehicle": {"rolling_friction": 0.0}}"#).is_ok());
    }

    #[test]
    fn malformed_json_is_a_config_error() {
        assert!(matches!(load_params("{"), Err(Error::Config(_))));
    }
}
