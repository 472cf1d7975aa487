//! Optional TOML config. Keys mirror the long flag names with `-` written as
//! `_`; a flag always wins over the file, and the file over built-in defaults.

use std::path::Path;

use serde::Deserialize;

/// A number or a string with a unit suffix.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Number(f64),
    Text(String),
}

impl Scalar {
    pub fn as_text(&self) -> String {
        match self {
            Scalar::Number(v) => v.to_string(),
            Scalar::Text(s) => s.clone(),
        }
    }
}

/// One name or a list of names.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Names {
    One(String),
    Many(Vec<String>),
}

impl Names {
    pub fn into_vec(self) -> Vec<String> {
        match self {
            Names::One(s) => vec![s],
            Names::Many(v) => v,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub particle: Option<String>,
    pub charge: Option<f64>,
    pub mass: Option<Scalar>,
    pub z: Option<Scalar>,
    pub t: Option<Scalar>,
    pub t_over_z: Option<f64>,
    pub quantity: Option<Names>,
    pub margin: Option<f64>,
    pub lightcone_window: Option<f64>,
    pub oracle: Option<bool>,
    pub rel_tol: Option<f64>,
    pub max_subdivisions: Option<usize>,
    pub var: Option<String>,
    pub from: Option<Scalar>,
    pub to: Option<Scalar>,
    pub count: Option<usize>,
    pub spacing: Option<String>,
    pub format: Option<String>,
    pub out: Option<String>,
    pub grid: Option<String>,
    pub tolerance: Option<f64>,
    pub dt: Option<Scalar>,
    pub eps: Option<Scalar>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("config {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("config {}: {e}", path.display()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_mixed_scalars() {
        let c: Config = toml::from_str(
            r#"
            particle = "unit"
            z = "1um"
            t = 3.0
            quantity = ["vel_disp_normal", "ratio_z"]
            count = 5
            "#,
        )
        .unwrap();
        assert_eq!(c.z, Some(Scalar::Text("1um".into())));
        assert_eq!(c.t.unwrap().as_text(), "3");
        assert_eq!(c.quantity.unwrap().into_vec().len(), 2);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(toml::from_str::<Config>("zz = 1").is_err());
    }
}
