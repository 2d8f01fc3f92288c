//! JSON parameter files.
//!
//! ```json
//! { "c_s_m_per_s": 59.36, "delta_K": 5.22, "k0_per_angstrom": 2.0,
//!   "zeta0_angstrom": 30.0, "hydro": { "gamma": 3.5e-4, "rho": 145.0, "q": 1.0, "f_r": 0.0 } }
//! ```
//!
//! `"case": 1` or `2` fills in the published inputs; explicit keys override it.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::params::{
    FilmParameters, GapEnergy, HydroParameters, ParamError, Preset, ANGSTROM, DEFAULT_ZETA0,
};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("missing field `{0}`")]
    Missing(&'static str),
    #[error("give only one of `{0}` and `{1}`")]
    Conflict(&'static str, &'static str),
    #[error("unknown case {0}; expected 1 or 2")]
    UnknownCase(u8),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("malformed config: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilmConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_s_m_per_s: Option<f64>,
    #[serde(rename = "delta_K", default, skip_serializing_if = "Option::is_none")]
    pub delta_k: Option<f64>,
    #[serde(rename = "delta_J", default, skip_serializing_if = "Option::is_none")]
    pub delta_j: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k0_per_angstrom: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k0_per_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta0_angstrom: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta_n_angstrom: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hydro: Option<HydroParameters>,
}

fn one_of(
    a: Option<f64>,
    b: Option<f64>,
    names: (&'static str, &'static str),
) -> Result<Option<(bool, f64)>, ConfigError> {
    match (a, b) {
        (Some(_), Some(_)) => Err(ConfigError::Conflict(names.0, names.1)),
        (Some(x), None) => Ok(Some((true, x))),
        (None, Some(x)) => Ok(Some((false, x))),
        (None, None) => Ok(None),
    }
}

impl FilmConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn preset(case: u8) -> Self {
        Self {
            case: Some(case),
            ..Self::default()
        }
    }

    /// Copy of `self` with missing values filled in from the preset.
    pub fn resolved(&self) -> Result<Self, ConfigError> {
        let p = self.film()?;
        let gap_given = self.delta_k.is_some() || self.delta_j.is_some();
        let k0_given = self.k0_per_angstrom.is_some() || self.k0_per_m.is_some();
        Ok(Self {
            case: self.case,
            c_s_m_per_s: Some(self.c_s_m_per_s.unwrap_or(p.c_s())),
            delta_k: if gap_given {
                self.delta_k
            } else {
                Some(p.delta_kelvin())
            },
            delta_j: self.delta_j,
            k0_per_angstrom: if k0_given {
                self.k0_per_angstrom
            } else {
                Some(p.k0() * ANGSTROM)
            },
            k0_per_m: self.k0_per_m,
            zeta0_angstrom: Some(self.zeta0_angstrom.unwrap_or(p.zeta0() / ANGSTROM)),
            zeta_n_angstrom: self.zeta_n_angstrom,
            hydro: self.hydro,
        })
    }

    pub fn film(&self) -> Result<FilmParameters, ConfigError> {
        let base = match self.case {
            Some(c) => Some(
                Preset::from_index(c)
                    .ok_or(ConfigError::UnknownCase(c))?
                    .film(DEFAULT_ZETA0)?,
            ),
            None => None,
        };
        let c_s = self
            .c_s_m_per_s
            .or(base.map(|b| b.c_s()))
            .ok_or(ConfigError::Missing("c_s_m_per_s"))?;
        let gap = match one_of(self.delta_k, self.delta_j, ("delta_K", "delta_J"))? {
            Some((true, k)) => GapEnergy::Kelvin(k),
            Some((false, j)) => GapEnergy::Joules(j),
            None => GapEnergy::Joules(base.ok_or(ConfigError::Missing("delta_K"))?.delta()),
        };
        let k0 = match one_of(
            self.k0_per_angstrom,
            self.k0_per_m,
            ("k0_per_angstrom", "k0_per_m"),
        )? {
            Some((true, k)) => k / ANGSTROM,
            Some((false, k)) => k,
            None => base.ok_or(ConfigError::Missing("k0_per_angstrom"))?.k0(),
        };
        let zeta0 = self.zeta0_angstrom.map_or(DEFAULT_ZETA0, |z| z * ANGSTROM);
        let mut p = FilmParameters::new(c_s, gap, k0, zeta0)?;
        if let Some(zn) = self.zeta_n_angstrom {
            p = p.with_normal_thickness(zn * ANGSTROM)?;
        }
        Ok(p)
    }

    /// The `hydro` section, re-validated.
    pub fn hydro(&self) -> Result<Option<HydroParameters>, ConfigError> {
        self.hydro
            .map(|h| HydroParameters::new(h.gamma, h.rho, h.q, h.f_r).map_err(ConfigError::from))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_keys() {
        let c = FilmConfig::from_json(
            r#"{"c_s_m_per_s": 59.36, "delta_K": 5.22, "k0_per_angstrom": 2.0}"#,
        )
        .unwrap();
        let p = c.film().unwrap();
        let q = Preset::Case1.film(DEFAULT_ZETA0).unwrap();
        assert_eq!(p, q);
        assert_eq!(c.resolved().unwrap().zeta0_angstrom, Some(30.0));
    }

    #[test]
    fn preset_with_override() {
        let c = FilmConfig::from_json(r#"{"case": 2, "zeta0_angstrom": 50}"#).unwrap();
        let p = c.film().unwrap();
        assert!((p.zeta0() - 50e-10).abs() < 1e-24);
        assert_eq!(p.c_s(), 63.4);
    }

    #[test]
    fn field_level_errors() {
        let c = FilmConfig::from_json(r#"{"delta_K": 5.22, "k0_per_angstrom": 2.0}"#).unwrap();
        assert_eq!(
            c.film().unwrap_err().to_string(),
            "missing field `c_s_m_per_s`"
        );
        let c = FilmConfig::from_json(r#"{"case": 1, "delta_K": 5.22, "delta_J": 1e-22}"#).unwrap();
        assert!(matches!(
            c.film(),
            Err(ConfigError::Conflict("delta_K", "delta_J"))
        ));
        assert!(matches!(
            FilmConfig::preset(3).film(),
            Err(ConfigError::UnknownCase(3))
        ));
        assert!(matches!(
            FilmConfig::from_json(r#"{"cs": 1}"#),
            Err(ConfigError::Json(_))
        ));
        let c = FilmConfig::from_json(r#"{"c_s_m_per_s": -1, "delta_K": 5.22, "k0_per_m": 2e10}"#)
            .unwrap();
        assert!(matches!(c.film(), Err(ConfigError::Param(_))));
    }

    #[test]
    fn hydro_section_parses() {
        let c = FilmConfig::from_json(
            r#"{"case": 1, "hydro": {"gamma": 3.5e-4, "rho": 145.0, "q": 1.0, "f_r": 0.0}}"#,
        )
        .unwrap();
        assert_eq!(c.hydro().unwrap().unwrap().rho, 145.0);
        let c = FilmConfig::from_json(
            r#"{"case": 1, "hydro": {"gamma": 3.5e-4, "rho": 145.0, "q": 2.0, "f_r": 0.0}}"#,
        )
        .unwrap();
        assert!(c.hydro().is_err());
    }
}
