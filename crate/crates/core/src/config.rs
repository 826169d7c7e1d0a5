//! JSON configuration files for states and ladders.
//!
//! ```json
//! {"type": "modes", "N": 16, "occupied": [-3, -2, -1, 0, 1, 2, 3, 4]}
//! {"type": "density", "jumps": [-1.5707963267948966, 1.5707963267948966], "values": [-1, 0]}
//! {"q": 2, "couplings": [{"p": 0, "j": 1, "re": -2.0, "im": 0.0}]}
//! ```

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::ladder::{Coupling, LadderSpec};
use crate::occupation::{density_from_modeset, ModeSet, OccupationDensity};
use crate::spectra::EntropySource;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum StateConfig {
    Modes {
        #[serde(rename = "N")]
        n: usize,
        occupied: Vec<i64>,
    },
    Density {
        jumps: Vec<f64>,
        values: Vec<f64>,
    },
}

impl StateConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn source(&self) -> Result<EntropySource> {
        Ok(match self {
            StateConfig::Modes { n, occupied } => {
                EntropySource::Modes(ModeSet::new(*n, occupied.iter().copied())?)
            }
            StateConfig::Density { jumps, values } => {
                EntropySource::Density(OccupationDensity::new(jumps.clone(), values.clone())?)
            }
        })
    }

    /// The occupation density, coarse-grained from the modes when needed.
    pub fn density(&self) -> Result<OccupationDensity> {
        match self.source()? {
            EntropySource::Modes(ms) => density_from_modeset(&ms),
            EntropySource::Density(g) => Ok(g),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingConfig {
    pub p: usize,
    pub j: usize,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LadderConfig {
    pub q: usize,
    pub couplings: Vec<CouplingConfig>,
}

impl LadderConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn spec(&self) -> Result<LadderSpec> {
        LadderSpec::new(
            self.q,
            self.couplings.iter().map(|c| Coupling {
                p: c.p,
                j: c.j,
                value: Complex64::new(c.re, c.im),
            }),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_state_kinds() {
        let modes = StateConfig::from_json(r#"{"type":"modes","N":8,"occupied":[0,1]}"#).unwrap();
        assert_eq!(
            modes,
            StateConfig::Modes {
                n: 8,
                occupied: vec![0, 1]
            }
        );
        assert!(matches!(modes.source().unwrap(), EntropySource::Modes(_)));

        let dens = StateConfig::from_json(
            r#"{"type":"density","jumps":[-1.5707963267948966,1.5707963267948966],"values":[-1,0.5]}"#,
        )
        .unwrap();
        assert_eq!(dens.density().unwrap(), OccupationDensity::state3());
    }

    #[test]
    fn rejects_malformed_states() {
        assert!(StateConfig::from_json(r#"{"type":"other"}"#).is_err());
        assert!(StateConfig::from_json(r#"{"type":"modes","N":8}"#).is_err());
        let bad = StateConfig::from_json(r#"{"type":"modes","N":8,"occupied":[9]}"#).unwrap();
        assert!(bad.source().is_err());
    }

    #[test]
    fn parses_ladders() {
        let cfg = LadderConfig::from_json(
            r#"{"q":2,"couplings":[{"p":0,"j":0,"re":1.0},{"p":1,"j":0,"re":1.0},{"p":0,"j":1,"re":-2.0,"im":0.0}]}"#,
        )
        .unwrap();
        assert_eq!(cfg.spec().unwrap(), LadderSpec::two_rail_example(1.0));
        assert!(LadderConfig::from_json(r#"{"q":2}"#).is_err());
    }
}
