//! Run configuration: which suites, which parameter sets, tolerances.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{LabError, LabResult};
use crate::tolerances::{Settings, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Pde,
    Linearized,
    Identities,
    Asymptotics,
    Mass,
    TIntegrals,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Pde,
        Suite::Linearized,
        Suite::Identities,
        Suite::Asymptotics,
        Suite::Mass,
        Suite::TIntegrals,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Pde => "pde",
            Suite::Linearized => "linearized",
            Suite::Identities => "identities",
            Suite::Asymptotics => "asymptotics",
            Suite::Mass => "mass",
            Suite::TIntegrals => "t-integrals",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| LabError::Config(format!("unknown suite '{s}'")))
    }
}

/// Where parameter sets come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ParamsSource {
    /// A JSON file holding one parameter set or a list of them.
    File(PathBuf),
    /// `count` seeded sets per `n`, seeds `seed..seed+count`.
    Random {
        n: Vec<usize>,
        count: u64,
        seed: u64,
        magnitude: f64,
        /// Drop every coefficient after sampling (radially symmetric solutions).
        #[serde(default)]
        zero_coefficients: bool,
    },
}

impl Default for ParamsSource {
    fn default() -> Self {
        ParamsSource::Random { n: vec![1, 2, 3], count: 1, seed: 0, magnitude: 0.5, zero_coefficients: false }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub suites: Vec<Suite>,
    pub params: ParamsSource,
    pub tolerances: Tolerances,
    pub settings: Settings,
    /// Output directory; nothing is written when absent.
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_json_file(path: &Path) -> LabResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| LabError::Config(format!("{}: {e}", path.display())))
    }

    /// Rejects configurations that cannot run, before any work is done.
    pub fn validate(&self) -> LabResult<()> {
        let mut seen = self.suites.clone();
        seen.sort();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(LabError::Config("suite listed twice".into()));
        }
        if let ParamsSource::Random { n, count, magnitude, .. } = &self.params {
            if n.is_empty() || *count == 0 {
                return Err(LabError::Config("random params need at least one n and count >= 1".into()));
            }
            if let Some(bad) = n.iter().find(|&&x| x == 0 || x > toda_core::solution::MAX_N) {
                return Err(LabError::Config(format!("n = {bad} out of range")));
            }
            if !(magnitude.is_finite() && *magnitude >= 0.0) {
                return Err(LabError::Config(format!("magnitude {magnitude}")));
            }
        }
        let s = &self.settings;
        let positive = [s.grid_h, s.grid_half_width, s.param_step, s.leading_radius, s.flux_radius, s.quadrature_radius];
        if positive.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(LabError::Config("grid and radius settings must be positive".into()));
        }
        if !(s.radius_pair.0 > 0.0 && s.radius_pair.1 > s.radius_pair.0) {
            return Err(LabError::Config("radius_pair must satisfy 0 < r1 < r2".into()));
        }
        if s.t_radii.len() < 2 || s.t_radii.windows(2).any(|w| w[1] <= w[0]) || s.t_radii[0] <= 0.0 {
            return Err(LabError::Config("t_radii must be positive and increasing".into()));
        }
        if s.identity_m_max > toda_core::identities::MAX_SWEEP_SIZE || s.identity_n_count == 0 {
            return Err(LabError::Config("identity sweep settings out of range".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
            let js = serde_json::to_string(&s).unwrap();
            assert_eq!(js, format!("\"{}\"", s.name()));
        }
        assert!("tintegrals".parse::<Suite>().is_err());
    }

    #[test]
    fn unknown_suite_in_json_is_rejected() {
        let err = serde_json::from_str::<RunConfig>(r#"{"suites": ["pde", "bogus"]}"#);
        assert!(err.is_err());
        let ok: RunConfig = serde_json::from_str(r#"{"suites": ["t-integrals"]}"#).unwrap();
        assert_eq!(ok.suites, vec![Suite::TIntegrals]);
        assert_eq!(ok.tolerances, Tolerances::default());
    }

    #[test]
    fn validation() {
        assert!(RunConfig::default().validate().is_ok());
        let mut c = RunConfig { suites: vec![Suite::Pde, Suite::Pde], ..Default::default() };
        assert!(c.validate().is_err());
        c.suites = vec![Suite::Pde];
        c.settings.radius_pair = (400.0, 200.0);
        assert!(c.validate().is_err());
        let c = RunConfig {
            params: ParamsSource::Random { n: vec![0], count: 1, seed: 0, magnitude: 0.5, zero_coefficients: false },
            ..Default::default()
        };
        assert!(c.validate().is_err());
    }
}
