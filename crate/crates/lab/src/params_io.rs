//! Parameter files and the list of parameter sets a run iterates over.

use std::path::Path;

use serde::{Deserialize, Serialize};
use toda_core::{ComplexPoly, CoeffEntry, SolutionParams};

use crate::config::ParamsSource;
use crate::error::{LabError, LabResult};

/// On-disk form of one parameter set. Lambdas are raw; they are rescaled to
/// satisfy the product constraint on load.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub n: usize,
    pub lambdas: Vec<f64>,
    #[serde(default)]
    pub coeffs: Vec<CoeffEntry>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ParamsFile {
    One(ParamsSpec),
    Many(Vec<ParamsSpec>),
}

/// One parameter set together with how it was produced.
#[derive(Debug, Clone)]
pub struct ParamCase {
    pub id: String,
    pub seed: Option<u64>,
    pub params: SolutionParams,
    /// Common factor applied to raw lambdas read from a file.
    pub lambda_scale: Option<f64>,
}

impl ParamCase {
    pub fn n(&self) -> usize {
        self.params.n()
    }

    pub fn summary(&self) -> ParamSummary {
        ParamSummary {
            case_id: self.id.clone(),
            n: self.n(),
            seed: self.seed,
            lambda_scale: self.lambda_scale,
            lambdas: self.params.lambdas().to_vec(),
            coeffs: self.params.coeff_entries(),
        }
    }
}

/// Normalized parameters as printed by `show-params` and embedded in reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSummary {
    pub case_id: String,
    pub n: usize,
    pub seed: Option<u64>,
    pub lambda_scale: Option<f64>,
    pub lambdas: Vec<f64>,
    pub coeffs: Vec<CoeffEntry>,
}

impl ParamsSpec {
    pub fn build(&self, id: &str) -> LabResult<ParamCase> {
        let (params, lambda_scale) = SolutionParams::new(self.n, &self.lambdas, &self.coeffs)
            .map_err(|source| LabError::Params { case: id.to_string(), source })?;
        Ok(ParamCase { id: id.to_string(), seed: None, params, lambda_scale: Some(lambda_scale) })
    }
}

pub fn load_params_file(path: &Path) -> LabResult<Vec<ParamsSpec>> {
    let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
    let parsed: ParamsFile =
        serde_json::from_str(&text).map_err(|source| LabError::Json { path: path.to_path_buf(), source })?;
    Ok(match parsed {
        ParamsFile::One(p) => vec![p],
        ParamsFile::Many(v) => v,
    })
}

fn strip_coefficients(sp: &SolutionParams) -> toda_core::Result<SolutionParams> {
    let one = num_complex::Complex64::new(1.0, 0.0);
    let polys = (1..=sp.n()).map(|i| ComplexPoly::monomial(i, one)).collect();
    SolutionParams::from_parts(sp.lambdas().to_vec(), polys)
}

/// Expands a source into concrete parameter sets, in a fixed order.
pub fn param_cases(source: &ParamsSource) -> LabResult<Vec<ParamCase>> {
    match source {
        ParamsSource::File(path) => load_params_file(path)?
            .iter()
            .enumerate()
            .map(|(k, spec)| {
                let id = spec.label.clone().unwrap_or_else(|| format!("file{k}-n{}", spec.n));
                spec.build(&id)
            })
            .collect(),
        ParamsSource::Random { n, count, seed, magnitude, zero_coefficients } => {
            let mut out = Vec::new();
            for &nn in n {
                for s in *seed..*seed + *count {
                    let id = format!("n{nn}-seed{s}");
                    let wrap = |source| LabError::Params { case: id.clone(), source };
                    let mut params = SolutionParams::sample(nn, s, *magnitude).map_err(wrap)?;
                    if *zero_coefficients {
                        params = strip_coefficients(&params).map_err(wrap)?;
                    }
                    out.push(ParamCase { id, seed: Some(s), params, lambda_scale: None });
                }
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_and_list_files() {
        let dir = tempfile::tempdir().unwrap();
        let one = dir.path().join("one.json");
        std::fs::write(&one, r#"{"n": 1, "lambdas": [1, 1], "coeffs": [{"i": 1, "j": 0, "re": 0.2, "im": 0}]}"#).unwrap();
        let cases = param_cases(&ParamsSource::File(one)).unwrap();
        assert_eq!(cases.len(), 1);
        assert_eq!(cases[0].params.lambdas(), &[0.5, 0.5]);
        assert_eq!(cases[0].lambda_scale, Some(0.5));
        let many = dir.path().join("many.json");
        std::fs::write(&many, r#"[{"label": "a", "n": 1, "lambdas": [1, 1]}, {"n": 2, "lambdas": [1, 2, 3]}]"#).unwrap();
        let cases = param_cases(&ParamsSource::File(many)).unwrap();
        assert_eq!(cases[0].id, "a");
        assert_eq!(cases[1].id, "file1-n2");
    }

    #[test]
    fn bad_files_are_errors() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.json");
        std::fs::write(&p, r#"{"n": 2, "lambdas": [1, -1, 1]}"#).unwrap();
        assert!(matches!(param_cases(&ParamsSource::File(p.clone())), Err(LabError::Params { .. })));
        std::fs::write(&p, "not json").unwrap();
        assert!(matches!(param_cases(&ParamsSource::File(p)), Err(LabError::Json { .. })));
        let missing = dir.path().join("missing.json");
        assert!(matches!(param_cases(&ParamsSource::File(missing)), Err(LabError::Io { .. })));
    }

    #[test]
    fn random_cases_are_seeded_and_ordered() {
        let src = ParamsSource::Random { n: vec![2, 3], count: 2, seed: 5, magnitude: 0.5, zero_coefficients: false };
        let a = param_cases(&src).unwrap();
        let ids: Vec<_> = a.iter().map(|c| c.id.as_str()).collect();
        assert_eq!(ids, ["n2-seed5", "n2-seed6", "n3-seed5", "n3-seed6"]);
        let b = param_cases(&src).unwrap();
        assert!(a.iter().zip(&b).all(|(x, y)| x.params == y.params));
        let radial = ParamsSource::Random { n: vec![3], count: 1, seed: 5, magnitude: 0.5, zero_coefficients: true };
        let r = &param_cases(&radial).unwrap()[0];
        assert!(r.params.coeff_entries().iter().all(|e| e.re == 0.0 && e.im == 0.0));
        assert_eq!(r.params.lambdas(), a[2].params.lambdas());
    }
}
