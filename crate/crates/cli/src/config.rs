use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};

/// Defaults read from a `key = value` file. Blank lines and lines starting
/// with `#` are ignored.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FileConfig {
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub resample_limit: Option<usize>,
    pub parallel: Option<bool>,
    pub format: Option<String>,
}

pub const KEYS: [&str; 6] = ["samples", "seed", "tol", "resample_limit", "parallel", "format"];

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                bail!("line {}: expected key = value", n + 1);
            };
            let k = k.trim();
            if !KEYS.contains(&k) {
                bail!("line {}: unknown key {k:?}", n + 1);
            }
            pairs.insert(k.to_string(), v.trim().to_string());
        }
        let get = |k: &str| pairs.get(k).map(String::as_str);
        let parse = |k: &str| -> Result<Option<f64>> {
            get(k)
                .map(|v| v.parse::<f64>().with_context(|| format!("{k} = {v}")))
                .transpose()
        };
        Ok(Self {
            samples: get("samples")
                .map(|v| v.parse().with_context(|| format!("samples = {v}")))
                .transpose()?,
            seed: get("seed")
                .map(|v| v.parse().with_context(|| format!("seed = {v}")))
                .transpose()?,
            tol: parse("tol")?,
            resample_limit: get("resample_limit")
                .map(|v| v.parse().with_context(|| format!("resample_limit = {v}")))
                .transpose()?,
            parallel: get("parallel")
                .map(|v| v.parse().with_context(|| format!("parallel = {v}")))
                .transpose()?,
            format: get("format").map(str::to_string),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_known_keys() {
        let c = FileConfig::parse("# defaults\nsamples = 20\nseed=9\n\ntol = 1e-8\nparallel = false\nformat = json\n")
            .unwrap();
        assert_eq!(c.samples, Some(20));
        assert_eq!(c.seed, Some(9));
        assert_eq!(c.tol, Some(1e-8));
        assert_eq!(c.parallel, Some(false));
        assert_eq!(c.format.as_deref(), Some("json"));
        assert_eq!(c.resample_limit, None);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(FileConfig::parse("color = red").is_err());
        assert!(FileConfig::parse("samples = many").is_err());
        assert!(FileConfig::parse("samples").is_err());
    }
}
