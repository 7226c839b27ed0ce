//! Randomized verification of registered identities.
//!
//! Sample `i` of identity `id` draws from its own ChaCha8 stream seeded by
//! `(seed, id, i)`, so reports do not depend on thread scheduling.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{QError, Result};
use crate::identities::{lookup, registry, Identity};
use crate::Complex;

pub const SCHEMA_VERSION: &str = "1";
pub const GENERATOR: &str = "ChaCha8";
/// Identities resampling more often than this are flagged.
pub const RESAMPLE_FLAG_RATE: f64 = 0.2;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationConfig {
    pub samples: usize,
    pub seed: u64,
    /// Overrides every identity's own tolerance when set.
    pub tol: Option<f64>,
    /// Resampling attempts per sample on pole-adjacent or cancelling points.
    pub resample_limit: usize,
    pub parallel: bool,
}

impl Default for VerificationConfig {
    fn default() -> Self {
        Self {
            samples: 50,
            seed: 0,
            tol: None,
            resample_limit: 50,
            parallel: true,
        }
    }
}

impl VerificationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(QError::Config("samples must be at least 1".into()));
        }
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(QError::Config(format!("tolerance {t} must be positive")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleVerdict {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub index: usize,
    /// Sampled point including `q`; empty when no point could be drawn.
    pub params: BTreeMap<String, Complex>,
    pub lhs: Option<Complex>,
    pub rhs: Option<Complex>,
    pub residual: Option<f64>,
    pub terms_used: usize,
    pub resamples: usize,
    pub verdict: SampleVerdict,
    pub passed: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub max_residual: f64,
    pub resamples: usize,
    /// `resamples / (samples + resamples)`.
    pub resample_rate: f64,
    pub resample_flag: bool,
    pub wall_time_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: String,
    pub id: String,
    pub name: String,
    pub generator: String,
    pub seed: u64,
    pub tol: f64,
    pub samples: Vec<SampleRecord>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    /// The report with timing zeroed, for comparing runs.
    pub fn without_timing(&self) -> Self {
        let mut r = self.clone();
        r.summary.wall_time_ms = 0.0;
        r
    }
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed of the stream for sample `index` of identity `id`.
pub fn sample_seed(seed: u64, id: &str, index: usize) -> u64 {
    splitmix64(splitmix64(seed ^ fnv1a(id)).wrapping_add(index as u64))
}

fn run_sample(id: &Identity, seed: u64, index: usize, tol: f64, resample_limit: usize) -> SampleRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(seed, &id.id, index));
    let mut record = SampleRecord {
        index,
        params: BTreeMap::new(),
        lhs: None,
        rhs: None,
        residual: None,
        terms_used: 0,
        resamples: 0,
        verdict: SampleVerdict::Error,
        passed: false,
        error: None,
    };
    loop {
        let p = match id.sample(&mut rng) {
            Ok(p) => p,
            Err(e) => {
                record.error = Some(e.to_string());
                return record;
            }
        };
        record.params = p.names.iter().cloned().zip(p.values.iter().copied()).collect();
        if id.base.is_some() {
            record.params.insert("q".into(), p.q);
        }
        let retry = match id.evaluate(&p) {
            Ok(e) if !e.is_ill_conditioned() => {
                record.lhs = Some(e.lhs.value);
                record.rhs = Some(e.rhs.value);
                record.residual = Some(e.residual);
                record.terms_used = e.terms_used;
                record.error = None;
                record.passed = e.residual <= tol;
                record.verdict = if record.passed {
                    SampleVerdict::Pass
                } else {
                    SampleVerdict::Fail
                };
                return record;
            }
            Ok(e) => format!("cancellation {:.1e}", e.cancellation()),
            Err(e @ (QError::PoleAdjacent(_) | QError::InadmissiblePoint(_))) => e.to_string(),
            Err(e) => {
                record.error = Some(e.to_string());
                return record;
            }
        };
        if record.resamples >= resample_limit {
            record.error = Some(format!("resample limit {resample_limit} reached; last: {retry}"));
            return record;
        }
        record.resamples += 1;
    }
}

/// Verifies one identity.
pub fn verify_identity(id: &Identity, config: &VerificationConfig) -> Result<VerificationReport> {
    config.validate()?;
    let start = Instant::now();
    let tol = config.tol.unwrap_or(id.tol);
    let run = |i| run_sample(id, config.seed, i, tol, config.resample_limit);
    let samples: Vec<SampleRecord> = if config.parallel {
        (0..config.samples).into_par_iter().map(run).collect()
    } else {
        (0..config.samples).map(run).collect()
    };
    let passed = samples.iter().filter(|s| s.passed).count();
    let resamples: usize = samples.iter().map(|s| s.resamples).sum();
    let max_residual = samples.iter().filter_map(|s| s.residual).fold(0.0, f64::max);
    let resample_rate = resamples as f64 / (samples.len() + resamples) as f64;
    Ok(VerificationReport {
        schema_version: SCHEMA_VERSION.into(),
        id: id.id.clone(),
        name: id.name.into(),
        generator: GENERATOR.into(),
        seed: config.seed,
        tol,
        summary: Summary {
            passed,
            failed: samples.len() - passed,
            max_residual,
            resamples,
            resample_rate,
            resample_flag: resample_rate > RESAMPLE_FLAG_RATE,
            wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        },
        samples,
    })
}

/// Verifies the identity registered under `identity_id`.
pub fn verify(identity_id: &str, config: &VerificationConfig) -> Result<VerificationReport> {
    config.validate()?;
    verify_identity(&lookup(identity_id)?, config)
}

/// Verifies every registered identity, ordered by id.
pub fn verify_all(config: &VerificationConfig) -> Result<Vec<VerificationReport>> {
    config.validate()?;
    registry().iter().map(|id| verify_identity(id, config)).collect()
}

pub fn to_json(reports: &[VerificationReport]) -> Result<String> {
    serde_json::to_string_pretty(reports).map_err(|e| QError::Serialization(e.to_string()))
}

#[derive(Serialize)]
struct CsvRow<'a> {
    id: &'a str,
    index: usize,
    params: String,
    lhs_re: Option<f64>,
    lhs_im: Option<f64>,
    rhs_re: Option<f64>,
    rhs_im: Option<f64>,
    residual: Option<f64>,
    terms_used: usize,
    resamples: usize,
    verdict: SampleVerdict,
    error: Option<&'a str>,
}

/// One row per sample; parameters are packed as `name=re+imi` separated by
/// semicolons.
pub fn to_csv(reports: &[VerificationReport]) -> Result<String> {
    let err = |e: csv::Error| QError::Serialization(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in reports {
        for s in &r.samples {
            let params = s
                .params
                .iter()
                .map(|(k, v)| format!("{k}={}{:+}i", v.re, v.im))
                .collect::<Vec<_>>()
                .join(";");
            w.serialize(CsvRow {
                id: &r.id,
                index: s.index,
                params,
                lhs_re: s.lhs.map(|z| z.re),
                lhs_im: s.lhs.map(|z| z.im),
                rhs_re: s.rhs.map(|z| z.re),
                rhs_im: s.rhs.map(|z| z.im),
                residual: s.residual,
                terms_used: s.terms_used,
                resamples: s.resamples,
                verdict: s.verdict,
                error: s.error.as_deref(),
            })
            .map_err(err)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| QError::Serialization(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| QError::Serialization(e.to_string()))
}
