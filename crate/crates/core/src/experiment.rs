//! Seeded batch experiments over finite fields with JSON reports.
//!
//! Each trial draws its randomness from a seed derived from the master seed and the
//! trial index, so serial and parallel runs produce the same report.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cubic::{descend_step, smoothness_probe, Hypersurface, Smoothness};
use crate::error::{Error, Result};
use crate::field::{FiniteField, Fp};
use crate::fmoduli::{moduli_roundtrip, FModuliTuple};
use crate::forms::{monomials, Form};
use crate::json::form_from_json;
use crate::projgeom::{moment_point, ZeroCycle};
use crate::sample::{extension, sample_point, DEFAULT_ATTEMPTS, FIELD_SIZE_BUDGET};
use crate::symprod::{fold_round_trip, surface_round_trip, RoundTrip};

pub const SCHEMA_VERSION: u32 = 1;

/// Draws allowed when rejection-sampling a smooth random hypersurface.
pub const MAX_HYPERSURFACE_DRAWS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Descend,
    RoundtripSurface,
    RoundtripFold,
    ModuliRoundtrip,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum HypersurfaceSpec {
    Fermat,
    /// Coefficients in the hypersurface JSON layout.
    Explicit { form: Value },
    /// A cubic with random coefficients, redrawn until the smoothness probe certifies it.
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub prime: u64,
    /// Ambient dimension N of the hypersurface. Ignored in moduli mode.
    #[serde(default)]
    pub ambient: usize,
    #[serde(default = "default_hypersurface")]
    pub hypersurface: HypersurfaceSpec,
    /// Degree of the sampled points; in moduli mode, the degree 2d+1 of the base point.
    pub degree: usize,
    pub trials: usize,
    pub seed: u64,
    pub mode: Mode,
    #[serde(default = "default_budget")]
    pub budget: u64,
}

fn default_hypersurface() -> HypersurfaceSpec {
    HypersurfaceSpec::Fermat
}

fn default_budget() -> u64 {
    FIELD_SIZE_BUDGET
}

/// Execution options that do not affect the report's content.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub parallel: bool,
    /// Include wall-clock times, which makes reports differ between runs.
    pub timings: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    Mismatch,
    OutOfDomain,
    Unresolved,
    Failed,
}

impl Status {
    fn key(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Mismatch => "mismatch",
            Status::OutOfDomain => "out-of-domain",
            Status::Unresolved => "unresolved",
            Status::Failed => "failed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub part_degrees: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

impl TrialRecord {
    fn new(trial: usize, seed: u64, status: Status) -> Self {
        TrialRecord {
            trial,
            seed,
            status,
            branch: None,
            part_degrees: Vec::new(),
            output_degree: None,
            detail: None,
            wall_ms: None,
        }
    }

    fn error(trial: usize, seed: u64, e: &Error) -> Self {
        let mut r = TrialRecord::new(trial, seed, Status::Failed);
        match e {
            Error::Unresolved(d) => {
                r.status = Status::Unresolved;
                r.detail = Some(serde_json::to_value(d).unwrap());
            }
            other => r.detail = Some(json!(other.to_string())),
        }
        r
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub config: ExperimentConfig,
    pub hypersurface: Option<Value>,
    pub rejected_hypersurface_draws: usize,
    pub records: Vec<TrialRecord>,
    /// Output degree of each successful trial, or the status of the others.
    pub histogram: BTreeMap<String, usize>,
    pub tally: BTreeMap<String, usize>,
}

impl ExperimentReport {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Seed of trial `i`, a SplitMix64 step of the master seed.
pub fn trial_seed(master: u64, i: usize) -> u64 {
    let mut z = master.wrapping_add((i as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn validate(c: &ExperimentConfig) -> Result<Fp> {
    if c.trials == 0 {
        return Err(Error::Invalid("trial count must be at least 1".into()));
    }
    let k = Fp::new(c.prime)?;
    let want = |ok: bool, msg: String| if ok { Ok(()) } else { Err(Error::Invalid(msg)) };
    match c.mode {
        Mode::Descend => {
            want(c.ambient == 4 || c.ambient == 5, "descend needs a cubic in P^4 or P^5".into())?;
            want(c.degree == c.ambient + 3, format!("descend needs points of degree {}", c.ambient + 3))?;
        }
        Mode::RoundtripSurface => {
            want(c.ambient == 3 && c.degree == 6, "surface round trip needs P^3 and degree 6".into())?
        }
        Mode::RoundtripFold => {
            want(c.ambient == 4 || c.ambient == 5, "fold round trip needs a cubic in P^4 or P^5".into())?;
            want(c.degree == c.ambient + 3, format!("fold round trip needs degree {}", c.ambient + 3))?;
        }
        Mode::ModuliRoundtrip => {
            want(c.degree >= 3 && c.degree % 2 == 1, "moduli round trip needs an odd point degree ≥ 3".into())?
        }
    }
    Ok(k)
}

fn random_cubic(k: Fp, ambient: usize, rng: &mut ChaCha8Rng) -> Form<u64> {
    loop {
        let terms: Vec<(Vec<u32>, u64)> =
            monomials(ambient + 1, 3).into_iter().map(|e| (e, k.random(rng))).collect();
        if let Ok(f) = Form::new(&k, ambient + 1, 3, terms) {
            if !f.is_zero() {
                return f;
            }
        }
    }
}

fn build_hypersurface(k: Fp, c: &ExperimentConfig) -> Result<(Hypersurface<Fp>, usize)> {
    match &c.hypersurface {
        HypersurfaceSpec::Fermat => Ok((Hypersurface::fermat(k, c.ambient, 3), 0)),
        HypersurfaceSpec::Explicit { form } => {
            let f = form_from_json(k, form)?;
            if f.nvars() != c.ambient + 1 || f.degree() != 3 {
                return Err(Error::Invalid("explicit form must be a cubic in the configured ambient space".into()));
            }
            Ok((Hypersurface::new(k, f)?, 0))
        }
        HypersurfaceSpec::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(c.seed ^ 0x5eed_c0b1);
            for rejected in 0..MAX_HYPERSURFACE_DRAWS {
                let x = Hypersurface::new(k, random_cubic(k, c.ambient, &mut rng))?;
                if let Smoothness::CertifiedUpTo(_) = smoothness_probe(&x, 0, 0)? {
                    return Ok((x, rejected));
                }
            }
            Err(Error::NoneFound(MAX_HYPERSURFACE_DRAWS))
        }
    }
}

fn single(p: crate::projgeom::ClosedPoint<Fp>) -> ZeroCycle<Fp> {
    ZeroCycle::from_points(p.ambient(), vec![p]).expect("one point")
}

fn round_trip_record(trial: usize, seed: u64, r: Result<RoundTrip>, degree: usize) -> TrialRecord {
    match r {
        Ok(RoundTrip::Identity) => {
            let mut rec = TrialRecord::new(trial, seed, Status::Ok);
            rec.output_degree = Some(degree);
            rec
        }
        Ok(RoundTrip::Mismatch) => TrialRecord::new(trial, seed, Status::Mismatch),
        Ok(RoundTrip::OutOfDomain(why)) => {
            let mut rec = TrialRecord::new(trial, seed, Status::OutOfDomain);
            rec.detail = Some(json!(why));
            rec
        }
        Err(e) => TrialRecord::error(trial, seed, &e),
    }
}

fn run_trial(k: Fp, x: Option<&Hypersurface<Fp>>, c: &ExperimentConfig, trial: usize) -> TrialRecord {
    let seed = trial_seed(c.seed, trial);
    let sample = |x: &Hypersurface<Fp>| sample_point(x, c.degree, seed, c.budget, DEFAULT_ATTEMPTS);
    match c.mode {
        Mode::Descend => {
            let x = x.expect("hypersurface");
            let res = sample(x).and_then(|p| descend_step(x, &p));
            match res {
                Ok((y, trace)) => {
                    let step = &trace.steps[0];
                    let mut rec = TrialRecord::new(trial, seed, Status::Ok);
                    rec.branch = Some(serde_json::to_value(step.branch).unwrap().as_str().unwrap().to_string());
                    rec.part_degrees = step.cycle_part_degrees.clone();
                    rec.output_degree = Some(y.degree());
                    rec.detail = Some(json!({
                        "curve_degree": step.curve_degree,
                        "cycle_degree": step.cycle_degree,
                        "curve_contained": step.curve_contained,
                        "in_advertised_set": step.in_advertised_set,
                    }));
                    rec
                }
                Err(e) => TrialRecord::error(trial, seed, &e),
            }
        }
        Mode::RoundtripSurface => {
            let x = x.expect("hypersurface");
            let h = [1, 0, 0, 0];
            let r = sample(x).and_then(|p| surface_round_trip(x, &h, &single(p)));
            round_trip_record(trial, seed, r, 6)
        }
        Mode::RoundtripFold => {
            let x = x.expect("hypersurface");
            let r = sample(x).and_then(|p| fold_round_trip(x, &single(p)));
            round_trip_record(trial, seed, r, c.degree)
        }
        Mode::ModuliRoundtrip => {
            let d = (c.degree - 1) / 2;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = (|| -> Result<RoundTrip> {
                let kf = extension(k, c.degree)?;
                let x = moment_point(&kf, 2 * d - 1)?;
                let draw = |rng: &mut ChaCha8Rng| (0..d - 1).map(|_| rng.gen_range(0..k.p())).collect::<Vec<_>>();
                let alpha = draw(&mut rng);
                let beta = draw(&mut rng);
                let tuple = FModuliTuple::new(d, x.minpoly().clone(), alpha, beta)?;
                match moduli_roundtrip(&x, &tuple) {
                    Ok(back) if back == tuple => Ok(RoundTrip::Identity),
                    Ok(_) => Ok(RoundTrip::Mismatch),
                    Err(e @ (Error::NotGeneral(_) | Error::DependentBasis)) => Ok(RoundTrip::OutOfDomain(e.to_string())),
                    Err(e) => Err(e),
                }
            })();
            round_trip_record(trial, seed, r, c.degree)
        }
    }
}

/// Runs every trial of a configuration. Per-trial failures are recorded in the report;
/// only an invalid configuration is an error.
pub fn cmd_run(c: &ExperimentConfig, opts: RunOptions) -> Result<ExperimentReport> {
    let k = validate(c)?;
    let (x, rejected) = match c.mode {
        Mode::ModuliRoundtrip => (None, 0),
        _ => {
            let (x, r) = build_hypersurface(k, c)?;
            (Some(x), r)
        }
    };
    let one = |i: usize| {
        let start = Instant::now();
        let mut rec = run_trial(k, x.as_ref(), c, i);
        if opts.timings {
            rec.wall_ms = Some(start.elapsed().as_secs_f64() * 1e3);
        }
        rec
    };
    let records: Vec<TrialRecord> = if opts.parallel {
        (0..c.trials).into_par_iter().map(one).collect()
    } else {
        (0..c.trials).map(one).collect()
    };
    let mut histogram = BTreeMap::new();
    let mut tally = BTreeMap::new();
    for r in &records {
        let key = match (r.status, r.output_degree) {
            (Status::Ok, Some(d)) => d.to_string(),
            (s, _) => s.key().to_string(),
        };
        *histogram.entry(key).or_insert(0) += 1;
        *tally.entry(r.status.key().to_string()).or_insert(0) += 1;
    }
    Ok(ExperimentReport {
        schema_version: SCHEMA_VERSION,
        config: c.clone(),
        hypersurface: x.as_ref().map(|x| crate::json::form_to_json(&k, x.form())),
        rejected_hypersurface_draws: rejected,
        records,
        histogram,
        tally,
    })
}
