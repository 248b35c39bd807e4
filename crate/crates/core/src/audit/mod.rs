//! Randomized audit campaigns.
//!
//! Every check in [`Check::all`] gets its own stream of seeded instances.
//! Instance `i` of check `c` draws from a ChaCha stream selected by
//! `(c, i)`, so the report depends on the configuration alone and not on how
//! instances are spread over worker threads.
//!
//! # Verdict table
//!
//! Evaluated top to bottom; the first matching row wins.
//!
//! | tallies                                                    | verdict                    |
//! |------------------------------------------------------------|----------------------------|
//! | `lemma2` or a `corollary3_*` check failed (hypotheses met) | `inconclusive`             |
//! | a right and a left condition failed                        | `preabelian-only`          |
//! | a right condition failed                                   | `left-only`                |
//! | a left condition failed                                    | `right-only`               |
//! | `semi_abelian` failed                                      | `inconclusive`             |
//! | some condition or `strict` below `min_nonvacuous`          | `inconclusive`             |
//! | no `strict` failure                                        | `abelian-consistent`       |
//! | both semi-stability probes clean with enough coverage      | `quasi-abelian-consistent` |
//! | otherwise                                                  | `semi-abelian-consistent`  |

mod generate;
mod shrink;

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use generate::{generate_instance, GenerationExhausted, RETRY_BUDGET};
pub use shrink::{instance_metric, shrink, SizeMetric};

use crate::backends::{Backend, MatrixCategory};
use crate::category::SampleRng;
use crate::conditions::{
    check_result, run_check, Check, CheckResult, ConditionId, Index, Instance, ProbeParams, Side, Verdict,
};
use crate::with_category;

pub const DEFAULT_SAMPLES: usize = 100;
pub const DEFAULT_DIM_BOUND: usize = 3;
pub const DEFAULT_SHRINK_BUDGET: usize = 200;
pub const DEFAULT_MIN_NONVACUOUS: usize = 30;
pub const DEFAULT_PROBE_SAMPLES: usize = 20;
/// Shrunk witnesses kept per check.
pub const WITNESS_CAP: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditConfig {
    pub backend: Backend,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_dim_bound")]
    pub dim_bound: usize,
    #[serde(default = "default_shrink_budget")]
    pub shrink_budget: usize,
    #[serde(default = "default_min_nonvacuous")]
    pub min_nonvacuous: usize,
    /// Pushouts (pullbacks) tried per semi-stability probe instance.
    #[serde(default = "default_probe_samples")]
    pub probe_samples: usize,
    /// Instances per check, keyed by check name; `default` covers the rest.
    #[serde(default)]
    pub samples: BTreeMap<String, usize>,
}

fn default_dim_bound() -> usize {
    DEFAULT_DIM_BOUND
}
fn default_shrink_budget() -> usize {
    DEFAULT_SHRINK_BUDGET
}
fn default_min_nonvacuous() -> usize {
    DEFAULT_MIN_NONVACUOUS
}
fn default_probe_samples() -> usize {
    DEFAULT_PROBE_SAMPLES
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot parse config: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("unknown key samples.{0}")]
    UnknownSampleKey(String),
}

impl AuditConfig {
    pub fn new(backend: Backend, seed: u64) -> Self {
        AuditConfig {
            backend,
            seed,
            dim_bound: DEFAULT_DIM_BOUND,
            shrink_budget: DEFAULT_SHRINK_BUDGET,
            min_nonvacuous: DEFAULT_MIN_NONVACUOUS,
            probe_samples: DEFAULT_PROBE_SAMPLES,
            samples: BTreeMap::new(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: AuditConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for key in self.samples.keys() {
            if key != "default" && key.parse::<Check>().is_err() {
                return Err(ConfigError::UnknownSampleKey(key.clone()));
            }
        }
        Ok(())
    }

    pub fn with_default_samples(mut self, n: usize) -> Self {
        self.samples.insert("default".to_string(), n);
        self
    }

    pub fn samples_for(&self, check: Check) -> usize {
        self.samples.get(&check.to_string()).or_else(|| self.samples.get("default")).copied().unwrap_or(DEFAULT_SAMPLES)
    }

    /// The generator for instance `index` of `check`.
    pub fn instance_rng(&self, check: Check, index: u64) -> SampleRng {
        let ordinal = Check::all().iter().position(|c| *c == check).expect("listed") as u64;
        let mut rng = SampleRng::seed_from_u64(self.seed);
        rng.set_stream((ordinal << 40) | index);
        rng
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
    pub vacuous: usize,
    /// Instances the generator could not produce.
    pub exhausted: usize,
}

impl Tally {
    pub fn nonvacuous(&self) -> usize {
        self.pass + self.fail
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZooVerdict {
    AbelianConsistent,
    QuasiAbelianConsistent,
    SemiAbelianConsistent,
    LeftOnly,
    RightOnly,
    PreabelianOnly,
    Inconclusive,
}

impl ZooVerdict {
    pub fn is_consistent(self) -> bool {
        matches!(
            self,
            ZooVerdict::AbelianConsistent | ZooVerdict::QuasiAbelianConsistent | ZooVerdict::SemiAbelianConsistent
        )
    }

    pub fn is_refuted(self) -> bool {
        matches!(self, ZooVerdict::LeftOnly | ZooVerdict::RightOnly | ZooVerdict::PreabelianOnly)
    }
}

/// A failing instance after shrinking, with a replayable check result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub instance_id: u64,
    pub original_size: SizeMetric,
    pub shrunk_size: SizeMetric,
    pub result: CheckResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub backend: Backend,
    pub verdict: ZooVerdict,
    pub caveats: Vec<String>,
    pub tallies: BTreeMap<Check, Tally>,
    /// Up to [`WITNESS_CAP`] shrunk failures per check, by check then instance id.
    pub witnesses: Vec<Witness>,
}

impl AuditReport {
    pub fn tally(&self, check: Check) -> Tally {
        self.tallies.get(&check).copied().unwrap_or_default()
    }

    pub fn witnesses_for(&self, check: Check) -> impl Iterator<Item = &Witness> {
        self.witnesses.iter().filter(move |w| w.result.check == check)
    }
}

enum Evaluated<M> {
    Exhausted,
    Done(Verdict),
    Failed(Instance<M>, ProbeParams),
}

fn evaluate<C: MatrixCategory>(cat: &C, cfg: &AuditConfig, check: Check, index: u64) -> Evaluated<C::Morphism> {
    let mut rng = cfg.instance_rng(check, index);
    let Ok(inst) = generate_instance(cat, check, cfg.dim_bound, &mut rng) else {
        return Evaluated::Exhausted;
    };
    let probe = ProbeParams { samples: cfg.probe_samples, seed: rng.gen(), dim_bound: cfg.dim_bound };
    let out = run_check(cat, check, &inst, &probe).expect("generated instances have the check's shape");
    match out.verdict {
        Verdict::Fail => Evaluated::Failed(inst, probe),
        v => Evaluated::Done(v),
    }
}

/// Runs the audit on `workers` threads (the global pool when `None`).
pub fn run_audit(cfg: &AuditConfig, workers: Option<usize>) -> AuditReport {
    match workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool")
            .install(|| with_category!(cfg.backend, |cat| audit_in(&cat, cfg))),
        None => with_category!(cfg.backend, |cat| audit_in(&cat, cfg)),
    }
}

fn audit_in<C: MatrixCategory>(cat: &C, cfg: &AuditConfig) -> AuditReport {
    let jobs: Vec<(Check, u64)> =
        Check::all().into_iter().flat_map(|c| (0..cfg.samples_for(c) as u64).map(move |i| (c, i))).collect();
    let results: Vec<Evaluated<C::Morphism>> = jobs.par_iter().map(|&(c, i)| evaluate(cat, cfg, c, i)).collect();

    let mut tallies: BTreeMap<Check, Tally> = Check::all().into_iter().map(|c| (c, Tally::default())).collect();
    let mut failures: Vec<(Check, u64, Instance<C::Morphism>, ProbeParams)> = Vec::new();
    for (&(check, index), r) in jobs.iter().zip(results) {
        let t = tallies.get_mut(&check).expect("all checks tallied");
        match r {
            Evaluated::Exhausted => t.exhausted += 1,
            Evaluated::Done(Verdict::Pass) => t.pass += 1,
            Evaluated::Done(_) => t.vacuous += 1,
            Evaluated::Failed(inst, probe) => {
                t.fail += 1;
                if failures.iter().filter(|f| f.0 == check).count() < WITNESS_CAP {
                    failures.push((check, index, inst, probe));
                }
            }
        }
    }

    let witnesses = failures
        .into_iter()
        .map(|(check, index, inst, probe)| {
            let fails = |x: &Instance<C::Morphism>| {
                run_check(cat, check, x, &probe).map(|o| o.verdict == Verdict::Fail).unwrap_or(false)
            };
            let small = shrink(cat, &inst, cfg.shrink_budget, fails);
            Witness {
                instance_id: index,
                original_size: instance_metric(cat, &inst),
                shrunk_size: instance_metric(cat, &small),
                result: check_result(cat, check, &small, &probe).expect("shape preserved by shrinking"),
            }
        })
        .collect();

    let (verdict, caveats) = zoo_verdict(cfg, &tallies);
    AuditReport { backend: cfg.backend, verdict, caveats, tallies, witnesses }
}

fn conditions(side: Side) -> impl Iterator<Item = Check> {
    Index::ALL.into_iter().map(move |index| Check::Condition(ConditionId { side, index }))
}

/// Applies the decision table in the module documentation.
pub fn zoo_verdict(cfg: &AuditConfig, tallies: &BTreeMap<Check, Tally>) -> (ZooVerdict, Vec<String>) {
    let t = |c: Check| tallies.get(&c).copied().unwrap_or_default();
    let failed = |side| conditions(side).any(|c| t(c).fail > 0);
    let undercovered = |checks: Vec<Check>| -> Vec<String> {
        checks
            .into_iter()
            .filter(|&c| t(c).nonvacuous() < cfg.min_nonvacuous)
            .map(|c| {
                format!("{c} has {} non-vacuous instances, below the minimum {}", t(c).nonvacuous(), cfg.min_nonvacuous)
            })
            .collect()
    };
    let mut caveats = Vec::new();

    for c in Check::all() {
        if t(c).exhausted > 0 {
            caveats.push(format!("{c}: generator exhausted its retry budget {} times", t(c).exhausted));
        }
    }
    let right_vi = Check::Condition(ConditionId::right(Index::Vi));
    let left_vi = Check::Condition(ConditionId::left(Index::Vi));
    let mut lemma_failed = t(Check::Lemma2).fail > 0;
    for (cor, vi) in [(Check::Corollary3Kernels, right_vi), (Check::Corollary3Cokernels, left_vi)] {
        if t(vi).fail > 0 {
            caveats
                .push(format!("{cor} assumes composition stability, which {vi} refuted; its tally is informational"));
        } else {
            lemma_failed |= t(cor).fail > 0;
        }
    }
    if lemma_failed {
        caveats
            .push("a lemma that holds in every preabelian category failed; the backend breaks a category law".into());
        return (ZooVerdict::Inconclusive, caveats);
    }

    let (right_failed, left_failed) = (failed(Side::Right), failed(Side::Left));
    if right_failed || left_failed {
        let verdict = match (right_failed, left_failed) {
            (true, true) => ZooVerdict::PreabelianOnly,
            (true, false) => ZooVerdict::LeftOnly,
            _ => ZooVerdict::RightOnly,
        };
        let surviving = if right_failed { Side::Left } else { Side::Right };
        if verdict != ZooVerdict::PreabelianOnly {
            caveats.extend(undercovered(conditions(surviving).collect()));
        }
        return (verdict, caveats);
    }
    if t(Check::SemiAbelian).fail > 0 {
        caveats.push("semi_abelian failed although no side-specific condition did".into());
        return (ZooVerdict::Inconclusive, caveats);
    }
    let mut coverage: Vec<Check> = conditions(Side::Right).chain(conditions(Side::Left)).collect();
    coverage.push(Check::Strict);
    let missing = undercovered(coverage);
    if !missing.is_empty() {
        caveats.extend(missing);
        return (ZooVerdict::Inconclusive, caveats);
    }

    caveats.push("verdict is consistent with the sampled instances; it is not a proof".into());
    if t(Check::Strict).fail == 0 {
        return (ZooVerdict::AbelianConsistent, caveats);
    }
    let probes = [Check::SemistableKernel, Check::SemistableCokernel];
    let probes_failed = probes.iter().any(|&c| t(c).fail > 0);
    let probe_gaps = undercovered(probes.to_vec());
    if !probes_failed && probe_gaps.is_empty() {
        caveats.push("semi-stability was probed by sampling pushouts and pullbacks only".into());
        return (ZooVerdict::QuasiAbelianConsistent, caveats);
    }
    if probes_failed {
        caveats.push("a semi-stability probe found a kernel or cokernel that is not semi-stable".into());
    }
    caveats.extend(probe_gaps);
    (ZooVerdict::SemiAbelianConsistent, caveats)
}
