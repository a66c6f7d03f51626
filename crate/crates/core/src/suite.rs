//! Shared plumbing for the verification suites: per-sample random streams,
//! the parallel sample runner and the report type.

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::config::Capacity;
use crate::error::Result;
use crate::num::{q_json, Q};
use crate::ordinal::Ordinal;
use crate::spaces::NormEngine;

/// Parameters shared by all suites.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Samples per instance; `None` takes the suite's default.
    pub samples: Option<usize>,
    /// Ordinals for the Schreier-based suites; empty takes the suite's default.
    pub alphas: Vec<Ordinal>,
    /// Replaces the bound under test, e.g. to confirm that a smaller
    /// constant is refuted.
    pub bound: Option<Q>,
    pub capacity: Capacity,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 1,
            samples: None,
            alphas: Vec::new(),
            bound: None,
            capacity: Capacity::default(),
        }
    }
}

impl SuiteConfig {
    pub fn samples_or(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }

    pub fn alphas_or(&self, default: &[u64]) -> Vec<Ordinal> {
        if self.alphas.is_empty() {
            default.iter().map(|&n| Ordinal::from_nat(n)).collect()
        } else {
            self.alphas.clone()
        }
    }

    pub fn alphas_or_ordinals(&self, default: &[Ordinal]) -> Vec<Ordinal> {
        if self.alphas.is_empty() {
            default.to_vec()
        } else {
            self.alphas.clone()
        }
    }
}

/// The random stream for sample `index` of stream family `family`.
///
/// Depends only on the master seed and the counters, never on scheduling.
pub fn sample_rng(seed: u64, family: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ family.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    rng.set_stream(index);
    rng
}

/// One checked inequality instance: `ratio ≤ bound` is the claim.
#[derive(Clone, Debug)]
pub struct Sample {
    pub ratio: Q,
    pub witness: Value,
}

/// Runs `count` samples in parallel, each with its own engine per worker
/// and its own counter-derived stream; results come back in index order.
pub fn run_samples<F>(
    capacity: &Capacity,
    seed: u64,
    family: u64,
    count: usize,
    f: F,
) -> Result<Vec<Sample>>
where
    F: Fn(&NormEngine, &mut ChaCha8Rng) -> Result<Sample> + Sync,
{
    (0..count)
        .into_par_iter()
        .map_init(
            || NormEngine::new(capacity.clone()),
            |engine, i| {
                let mut rng = sample_rng(seed, family, i as u64);
                f(engine, &mut rng)
            },
        )
        .collect()
}

/// Summary of a batch of samples against one bound.
#[derive(Clone, Debug)]
pub struct Tally {
    pub samples: usize,
    pub violations: usize,
    pub max_ratio: Q,
    /// The first violating sample, or the sample attaining the maximum.
    pub witness: Option<Value>,
}

impl Tally {
    pub fn new() -> Self {
        Tally {
            samples: 0,
            violations: 0,
            max_ratio: Q::zero(),
            witness: None,
        }
    }

    pub fn absorb(&mut self, samples: Vec<Sample>, bound: &Q) {
        for s in samples {
            self.samples += 1;
            let violates = s.ratio > *bound;
            if violates {
                if self.violations == 0 {
                    self.witness = Some(s.witness.clone());
                }
                self.violations += 1;
            }
            if s.ratio > self.max_ratio || self.samples == 1 {
                if self.violations == 0 {
                    self.witness = Some(s.witness);
                }
                self.max_ratio = s.ratio;
            }
        }
    }

    pub fn merge(&mut self, other: Tally) {
        if self.violations == 0
            && (other.violations > 0 || self.witness.is_none() || other.max_ratio > self.max_ratio)
        {
            self.witness = other.witness;
        }
        if other.max_ratio > self.max_ratio {
            self.max_ratio = other.max_ratio;
        }
        self.samples += other.samples;
        self.violations += other.violations;
    }
}

impl Default for Tally {
    fn default() -> Self {
        Tally::new()
    }
}

/// Outcome of one suite.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub config: Value,
    pub pass: bool,
    pub samples: usize,
    pub violations: usize,
    pub bound: Option<Q>,
    pub max_ratio: Option<Q>,
    pub witness: Option<Value>,
    pub details: Value,
}

impl SuiteReport {
    pub fn from_tally(suite: &str, config: Value, bound: Q, tally: Tally, details: Value) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            config,
            pass: tally.violations == 0,
            samples: tally.samples,
            violations: tally.violations,
            bound: Some(bound),
            max_ratio: Some(tally.max_ratio),
            witness: tally.witness,
            details,
        }
    }

    /// JSON with sorted keys; rationals as `[num, den]`.
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("suite".into(), json!(self.suite));
        m.insert("config".into(), self.config.clone());
        m.insert("pass".into(), json!(self.pass));
        m.insert("samples".into(), json!(self.samples));
        m.insert("violations".into(), json!(self.violations));
        if let Some(b) = &self.bound {
            m.insert("bound".into(), q_json(b));
        }
        if let Some(r) = &self.max_ratio {
            m.insert("max_ratio".into(), q_json(r));
        }
        if let Some(w) = &self.witness {
            m.insert("witness".into(), w.clone());
        }
        m.insert("details".into(), self.details.clone());
        Value::Object(m)
    }
}

/// Config echo common to every suite.
pub fn config_json(cfg: &SuiteConfig, samples: usize, alphas: &[Ordinal], bound: &Q) -> Value {
    json!({
        "seed": cfg.seed,
        "samples": samples,
        "alphas": alphas.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
        "bound": q_json(bound),
        "bound_overridden": cfg.bound.is_some(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::qi;
    use rand::Rng;

    #[test]
    fn streams_depend_on_counters_only() {
        let a: u64 = sample_rng(5, 1, 3).gen();
        let b: u64 = sample_rng(5, 1, 3).gen();
        let c: u64 = sample_rng(5, 1, 4).gen();
        let d: u64 = sample_rng(5, 2, 3).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn parallel_results_match_sequential_order() {
        let cap = Capacity::default();
        let run = || {
            run_samples(&cap, 9, 1, 64, |_, rng| {
                Ok(Sample {
                    ratio: qi(rng.gen_range(0..100)),
                    witness: Value::Null,
                })
            })
            .unwrap()
            .into_iter()
            .map(|s| s.ratio)
            .collect::<Vec<_>>()
        };
        let seq: Vec<Q> = (0..64).map(|i| qi(sample_rng(9, 1, i).gen_range(0..100))).collect();
        assert_eq!(run(), seq);
    }

    #[test]
    fn tally_keeps_first_violation() {
        let mk = |r: i64, tag: i64| Sample {
            ratio: qi(r),
            witness: json!(tag),
        };
        let mut t = Tally::new();
        t.absorb(vec![mk(1, 0), mk(3, 1), mk(5, 2), mk(2, 3)], &qi(2));
        assert_eq!(t.violations, 2);
        assert_eq!(t.max_ratio, qi(5));
        assert_eq!(t.witness, Some(json!(1)));
        let mut ok = Tally::new();
        ok.absorb(vec![mk(1, 0), mk(2, 1), mk(2, 2)], &qi(2));
        assert_eq!(ok.witness, Some(json!(1)));
    }
}
