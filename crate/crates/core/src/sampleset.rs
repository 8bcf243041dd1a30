//! Batches of solver output with multiplicities and provenance.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::anneal::{AnnealSchedule, SelectionPolicy};
use crate::error::{Error, Result};
use crate::exact::GroundStateSet;
use crate::qubo::{BitVector, SCHEMA_VERSION};
use crate::tabu::TabuConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub bits: BitVector,
    pub energy: f64,
    pub count: usize,
}

/// Which engine produced a sample set, with the parameters it ran under.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "engine", rename_all = "snake_case")]
pub enum Provenance {
    Exact {
        max_vars: usize,
    },
    Forward {
        schedule: AnnealSchedule,
    },
    Reverse {
        schedule: AnnealSchedule,
    },
    Refine {
        schedule: AnnealSchedule,
        policy: SelectionPolicy,
    },
    Tabu {
        config: TabuConfig,
    },
    Decompose {
        config: TabuConfig,
    },
}

impl Provenance {
    pub fn engine_name(&self) -> &'static str {
        match self {
            Provenance::Exact { .. } => "exact",
            Provenance::Forward { .. } => "forward",
            Provenance::Reverse { .. } => "reverse",
            Provenance::Refine { .. } => "refine",
            Provenance::Tabu { .. } => "tabu",
            Provenance::Decompose { .. } => "decompose",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    pub version: u32,
    #[serde(flatten)]
    pub provenance: Provenance,
    /// SHA-256 of the problem the samples were drawn for.
    pub fingerprint: String,
    pub num_reads: usize,
    /// Set when a time budget cut the run short.
    #[serde(default)]
    pub truncated: bool,
    /// Ascending energy, ties by bit vector.
    pub samples: Vec<Sample>,
}

/// Hex SHA-256 of a value's canonical JSON.
pub fn fingerprint<T: Serialize>(value: &T) -> String {
    let json = serde_json::to_vec(value).expect("problem types serialize");
    hex::encode(Sha256::digest(json))
}

impl SampleSet {
    /// Buckets raw reads into unique states, scoring each once with `energy`.
    pub fn from_reads(
        reads: Vec<BitVector>,
        energy: impl Fn(&BitVector) -> f64,
        provenance: Provenance,
        fingerprint: String,
    ) -> Self {
        let num_reads = reads.len();
        let mut counts: BTreeMap<BitVector, usize> = BTreeMap::new();
        for r in reads {
            *counts.entry(r).or_insert(0) += 1;
        }
        let mut samples: Vec<Sample> = counts
            .into_iter()
            .map(|(bits, count)| Sample {
                energy: energy(&bits),
                bits,
                count,
            })
            .collect();
        samples.sort_by(|a, b| a.energy.total_cmp(&b.energy).then_with(|| a.bits.cmp(&b.bits)));
        SampleSet {
            version: SCHEMA_VERSION,
            provenance,
            fingerprint,
            num_reads,
            truncated: false,
            samples,
        }
    }

    /// Every ground state once.
    pub fn from_ground_states(g: &GroundStateSet, max_vars: usize, fingerprint: String) -> Self {
        let samples: Vec<Sample> = g
            .states
            .iter()
            .map(|s| Sample {
                bits: s.clone(),
                energy: g.energy,
                count: 1,
            })
            .collect();
        SampleSet {
            version: SCHEMA_VERSION,
            provenance: Provenance::Exact { max_vars },
            fingerprint,
            num_reads: samples.len(),
            truncated: false,
            samples,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn num_vars(&self) -> Option<usize> {
        self.samples.first().map(|s| s.bits.len())
    }

    pub fn lowest(&self) -> Option<&Sample> {
        self.samples
            .iter()
            .min_by(|a, b| a.energy.total_cmp(&b.energy).then_with(|| a.bits.cmp(&b.bits)))
    }

    pub fn best_energy(&self) -> Option<f64> {
        self.lowest().map(|s| s.energy)
    }

    /// All distinct states within `tol` of the best energy.
    pub fn best_states(&self, tol: f64) -> Vec<BitVector> {
        let Some(best) = self.best_energy() else {
            return Vec::new();
        };
        let mut states: Vec<BitVector> = self
            .samples
            .iter()
            .filter(|s| s.energy <= best + tol)
            .map(|s| s.bits.clone())
            .collect();
        states.sort();
        states.dedup();
        states
    }

    /// Multiplicity-weighted mean energy.
    pub fn mean_energy(&self) -> Option<f64> {
        let total: usize = self.samples.iter().map(|s| s.count).sum();
        if total == 0 {
            return None;
        }
        Some(self.samples.iter().map(|s| s.energy * s.count as f64).sum::<f64>() / total as f64)
    }

    /// Fraction of reads whose energy is within `tol` of `target`.
    pub fn fraction_at(&self, target: f64, tol: f64) -> f64 {
        let total: usize = self.samples.iter().map(|s| s.count).sum();
        if total == 0 {
            return 0.0;
        }
        let hits: usize = self
            .samples
            .iter()
            .filter(|s| (s.energy - target).abs() <= tol)
            .map(|s| s.count)
            .sum();
        hits as f64 / total as f64
    }

    /// Checks the multiplicity total and re-evaluates every stored energy.
    pub fn verify(&self, energy: impl Fn(&BitVector) -> Result<f64>, tol: f64) -> Result<()> {
        let total: usize = self.samples.iter().map(|s| s.count).sum();
        if total != self.num_reads {
            return Err(Error::config(format!(
                "multiplicities sum to {total}, num_reads is {}",
                self.num_reads
            )));
        }
        for s in &self.samples {
            let e = energy(&s.bits)?;
            if (e - s.energy).abs() > tol {
                return Err(Error::config(format!(
                    "stored energy {} for {} re-evaluates to {e}",
                    s.energy, s.bits
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}
