//! Classical stand-in for forward and reverse quantum annealing: single-spin
//! Metropolis sweeps under a temperature schedule.
//!
//! Time is mapped to sweeps at [`SWEEPS_PER_MICROSECOND`]. The anneal
//! fraction `s` maps to temperature geometrically,
//! `T(s) = T_min * (T_max / T_min)^(1 - s)`, so `s = 1` is the cold end and
//! lowering `s` re-introduces exploration.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qubo::{BitVector, CompiledIsing, IsingProblem};
use crate::sampleset::{fingerprint, Provenance, SampleSet};

pub const SWEEPS_PER_MICROSECOND: usize = 10;
/// 200 us forward anneal.
pub const FORWARD_SWEEPS: usize = 200 * SWEEPS_PER_MICROSECOND;
/// 2 us ramp on each side of the reverse-anneal pause.
pub const REVERSE_RAMP_SWEEPS: usize = 2 * SWEEPS_PER_MICROSECOND;
/// 10 us pause.
pub const DEFAULT_HOLD_SWEEPS: usize = 10 * SWEEPS_PER_MICROSECOND;
pub const DEFAULT_S_TARGET: f64 = 0.8;
pub const DEFAULT_T_MIN: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnnealMode {
    Forward,
    Reverse,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnealSchedule {
    pub mode: AnnealMode,
    /// Forward: number of cooling sweeps. Reverse: ramp down + hold + ramp up.
    pub total_sweeps: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_target: Option<f64>,
    #[serde(default)]
    pub hold_sweeps: usize,
    /// `None` resolves to `2 * (max |h| + max_i sum_j |J_ij|)` at run time.
    pub t_max: Option<f64>,
    pub t_min: f64,
    pub seed: u64,
}

impl AnnealSchedule {
    pub fn forward(seed: u64) -> Self {
        AnnealSchedule {
            mode: AnnealMode::Forward,
            total_sweeps: FORWARD_SWEEPS,
            s_target: None,
            hold_sweeps: 0,
            t_max: None,
            t_min: DEFAULT_T_MIN,
            seed,
        }
    }

    pub fn with_sweeps(mut self, total_sweeps: usize) -> Self {
        self.total_sweeps = total_sweeps;
        self
    }

    /// Reverse to `s_target` over 20 sweeps, pause `hold_sweeps`, return
    /// over 20 sweeps.
    pub fn reverse(s_target: f64, hold_sweeps: usize, seed: u64) -> Self {
        AnnealSchedule {
            mode: AnnealMode::Reverse,
            total_sweeps: 2 * REVERSE_RAMP_SWEEPS + hold_sweeps,
            s_target: Some(s_target),
            hold_sweeps,
            t_max: None,
            t_min: DEFAULT_T_MIN,
            seed,
        }
    }

    /// Hold length for a pause given in microseconds.
    pub fn hold_from_microseconds(us: f64) -> usize {
        (us * SWEEPS_PER_MICROSECOND as f64).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        if self.total_sweeps == 0 {
            return Err(Error::config("total_sweeps must be at least 1"));
        }
        if !(self.t_min.is_finite() && self.t_min > 0.0) {
            return Err(Error::config(format!("T_min must be positive, got {}", self.t_min)));
        }
        if let Some(t_max) = self.t_max {
            if !(t_max.is_finite() && t_max > self.t_min) {
                return Err(Error::config(format!("T_max {t_max} must exceed T_min {}", self.t_min)));
            }
        }
        if self.mode == AnnealMode::Reverse {
            let s = self
                .s_target
                .ok_or_else(|| Error::config("reverse schedule needs s_target"))?;
            if !(s > 0.0 && s <= 1.0) {
                return Err(Error::config(format!("s_target must lie in (0, 1], got {s}")));
            }
            if self.hold_sweeps > self.total_sweeps {
                return Err(Error::config("hold_sweeps exceeds total_sweeps"));
            }
        }
        Ok(())
    }

    fn resolved(&self, model: &CompiledIsing) -> AnnealSchedule {
        let mut s = self.clone();
        s.t_max = Some(
            self.t_max
                .unwrap_or_else(|| (2.0 * model.energy_scale()).max(2.0 * self.t_min)),
        );
        s
    }

    /// `T(s) = T_min * (T_max / T_min)^(1 - s)`.
    pub fn temperature_at(&self, s: f64) -> f64 {
        let t_max = self.t_max.expect("resolved schedule");
        self.t_min * (t_max / self.t_min).powf(1.0 - s)
    }

    /// Temperature of each forward sweep, geometric from T_max to T_min.
    pub fn forward_temperatures(&self) -> Vec<f64> {
        let k = self.total_sweeps;
        (0..k)
            .map(|i| {
                let s = if k == 1 { 1.0 } else { i as f64 / (k - 1) as f64 };
                self.temperature_at(s)
            })
            .collect()
    }

    /// Temperature of each reverse-anneal sweep: ramp `s` linearly from 1 to
    /// `s_target`, hold, ramp back to 1. Empty when `s_target == 1`.
    pub fn reverse_temperatures(&self) -> Vec<f64> {
        let s_target = self.s_target.unwrap_or(1.0);
        if s_target >= 1.0 {
            return Vec::new();
        }
        let ramps = self.total_sweeps - self.hold_sweeps;
        let down = ramps / 2;
        let up = ramps - down;
        let mut temps = Vec::with_capacity(self.total_sweeps);
        for k in 1..=down {
            temps.push(self.temperature_at(1.0 - (1.0 - s_target) * k as f64 / down as f64));
        }
        temps.extend(std::iter::repeat_n(self.temperature_at(s_target), self.hold_sweeps));
        for k in 1..=up {
            temps.push(self.temperature_at(s_target + (1.0 - s_target) * k as f64 / up as f64));
        }
        temps
    }
}

/// How `refine` picks each read's starting state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SelectionPolicy {
    /// Draw from the candidate distribution, weighted by multiplicity.
    UniformRandom,
    /// Always start from the lowest-energy candidate.
    LowestEnergy,
}

impl fmt::Display for SelectionPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SelectionPolicy::UniformRandom => "uniform-random",
            SelectionPolicy::LowestEnergy => "lowest-energy",
        })
    }
}

impl FromStr for SelectionPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform-random" | "uniform" => Ok(SelectionPolicy::UniformRandom),
            "lowest-energy" | "lowest" => Ok(SelectionPolicy::LowestEnergy),
            other => Err(Error::config(format!("unknown selection policy {other:?}"))),
        }
    }
}

/// Per-read generator; streams are keyed by read index so results do not
/// depend on how reads are spread over threads.
fn read_rng(seed: u64, read: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(read as u64);
    rng
}

const SELECTION_STREAM_KEY: u64 = 0x9e37_79b9_7f4a_7c15;

fn sweep(model: &CompiledIsing, spins: &mut [i8], local: &mut [f64], temperature: f64, rng: &mut ChaCha8Rng) {
    for i in 0..spins.len() {
        let delta = model.flip_delta(spins, local, i);
        if delta <= 0.0 || rng.gen::<f64>() < (-delta / temperature).exp() {
            model.apply_flip(spins, local, i);
        }
    }
}

fn run_chain(model: &CompiledIsing, mut spins: Vec<i8>, temps: &[f64], rng: &mut ChaCha8Rng) -> BitVector {
    let mut local = model.local_fields(&spins);
    for &t in temps {
        sweep(model, &mut spins, &mut local, t, rng);
    }
    BitVector::from_spins(&spins).expect("spins stay bipolar")
}

fn empty_set(p: &IsingProblem, provenance: Provenance) -> SampleSet {
    SampleSet::from_reads(Vec::new(), |_| 0.0, provenance, fingerprint(p))
}

pub fn forward_anneal(p: &IsingProblem, sched: &AnnealSchedule, num_reads: usize) -> Result<SampleSet> {
    if sched.mode != AnnealMode::Forward {
        return Err(Error::config("forward_anneal needs a forward schedule"));
    }
    sched.validate()?;
    let model = p.compile();
    let sched = sched.resolved(&model);
    let provenance = Provenance::Forward {
        schedule: sched.clone(),
    };
    if num_reads == 0 {
        return Ok(empty_set(p, provenance));
    }
    let temps = sched.forward_temperatures();
    let n = p.num_vars();
    let reads: Vec<BitVector> = (0..num_reads)
        .into_par_iter()
        .map(|r| {
            let mut rng = read_rng(sched.seed, r);
            let spins: Vec<i8> = (0..n).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect();
            run_chain(&model, spins, &temps, &mut rng)
        })
        .collect();
    Ok(SampleSet::from_reads(
        reads,
        |b| p.energy_unchecked(&b.to_spins()),
        provenance,
        fingerprint(p),
    ))
}

pub fn reverse_anneal(
    p: &IsingProblem,
    initial: Option<&BitVector>,
    sched: &AnnealSchedule,
    num_reads: usize,
) -> Result<SampleSet> {
    let initial = initial.ok_or_else(|| Error::config("reverse annealing needs an initial state"))?;
    run_reverse(p, sched, num_reads, |_| initial.clone(), None)
}

/// Reverse-anneals from states chosen out of `candidates` by `policy`.
pub fn refine(
    p: &IsingProblem,
    candidates: &SampleSet,
    sched: &AnnealSchedule,
    num_reads: usize,
    policy: SelectionPolicy,
) -> Result<SampleSet> {
    let lowest = candidates
        .lowest()
        .ok_or_else(|| Error::config("refine needs at least one candidate"))?;
    let total: usize = candidates.samples.iter().map(|s| s.count).sum();
    let pick = |read: usize| match policy {
        SelectionPolicy::LowestEnergy => lowest.bits.clone(),
        SelectionPolicy::UniformRandom => {
            // Selection draws come from their own stream so the chain itself
            // sees the same random numbers under either policy.
            let mut rng = read_rng(sched.seed ^ SELECTION_STREAM_KEY, read);
            let mut ticket = rng.gen_range(0..total.max(1));
            for s in &candidates.samples {
                if ticket < s.count {
                    return s.bits.clone();
                }
                ticket -= s.count;
            }
            lowest.bits.clone()
        }
    };
    run_reverse(p, sched, num_reads, pick, Some(policy))
}

fn run_reverse<F>(
    p: &IsingProblem,
    sched: &AnnealSchedule,
    num_reads: usize,
    initial: F,
    policy: Option<SelectionPolicy>,
) -> Result<SampleSet>
where
    F: Fn(usize) -> BitVector + Sync,
{
    if sched.mode != AnnealMode::Reverse {
        return Err(Error::config("reverse annealing needs a reverse schedule"));
    }
    sched.validate()?;
    let model = p.compile();
    let sched = sched.resolved(&model);
    let provenance = match policy {
        Some(policy) => Provenance::Refine {
            schedule: sched.clone(),
            policy,
        },
        None => Provenance::Reverse {
            schedule: sched.clone(),
        },
    };
    if num_reads == 0 {
        return Ok(empty_set(p, provenance));
    }
    let temps = sched.reverse_temperatures();
    let n = p.num_vars();
    let reads: Vec<BitVector> = (0..num_reads)
        .into_par_iter()
        .map(|r| {
            let start = initial(r);
            let mut rng = read_rng(sched.seed, r);
            if start.len() != n {
                return Err(Error::dimension(n, start.len()));
            }
            Ok(run_chain(&model, start.to_spins(), &temps, &mut rng))
        })
        .collect::<Result<_>>()?;
    Ok(SampleSet::from_reads(
        reads,
        |b| p.energy_unchecked(&b.to_spins()),
        provenance,
        fingerprint(p),
    ))
}
