//! Single-flip tabu search with aspiration, restarts from a perturbed
//! incumbent, and a clamp-and-solve decomposition for large problems.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::enumerate_ground_states;
use crate::qubo::{BitVector, CompiledQubo, QuboProblem};
use crate::sampleset::{fingerprint, Provenance, SampleSet};

/// Sub-problems at or below this size are solved by enumeration.
pub const EXACT_SUBPROBLEM_VARS: usize = 20;
const MAX_PASSES: usize = 64;
const IMPROVE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabuConfig {
    pub tenure: usize,
    /// Total number of tabu runs, including the initial round.
    pub max_restarts: usize,
    /// Runs launched together from the same incumbent.
    pub restarts_per_round: usize,
    /// A run stops after this many moves without improving its own best.
    /// `None` means `max(500, 20 * num_vars)`.
    #[serde(default)]
    pub stall_iters: Option<usize>,
    pub subproblem_size: usize,
    /// Wall-clock budget in seconds; hitting it marks the result truncated.
    #[serde(default)]
    pub time_budget: Option<f64>,
    pub seed: u64,
}

impl Default for TabuConfig {
    fn default() -> Self {
        TabuConfig {
            tenure: 10,
            max_restarts: 16,
            restarts_per_round: 4,
            stall_iters: None,
            subproblem_size: 40,
            time_budget: None,
            seed: 0,
        }
    }
}

impl TabuConfig {
    pub fn with_seed(seed: u64) -> Self {
        TabuConfig {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.tenure == 0 {
            return Err(Error::config("tabu tenure must be at least 1"));
        }
        if self.max_restarts == 0 || self.restarts_per_round == 0 {
            return Err(Error::config("max_restarts and restarts_per_round must be at least 1"));
        }
        if self.subproblem_size == 0 {
            return Err(Error::config("subproblem_size must be at least 1"));
        }
        if let Some(t) = self.time_budget {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::config(format!("time budget must be positive, got {t}")));
            }
        }
        Ok(())
    }

    fn deadline(&self, start: Instant) -> Option<Instant> {
        self.time_budget.map(|t| start + Duration::from_secs_f64(t))
    }
}

/// Full record of a tabu search.
#[derive(Debug, Clone)]
pub struct TabuOutcome {
    pub best: BitVector,
    pub best_energy: f64,
    /// Incumbent energy after each round (or pass); non-increasing.
    pub trace: Vec<f64>,
    /// Best state of every individual run, in launch order.
    pub runs: Vec<BitVector>,
    pub truncated: bool,
}

struct RunResult {
    best: Vec<u8>,
    energy: f64,
    truncated: bool,
}

fn run_rng(seed: u64, run: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run as u64);
    rng
}

fn tabu_run(
    model: &CompiledQubo,
    mut x: Vec<u8>,
    tenure: usize,
    stall_limit: usize,
    rng: &mut ChaCha8Rng,
    deadline: Option<Instant>,
) -> RunResult {
    let n = x.len();
    let tenure = tenure.min(n.saturating_sub(1));
    let mut fields = model.local_fields(&x);
    let mut energy = model.energy(&x);
    let mut best = x.clone();
    let mut best_energy = energy;
    let mut tabu_until = vec![0usize; n];
    let mut stall = 0;
    let mut iter = 0usize;
    let hard_cap = stall_limit.saturating_mul(50);
    let mut truncated = false;

    while stall < stall_limit && iter < hard_cap && n > 0 {
        iter += 1;
        if iter.is_multiple_of(256) && deadline.is_some_and(|d| Instant::now() >= d) {
            truncated = true;
            break;
        }
        let mut chosen = usize::MAX;
        let mut chosen_delta = f64::INFINITY;
        let mut ties = 0u32;
        for (i, &until) in tabu_until.iter().enumerate() {
            let delta = model.flip_delta(&x, &fields, i);
            let allowed = until <= iter || energy + delta < best_energy - IMPROVE_TOL;
            if !allowed {
                continue;
            }
            if delta < chosen_delta - 1e-12 {
                chosen = i;
                chosen_delta = delta;
                ties = 1;
            } else if (delta - chosen_delta).abs() <= 1e-12 {
                ties += 1;
                if rng.gen_range(0..ties) == 0 {
                    chosen = i;
                }
            }
        }
        if chosen == usize::MAX {
            break;
        }
        energy += chosen_delta;
        model.apply_flip(&mut x, &mut fields, chosen);
        tabu_until[chosen] = iter + tenure + 1;
        if energy < best_energy - IMPROVE_TOL {
            best_energy = energy;
            best.copy_from_slice(&x);
            stall = 0;
        } else {
            stall += 1;
        }
        if iter.is_multiple_of(1024) {
            energy = model.energy(&x);
        }
    }
    let energy = model.energy(&best);
    RunResult {
        best,
        energy,
        truncated,
    }
}

fn perturb(x: &[u8], rng: &mut ChaCha8Rng) -> Vec<u8> {
    let mut y = x.to_vec();
    if y.is_empty() {
        return y;
    }
    let flips = (y.len() / 10).clamp(1, 20);
    for _ in 0..flips {
        let i = rng.gen_range(0..y.len());
        y[i] ^= 1;
    }
    y
}

/// Tabu search with restarts. The first run starts from `initial` when given,
/// otherwise from a random state; later rounds perturb the incumbent.
pub fn tabu_search(p: &QuboProblem, cfg: &TabuConfig, initial: Option<&BitVector>) -> Result<TabuOutcome> {
    cfg.validate()?;
    let n = p.num_vars();
    if let Some(init) = initial {
        if init.len() != n {
            return Err(Error::dimension(n, init.len()));
        }
    }
    let start = Instant::now();
    let deadline = cfg.deadline(start);
    let model = p.compile();
    let stall_limit = cfg.stall_iters.unwrap_or((20 * n).max(500));

    let mut incumbent: Option<(Vec<u8>, f64)> = None;
    let mut trace = Vec::new();
    let mut runs = Vec::new();
    let mut truncated = false;
    let mut launched = 0;
    while launched < cfg.max_restarts {
        let width = cfg.restarts_per_round.min(cfg.max_restarts - launched);
        let base = incumbent.as_ref().map(|(x, _)| x.clone());
        let results: Vec<RunResult> = (launched..launched + width)
            .into_par_iter()
            .map(|run| {
                let mut rng = run_rng(cfg.seed, run);
                let start_state = match (&base, initial) {
                    (Some(b), _) => perturb(b, &mut rng),
                    (None, Some(init)) if run == 0 => init.as_slice().to_vec(),
                    _ => (0..n).map(|_| rng.gen_range(0..=1u8)).collect(),
                };
                tabu_run(&model, start_state, cfg.tenure, stall_limit, &mut rng, deadline)
            })
            .collect();
        launched += width;
        for r in results {
            truncated |= r.truncated;
            let better = incumbent.as_ref().is_none_or(|(_, e)| r.energy < e - IMPROVE_TOL);
            runs.push(BitVector::new(r.best.clone()).expect("binary"));
            if better {
                incumbent = Some((r.best, r.energy));
            }
        }
        trace.push(incumbent.as_ref().map_or(f64::INFINITY, |(_, e)| *e));
        if truncated || deadline.is_some_and(|d| Instant::now() >= d) {
            truncated = true;
            break;
        }
    }
    let (best, _) = incumbent.expect("at least one run");
    let best = BitVector::new(best).expect("binary");
    let best_energy = p.energy_unchecked(best.as_slice());
    Ok(TabuOutcome {
        best,
        best_energy,
        trace,
        runs,
        truncated,
    })
}

fn outcome_to_set(p: &QuboProblem, outcome: TabuOutcome, provenance: Provenance) -> SampleSet {
    let mut set = SampleSet::from_reads(
        outcome.runs,
        |b| p.energy_unchecked(b.as_slice()),
        provenance,
        fingerprint(p),
    );
    set.truncated = outcome.truncated;
    set
}

/// One sample per tabu run.
pub fn tabu_solve(p: &QuboProblem, cfg: &TabuConfig) -> Result<SampleSet> {
    let outcome = tabu_search(p, cfg, None)?;
    Ok(outcome_to_set(p, outcome, Provenance::Tabu { config: cfg.clone() }))
}

/// Variables ordered by the magnitude of their flip energy at `x`, largest
/// first; ties keep index order.
pub fn impact_order(p: &QuboProblem, x: &BitVector) -> Vec<usize> {
    let model = p.compile();
    let fields = model.local_fields(x.as_slice());
    let mut order: Vec<usize> = (0..p.num_vars()).collect();
    let impact = |i: usize| model.flip_delta(x.as_slice(), &fields, i).abs();
    order.sort_by(|&a, &b| impact(b).total_cmp(&impact(a)).then(a.cmp(&b)));
    order
}

fn solve_subproblem(sub: &QuboProblem, current: &BitVector, cfg: &TabuConfig, seed: u64) -> Result<BitVector> {
    if sub.num_vars() <= EXACT_SUBPROBLEM_VARS {
        let ground = enumerate_ground_states(sub, EXACT_SUBPROBLEM_VARS)?;
        return Ok(ground.states.into_iter().next().expect("non-empty ground set"));
    }
    let sub_cfg = TabuConfig {
        seed,
        max_restarts: cfg.restarts_per_round,
        time_budget: None,
        ..cfg.clone()
    };
    Ok(tabu_search(sub, &sub_cfg, Some(current))?.best)
}

/// Full decomposition run, returning the incumbent trace across passes.
pub fn decompose_search(p: &QuboProblem, cfg: &TabuConfig) -> Result<TabuOutcome> {
    cfg.validate()?;
    let n = p.num_vars();
    if n <= cfg.subproblem_size {
        return tabu_search(p, cfg, None);
    }
    let start = Instant::now();
    let deadline = cfg.deadline(start);
    let initial = tabu_search(p, cfg, None)?;
    let mut truncated = initial.truncated;
    let mut x = initial.best;
    let mut energy = initial.best_energy;
    let mut trace = vec![energy];
    let mut runs = initial.runs;

    for pass in 0..MAX_PASSES {
        if truncated {
            break;
        }
        let mut improved = false;
        let order = impact_order(p, &x);
        for (chunk_no, chunk) in order.chunks(cfg.subproblem_size).enumerate() {
            let sub = p.clamp(chunk, &x)?;
            let current = BitVector::new(chunk.iter().map(|&i| x.get(i)).collect()).expect("binary");
            let seed = cfg.seed ^ ((pass as u64) << 32 | chunk_no as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
            let solved = solve_subproblem(&sub, &current, cfg, seed)?;
            if sub.energy_unchecked(solved.as_slice()) < sub.energy_unchecked(current.as_slice()) - IMPROVE_TOL {
                let mut merged = x.clone().into_inner();
                for (k, &i) in chunk.iter().enumerate() {
                    merged[i] = solved.get(k);
                }
                let merged_energy = p.energy_unchecked(&merged);
                if merged_energy < energy - IMPROVE_TOL {
                    x = BitVector::new(merged).expect("binary");
                    energy = merged_energy;
                    improved = true;
                }
            }
            if deadline.is_some_and(|d| Instant::now() >= d) {
                truncated = true;
                break;
            }
        }
        let polish_cfg = TabuConfig {
            seed: cfg.seed.wrapping_add(pass as u64 + 1),
            max_restarts: 1,
            time_budget: deadline.map(|d| d.saturating_duration_since(Instant::now()).as_secs_f64().max(1e-3)),
            ..cfg.clone()
        };
        if !truncated {
            let polished = tabu_search(p, &polish_cfg, Some(&x))?;
            truncated |= polished.truncated;
            if polished.best_energy < energy - IMPROVE_TOL {
                x = polished.best;
                energy = polished.best_energy;
                improved = true;
            }
        }
        trace.push(energy);
        if !improved {
            break;
        }
    }
    runs.push(x.clone());
    Ok(TabuOutcome {
        best: x,
        best_energy: energy,
        trace,
        runs,
        truncated,
    })
}

/// Decomposition solve. The sample set holds every initial tabu run plus the
/// final merged incumbent.
pub fn decompose_solve(p: &QuboProblem, cfg: &TabuConfig) -> Result<SampleSet> {
    let outcome = decompose_search(p, cfg)?;
    Ok(outcome_to_set(
        p,
        outcome,
        Provenance::Decompose { config: cfg.clone() },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::DEFAULT_MAX_VARS;
    use crate::nsp::NspInstance;

    #[test]
    fn single_variable_problem() {
        let mut p = QuboProblem::new(1);
        p.add_linear(0, -2.0).unwrap();
        let cfg = TabuConfig {
            max_restarts: 1,
            ..TabuConfig::with_seed(1)
        };
        let out = tabu_search(&p, &cfg, Some(&BitVector::zeros(1))).unwrap();
        assert_eq!(out.best.as_slice(), &[1]);
        assert_eq!(out.best_energy, -2.0);
    }

    #[test]
    fn config_validation() {
        assert!(TabuConfig {
            tenure: 0,
            ..TabuConfig::default()
        }
        .validate()
        .is_err());
        assert!(TabuConfig {
            max_restarts: 0,
            ..TabuConfig::default()
        }
        .validate()
        .is_err());
        assert!(TabuConfig {
            time_budget: Some(-1.0),
            ..TabuConfig::default()
        }
        .validate()
        .is_err());
        assert!(TabuConfig::default().validate().is_ok());
    }

    #[test]
    fn trace_is_monotone() {
        let p = NspInstance::paper_base(3, 12).build_qubo().unwrap();
        let out = tabu_search(&p, &TabuConfig::with_seed(4), None).unwrap();
        assert!(out.trace.windows(2).all(|w| w[1] <= w[0]));
        assert!((out.best_energy - p.energy(&out.best).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn matches_enumeration_on_small_instance() {
        let p = NspInstance::paper_base(3, 5).build_qubo().unwrap();
        let exact = enumerate_ground_states(&p, DEFAULT_MAX_VARS).unwrap();
        let set = tabu_solve(&p, &TabuConfig::with_seed(11)).unwrap();
        assert!((set.best_energy().unwrap() - exact.energy).abs() < 1e-9);
        set.verify(|b| p.energy(b), 1e-9).unwrap();
    }

    #[test]
    fn small_problem_skips_decomposition() {
        let p = NspInstance::paper_base(3, 6).build_qubo().unwrap();
        let cfg = TabuConfig::with_seed(3);
        let plain = tabu_solve(&p, &cfg).unwrap();
        let decomposed = decompose_solve(&p, &cfg).unwrap();
        assert_eq!(plain.samples, decomposed.samples);
        assert!(matches!(decomposed.provenance, Provenance::Decompose { .. }));
    }

    #[test]
    fn impact_order_sorts_by_flip_magnitude() {
        let mut p = QuboProblem::new(3);
        p.add_linear(0, 1.0).unwrap();
        p.add_linear(1, -5.0).unwrap();
        p.add_linear(2, 1.0).unwrap();
        assert_eq!(impact_order(&p, &BitVector::zeros(3)), vec![1, 0, 2]);
    }

    #[test]
    fn decomposition_trace_is_monotone() {
        let p = NspInstance::paper_base(4, 20).build_qubo().unwrap();
        let cfg = TabuConfig {
            subproblem_size: 24,
            max_restarts: 4,
            ..TabuConfig::with_seed(2)
        };
        let out = decompose_search(&p, &cfg).unwrap();
        assert!(out.trace.windows(2).all(|w| w[1] <= w[0]));
        assert!((out.best_energy - p.energy(&out.best).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn time_budget_marks_truncation() {
        let p = NspInstance::paper_base(4, 60).build_qubo().unwrap();
        let cfg = TabuConfig {
            time_budget: Some(1e-3),
            stall_iters: Some(1_000_000),
            max_restarts: 64,
            ..TabuConfig::with_seed(0)
        };
        let set = tabu_solve(&p, &cfg).unwrap();
        assert!(set.truncated);
        assert!(!set.is_empty());
    }
}
