//! Uniform entry point over the solvers, shared by the sweep driver and the CLI.

use crate::anneal::{forward_anneal, refine, reverse_anneal, AnnealSchedule, SelectionPolicy};
use crate::error::Result;
use crate::exact::enumerate_ground_states;
use crate::qubo::{BitVector, QuboProblem};
use crate::sampleset::{fingerprint, SampleSet};
use crate::tabu::{decompose_solve, tabu_solve, TabuConfig};

/// Where reverse-anneal reads start.
#[derive(Debug, Clone)]
pub enum ReverseStart {
    State(BitVector),
    Candidates {
        set: SampleSet,
        policy: SelectionPolicy,
    },
    /// Run a forward anneal first and refine its output.
    ForwardFirst {
        forward: AnnealSchedule,
        policy: SelectionPolicy,
    },
}

#[derive(Debug, Clone)]
pub enum Engine {
    Exact {
        max_vars: usize,
    },
    Forward(AnnealSchedule),
    Reverse {
        schedule: AnnealSchedule,
        start: ReverseStart,
    },
    Tabu(TabuConfig),
    Decompose(TabuConfig),
}

impl Engine {
    pub fn name(&self) -> &'static str {
        match self {
            Engine::Exact { .. } => "exact",
            Engine::Forward(_) => "forward",
            Engine::Reverse { .. } => "reverse",
            Engine::Tabu(_) => "tabu",
            Engine::Decompose(_) => "decompose",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Engine::Exact { .. } => None,
            Engine::Forward(s) | Engine::Reverse { schedule: s, .. } => Some(s.seed),
            Engine::Tabu(c) | Engine::Decompose(c) => Some(c.seed),
        }
    }

    /// Runs the engine on `p`. `num_reads` is ignored by the exact and tabu
    /// engines, whose read counts follow from the search itself.
    pub fn run(&self, p: &QuboProblem, num_reads: usize) -> Result<SampleSet> {
        match self {
            Engine::Exact { max_vars } => {
                let ground = enumerate_ground_states(p, *max_vars)?;
                Ok(SampleSet::from_ground_states(&ground, *max_vars, fingerprint(p)))
            }
            Engine::Forward(schedule) => forward_anneal(&p.to_ising(), schedule, num_reads),
            Engine::Reverse { schedule, start } => {
                let ising = p.to_ising();
                match start {
                    ReverseStart::State(state) => reverse_anneal(&ising, Some(state), schedule, num_reads),
                    ReverseStart::Candidates { set, policy } => refine(&ising, set, schedule, num_reads, *policy),
                    ReverseStart::ForwardFirst { forward, policy } => {
                        let first = forward_anneal(&ising, forward, num_reads)?;
                        refine(&ising, &first, schedule, num_reads, *policy)
                    }
                }
            }
            Engine::Tabu(cfg) => tabu_solve(p, cfg),
            Engine::Decompose(cfg) => decompose_solve(p, cfg),
        }
    }
}
