//! Nurse scheduling as a QUBO / Ising minimization problem.
//!
//! The crate builds the penalty objective for a nurse rostering instance,
//! converts it to Ising form, and solves it with exact enumeration, a
//! Metropolis annealing sampler (forward and reverse schedules) or tabu
//! search with decomposition. [`stats`] turns sample sets into satisfaction
//! frequencies and Hamming-distance statistics.

pub mod anneal;
pub mod cli;
pub mod engine;
pub mod error;
pub mod exact;
pub mod nsp;
pub mod qubo;
pub mod sampleset;
pub mod stats;
pub mod tabu;

pub use anneal::{forward_anneal, refine, reverse_anneal, AnnealMode, AnnealSchedule, SelectionPolicy};
pub use engine::{Engine, ReverseStart};
pub use error::{Error, Result};
pub use exact::{enumerate_ground_states, min_energy_under, GroundStateSet, DEFAULT_MAX_VARS};
pub use nsp::{ConstraintReport, NspInstance, Roster, Schedule, SlotWeights};
pub use qubo::{hamming_distance, BitVector, IsingProblem, QuboProblem};
pub use sampleset::{Provenance, Sample, SampleSet};
pub use stats::{evaluate, hamming_stats, satisfaction_frequency, EvaluationReport, Reference};
pub use tabu::{decompose_solve, tabu_solve, TabuConfig};
