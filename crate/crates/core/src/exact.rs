//! Exhaustive ground-state enumeration.
//!
//! The search space is split on the highest-index variables; each block is
//! walked in Gray-code order so that consecutive assignments differ by one
//! flip and the energy is updated from local fields in O(degree).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qubo::{BitVector, QuboProblem};

/// Default cap on the number of enumerated variables.
pub const DEFAULT_MAX_VARS: usize = 28;

/// Two energies within this distance are treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;

const PREFIX_BITS: usize = 6;
const RESYNC_EVERY: u64 = 1 << 12;

/// The minimum energy and every assignment attaining it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundStateSet {
    pub energy: f64,
    /// Ascending bit-vector order.
    pub states: Vec<BitVector>,
    pub search_space_size: u64,
}

impl GroundStateSet {
    pub fn degeneracy(&self) -> usize {
        self.states.len()
    }

    pub fn contains(&self, state: &BitVector) -> bool {
        self.states.binary_search(state).is_ok()
    }
}

pub fn enumerate_ground_states(p: &QuboProblem, max_vars: usize) -> Result<GroundStateSet> {
    let found = search(p, max_vars, None)?;
    Ok(found.expect("unrestricted search always has a feasible assignment"))
}

/// Minimum over the assignments accepted by `predicate`; `None` when no
/// assignment is accepted.
pub fn min_energy_under<F>(p: &QuboProblem, max_vars: usize, predicate: F) -> Result<Option<GroundStateSet>>
where
    F: Fn(&[u8]) -> bool + Sync,
{
    search(p, max_vars, Some(&predicate))
}

type Predicate<'a> = &'a (dyn Fn(&[u8]) -> bool + Sync);

struct Block {
    min: f64,
    candidates: Vec<Vec<u8>>,
}

fn search(p: &QuboProblem, max_vars: usize, predicate: Option<Predicate<'_>>) -> Result<Option<GroundStateSet>> {
    let n = p.num_vars();
    if n > max_vars || n >= 64 {
        return Err(Error::Capacity {
            num_vars: n,
            cap: max_vars.min(63),
        });
    }
    let prefix_bits = n.min(PREFIX_BITS);
    let low_bits = n - prefix_bits;
    let compiled = p.compile();

    let blocks: Vec<Block> = (0..1u64 << prefix_bits)
        .into_par_iter()
        .map(|prefix| {
            let mut x = vec![0u8; n];
            for b in 0..prefix_bits {
                x[low_bits + b] = ((prefix >> b) & 1) as u8;
            }
            let mut fields = compiled.local_fields(&x);
            let mut energy = compiled.energy(&x);
            let mut block = Block {
                min: f64::INFINITY,
                candidates: Vec::new(),
            };
            let consider = |x: &[u8], energy: f64, block: &mut Block| {
                if energy > block.min + DEGENERACY_TOL {
                    return;
                }
                if predicate.is_some_and(|pred| !pred(x)) {
                    return;
                }
                if energy < block.min - DEGENERACY_TOL {
                    block.candidates.clear();
                }
                block.min = block.min.min(energy);
                block.candidates.push(x.to_vec());
            };
            consider(&x, energy, &mut block);
            for step in 1..1u64 << low_bits {
                let i = step.trailing_zeros() as usize;
                energy += compiled.flip_delta(&x, &fields, i);
                compiled.apply_flip(&mut x, &mut fields, i);
                if step % RESYNC_EVERY == 0 {
                    energy = compiled.energy(&x);
                }
                consider(&x, energy, &mut block);
            }
            block
        })
        .collect();

    // Re-evaluate every candidate against the sparse form so the reported
    // energies do not carry incremental round-off.
    let mut scored: Vec<(f64, Vec<u8>)> = blocks
        .into_iter()
        .flat_map(|b| b.candidates)
        .map(|x| (p.energy_unchecked(&x), x))
        .collect();
    let Some(min) = scored.iter().map(|(e, _)| *e).min_by(f64::total_cmp) else {
        return Ok(None);
    };
    scored.retain(|(e, _)| *e <= min + DEGENERACY_TOL);
    let mut states: Vec<BitVector> = scored
        .into_iter()
        .map(|(_, x)| BitVector::new(x).expect("binary"))
        .collect();
    states.sort();
    states.dedup();
    Ok(Some(GroundStateSet {
        energy: min,
        states,
        search_space_size: 1u64 << n,
    }))
}
