#![allow(dead_code)]

use nsp_core::{BitVector, NspInstance, QuboProblem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random QUBO with about `density` of the pairs populated.
pub fn random_qubo(rng: &mut ChaCha8Rng, n: usize, density: f64) -> QuboProblem {
    let mut p = QuboProblem::new(n);
    for i in 0..n {
        p.add_linear(i, rng.gen_range(-2.0..2.0)).unwrap();
        for j in i + 1..n {
            if rng.gen_bool(density) {
                p.add_term(i, j, rng.gen_range(-2.0..2.0)).unwrap();
            }
        }
    }
    p.add_offset(rng.gen_range(-1.0..1.0));
    p
}

pub fn random_bits(rng: &mut ChaCha8Rng, n: usize) -> BitVector {
    BitVector::new((0..n).map(|_| rng.gen_range(0..=1)).collect()).unwrap()
}

pub fn all_states(n: usize) -> impl Iterator<Item = BitVector> {
    (0..1u64 << n).map(move |v| BitVector::from_index(v, n))
}

/// Day-off-free instances with N*D <= 16: every base instance plus randomly
/// reweighted ones. Weights are dyadic so penalty sums are exact.
pub fn zero_energy_suite(seed: u64) -> Vec<NspInstance> {
    let mut out = Vec::new();
    for n in 1..=4 {
        for d in 1..=16 / n {
            out.push(NspInstance::paper_base(n, d));
        }
    }
    let mut rng = rng(seed);
    let levels = [0.5, 1.0, 1.5, 2.0];
    for _ in 0..24 {
        let n = rng.gen_range(1..=4);
        let shifts = if rng.gen_bool(0.25) { 2 } else { 1 };
        let d = rng.gen_range(1..=16 / (n * shifts)).max(1);
        let slots = d * shifts;
        let mut inst = NspInstance::paper_base(n, d);
        inst.shifts_per_day = shifts;
        inst.lambda = levels[rng.gen_range(0..4)];
        inst.gamma = levels[rng.gen_range(0..4)];
        inst.a = levels[rng.gen_range(0..4)] * 2.0;
        inst.effort = (0..n).map(|_| if rng.gen_bool(0.8) { 1.0 } else { 2.0 }).collect();
        inst.workforce = (0..slots).map(|_| rng.gen_range(0..=2) as f64).collect();
        inst.h1 = (0..n).map(|_| levels[rng.gen_range(1..4)]).collect();
        inst.h2 = nsp_core::SlotWeights::PerSlot((0..slots).map(|_| levels[rng.gen_range(1..4)]).collect());
        inst.duty_target = (0..n).map(|_| ((d / n) + rng.gen_range(0..=2)) as f64).collect();
        out.push(inst);
    }
    out
}

/// The three-nurse, two-day, three-shift instance with the given day-off
/// requests `(nurse, slot, priority)`, 0-based.
pub fn day_off_instance(requests: &[(usize, usize, f64)]) -> NspInstance {
    let mut inst = NspInstance::paper_three_shift(3, 2);
    for &(n, k, g) in requests {
        inst.set_day_off(n, k, g).unwrap();
    }
    inst
}

/// Requests that all end up honored.
pub const REQUESTS_HONORED: [(usize, usize, f64); 3] = [(0, 3, 1.0), (1, 5, 1.5), (2, 4, 2.0)];
/// Requests that cannot all be honored at the minimum.
pub const REQUESTS_CONFLICTING: [(usize, usize, f64); 3] = [(0, 5, 1.0), (1, 5, 1.5), (2, 3, 2.0)];
