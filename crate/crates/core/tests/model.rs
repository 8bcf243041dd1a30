mod common;

use common::*;
use nsp_core::nsp::CONSTRAINT_TOL;
use nsp_core::{enumerate_ground_states, min_energy_under, BitVector, NspInstance, SlotWeights, DEFAULT_MAX_VARS};
use proptest::prelude::*;

fn instance_strategy() -> impl Strategy<Value = NspInstance> {
    (
        1usize..=4,
        1usize..=6,
        1usize..=3,
        0.0f64..2.0,
        0.0f64..2.0,
        0.1f64..5.0,
        0.0f64..1.0,
        any::<u64>(),
    )
        .prop_map(|(n, d, shifts, lambda, gamma, a, eta, seed)| {
            use rand::Rng;
            let mut rng = rng(seed);
            let slots = d * shifts;
            let mut inst = NspInstance::paper_base(n, d);
            inst.shifts_per_day = shifts;
            inst.lambda = lambda;
            inst.gamma = gamma;
            inst.eta = eta;
            inst.a = a;
            inst.effort = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
            inst.workforce = (0..slots).map(|_| rng.gen_range(0.0..3.0)).collect();
            inst.duty_target = (0..n).map(|_| (d / n) as f64 + rng.gen_range(0.0..3.0)).collect();
            inst.h1 = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
            inst.h2 = if shifts == 3 && rng.gen_bool(0.5) {
                SlotWeights::Factored {
                    alpha: (0..d).map(|_| rng.gen_range(0.5..2.0)).collect(),
                    h2_prime: vec![1.0, 1.5, 2.0],
                }
            } else {
                SlotWeights::PerSlot((0..slots).map(|_| rng.gen_range(0.5..2.0)).collect())
            };
            inst.g = Some(
                (0..n)
                    .map(|_| {
                        (0..slots)
                            .map(|_| {
                                if rng.gen_bool(0.3) {
                                    rng.gen_range(0.0..2.0)
                                } else {
                                    0.0
                                }
                            })
                            .collect()
                    })
                    .collect(),
            );
            inst
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn energy_splits_into_term_groups(inst in instance_strategy(), seed in any::<u64>()) {
        let q = inst.build_qubo().unwrap();
        let bits = random_bits(&mut rng(seed), inst.num_vars());
        let parts = inst.term_energies(&inst.schedule(bits.clone()).unwrap()).unwrap();
        let e = q.energy(&bits).unwrap();
        prop_assert!((e - parts.total()).abs() < 1e-9, "{e} vs {parts:?}");
        prop_assert!(parts.consecutive >= 0.0 && parts.workforce >= 0.0 && parts.duty >= 0.0 && parts.day_off >= 0.0);
    }

    #[test]
    fn roster_round_trips(inst in instance_strategy(), seed in any::<u64>()) {
        let bits = random_bits(&mut rng(seed), inst.num_vars());
        let roster = inst.schedule(bits.clone()).unwrap().decode();
        let back = roster.encode(&inst).unwrap();
        prop_assert_eq!(back.bits(), &bits);
    }
}

#[test]
fn single_flip_from_satisfying_schedule_costs_energy() {
    let mut checked = 0;
    for inst in zero_energy_suite(7).into_iter().filter(|i| i.num_vars() <= 14) {
        let q = inst.build_qubo().unwrap();
        let n = inst.num_vars();
        for bits in all_states(n) {
            if !inst.is_fully_satisfying(&inst.schedule(bits.clone()).unwrap()).unwrap() {
                continue;
            }
            let e0 = q.energy(&bits).unwrap();
            let mut raw = bits.clone().into_inner();
            for i in 0..n {
                raw[i] ^= 1;
                let e1 = q.energy(&BitVector::new(raw.clone()).unwrap()).unwrap();
                assert!(e1 > e0 + CONSTRAINT_TOL, "flip {i} of {bits} did not raise the energy");
                raw[i] ^= 1;
            }
            checked += 1;
        }
    }
    assert!(checked >= 30, "only {checked} satisfying schedules in the suite");
}

#[test]
fn three_shift_with_flat_weights_is_base_model_over_slots() {
    for (n, d) in [(2, 2), (3, 2), (2, 4), (4, 3)] {
        let mut three = NspInstance::paper_three_shift(n, d);
        three.eta = 0.0;
        three.h2 = SlotWeights::Factored {
            alpha: vec![1.0; d],
            h2_prime: vec![1.0; 3],
        };
        let base = NspInstance::paper_base(n, 3 * d);
        assert_eq!(three.duty_target, base.duty_target);
        let a = three.build_qubo().unwrap();
        let b = base.build_qubo().unwrap();
        assert_eq!(a.num_vars(), b.num_vars());
        assert!((a.offset() - b.offset()).abs() < 1e-12);
        let ta: Vec<_> = a.terms().collect();
        let tb: Vec<_> = b.terms().collect();
        assert_eq!(ta.len(), tb.len());
        for ((i, j, x), (k, l, y)) in ta.into_iter().zip(tb) {
            assert_eq!((i, j), (k, l));
            assert!((x - y).abs() < 1e-12);
        }
    }
}

#[test]
fn honored_requests_at_ground_state() {
    let inst = day_off_instance(&REQUESTS_HONORED);
    let g = enumerate_ground_states(&inst.build_qubo().unwrap(), DEFAULT_MAX_VARS).unwrap();
    assert_eq!(g.search_space_size, 1 << 18);
    assert!((g.energy - 2.575).abs() < 1e-9, "{}", g.energy);
    for s in &g.states {
        let sched = inst.schedule(s.clone()).unwrap();
        assert!(inst.honors_day_off(&sched).unwrap());
        assert!(inst.check_constraints(&sched).unwrap().no_consecutive_duty);
    }
}

#[test]
fn conflicting_requests_leave_one_unhonored() {
    let inst = day_off_instance(&REQUESTS_CONFLICTING);
    let q = inst.build_qubo().unwrap();
    let g = enumerate_ground_states(&q, DEFAULT_MAX_VARS).unwrap();
    assert!((g.energy - 2.775).abs() < 1e-9, "{}", g.energy);
    for s in &g.states {
        assert!(!inst.honors_day_off(&inst.schedule(s.clone()).unwrap()).unwrap());
    }
    // Honoring every request is possible, just not at the minimum.
    let honored = min_energy_under(&q, DEFAULT_MAX_VARS, |x| {
        REQUESTS_CONFLICTING.iter().all(|&(n, k, _)| x[n * 6 + k] == 0)
    })
    .unwrap()
    .unwrap();
    assert!(honored.energy > g.energy);
}

#[test]
fn zero_lambda_drops_workforce_couplings() {
    let mut inst = NspInstance::paper_base(3, 4);
    inst.lambda = 0.0;
    inst.gamma = 0.0;
    let q = inst.build_qubo().unwrap();
    // Only the chain couplings remain, all within one nurse's row.
    assert!(q.terms().all(|(i, j, _)| i != j && i / 4 == j / 4 && j == i + 1));
}
