//! Nurse scheduling instances and their QUBO objective.
//!
//! Variables are laid out nurse-major, then day, then shift:
//! `index(n, d, t) = (n * D + d) * shifts_per_day + t`. A "slot" is one
//! `(day, shift)` pair in chronological order, `slot = d * shifts_per_day + t`.
//!
//! The objective is the sum of four term groups:
//!
//! * consecutive duty: `a * q(n, k) * q(n, k + 1)` for chronologically adjacent slots,
//! * workforce: `lambda * sum_k (sum_n E(n) q(n, k) - W(k))^2`,
//! * duty target: `gamma * sum_n (sum_k h1(n) h2(k) q(n, k) - F(n))^2`,
//! * day-off requests: `eta * sum_{n, k} g(n, k) q(n, k)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qubo::{BitVector, QuboProblem, SCHEMA_VERSION};

/// Tolerance for the equality constraints (workforce and duty target).
pub const CONSTRAINT_TOL: f64 = 1e-9;

/// Per-slot duty weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SlotWeights {
    /// One weight per slot.
    PerSlot(Vec<f64>),
    /// `h2(d, t) = alpha(d) * h2prime(t)`.
    Factored {
        alpha: Vec<f64>,
        #[serde(rename = "h2prime")]
        h2_prime: Vec<f64>,
    },
}

/// A nurse scheduling instance with every weight function stored explicitly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NspInstance {
    pub version: u32,
    #[serde(rename = "N")]
    pub nurses: usize,
    #[serde(rename = "D")]
    pub days: usize,
    pub shifts_per_day: usize,
    pub lambda: f64,
    pub gamma: f64,
    pub eta: f64,
    pub a: f64,
    /// Effort E(n), one per nurse.
    #[serde(rename = "E")]
    pub effort: Vec<f64>,
    /// Required workforce W, one per slot.
    #[serde(rename = "W")]
    pub workforce: Vec<f64>,
    /// Duty target F(n), one per nurse.
    #[serde(rename = "F")]
    pub duty_target: Vec<f64>,
    /// Load-class multiplier h1(n), one per nurse.
    pub h1: Vec<f64>,
    pub h2: SlotWeights,
    /// Day-off priority g(n, slot); absent means no requests.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<Vec<f64>>>,
}

/// Shift multipliers for daytime, early night and late night.
pub const THREE_SHIFT_WEIGHTS: [f64; 3] = [1.0, 1.5, 2.0];

/// Duty targets that spread `total` duties as evenly as possible:
/// `floor(total / N)`, plus one for the first `total mod N` nurses.
pub fn balanced_duty_targets(nurses: usize, total: usize) -> Vec<f64> {
    (0..nurses)
        .map(|n| (total / nurses + usize::from(n < total % nurses)) as f64)
        .collect()
}

/// Calendar weighting for the three-shift preset: days are counted from a
/// Sunday, and weekend days (Saturday, Sunday) carry weight 2.
pub fn weekend_alpha(days: usize) -> Vec<f64> {
    (0..days)
        .map(|d| if matches!(d % 7, 0 | 6) { 2.0 } else { 1.0 })
        .collect()
}

impl NspInstance {
    /// Two-shift model with the benchmark weights: lambda = 1.3, gamma = 0.3,
    /// a = 7/2, unit effort/workforce/preference and balanced duty targets.
    pub fn paper_base(nurses: usize, days: usize) -> Self {
        let nurses = nurses.max(1);
        let days = days.max(1);
        NspInstance {
            version: SCHEMA_VERSION,
            nurses,
            days,
            shifts_per_day: 1,
            lambda: 1.3,
            gamma: 0.3,
            eta: 0.0,
            a: 3.5,
            effort: vec![1.0; nurses],
            workforce: vec![1.0; days],
            duty_target: balanced_duty_targets(nurses, days),
            h1: vec![1.0; nurses],
            h2: SlotWeights::PerSlot(vec![1.0; days]),
            g: None,
        }
    }

    /// Three-shift model: base weights plus eta = 0.2, weekend factor alpha
    /// and shift factors h2' = (1, 1.5, 2). No day-off requests are set.
    pub fn paper_three_shift(nurses: usize, days: usize) -> Self {
        let mut inst = Self::paper_base(nurses, days);
        let days = inst.days;
        let slots = days * 3;
        inst.shifts_per_day = 3;
        inst.eta = 0.2;
        inst.workforce = vec![1.0; slots];
        inst.duty_target = balanced_duty_targets(inst.nurses, slots);
        inst.h2 = SlotWeights::Factored {
            alpha: weekend_alpha(days),
            h2_prime: THREE_SHIFT_WEIGHTS.to_vec(),
        };
        inst
    }

    pub fn num_slots(&self) -> usize {
        self.days * self.shifts_per_day
    }

    pub fn num_vars(&self) -> usize {
        self.nurses * self.num_slots()
    }

    pub fn validate(&self) -> Result<()> {
        if self.nurses == 0 || self.days == 0 || self.shifts_per_day == 0 {
            return Err(Error::config("N, D and shifts_per_day must be at least 1"));
        }
        for (name, v) in [("lambda", self.lambda), ("gamma", self.gamma), ("eta", self.eta)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::config(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
        if !self.a.is_finite() || self.a <= 0.0 {
            return Err(Error::config(format!("a must be finite and positive, got {}", self.a)));
        }
        let slots = self.num_slots();
        let check_len = |name: &str, len: usize, want: usize| {
            if len != want {
                Err(Error::config(format!("{name} has {len} entries, expected {want}")))
            } else {
                Ok(())
            }
        };
        check_len("E", self.effort.len(), self.nurses)?;
        check_len("W", self.workforce.len(), slots)?;
        check_len("F", self.duty_target.len(), self.nurses)?;
        check_len("h1", self.h1.len(), self.nurses)?;
        match &self.h2 {
            SlotWeights::PerSlot(w) => check_len("h2", w.len(), slots)?,
            SlotWeights::Factored { alpha, h2_prime } => {
                check_len("alpha", alpha.len(), self.days)?;
                check_len("h2prime", h2_prime.len(), self.shifts_per_day)?;
            }
        }
        if let Some(g) = &self.g {
            check_len("g", g.len(), self.nurses)?;
            for row in g {
                check_len("g row", row.len(), slots)?;
            }
        }
        let h2 = self.slot_weights();
        let all_values = self
            .effort
            .iter()
            .chain(&self.workforce)
            .chain(&self.duty_target)
            .chain(&self.h1)
            .chain(&h2)
            .chain(self.g.iter().flatten().flatten());
        for &v in all_values {
            if !v.is_finite() {
                return Err(Error::config(format!("non-finite weight {v}")));
            }
        }
        if self.h1.iter().chain(&h2).any(|&h| h <= 0.0) {
            return Err(Error::config("h1 and h2 must be positive"));
        }
        if self.g.iter().flatten().flatten().any(|&g| g < 0.0) {
            return Err(Error::config("day-off priorities must be non-negative"));
        }
        let min_duty = (self.days / self.nurses) as f64;
        if let Some((n, f)) = self.duty_target.iter().enumerate().find(|(_, &f)| f < min_duty) {
            return Err(Error::config(format!("F({n}) = {f} is below floor(D/N) = {min_duty}")));
        }
        Ok(())
    }

    /// Flattened h2 per slot.
    pub fn slot_weights(&self) -> Vec<f64> {
        match &self.h2 {
            SlotWeights::PerSlot(w) => w.clone(),
            SlotWeights::Factored { alpha, h2_prime } => alpha
                .iter()
                .flat_map(|&a| h2_prime.iter().map(move |&h| a * h))
                .collect(),
        }
    }

    pub fn day_off(&self, nurse: usize, slot: usize) -> f64 {
        self.g.as_ref().map_or(0.0, |g| g[nurse][slot])
    }

    /// Sets `g(nurse, slot)`, allocating the request table on first use.
    pub fn set_day_off(&mut self, nurse: usize, slot: usize, priority: f64) -> Result<()> {
        if nurse >= self.nurses || slot >= self.num_slots() {
            return Err(Error::Index(format!(
                "day-off ({nurse}, {slot}) outside {}x{}",
                self.nurses,
                self.num_slots()
            )));
        }
        let slots = self.num_slots();
        let g = self.g.get_or_insert_with(|| vec![vec![0.0; slots]; self.nurses]);
        g[nurse][slot] = priority;
        Ok(())
    }

    pub fn variable_index(&self, nurse: usize, day: usize, shift: usize) -> Result<usize> {
        if nurse >= self.nurses || day >= self.days || shift >= self.shifts_per_day {
            return Err(Error::Index(format!(
                "(n={nurse}, d={day}, t={shift}) outside N={}, D={}, shifts={}",
                self.nurses, self.days, self.shifts_per_day
            )));
        }
        Ok(self.slot_index(nurse, day * self.shifts_per_day + shift))
    }

    #[inline]
    fn slot_index(&self, nurse: usize, slot: usize) -> usize {
        nurse * self.num_slots() + slot
    }

    /// Expands the objective into a QUBO, constant offset included.
    pub fn build_qubo(&self) -> Result<QuboProblem> {
        self.validate()?;
        let slots = self.num_slots();
        let h2 = self.slot_weights();
        let mut p = QuboProblem::new(self.num_vars());

        for n in 0..self.nurses {
            for k in 1..slots {
                p.add_term(self.slot_index(n, k - 1), self.slot_index(n, k), self.a)?;
            }
        }

        if self.lambda != 0.0 {
            let lam = self.lambda;
            for k in 0..slots {
                let w = self.workforce[k];
                for n in 0..self.nurses {
                    let e = self.effort[n];
                    p.add_linear(self.slot_index(n, k), lam * (e * e - 2.0 * w * e))?;
                    for m in n + 1..self.nurses {
                        p.add_term(
                            self.slot_index(n, k),
                            self.slot_index(m, k),
                            2.0 * lam * e * self.effort[m],
                        )?;
                    }
                }
                p.add_offset(lam * w * w);
            }
        }

        if self.gamma != 0.0 {
            let gam = self.gamma;
            for n in 0..self.nurses {
                let f = self.duty_target[n];
                let weight = |k: usize| self.h1[n] * h2[k];
                for k in 0..slots {
                    let gk = weight(k);
                    p.add_linear(self.slot_index(n, k), gam * (gk * gk - 2.0 * f * gk))?;
                    for l in k + 1..slots {
                        p.add_term(self.slot_index(n, k), self.slot_index(n, l), 2.0 * gam * gk * weight(l))?;
                    }
                }
                p.add_offset(gam * f * f);
            }
        }

        if self.eta != 0.0 {
            if let Some(g) = &self.g {
                for (n, row) in g.iter().enumerate() {
                    for (k, &priority) in row.iter().enumerate() {
                        if priority != 0.0 {
                            p.add_linear(self.slot_index(n, k), self.eta * priority)?;
                        }
                    }
                }
            }
        }
        Ok(p)
    }

    pub fn schedule(&self, bits: BitVector) -> Result<Schedule> {
        Schedule::new(self, bits)
    }

    /// Energy of each term group, computed from the constraint sums rather
    /// than from the expanded QUBO.
    pub fn term_energies(&self, s: &Schedule) -> Result<TermEnergies> {
        let sums = self.sums(s)?;
        Ok(TermEnergies {
            consecutive: self.a * sums.consecutive_pairs as f64,
            workforce: self.lambda * sums.slot_excess.iter().map(|x| x * x).sum::<f64>(),
            duty: self.gamma * sums.nurse_excess.iter().map(|x| x * x).sum::<f64>(),
            day_off: self.eta * sums.day_off,
        })
    }

    fn sums(&self, s: &Schedule) -> Result<ConstraintSums> {
        s.check_shape(self)?;
        let slots = self.num_slots();
        let h2 = self.slot_weights();
        let q = |n: usize, k: usize| s.bits.get(self.slot_index(n, k)) as f64;
        let mut sums = ConstraintSums::default();
        for n in 0..self.nurses {
            for k in 1..slots {
                if q(n, k - 1) == 1.0 && q(n, k) == 1.0 {
                    sums.consecutive_pairs += 1;
                    sums.consecutive_nurses.push(n);
                }
            }
        }
        sums.consecutive_nurses.dedup();
        sums.slot_excess = (0..slots)
            .map(|k| (0..self.nurses).map(|n| self.effort[n] * q(n, k)).sum::<f64>() - self.workforce[k])
            .collect();
        sums.nurse_excess = (0..self.nurses)
            .map(|n| (0..slots).map(|k| self.h1[n] * h2[k] * q(n, k)).sum::<f64>() - self.duty_target[n])
            .collect();
        sums.day_off = (0..self.nurses)
            .flat_map(|n| (0..slots).map(move |k| (n, k)))
            .map(|(n, k)| self.day_off(n, k) * q(n, k))
            .sum();
        Ok(sums)
    }

    pub fn check_constraints(&self, s: &Schedule) -> Result<ConstraintReport> {
        let sums = self.sums(s)?;
        let violated_slots: Vec<usize> = sums
            .slot_excess
            .iter()
            .enumerate()
            .filter(|(_, x)| x.abs() > CONSTRAINT_TOL)
            .map(|(k, _)| k)
            .collect();
        let violated_nurses: Vec<usize> = sums
            .nurse_excess
            .iter()
            .enumerate()
            .filter(|(_, x)| x.abs() > CONSTRAINT_TOL)
            .map(|(n, _)| n)
            .collect();
        Ok(ConstraintReport {
            no_consecutive_duty: sums.consecutive_nurses.is_empty(),
            workforce_exact: violated_slots.is_empty(),
            duty_target_met: violated_nurses.is_empty(),
            dayoff_penalty: self.eta * sums.day_off,
            consecutive_nurses: sums.consecutive_nurses,
            violated_slots,
            violated_nurses,
        })
    }

    /// True when the consecutive-duty, workforce and duty-target groups all
    /// vanish. Day-off requests are soft and do not count.
    pub fn is_fully_satisfying(&self, s: &Schedule) -> Result<bool> {
        Ok(self.check_constraints(s)?.is_satisfying())
    }

    /// Whether every day-off request with positive priority is honored.
    pub fn honors_day_off(&self, s: &Schedule) -> Result<bool> {
        s.check_shape(self)?;
        let Some(g) = &self.g else { return Ok(true) };
        Ok(g.iter().enumerate().all(|(n, row)| {
            row.iter()
                .enumerate()
                .all(|(k, &p)| p <= 0.0 || s.bits.get(self.slot_index(n, k)) == 0)
        }))
    }
}

#[derive(Default)]
struct ConstraintSums {
    consecutive_pairs: usize,
    consecutive_nurses: Vec<usize>,
    slot_excess: Vec<f64>,
    nurse_excess: Vec<f64>,
    day_off: f64,
}

/// Contribution of each term group to the objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TermEnergies {
    pub consecutive: f64,
    pub workforce: f64,
    pub duty: f64,
    pub day_off: f64,
}

impl TermEnergies {
    pub fn total(&self) -> f64 {
        self.consecutive + self.workforce + self.duty + self.day_off
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintReport {
    pub no_consecutive_duty: bool,
    pub workforce_exact: bool,
    pub duty_target_met: bool,
    pub dayoff_penalty: f64,
    pub consecutive_nurses: Vec<usize>,
    pub violated_slots: Vec<usize>,
    pub violated_nurses: Vec<usize>,
}

impl ConstraintReport {
    pub fn is_satisfying(&self) -> bool {
        self.no_consecutive_duty && self.workforce_exact && self.duty_target_met
    }
}

/// A bit assignment shaped for one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    nurses: usize,
    slots: usize,
    bits: BitVector,
}

impl Schedule {
    pub fn new(inst: &NspInstance, bits: BitVector) -> Result<Self> {
        if bits.len() != inst.num_vars() {
            return Err(Error::dimension(inst.num_vars(), bits.len()));
        }
        Ok(Schedule {
            nurses: inst.nurses,
            slots: inst.num_slots(),
            bits,
        })
    }

    fn check_shape(&self, inst: &NspInstance) -> Result<()> {
        if self.nurses != inst.nurses || self.slots != inst.num_slots() {
            return Err(Error::dimension(inst.num_vars(), self.bits.len()));
        }
        Ok(())
    }

    pub fn bits(&self) -> &BitVector {
        &self.bits
    }

    pub fn decode(&self) -> Roster {
        let cells = (0..self.nurses)
            .map(|n| {
                (0..self.slots)
                    .map(|k| self.bits.get(n * self.slots + k) == 1)
                    .collect()
            })
            .collect();
        Roster { cells }
    }
}

/// Nurse-by-slot duty grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Roster {
    cells: Vec<Vec<bool>>,
}

impl Roster {
    pub fn on_duty(&self, nurse: usize, slot: usize) -> bool {
        self.cells[nurse][slot]
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.cells.iter().flatten().all(|&c| !c)
    }

    pub fn encode(&self, inst: &NspInstance) -> Result<Schedule> {
        let flat: Vec<bool> = self.cells.iter().flatten().copied().collect();
        Schedule::new(inst, BitVector::from_bools(&flat))
    }

    /// CSV grid: one row per nurse, one 0/1 column per slot.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let slots = self.cells.first().map_or(0, Vec::len);
        let mut header = vec!["nurse".to_string()];
        header.extend((0..slots).map(|k| format!("slot{k}")));
        w.write_record(&header)?;
        for (n, row) in self.cells.iter().enumerate() {
            let mut record = vec![n.to_string()];
            record.extend(row.iter().map(|&c| if c { "1" } else { "0" }.to_string()));
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn index_layout() {
        let base = NspInstance::paper_base(3, 4);
        assert_eq!(base.variable_index(0, 0, 0).unwrap(), 0);
        assert_eq!(base.variable_index(1, 2, 0).unwrap(), 6);
        assert!(matches!(base.variable_index(3, 0, 0), Err(Error::Index(_))));
        assert!(base.variable_index(0, 0, 1).is_err());
        let three = NspInstance::paper_three_shift(3, 2);
        assert_eq!(three.variable_index(2, 1, 2).unwrap(), 17);
    }

    #[test]
    fn index_is_bijective() {
        let inst = NspInstance::paper_three_shift(3, 4);
        let mut seen = vec![false; inst.num_vars()];
        for n in 0..3 {
            for d in 0..4 {
                for t in 0..3 {
                    let i = inst.variable_index(n, d, t).unwrap();
                    assert!(!seen[i]);
                    seen[i] = true;
                }
            }
        }
        assert!(seen.into_iter().all(|s| s));
    }

    #[test]
    fn defaults_balance_duty() {
        assert_eq!(balanced_duty_targets(3, 5), vec![2.0, 2.0, 1.0]);
        assert_eq!(balanced_duty_targets(4, 160), vec![40.0; 4]);
        let inst = NspInstance::paper_base(3, 4);
        assert_eq!(inst.duty_target, vec![2.0, 1.0, 1.0]);
        assert_eq!(weekend_alpha(8), vec![2.0, 1.0, 1.0, 1.0, 1.0, 1.0, 2.0, 2.0]);
    }

    #[test]
    fn validation_rejects_bad_instances() {
        let mut inst = NspInstance::paper_base(2, 4);
        inst.a = 0.0;
        assert!(inst.validate().is_err());
        let mut inst = NspInstance::paper_base(2, 4);
        inst.duty_target = vec![1.0, 2.0];
        assert!(inst.validate().is_err(), "F below floor(D/N)");
        let mut inst = NspInstance::paper_base(2, 4);
        inst.workforce.pop();
        assert!(inst.validate().is_err());
        let mut inst = NspInstance::paper_base(2, 4);
        inst.lambda = -1.0;
        assert!(inst.validate().is_err());
        assert!(NspInstance::paper_three_shift(3, 2).validate().is_ok());
    }

    #[test]
    fn two_day_single_nurse_expansion() {
        // Hand expansion of a q0 q1 + lambda((q0-1)^2 + (q1-1)^2) + gamma(q0+q1-2)^2.
        let inst = NspInstance::paper_base(1, 2);
        let p = inst.build_qubo().unwrap();
        assert!(close(p.coefficient(0, 1), 4.1));
        assert!(close(p.coefficient(0, 0), -2.2));
        assert!(close(p.coefficient(1, 1), -2.2));
        assert!(close(p.offset(), 3.8));
    }

    #[test]
    fn zero_penalty_weights_leave_only_couplings() {
        let mut inst = NspInstance::paper_base(3, 4);
        inst.lambda = 0.0;
        inst.gamma = 0.0;
        let p = inst.build_qubo().unwrap();
        assert_eq!(p.offset(), 0.0);
        for (i, j, c) in p.terms() {
            assert_eq!(j, i + 1, "only consecutive-day pairs remain");
            assert_eq!(i / 4, j / 4, "same nurse");
            assert_eq!(c, 3.5);
        }
        assert_eq!(p.num_terms(), 3 * 3);
    }

    #[test]
    fn zero_schedule_energy_is_offset() {
        let inst = NspInstance::paper_base(3, 4);
        let p = inst.build_qubo().unwrap();
        let expected = 1.3 * 4.0 + 0.3 * (4.0 + 1.0 + 1.0);
        assert!(close(p.energy(&BitVector::zeros(12)).unwrap(), expected));
        assert!(close(p.offset(), expected));
    }

    #[test]
    fn report_for_empty_schedule() {
        let inst = NspInstance::paper_base(3, 4);
        let s = inst.schedule(BitVector::zeros(12)).unwrap();
        let r = inst.check_constraints(&s).unwrap();
        assert!(!r.workforce_exact);
        assert_eq!(r.violated_slots, vec![0, 1, 2, 3]);
        assert!(r.no_consecutive_duty);
        assert!(!r.is_satisfying());
    }

    #[test]
    fn consecutive_duty_detected() {
        let inst = NspInstance::paper_base(1, 2);
        let s = inst.schedule("11".parse().unwrap()).unwrap();
        let r = inst.check_constraints(&s).unwrap();
        assert!(!r.no_consecutive_duty);
        assert_eq!(r.consecutive_nurses, vec![0]);
    }

    #[test]
    fn satisfying_examples() {
        let mut one = NspInstance::paper_base(1, 1);
        one.duty_target = vec![1.0];
        let s = one.schedule("1".parse().unwrap()).unwrap();
        assert!(one.is_fully_satisfying(&s).unwrap());
        assert!(close(one.build_qubo().unwrap().energy(s.bits()).unwrap(), 0.0));

        let inst = NspInstance::paper_base(1, 2);
        for v in 0..4 {
            let s = inst.schedule(BitVector::from_index(v, 2)).unwrap();
            assert!(!inst.is_fully_satisfying(&s).unwrap());
        }

        let inst = NspInstance::paper_base(2, 2);
        assert_eq!(inst.duty_target, vec![1.0, 1.0]);
        let s = inst.schedule("1001".parse().unwrap()).unwrap();
        assert!(inst.is_fully_satisfying(&s).unwrap());
        let satisfying = (0..16)
            .filter(|&v| {
                inst.is_fully_satisfying(&inst.schedule(BitVector::from_index(v, 4)).unwrap())
                    .unwrap()
            })
            .count();
        assert_eq!(satisfying, 2);
    }

    #[test]
    fn schedule_shape_is_checked() {
        let inst = NspInstance::paper_base(2, 3);
        assert!(matches!(
            inst.schedule(BitVector::zeros(5)),
            Err(Error::Dimension { .. })
        ));
        let other = NspInstance::paper_base(3, 2);
        let s = other.schedule(BitVector::zeros(6)).unwrap();
        assert!(matches!(inst.check_constraints(&s), Err(Error::Dimension { .. })));
    }

    #[test]
    fn decode_examples() {
        let inst = NspInstance::paper_base(3, 4);
        assert!(inst.schedule(BitVector::zeros(12)).unwrap().decode().is_empty());
        let mut bits = vec![0u8; 12];
        bits[inst.variable_index(1, 2, 0).unwrap()] = 1;
        let roster = inst.schedule(BitVector::new(bits).unwrap()).unwrap().decode();
        for n in 0..3 {
            for d in 0..4 {
                assert_eq!(roster.on_duty(n, d), (n, d) == (1, 2));
            }
        }
    }

    #[test]
    fn roster_csv_grid() {
        let inst = NspInstance::paper_base(2, 3);
        let roster = inst.schedule("101010".parse().unwrap()).unwrap().decode();
        let mut out = Vec::new();
        roster.write_csv(&mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "nurse,slot0,slot1,slot2\n0,1,0,1\n1,0,1,0\n"
        );
    }

    #[test]
    fn three_shift_chains_across_days() {
        let inst = NspInstance::paper_three_shift(1, 2);
        let p = inst.build_qubo().unwrap();
        let last_of_day0 = inst.variable_index(0, 0, 2).unwrap();
        let first_of_day1 = inst.variable_index(0, 1, 0).unwrap();
        let s = inst
            .schedule(BitVector::from_index((1 << last_of_day0) | (1 << first_of_day1), 6))
            .unwrap();
        assert!(!inst.check_constraints(&s).unwrap().no_consecutive_duty);
        assert!(p.coefficient(last_of_day0, first_of_day1) >= 3.5);
    }

    #[test]
    fn instance_json_schema() {
        let mut inst = NspInstance::paper_three_shift(3, 2);
        inst.set_day_off(0, 3, 1.0).unwrap();
        let json = serde_json::to_value(&inst).unwrap();
        assert_eq!(json["N"], 3);
        assert_eq!(json["D"], 2);
        assert_eq!(json["eta"], 0.2);
        assert_eq!(json["h2"]["alpha"], serde_json::json!([2.0, 1.0]));
        assert_eq!(json["h2"]["h2prime"], serde_json::json!([1.0, 1.5, 2.0]));
        assert_eq!(json["g"][0][3], 1.0);
        let back: NspInstance = serde_json::from_value(json).unwrap();
        assert_eq!(back, inst);

        let base = serde_json::to_value(NspInstance::paper_base(3, 4)).unwrap();
        assert_eq!(base["h2"], serde_json::json!([1.0, 1.0, 1.0, 1.0]));
        assert!(base.get("g").is_none());
    }
}
