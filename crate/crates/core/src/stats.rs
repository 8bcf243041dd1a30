//! Evaluation of sample sets: satisfaction frequency, Hamming distance to
//! the nearest reference ground state, and energy summaries, plus the
//! (N, D) sweep that tabulates them.

use serde::{Deserialize, Serialize};

use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::exact::{enumerate_ground_states, GroundStateSet, DEGENERACY_TOL};
use crate::nsp::NspInstance;
use crate::qubo::{hamming_distance, BitVector};
use crate::sampleset::SampleSet;

fn total_count(samples: &SampleSet) -> Result<usize> {
    let total: usize = samples.samples.iter().map(|s| s.count).sum();
    if total == 0 {
        return Err(Error::UndefinedStatistic("sample set is empty".into()));
    }
    Ok(total)
}

/// Multiplicity-weighted fraction of reads that satisfy every hard constraint.
pub fn satisfaction_frequency(inst: &NspInstance, samples: &SampleSet) -> Result<f64> {
    let total = total_count(samples)?;
    let mut hits = 0;
    for s in &samples.samples {
        if inst.is_fully_satisfying(&inst.schedule(s.bits.clone())?)? {
            hits += s.count;
        }
    }
    Ok(hits as f64 / total as f64)
}

/// Distance from `x` to the nearest reference state.
pub fn nearest_distance(x: &BitVector, reference: &[BitVector]) -> Result<usize> {
    let mut best = usize::MAX;
    for r in reference {
        best = best.min(hamming_distance(x, r)?);
    }
    Ok(best)
}

/// Multiplicity-weighted mean and population standard deviation of the
/// nearest-reference Hamming distance.
pub fn hamming_stats(samples: &SampleSet, reference: &[BitVector]) -> Result<(f64, f64)> {
    let total = total_count(samples)? as f64;
    if reference.is_empty() {
        return Err(Error::UndefinedStatistic("reference set is empty".into()));
    }
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for s in &samples.samples {
        let d = nearest_distance(&s.bits, reference)? as f64;
        sum += d * s.count as f64;
        sum_sq += d * d * s.count as f64;
    }
    let mean = sum / total;
    let var = (sum_sq / total - mean * mean).max(0.0);
    Ok((mean, var.sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReferenceKind {
    /// Complete ground set from enumeration.
    Exact,
    /// Lowest-energy states seen in the samples; not guaranteed optimal.
    BestFound,
    /// Supplied by the caller.
    Supplied,
}

impl ReferenceKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ReferenceKind::Exact => "exact",
            ReferenceKind::BestFound => "best-found",
            ReferenceKind::Supplied => "supplied",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reference {
    pub kind: ReferenceKind,
    pub energy: f64,
    pub states: Vec<BitVector>,
}

impl Reference {
    pub fn exact(g: &GroundStateSet) -> Self {
        Reference {
            kind: ReferenceKind::Exact,
            energy: g.energy,
            states: g.states.clone(),
        }
    }

    pub fn best_found(samples: &SampleSet) -> Result<Self> {
        let energy = samples
            .best_energy()
            .ok_or_else(|| Error::UndefinedStatistic("no samples to take a reference from".into()))?;
        Ok(Reference {
            kind: ReferenceKind::BestFound,
            energy,
            states: samples.best_states(DEGENERACY_TOL),
        })
    }

    /// Exact when the instance fits under `max_vars`, otherwise the best
    /// states in `samples`.
    pub fn for_instance(inst: &NspInstance, samples: &SampleSet, max_vars: usize) -> Result<Self> {
        if inst.num_vars() <= max_vars {
            Ok(Reference::exact(&enumerate_ground_states(
                &inst.build_qubo()?,
                max_vars,
            )?))
        } else {
            Reference::best_found(samples)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub satisfaction_frequency: f64,
    pub mean_hamming: f64,
    pub std_hamming: f64,
    pub mean_energy: f64,
    pub best_energy: f64,
    pub reference_kind: ReferenceKind,
    pub reference_energy: f64,
    pub sample_count: usize,
}

pub fn evaluate(inst: &NspInstance, samples: &SampleSet, reference: &Reference) -> Result<EvaluationReport> {
    let sample_count = total_count(samples)?;
    let (mean_hamming, std_hamming) = hamming_stats(samples, &reference.states)?;
    Ok(EvaluationReport {
        satisfaction_frequency: satisfaction_frequency(inst, samples)?,
        mean_hamming,
        std_hamming,
        mean_energy: samples.mean_energy().expect("non-empty"),
        best_energy: samples.best_energy().expect("non-empty"),
        reference_kind: reference.kind,
        reference_energy: reference.energy,
        sample_count,
    })
}

/// One (N, D) cell of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(rename = "N")]
    pub nurses: usize,
    #[serde(rename = "D")]
    pub days: usize,
    pub engine: String,
    pub num_reads: usize,
    pub satisfaction_frequency: Option<f64>,
    pub mean_hamming: Option<f64>,
    pub std_hamming: Option<f64>,
    pub mean_energy: Option<f64>,
    pub best_energy: Option<f64>,
    pub reference_kind: Option<String>,
    pub seed: Option<u64>,
    /// `ok`, or the error that stopped this cell.
    pub status: String,
}

pub struct SweepConfig<'a> {
    pub engine: Engine,
    pub num_reads: usize,
    /// Above this many variables the reference is the best found state.
    pub max_exact_vars: usize,
    /// Builds the instance for each cell.
    pub instance: &'a (dyn Fn(usize, usize) -> NspInstance + Sync),
}

fn run_cell(inst: &NspInstance, cfg: &SweepConfig<'_>) -> Result<(SampleSet, EvaluationReport)> {
    let qubo = inst.build_qubo()?;
    let samples = cfg.engine.run(&qubo, cfg.num_reads)?;
    let reference = Reference::for_instance(inst, &samples, cfg.max_exact_vars)?;
    let report = evaluate(inst, &samples, &reference)?;
    Ok((samples, report))
}

/// Evaluates every (N, D) pair. A failing cell produces a flagged row and
/// the sweep carries on.
pub fn sweep_experiment(nurses: &[usize], days: &[usize], cfg: &SweepConfig<'_>) -> Vec<SweepRow> {
    let mut rows = Vec::with_capacity(nurses.len() * days.len());
    for &n in nurses {
        for &d in days {
            let inst = (cfg.instance)(n, d);
            let mut row = SweepRow {
                nurses: n,
                days: d,
                engine: cfg.engine.name().to_string(),
                num_reads: cfg.num_reads,
                satisfaction_frequency: None,
                mean_hamming: None,
                std_hamming: None,
                mean_energy: None,
                best_energy: None,
                reference_kind: None,
                seed: cfg.engine.seed(),
                status: "ok".into(),
            };
            match run_cell(&inst, cfg) {
                Ok((samples, report)) => {
                    row.num_reads = samples.num_reads;
                    row.satisfaction_frequency = Some(report.satisfaction_frequency);
                    row.mean_hamming = Some(report.mean_hamming);
                    row.std_hamming = Some(report.std_hamming);
                    row.mean_energy = Some(report.mean_energy);
                    row.best_energy = Some(report.best_energy);
                    row.reference_kind = Some(report.reference_kind.as_str().to_string());
                }
                Err(e) => row.status = format!("error: {e}"),
            }
            rows.push(row);
        }
    }
    rows
}

pub fn write_sweep_csv<W: std::io::Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    if rows.is_empty() {
        w.write_record([
            "N",
            "D",
            "engine",
            "num_reads",
            "satisfaction_frequency",
            "mean_hamming",
            "std_hamming",
            "mean_energy",
            "best_energy",
            "reference_kind",
            "seed",
            "status",
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::DEFAULT_MAX_VARS;
    use crate::sampleset::{Provenance, Sample};

    fn set(samples: Vec<(&str, usize)>) -> SampleSet {
        let mut s = SampleSet::from_reads(Vec::new(), |_| 0.0, Provenance::Exact { max_vars: 28 }, String::new());
        s.samples = samples
            .into_iter()
            .map(|(b, count)| Sample {
                bits: b.parse().unwrap(),
                energy: 0.0,
                count,
            })
            .collect();
        s.num_reads = s.samples.iter().map(|x| x.count).sum();
        s
    }

    #[test]
    fn frequency_examples() {
        let inst = NspInstance::paper_base(2, 2);
        assert_eq!(
            satisfaction_frequency(&inst, &set(vec![("1001", 3), ("0110", 1)])).unwrap(),
            1.0
        );
        assert_eq!(
            satisfaction_frequency(&inst, &set(vec![("0000", 2), ("1111", 5)])).unwrap(),
            0.0
        );
        assert!(
            (satisfaction_frequency(&inst, &set(vec![("1001", 2), ("0110", 1), ("0000", 7)])).unwrap() - 0.3).abs()
                < 1e-15
        );
    }

    #[test]
    fn empty_set_is_undefined() {
        let inst = NspInstance::paper_base(2, 2);
        assert!(matches!(
            satisfaction_frequency(&inst, &set(vec![])),
            Err(Error::UndefinedStatistic(_))
        ));
        assert!(matches!(
            hamming_stats(&set(vec![]), &["0000".parse().unwrap()]),
            Err(Error::UndefinedStatistic(_))
        ));
        assert!(matches!(
            hamming_stats(&set(vec![("0000", 1)]), &[]),
            Err(Error::UndefinedStatistic(_))
        ));
    }

    #[test]
    fn hamming_examples() {
        let reference: Vec<BitVector> = vec!["1001".parse().unwrap(), "0110".parse().unwrap()];
        assert_eq!(
            hamming_stats(&set(vec![("1001", 4), ("0110", 2)]), &reference).unwrap(),
            (0.0, 0.0)
        );
        let far = vec!["000000".parse().unwrap(), "111111".parse().unwrap()];
        assert_eq!(hamming_stats(&set(vec![("111000", 1)]), &far).unwrap(), (3.0, 0.0));
        let (mean, std) = hamming_stats(&set(vec![("1000", 1), ("1111", 1)]), &reference).unwrap();
        assert_eq!(mean, 1.5);
        assert_eq!(std, 0.5);
        assert!(hamming_stats(&set(vec![("10", 1)]), &reference).is_err());
    }

    #[test]
    fn empty_sweep() {
        let cfg = SweepConfig {
            engine: Engine::Exact {
                max_vars: DEFAULT_MAX_VARS,
            },
            num_reads: 0,
            max_exact_vars: DEFAULT_MAX_VARS,
            instance: &NspInstance::paper_base,
        };
        assert!(sweep_experiment(&[], &[5], &cfg).is_empty());
        let mut out = Vec::new();
        write_sweep_csv(&[], &mut out).unwrap();
        assert!(String::from_utf8(out)
            .unwrap()
            .starts_with("N,D,engine,num_reads,satisfaction_frequency"));
    }

    #[test]
    fn exact_cell_is_fully_satisfying() {
        let cfg = SweepConfig {
            engine: Engine::Exact {
                max_vars: DEFAULT_MAX_VARS,
            },
            num_reads: 0,
            max_exact_vars: DEFAULT_MAX_VARS,
            instance: &NspInstance::paper_base,
        };
        let rows = sweep_experiment(&[3], &[5], &cfg);
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].satisfaction_frequency, Some(1.0));
        assert_eq!(rows[0].mean_hamming, Some(0.0));
        assert_eq!(rows[0].reference_kind.as_deref(), Some("exact"));
    }

    #[test]
    fn failing_cell_is_flagged() {
        let cfg = SweepConfig {
            engine: Engine::Exact { max_vars: 10 },
            num_reads: 0,
            max_exact_vars: 10,
            instance: &NspInstance::paper_base,
        };
        let rows = sweep_experiment(&[2, 3], &[4], &cfg);
        assert_eq!(rows[0].status, "ok");
        assert!(rows[1].status.starts_with("error: capacity"));
        let mut out = Vec::new();
        write_sweep_csv(&rows, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().count(), 3);
    }
}
