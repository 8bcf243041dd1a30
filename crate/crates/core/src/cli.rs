//! Command-line front end: `generate`, `solve`, `stats` and `sweep`.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::anneal::{
    AnnealSchedule, SelectionPolicy, DEFAULT_HOLD_SWEEPS, DEFAULT_S_TARGET, DEFAULT_T_MIN, FORWARD_SWEEPS,
};
use crate::engine::{Engine, ReverseStart};
use crate::error::{Error, Result};
use crate::exact::DEFAULT_MAX_VARS;
use crate::nsp::{balanced_duty_targets, NspInstance, SlotWeights};
use crate::qubo::{BitVector, SCHEMA_VERSION};
use crate::sampleset::{fingerprint, SampleSet};
use crate::stats::{
    evaluate, sweep_experiment, write_sweep_csv, EvaluationReport, Reference, ReferenceKind, SweepConfig,
};
use crate::tabu::TabuConfig;

#[derive(Debug, Parser)]
#[command(
    name = "nsp",
    version,
    about = "Nurse scheduling as QUBO: generate instances, solve, evaluate"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write an instance JSON file.
    Generate(GenerateArgs),
    /// Solve an instance and write a sample set plus a run manifest.
    Solve(SolveArgs),
    /// Evaluate sample sets against a reference.
    Stats(StatsArgs),
    /// Solve and evaluate a grid of (N, D) instances, one CSV row per cell.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// Single shift per day, lambda 1.3, gamma 0.3, a 3.5.
    PaperBase,
    /// Three shifts per day with weekend and shift weights and eta 0.2.
    #[value(name = "paper-3shift")]
    #[serde(rename = "paper-3shift")]
    PaperThreeShift,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Number of nurses.
    pub nurses: usize,
    /// Number of days.
    pub days: usize,
    #[arg(long, value_enum, default_value = "paper-base")]
    pub preset: Preset,
    /// Shifts per day; defaults to the preset's value.
    #[arg(long)]
    pub shifts: Option<usize>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    /// Consecutive-duty penalty.
    #[arg(long)]
    pub a: Option<f64>,
    /// Duty target for every nurse.
    #[arg(long)]
    pub duty_target: Option<f64>,
    /// Required workforce for every slot.
    #[arg(long)]
    pub workforce: Option<f64>,
    /// Day-off request `NURSE,SLOT,PRIORITY` (0-based); repeatable.
    #[arg(long = "day-off", value_parser = parse_day_off)]
    pub day_off: Vec<(usize, usize, f64)>,
    /// Output path; stdout when absent.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineKind {
    Exact,
    Forward,
    Reverse,
    Tabu,
    Decompose,
}

#[derive(Debug, Args, Clone)]
pub struct EngineArgs {
    #[arg(long, value_enum)]
    pub engine: EngineKind,
    /// Master seed; drawn at random and recorded when absent.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 1000)]
    pub reads: usize,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Variable cap for exact enumeration.
    #[arg(long, default_value_t = DEFAULT_MAX_VARS)]
    pub max_vars: usize,
    /// Forward anneal length in sweeps.
    #[arg(long, default_value_t = FORWARD_SWEEPS)]
    pub sweeps: usize,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_T_MIN)]
    pub t_min: f64,
    /// Reverse anneal turning point in (0, 1].
    #[arg(long, default_value_t = DEFAULT_S_TARGET)]
    pub s_target: f64,
    #[arg(long, default_value_t = DEFAULT_HOLD_SWEEPS, conflicts_with = "hold_us")]
    pub hold_sweeps: usize,
    /// Pause length in microseconds (10 sweeps each).
    #[arg(long)]
    pub hold_us: Option<f64>,
    /// How reverse reads pick their start from a sample set.
    #[arg(long, default_value = "lowest-energy")]
    pub policy: SelectionPolicy,
    #[arg(long, default_value_t = 10)]
    pub tenure: usize,
    #[arg(long, default_value_t = 16)]
    pub max_restarts: usize,
    #[arg(long, default_value_t = 4)]
    pub restarts_per_round: usize,
    #[arg(long)]
    pub stall_iters: Option<usize>,
    #[arg(long, default_value_t = 40)]
    pub subproblem_size: usize,
    /// Wall-clock budget in seconds for tabu and decompose.
    #[arg(long)]
    pub time_budget: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Instance JSON.
    pub instance: PathBuf,
    #[command(flatten)]
    pub engine: EngineArgs,
    /// Reverse engine start: a sample set to refine, a file holding one bit
    /// string, or `best-of:<sampleset>` for its lowest state.
    #[arg(long)]
    pub initial: Option<String>,
    /// Sample set output; the manifest goes to `<out>.manifest.json`.
    #[arg(long, short)]
    pub out: PathBuf,
    /// Also write the lowest-energy roster as CSV.
    #[arg(long)]
    pub roster: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// Sample set files.
    #[arg(required = true)]
    pub samples: Vec<PathBuf>,
    /// Sample set whose lowest states are the reference. Computed by
    /// enumeration when absent.
    #[arg(long)]
    pub reference: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_MAX_VARS)]
    pub max_vars: usize,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: ReportFormat,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Nurse counts, e.g. `3` or `2,3` or `2-4`.
    #[arg(long, value_parser = parse_range_list)]
    pub nurses: IntList,
    /// Day counts, e.g. `5-12`.
    #[arg(long, value_parser = parse_range_list)]
    pub days: IntList,
    #[arg(long, value_enum, default_value = "paper-base")]
    pub preset: Preset,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[arg(long, short)]
    pub out: PathBuf,
}

/// Everything needed to rerun a command and get the same output bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: u32,
    pub tool_version: String,
    pub command_line: Vec<String>,
    pub subcommand: String,
    /// SHA-256 of the instance JSON, when the run had a single instance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance_hash: Option<String>,
    pub engine: String,
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    fn new(subcommand: &str, engine: &str, config: serde_json::Value, seed: Option<u64>) -> Self {
        RunManifest {
            version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command_line: std::env::args().collect(),
            subcommand: subcommand.to_string(),
            instance_hash: None,
            engine: engine.to_string(),
            config,
            seed,
            timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            outputs: Vec::new(),
        }
    }
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn parse_day_off(s: &str) -> std::result::Result<(usize, usize, f64), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [n, k, g] = parts[..] else {
        return Err(format!("expected NURSE,SLOT,PRIORITY, got {s:?}"));
    };
    Ok((
        n.parse().map_err(|e| format!("nurse: {e}"))?,
        k.parse().map_err(|e| format!("slot: {e}"))?,
        g.parse().map_err(|e| format!("priority: {e}"))?,
    ))
}

/// Integers given as a comma list with optional `lo-hi` ranges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntList(pub Vec<usize>);

fn parse_range_list(s: &str) -> std::result::Result<IntList, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((lo, hi)) => {
                let lo: usize = lo.parse().map_err(|e| format!("{part:?}: {e}"))?;
                let hi: usize = hi.parse().map_err(|e| format!("{part:?}: {e}"))?;
                if lo > hi {
                    return Err(format!("empty range {part:?}"));
                }
                out.extend(lo..=hi);
            }
            None => out.push(part.parse().map_err(|e| format!("{part:?}: {e}"))?),
        }
    }
    if out.is_empty() {
        return Err("empty list".into());
    }
    Ok(IntList(out))
}

/// Preset instance for `preset` with `shifts` per day.
pub fn preset_instance(preset: Preset, nurses: usize, days: usize, shifts: Option<usize>) -> Result<NspInstance> {
    if nurses == 0 || days == 0 {
        return Err(Error::config("N and D must be at least 1"));
    }
    match preset {
        Preset::PaperBase => {
            let mut inst = NspInstance::paper_base(nurses, days);
            let shifts = shifts.unwrap_or(1);
            if shifts == 0 {
                return Err(Error::config("--shifts must be at least 1"));
            }
            if shifts > 1 {
                let slots = days * shifts;
                inst.shifts_per_day = shifts;
                inst.workforce = vec![1.0; slots];
                inst.duty_target = balanced_duty_targets(nurses, slots);
                inst.h2 = SlotWeights::PerSlot(vec![1.0; slots]);
            }
            Ok(inst)
        }
        Preset::PaperThreeShift => match shifts {
            None | Some(3) => Ok(NspInstance::paper_three_shift(nurses, days)),
            Some(s) => Err(Error::config(format!(
                "preset paper-3shift has 3 shifts per day, --shifts {s} contradicts it"
            ))),
        },
    }
}

pub fn build_instance(args: &GenerateArgs) -> Result<NspInstance> {
    let mut inst = preset_instance(args.preset, args.nurses, args.days, args.shifts)?;
    if let Some(v) = args.lambda {
        inst.lambda = v;
    }
    if let Some(v) = args.gamma {
        inst.gamma = v;
    }
    if let Some(v) = args.eta {
        inst.eta = v;
    }
    if let Some(v) = args.a {
        inst.a = v;
    }
    if let Some(v) = args.duty_target {
        inst.duty_target = vec![v; inst.nurses];
    }
    if let Some(v) = args.workforce {
        inst.workforce = vec![v; inst.num_slots()];
    }
    for (i, &(n, k, g)) in args.day_off.iter().enumerate() {
        if let Some(&(_, _, other)) = args.day_off[..i].iter().find(|&&(n2, k2, _)| (n2, k2) == (n, k)) {
            if other != g {
                return Err(Error::config(format!(
                    "day-off ({n}, {k}) given twice with priorities {other} and {g}"
                )));
            }
        }
        inst.set_day_off(n, k, g)?;
    }
    if !args.day_off.is_empty() && inst.eta == 0.0 {
        return Err(Error::config(
            "day-off requests given but eta is 0, so they would carry no weight",
        ));
    }
    inst.validate()?;
    Ok(inst)
}

fn read_instance(path: &Path) -> Result<NspInstance> {
    let inst: NspInstance = serde_json::from_str(&fs::read_to_string(path)?)?;
    inst.validate()?;
    Ok(inst)
}

fn read_sampleset(path: &Path) -> Result<SampleSet> {
    SampleSet::from_json(&fs::read_to_string(path)?)
}

fn write_output(out: Option<&Path>, body: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, body)?,
        None => print!("{body}"),
    }
    Ok(())
}

/// The start state(s) named by `--initial`.
fn reverse_start(arg: &str, policy: SelectionPolicy) -> Result<ReverseStart> {
    if let Some(path) = arg.strip_prefix("best-of:") {
        let set = read_sampleset(Path::new(path))?;
        let lowest = set
            .lowest()
            .ok_or_else(|| Error::config(format!("{path}: sample set is empty")))?;
        return Ok(ReverseStart::State(lowest.bits.clone()));
    }
    let text = fs::read_to_string(arg)?;
    if let Ok(bits) = text.trim().parse::<BitVector>() {
        return Ok(ReverseStart::State(bits));
    }
    Ok(ReverseStart::Candidates {
        set: SampleSet::from_json(&text)?,
        policy,
    })
}

impl EngineArgs {
    fn resolved_seed(&self) -> u64 {
        self.seed.unwrap_or_else(rand::random)
    }

    fn anneal_schedule(&self, seed: u64, reverse: bool) -> AnnealSchedule {
        let mut s = if reverse {
            let hold = self
                .hold_us
                .map_or(self.hold_sweeps, AnnealSchedule::hold_from_microseconds);
            AnnealSchedule::reverse(self.s_target, hold, seed)
        } else {
            AnnealSchedule::forward(seed).with_sweeps(self.sweeps)
        };
        s.t_max = self.t_max;
        s.t_min = self.t_min;
        s
    }

    fn tabu_config(&self, seed: u64) -> TabuConfig {
        TabuConfig {
            tenure: self.tenure,
            max_restarts: self.max_restarts,
            restarts_per_round: self.restarts_per_round,
            stall_iters: self.stall_iters,
            subproblem_size: self.subproblem_size,
            time_budget: self.time_budget,
            seed,
        }
    }

    /// Builds the engine. `start` is required for the reverse engine unless
    /// `forward_first` is set, in which case a forward anneal supplies it.
    fn build(&self, seed: u64, start: Option<ReverseStart>, forward_first: bool) -> Result<Engine> {
        let engine = match self.engine {
            EngineKind::Exact => Engine::Exact {
                max_vars: self.max_vars,
            },
            EngineKind::Forward => Engine::Forward(self.anneal_schedule(seed, false)),
            EngineKind::Reverse => {
                let start = match start {
                    Some(s) => s,
                    None if forward_first => ReverseStart::ForwardFirst {
                        forward: self.anneal_schedule(seed, false),
                        policy: self.policy,
                    },
                    None => return Err(Error::config("the reverse engine needs --initial")),
                };
                Engine::Reverse {
                    schedule: self.anneal_schedule(seed, true),
                    start,
                }
            }
            EngineKind::Tabu => Engine::Tabu(self.tabu_config(seed)),
            EngineKind::Decompose => Engine::Decompose(self.tabu_config(seed)),
        };
        match &engine {
            Engine::Forward(s) | Engine::Reverse { schedule: s, .. } => s.validate()?,
            Engine::Tabu(c) | Engine::Decompose(c) => c.validate()?,
            Engine::Exact { .. } => {}
        }
        Ok(engine)
    }

    fn config_json(&self, engine: &Engine) -> serde_json::Value {
        let mut v = serde_json::json!({ "num_reads": self.reads, "jobs": self.jobs });
        let extra = match engine {
            Engine::Exact { max_vars } => serde_json::json!({ "max_vars": max_vars }),
            Engine::Forward(s) => serde_json::json!({ "schedule": s }),
            Engine::Reverse { schedule, start } => {
                let start = match start {
                    ReverseStart::State(b) => serde_json::json!({ "state": b }),
                    ReverseStart::Candidates { set, policy } => {
                        serde_json::json!({ "candidates": set.fingerprint, "candidate_hash": fingerprint(set), "policy": policy })
                    }
                    ReverseStart::ForwardFirst { forward, policy } => {
                        serde_json::json!({ "forward": forward, "policy": policy })
                    }
                };
                serde_json::json!({ "schedule": schedule, "start": start })
            }
            Engine::Tabu(c) | Engine::Decompose(c) => serde_json::json!({ "config": c }),
        };
        if let (Some(obj), serde_json::Value::Object(extra)) = (v.as_object_mut(), extra) {
            obj.extend(extra);
        }
        v
    }

    fn with_pool<T: Send>(&self, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
        match self.jobs {
            None => f(),
            Some(0) => Err(Error::config("--jobs must be at least 1")),
            Some(j) => rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build()
                .map_err(|e| Error::config(format!("thread pool: {e}")))?
                .install(f),
        }
    }
}

pub fn cmd_generate(args: &GenerateArgs) -> Result<()> {
    let inst = build_instance(args)?;
    let body = serde_json::to_string_pretty(&inst)? + "\n";
    write_output(args.out.as_deref(), &body)
}

pub fn cmd_solve(args: &SolveArgs) -> Result<()> {
    let inst = read_instance(&args.instance)?;
    let qubo = inst.build_qubo()?;
    let seed = args.engine.resolved_seed();
    let start = match (&args.initial, args.engine.engine) {
        (Some(spec), EngineKind::Reverse) => Some(reverse_start(spec, args.engine.policy)?),
        (Some(_), _) => return Err(Error::config("--initial only applies to the reverse engine")),
        (None, _) => None,
    };
    let engine = args.engine.build(seed, start, false)?;
    if let Engine::Reverse {
        start: ReverseStart::State(b),
        ..
    } = &engine
    {
        if b.len() != qubo.num_vars() {
            return Err(Error::dimension(qubo.num_vars(), b.len()));
        }
    }
    let set = args.engine.with_pool(|| engine.run(&qubo, args.engine.reads))?;
    fs::write(&args.out, set.to_json()? + "\n")?;

    let mut manifest = RunManifest::new("solve", engine.name(), args.engine.config_json(&engine), engine.seed());
    manifest.instance_hash = Some(fingerprint(&inst));
    manifest.outputs.push(args.out.clone());
    if let (Some(path), Some(best)) = (&args.roster, set.lowest()) {
        let roster = inst.schedule(best.bits.clone())?.decode();
        roster.write_csv(fs::File::create(path)?)?;
        manifest.outputs.push(path.clone());
    }
    fs::write(
        manifest_path(&args.out),
        serde_json::to_string_pretty(&manifest)? + "\n",
    )?;

    if let Some(best) = set.lowest() {
        let report = inst.check_constraints(&inst.schedule(best.bits.clone())?)?;
        eprintln!(
            "{}: {} reads, {} distinct, best energy {:.6}, satisfying {}",
            engine.name(),
            set.num_reads,
            set.samples.len(),
            best.energy,
            report.is_satisfying()
        );
    }
    Ok(())
}

const STATS_CSV_HEADER: [&str; 10] = [
    "file",
    "engine",
    "satisfaction_frequency",
    "mean_hamming",
    "std_hamming",
    "mean_energy",
    "best_energy",
    "reference_kind",
    "reference_energy",
    "sample_count",
];

#[derive(Debug, Clone, Serialize)]
struct StatsRow {
    file: String,
    engine: String,
    #[serde(flatten)]
    report: EvaluationReport,
}

pub fn cmd_stats(args: &StatsArgs) -> Result<()> {
    let inst = read_instance(&args.instance)?;
    let sets: Vec<(String, SampleSet)> = args
        .samples
        .iter()
        .map(|p| Ok((p.display().to_string(), read_sampleset(p)?)))
        .collect::<Result<_>>()?;
    for (_, set) in &sets {
        if let Some(n) = set.num_vars() {
            if n != inst.num_vars() {
                return Err(Error::dimension(inst.num_vars(), n));
            }
        }
    }
    let reference = match &args.reference {
        Some(path) => {
            let set = read_sampleset(path)?;
            let mut r = Reference::best_found(&set)?;
            r.kind = ReferenceKind::Supplied;
            if let Some(b) = r.states.first() {
                if b.len() != inst.num_vars() {
                    return Err(Error::dimension(inst.num_vars(), b.len()));
                }
            }
            r
        }
        None if inst.num_vars() <= args.max_vars => {
            let g = crate::exact::enumerate_ground_states(&inst.build_qubo()?, args.max_vars)?;
            Reference::exact(&g)
        }
        None => {
            return Err(Error::Capacity {
                num_vars: inst.num_vars(),
                cap: args.max_vars,
            });
        }
    };
    let rows: Vec<StatsRow> = sets
        .iter()
        .map(|(file, set)| {
            Ok(StatsRow {
                file: file.clone(),
                engine: set.provenance.engine_name().to_string(),
                report: evaluate(&inst, set, &reference)?,
            })
        })
        .collect::<Result<_>>()?;
    let body = match args.format {
        ReportFormat::Json => serde_json::to_string_pretty(&rows)? + "\n",
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(STATS_CSV_HEADER)?;
            for r in &rows {
                let e = &r.report;
                w.serialize((
                    &r.file,
                    &r.engine,
                    e.satisfaction_frequency,
                    e.mean_hamming,
                    e.std_hamming,
                    e.mean_energy,
                    e.best_energy,
                    e.reference_kind.as_str(),
                    e.reference_energy,
                    e.sample_count,
                ))?;
            }
            String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.into_error()))?).expect("csv is utf-8")
        }
    };
    write_output(args.out.as_deref(), &body)
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    let seed = args.engine.resolved_seed();
    let engine = args.engine.build(seed, None, true)?;
    let preset = args.preset;
    let (nurses, days) = (&args.nurses.0, &args.days.0);
    if nurses.contains(&0) || days.contains(&0) {
        return Err(Error::config("N and D must be at least 1"));
    }
    let make = move |n: usize, d: usize| preset_instance(preset, n, d, None).expect("non-zero dimensions");
    let cfg = SweepConfig {
        engine,
        num_reads: args.engine.reads,
        max_exact_vars: args.engine.max_vars,
        instance: &make,
    };
    let rows = args.engine.with_pool(|| Ok(sweep_experiment(nurses, days, &cfg)))?;
    write_sweep_csv(&rows, fs::File::create(&args.out)?)?;

    let mut config = args.engine.config_json(&cfg.engine);
    if let Some(obj) = config.as_object_mut() {
        obj.insert("preset".into(), serde_json::json!(preset));
        obj.insert("nurses".into(), serde_json::json!(nurses));
        obj.insert("days".into(), serde_json::json!(days));
    }
    let mut manifest = RunManifest::new("sweep", cfg.engine.name(), config, cfg.engine.seed());
    manifest.outputs.push(args.out.clone());
    fs::write(
        manifest_path(&args.out),
        serde_json::to_string_pretty(&manifest)? + "\n",
    )?;
    let failed = rows.iter().filter(|r| r.status != "ok").count();
    if failed > 0 {
        eprintln!("{failed} of {} cells failed; see the status column", rows.len());
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Stats(a) => cmd_stats(a),
        Command::Sweep(a) => cmd_sweep(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn generate(argv: &[&str]) -> Result<NspInstance> {
        let cli = Cli::try_parse_from(["nsp", "generate"].iter().chain(argv)).expect("parses");
        let Command::Generate(a) = cli.command else {
            unreachable!()
        };
        build_instance(&a)
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range_list("5-8").unwrap().0, vec![5, 6, 7, 8]);
        assert_eq!(parse_range_list("2,3, 5-6").unwrap().0, vec![2, 3, 5, 6]);
        assert!(parse_range_list("4-2").is_err());
        assert!(parse_range_list("x").is_err());
    }

    #[test]
    fn presets_and_overrides() {
        let base = generate(&["3", "4"]).unwrap();
        assert_eq!((base.lambda, base.gamma, base.a), (1.3, 0.3, 3.5));
        let three = generate(&["3", "2", "--shifts", "3", "--preset", "paper-3shift"]).unwrap();
        assert_eq!(three.eta, 0.2);
        assert_eq!(three.num_slots(), 6);
        let over = generate(&["3", "4", "--lambda", "0", "--a", "2"]).unwrap();
        assert_eq!((over.lambda, over.a), (0.0, 2.0));
        let wide = generate(&["2", "2", "--shifts", "2"]).unwrap();
        assert_eq!(wide.workforce.len(), 4);
    }

    #[test]
    fn contradictory_overrides_rejected() {
        for argv in [
            &["3", "2", "--preset", "paper-3shift", "--shifts", "2"][..],
            &[
                "3",
                "2",
                "--preset",
                "paper-3shift",
                "--day-off",
                "0,1,1",
                "--day-off",
                "0,1,2",
            ],
            &["3", "2", "--day-off", "0,1,1"],
            &["3", "2", "--preset", "paper-3shift", "--day-off", "5,1,1"],
            &["3", "2", "--gamma=-1"],
        ] {
            assert!(generate(argv).is_err(), "{argv:?}");
        }
    }

    #[test]
    fn manifest_sits_next_to_output() {
        assert_eq!(
            manifest_path(Path::new("out/run.json")),
            PathBuf::from("out/run.json.manifest.json")
        );
    }
}
