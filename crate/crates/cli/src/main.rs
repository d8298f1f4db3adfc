//! `seatalloc`: joint seat allocation from the command line.
//!
//! Exit codes: 0 success, 1 bad input (parse or validation failure, I/O),
//! 2 internal invariant violation (work budget exceeded, failed replay or
//! stability check).

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};

use seatalloc_core::allocator::{
    replay, AuditEvent, Engine, EngineError, JointConfig, DEFAULT_BUDGET_C,
};
use seatalloc_core::io::audit_log::JsonlSink;
use seatalloc_core::io::bench::{run_bench, BenchConfig};
use seatalloc_core::io::gen::{generate_instance, GenParams};
use seatalloc_core::io::outputs::{
    output_digests, write_allocation, write_metrics, write_unassigned, ALLOCATION_FILE, AUDIT_FILE,
    METRICS_FILE, UNASSIGNED_FILE,
};
use seatalloc_core::io::{load_instance, read_audit_log, read_metrics, write_raw, RunSummary};
use seatalloc_core::model::{CandidateId, Instance, InstanceOptions, ListId};
use seatalloc_core::oracle::verify_run;

/// Overrides the default work-budget multiplier (testing only).
const BUDGET_ENV: &str = "SEATALLOC_BUDGET_C";

#[derive(Parser)]
#[command(
    name = "seatalloc",
    version,
    about = "Joint waiting-list seat allocation over several merit lists"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Allocate seats for an instance directory.
    Allocate {
        instance: PathBuf,
        #[command(flatten)]
        run: RunOpts,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Apply withdrawals to a saved run and re-emit its outputs.
    Withdraw {
        instance: PathBuf,
        /// Output directory of an earlier `allocate` (updated in place).
        #[arg(long)]
        out_dir: PathBuf,
        /// CSV with a `candidate_id` column, applied in file order.
        #[arg(long)]
        withdrawals: PathBuf,
        #[arg(long)]
        enable_quotas: bool,
    },
    /// Rebuild a run's state from its audit log.
    Replay {
        instance: PathBuf,
        #[arg(long)]
        audit: PathBuf,
        #[arg(long)]
        enable_quotas: bool,
        /// Writes the rebuilt allocation and unassigned files here.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Check runs against the stability checker, replay and deferred acceptance.
    ///
    /// With an instance directory, checks that instance; otherwise checks a
    /// seeded corpus of small generated instances.
    Verify {
        instance: Option<PathBuf>,
        #[command(flatten)]
        run: RunOpts,
        /// Corpus size when no instance is given.
        #[arg(long, default_value_t = 1000)]
        count: u64,
        /// Also fail when the engine differs from candidate-proposing deferred acceptance.
        #[arg(long)]
        require_candidate_da: bool,
    },
    /// Generate a random instance.
    Gen {
        #[command(flatten)]
        gen: GenOpts,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Time the engine on a ladder of generated instances (JSON lines on stdout).
    Bench {
        /// Comma-separated candidate counts.
        #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000")]
        ladder: Vec<usize>,
        #[arg(long, default_value_t = 20)]
        pref_len: u32,
        #[arg(long, default_value_t = 20)]
        candidates_per_course: usize,
        #[arg(long, default_value_t = 2)]
        lists: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct RunOpts {
    /// Raw list ids in processing order, e.g. `2,1`.
    #[arg(long, value_delimiter = ',')]
    lists_order: Option<Vec<u64>>,
    #[arg(long)]
    enable_quotas: bool,
    /// Recorded in reports; also seeds the corpus for `verify`.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct GenOpts {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    candidates: usize,
    #[arg(long, default_value_t = 10)]
    courses: usize,
    #[arg(long, default_value_t = 2)]
    lists: usize,
    #[arg(long, default_value_t = 1)]
    capacity_min: u32,
    #[arg(long, default_value_t = 5)]
    capacity_max: u32,
    #[arg(long, default_value_t = 5)]
    pref_len: u32,
    #[arg(long, default_value_t = 3)]
    pref_len_spread: u32,
    #[arg(long, default_value_t = 0.8)]
    popularity_skew: f64,
    #[arg(long)]
    reservations: bool,
    #[arg(long)]
    quotas: bool,
    #[arg(long, default_value_t = 0.4)]
    female_prob: f64,
}

impl GenOpts {
    fn params(&self) -> GenParams {
        GenParams {
            candidates: self.candidates,
            courses: self.courses,
            lists: self.lists,
            capacity_min: self.capacity_min,
            capacity_max: self.capacity_max,
            pref_len_mean: self.pref_len,
            pref_len_spread: self.pref_len_spread,
            popularity_skew: self.popularity_skew,
            reservations: self.reservations,
            quotas: self.quotas,
            female_prob: self.female_prob,
            seed: self.seed,
            ..GenParams::default()
        }
    }
}

/// An error together with the exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn bad_input(error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: 1,
        error: error.into(),
    }
}

fn invariant(error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: 2,
        error: error.into(),
    }
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        bad_input(e)
    }
}

fn engine_failure(e: EngineError) -> Failure {
    match e {
        EngineError::CascadeBudgetExceeded { .. } => invariant(e),
        _ => bad_input(e),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(u8::from(e.use_stderr()));
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Allocate {
            instance,
            run,
            out_dir,
        } => allocate(&instance, &run, &out_dir),
        Command::Withdraw {
            instance,
            out_dir,
            withdrawals,
            enable_quotas,
        } => withdraw(&instance, &out_dir, &withdrawals, enable_quotas),
        Command::Replay {
            instance,
            audit,
            enable_quotas,
            out_dir,
        } => replay_cmd(&instance, &audit, enable_quotas, out_dir.as_deref()),
        Command::Verify {
            instance,
            run,
            count,
            require_candidate_da,
        } => verify(instance.as_deref(), &run, count, require_candidate_da),
        Command::Gen { gen, out_dir } => {
            let raw = generate_instance(&gen.params())?;
            fs::create_dir_all(&out_dir).with_context(|| out_dir.display().to_string())?;
            write_raw(&raw, &out_dir)?;
            println!(
                "seed {}: {} candidates, {} courses, {} lists -> {}",
                gen.seed,
                gen.candidates,
                gen.courses,
                gen.lists,
                out_dir.display()
            );
            Ok(())
        }
        Command::Bench {
            ladder,
            pref_len,
            candidates_per_course,
            lists,
            seed,
        } => {
            let config = BenchConfig {
                params: GenParams {
                    lists,
                    pref_len_mean: pref_len,
                    pref_len_spread: pref_len / 2,
                    ..GenParams::default()
                },
                candidates_per_course,
                budget_c: budget_c()?,
                seed,
            };
            let rows = run_bench(&ladder, &config).map_err(|e| invariant(anyhow!(e)))?;
            for row in &rows {
                println!(
                    "{}",
                    serde_json::to_string(&serde_json::json!({ "seed": seed, "row": row }))?
                );
            }
            if rows.iter().any(|r| r.ratio > config.budget_c as f64) {
                return Err(invariant(anyhow!("work ratio above the budget constant")));
            }
            Ok(())
        }
    }
}

fn budget_c() -> Result<u64, Failure> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            bad_input(anyhow!(
                "{BUDGET_ENV} must be a non-negative integer, got {v:?}"
            ))
        }),
        Err(_) => Ok(DEFAULT_BUDGET_C),
    }
}

fn load(dir: &Path, enable_quotas: bool) -> Result<Instance, Failure> {
    load_instance(dir, &InstanceOptions { enable_quotas }).map_err(bad_input)
}

fn config(inst: &Instance, run: &RunOpts) -> Result<JointConfig, Failure> {
    let list_order = match &run.lists_order {
        None => None,
        Some(raw) => Some(
            raw.iter()
                .map(|&id| {
                    inst.list_by_raw(id)
                        .ok_or_else(|| anyhow!("unknown list id {id} in --lists-order"))
                })
                .collect::<Result<Vec<ListId>, _>>()?,
        ),
    };
    Ok(JointConfig {
        list_order,
        budget_c: budget_c()?,
    })
}

fn finish_sink(sink: JsonlSink<'_, BufWriter<File>>) -> Result<(), Failure> {
    sink.finish().context("writing audit log")?;
    Ok(())
}

fn write_results(
    inst: &Instance,
    engine_state: &seatalloc_core::model::AllocationState,
    summary: &RunSummary,
    out_dir: &Path,
) -> Result<(), Failure> {
    write_allocation(inst, engine_state, &out_dir.join(ALLOCATION_FILE))?;
    write_unassigned(inst, engine_state, &out_dir.join(UNASSIGNED_FILE))?;
    write_metrics(summary, &out_dir.join(METRICS_FILE))?;
    Ok(())
}

fn print_summary(summary: &RunSummary, out_dir: &Path) -> Result<(), Failure> {
    println!(
        "{} candidates: {} assigned, {} unassigned, {} withdrawn; {} steps ({:.2} per unit of work)",
        summary.candidates,
        summary.assigned,
        summary.unassigned,
        summary.withdrawn,
        summary.metrics.op_counter,
        summary.ratio
    );
    for (name, digest) in output_digests(out_dir)? {
        println!("sha256 {digest}  {name}");
    }
    Ok(())
}

fn allocate(instance: &Path, run: &RunOpts, out_dir: &Path) -> Result<(), Failure> {
    let inst = load(instance, run.enable_quotas)?;
    let cfg = config(&inst, run)?;
    let order = cfg.resolved_order(&inst).map_err(engine_failure)?;
    fs::create_dir_all(out_dir).with_context(|| out_dir.display().to_string())?;
    let audit = File::create(out_dir.join(AUDIT_FILE))?;
    let mut engine = Engine::new(
        &inst,
        cfg.budget_c,
        JsonlSink::new(&inst, BufWriter::new(audit)),
    );
    if let Some((&first, rest)) = order.split_first() {
        engine.step1(first).map_err(engine_failure)?;
        for &t in rest {
            engine.improve_with_list(t).map_err(engine_failure)?;
        }
    }
    let (state, metrics, sink) = engine.finish();
    finish_sink(sink)?;
    let summary = RunSummary::new(&inst, &state, &metrics, &order, run.seed);
    write_results(&inst, &state, &summary, out_dir)?;
    print_summary(&summary, out_dir)
}

fn read_withdrawals(path: &Path, inst: &Instance) -> Result<Vec<CandidateId>, Failure> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| path.display().to_string())?;
    let headers = rdr.headers()?.clone();
    let Some(col) = headers.iter().position(|h| h == "candidate_id") else {
        return Err(bad_input(anyhow!(
            "{}: missing candidate_id column",
            path.display()
        )));
    };
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let raw: u64 = rec
            .get(col)
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| anyhow!("{}:{line}: invalid candidate_id", path.display()))?;
        let c = inst
            .candidate_by_raw(raw)
            .ok_or_else(|| anyhow!("{}:{line}: unknown candidate {raw}", path.display()))?;
        out.push(c);
    }
    Ok(out)
}

fn rebuild(
    inst: &Instance,
    audit: &Path,
) -> Result<(seatalloc_core::model::AllocationState, Vec<AuditEvent>), Failure> {
    let events = read_audit_log(inst, audit).map_err(bad_input)?;
    let state = replay(inst, &events).map_err(invariant)?;
    Ok((state, events))
}

fn withdraw(
    instance: &Path,
    out_dir: &Path,
    withdrawals: &Path,
    enable_quotas: bool,
) -> Result<(), Failure> {
    let inst = load(instance, enable_quotas)?;
    let saved = read_metrics(&out_dir.join(METRICS_FILE)).context("reading saved metrics")?;
    if saved.quotas_enabled != enable_quotas {
        return Err(bad_input(anyhow!(
            "saved run used --enable-quotas={}",
            saved.quotas_enabled
        )));
    }
    let gone = read_withdrawals(withdrawals, &inst)?;
    let (state, events) = rebuild(&inst, &out_dir.join(AUDIT_FILE))?;

    let audit = File::create(out_dir.join(AUDIT_FILE))?;
    let mut sink = JsonlSink::new(&inst, BufWriter::new(audit));
    for e in &events {
        seatalloc_core::allocator::AuditSink::record(&mut sink, e);
    }
    let mut engine = Engine::resume(&inst, state, saved.metrics.clone(), sink);
    for c in gone {
        engine.withdraw(c).map_err(engine_failure)?;
    }
    let (state, metrics, sink) = engine.finish();
    finish_sink(sink)?;
    let order: Vec<ListId> = saved
        .list_order
        .iter()
        .map(|&id| {
            inst.list_by_raw(id)
                .ok_or_else(|| anyhow!("saved list order names unknown list {id}"))
        })
        .collect::<Result<_, _>>()?;
    let summary = RunSummary::new(&inst, &state, &metrics, &order, saved.seed);
    write_results(&inst, &state, &summary, out_dir)?;
    print_summary(&summary, out_dir)
}

fn replay_cmd(
    instance: &Path,
    audit: &Path,
    enable_quotas: bool,
    out_dir: Option<&Path>,
) -> Result<(), Failure> {
    let inst = load(instance, enable_quotas)?;
    let (state, events) = rebuild(&inst, audit)?;
    let assigned = state
        .current_ranks()
        .iter()
        .filter(|r| !r.is_none())
        .count();
    println!(
        "replayed {} events: {} of {} candidates assigned; every change improves, every vacancy has a cause",
        events.len(),
        assigned,
        inst.num_candidates()
    );
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir)?;
        write_allocation(&inst, &state, &dir.join(ALLOCATION_FILE))?;
        write_unassigned(&inst, &state, &dir.join(UNASSIGNED_FILE))?;
    }
    Ok(())
}

fn verify(
    instance: Option<&Path>,
    run: &RunOpts,
    count: u64,
    require_candidate_da: bool,
) -> Result<(), Failure> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let mut unsound = 0u64;
    let mut cand_diffs = 0u64;
    let mut pool_diffs = 0u64;
    let mut checked = 0u64;
    let mut check = |inst: &Instance, label: &str, out: &mut dyn Write| -> Result<(), Failure> {
        let cfg = config(inst, run)?;
        let r = verify_run(inst, &cfg, &[]).map_err(|e| invariant(anyhow!(e)))?;
        checked += 1;
        if !r.sound() {
            unsound += 1;
            writeln!(
                out,
                "{label}: UNSOUND ({} envy, {} waste, replay {:?})",
                r.stability.justified_envy.len(),
                r.stability.waste.len(),
                r.replay
            )?;
        }
        if !r.vs_candidate_da.is_empty() {
            cand_diffs += 1;
            writeln!(
                out,
                "{label}: differs from candidate-proposing deferred acceptance for {} candidates",
                r.vs_candidate_da.differing
            )?;
        }
        if !r.vs_pool_da.is_empty() {
            pool_diffs += 1;
            writeln!(
                out,
                "{label}: differs from pool-proposing deferred acceptance for {} candidates",
                r.vs_pool_da.differing
            )?;
        }
        Ok(())
    };
    match instance {
        Some(dir) => {
            let inst = load(dir, run.enable_quotas)?;
            check(&inst, &dir.display().to_string(), &mut out)?;
        }
        None => {
            let base = run.seed.unwrap_or(0);
            for i in 0..count {
                let seed = base.wrapping_add(i);
                let params = small_params(seed);
                let raw = generate_instance(&params)?;
                let inst = seatalloc_core::model::validate_instance(
                    &raw,
                    &InstanceOptions {
                        enable_quotas: run.enable_quotas,
                    },
                )
                .map_err(invariant)?;
                check(&inst, &format!("seed {seed}"), &mut out)?;
            }
        }
    }
    writeln!(
        out,
        "checked {checked}: {unsound} unsound, {cand_diffs} differ from candidate-proposing DA, {pool_diffs} differ from pool-proposing DA"
    )?;
    if unsound > 0 || (require_candidate_da && cand_diffs > 0) {
        return Err(invariant(anyhow!("verification failed")));
    }
    Ok(())
}

/// Small instances where brute-force checks are cheap.
fn small_params(seed: u64) -> GenParams {
    GenParams {
        candidates: 1 + (seed % 8) as usize,
        courses: 1 + (seed / 8 % 6) as usize,
        lists: 1 + (seed / 48 % 3) as usize,
        capacity_min: 1,
        capacity_max: 3,
        pref_len_mean: 3,
        pref_len_spread: 3,
        reservations: seed / 144 % 2 == 1,
        quotas: true,
        seed,
        ..GenParams::default()
    }
}
