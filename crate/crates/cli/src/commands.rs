//! The five CLI commands, their report schemas, and exit-code mapping.
//!
//! Every report is a single line of JSON on stdout; repeated runs of the
//! same command produce byte-identical output. Failures print a one-line
//! `{"error":{"kind":...,"detail":...}}` object on stderr.

use std::fs;
use std::path::Path;

use gclust_core::convexity;
use gclust_core::instances::{generate, Family, GenParams, Instance, Radii};
use gclust_core::metrics::PackingProfile;
use gclust_core::oracles::{ClusterOracle, OracleSession, SeedPolicy};
use gclust_core::paramsearch::{self, BaseMode, ParamSearchError, UnknownParam};
use gclust_core::radii::get_epsilons;
use gclust_core::rational::{format_rational, int};
use gclust_core::recovery::{self, PhaseScq, RecoveryError, RecoveryOptions, RecoveryReport, ScqBudget};
use gclust_core::Rat;
use serde::{Deserialize, Serialize};

use crate::{Cli, Cmd};

/// Hard failures; both map to exit code 1.
enum CliError {
    Input(String),
    Io(String),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Input(_) => "input",
            CliError::Io(_) => "io",
        }
    }

    fn detail(&self) -> &str {
        match self {
            CliError::Input(d) | CliError::Io(d) => d,
        }
    }
}

/// Prints a one-line machine-readable error object to stderr.
pub fn emit_error(kind: &str, detail: &str) {
    let payload = serde_json::json!({ "error": { "kind": kind, "detail": detail } });
    eprintln!("{payload}");
}

/// Dispatches a parsed invocation and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let outcome = match &cli.cmd {
        Cmd::Gen { family, n, k, rng_seed, out } => cmd_gen(family, *n, *k, *rng_seed, out),
        Cmd::Check { instance, generalized } => cmd_check(instance, *generalized),
        Cmd::Recover {
            instance,
            mode,
            seed_policy,
            paranoid_equality,
            debug_checks,
            naive_discovery,
            report,
        } => cmd_recover(RecoverArgs {
            instance,
            mode,
            seed_policy,
            paranoid: *paranoid_equality,
            debug_checks: *debug_checks,
            naive: *naive_discovery,
            report: report.as_deref(),
        }),
        Cmd::LearnRadii { instance, seed_policy, report } => {
            cmd_learn_radii(instance, seed_policy, report.as_deref())
        }
        Cmd::Bench { suite, out } => cmd_bench(suite, out),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            emit_error(e.kind(), e.detail());
            1
        }
    }
}

fn load_instance(path: &Path) -> Result<Instance, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("read {}: {e}", path.display())))?;
    Instance::from_json_str(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn parse_policy(s: &str) -> Result<SeedPolicy, CliError> {
    match s {
        "first-by-id" => Ok(SeedPolicy::FirstById),
        "adversarial-minmax" => Ok(SeedPolicy::AdversarialMinmax),
        _ => Err(CliError::Input(format!(
            "unknown seed policy {s:?}; valid policies: first-by-id, adversarial-minmax"
        ))),
    }
}

fn rat_strings(values: &[Rat]) -> Vec<String> {
    values.iter().map(format_rational).collect()
}

fn print_report<T: Serialize>(report: &T, file: Option<&Path>) -> Result<(), CliError> {
    let line = serde_json::to_string(report).expect("reports are serializable");
    println!("{line}");
    if let Some(path) = file {
        fs::write(path, format!("{line}\n"))
            .map_err(|e| CliError::Io(format!("write {}: {e}", path.display())))?;
    }
    Ok(())
}

// ---------------------------------------------------------------- gen ----

#[derive(Serialize)]
struct GenSummary {
    family: String,
    n: usize,
    k: usize,
    beta: String,
    gamma: String,
    radii: Vec<String>,
    seeds: Vec<usize>,
    edges: usize,
}

fn cmd_gen(
    family: &str,
    n: Option<usize>,
    k: Option<usize>,
    rng_seed: u64,
    out: &Path,
) -> Result<i32, CliError> {
    let fam = Family::from_name(family).ok_or_else(|| {
        let names: Vec<&str> = Family::all().iter().map(|f| f.name()).collect();
        CliError::Input(format!(
            "unknown family {family:?}; valid families: {}",
            names.join(", ")
        ))
    })?;
    let mut params = GenParams::new(rng_seed);
    params.n = n;
    params.k = k;
    let inst = generate(fam, &params).map_err(|e| CliError::Input(e.to_string()))?;
    fs::write(out, inst.to_json_string())
        .map_err(|e| CliError::Io(format!("write {}: {e}", out.display())))?;
    let summary = GenSummary {
        family: fam.name().to_string(),
        n: inst.n(),
        k: inst.k(),
        beta: format_rational(&inst.beta),
        gamma: format_rational(&inst.gamma),
        radii: rat_strings(&inst.radii_vec()),
        seeds: inst.seeds.clone(),
        edges: inst.graph.edges().len(),
    };
    print_report(&summary, None)?;
    Ok(0)
}

// -------------------------------------------------------------- check ----

#[derive(Serialize)]
struct CheckReport {
    family: String,
    n: usize,
    k: usize,
    beta: String,
    gamma: String,
    /// "shared" or "per-cluster" (the hereditary checker).
    mode: String,
    declared_radii: Vec<String>,
    is_convex: bool,
    violated_properties: Vec<String>,
    violations: Vec<String>,
    /// Smallest connectivity radii, when every cluster connects at all.
    min_radii: Option<Vec<String>>,
    /// Whether the declared radii equal the minimal ones.
    radii_at_minimum: Option<bool>,
}

fn cmd_check(instance: &Path, generalized: bool) -> Result<i32, CliError> {
    let inst = load_instance(instance)?;
    let declared = inst.radii_vec();
    let (mode, verdict) = match (&inst.radii, generalized) {
        (Radii::Single(eps), false) => (
            "shared",
            convexity::check_convex(&inst.graph, &inst.truth, &inst.beta, &inst.gamma, eps),
        ),
        _ => (
            "per-cluster",
            convexity::check_convex_generalized(
                &inst.graph,
                &inst.truth,
                &inst.beta,
                &inst.gamma,
                &declared,
            ),
        ),
    };
    let verdict = verdict.map_err(|e| CliError::Input(e.to_string()))?;
    let min_radii = convexity::min_radii(&inst.graph, &inst.truth).ok();
    let violated: Vec<String> = verdict
        .violated_properties()
        .iter()
        .map(|p| p.to_string())
        .collect();
    let report = CheckReport {
        family: inst.family.name().to_string(),
        n: inst.n(),
        k: inst.k(),
        beta: format_rational(&inst.beta),
        gamma: format_rational(&inst.gamma),
        mode: mode.to_string(),
        declared_radii: rat_strings(&declared),
        is_convex: verdict.is_convex(),
        violated_properties: violated.clone(),
        violations: verdict.violations().iter().map(|v| v.to_string()).collect(),
        min_radii: min_radii.as_ref().map(|m| rat_strings(m)),
        radii_at_minimum: min_radii.as_ref().map(|m| *m == declared),
    };
    print_report(&report, None)?;
    if report.is_convex {
        Ok(0)
    } else {
        emit_error(
            "not-convex",
            &format!("violated properties: {}", violated.join(", ")),
        );
        Ok(2)
    }
}

// ------------------------------------------------------------ recover ----

struct RecoverArgs<'a> {
    instance: &'a Path,
    mode: &'a str,
    seed_policy: &'a str,
    paranoid: bool,
    debug_checks: bool,
    naive: bool,
    report: Option<&'a Path>,
}

#[derive(Serialize)]
struct PhasesOut {
    cut_edge: u64,
    separator: u64,
    new_seed: u64,
}

impl PhasesOut {
    fn from(p: &PhaseScq) -> Self {
        PhasesOut { cut_edge: p.cut_edge, separator: p.separator, new_seed: p.new_seed }
    }
}

#[derive(Serialize)]
struct BudgetOut {
    search_term: u64,
    separator_term: u64,
    discovery_term: u64,
    total: u64,
}

impl BudgetOut {
    fn from(b: &ScqBudget) -> Self {
        BudgetOut {
            search_term: b.search_term,
            separator_term: b.separator_term,
            discovery_term: b.discovery_term,
            total: b.total(),
        }
    }
}

#[derive(Serialize)]
struct RecoverOut {
    family: String,
    n: usize,
    k: usize,
    mode: String,
    seed_policy: String,
    beta: String,
    gamma: String,
    /// The radii the recovery actually ran with.
    radii: Vec<String>,
    guessed_param: Option<String>,
    guess: Option<String>,
    rounds: Option<u32>,
    learned_radii: Option<Vec<String>>,
    /// Seed queries spent learning radii before recovery started.
    radii_seed_used: Option<u64>,
    exact: bool,
    scq: u64,
    seed: u64,
    phases: Option<PhasesOut>,
    iterations: Option<Vec<usize>>,
    budget: Option<BudgetOut>,
    within_budget: Option<bool>,
    labels: Vec<usize>,
}

/// Intermediate result of one recovery mode, before report assembly.
struct ModeOutcome {
    radii_used: Vec<Rat>,
    labels: Vec<usize>,
    phases: Option<PhaseScq>,
    iterations: Option<Vec<usize>>,
    budget: Option<ScqBudget>,
    guessed_param: Option<&'static str>,
    guess: Option<Rat>,
    rounds: Option<u32>,
    learned_radii: Option<Vec<Rat>>,
    radii_seed_used: Option<u64>,
}

impl ModeOutcome {
    fn from_recovery(radii_used: Vec<Rat>, budget: ScqBudget, rep: &RecoveryReport) -> Self {
        ModeOutcome {
            radii_used,
            labels: rep.clustering.labels().to_vec(),
            phases: Some(rep.phases),
            iterations: Some(rep.iterations.clone()),
            budget: Some(budget),
            guessed_param: None,
            guess: None,
            rounds: None,
            learned_radii: None,
            radii_seed_used: None,
        }
    }
}

/// Soft recovery failures exit 3; parameter misuse stays a hard input error.
fn recovery_failure(e: RecoveryError) -> Result<i32, CliError> {
    match e {
        RecoveryError::BadParams { .. } => Err(CliError::Input(e.to_string())),
        other => {
            emit_error("recovery-failed", &other.to_string());
            Ok(3)
        }
    }
}

fn compute_budget(inst: &Instance) -> Result<ScqBudget, CliError> {
    let cap = inst.n().max(64);
    recovery::scq_budget(&inst.graph, &inst.beta, &inst.gamma, inst.k(), cap)
        .map_err(|e| CliError::Input(e.to_string()))
}

fn cmd_recover(args: RecoverArgs<'_>) -> Result<i32, CliError> {
    let inst = load_instance(args.instance)?;
    let policy = parse_policy(args.seed_policy)?;
    let mut oracle = OracleSession::new(inst.truth.clone(), policy)
        .map_err(|e| CliError::Input(e.to_string()))?;
    let opts = RecoveryOptions {
        debug_checks: args.debug_checks,
        naive_find_new_seed: args.naive,
        collect_trace: false,
    };

    let outcome = match args.mode {
        "identical" => {
            let eps = match &inst.radii {
                Radii::Single(e) => e.clone(),
                Radii::PerCluster(_) => {
                    return Err(CliError::Input(
                        "mode identical needs a shared radius; this instance declares \
                         per-cluster radii (use --mode multi)"
                            .to_string(),
                    ))
                }
            };
            let budget = compute_budget(&inst)?;
            match recovery::recover_clustering(
                &inst.graph,
                &eps,
                &inst.beta,
                &inst.gamma,
                &inst.seeds,
                &opts,
                &mut oracle,
            ) {
                Ok(rep) => ModeOutcome::from_recovery(vec![eps; inst.k()], budget, &rep),
                Err(e) => return recovery_failure(e),
            }
        }
        "multi" => {
            let radii = inst.radii_vec();
            let budget = compute_budget(&inst)?;
            match recovery::recover_clustering_multi(
                &inst.graph,
                &radii,
                &inst.beta,
                &inst.gamma,
                &inst.seeds,
                &opts,
                &mut oracle,
            ) {
                Ok(rep) => ModeOutcome::from_recovery(radii, budget, &rep),
                Err(e) => return recovery_failure(e),
            }
        }
        "learn-radii" => {
            let learned = get_epsilons(&inst.graph, &mut oracle)
                .map_err(|e| CliError::Input(e.to_string()))?;
            let budget = compute_budget(&inst)?;
            match recovery::recover_clustering_multi(
                &inst.graph,
                &learned.radii,
                &inst.beta,
                &inst.gamma,
                &inst.seeds,
                &opts,
                &mut oracle,
            ) {
                Ok(rep) => {
                    let mut out =
                        ModeOutcome::from_recovery(learned.radii.clone(), budget, &rep);
                    out.learned_radii = Some(learned.radii);
                    out.radii_seed_used = Some(learned.seed_used);
                    out
                }
                Err(e) => return recovery_failure(e),
            }
        }
        "guess-beta" | "guess-gamma" => {
            let base = match &inst.radii {
                Radii::Single(e) => BaseMode::IdenticalRadii(e.clone()),
                Radii::PerCluster(v) => BaseMode::VectorRadii(v.clone()),
            };
            let (known, unknown, name) = if args.mode == "guess-beta" {
                (&inst.gamma, UnknownParam::Beta, "beta")
            } else {
                (&inst.beta, UnknownParam::Gamma, "gamma")
            };
            match paramsearch::recover_unknown_param(
                &inst.graph,
                known,
                unknown,
                &base,
                &inst.seeds,
                &opts,
                args.paranoid,
                &mut oracle,
            ) {
                Ok(rep) => ModeOutcome {
                    radii_used: inst.radii_vec(),
                    labels: rep.clustering.labels().to_vec(),
                    phases: None,
                    iterations: None,
                    budget: None,
                    guessed_param: Some(name),
                    guess: Some(rep.guess),
                    rounds: Some(rep.rounds),
                    learned_radii: rep.learned_radii,
                    radii_seed_used: None,
                },
                Err(ParamSearchError::GuessUnderflow { rounds }) => {
                    emit_error(
                        "recovery-failed",
                        &format!("no dyadic guess matched the truth after {rounds} rounds"),
                    );
                    return Ok(3);
                }
                Err(e) => return Err(CliError::Input(e.to_string())),
            }
        }
        other => {
            return Err(CliError::Input(format!(
                "unknown mode {other:?}; valid modes: identical, multi, learn-radii, \
                 guess-beta, guess-gamma"
            )))
        }
    };

    let counts = oracle.counts();
    let exact = outcome.labels == inst.truth.labels();
    let within_budget = outcome.budget.as_ref().map(|b| counts.scq <= b.total());
    let report = RecoverOut {
        family: inst.family.name().to_string(),
        n: inst.n(),
        k: inst.k(),
        mode: args.mode.to_string(),
        seed_policy: args.seed_policy.to_string(),
        beta: format_rational(&inst.beta),
        gamma: format_rational(&inst.gamma),
        radii: rat_strings(&outcome.radii_used),
        guessed_param: outcome.guessed_param.map(str::to_string),
        guess: outcome.guess.as_ref().map(format_rational),
        rounds: outcome.rounds,
        learned_radii: outcome.learned_radii.as_deref().map(rat_strings),
        radii_seed_used: outcome.radii_seed_used,
        exact,
        scq: counts.scq,
        seed: counts.seed,
        phases: outcome.phases.as_ref().map(PhasesOut::from),
        iterations: outcome.iterations,
        budget: outcome.budget.as_ref().map(BudgetOut::from),
        within_budget,
        labels: outcome.labels,
    };
    print_report(&report, args.report)?;
    if exact {
        Ok(0)
    } else {
        emit_error("recovery-mismatch", "recovered labels differ from the declared truth");
        Ok(3)
    }
}

// -------------------------------------------------------- learn-radii ----

#[derive(Serialize)]
struct LearnRadiiOut {
    family: String,
    n: usize,
    k: usize,
    seed_policy: String,
    radii: Vec<String>,
    seed_used: u64,
    mst_edge_count: usize,
    declared_radii: Vec<String>,
    matches_declared: bool,
}

fn cmd_learn_radii(
    instance: &Path,
    seed_policy: &str,
    report: Option<&Path>,
) -> Result<i32, CliError> {
    let inst = load_instance(instance)?;
    let policy = parse_policy(seed_policy)?;
    let mut oracle = OracleSession::new(inst.truth.clone(), policy)
        .map_err(|e| CliError::Input(e.to_string()))?;
    let learned =
        get_epsilons(&inst.graph, &mut oracle).map_err(|e| CliError::Input(e.to_string()))?;
    let declared = inst.radii_vec();
    let out = LearnRadiiOut {
        family: inst.family.name().to_string(),
        n: inst.n(),
        k: inst.k(),
        seed_policy: seed_policy.to_string(),
        radii: rat_strings(&learned.radii),
        seed_used: learned.seed_used,
        mst_edge_count: learned.mst_edge_count,
        declared_radii: rat_strings(&declared),
        matches_declared: learned.radii == declared,
    };
    print_report(&out, report)?;
    Ok(0)
}

// -------------------------------------------------------------- bench ----

#[derive(Deserialize)]
struct BenchSuite {
    format_version: u32,
    entries: Vec<BenchEntry>,
}

#[derive(Deserialize)]
struct BenchEntry {
    family: String,
    #[serde(default)]
    n: Option<usize>,
    #[serde(default)]
    k: Option<usize>,
    #[serde(default)]
    rng_seed: u64,
}

#[derive(Serialize)]
struct BenchSummary {
    rows: usize,
    out: String,
}

fn cmd_bench(suite: &Path, out_dir: &Path) -> Result<i32, CliError> {
    let text = fs::read_to_string(suite)
        .map_err(|e| CliError::Io(format!("read {}: {e}", suite.display())))?;
    let suite: BenchSuite = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", suite.display())))?;
    if suite.format_version != 1 {
        return Err(CliError::Input(format!(
            "unsupported suite format_version {}",
            suite.format_version
        )));
    }

    let mut csv = String::from(
        "family,n,k,beta,gamma,dens,pstar_sep,pstar_disc,scq,seed,budget,ok\n",
    );
    for entry in &suite.entries {
        let fam = Family::from_name(&entry.family).ok_or_else(|| {
            CliError::Input(format!("unknown family {:?} in suite", entry.family))
        })?;
        let mut params = GenParams::new(entry.rng_seed);
        params.n = entry.n;
        params.k = entry.k;
        let inst = generate(fam, &params).map_err(|e| CliError::Input(e.to_string()))?;
        csv.push_str(&bench_row(&inst)?);
    }

    fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Io(format!("create {}: {e}", out_dir.display())))?;
    let csv_path = out_dir.join("bench.csv");
    fs::write(&csv_path, &csv)
        .map_err(|e| CliError::Io(format!("write {}: {e}", csv_path.display())))?;
    let summary = BenchSummary {
        rows: suite.entries.len(),
        out: csv_path.display().to_string(),
    };
    print_report(&summary, None)?;
    Ok(0)
}

/// Runs one suite entry at the first-by-id policy and formats its CSV row.
fn bench_row(inst: &Instance) -> Result<String, CliError> {
    let cap = inst.n().max(64);
    let profile = PackingProfile::compute_with_cap(&inst.graph, cap)
        .map_err(|e| CliError::Input(e.to_string()))?;
    let sep_eta = inst.beta.clone() * inst.gamma.clone();
    let disc_eta = sep_eta.clone() / (int(2) + inst.gamma.clone());
    let pstar_sep = profile.pstar(&sep_eta).map_err(|e| CliError::Input(e.to_string()))?;
    let pstar_disc = profile.pstar(&disc_eta).map_err(|e| CliError::Input(e.to_string()))?;
    let budget = compute_budget(inst)?;

    let mut oracle = OracleSession::new(inst.truth.clone(), SeedPolicy::FirstById)
        .map_err(|e| CliError::Input(e.to_string()))?;
    let opts = RecoveryOptions::default();
    let result = match &inst.radii {
        Radii::Single(eps) => recovery::recover_clustering(
            &inst.graph,
            eps,
            &inst.beta,
            &inst.gamma,
            &inst.seeds,
            &opts,
            &mut oracle,
        ),
        Radii::PerCluster(v) => recovery::recover_clustering_multi(
            &inst.graph,
            v,
            &inst.beta,
            &inst.gamma,
            &inst.seeds,
            &opts,
            &mut oracle,
        ),
    };
    let ok = match result {
        Ok(rep) => rep.clustering.labels() == inst.truth.labels(),
        Err(_) => false,
    };
    let counts = oracle.counts();
    Ok(format!(
        "{},{},{},{},{},{:.4},{},{},{},{},{},{}\n",
        inst.family.name(),
        inst.n(),
        inst.k(),
        format_rational(&inst.beta),
        format_rational(&inst.gamma),
        profile.dens(),
        pstar_sep,
        pstar_disc,
        counts.scq,
        counts.seed,
        budget.total(),
        ok
    ))
}
