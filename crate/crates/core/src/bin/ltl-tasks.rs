//! Command-line front end: sampling, progression, counting, solving,
//! episode running, evaluation and export.
//!
//! Every command is a pure function of its arguments and `--seed`; the
//! resolved command line is echoed to stderr so any output can be rebuilt.

use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde::Serialize;
use serde_json::json;

use ltl_tasks::envs::{Action, EnvConfig, EnvKind};
use ltl_tasks::export::{formula_to_graph, observation, prefix_tokens, NodeFeatureMode, View};
use ltl_tasks::ltl::random::{random_formula, random_lasso};
use ltl_tasks::ltl::{eval_lasso, parse, progress, render, simplify, Notation};
use ltl_tasks::product::{
    enumerate_product, run_episode, Caps, EpisodeRecord, ExplicitMDP, Outcome, Policy,
    ProductState, RandomPolicy,
};
use ltl_tasks::rng::{derive_seed, stream, Stream, DEFAULT_SEED};
use ltl_tasks::solve::{
    evaluate, evaluate_policy, myopic_optimum, q_learning, value_iteration, Metrics, QParams,
    DEFAULT_BUDGET, DEFAULT_TOL,
};
use ltl_tasks::taskgen::{count_tasks, preset, TaskDistribution, PRESETS};
use ltl_tasks::{Error, Formula, Proposition, Result, TruthAssignment, Vocabulary};

#[derive(Parser, Debug)]
#[command(
    name = "ltl-tasks",
    version,
    about = "LTL task generation, progression and solving"
)]
struct Cli {
    /// Master seed for every random choice.
    #[arg(long, global = true, env = "LTL2A_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Draw formulas from a task distribution.
    Sample {
        /// Preset name, task-set JSON file, or `;`-separated formulas.
        #[arg(long, default_value = "letterworld-po")]
        tasks: String,
        /// Number of formulas.
        #[arg(short, default_value_t = 10)]
        n: u64,
    },
    /// Progress a formula through assignments (arguments or stdin lines).
    Progress {
        formula: String,
        /// Assignments such as `a`, `a,b` or `{}`.
        assignments: Vec<String>,
    },
    /// Randomized check that progression preserves lasso semantics.
    Check {
        /// Random (formula, lasso, position) cases.
        #[arg(long, default_value_t = 10_000)]
        cases: u64,
        /// Worker threads; results do not depend on this.
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Exact number of distinct tasks in a distribution's support.
    Count {
        /// Named task distribution.
        #[arg(long, conflicts_with = "tasks")]
        preset: Option<String>,
        /// Preset name, task-set JSON file, or `;`-separated formulas.
        #[arg(long)]
        tasks: Option<String>,
    },
    /// Value iteration on the product of an environment and a task set.
    Solve {
        #[command(flatten)]
        env: EnvArgs,
        /// Preset name, task-set JSON file, or `;`-separated formulas.
        #[arg(long)]
        tasks: String,
        /// Emit the per-state table as CSV.
        #[arg(long)]
        csv: bool,
    },
    /// Run episodes under a named policy.
    Run {
        #[command(flatten)]
        env: EnvArgs,
        /// Preset name, task-set JSON file, or `;`-separated formulas.
        #[arg(long)]
        tasks: String,
        #[command(flatten)]
        policy: PolicyArgs,
        /// Episodes to run (episode i uses child stream i).
        #[arg(long, default_value_t = 1)]
        episodes: usize,
    },
    /// Aggregate episode metrics.
    Eval {
        #[command(flatten)]
        env: EnvArgs,
        /// Preset name, task-set JSON file, or `;`-separated formulas.
        #[arg(long)]
        tasks: String,
        #[command(flatten)]
        policy: PolicyArgs,
        /// Episodes to evaluate.
        #[arg(long, default_value_t = 100)]
        episodes: usize,
        /// Worker threads; results do not depend on this.
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Emit a CSV header and row.
        #[arg(long)]
        csv: bool,
    },
    /// Export formulas or observations as JSON.
    Export {
        #[command(subcommand)]
        what: ExportCommand,
    },
}

#[derive(Args, Debug)]
struct EnvArgs {
    #[arg(long, value_parser = ["letterworld", "lockedrooms", "bootcamp"])]
    env: String,
    /// Discount factor instead of the environment default.
    #[arg(long)]
    gamma_override: Option<f64>,
    /// Episode length instead of the environment default.
    #[arg(long)]
    timeout: Option<usize>,
    /// LetterWorld letter placement; random per episode if absent.
    #[arg(long)]
    placement_seed: Option<u64>,
}

#[derive(Args, Debug)]
struct PolicyArgs {
    /// Policy to follow; `optimal` solves the product exactly first.
    #[arg(long, value_enum, default_value_t = PolicyName::Random)]
    policy: PolicyName,
    /// Q-learning training episodes.
    #[arg(long, default_value_t = 10_000)]
    train_episodes: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PolicyName {
    Optimal,
    MyopicOptimal,
    Random,
    Qlearn,
}

#[derive(Subcommand, Debug)]
enum ExportCommand {
    /// Labeled AST graph.
    Graph {
        #[arg(long)]
        formula: String,
        #[command(flatten)]
        features: FeatureArgs,
    },
    /// Prefix-notation token stream.
    Prefix {
        #[arg(long)]
        formula: String,
        #[command(flatten)]
        features: FeatureArgs,
    },
    /// LetterWorld grid observation of the initial state.
    Observation {
        /// Letter placement; defaults to `--seed`.
        #[arg(long)]
        placement_seed: Option<u64>,
        /// Whole grid, or a crop centered on the agent.
        #[arg(long, value_enum, default_value_t = ViewArg::Absolute)]
        view: ViewArg,
        /// `onehot`, `random:DIM` or `random:DIM:SEED`.
        #[arg(long, default_value = "onehot")]
        features: String,
    },
}

#[derive(Args, Debug)]
struct FeatureArgs {
    /// `onehot`, `random:DIM` or `random:DIM:SEED`.
    #[arg(long, default_value = "onehot")]
    features: String,
    /// Comma-separated vocabulary; defaults to the formula's propositions.
    #[arg(long)]
    vocab: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ViewArg {
    Absolute,
    Egocentric,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    eprintln!("# {}", echo(cli.seed));
    match dispatch(&cli).and_then(|text| emit(&cli, &text)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

/// The command line with the resolved seed made explicit.
fn echo(seed: u64) -> String {
    let mut parts = vec!["ltl-tasks".to_string(), "--seed".into(), seed.to_string()];
    let mut args = std::env::args().skip(1);
    while let Some(a) = args.next() {
        if a == "--seed" {
            args.next();
        } else if !a.starts_with("--seed=") {
            parts.push(if a.is_empty() || a.contains(char::is_whitespace) {
                format!("{a:?}")
            } else {
                a
            });
        }
    }
    parts.join(" ")
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn dispatch(cli: &Cli) -> Result<String> {
    let seed = cli.seed;
    match &cli.command {
        Command::Sample { tasks, n } => sample(cli, &resolve_tasks(tasks, seed)?, *n),
        Command::Progress {
            formula,
            assignments,
        } => progress_cmd(cli, formula, assignments),
        Command::Check { cases, workers } => check(cli, *cases, *workers),
        Command::Count { preset, tasks } => {
            let tasks_arg = preset
                .as_ref()
                .or(tasks.as_ref())
                .ok_or_else(|| Error::InvalidParams("pass --preset or --tasks".into()))?;
            let dist = resolve_tasks(tasks_arg, seed)?;
            let count = count_tasks(&dist)?;
            Ok(if cli.json {
                to_json(
                    &json!({ "tasks": tasks_arg, "kind": dist.label(), "count": count.to_string() }),
                )?
            } else {
                format!("{count}\n")
            })
        }
        Command::Solve { env, tasks, csv } => {
            let dist = resolve_tasks(tasks, seed)?;
            solve(cli, &env_config(env, &dist)?, &dist, *csv)
        }
        Command::Run {
            env,
            tasks,
            policy,
            episodes,
        } => {
            let dist = resolve_tasks(tasks, seed)?;
            let config = env_config(env, &dist)?;
            let policy = build_policy(&config, &dist, policy, seed)?;
            let run_seed = derive_seed(seed, "run");
            let records = (0..*episodes)
                .map(|i| {
                    run_episode(
                        &config,
                        &dist,
                        policy.as_ref(),
                        &mut stream(run_seed, i as u64),
                        None,
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            if cli.json {
                to_json(&records)
            } else {
                Ok(records
                    .iter()
                    .enumerate()
                    .map(|(i, r)| episode_text(i, r))
                    .collect())
            }
        }
        Command::Eval {
            env,
            tasks,
            policy,
            episodes,
            workers,
            csv,
        } => {
            let dist = resolve_tasks(tasks, seed)?;
            let config = env_config(env, &dist)?;
            let policy = build_policy(&config, &dist, policy, seed)?;
            let m = evaluate(
                &config,
                &dist,
                policy.as_ref(),
                *episodes,
                seed,
                *workers,
                None,
            )?;
            if *csv {
                Ok(format!("{}\n{}\n", Metrics::CSV_HEADER, m.csv_row()))
            } else if cli.json {
                to_json(&m)
            } else {
                Ok(format!(
                    "{} / {} / {}: n={} success={} failure={} timeout={} discounted={} total={} ci90={}\n",
                    m.env,
                    m.task_dist,
                    m.policy,
                    m.n,
                    m.success_rate,
                    m.failure_rate,
                    m.timeout_rate,
                    m.mean_discounted_return,
                    m.mean_total_reward,
                    m.ci90
                ))
            }
        }
        Command::Export { what } => export(what, seed),
    }
}

/// A preset name, a JSON distribution file, or `;`-separated formulas
/// (uniform).
fn resolve_tasks(tasks_arg: &str, seed: u64) -> Result<TaskDistribution> {
    if PRESETS.contains(&tasks_arg) {
        return Ok(preset(tasks_arg)?.with_seed(seed));
    }
    let path = std::path::Path::new(tasks_arg);
    if path.extension().is_some_and(|e| e == "json") && path.is_file() {
        let dist: TaskDistribution = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        dist.validate()?;
        return Ok(dist.with_seed(seed));
    }
    let formulas = tasks_arg
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(parse)
        .collect::<Result<Vec<_>>>()?;
    if formulas.is_empty() {
        return Err(Error::InvalidParams(format!("no tasks in `{tasks_arg}`")));
    }
    TaskDistribution::uniform(formulas, seed)
}

fn env_config(args: &EnvArgs, dist: &TaskDistribution) -> Result<EnvConfig> {
    let mut config = EnvConfig::named(&args.env, &dist.vocabulary())?;
    if let EnvKind::LetterWorld { placement_seed, .. } = &mut config.kind {
        *placement_seed = args.placement_seed;
    }
    if let Some(g) = args.gamma_override {
        config.gamma = g;
    }
    if let Some(t) = args.timeout {
        config.timeout = t;
    }
    config.validate()?;
    Ok(config)
}

fn support(dist: &TaskDistribution) -> Result<Vec<(Formula, f64)>> {
    dist.explicit_support().ok_or_else(|| {
        Error::NotEnumerable(format!(
            "`{}` tasks have no explicit support; pass formulas",
            dist.label()
        ))
    })
}

/// Greedy policy over an enumerated product.
struct TablePolicy {
    mdp: ExplicitMDP,
    policy: Vec<Option<usize>>,
}

impl Policy for TablePolicy {
    fn name(&self) -> String {
        "optimal".into()
    }

    fn act(&self, _config: &EnvConfig, state: &ProductState, _rng: &mut Stream) -> Result<Action> {
        let a = self
            .mdp
            .state_index(state)
            .and_then(|i| self.policy[i])
            .unwrap_or(0);
        Ok(self.mdp.actions[a].clone())
    }
}

fn build_policy(
    config: &EnvConfig,
    dist: &TaskDistribution,
    args: &PolicyArgs,
    seed: u64,
) -> Result<Box<dyn Policy>> {
    Ok(match args.policy {
        PolicyName::Random => Box::new(RandomPolicy),
        PolicyName::Optimal => {
            let mdp = enumerate_product(config, &support(dist)?, Caps::default())?;
            let policy = value_iteration(&mdp, DEFAULT_TOL).policy;
            Box::new(TablePolicy { mdp, policy })
        }
        PolicyName::MyopicOptimal => {
            let sol = myopic_optimum(config, &support(dist)?, DEFAULT_BUDGET)?;
            eprintln!(
                "# myopic optimum: expected total reward {} ({} search nodes)",
                sol.expected_total_reward, sol.nodes
            );
            Box::new(sol.policy)
        }
        PolicyName::Qlearn => {
            let table = q_learning(
                config,
                dist,
                &QParams {
                    episodes: args.train_episodes,
                    seed,
                    ..QParams::default()
                },
            )?;
            eprintln!(
                "# q-learning: {} episodes, {} steps, {} states",
                table.episodes,
                table.steps,
                table.len()
            );
            Box::new(table)
        }
    })
}

fn sample(cli: &Cli, dist: &TaskDistribution, n: u64) -> Result<String> {
    let formulas = (0..n)
        .map(|i| dist.sample(i).map(|f| render(&f, Notation::Infix)))
        .collect::<Result<Vec<_>>>()?;
    if cli.json {
        to_json(&json!({ "kind": dist.label(), "seed": dist.seed, "formulas": formulas }))
    } else {
        Ok(formulas.iter().map(|f| format!("{f}\n")).collect())
    }
}

fn progress_cmd(cli: &Cli, formula: &str, assignments: &[String]) -> Result<String> {
    let lines: Vec<String> = if assignments.is_empty() {
        std::io::stdin()
            .lock()
            .lines()
            .collect::<std::io::Result<_>>()?
    } else {
        assignments.to_vec()
    };
    let mut f = simplify(&parse(formula)?);
    let mut steps = Vec::new();
    for line in &lines {
        let sigma = TruthAssignment::parse(line)?;
        f = progress(&sigma, &f);
        steps.push((sigma, render(&f, Notation::Infix)));
    }
    if cli.json {
        let steps: Vec<_> = steps
            .iter()
            .map(|(s, r)| json!({ "assignment": s, "residual": r }))
            .collect();
        to_json(&json!({ "formula": render(&parse(formula)?, Notation::Infix), "steps": steps }))
    } else {
        Ok(steps.iter().map(|(_, r)| format!("{r}\n")).collect())
    }
}

/// One progression case: the formula, the trace and the position checked.
fn check_case(seed: u64, case: u64) -> Option<String> {
    let mut rng = stream(derive_seed(seed, "check"), case);
    let n = rng.random_range(1..=5usize);
    let props: Vec<Proposition> = Vocabulary::letters(n).iter().cloned().collect();
    let f = random_formula(&mut rng, 15, &props);
    let trace = random_lasso(&mut rng, &props, 4, 3);
    let i = rng.random_range(0..=3);
    let lhs = eval_lasso(&trace, i, &f);
    let rhs = eval_lasso(&trace, i + 1, &progress(trace.at(i), &f));
    (lhs != rhs).then(|| {
        format!(
            "case {case}: {} at position {i}",
            render(&f, Notation::Infix)
        )
    })
}

fn check(cli: &Cli, cases: u64, workers: usize) -> Result<String> {
    let workers = workers.clamp(1, cases.max(1) as usize) as u64;
    let mut failures: Vec<(u64, String)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    (w..cases)
                        .step_by(workers as usize)
                        .filter_map(|c| check_case(cli.seed, c).map(|m| (c, m)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("check worker panicked"))
            .collect()
    });
    failures.sort();
    let passed = cases - failures.len() as u64;
    let out = if cli.json {
        let failures: Vec<_> = failures.iter().map(|(_, m)| m).collect();
        to_json(&json!({ "cases": cases, "passed": passed, "failures": failures }))?
    } else {
        let mut s = format!("{passed}/{cases} pass\n");
        for (_, m) in &failures {
            s += &format!("FAIL {m}\n");
        }
        s
    };
    if failures.is_empty() {
        Ok(out)
    } else {
        eprint!("{out}");
        Err(Error::InvalidParams(format!(
            "{} progression cases failed",
            failures.len()
        )))
    }
}

fn solve(cli: &Cli, config: &EnvConfig, dist: &TaskDistribution, csv: bool) -> Result<String> {
    let tasks = support(dist)?;
    let mdp = enumerate_product(config, &tasks, Caps::default())?;
    let sol = value_iteration(&mdp, DEFAULT_TOL);
    let pv = evaluate_policy(&mdp, &sol.policy);
    let (mut success, mut failure, mut disc, mut total) = (0.0, 0.0, 0.0, 0.0);
    for &(s, p) in &mdp.initial {
        match pv[s].outcome {
            Outcome::Success => success += p,
            Outcome::Failure => failure += p,
            Outcome::Timeout => {}
        }
        disc += p * pv[s].discounted;
        total += p * pv[s].total;
    }
    let action = |s: usize| sol.policy[s].map(|a| mdp.actions[a].to_string());
    if csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.into());
        w.write_record(["index", "env_state", "task", "terminal", "value", "action"])
            .map_err(io)?;
        for (i, st) in mdp.states.iter().enumerate() {
            w.write_record([
                i.to_string(),
                st.env.to_string(),
                render(&st.task, Notation::Infix),
                mdp.terminal[i].to_string(),
                sol.values[i].to_string(),
                action(i).unwrap_or_default(),
            ])
            .map_err(io)?;
        }
        let out = String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.into_error()))?)
            .expect("CSV of UTF-8 fields");
        return Ok(out);
    }
    let metrics = json!({
        "success_rate": success,
        "failure_rate": failure,
        "timeout_rate": 1.0 - success - failure,
        "mean_discounted_return": disc,
        "mean_total_reward": total,
    });
    if cli.json {
        let states: Vec<_> = mdp
            .states
            .iter()
            .enumerate()
            .map(|(i, st)| {
                json!({
                    "index": i,
                    "env_state": st.env,
                    "task": st.task,
                    "terminal": mdp.terminal[i],
                    "value": sol.values[i],
                    "action": action(i),
                })
            })
            .collect();
        to_json(&json!({
            "schema": "ltl-tasks/solve/v1",
            "env": config,
            "tasks": tasks.iter().map(|(f, w)| json!({ "formula": f, "weight": w })).collect::<Vec<_>>(),
            "states": mdp.len(),
            "sweeps": sol.residuals.len(),
            "initial_value": sol.initial_value(&mdp),
            "metrics": metrics,
            "values": states,
        }))
    } else {
        let mut out = format!(
            "{} product states, {} sweeps, initial value {}\n\
             success {success} failure {failure} discounted {disc} total {total}\n",
            mdp.len(),
            sol.residuals.len(),
            sol.initial_value(&mdp)
        );
        for &(s, p) in &mdp.initial {
            out += &format!(
                "  {} (p={p}): value {} action {}\n",
                render(&mdp.states[s].task, Notation::Infix),
                sol.values[s],
                action(s).unwrap_or_else(|| "-".into())
            );
        }
        Ok(out)
    }
}

fn episode_text(i: usize, r: &EpisodeRecord) -> String {
    let mut out = format!(
        "episode {i}: {} -> {:?} after {} steps, discounted {} total {}\n",
        render(&r.initial_task, Notation::Infix),
        r.outcome,
        r.steps.len(),
        r.discounted_return,
        r.total_reward
    );
    for s in &r.steps {
        out += &format!(
            "  {} {} {} {}\n",
            s.action,
            s.label,
            render(&s.task, Notation::Infix),
            s.reward
        );
    }
    out
}

fn feature_mode(spec: &str) -> Result<NodeFeatureMode> {
    let bad = || Error::InvalidParams(format!("bad feature mode `{spec}`"));
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        ["onehot"] => Ok(NodeFeatureMode::OneHot),
        ["random", dim] | ["random", dim, _] => Ok(NodeFeatureMode::RandomFixed {
            dim: dim.parse().map_err(|_| bad())?,
            seed: match parts.get(2) {
                Some(s) => s.parse().map_err(|_| bad())?,
                None => DEFAULT_SEED,
            },
        }),
        _ => Err(bad()),
    }
}

fn export_vocab(f: &Formula, vocab: &Option<String>) -> Result<Vocabulary> {
    match vocab {
        Some(v) => Vocabulary::new(v.split(',').map(str::trim).filter(|s| !s.is_empty())),
        None => {
            let mut props = f.propositions();
            props.sort();
            Vocabulary::new(props.iter().map(|p| p.name()))
        }
    }
}

fn export(what: &ExportCommand, seed: u64) -> Result<String> {
    match what {
        ExportCommand::Graph { formula, features } => {
            let f = parse(formula)?;
            let vocab = export_vocab(&f, &features.vocab)?;
            to_json(&formula_to_graph(
                &f,
                &vocab,
                feature_mode(&features.features)?,
            )?)
        }
        ExportCommand::Prefix { formula, features } => {
            let f = parse(formula)?;
            let vocab = export_vocab(&f, &features.vocab)?;
            to_json(&prefix_tokens(&f, &vocab)?)
        }
        ExportCommand::Observation {
            placement_seed,
            view,
            features,
        } => {
            let config = EnvConfig::letter_world(Some(placement_seed.unwrap_or(seed)));
            let state = config.fixed_initial_state()?;
            let view = match view {
                ViewArg::Absolute => View::Absolute,
                ViewArg::Egocentric => View::Egocentric,
            };
            to_json(&observation(
                &config,
                &state,
                feature_mode(features)?,
                view,
            )?)
        }
    }
}
