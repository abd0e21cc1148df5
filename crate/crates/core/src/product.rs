//! The taskable product MDP: environment state × progressed formula.
//!
//! Reward is +1 on the step whose label progresses the task to `true`, −1
//! when it progresses to `false`, 0 otherwise; both outcomes end the
//! episode. Returns are discounted with `k = 0` at the first action. A
//! timeout ends an episode with no terminal reward.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::envs::{Action, EnvConfig, EnvState, LetterLayout};
use crate::error::{Error, Result};
use crate::ltl::{closure, progress, render, simplify, Formula, Notation, TruthAssignment};
use crate::rng::Stream;
use crate::taskgen::TaskDistribution;

pub const EPISODE_SCHEMA: &str = "ltl-tasks/episode/v1";

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProductState {
    pub env: EnvState,
    /// Always simplified.
    pub task: Formula,
}

impl ProductState {
    pub fn new(env: EnvState, task: &Formula) -> Self {
        ProductState {
            env,
            task: simplify(task),
        }
    }

    pub fn is_terminal(&self) -> bool {
        self.task.is_resolved()
    }
}

/// Reward for reaching residual `task`.
pub fn reward_of(task: &Formula) -> f64 {
    match task {
        Formula::True => 1.0,
        Formula::False => -1.0,
        _ => 0.0,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Transition {
    pub next: ProductState,
    pub label: TruthAssignment,
    pub reward: f64,
    pub terminal: bool,
}

pub fn product_step(config: &EnvConfig, st: &ProductState, action: &Action) -> Result<Transition> {
    if st.is_terminal() {
        return Err(Error::TerminalStep);
    }
    let (env, label) = config.transition(&st.env, action)?;
    let task = progress(&label, &st.task);
    let reward = reward_of(&task);
    let terminal = task.is_resolved();
    Ok(Transition {
        next: ProductState { env, task },
        label,
        reward,
        terminal,
    })
}

/// A (possibly stochastic) decision rule over product states.
pub trait Policy: Sync {
    fn name(&self) -> String;
    fn act(&self, config: &EnvConfig, state: &ProductState, rng: &mut Stream) -> Result<Action>;
}

/// Uniformly random actions.
pub struct RandomPolicy;

impl Policy for RandomPolicy {
    fn name(&self) -> String {
        "random".into()
    }

    fn act(&self, config: &EnvConfig, _state: &ProductState, rng: &mut Stream) -> Result<Action> {
        Ok(crate::envs::random_action(config, rng))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Success,
    Failure,
    Timeout,
}

#[derive(Clone, Debug, Serialize)]
pub struct StepRecord {
    pub env_state: EnvState,
    pub action: Action,
    pub label: TruthAssignment,
    pub task: Formula,
    pub reward: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EpisodeRecord {
    pub schema: &'static str,
    pub env: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub layout: Option<LetterLayout>,
    pub initial_task: Formula,
    pub steps: Vec<StepRecord>,
    pub outcome: Outcome,
    pub discounted_return: f64,
    pub total_reward: f64,
}

impl EpisodeRecord {
    pub fn labels(&self) -> Vec<TruthAssignment> {
        self.steps.iter().map(|s| s.label.clone()).collect()
    }
}

/// Samples a task, resets the environment and runs `policy` until the task
/// resolves or `timeout` (default: the config's) steps have passed.
pub fn run_episode(
    config: &EnvConfig,
    dist: &TaskDistribution,
    policy: &dyn Policy,
    rng: &mut Stream,
    timeout: Option<usize>,
) -> Result<EpisodeRecord> {
    let task = dist.sample_with(rng)?;
    let env = config.reset(rng)?;
    run_episode_from(config, ProductState::new(env, &task), policy, rng, timeout)
}

pub fn run_episode_from(
    config: &EnvConfig,
    start: ProductState,
    policy: &dyn Policy,
    rng: &mut Stream,
    timeout: Option<usize>,
) -> Result<EpisodeRecord> {
    let timeout = timeout.unwrap_or(config.timeout);
    let layout = EnvConfig::layout_of(&start.env).cloned();
    let initial_task = start.task.clone();
    let mut state = start;
    let mut steps = Vec::new();
    let mut discounted = 0.0;
    let mut total = 0.0;
    let mut weight = 1.0;
    let mut outcome = if state.task.is_true() {
        Outcome::Success
    } else if state.task.is_false() {
        Outcome::Failure
    } else {
        Outcome::Timeout
    };
    while !state.is_terminal() && steps.len() < timeout {
        let action = policy.act(config, &state, rng)?;
        let t = product_step(config, &state, &action)?;
        discounted += weight * t.reward;
        total += t.reward;
        weight *= config.gamma;
        steps.push(StepRecord {
            env_state: state.env.clone(),
            action,
            label: t.label,
            task: t.next.task.clone(),
            reward: t.reward,
        });
        if t.terminal {
            outcome = if t.reward > 0.0 {
                Outcome::Success
            } else {
                Outcome::Failure
            };
        }
        state = t.next;
    }
    Ok(EpisodeRecord {
        schema: EPISODE_SCHEMA,
        env: config.name(),
        layout,
        initial_task,
        steps,
        outcome,
        discounted_return: discounted,
        total_reward: total,
    })
}

/// Per-step rewards obtained by replaying progression of `task` over
/// `labels`, stopping at the first resolution.
pub fn replay_rewards(task: &Formula, labels: &[TruthAssignment]) -> Vec<f64> {
    let mut f = simplify(task);
    let mut out = Vec::with_capacity(labels.len());
    for l in labels {
        if f.is_resolved() {
            break;
        }
        f = progress(l, &f);
        out.push(reward_of(&f));
    }
    out
}

/// Limits for explicit enumeration.
#[derive(Clone, Copy, Debug)]
pub struct Caps {
    pub formulas: usize,
    pub states: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            formulas: 10_000,
            states: 1_000_000,
        }
    }
}

/// An enumerated product with deterministic transitions.
#[derive(Clone, Debug)]
pub struct ExplicitMDP {
    pub states: Vec<ProductState>,
    pub index: HashMap<ProductState, usize>,
    pub actions: Vec<Action>,
    /// `next[s][a]`; empty for terminal states.
    pub next: Vec<Vec<usize>>,
    pub reward: Vec<Vec<f64>>,
    pub terminal: Vec<bool>,
    pub gamma: f64,
    /// Initial state index and probability, one entry per task.
    pub initial: Vec<(usize, f64)>,
}

impl ExplicitMDP {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state_index(&self, s: &ProductState) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// One line per state: index, env state, task, terminal flag and
    /// `action->successor:reward` entries.
    pub fn to_table_text(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.states.iter().enumerate() {
            let _ = write!(
                out,
                "{i}\t{}\t{}\t{}",
                s.env,
                render(&s.task, Notation::Infix),
                if self.terminal[i] { "T" } else { "-" }
            );
            for (a, action) in self.actions.iter().enumerate() {
                if let Some(&n) = self.next[i].get(a) {
                    let _ = write!(out, "\t{action}->{n}:{}", self.reward[i][a]);
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Enumerates every product state reachable from the fixed initial
/// environment state paired with each formula of `phis` (weights `probs`).
pub fn enumerate_product(
    config: &EnvConfig,
    phis: &[(Formula, f64)],
    caps: Caps,
) -> Result<ExplicitMDP> {
    let tasks: Vec<Formula> = phis.iter().map(|(f, _)| f.clone()).collect();
    closure(&tasks, &config.label_alphabet(), caps.formulas)?;
    let start = config.fixed_initial_state()?;
    let actions = config.actions();
    let mut mdp = ExplicitMDP {
        states: Vec::new(),
        index: HashMap::new(),
        actions: actions.clone(),
        next: Vec::new(),
        reward: Vec::new(),
        terminal: Vec::new(),
        gamma: config.gamma,
        initial: Vec::new(),
    };
    let intern = |mdp: &mut ExplicitMDP, s: ProductState| -> Result<usize> {
        if let Some(&i) = mdp.index.get(&s) {
            return Ok(i);
        }
        if mdp.states.len() >= caps.states {
            return Err(Error::StateCapExceeded { cap: caps.states });
        }
        let i = mdp.states.len();
        mdp.terminal.push(s.is_terminal());
        mdp.index.insert(s.clone(), i);
        mdp.states.push(s);
        Ok(i)
    };
    for (f, p) in phis {
        let i = intern(&mut mdp, ProductState::new(start.clone(), f))?;
        mdp.initial.push((i, *p));
    }
    let mut i = 0;
    while i < mdp.states.len() {
        let (mut next, mut reward) = (Vec::new(), Vec::new());
        if !mdp.terminal[i] {
            let s = mdp.states[i].clone();
            for a in &actions {
                let t = product_step(config, &s, a)?;
                next.push(intern(&mut mdp, t.next)?);
                reward.push(t.reward);
            }
        }
        mdp.next.push(next);
        mdp.reward.push(reward);
        i += 1;
    }
    Ok(mdp)
}
