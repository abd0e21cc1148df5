//! Tabular ε-greedy Q-learning over lazily discovered product states.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::envs::{Action, EnvConfig, EnvState};
use crate::error::Result;
use crate::ltl::Formula;
use crate::product::{product_step, Policy, ProductState};
use crate::rng::{derive_seed, stream, Stream};
use crate::taskgen::TaskDistribution;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QParams {
    pub episodes: usize,
    pub alpha: f64,
    pub epsilon_start: f64,
    pub epsilon_end: f64,
    /// Fraction of episodes over which ε decays linearly.
    pub decay_fraction: f64,
    pub seed: u64,
    /// Stop after this many environment steps in total.
    pub max_steps: Option<u64>,
    /// Episode length; defaults to the environment's timeout.
    pub timeout: Option<usize>,
}

impl Default for QParams {
    fn default() -> Self {
        QParams {
            episodes: 10_000,
            alpha: 0.1,
            epsilon_start: 1.0,
            epsilon_end: 0.05,
            decay_fraction: 0.5,
            seed: crate::rng::DEFAULT_SEED,
            max_steps: None,
            timeout: None,
        }
    }
}

impl QParams {
    pub fn epsilon(&self, episode: usize) -> f64 {
        let decay = (self.episodes as f64 * self.decay_fraction).max(1.0);
        let frac = (episode as f64 / decay).min(1.0);
        self.epsilon_start + (self.epsilon_end - self.epsilon_start) * frac
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QEntry {
    pub q: Vec<f64>,
    /// Zero marks an action never tried in this state.
    pub visits: Vec<u64>,
}

/// Q-values keyed by (environment state, simplified task).
#[derive(Clone, Debug, PartialEq)]
pub struct QTable {
    pub actions: Vec<Action>,
    pub entries: HashMap<(EnvState, Formula), QEntry>,
    pub episodes: usize,
    pub steps: u64,
}

impl QTable {
    pub fn new(actions: Vec<Action>) -> Self {
        QTable {
            actions,
            entries: HashMap::new(),
            episodes: 0,
            steps: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, state: &ProductState) -> Option<&QEntry> {
        self.entries.get(&(state.env.clone(), state.task.clone()))
    }

    /// Greedy action index; unseen states and ties go to the lowest index.
    pub fn greedy(&self, state: &ProductState) -> usize {
        match self.get(state) {
            None => 0,
            Some(e) => argmax(&e.q),
        }
    }

    fn max_q(&self, state: &ProductState) -> f64 {
        self.get(state)
            .map(|e| e.q.iter().copied().fold(f64::NEG_INFINITY, f64::max))
            .unwrap_or(0.0)
    }
}

fn argmax(q: &[f64]) -> usize {
    let mut best = 0;
    for a in 1..q.len() {
        if q[a] > q[best] {
            best = a;
        }
    }
    best
}

impl Policy for QTable {
    fn name(&self) -> String {
        "qlearn".into()
    }

    fn act(&self, _config: &EnvConfig, state: &ProductState, _rng: &mut Stream) -> Result<Action> {
        Ok(self.actions[self.greedy(state)].clone())
    }
}

/// Runs `params.episodes` ε-greedy episodes. Episode `e` draws its task,
/// initial state and exploration from its own child stream, so the result
/// depends only on the parameters.
pub fn q_learning(config: &EnvConfig, dist: &TaskDistribution, params: &QParams) -> Result<QTable> {
    let actions = config.actions();
    let n = actions.len();
    let mut table = QTable::new(actions.clone());
    let seed = derive_seed(params.seed, "qlearn");
    let timeout = params.timeout.unwrap_or(config.timeout);
    'episodes: for e in 0..params.episodes {
        let mut rng = stream(seed, e as u64);
        let task = dist.sample_with(&mut rng)?;
        let mut state = ProductState::new(config.reset(&mut rng)?, &task);
        let eps = params.epsilon(e);
        table.episodes += 1;
        for _ in 0..timeout {
            if state.is_terminal() {
                break;
            }
            if params.max_steps.is_some_and(|m| table.steps >= m) {
                table.episodes -= 1;
                break 'episodes;
            }
            let a = if rng.random_bool(eps) {
                rng.random_range(0..n)
            } else {
                table.greedy(&state)
            };
            let t = product_step(config, &state, &actions[a])?;
            let target = t.reward
                + if t.terminal {
                    0.0
                } else {
                    config.gamma * table.max_q(&t.next)
                };
            let entry = table
                .entries
                .entry((state.env.clone(), state.task.clone()))
                .or_insert_with(|| QEntry {
                    q: vec![0.0; n],
                    visits: vec![0; n],
                });
            entry.q[a] += params.alpha * (target - entry.q[a]);
            entry.visits[a] += 1;
            table.steps += 1;
            state = t.next;
        }
    }
    Ok(table)
}
