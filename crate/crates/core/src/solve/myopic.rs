//! Exact optimum over myopic policies.
//!
//! A myopic policy sees only the environment state and the guidance
//! classification of the current task, so it must act identically on any
//! two tasks that classify the same way in the same cell. The search
//! builds the observation → action map lazily: all tasks of the
//! distribution are rolled forward under the partial map until one reaches
//! an unmapped observation, which is then branched on. A task that revisits
//! a product state cycles forever (dynamics are deterministic) and scores
//! 0, as does one that exceeds the timeout. Branches are pruned with the
//! bound "every unfinished task that can still succeed does".

use std::collections::{HashMap, HashSet};

use crate::envs::{Action, EnvConfig, EnvState};
use crate::error::{Error, Result};
use crate::guidance::{classify_propositions, Classification};
use crate::ltl::{Formula, Vocabulary};
use crate::product::{enumerate_product, product_step, Caps, Policy, ProductState};
use crate::rng::Stream;

use super::can_succeed;

type Observation = (EnvState, Classification);

/// The best myopic policy found and its exact performance.
#[derive(Clone, Debug)]
pub struct MyopicSolution {
    /// Expected total reward under the task distribution (the objective).
    pub expected_total_reward: f64,
    pub expected_discounted_return: f64,
    pub success_rate: f64,
    pub policy: MyopicPolicy,
    /// Search nodes expanded.
    pub nodes: u64,
}

/// A deterministic observation → action map. Unmapped observations fall
/// back to the first action.
#[derive(Clone, Debug)]
pub struct MyopicPolicy {
    vocab: Vocabulary,
    actions: Vec<Action>,
    map: HashMap<Observation, usize>,
}

impl MyopicPolicy {
    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

impl Policy for MyopicPolicy {
    fn name(&self) -> String {
        "myopic-optimal".into()
    }

    fn act(&self, _config: &EnvConfig, state: &ProductState, _rng: &mut Stream) -> Result<Action> {
        let c = classify_propositions(&state.task, &self.vocab)?;
        let a = self.map.get(&(state.env.clone(), c)).copied().unwrap_or(0);
        Ok(self.actions[a].clone())
    }
}

#[derive(Clone)]
struct Track {
    weight: f64,
    state: ProductState,
    visited: HashSet<ProductState>,
    steps: usize,
    discount: f64,
    /// (total, discounted, success) once finished.
    done: Option<(f64, f64, bool)>,
}

struct Search<'a> {
    config: &'a EnvConfig,
    vocab: Vocabulary,
    actions: Vec<Action>,
    reachable: HashMap<ProductState, bool>,
    classes: HashMap<Formula, Classification>,
    map: HashMap<Observation, usize>,
    best: Option<(f64, f64, f64, HashMap<Observation, usize>)>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn observe(&mut self, st: &ProductState) -> Result<Observation> {
        if !self.classes.contains_key(&st.task) {
            let c = classify_propositions(&st.task, &self.vocab)?;
            self.classes.insert(st.task.clone(), c);
        }
        Ok((st.env.clone(), self.classes[&st.task].clone()))
    }

    /// Rolls `t` forward under the current map. Returns the unmapped
    /// observation it stopped at, if any.
    fn advance(&mut self, t: &mut Track) -> Result<Option<Observation>> {
        while t.done.is_none() {
            if t.steps >= self.config.timeout {
                t.done = Some((0.0, 0.0, false));
                break;
            }
            let obs = self.observe(&t.state)?;
            let Some(&a) = self.map.get(&obs) else {
                return Ok(Some(obs));
            };
            let tr = product_step(self.config, &t.state, &self.actions[a])?;
            t.steps += 1;
            if tr.terminal {
                t.done = Some((tr.reward, tr.reward * t.discount, tr.reward > 0.0));
            } else if !t.visited.insert(tr.next.clone()) {
                t.done = Some((0.0, 0.0, false));
            }
            t.discount *= self.config.gamma;
            t.state = tr.next;
        }
        Ok(None)
    }

    fn dfs(&mut self, mut tracks: Vec<Track>) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded {
                budget: self.budget,
            });
        }
        let mut pending = None;
        for t in &mut tracks {
            if let Some(obs) = self.advance(t)? {
                pending.get_or_insert(obs);
            }
        }
        let bound: f64 = tracks
            .iter()
            .map(|t| {
                t.weight
                    * match t.done {
                        Some((total, ..)) => total,
                        None if self.reachable[&t.state] => 1.0,
                        None => 0.0,
                    }
            })
            .sum();
        if let Some((best, ..)) = &self.best {
            if bound <= *best + 1e-12 {
                return Ok(());
            }
        }
        match pending {
            None => {
                let (mut total, mut disc, mut succ) = (0.0, 0.0, 0.0);
                for t in &tracks {
                    let (r, d, s) = t.done.unwrap();
                    total += t.weight * r;
                    disc += t.weight * d;
                    succ += if s { t.weight } else { 0.0 };
                }
                if self.best.as_ref().is_none_or(|b| total > b.0 + 1e-12) {
                    self.best = Some((total, disc, succ, self.map.clone()));
                }
            }
            Some(obs) => {
                for a in 0..self.actions.len() {
                    self.map.insert(obs.clone(), a);
                    self.dfs(tracks.clone())?;
                }
                self.map.remove(&obs);
            }
        }
        Ok(())
    }
}

/// Best expected total reward achievable by a myopic policy on the
/// weighted task set `tasks`, each task starting from the environment's
/// fixed initial state. `budget` bounds the number of search nodes.
pub fn myopic_optimum(
    config: &EnvConfig,
    tasks: &[(Formula, f64)],
    budget: u64,
) -> Result<MyopicSolution> {
    let mdp = enumerate_product(config, tasks, Caps::default())?;
    let ok = can_succeed(&mdp);
    let reachable = mdp.states.iter().cloned().zip(ok).collect();
    let total_weight: f64 = tasks.iter().map(|(_, w)| w).sum();
    let start = config.fixed_initial_state()?;
    let tracks: Vec<Track> = tasks
        .iter()
        .map(|(f, w)| {
            let state = ProductState::new(start.clone(), f);
            let done = match &state.task {
                Formula::True => Some((0.0, 0.0, true)),
                Formula::False => Some((0.0, 0.0, false)),
                _ => None,
            };
            Track {
                weight: w / total_weight,
                visited: HashSet::from([state.clone()]),
                state,
                steps: 0,
                discount: 1.0,
                done,
            }
        })
        .collect();
    let mut search = Search {
        config,
        vocab: config.vocabulary(),
        actions: config.actions(),
        reachable,
        classes: HashMap::new(),
        map: HashMap::new(),
        best: None,
        nodes: 0,
        budget,
    };
    search.dfs(tracks)?;
    let (total, disc, succ, map) = search.best.expect("search visits at least one leaf");
    Ok(MyopicSolution {
        expected_total_reward: total,
        expected_discounted_return: disc,
        success_rate: succ,
        policy: MyopicPolicy {
            vocab: search.vocab,
            actions: search.actions,
            map,
        },
        nodes: search.nodes,
    })
}
