//! Exact and tabular solvers over taskable MDPs.

mod exhaustive;
mod metrics;
mod myopic;
mod qlearn;

use crate::product::{ExplicitMDP, Outcome};

pub use exhaustive::{exhaustive_optimum, exhaustive_optimum_from, DEFAULT_BUDGET};
pub use metrics::{evaluate, EpisodeSummary, Metrics, METRICS_SCHEMA};
pub use myopic::{myopic_optimum, MyopicPolicy, MyopicSolution};
pub use qlearn::{q_learning, QEntry, QParams, QTable};

pub const DEFAULT_TOL: f64 = 1e-9;

/// Value-iteration result. Terminal states have value 0 and no action.
#[derive(Clone, Debug)]
pub struct Solution {
    pub values: Vec<f64>,
    pub policy: Vec<Option<usize>>,
    /// Sup-norm Bellman residual after each sweep.
    pub residuals: Vec<f64>,
}

impl Solution {
    /// `Σ μ′(s) V(s)` over the initial distribution.
    pub fn initial_value(&self, mdp: &ExplicitMDP) -> f64 {
        mdp.initial.iter().map(|&(s, p)| p * self.values[s]).sum()
    }
}

fn q_value(mdp: &ExplicitMDP, values: &[f64], s: usize, a: usize) -> f64 {
    mdp.reward[s][a] + mdp.gamma * values[mdp.next[s][a]]
}

/// Index of the best action; ties (within 1e-12) go to the lowest index.
fn greedy(mdp: &ExplicitMDP, values: &[f64], s: usize) -> (usize, f64) {
    let mut best = (0, q_value(mdp, values, s, 0));
    for a in 1..mdp.next[s].len() {
        let q = q_value(mdp, values, s, a);
        if q > best.1 + 1e-12 {
            best = (a, q);
        }
    }
    best
}

/// Synchronous value iteration until the sup-norm residual drops below
/// `tol` (or 100 000 sweeps).
pub fn value_iteration(mdp: &ExplicitMDP, tol: f64) -> Solution {
    let n = mdp.len();
    let mut values = vec![0.0; n];
    let mut residuals = Vec::new();
    for _ in 0..100_000 {
        let mut next = vec![0.0; n];
        let mut residual: f64 = 0.0;
        for s in 0..n {
            if !mdp.terminal[s] {
                next[s] = greedy(mdp, &values, s).1;
            }
            residual = residual.max((next[s] - values[s]).abs());
        }
        values = next;
        residuals.push(residual);
        if residual < tol {
            break;
        }
    }
    let policy = (0..n)
        .map(|s| (!mdp.terminal[s]).then(|| greedy(mdp, &values, s).0))
        .collect();
    Solution {
        values,
        policy,
        residuals,
    }
}

/// Exact value of following a deterministic policy from one state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolicyValue {
    pub discounted: f64,
    pub total: f64,
    /// `Timeout` stands for a policy that cycles forever.
    pub outcome: Outcome,
    pub steps: usize,
}

/// Follows `policy` from every state of the (deterministic) MDP.
pub fn evaluate_policy(mdp: &ExplicitMDP, policy: &[Option<usize>]) -> Vec<PolicyValue> {
    let n = mdp.len();
    let mut memo: Vec<Option<PolicyValue>> = vec![None; n];
    for start in 0..n {
        if memo[start].is_some() {
            continue;
        }
        let mut path = Vec::new();
        let mut on_path = vec![false; n];
        let mut s = start;
        let mut tail = loop {
            if let Some(v) = memo[s] {
                break v;
            }
            if mdp.terminal[s] {
                let v = PolicyValue {
                    discounted: 0.0,
                    total: 0.0,
                    outcome: if mdp.states[s].task.is_true() {
                        Outcome::Success
                    } else {
                        Outcome::Failure
                    },
                    steps: 0,
                };
                memo[s] = Some(v);
                break v;
            }
            if on_path[s] {
                break PolicyValue {
                    discounted: 0.0,
                    total: 0.0,
                    outcome: Outcome::Timeout,
                    steps: usize::MAX,
                };
            }
            on_path[s] = true;
            path.push(s);
            s = mdp.next[s][policy[s].expect("policy defined on non-terminal states")];
        };
        for &p in path.iter().rev() {
            let a = policy[p].unwrap();
            let r = mdp.reward[p][a];
            tail = PolicyValue {
                discounted: r + mdp.gamma * tail.discounted,
                total: r + tail.total,
                outcome: tail.outcome,
                steps: tail.steps.saturating_add(1),
            };
            memo[p] = Some(tail);
        }
    }
    memo.into_iter().map(|v| v.unwrap()).collect()
}

/// States from which some action sequence reaches a `true` residual.
pub fn can_succeed(mdp: &ExplicitMDP) -> Vec<bool> {
    let n = mdp.len();
    let mut ok: Vec<bool> = (0..n).map(|s| mdp.states[s].task.is_true()).collect();
    loop {
        let mut changed = false;
        for s in 0..n {
            if !ok[s] && mdp.next[s].iter().any(|&t| ok[t]) {
                ok[s] = true;
                changed = true;
            }
        }
        if !changed {
            return ok;
        }
    }
}
