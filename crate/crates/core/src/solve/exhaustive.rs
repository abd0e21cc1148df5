//! Brute-force optimum over history-dependent action sequences.
//!
//! No states are merged: every action sequence of length ≤ horizon is a
//! separate branch, and progression is replayed along each branch. Because
//! the only rewards are a single terminal ±1, the best return is `γ^t` for
//! the earliest reachable success at step `t` (found by iterative
//! deepening); failing that, 0 if some branch survives the horizon, and
//! otherwise `−γ^t` for the latest forced failure.

use crate::envs::{Action, EnvConfig};
use crate::error::{Error, Result};
use crate::ltl::Formula;
use crate::product::{product_step, ProductState};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

struct Search<'a> {
    config: &'a EnvConfig,
    actions: Vec<Action>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded {
                budget: self.budget,
            });
        }
        Ok(())
    }

    /// Whether some sequence of at most `depth` actions reaches success.
    fn succeeds_within(&mut self, st: &ProductState, depth: usize) -> Result<bool> {
        if depth == 0 {
            return Ok(false);
        }
        for a in self.actions.clone() {
            self.tick()?;
            let t = product_step(self.config, st, &a)?;
            if t.next.task.is_true() {
                return Ok(true);
            }
            if !t.terminal && self.succeeds_within(&t.next, depth - 1)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Best non-positive return when no success is reachable.
    fn best_without_success(
        &mut self,
        st: &ProductState,
        step: usize,
        horizon: usize,
    ) -> Result<f64> {
        if step == horizon {
            return Ok(0.0);
        }
        let mut best = f64::NEG_INFINITY;
        for a in self.actions.clone() {
            self.tick()?;
            let t = product_step(self.config, st, &a)?;
            let v = if t.terminal {
                t.reward * self.config.gamma.powi(step as i32)
            } else {
                self.best_without_success(&t.next, step + 1, horizon)?
            };
            best = best.max(v);
            if best >= 0.0 {
                break;
            }
        }
        Ok(best)
    }
}

/// Maximal discounted return over all action sequences of length ≤
/// `horizon` from the environment's fixed initial state.
pub fn exhaustive_optimum(config: &EnvConfig, phi: &Formula, horizon: usize) -> Result<f64> {
    let start = ProductState::new(config.fixed_initial_state()?, phi);
    exhaustive_optimum_from(config, &start, horizon, DEFAULT_BUDGET)
}

/// As [`exhaustive_optimum`] from an arbitrary product state, with an
/// explicit budget on expanded nodes.
pub fn exhaustive_optimum_from(
    config: &EnvConfig,
    start: &ProductState,
    horizon: usize,
    budget: u64,
) -> Result<f64> {
    if horizon == 0 || start.is_terminal() {
        return Ok(0.0);
    }
    let mut search = Search {
        config,
        actions: config.actions(),
        nodes: 0,
        budget,
    };
    for depth in 1..=horizon {
        if search.succeeds_within(start, depth)? {
            return Ok(config.gamma.powi(depth as i32 - 1));
        }
    }
    search.best_without_success(start, 0, horizon)
}
