//! A formal-language task engine for multi-task reinforcement learning.
//!
//! Tasks are linear temporal logic formulas. The [`ltl`] module parses,
//! renders, progresses and simplifies them and carries an independent
//! lasso-trace evaluator used as a semantic oracle. [`taskgen`] samples and
//! counts the two procedural task families, [`envs`] provides small discrete
//! environments with labelling functions, [`product`] builds the taskable
//! product MDP, [`guidance`] implements the myopic proposition classifier,
//! [`solve`] holds exact and tabular solvers, and [`export`] emits graph and
//! token encodings for external learners.

pub mod envs;
pub mod error;
pub mod export;
pub mod guidance;
pub mod ltl;
pub mod product;
pub mod rng;
pub mod solve;
pub mod taskgen;

pub use error::{Error, Result};
pub use ltl::{Formula, LassoTrace, Proposition, TruthAssignment, Vocabulary};
