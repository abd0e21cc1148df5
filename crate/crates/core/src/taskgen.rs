//! Procedural task families and exact task-space counts.
//!
//! Partially-ordered tasks are conjunctions of eventually-sequences
//!
//! ```text
//! formula  → sequence ∧ formula | sequence
//! sequence → F (term ∧ sequence) | F term
//! term     → prop | prop ∨ prop
//! ```
//!
//! and avoidance tasks are conjunctions of until-chains
//!
//! ```text
//! formula  → sequence ∧ formula | sequence
//! sequence → !prop U (prop ∧ sequence) | !prop U prop
//! ```
//!
//! in which no proposition appears twice.
//!
//! Counting convention: a task is a *set* of distinct sequences (conjunct
//! order and repetition do not create new tasks) and a disjunctive term is
//! an unordered pair of distinct propositions. The samplers draw exactly
//! from that support.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::seq::index::sample as sample_indices;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ltl::{Formula, Proposition, Vocabulary};
use crate::rng::{stream, DEFAULT_SEED};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartiallyOrderedParams {
    pub conjuncts_min: usize,
    pub conjuncts_max: usize,
    pub depth_min: usize,
    pub depth_max: usize,
    pub disjunction_prob: f64,
    pub vocabulary: Vocabulary,
}

impl PartiallyOrderedParams {
    pub fn validate(&self) -> Result<()> {
        check_ranges(
            self.conjuncts_min,
            self.conjuncts_max,
            self.depth_min,
            self.depth_max,
        )?;
        if !(0.0..=1.0).contains(&self.disjunction_prob) {
            return Err(Error::InvalidParams(
                "disjunction_prob must lie in [0, 1]".into(),
            ));
        }
        let needed = if self.disjunction_prob > 0.0 { 2 } else { 1 };
        if self.vocabulary.len() < needed {
            return Err(Error::VocabularyTooSmall {
                needed,
                available: self.vocabulary.len(),
            });
        }
        if self.sequence_count() < BigUint::from(self.conjuncts_max) {
            return Err(Error::InvalidParams(
                "fewer distinct sequences than conjuncts_max".into(),
            ));
        }
        Ok(())
    }

    fn term_count(&self) -> BigUint {
        let n = self.vocabulary.len() as u64;
        let pairs = BigUint::from(n * n.saturating_sub(1) / 2);
        if self.disjunction_prob == 0.0 {
            BigUint::from(n)
        } else if self.disjunction_prob == 1.0 {
            pairs
        } else {
            BigUint::from(n) + pairs
        }
    }

    /// Distinct sequences over all allowed depths.
    fn sequence_count(&self) -> BigUint {
        let t = self.term_count();
        (self.depth_min..=self.depth_max)
            .map(|d| t.pow(d as u32))
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AvoidanceParams {
    pub conjuncts_min: usize,
    pub conjuncts_max: usize,
    pub depth_min: usize,
    pub depth_max: usize,
    pub vocabulary: Vocabulary,
}

impl AvoidanceParams {
    pub fn validate(&self) -> Result<()> {
        check_ranges(
            self.conjuncts_min,
            self.conjuncts_max,
            self.depth_min,
            self.depth_max,
        )?;
        let needed = 2 * self.conjuncts_max * self.depth_max;
        if self.vocabulary.len() < needed {
            return Err(Error::VocabularyTooSmall {
                needed,
                available: self.vocabulary.len(),
            });
        }
        Ok(())
    }
}

fn check_ranges(cmin: usize, cmax: usize, dmin: usize, dmax: usize) -> Result<()> {
    if cmin == 0 || cmin > cmax {
        return Err(Error::InvalidParams(format!(
            "need 1 <= conjuncts_min <= conjuncts_max, got [{cmin}, {cmax}]"
        )));
    }
    if dmin == 0 || dmin > dmax {
        return Err(Error::InvalidParams(format!(
            "need 1 <= depth_min <= depth_max, got [{dmin}, {dmax}]"
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedTask {
    pub formula: Formula,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TaskKind {
    PartiallyOrdered(PartiallyOrderedParams),
    Avoidance(AvoidanceParams),
    Explicit { tasks: Vec<WeightedTask> },
}

/// A task distribution together with the seed of its sampling streams.
/// Draw `k` uses child stream `k`, so it is independent of every other draw.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaskDistribution {
    #[serde(flatten)]
    pub kind: TaskKind,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

impl TaskDistribution {
    pub fn new(kind: TaskKind, seed: u64) -> Result<Self> {
        let dist = TaskDistribution { kind, seed };
        dist.validate()?;
        Ok(dist)
    }

    /// Uniform distribution over `formulas`.
    pub fn uniform(formulas: impl IntoIterator<Item = Formula>, seed: u64) -> Result<Self> {
        let tasks = formulas
            .into_iter()
            .map(|formula| WeightedTask {
                formula,
                weight: 1.0,
            })
            .collect();
        TaskDistribution::new(TaskKind::Explicit { tasks }, seed)
    }

    pub fn validate(&self) -> Result<()> {
        match &self.kind {
            TaskKind::PartiallyOrdered(p) => p.validate(),
            TaskKind::Avoidance(p) => p.validate(),
            TaskKind::Explicit { tasks } => {
                if tasks.is_empty() {
                    return Err(Error::InvalidParams("explicit task list is empty".into()));
                }
                if tasks
                    .iter()
                    .any(|t| !(t.weight.is_finite() && t.weight > 0.0))
                {
                    return Err(Error::InvalidParams(
                        "task weights must be positive and finite".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Draw number `index`.
    pub fn sample(&self, index: u64) -> Result<Formula> {
        self.sample_with(&mut stream(self.seed, index))
    }

    pub fn sample_with<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Formula> {
        match &self.kind {
            TaskKind::PartiallyOrdered(p) => {
                p.validate()?;
                Ok(sample_partially_ordered(p, rng))
            }
            TaskKind::Avoidance(p) => sample_avoidance(p, rng),
            TaskKind::Explicit { tasks } => {
                let total: f64 = tasks.iter().map(|t| t.weight).sum();
                let mut x = rng.random::<f64>() * total;
                for t in tasks {
                    if x < t.weight {
                        return Ok(t.formula.clone());
                    }
                    x -= t.weight;
                }
                Ok(tasks[tasks.len() - 1].formula.clone())
            }
        }
    }

    /// Propositions the distribution can mention.
    pub fn vocabulary(&self) -> Vocabulary {
        match &self.kind {
            TaskKind::PartiallyOrdered(p) => p.vocabulary.clone(),
            TaskKind::Avoidance(p) => p.vocabulary.clone(),
            TaskKind::Explicit { tasks } => {
                let mut v = Vocabulary::default();
                for t in tasks {
                    for p in t.formula.propositions() {
                        v.insert(p);
                    }
                }
                v
            }
        }
    }

    /// The explicit support with normalized probabilities, if finite and listed.
    pub fn explicit_support(&self) -> Option<Vec<(Formula, f64)>> {
        match &self.kind {
            TaskKind::Explicit { tasks } => {
                let total: f64 = tasks.iter().map(|t| t.weight).sum();
                Some(
                    tasks
                        .iter()
                        .map(|t| (t.formula.clone(), t.weight / total))
                        .collect(),
                )
            }
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match &self.kind {
            TaskKind::PartiallyOrdered(_) => "partially_ordered",
            TaskKind::Avoidance(_) => "avoidance",
            TaskKind::Explicit { .. } => "explicit",
        }
    }
}

fn uniform_in<R: Rng + ?Sized>(rng: &mut R, lo: usize, hi: usize) -> usize {
    rng.random_range(lo..=hi)
}

fn partially_ordered_sequence<R: Rng + ?Sized>(p: &PartiallyOrderedParams, rng: &mut R) -> Formula {
    let props: Vec<&Proposition> = p.vocabulary.iter().collect();
    let depth = uniform_in(rng, p.depth_min, p.depth_max);
    let terms: Vec<Formula> = (0..depth)
        .map(|_| {
            if rng.random_bool(p.disjunction_prob) {
                let pair = sample_indices(rng, props.len(), 2);
                Formula::or(
                    Formula::Prop(props[pair.index(0)].clone()),
                    Formula::Prop(props[pair.index(1)].clone()),
                )
            } else {
                Formula::Prop(props[rng.random_range(0..props.len())].clone())
            }
        })
        .collect();
    let mut iter = terms.into_iter().rev();
    let last = Formula::eventually(iter.next().expect("depth >= 1"));
    iter.fold(last, |seq, term| {
        Formula::eventually(Formula::and(term, seq))
    })
}

/// One partially-ordered task. Conjuncts are distinct sequences; a repeated
/// sequence is redrawn. `params` must be valid.
pub fn sample_partially_ordered<R: Rng + ?Sized>(
    params: &PartiallyOrderedParams,
    rng: &mut R,
) -> Formula {
    let k = uniform_in(rng, params.conjuncts_min, params.conjuncts_max);
    let mut seqs: Vec<Formula> = Vec::with_capacity(k);
    while seqs.len() < k {
        let s = partially_ordered_sequence(params, rng);
        if !seqs.contains(&s) {
            seqs.push(s);
        }
    }
    Formula::and_all(seqs)
}

/// One avoidance task; propositions are drawn without replacement across the
/// whole formula.
pub fn sample_avoidance<R: Rng + ?Sized>(params: &AvoidanceParams, rng: &mut R) -> Result<Formula> {
    params.validate()?;
    let k = uniform_in(rng, params.conjuncts_min, params.conjuncts_max);
    let depths: Vec<usize> = (0..k)
        .map(|_| uniform_in(rng, params.depth_min, params.depth_max))
        .collect();
    let total: usize = depths.iter().sum();
    let picks = sample_indices(rng, params.vocabulary.len(), 2 * total);
    let mut drawn = picks
        .iter()
        .map(|i| Formula::Prop(params.vocabulary.get(i).expect("index in range").clone()));
    let mut seqs = Vec::with_capacity(k);
    for d in depths {
        let pairs: Vec<(Formula, Formula)> = (0..d)
            .map(|_| (drawn.next().unwrap(), drawn.next().unwrap()))
            .collect();
        let mut iter = pairs.into_iter().rev();
        let (avoid, reach) = iter.next().unwrap();
        let last = Formula::until(Formula::not(avoid), reach);
        seqs.push(iter.fold(last, |seq, (avoid, reach)| {
            Formula::until(Formula::not(avoid), Formula::and(reach, seq))
        }));
    }
    Ok(Formula::and_all(seqs))
}

fn binomial(n: &BigUint, k: usize) -> BigUint {
    if BigUint::from(k) > *n {
        return BigUint::zero();
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= n - BigUint::from(i);
        den *= BigUint::from(i + 1);
    }
    num / den
}

fn falling(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    (0..k).fold(BigUint::one(), |acc, i| acc * BigUint::from(n - i))
}

fn factorial(k: usize) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// Exact number of distinct tasks in the support (see the module docs for
/// the convention).
pub fn count_tasks(dist: &TaskDistribution) -> Result<BigUint> {
    match &dist.kind {
        TaskKind::PartiallyOrdered(p) => {
            p.validate()?;
            let s = p.sequence_count();
            Ok((p.conjuncts_min..=p.conjuncts_max)
                .map(|k| binomial(&s, k))
                .sum())
        }
        TaskKind::Avoidance(p) => {
            p.validate()?;
            let n = p.vocabulary.len();
            let mut total = BigUint::zero();
            for k in p.conjuncts_min..=p.conjuncts_max {
                // Ordered k-tuples of sequences with disjoint propositions,
                // summed over depth assignments; sets are tuples / k!.
                let mut ordered = BigUint::zero();
                let mut depths = vec![p.depth_min; k];
                loop {
                    let used: usize = depths.iter().sum::<usize>() * 2;
                    ordered += falling(n, used);
                    let mut i = 0;
                    while i < k && depths[i] == p.depth_max {
                        depths[i] = p.depth_min;
                        i += 1;
                    }
                    if i == k {
                        break;
                    }
                    depths[i] += 1;
                }
                total += ordered / factorial(k);
            }
            Ok(total)
        }
        TaskKind::Explicit { .. } => Err(Error::InvalidParams(
            "task counts are defined for the procedural families only".into(),
        )),
    }
}

/// Term of a partially-ordered sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Prop(Proposition),
    Either(Proposition, Proposition),
}

fn conjuncts(f: &Formula) -> Vec<&Formula> {
    let mut out = Vec::new();
    let mut cur = f;
    while let Formula::And(a, b) = cur {
        out.push(a.as_ref());
        cur = b;
    }
    out.push(cur);
    out
}

/// Splits a formula produced by the partially-ordered grammar into its
/// sequences of terms; `None` if it does not match the grammar.
pub fn recognize_partially_ordered(f: &Formula) -> Option<Vec<Vec<Term>>> {
    fn term(f: &Formula) -> Option<Term> {
        match f {
            Formula::Prop(p) => Some(Term::Prop(p.clone())),
            Formula::Or(a, b) => match (a.as_ref(), b.as_ref()) {
                (Formula::Prop(x), Formula::Prop(y)) if x != y => {
                    Some(Term::Either(x.clone(), y.clone()))
                }
                _ => None,
            },
            _ => None,
        }
    }
    fn sequence(f: &Formula, out: &mut Vec<Term>) -> Option<()> {
        let Formula::Eventually(inner) = f else {
            return None;
        };
        if let Formula::And(t, rest) = inner.as_ref() {
            out.push(term(t)?);
            sequence(rest, out)
        } else {
            out.push(term(inner)?);
            Some(())
        }
    }
    conjuncts(f)
        .into_iter()
        .map(|c| {
            let mut terms = Vec::new();
            sequence(c, &mut terms).map(|_| terms)
        })
        .collect()
}

/// Splits an avoidance formula into its chains of `(avoid, reach)` pairs;
/// `None` if it does not match the grammar.
pub fn recognize_avoidance(f: &Formula) -> Option<Vec<Vec<(Proposition, Proposition)>>> {
    fn chain(f: &Formula, out: &mut Vec<(Proposition, Proposition)>) -> Option<()> {
        let Formula::Until(lhs, rhs) = f else {
            return None;
        };
        let Formula::Not(avoid) = lhs.as_ref() else {
            return None;
        };
        let Formula::Prop(avoid) = avoid.as_ref() else {
            return None;
        };
        match rhs.as_ref() {
            Formula::Prop(reach) => {
                out.push((avoid.clone(), reach.clone()));
                Some(())
            }
            Formula::And(reach, rest) => {
                let Formula::Prop(reach) = reach.as_ref() else {
                    return None;
                };
                out.push((avoid.clone(), reach.clone()));
                chain(rest, out)
            }
            _ => None,
        }
    }
    conjuncts(f)
        .into_iter()
        .map(|c| {
            let mut pairs = Vec::new();
            chain(c, &mut pairs).map(|_| pairs)
        })
        .collect()
}

/// Named parameter sets.
pub const PRESETS: &[&str] = &[
    "letterworld-po",
    "letterworld-avoid",
    "upgen-depth",
    "upgen-conjuncts",
    "upgen-depth-po",
    "upgen-conjuncts-po",
    "zoneenv-avoid",
];

pub fn preset(name: &str) -> Result<TaskDistribution> {
    let letters = || Vocabulary::letters(12);
    let po = |cmin, cmax, dmin, dmax| {
        TaskKind::PartiallyOrdered(PartiallyOrderedParams {
            conjuncts_min: cmin,
            conjuncts_max: cmax,
            depth_min: dmin,
            depth_max: dmax,
            disjunction_prob: 0.25,
            vocabulary: letters(),
        })
    };
    let avoid = |cmin, cmax, dmin, dmax, vocabulary| {
        TaskKind::Avoidance(AvoidanceParams {
            conjuncts_min: cmin,
            conjuncts_max: cmax,
            depth_min: dmin,
            depth_max: dmax,
            vocabulary,
        })
    };
    let kind = match name {
        "letterworld-po" => po(1, 4, 1, 5),
        "letterworld-avoid" => avoid(1, 2, 1, 3, letters()),
        "upgen-depth" => avoid(1, 1, 6, 6, letters()),
        "upgen-conjuncts" => avoid(3, 3, 2, 2, letters()),
        "upgen-depth-po" => po(2, 4, 15, 15),
        "upgen-conjuncts-po" => po(12, 12, 3, 5),
        "zoneenv-avoid" => avoid(
            1,
            1,
            1,
            2,
            Vocabulary::new(["black", "red", "white", "yellow"]).expect("valid names"),
        ),
        _ => return Err(Error::UnknownPreset(name.to_string())),
    };
    TaskDistribution::new(kind, DEFAULT_SEED)
}
