//! Random formulas and lasso traces for property checks.

use rand::Rng;

use super::{Formula, LassoTrace, Proposition, TruthAssignment};

/// A uniformly-shaped random formula with at most `max_nodes` nodes over
/// `props`. Node kinds are drawn uniformly among those that fit the budget.
pub fn random_formula<R: Rng + ?Sized>(
    rng: &mut R,
    max_nodes: usize,
    props: &[Proposition],
) -> Formula {
    assert!(max_nodes >= 1 && !props.is_empty());
    let target = rng.random_range(1..=max_nodes);
    build(rng, target, props)
}

fn build<R: Rng + ?Sized>(rng: &mut R, nodes: usize, props: &[Proposition]) -> Formula {
    if nodes == 1 {
        return match rng.random_range(0..10) {
            0 => Formula::True,
            1 => Formula::False,
            _ => Formula::Prop(props[rng.random_range(0..props.len())].clone()),
        };
    }
    // Binary nodes need at least 3 nodes in total.
    let kind = if nodes == 2 {
        rng.random_range(0..4)
    } else {
        rng.random_range(0..7)
    };
    if kind < 4 {
        let child = build(rng, nodes - 1, props);
        return match kind {
            0 => Formula::not(child),
            1 => Formula::next(child),
            2 => Formula::eventually(child),
            _ => Formula::always(child),
        };
    }
    let left = rng.random_range(1..nodes - 1);
    let (l, r) = (build(rng, left, props), build(rng, nodes - 1 - left, props));
    match kind {
        4 => Formula::and(l, r),
        5 => Formula::or(l, r),
        _ => Formula::until(l, r),
    }
}

pub fn random_assignment<R: Rng + ?Sized>(rng: &mut R, props: &[Proposition]) -> TruthAssignment {
    props
        .iter()
        .filter(|_| rng.random_bool(0.5))
        .cloned()
        .collect()
}

/// Prefix length in `0..=max_prefix`, loop length in `1..=max_loop`.
pub fn random_lasso<R: Rng + ?Sized>(
    rng: &mut R,
    props: &[Proposition],
    max_prefix: usize,
    max_loop: usize,
) -> LassoTrace {
    let np = rng.random_range(0..=max_prefix);
    let nl = rng.random_range(1..=max_loop.max(1));
    let prefix = (0..np).map(|_| random_assignment(rng, props)).collect();
    let cycle = (0..nl).map(|_| random_assignment(rng, props)).collect();
    LassoTrace::new(prefix, cycle).expect("loop is nonempty")
}
