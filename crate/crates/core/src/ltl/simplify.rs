//! Sound rewrite system used after every progression step.
//!
//! Rules: constant folding, ∧/∨ identities and annihilators, double
//! negation, `F F φ → F φ`, `G G φ → G φ`, `true U φ → F φ`, `φ U φ → φ`,
//! flattening of nested ∧/∨ into a deduplicated list sorted by rendered
//! text, complementary pairs (`φ ∧ !φ`, `φ ∨ !φ`), and absorption through
//! [`implies`]: an entailed conjunct or an entailing disjunct is dropped.
//! Lists are rebuilt right-associated.
//!
//! The result never has more nodes than the input and is a fixed point.

use std::sync::Arc;

use super::implies::implies;
use super::{render, Formula, Notation};

pub fn simplify(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Prop(_) => f.clone(),
        Formula::Not(a) => mk_not(simplify(a)),
        Formula::Next(a) => mk_next(simplify(a)),
        Formula::Eventually(a) => mk_eventually(simplify(a)),
        Formula::Always(a) => mk_always(simplify(a)),
        Formula::Until(a, b) => mk_until(simplify(a), simplify(b)),
        Formula::And(..) => {
            let mut items = Vec::new();
            collect(f, Junction::And, &mut items);
            mk_junction(Junction::And, items)
        }
        Formula::Or(..) => {
            let mut items = Vec::new();
            collect(f, Junction::Or, &mut items);
            mk_junction(Junction::Or, items)
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Junction {
    And,
    Or,
}

impl Junction {
    fn split(self, f: &Formula) -> Option<(&Arc<Formula>, &Arc<Formula>)> {
        match (self, f) {
            (Junction::And, Formula::And(a, b)) | (Junction::Or, Formula::Or(a, b)) => Some((a, b)),
            _ => None,
        }
    }

    /// Neutral element: dropped from lists.
    fn unit(self) -> Formula {
        match self {
            Junction::And => Formula::True,
            Junction::Or => Formula::False,
        }
    }

    /// Absorbing element: collapses the list.
    fn zero(self) -> Formula {
        match self {
            Junction::And => Formula::False,
            Junction::Or => Formula::True,
        }
    }

    fn join(self, l: Formula, r: Formula) -> Formula {
        match self {
            Junction::And => Formula::and(l, r),
            Junction::Or => Formula::or(l, r),
        }
    }
}

/// Simplified operands of a maximal ∧ (or ∨) chain.
fn collect(f: &Formula, j: Junction, out: &mut Vec<Formula>) {
    match j.split(f) {
        Some((a, b)) => {
            collect(a, j, out);
            collect(b, j, out);
        }
        None => out.push(simplify(f)),
    }
}

fn flatten_into(f: Formula, j: Junction, out: &mut Vec<Formula>) {
    match j.split(&f) {
        Some((a, b)) => {
            let (a, b) = (a.as_ref().clone(), b.as_ref().clone());
            flatten_into(a, j, out);
            flatten_into(b, j, out);
        }
        None => out.push(f),
    }
}

/// Builds a normalized ∧/∨ from already-simplified operands.
fn mk_junction(j: Junction, items: Vec<Formula>) -> Formula {
    let mut flat = Vec::with_capacity(items.len());
    for f in items {
        flatten_into(f, j, &mut flat);
    }
    if flat.contains(&j.zero()) {
        return j.zero();
    }
    let unit = j.unit();
    let mut keyed: Vec<(String, Formula)> = flat
        .into_iter()
        .filter(|f| *f != unit)
        .map(|f| (render(&f, Notation::Infix), f))
        .collect();
    keyed.sort_by(|x, y| x.0.cmp(&y.0));
    keyed.dedup_by(|x, y| x.0 == y.0);
    let mut items: Vec<Formula> = keyed.into_iter().map(|(_, f)| f).collect();

    for f in &items {
        if let Formula::Not(inner) = f {
            if items.contains(inner) {
                return j.zero();
            }
        }
    }

    // Absorption. An item is dropped when another still-kept item makes it
    // redundant; checking against the kept set makes one pass a fixed point.
    let mut kept = vec![true; items.len()];
    for i in 0..items.len() {
        let redundant = (0..items.len()).any(|k| {
            k != i
                && kept[k]
                && match j {
                    Junction::And => implies(&items[k], &items[i]),
                    Junction::Or => implies(&items[i], &items[k]),
                }
        });
        if redundant {
            kept[i] = false;
        }
    }
    let mut idx = 0;
    items.retain(|_| {
        idx += 1;
        kept[idx - 1]
    });

    let mut iter = items.into_iter().rev();
    match iter.next() {
        None => unit,
        Some(last) => iter.fold(last, |acc, f| j.join(f, acc)),
    }
}

fn mk_not(a: Formula) -> Formula {
    match a {
        Formula::True => Formula::False,
        Formula::False => Formula::True,
        Formula::Not(inner) => inner.as_ref().clone(),
        _ => Formula::not(a),
    }
}

fn mk_next(a: Formula) -> Formula {
    match a {
        Formula::True | Formula::False => a,
        _ => Formula::next(a),
    }
}

fn mk_eventually(a: Formula) -> Formula {
    match a {
        Formula::True | Formula::False | Formula::Eventually(_) => a,
        _ => Formula::eventually(a),
    }
}

fn mk_always(a: Formula) -> Formula {
    match a {
        Formula::True | Formula::False | Formula::Always(_) => a,
        _ => Formula::always(a),
    }
}

fn mk_until(a: Formula, b: Formula) -> Formula {
    if b.is_resolved() || a.is_false() || a == b {
        return b;
    }
    if a.is_true() {
        return mk_eventually(b);
    }
    Formula::until(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::parse;

    fn s(text: &str) -> String {
        render(&simplify(&parse(text).unwrap()), Notation::Infix)
    }

    #[test]
    fn absorbs_entailing_disjunct() {
        assert_eq!(s("F G | F (R & F G)"), "F G");
        assert_eq!(s("F (R & F G) | F G"), "F G");
    }

    #[test]
    fn identities() {
        assert_eq!(s("a & true"), "a");
        assert_eq!(s("a | false"), "a");
        assert_eq!(s("a & false"), "false");
        assert_eq!(s("a | true"), "true");
        assert_eq!(s("!!a"), "a");
        assert_eq!(s("!true"), "false");
    }

    #[test]
    fn temporal_folding() {
        assert_eq!(s("F F a"), "F a");
        assert_eq!(s("G G a"), "G a");
        assert_eq!(s("true U a"), "F a");
        assert_eq!(s("true U F a"), "F a");
        assert_eq!(s("false U a"), "a");
        assert_eq!(s("a U true"), "true");
        assert_eq!(s("a U false"), "false");
        assert_eq!(s("F false"), "false");
        assert_eq!(s("G true"), "true");
        assert_eq!(s("X true"), "true");
        assert_eq!(s("a U a"), "a");
    }

    #[test]
    fn canonical_lists() {
        assert_eq!(s("c & (b & a)"), "a & b & c");
        assert_eq!(s("(c & a) & (b & a)"), "a & b & c");
        assert_eq!(s("b | a | b"), "a | b");
        assert_eq!(s("a & !a"), "false");
        assert_eq!(s("a | !a"), "true");
        // entailed conjunct is dropped
        assert_eq!(s("F a & a"), "a");
        assert_eq!(s("F b & F (a & F b)"), "F (F b & a)");
    }

    #[test]
    fn idempotent_on_examples() {
        for t in [
            "F (a & F b) | F b & c",
            "!(a U !b) & G G c",
            "(a | b) & (b | a)",
        ] {
            let once = simplify(&parse(t).unwrap());
            assert_eq!(simplify(&once), once, "{t}");
        }
    }
}
