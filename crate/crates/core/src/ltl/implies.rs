//! Sound, incomplete syntactic entailment.

use std::cell::RefCell;
use std::collections::HashMap;

use super::{simplify, Formula};

/// `true` only if `f` entails `g` on every trace. Both sides are simplified
/// first so that reflexivity holds up to canonical form. `false` means "no
/// rule applies", not "does not entail".
pub fn implies_syntactic(f: &Formula, g: &Formula) -> bool {
    implies(&simplify(f), &simplify(g))
}

/// Syntactic entailment between simplified formulas.
///
/// Progression keeps most of a formula unchanged from one step to the next,
/// so the same top-level pairs are queried over and over; their answers are
/// cached per thread (the relation is a pure function of its arguments).
pub(crate) fn implies(f: &Formula, g: &Formula) -> bool {
    if f == g || f.is_false() || g.is_true() {
        return true;
    }
    let key = (f.clone(), g.clone());
    if let Some(v) = CACHE.with(|c| c.borrow().get(&key).copied()) {
        return v;
    }
    let v = rules_memo(f, g);
    CACHE.with(|c| {
        let mut c = c.borrow_mut();
        if c.len() >= CACHE_LIMIT {
            c.clear();
        }
        c.insert(key, v);
    });
    v
}

const CACHE_LIMIT: usize = 1 << 16;

thread_local! {
    static CACHE: RefCell<HashMap<(Formula, Formula), bool>> = RefCell::new(HashMap::new());
}

/// Memo for one top-level query, keyed by node address: subtrees are
/// shared and immutable, so addresses are stable for the query's duration.
#[derive(Default)]
struct Memo(HashMap<(bool, usize, usize), bool>);

fn addr(f: &Formula) -> usize {
    f as *const Formula as usize
}

fn rules_memo(f: &Formula, g: &Formula) -> bool {
    let mut memo = Memo::default();
    memo.rules(f, g)
}

impl Memo {
    fn entails(&mut self, f: &Formula, g: &Formula) -> bool {
        if f == g || f.is_false() || g.is_true() {
            return true;
        }
        let key = (false, addr(f), addr(g));
        if let Some(&v) = self.0.get(&key) {
            return v;
        }
        let v = self.rules(f, g);
        self.0.insert(key, v);
        v
    }

    /// Every recursive call strictly shrinks `size(f) + size(g)`.
    fn rules(&mut self, f: &Formula, g: &Formula) -> bool {
        use Formula::*;

        if let Or(a, b) = f {
            if self.entails(a, g) && self.entails(b, g) {
                return true;
            }
        }
        if let And(a, b) = g {
            return self.entails(f, a) && self.entails(f, b);
        }
        if let Or(a, b) = g {
            if self.entails(f, a) || self.entails(f, b) {
                return true;
            }
        }
        if let And(a, b) = f {
            if self.entails(a, g) || self.entails(b, g) {
                return true;
            }
        }
        match f {
            Always(a) if self.entails(a, g) => return true,
            // φ U ψ entails ♦ψ.
            Until(_, b) if self.eventually_entails(b, g) => return true,
            _ => {}
        }
        match g {
            Eventually(b) => {
                if self.entails(f, b) {
                    return true;
                }
                if let Eventually(a) = f {
                    if self.entails(a, b) || self.entails(a, g) {
                        return true;
                    }
                }
            }
            Until(_, b) if self.entails(f, b) => return true,
            _ => {}
        }
        false
    }

    /// Whether `♦b` entails `g`: the rules above specialized to `f = ♦b`.
    fn eventually_entails(&mut self, b: &Formula, g: &Formula) -> bool {
        use Formula::*;

        if g.is_true() || matches!(g, Eventually(x) if x.as_ref() == b) {
            return true;
        }
        let key = (true, addr(b), addr(g));
        if let Some(&v) = self.0.get(&key) {
            return v;
        }
        let v = match g {
            And(x, y) => self.eventually_entails(b, x) && self.eventually_entails(b, y),
            Or(x, y) => self.eventually_entails(b, x) || self.eventually_entails(b, y),
            Eventually(x) => {
                self.eventually_entails(b, x) || self.entails(b, x) || self.entails(b, g)
            }
            Until(_, x) => self.eventually_entails(b, x),
            _ => false,
        };
        self.0.insert(key, v);
        v
    }
}
