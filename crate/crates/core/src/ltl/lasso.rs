//! Ultimately periodic traces and a direct evaluator of LTL semantics over
//! them. The evaluator shares no code with progression or simplification so
//! it can serve as an oracle for both.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{Formula, TruthAssignment};

/// `prefix · loop^ω`. The loop is never empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LassoTrace {
    prefix: Vec<TruthAssignment>,
    cycle: Vec<TruthAssignment>,
}

impl LassoTrace {
    pub fn new(prefix: Vec<TruthAssignment>, cycle: Vec<TruthAssignment>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::InvalidParams("lasso loop must be nonempty".into()));
        }
        Ok(LassoTrace { prefix, cycle })
    }

    pub fn prefix(&self) -> &[TruthAssignment] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[TruthAssignment] {
        &self.cycle
    }

    /// Number of distinct positions before the trace repeats.
    pub fn period_end(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    /// Canonical representative of position `i` in `0..period_end()`.
    pub fn fold(&self, i: usize) -> usize {
        let n = self.prefix.len();
        if i < n {
            i
        } else {
            n + (i - n) % self.cycle.len()
        }
    }

    pub fn at(&self, i: usize) -> &TruthAssignment {
        let n = self.prefix.len();
        if i < n {
            &self.prefix[i]
        } else {
            &self.cycle[(i - n) % self.cycle.len()]
        }
    }

    /// The trace with its first `k` positions dropped.
    pub fn suffix(&self, k: usize) -> LassoTrace {
        let n = self.prefix.len();
        if k <= n {
            return LassoTrace {
                prefix: self.prefix[k..].to_vec(),
                cycle: self.cycle.clone(),
            };
        }
        let shift = (k - n) % self.cycle.len();
        let mut cycle = self.cycle[shift..].to_vec();
        cycle.extend_from_slice(&self.cycle[..shift]);
        LassoTrace {
            prefix: Vec::new(),
            cycle,
        }
    }

    fn succ(&self, i: usize) -> usize {
        if i + 1 < self.period_end() {
            i + 1
        } else {
            self.prefix.len()
        }
    }
}

/// `⟨σ, i⟩ ⊨ f`.
pub fn eval_lasso(trace: &LassoTrace, i: usize, f: &Formula) -> bool {
    truth_table(trace, f)[trace.fold(i)]
}

/// Truth of `f` at each canonical position `0..period_end()`. Until and
/// eventually are least fixpoints, always a greatest fixpoint, iterated over
/// the successor graph of the lasso until stable.
fn truth_table(trace: &LassoTrace, f: &Formula) -> Vec<bool> {
    let n = trace.period_end();
    match f {
        Formula::True => vec![true; n],
        Formula::False => vec![false; n],
        Formula::Prop(p) => (0..n).map(|i| trace.at(i).contains(p)).collect(),
        Formula::Not(a) => truth_table(trace, a).into_iter().map(|v| !v).collect(),
        Formula::And(a, b) => zip(truth_table(trace, a), truth_table(trace, b), |x, y| x && y),
        Formula::Or(a, b) => zip(truth_table(trace, a), truth_table(trace, b), |x, y| x || y),
        Formula::Next(a) => {
            let t = truth_table(trace, a);
            (0..n).map(|i| t[trace.succ(i)]).collect()
        }
        Formula::Until(a, b) => until(trace, &truth_table(trace, a), &truth_table(trace, b)),
        Formula::Eventually(a) => until(trace, &vec![true; n], &truth_table(trace, a)),
        Formula::Always(a) => {
            let hold = truth_table(trace, a);
            let mut val = vec![true; n];
            fixpoint(&mut val, |val, i| hold[i] && val[trace.succ(i)]);
            val
        }
    }
}

fn until(trace: &LassoTrace, hold: &[bool], goal: &[bool]) -> Vec<bool> {
    let mut val = vec![false; hold.len()];
    fixpoint(&mut val, |val, i| {
        goal[i] || (hold[i] && val[trace.succ(i)])
    });
    val
}

fn fixpoint(val: &mut [bool], step: impl Fn(&[bool], usize) -> bool) {
    loop {
        let mut changed = false;
        for i in (0..val.len()).rev() {
            let v = step(val, i);
            if v != val[i] {
                val[i] = v;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
}

fn zip(a: Vec<bool>, b: Vec<bool>, op: fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::parse;

    fn ta(s: &str) -> TruthAssignment {
        TruthAssignment::parse(s).unwrap()
    }

    fn lasso(prefix: &[&str], cycle: &[&str]) -> LassoTrace {
        LassoTrace::new(
            prefix.iter().map(|s| ta(s)).collect(),
            cycle.iter().map(|s| ta(s)).collect(),
        )
        .unwrap()
    }

    fn holds(t: &LassoTrace, i: usize, f: &str) -> bool {
        eval_lasso(t, i, &parse(f).unwrap())
    }

    #[test]
    fn eventually_witness_in_prefix() {
        assert!(holds(&lasso(&["R"], &[""]), 0, "F R"));
        assert!(!holds(&lasso(&["R"], &[""]), 1, "F R"));
    }

    #[test]
    fn eventually_never() {
        assert!(!holds(&lasso(&[], &[""]), 0, "F R"));
    }

    #[test]
    fn always_violated_in_prefix() {
        let t = lasso(&["", "B"], &[""]);
        assert!(!holds(&t, 0, "G !B"));
        assert!(holds(&t, 2, "G !B"));
    }

    #[test]
    fn recurrence_on_loop() {
        let t = lasso(&[], &["a", ""]);
        assert!(holds(&t, 0, "G F a"));
        assert!(!holds(&t, 0, "F G a"));
        assert!(holds(&t, 1, "X a"));
        assert!(holds(&t, 6, "a"));
        assert!(!holds(&t, 7, "a"));
    }

    #[test]
    fn until_requires_goal() {
        let t = lasso(&["a", "a"], &["b"]);
        assert!(holds(&t, 0, "a U b"));
        assert!(!holds(&lasso(&[], &["a"]), 0, "a U b"));
        assert!(!holds(&lasso(&["a", ""], &["b"]), 0, "a U b"));
    }

    #[test]
    fn suffix_matches_offset_evaluation() {
        let t = lasso(&["a", "b"], &["c", "a", ""]);
        for k in 0..9 {
            let s = t.suffix(k);
            for i in 0..6 {
                assert_eq!(s.at(i), t.at(i + k));
            }
        }
    }

    #[test]
    fn empty_loop_rejected() {
        assert!(LassoTrace::new(vec![], vec![]).is_err());
    }
}
