use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::error::{Error, Result};

use super::{progress, simplify, Formula, TruthAssignment};

/// Smallest set containing `phis` (simplified) that is closed under
/// progression by every assignment in `assignments`. Formulas are compared
/// structurally after simplification.
///
/// Fails with [`Error::ClosureCapExceeded`] once more than `cap` formulas
/// have been discovered.
pub fn closure(
    phis: &[Formula],
    assignments: &[TruthAssignment],
    cap: usize,
) -> Result<BTreeSet<Formula>> {
    let mut seen: HashSet<Formula> = HashSet::new();
    let mut queue = VecDeque::new();
    let exceeded = |seen: &HashSet<Formula>, queue: &VecDeque<Formula>| Error::ClosureCapExceeded {
        cap,
        closed: seen.len() - queue.len(),
        frontier: queue.len(),
    };
    for f in phis {
        let f = simplify(f);
        if seen.insert(f.clone()) {
            queue.push_back(f);
            if seen.len() > cap {
                return Err(exceeded(&seen, &queue));
            }
        }
    }
    while let Some(f) = queue.pop_front() {
        for sigma in assignments {
            let next = progress(sigma, &f);
            if seen.insert(next.clone()) {
                queue.push_back(next);
                if seen.len() > cap {
                    return Err(exceeded(&seen, &queue));
                }
            }
        }
    }
    Ok(seen.into_iter().collect())
}
