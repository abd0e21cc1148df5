use super::{simplify, Formula, TruthAssignment};

/// Progresses `f` through one truth assignment and simplifies the residual.
/// `True`/`False` mean the obligation was met/violated.
pub fn progress(sigma: &TruthAssignment, f: &Formula) -> Formula {
    simplify(&progress_raw(sigma, f))
}

/// One progression step without simplification.
///
/// ♦ and □ use their unfoldings `♦φ ≡ φ ∨ ◯♦φ` and `□φ ≡ φ ∧ ◯□φ`.
pub fn progress_raw(sigma: &TruthAssignment, f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Prop(p) => {
            if sigma.contains(p) {
                Formula::True
            } else {
                Formula::False
            }
        }
        Formula::Not(a) => Formula::not(progress_raw(sigma, a)),
        Formula::And(a, b) => Formula::and(progress_raw(sigma, a), progress_raw(sigma, b)),
        Formula::Or(a, b) => Formula::or(progress_raw(sigma, a), progress_raw(sigma, b)),
        Formula::Next(a) => a.as_ref().clone(),
        Formula::Until(a, b) => Formula::or(
            progress_raw(sigma, b),
            Formula::and(progress_raw(sigma, a), f.clone()),
        ),
        Formula::Eventually(a) => Formula::or(progress_raw(sigma, a), f.clone()),
        Formula::Always(a) => Formula::and(progress_raw(sigma, a), f.clone()),
    }
}
