//! Myopic guidance: what making a single proposition true would do to the
//! current task.

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ltl::{
    progress, render, simplify, Formula, Notation, Proposition, TruthAssignment, Vocabulary,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PropositionEffect {
    Progress,
    NoEffect,
    Falsify,
}

/// One effect per vocabulary proposition, in vocabulary order. Serializes
/// as a JSON object keyed by proposition name.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Classification(Vec<(Proposition, PropositionEffect)>);

impl Classification {
    pub fn get(&self, p: &Proposition) -> Option<PropositionEffect> {
        self.0.iter().find(|(q, _)| q == p).map(|&(_, e)| e)
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Proposition, PropositionEffect)> {
        self.0.iter()
    }

    pub fn effects(&self) -> Vec<PropositionEffect> {
        self.0.iter().map(|&(_, e)| e).collect()
    }
}

impl Serialize for Classification {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (p, e) in &self.0 {
            m.serialize_entry(p.name(), e)?;
        }
        m.end()
    }
}

/// Progress if `{p}` changes the task (including completing it), Falsify if
/// it makes the task false, NoEffect otherwise.
pub fn classify_propositions(f: &Formula, vocab: &Vocabulary) -> Result<Classification> {
    if f.is_resolved() {
        return Err(Error::ResolvedFormula(render(f, Notation::Infix)));
    }
    let current = simplify(f);
    Ok(Classification(
        vocab
            .iter()
            .map(|p| {
                let next = progress(&TruthAssignment::singleton(p.clone()), f);
                let effect = if next.is_false() {
                    PropositionEffect::Falsify
                } else if next == current {
                    PropositionEffect::NoEffect
                } else {
                    PropositionEffect::Progress
                };
                (p.clone(), effect)
            })
            .collect(),
    ))
}
