//! Linear temporal logic formulas over a finite proposition vocabulary.

mod closure;
mod implies;
mod lasso;
mod parse;
mod progress;
pub mod random;
mod render;
mod simplify;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use closure::closure;
pub use implies::implies_syntactic;
pub use lasso::{eval_lasso, LassoTrace};
pub use parse::{parse, parse_with, ParseMode};
pub use progress::{progress, progress_raw};
pub(crate) use render::token;
pub use render::{render, Notation};
pub use simplify::simplify;

/// Keywords that can never be used as proposition names.
const RESERVED: &[&str] = &["true", "false", "U"];

/// An atomic proposition, identified by name.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Proposition(Arc<str>);

impl Proposition {
    /// Names start with an ASCII letter and continue with letters, digits or
    /// underscores. `true`, `false` and `U` are reserved.
    pub fn new(name: &str) -> Result<Self> {
        if !is_valid_name(name) {
            return Err(Error::InvalidProposition(name.to_string()));
        }
        Ok(Proposition(Arc::from(name)))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && !RESERVED.contains(&name)
}

impl fmt::Debug for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for Proposition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Proposition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let name = String::deserialize(d)?;
        Proposition::new(&name).map_err(serde::de::Error::custom)
    }
}

/// An ordered set of propositions with stable positions `0..n`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary {
    props: Vec<Proposition>,
    index: HashMap<Proposition, usize>,
}

impl Vocabulary {
    pub fn new<S: AsRef<str>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let mut vocab = Vocabulary::default();
        for name in names {
            let p = Proposition::new(name.as_ref())?;
            if vocab.index.contains_key(&p) {
                return Err(Error::DuplicateProposition(p.name().to_string()));
            }
            vocab.push(p);
        }
        Ok(vocab)
    }

    /// The first `n` lowercase letters, `a`, `b`, ... (n ≤ 26).
    pub fn letters(n: usize) -> Self {
        assert!(n <= 26, "at most 26 letter propositions");
        Vocabulary::new((0..n).map(|i| ((b'a' + i as u8) as char).to_string()))
            .expect("letters are valid names")
    }

    fn push(&mut self, p: Proposition) -> usize {
        let i = self.props.len();
        self.index.insert(p.clone(), i);
        self.props.push(p);
        i
    }

    /// Returns the position of `p`, appending it if absent.
    pub fn insert(&mut self, p: Proposition) -> usize {
        match self.index.get(&p) {
            Some(&i) => i,
            None => self.push(p),
        }
    }

    pub fn index_of(&self, p: &Proposition) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn lookup(&self, name: &str) -> Option<&Proposition> {
        self.props.iter().find(|p| p.name() == name)
    }

    pub fn get(&self, i: usize) -> Option<&Proposition> {
        self.props.get(i)
    }

    pub fn len(&self) -> usize {
        self.props.len()
    }

    pub fn is_empty(&self) -> bool {
        self.props.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Proposition> {
        self.props.iter()
    }

    pub fn contains(&self, p: &Proposition) -> bool {
        self.index.contains_key(p)
    }

    pub fn names(&self) -> Vec<String> {
        self.props.iter().map(|p| p.name().to_string()).collect()
    }
}

impl Serialize for Vocabulary {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.props.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Vocabulary {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let names = Vec::<String>::deserialize(d)?;
        Vocabulary::new(names).map_err(serde::de::Error::custom)
    }
}

/// The set of propositions true at one time step.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TruthAssignment(BTreeSet<Proposition>);

impl TruthAssignment {
    pub fn empty() -> Self {
        TruthAssignment::default()
    }

    pub fn singleton(p: Proposition) -> Self {
        TruthAssignment(BTreeSet::from([p]))
    }

    pub fn contains(&self, p: &Proposition) -> bool {
        self.0.contains(p)
    }

    pub fn insert(&mut self, p: Proposition) {
        self.0.insert(p);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Proposition> {
        self.0.iter()
    }

    /// Parses a whitespace- or comma-separated list of names. `{}` and the
    /// empty string denote the empty assignment.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim().trim_start_matches('{').trim_end_matches('}');
        text.split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(Proposition::new)
            .collect()
    }
}

impl FromIterator<Proposition> for TruthAssignment {
    fn from_iter<I: IntoIterator<Item = Proposition>>(iter: I) -> Self {
        TruthAssignment(iter.into_iter().collect())
    }
}

impl fmt::Display for TruthAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(p.name())?;
        }
        f.write_str("}")
    }
}

/// An LTL abstract syntax tree. Subtrees are shared through `Arc`, so clones
/// are cheap and values can cross threads.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Prop(Proposition),
    Not(Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Next(Arc<Formula>),
    Until(Arc<Formula>, Arc<Formula>),
    Eventually(Arc<Formula>),
    Always(Arc<Formula>),
}

impl Formula {
    pub fn prop(name: &str) -> Result<Self> {
        Ok(Formula::Prop(Proposition::new(name)?))
    }

    /// Shorthand for tests and examples; panics on an invalid name.
    pub fn p(name: &str) -> Self {
        Formula::prop(name).expect("valid proposition name")
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Arc::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Arc::new(l), Arc::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Arc::new(l), Arc::new(r))
    }

    pub fn next(f: Formula) -> Self {
        Formula::Next(Arc::new(f))
    }

    pub fn until(l: Formula, r: Formula) -> Self {
        Formula::Until(Arc::new(l), Arc::new(r))
    }

    pub fn eventually(f: Formula) -> Self {
        Formula::Eventually(Arc::new(f))
    }

    pub fn always(f: Formula) -> Self {
        Formula::Always(Arc::new(f))
    }

    /// Right-associated conjunction; `True` for an empty list.
    pub fn and_all(items: impl IntoIterator<Item = Formula>) -> Self {
        fold_right(items.into_iter().collect(), Formula::True, Formula::and)
    }

    /// Right-associated disjunction; `False` for an empty list.
    pub fn or_all(items: impl IntoIterator<Item = Formula>) -> Self {
        fold_right(items.into_iter().collect(), Formula::False, Formula::or)
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Prop(_) => 1,
            Formula::Not(a) | Formula::Next(a) | Formula::Eventually(a) | Formula::Always(a) => {
                1 + a.size()
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Until(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    pub fn is_true(&self) -> bool {
        matches!(self, Formula::True)
    }

    pub fn is_false(&self) -> bool {
        matches!(self, Formula::False)
    }

    /// `True` or `False`: nothing left to progress.
    pub fn is_resolved(&self) -> bool {
        matches!(self, Formula::True | Formula::False)
    }

    /// Distinct propositions in first-occurrence (pre-order) order.
    pub fn propositions(&self) -> Vec<Proposition> {
        let mut out = Vec::new();
        self.visit_props(&mut |p| {
            if !out.contains(p) {
                out.push(p.clone());
            }
        });
        out
    }

    /// Proposition leaves in pre-order, repeats included.
    pub fn proposition_occurrences(&self) -> Vec<Proposition> {
        let mut out = Vec::new();
        self.visit_props(&mut |p| out.push(p.clone()));
        out
    }

    fn visit_props(&self, f: &mut impl FnMut(&Proposition)) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Prop(p) => f(p),
            Formula::Not(a) | Formula::Next(a) | Formula::Eventually(a) | Formula::Always(a) => {
                a.visit_props(f)
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Until(a, b) => {
                a.visit_props(f);
                b.visit_props(f);
            }
        }
    }

    /// Children in left-to-right order.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::True | Formula::False | Formula::Prop(_) => vec![],
            Formula::Not(a) | Formula::Next(a) | Formula::Eventually(a) | Formula::Always(a) => {
                vec![a]
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Until(a, b) => vec![a, b],
        }
    }

    /// Every proposition occurs in `vocab`.
    pub fn is_over(&self, vocab: &Vocabulary) -> bool {
        let mut ok = true;
        self.visit_props(&mut |p| ok &= vocab.contains(p));
        ok
    }
}

fn fold_right(
    items: Vec<Formula>,
    empty: Formula,
    join: fn(Formula, Formula) -> Formula,
) -> Formula {
    let mut iter = items.into_iter().rev();
    match iter.next() {
        None => empty,
        Some(last) => iter.fold(last, |acc, f| join(f, acc)),
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self, Notation::Infix))
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Formula({})", render(self, Notation::Infix))
    }
}

impl std::str::FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&render(self, Notation::Infix))
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}
