//! Encodings for external learners: typed-edge formula graphs, prefix
//! token streams, proposition feature vectors and grid observations.
//!
//! Token vocabulary: the nine operators below at indices 0–8, followed by
//! the propositions in vocabulary order. Graph edges run child → parent and
//! every node carries one self-loop.

use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::envs::{EnvConfig, EnvState, GRID};
use crate::error::{Error, Result};
use crate::ltl::{render, Formula, Notation, Vocabulary};
use crate::rng::{derive_seed, Stream};

pub const GRAPH_SCHEMA: &str = "ltl-tasks/graph/v1";
pub const TOKENS_SCHEMA: &str = "ltl-tasks/prefix/v1";
pub const OBSERVATION_SCHEMA: &str = "ltl-tasks/observation/v1";

pub const OPERATORS: [&str; 9] = ["true", "false", "!", "&", "|", "X", "U", "F", "G"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeType {
    SelfLoop,
    Unary,
    BinaryLeft,
    BinaryRight,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum NodeFeatureMode {
    /// Standard basis vector over operators then propositions.
    OneHot,
    /// Operators one-hot over the first nine slots; propositions a seeded
    /// unit vector in the trailing `dim` slots.
    RandomFixed { dim: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Node {
    pub id: usize,
    pub token: String,
    #[serde(serialize_with = "as_decimal_strings")]
    pub features: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub src: usize,
    #[serde(rename = "type")]
    pub kind: EdgeType,
    pub dst: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LabeledGraph {
    pub schema: &'static str,
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
    pub root: usize,
}

fn as_decimal_strings<S: serde::Serializer>(
    v: &[f64],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

/// Seeded unit vector for proposition `name`; independent of where the
/// proposition appears.
pub fn proposition_embedding(name: &str, dim: usize, seed: u64) -> Vec<f64> {
    let mut rng = Stream::seed_from_u64(derive_seed(seed, name));
    loop {
        let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-9 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

pub fn feature_len(vocab: &Vocabulary, mode: NodeFeatureMode) -> usize {
    match mode {
        NodeFeatureMode::OneHot => OPERATORS.len() + vocab.len(),
        NodeFeatureMode::RandomFixed { dim, .. } => OPERATORS.len() + dim,
    }
}

/// Stable index of `token` in the token vocabulary.
pub fn token_index(token: &str, vocab: &Vocabulary) -> Result<usize> {
    if let Some(i) = OPERATORS.iter().position(|&o| o == token) {
        return Ok(i);
    }
    vocab
        .lookup(token)
        .and_then(|p| vocab.index_of(p))
        .map(|i| OPERATORS.len() + i)
        .ok_or_else(|| Error::UnknownToken(token.to_string()))
}

pub fn encode_features(token: &str, vocab: &Vocabulary, mode: NodeFeatureMode) -> Result<Vec<f64>> {
    let i = token_index(token, vocab)?;
    let mut v = vec![0.0; feature_len(vocab, mode)];
    match mode {
        NodeFeatureMode::RandomFixed { dim, seed } if i >= OPERATORS.len() => {
            v[OPERATORS.len()..].copy_from_slice(&proposition_embedding(token, dim, seed));
        }
        _ => v[i] = 1.0,
    }
    Ok(v)
}

/// One node per AST node in pre-order (the root is node 0).
pub fn formula_to_graph(
    f: &Formula,
    vocab: &Vocabulary,
    mode: NodeFeatureMode,
) -> Result<LabeledGraph> {
    fn visit(
        f: &Formula,
        parent: Option<(usize, EdgeType)>,
        vocab: &Vocabulary,
        mode: NodeFeatureMode,
        g: &mut LabeledGraph,
    ) -> Result<()> {
        let id = g.nodes.len();
        let token = crate::ltl::token(f).to_string();
        g.nodes.push(Node {
            id,
            features: encode_features(&token, vocab, mode)?,
            token,
        });
        g.edges.push(Edge {
            src: id,
            kind: EdgeType::SelfLoop,
            dst: id,
        });
        if let Some((p, kind)) = parent {
            g.edges.push(Edge {
                src: id,
                kind,
                dst: p,
            });
        }
        match f.children().as_slice() {
            [c] => visit(c, Some((id, EdgeType::Unary)), vocab, mode, g),
            [l, r] => {
                visit(l, Some((id, EdgeType::BinaryLeft)), vocab, mode, g)?;
                visit(r, Some((id, EdgeType::BinaryRight)), vocab, mode, g)
            }
            _ => Ok(()),
        }
    }
    let mut g = LabeledGraph {
        schema: GRAPH_SCHEMA,
        nodes: Vec::new(),
        edges: Vec::new(),
        root: 0,
    };
    visit(f, None, vocab, mode, &mut g)?;
    Ok(g)
}

/// Rebuilds the formula from node tokens and typed tree edges.
pub fn graph_to_formula(g: &LabeledGraph) -> Result<Formula> {
    let n = g.nodes.len();
    let mut unary = vec![None; n];
    let mut left = vec![None; n];
    let mut right = vec![None; n];
    for e in &g.edges {
        let slot = match e.kind {
            EdgeType::SelfLoop => continue,
            EdgeType::Unary => &mut unary,
            EdgeType::BinaryLeft => &mut left,
            EdgeType::BinaryRight => &mut right,
        };
        if e.dst >= n || slot[e.dst].replace(e.src).is_some() {
            return Err(Error::InvalidParams(format!(
                "malformed graph edge into node {}",
                e.dst
            )));
        }
    }
    fn build(
        i: usize,
        g: &LabeledGraph,
        u: &[Option<usize>],
        l: &[Option<usize>],
        r: &[Option<usize>],
        depth: usize,
    ) -> Result<Formula> {
        if depth > g.nodes.len() {
            return Err(Error::InvalidParams("graph has a cycle".into()));
        }
        let bad = || Error::InvalidParams(format!("node {i} has the wrong children"));
        let child = |c: Option<usize>| -> Result<Formula> {
            build(c.ok_or_else(bad)?, g, u, l, r, depth + 1)
        };
        Ok(match g.nodes[i].token.as_str() {
            "true" => Formula::True,
            "false" => Formula::False,
            "!" => Formula::not(child(u[i])?),
            "X" => Formula::next(child(u[i])?),
            "F" => Formula::eventually(child(u[i])?),
            "G" => Formula::always(child(u[i])?),
            "&" => Formula::and(child(l[i])?, child(r[i])?),
            "|" => Formula::or(child(l[i])?, child(r[i])?),
            "U" => Formula::until(child(l[i])?, child(r[i])?),
            name => Formula::prop(name)?,
        })
    }
    if g.root >= n {
        return Err(Error::InvalidParams("root out of range".into()));
    }
    build(g.root, g, &unary, &left, &right, 0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrefixTokens {
    pub schema: &'static str,
    pub formula: String,
    pub tokens: Vec<String>,
    pub indices: Vec<usize>,
}

pub fn prefix_tokens(f: &Formula, vocab: &Vocabulary) -> Result<PrefixTokens> {
    let text = render(f, Notation::Prefix);
    let tokens: Vec<String> = text.split(' ').map(str::to_string).collect();
    let indices = tokens
        .iter()
        .map(|t| token_index(t, vocab))
        .collect::<Result<_>>()?;
    Ok(PrefixTokens {
        schema: TOKENS_SCHEMA,
        formula: render(f, Notation::Infix),
        tokens,
        indices,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum View {
    /// Planes cover the grid in absolute coordinates.
    Absolute,
    /// A (2·7−1)² crop centered on the agent, padded with empty cells.
    Egocentric,
}

/// LetterWorld observation as channel-major planes `[channel][row][col]`.
///
/// OneHot: one plane per letter then the agent plane. RandomFixed: `dim`
/// planes holding the letter's embedding then the agent plane. Planes are
/// returned as JSON numbers (one-hot) or decimal strings (embeddings).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Observation {
    pub schema: &'static str,
    pub view: View,
    pub shape: [usize; 3],
    pub agent: [usize; 2],
    pub planes: Value,
}

pub fn observation(
    config: &EnvConfig,
    state: &EnvState,
    mode: NodeFeatureMode,
    view: View,
) -> Result<Observation> {
    let EnvState::LetterWorld { row, col, layout } = state else {
        return Err(Error::InvalidParams(
            "grid observations exist for LetterWorld only".into(),
        ));
    };
    let letters = config.vocabulary();
    let channels = match mode {
        NodeFeatureMode::OneHot => letters.len(),
        NodeFeatureMode::RandomFixed { dim, .. } => dim,
    };
    let side = match view {
        View::Absolute => GRID,
        View::Egocentric => 2 * GRID - 1,
    };
    let mut planes = vec![vec![vec![0.0f64; side]; side]; channels + 1];
    #[allow(clippy::needless_range_loop)] // (r, c) index several planes at once
    for r in 0..side {
        for c in 0..side {
            let (gr, gc) = match view {
                View::Absolute => (r as isize, c as isize),
                View::Egocentric => (
                    *row as isize + r as isize - (GRID as isize - 1),
                    *col as isize + c as isize - (GRID as isize - 1),
                ),
            };
            if gr < 0 || gc < 0 || gr >= GRID as isize || gc >= GRID as isize {
                continue;
            }
            let (gr, gc) = (gr as usize, gc as usize);
            if (gr, gc) == (*row, *col) {
                planes[channels][r][c] = 1.0;
            }
            if let Some(p) = layout.letter_at(gr, gc) {
                match mode {
                    NodeFeatureMode::OneHot => {
                        planes[letters.index_of(p).expect("layout letter")][r][c] = 1.0
                    }
                    NodeFeatureMode::RandomFixed { dim, seed } => {
                        for (k, x) in proposition_embedding(p.name(), dim, seed)
                            .into_iter()
                            .enumerate()
                        {
                            planes[k][r][c] = x;
                        }
                    }
                }
            }
        }
    }
    let planes = match mode {
        NodeFeatureMode::OneHot => json!(planes
            .iter()
            .map(|p| p
                .iter()
                .map(|row| row.iter().map(|&x| x as u8).collect::<Vec<_>>())
                .collect::<Vec<_>>())
            .collect::<Vec<_>>()),
        NodeFeatureMode::RandomFixed { .. } => json!(planes
            .iter()
            .map(|p| p
                .iter()
                .map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>())
            .collect::<Vec<_>>()),
    };
    let (r, c) = match view {
        View::Absolute => (*row, *col),
        View::Egocentric => (GRID - 1, GRID - 1),
    };
    Ok(Observation {
        schema: OBSERVATION_SCHEMA,
        view,
        shape: [channels + 1, side, side],
        agent: [r, c],
        planes,
    })
}

/// Deterministic pretty JSON for any export payload.
pub fn to_json<T: Serialize>(payload: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(payload)?)
}
