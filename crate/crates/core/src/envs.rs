//! Reward-free environments with labelling functions.
//!
//! All three environments are deterministic. Labels are read from the cell
//! the agent occupies *after* the action; off-grid and wall moves are no-ops.
//!
//! LockedRooms map (row 0 at the top, `S` is the start cell, `a`/`b` are
//! the doors of rooms A and B, `#` is wall):
//!
//! ```text
//! B..#####..B
//! ...a.S.b...
//! R..#####..G
//! ```
//!
//! Stepping from a door into its room locks that room: from then on moves
//! from the room back onto the door are no-ops.

use std::hash::{Hash, Hasher};
use std::sync::Arc;

use rand::seq::index::sample as sample_indices;
use rand::Rng;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ltl::{Proposition, TruthAssignment, Vocabulary};
use crate::rng::{stream, Stream};

pub const GRID: usize = 7;
const CENTER: (usize, usize) = (3, 3);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    North,
    South,
    East,
    West,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::North,
        Direction::South,
        Direction::East,
        Direction::West,
    ];

    fn delta(self) -> (isize, isize) {
        match self {
            Direction::North => (-1, 0),
            Direction::South => (1, 0),
            Direction::East => (0, 1),
            Direction::West => (0, -1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Action {
    Move(Direction),
    /// Bootcamp: make this proposition true.
    Emit(Proposition),
}

impl std::fmt::Display for Action {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Action::Move(d) => write!(f, "{}", format!("{d:?}").to_lowercase()),
            Action::Emit(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EnvKind {
    /// 7×7 grid, every letter on exactly two cells. Without a placement
    /// seed the layout is redrawn on every reset.
    LetterWorld {
        letters: Vocabulary,
        #[serde(default)]
        placement_seed: Option<u64>,
    },
    LockedRooms,
    Bootcamp {
        vocabulary: Vocabulary,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvConfig {
    #[serde(flatten)]
    pub kind: EnvKind,
    pub gamma: f64,
    pub timeout: usize,
}

/// A LetterWorld letter placement: cell → index into `letters`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LetterLayout {
    pub seed: u64,
    pub letters: Vocabulary,
    cells: Vec<Option<usize>>,
}

impl Hash for LetterLayout {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.seed.hash(h);
        self.cells.hash(h);
    }
}

impl LetterLayout {
    /// Uniform placement: 24 of the 48 non-center cells, letters assigned
    /// in vocabulary order two cells each.
    pub fn generate(letters: &Vocabulary, seed: u64) -> Result<Self> {
        let needed = 2 * letters.len();
        if needed > GRID * GRID - 1 {
            return Err(Error::InvalidParams(format!(
                "{} letters do not fit twice on a {GRID}x{GRID} grid",
                letters.len()
            )));
        }
        let free: Vec<usize> = (0..GRID * GRID)
            .filter(|&c| c != CENTER.0 * GRID + CENTER.1)
            .collect();
        let mut rng = stream(seed, 0);
        let mut cells = vec![None; GRID * GRID];
        for (k, i) in sample_indices(&mut rng, free.len(), needed)
            .iter()
            .enumerate()
        {
            cells[free[i]] = Some(k / 2);
        }
        Ok(LetterLayout {
            seed,
            letters: letters.clone(),
            cells,
        })
    }

    pub fn letter_at(&self, row: usize, col: usize) -> Option<&Proposition> {
        self.cells[row * GRID + col].and_then(|i| self.letters.get(i))
    }

    pub fn letter_index_at(&self, row: usize, col: usize) -> Option<usize> {
        self.cells[row * GRID + col]
    }

    /// Rows of the grid as text, `.` for unlabeled cells (single-character
    /// letter names only).
    pub fn ascii(&self) -> Vec<String> {
        (0..GRID)
            .map(|r| {
                (0..GRID)
                    .map(|c| match self.letter_at(r, c) {
                        Some(p) => p.name().chars().next().unwrap_or('?'),
                        None => '.',
                    })
                    .collect()
            })
            .collect()
    }
}

impl Serialize for LetterLayout {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Cell<'a> {
            row: usize,
            col: usize,
            letter: &'a str,
        }
        let cells: Vec<Cell> = (0..GRID * GRID)
            .filter_map(|i| {
                self.letter_at(i / GRID, i % GRID).map(|p| Cell {
                    row: i / GRID,
                    col: i % GRID,
                    letter: p.name(),
                })
            })
            .collect();
        let mut st = s.serialize_struct("LetterLayout", 3)?;
        st.serialize_field("seed", &self.seed)?;
        st.serialize_field("size", &[GRID, GRID])?;
        st.serialize_field("cells", &cells)?;
        st.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lock {
    None,
    LockedA,
    LockedB,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EnvState {
    LetterWorld {
        row: usize,
        col: usize,
        layout: Arc<LetterLayout>,
    },
    LockedRooms {
        row: usize,
        col: usize,
        lock: Lock,
    },
    Bootcamp,
}

impl EnvState {
    /// Agent cell, if the environment is a grid.
    pub fn cell(&self) -> Option<(usize, usize)> {
        match *self {
            EnvState::LetterWorld { row, col, .. } | EnvState::LockedRooms { row, col, .. } => {
                Some((row, col))
            }
            EnvState::Bootcamp => None,
        }
    }
}

impl Serialize for EnvState {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            EnvState::LetterWorld { row, col, layout } => {
                let mut st = s.serialize_struct("EnvState", 3)?;
                st.serialize_field("row", row)?;
                st.serialize_field("col", col)?;
                st.serialize_field("layout_seed", &layout.seed)?;
                st.end()
            }
            EnvState::LockedRooms { row, col, lock } => {
                let mut st = s.serialize_struct("EnvState", 3)?;
                st.serialize_field("row", row)?;
                st.serialize_field("col", col)?;
                st.serialize_field("lock", lock)?;
                st.end()
            }
            EnvState::Bootcamp => s.serialize_str("s0"),
        }
    }
}

impl std::fmt::Display for EnvState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EnvState::LetterWorld { row, col, .. } => write!(f, "({row},{col})"),
            EnvState::LockedRooms { row, col, lock } => write!(f, "({row},{col},{lock:?})"),
            EnvState::Bootcamp => f.write_str("s0"),
        }
    }
}

pub mod locked_rooms {
    //! Geometry of the LockedRooms grid.

    pub const ROWS: usize = 3;
    pub const COLS: usize = 11;
    pub const START: (usize, usize) = (1, 5);
    pub const DOOR_A: (usize, usize) = (1, 3);
    pub const DOOR_B: (usize, usize) = (1, 7);
    pub const MAP: [&str; ROWS] = ["B..#####..B", "...a.S.b...", "R..#####..G"];

    pub fn is_wall(row: usize, col: usize) -> bool {
        MAP[row].as_bytes()[col] == b'#'
    }

    pub fn in_room_a(col: usize) -> bool {
        col < DOOR_A.1
    }

    pub fn in_room_b(col: usize) -> bool {
        col > DOOR_B.1
    }

    /// Color at a cell, if any.
    pub fn color(row: usize, col: usize) -> Option<&'static str> {
        match MAP[row].as_bytes()[col] {
            b'B' => Some("B"),
            b'G' => Some("G"),
            b'R' => Some("R"),
            _ => None,
        }
    }
}

fn shift(row: usize, col: usize, d: Direction, rows: usize, cols: usize) -> Option<(usize, usize)> {
    let (dr, dc) = d.delta();
    let r = row.checked_add_signed(dr)?;
    let c = col.checked_add_signed(dc)?;
    (r < rows && c < cols).then_some((r, c))
}

impl EnvConfig {
    pub fn letter_world(placement_seed: Option<u64>) -> Self {
        EnvConfig {
            kind: EnvKind::LetterWorld {
                letters: Vocabulary::letters(12),
                placement_seed,
            },
            gamma: 0.94,
            timeout: 75,
        }
    }

    pub fn locked_rooms() -> Self {
        EnvConfig {
            kind: EnvKind::LockedRooms,
            gamma: 0.94,
            timeout: 75,
        }
    }

    pub fn bootcamp(vocabulary: Vocabulary) -> Self {
        EnvConfig {
            kind: EnvKind::Bootcamp { vocabulary },
            gamma: 0.9,
            timeout: 75,
        }
    }

    /// `letterworld`, `lockedrooms` or `bootcamp` with defaults;
    /// `bootcamp_vocab` is used by Bootcamp only.
    pub fn named(name: &str, bootcamp_vocab: &Vocabulary) -> Result<Self> {
        match name {
            "letterworld" => Ok(EnvConfig::letter_world(None)),
            "lockedrooms" => Ok(EnvConfig::locked_rooms()),
            "bootcamp" => Ok(EnvConfig::bootcamp(bootcamp_vocab.clone())),
            _ => Err(Error::InvalidParams(format!(
                "unknown environment `{name}`"
            ))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(Error::InvalidParams("gamma must lie in (0, 1]".into()));
        }
        if self.timeout == 0 {
            return Err(Error::InvalidParams("timeout must be positive".into()));
        }
        match &self.kind {
            EnvKind::LetterWorld { letters, .. } if letters.len() * 2 > GRID * GRID - 1 => {
                Err(Error::InvalidParams("too many letters for the grid".into()))
            }
            EnvKind::Bootcamp { vocabulary } if vocabulary.is_empty() => {
                Err(Error::InvalidParams("bootcamp vocabulary is empty".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            EnvKind::LetterWorld { .. } => "letterworld",
            EnvKind::LockedRooms => "lockedrooms",
            EnvKind::Bootcamp { .. } => "bootcamp",
        }
    }

    /// Propositions the labelling function can emit.
    pub fn vocabulary(&self) -> Vocabulary {
        match &self.kind {
            EnvKind::LetterWorld { letters, .. } => letters.clone(),
            EnvKind::LockedRooms => Vocabulary::new(["B", "G", "R"]).expect("valid names"),
            EnvKind::Bootcamp { vocabulary } => vocabulary.clone(),
        }
    }

    /// Every action, in index order (ties are broken toward lower indices).
    pub fn actions(&self) -> Vec<Action> {
        match &self.kind {
            EnvKind::Bootcamp { vocabulary } => {
                vocabulary.iter().cloned().map(Action::Emit).collect()
            }
            _ => Direction::ALL.iter().copied().map(Action::Move).collect(),
        }
    }

    /// Every label the environment can produce.
    pub fn label_alphabet(&self) -> Vec<TruthAssignment> {
        let mut out = vec![TruthAssignment::empty()];
        if let EnvKind::LockedRooms = self.kind {
            out.extend(
                ["B", "G", "R"].map(|c| TruthAssignment::singleton(Proposition::new(c).unwrap())),
            );
            return out;
        }
        out.extend(
            self.vocabulary()
                .iter()
                .cloned()
                .map(TruthAssignment::singleton),
        );
        if let EnvKind::Bootcamp { .. } = self.kind {
            out.remove(0);
        }
        out
    }

    /// Initial state. LetterWorld without a placement seed draws one from
    /// `rng`.
    pub fn reset<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<EnvState> {
        match &self.kind {
            EnvKind::LetterWorld {
                letters,
                placement_seed,
            } => {
                let seed = placement_seed.unwrap_or_else(|| rng.random());
                Ok(EnvState::LetterWorld {
                    row: CENTER.0,
                    col: CENTER.1,
                    layout: Arc::new(LetterLayout::generate(letters, seed)?),
                })
            }
            EnvKind::LockedRooms => Ok(EnvState::LockedRooms {
                row: locked_rooms::START.0,
                col: locked_rooms::START.1,
                lock: Lock::None,
            }),
            EnvKind::Bootcamp { .. } => Ok(EnvState::Bootcamp),
        }
    }

    /// The initial state when it does not depend on randomness.
    pub fn fixed_initial_state(&self) -> Result<EnvState> {
        if let EnvKind::LetterWorld {
            placement_seed: None,
            ..
        } = self.kind
        {
            return Err(Error::NotEnumerable(
                "LetterWorld needs a placement seed for a fixed initial state".into(),
            ));
        }
        self.reset(&mut stream(0, 0))
    }

    fn check_action(&self, state: &EnvState, action: &Action) -> Result<()> {
        let ok = match (&self.kind, state, action) {
            (EnvKind::LetterWorld { .. }, EnvState::LetterWorld { .. }, Action::Move(_)) => true,
            (EnvKind::LockedRooms, EnvState::LockedRooms { .. }, Action::Move(_)) => true,
            (EnvKind::Bootcamp { vocabulary }, EnvState::Bootcamp, Action::Emit(p)) => {
                vocabulary.contains(p)
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidAction {
                action: action.to_string(),
                env: self.name(),
            })
        }
    }

    pub fn step(&self, state: &EnvState, action: &Action) -> Result<EnvState> {
        self.check_action(state, action)?;
        Ok(match (state, action) {
            (EnvState::LetterWorld { row, col, layout }, Action::Move(d)) => {
                let (row, col) = shift(*row, *col, *d, GRID, GRID).unwrap_or((*row, *col));
                EnvState::LetterWorld {
                    row,
                    col,
                    layout: Arc::clone(layout),
                }
            }
            (EnvState::LockedRooms { row, col, lock }, Action::Move(d)) => {
                locked_rooms_step(*row, *col, *lock, *d)
            }
            _ => EnvState::Bootcamp,
        })
    }

    /// `L(s, a)`: what holds on the cell reached by `action`, or the emitted
    /// proposition in Bootcamp.
    pub fn label(&self, state: &EnvState, action: &Action) -> Result<TruthAssignment> {
        if let Action::Emit(p) = action {
            self.check_action(state, action)?;
            return Ok(TruthAssignment::singleton(p.clone()));
        }
        Ok(self.label_of(&self.step(state, action)?))
    }

    /// Label of occupying `state` (grid environments).
    pub fn label_of(&self, state: &EnvState) -> TruthAssignment {
        match state {
            EnvState::LetterWorld { row, col, layout } => layout
                .letter_at(*row, *col)
                .cloned()
                .map(TruthAssignment::singleton)
                .unwrap_or_default(),
            EnvState::LockedRooms { row, col, .. } => locked_rooms::color(*row, *col)
                .map(|c| TruthAssignment::singleton(Proposition::new(c).unwrap()))
                .unwrap_or_default(),
            EnvState::Bootcamp => TruthAssignment::empty(),
        }
    }

    /// Step and label together.
    pub fn transition(
        &self,
        state: &EnvState,
        action: &Action,
    ) -> Result<(EnvState, TruthAssignment)> {
        let next = self.step(state, action)?;
        let label = match action {
            Action::Emit(p) => TruthAssignment::singleton(p.clone()),
            Action::Move(_) => self.label_of(&next),
        };
        Ok((next, label))
    }

    /// The episode's layout, if the environment has one.
    pub fn layout_of(state: &EnvState) -> Option<&LetterLayout> {
        match state {
            EnvState::LetterWorld { layout, .. } => Some(layout),
            _ => None,
        }
    }
}

fn locked_rooms_step(row: usize, col: usize, lock: Lock, d: Direction) -> EnvState {
    use locked_rooms::*;
    let stay = EnvState::LockedRooms { row, col, lock };
    let Some((r, c)) = shift(row, col, d, ROWS, COLS) else {
        return stay;
    };
    if is_wall(r, c) {
        return stay;
    }
    // Leaving a locked room through its door is blocked.
    if (r, c) == DOOR_A && in_room_a(col) && lock == Lock::LockedA
        || (r, c) == DOOR_B && in_room_b(col) && lock == Lock::LockedB
    {
        return stay;
    }
    let lock = match lock {
        Lock::None if (row, col) == DOOR_A && in_room_a(c) => Lock::LockedA,
        Lock::None if (row, col) == DOOR_B && in_room_b(c) => Lock::LockedB,
        l => l,
    };
    EnvState::LockedRooms {
        row: r,
        col: c,
        lock,
    }
}

/// Every reachable environment state from the fixed initial state.
pub fn reachable_states(config: &EnvConfig) -> Result<Vec<EnvState>> {
    let start = config.fixed_initial_state()?;
    let actions = config.actions();
    let mut seen = std::collections::HashSet::from([start.clone()]);
    let mut order = vec![start];
    let mut i = 0;
    while i < order.len() {
        for a in &actions {
            let next = config.step(&order[i], a)?;
            if seen.insert(next.clone()) {
                order.push(next);
            }
        }
        i += 1;
    }
    Ok(order)
}

/// Uniform random policy helper: index of a random action.
pub fn random_action(config: &EnvConfig, rng: &mut Stream) -> Action {
    let actions = config.actions();
    actions[rng.random_range(0..actions.len())].clone()
}
