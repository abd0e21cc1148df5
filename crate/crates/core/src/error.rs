use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown proposition `{0}`")]
    UnknownProposition(String),

    #[error("invalid proposition name `{0}`")]
    InvalidProposition(String),

    #[error("duplicate proposition `{0}` in vocabulary")]
    DuplicateProposition(String),

    #[error("progression closure exceeded cap {cap} (closed {closed}, frontier {frontier})")]
    ClosureCapExceeded {
        cap: usize,
        closed: usize,
        frontier: usize,
    },

    #[error("product state count exceeded cap {cap}")]
    StateCapExceeded { cap: usize },

    #[error("vocabulary too small: need {needed} propositions, have {available}")]
    VocabularyTooSmall { needed: usize, available: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid action {action} for {env} environment")]
    InvalidAction { action: String, env: &'static str },

    #[error("cannot step a terminal product state")]
    TerminalStep,

    #[error("search budget of {budget} nodes exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("formula is already resolved to `{0}`")]
    ResolvedFormula(String),

    #[error("unknown token `{0}`")]
    UnknownToken(String),

    #[error("not enumerable: {0}")]
    NotEnumerable(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
