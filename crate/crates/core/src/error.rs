use thiserror::Error;

/// Errors raised by the library. Parse errors live in [`crate::io::ParseError`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid game form: {0}")]
    InvalidForm(String),
    #[error("invalid game: {0}")]
    InvalidGame(String),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("invalid player index {player} (game has {players} players)")]
    InvalidPlayer { player: usize, players: usize },
    #[error("invalid arrival order: {0}")]
    InvalidOrder(String),
    #[error("invalid tie-break choice at arrival {position}: strategy {strategy} is not a best response")]
    InvalidTie { position: usize, strategy: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("form is not tree representable: {0}")]
    NotRepresentable(String),
    #[error("constructed tree does not represent the form (internal bug): {0}")]
    RepresentationBug(String),
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
