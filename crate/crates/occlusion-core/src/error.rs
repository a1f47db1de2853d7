use thiserror::Error;

/// Errors raised by the geometry, game and oracle layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid obstacle: {0}")]
    InvalidObstacle(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("point {0} lies inside the obstacle")]
    InsideObstacle(&'static str),
    #[error("horizon of the {side} side leaves the parametrized arc")]
    HorizonOffArc { side: &'static str },
    #[error("no horizon visible from the vantage point")]
    NoHorizon,
    #[error("tangency is not unique (segment runs along a flat side)")]
    AmbiguousTangency,
    #[error("state is in the target set: {0}")]
    InTarget(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("did not converge: {0}")]
    NonConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
