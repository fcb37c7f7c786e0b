use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A shift was requested on a state whose pre-allocated capacity is used up.
    #[error("walk capacity exceeded: state was allocated for {capacity} steps, step {requested} requested")]
    Capacity { capacity: usize, requested: usize },

    #[error("coin matrix is not unitary (max |m^dagger m - I| entry = {deviation:e})")]
    NonUnitary { deviation: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("network layout error: {0}")]
    Layout(String),

    #[error("step count mismatch: {left} vs {right}")]
    StepMismatch { left: usize, right: usize },
}
