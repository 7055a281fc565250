use thiserror::Error;

/// Errors raised across the simulation and reconstruction pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("simulation diverged at t = {time}: non-finite drive for neuron {neuron}")]
    Divergence { time: f64, neuron: usize },

    #[error("input variant not supported by the event-driven simulator: {0}")]
    UnsupportedInput(String),

    #[error("event cap of {cap} exceeded at t = {time}; switching may not be finite")]
    EventExplosion { cap: usize, time: f64 },

    #[error("time {time} outside evaluation domain ({lo}, {hi}]")]
    Domain { time: f64, lo: f64, hi: f64 },

    #[error("neuron {neuron}: firing onset at t = {time} coincides with an input discontinuity")]
    OnsetAtDiscontinuity { neuron: usize, time: f64 },

    #[error("neuron {0} has no usable firing onsets; its row cannot be recovered")]
    EmptySystem(usize),

    #[error("exhaustive check limited to n <= {max}, got n = {n}; use the sampled check instead")]
    TooLarge { n: usize, max: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by bad user input rather than numerics.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Config(_)
                | Error::Dimension(_)
                | Error::UnsupportedInput(_)
                | Error::TooLarge { .. }
                | Error::Io(_)
                | Error::Json(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
