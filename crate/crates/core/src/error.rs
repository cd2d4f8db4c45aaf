use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Arguments violate an operation's precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Index tuple is unsorted, repeated or out of range.
    #[error("invalid indices {indices:?}: {reason}")]
    InvalidIndices { indices: Vec<usize>, reason: String },

    /// A brute-force enumeration would exceed its configured cap.
    #[error("{what} exceeds cap: {size} > {cap}")]
    CapExceeded { what: &'static str, size: u128, cap: u128 },

    /// The selected points (or vectors) do not span the expected dimension.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// The simplex hit its iteration cap or lost numerical control.
    #[error("ill-conditioned linear program after {iterations} iterations")]
    IllConditioned { iterations: usize },

    #[error("integer overflow in exact rank computation")]
    Overflow,
}

impl Error {
    pub(crate) fn indices(indices: &[usize], reason: impl Into<String>) -> Self {
        Error::InvalidIndices { indices: indices.to_vec(), reason: reason.into() }
    }

    /// True for per-sample numerical failures that a Monte Carlo driver
    /// discards and resamples.
    pub fn is_sample_degeneracy(&self) -> bool {
        matches!(self, Error::Degenerate(_) | Error::IllConditioned { .. })
    }
}
