use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("distance must be positive, got {0} m")]
    NonPositiveDistance(f64),

    #[error("optimal throughput must be positive, got {0} Mbps")]
    NonPositiveOptimum(f64),

    #[error("could not place STA of WN {wn} inside the map after {attempts} attempts")]
    Placement { wn: usize, attempts: usize },

    #[error(
        "exhaustive search over {profiles} profiles exceeds the cap of {cap}; \
         reduce the number of WNs or use the max-aggregate sampling mode"
    )]
    SearchTooLarge { profiles: f64, cap: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the CLI: 1 for configuration problems,
    /// 2 for everything that goes wrong at run time.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 1,
            _ => 2,
        }
    }
}
