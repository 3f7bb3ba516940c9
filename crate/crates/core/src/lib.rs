//! Genuine multipartite correlations of every order, and their weighted sum
//! (the *weaving*), for classical and quantum states.
//!
//! The correlations of order higher than `k` in an `N`-partite state are its
//! relative-entropy distance to the closest product of marginals over
//! clusters of at most `k` subsystems. Differences between consecutive
//! orders give the genuine `k`-partite correlations; weighting and summing
//! them gives the weaving.
//!
//! ```
//! use weaving::{families, correlations::{profile, SearchMode}};
//!
//! let rho = families::make_classical(5, 2)?;
//! let p = profile(&rho, SearchMode::Brute)?;
//! assert_eq!(p.genuine.iter().map(|x| x.round() as i64).collect::<Vec<_>>(), [2, 1, 0, 1]);
//! # Ok::<(), weaving::Error>(())
//! ```

pub mod channel;
pub mod cli;
pub mod closed_forms;
pub mod correlations;
pub mod error;
pub mod families;
pub mod limits;
pub mod partitions;
pub mod properties;
pub mod random;
pub mod state;

pub use channel::{apply_channel, KrausChannel};
pub use closed_forms::ClosedFormFamily;
pub use correlations::{
    dist_to_pk, multi_information, neural_complexity, profile, weaving, CorrelationProfile,
    FillPolicy, SearchMode, SubsetEntropyCache, WeightRule, WeightScheme,
};
pub use error::{Error, Result};
pub use families::StateFamily;
pub use partitions::{compact_partition, count_partitions, enumerate_partitions, SetPartition};
pub use state::{partial_trace, relative_entropy, tensor_product, vn_entropy, DensityState};

/// Crate version reported in JSON output.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
