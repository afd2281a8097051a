//! Deterministic hard K-means and fuzzy C-means, with a harness that
//! compares the two on the same data.
//!
//! * [`kmeans`]: Lloyd iterations from sampled rows, replicated restarts.
//! * [`fcm`]: alternating center/membership updates with a selectable stop test.
//! * [`complexity`]: the `n·c·d·i` versus `n·c²·d·i` operation-count model.
//! * [`ingest`]: CSV loading, the bundled UCI Iris file, synthetic blobs.
//! * [`bench`] and [`plot`]: timed comparison runs, JSON reports, CSV plot data.
//!
//! All randomness flows through [`RandomStream`], a documented SplitMix64
//! generator, so a seed reproduces a run bit for bit on any platform.
//!
//! ```
//! use clusterbench::{ingest, kmeans::{run_kmeans_replicated, KMeansConfig}, RandomStream};
//!
//! let iris = ingest::iris().unwrap();
//! let config = KMeansConfig::new(3).with_replicates(5);
//! let result = run_kmeans_replicated(&iris.data, &config, &RandomStream::new(42)).unwrap();
//! assert!(result.best.total_sumd < 80.0);
//! ```

pub mod bench;
pub mod cli;
pub mod complexity;
mod error;
pub mod fcm;
pub mod ingest;
pub mod kmeans;
pub mod model;
pub mod plot;
pub mod rng;

pub use error::{ClusterError, Result};
pub use model::{squared_euclidean, validate_data, CentroidSet, DataMatrix, HardAssignment, MembershipMatrix};
pub use rng::{derive_stream, RandomStream};
