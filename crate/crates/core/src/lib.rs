//! Online PCA against an adversary.
//!
//! The central learner is Follow the Perturbed Leader with Gaussian
//! orthogonal ensemble noise ([`learners::FplLearner`]): each trial it plays
//! the top-k eigenspace of the cumulative data matrix plus `√t·N`. Around it
//! sit the eigensolvers it needs ([`eigen`]), the noise generators
//! ([`perturb`]), baseline learners, instance-stream generators
//! ([`streams`]) and a regret-accounting experiment driver ([`harness`]).
//!
//! ```
//! use online_pca::eigen::EigenConfig;
//! use online_pca::learners::{default_sigma2, FplLearner, OnlineLearner};
//! use online_pca::perturb::NoiseMode;
//! use online_pca::streams::{generate, StreamKind, StreamSpec};
//!
//! let (n, k) = (8, 2);
//! let stream = generate(&StreamSpec::new(StreamKind::SparseIid { spike: 4.0 }, n, 200, 1)).unwrap();
//! let sigma2 = default_sigma2(n, k, true);
//! let mut fpl = FplLearner::new(n, k, sigma2, NoiseMode::FixedScaled, 7, EigenConfig::default()).unwrap();
//! let mut total = 0.0;
//! for x in &stream {
//!     total += fpl.predict().unwrap().gain(x);
//!     fpl.update(x).unwrap();
//! }
//! assert!(total > 0.0 && total <= 200.0);
//! ```

pub mod eigen;
pub mod error;
pub mod harness;
pub mod learners;
pub mod matrix;
pub mod perturb;
pub mod streams;

pub use error::{Error, Result};
pub use matrix::{gain, trace_inner_product, Instance, ProjectionBasis, SymmetricMatrix};
