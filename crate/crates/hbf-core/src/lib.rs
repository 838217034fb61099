//! One-bit hybrid precoder/combiner design for mmWave MIMO, with a
//! clustered channel generator and a Monte-Carlo spectral-efficiency
//! harness.
//!
//! The pipeline per channel realization:
//! 1. [`channel`] draws a cluster-ray channel matrix for two ULAs.
//! 2. [`hybrid`] designs the one-bit analog precoder/combiner pair for each
//!    stream successively, selecting each column pair from the
//!    [`binaryopt`] candidate sets, then layers an SVD-based digital stage
//!    on the effective baseband channel.
//! 3. [`evaluate`] scores designs by achievable spectral efficiency and
//!    averages over seeded trials, alongside a full-digital upper bound, a
//!    naive sign-quantization baseline and (at small sizes) an exhaustive
//!    search oracle.
//!
//! Everything is deterministic for a fixed seed: the random streams are
//! per-trial `ChaCha8` streams, the linear algebra pins its phase
//! conventions, and all selections have fixed tie-breaks.

pub mod binaryopt;
pub mod channel;
pub mod evaluate;
pub mod hybrid;
pub mod linalg;

pub use binaryopt::{CandidateSet, SignVector};
pub use channel::{ChannelParams, ChannelRealization, UlaGeometry};
pub use evaluate::{ExperimentResult, ExperimentSpec, Sweep};
pub use hybrid::{DesignConfig, HybridBeamformer, SignMatrix, SystemConfig};
pub use linalg::ComplexMatrix;
