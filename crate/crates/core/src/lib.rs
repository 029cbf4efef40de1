//! Sunflower (Δ-system) toolkit: set families, extraction, bound evaluation,
//! exhaustive search and randomized experiments.

pub mod ball;
pub mod bounds;
pub mod error;
pub mod family;
pub mod harness;
pub mod oracle;
pub mod scalar;
pub mod sunflower;
pub mod surd;

pub use ball::Ball;
pub use bounds::LogValue;
pub use error::{Error, Result};
pub use family::{GroundSet, MemberSet, SetFamily};
pub use scalar::{Hp, Real};
pub use surd::QuadSurd;

/// Scalar used for certified bound evaluation (256-bit binary float).
pub type Precise = Hp;
/// Certified log-space value.
pub type PreciseLog = LogValue<Hp>;
/// Fast, uncertified-grade log-space value.
pub type FastLog = LogValue<f64>;
