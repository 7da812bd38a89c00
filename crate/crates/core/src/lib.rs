//! Quantum channel masking: decide whether a family of channels can be hidden
//! from both halves of a bipartite isometric broadcast, build the isometry when
//! it can, and check the result numerically.
//!
//! - [`linalg`]: dense complex matrices, partial traces, eigenbases.
//! - [`channels`]: channel representations, Choi matrices, Bloch affine form.
//! - [`masking`]: decision procedures and masker synthesis per channel class.
//! - [`verify`]: brute-force comparison of reduced channels through a masker.

pub mod channels;
pub mod error;
pub mod gates;
pub mod linalg;
pub mod masking;
pub mod sample;
pub mod verify;

pub use channels::{
    Axis, BlochAffine, ChannelSpec, ClassicalChannel, KrausChannel, PauliFourVector,
    PureFixedPointResult,
};
pub use error::{Error, Result};
pub use linalg::{BipartiteDims, ComplexMatrix, Subsystem};
pub use masking::{Certificate, Family, GateFamily, Masker, MaskingDecision, Witness};
pub use num_complex::Complex64;
pub use verify::VerificationReport;
