//! Hybrid quantum-classical multi-modal trajectory forecaster, simulated on a
//! classical statevector backend.
//!
//! The pipeline maps an ego history to a lane-aligned frame, encodes it with a
//! 9-qubit attention-style circuit, refines the features through a stack of
//! feedforward circuits and decodes 16 residual trajectory modes on top of a
//! kinematic baseline. Parameters are trained with SPSA.

pub mod config;
pub mod encoder;
pub mod error;
pub mod metrics;
pub mod model;
pub mod plots;
pub mod qdecoder;
pub mod qffn;
pub mod qsim;
pub mod real;
pub mod scenario;
pub mod training;

pub use error::{Error, Result};
pub use model::{Architecture, ParamVector};
pub use real::Real;

/// Register width of every circuit in the model.
pub const N_QUBITS: usize = 9;

pub type Statevector64 = qsim::Statevector<f64>;
pub type Statevector32 = qsim::Statevector<f32>;
pub type ParamVector64 = ParamVector<f64>;
pub type ParamVector32 = ParamVector<f32>;
pub type ModeSet64 = qdecoder::ModeSet<f64>;
pub type Example64 = scenario::Example<f64>;
