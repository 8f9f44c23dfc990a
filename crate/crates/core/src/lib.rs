//! Deterministic workbench around a three-neuron Hopfield network whose
//! dynamics are adjusted by square-wave stimuli: floating-point and
//! fixed-point (Q5.26) simulation, dynamics characterization, and the
//! image cipher driven by the fixed-point keystream, with its statistical
//! validation suite.

pub mod analysis;
pub mod cipher;
pub mod dynamics;
pub mod fixedpoint;
pub mod metrics;
pub mod presets;

pub use cipher::{CipherEnvelope, GrayImage, SecretKey};
pub use dynamics::{NetworkParams, StateVector, StimulusProgram, Trajectory, Wave};
pub use fixedpoint::{FixedState, FixedWord};
