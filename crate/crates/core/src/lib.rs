//! Behavioral simulator of a dopamine-modulated memristive neuron.
//!
//! Blocks are evaluated on a fixed time grid by [`engine::run`]. The canonical
//! circuit is built by [`neuron::build_standard_netlist`], and the learning-curve
//! sweeps and the conductance experiment live in [`experiments`].

pub mod blocks;
pub mod engine;
pub mod error;
pub mod experiments;
pub mod memristor;
pub mod neuron;
pub mod signal;

pub use error::{Error, Result};
