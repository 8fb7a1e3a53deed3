//! Simulation of post-selected entanglement swapping chains and the CHSH
//! activation they produce.

pub mod chain;
pub mod criteria;
pub mod error;
pub mod qstate;
pub mod swap;

pub use criteria::{chsh_report, initial_gate, ppt_report, ChshReport, SeparabilityReport};
pub use error::{Error, Result};
pub use qstate::{BellOutcome, ChainParams, ComplexMatrix, DensityMatrix};
pub use swap::{bell_swap, chain_step, phase_correct, SwapResult};
