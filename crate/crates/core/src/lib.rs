//! SWAP-free synthesis of QFT and QAOA circuits for linear and ladder qubit
//! chains, built on tracking parity labels through CNOT circuits.
//!
//! Conventions used throughout: `RZ(φ) = exp(iφZ)`, `RX(θ) = exp(iθX)`, and
//! statevector index bit `q` is qubit `q`.

pub mod circuit;
pub mod gf2;
pub mod io;
pub mod labels;
pub mod layout;
pub mod qaoa;
pub mod qasm;
pub mod qft;
pub mod rebase;
pub mod sim;

pub use circuit::{Circuit, Gate, ResourceReport, Topology};
pub use labels::{LabelSet, Tracker};
