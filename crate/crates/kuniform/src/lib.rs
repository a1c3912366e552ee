//! Stabilizer-circuit toolkit for k-uniform states.
//!
//! The crate verifies k-uniformity of stabilizer states from their tableau,
//! generates brickwork Clifford circuits that prepare encoded k-uniform
//! states, searches for new ones, and estimates the fidelity of hybrid
//! (encode then teleport out) and purely physical preparation under
//! depolarizing noise.

pub mod circuits;
pub mod codes;
pub mod noisesim;
pub mod search;
pub mod stab;
pub mod uniformity;
