//! Exact-arithmetic toolkit for qutrit Kochen-Specker sets.
//!
//! Rays live over cyclotomic fields, so orthogonality, basis membership, game
//! values and SIC overlaps are decided without rounding. Only the Majorana
//! sphere coordinates use floating point.

pub mod bitset;
pub mod catalog;
pub mod cli;
pub mod colorability;
pub mod error;
pub mod game;
pub mod graph;
pub mod majorana;
pub mod numfield;
pub mod rays;
pub mod weylheisenberg;

pub use colorability::{find_ks_assignment, Assignment, KSInstance, KsVerdict};
pub use error::{Error, Result};
pub use game::{build_game, classical_value, quantum_value_maxent, Game};
pub use graph::{automorphisms, independence_number, Graph};
pub use numfield::CycNumber;
pub use rays::{inner, is_orthogonal, Basis, Ray};
