//! Model checking of linear-time properties for quantum systems modeled as
//! quantum automata: tuples of named unitary operators together with a
//! subspace of initial states, acting on a finite-dimensional Hilbert space.
//!
//! Atomic propositions are closed subspaces of the state space
//! (Birkhoff-von Neumann quantum logic). The crate provides:
//!
//! - a dense complex linear-algebra kernel with explicit tolerance
//!   discipline ([`complexla`]),
//! - the lattice of closed subspaces ([`subspace`]),
//! - quantum automata, path semantics and the reachable subspace
//!   ([`qautomaton`]),
//! - labeling and satisfaction for subspace-valued propositions ([`props`]),
//! - an invariant checker driven by depth-first search over a growing
//!   linearly independent set of reachable states ([`invcheck`]),
//! - a reduction of invariant checking to classical reachability over
//!   eigenstates when no action has a degenerate spectrum ([`eigenreduce`]),
//! - classical finite automata over `2^AP` with reversibility validation
//!   ([`classauto`]),
//! - the product of a quantum automaton with a co-deterministic classical
//!   automaton ([`product`]),
//! - checkers for reversible safety and omega-regular properties that reduce
//!   through the product to invariant checking ([`ltcheck`]),
//! - Pauli/stabilizer and local-equivalence fixtures ([`fixtures`]).
//!
//! The crate is `no_std` (with `alloc`); all values are immutable after
//! construction and all operations are pure.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod classauto;
pub mod complexla;
pub mod eigenreduce;
mod error;
pub mod fixtures;
pub mod invcheck;
pub mod ltcheck;
pub mod product;
pub mod props;
pub mod qautomaton;
pub mod subspace;

pub use complexla::{CMatrix, CVector, Tolerances, C64};
pub use error::{Error, Result};
pub use subspace::Subspace;
