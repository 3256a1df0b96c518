//! Restricted sumsets over Z and Z/pZ, structural classification of
//! critical pairs, gap profiles of mod-p sets, and exhaustive verification
//! sweeps that compare the structural predictor against a brute-force
//! oracle on every pair in a bounded universe.
//!
//! All value types are immutable after construction and all operations are
//! pure functions, so everything here can be shared and moved freely across
//! threads. The parallelism in [`verify`] is plain data-parallel chunking
//! over disjoint slices of the enumeration space.

pub mod bitwin;
pub mod classify;
mod error;
pub mod gaps;
pub mod primes;
mod set;
pub mod sumset;
pub mod verify;

pub use classify::{ApWitness, BiPairWitness, CaseTag, PairClassification, Witness};
pub use error::{Error, Result};
pub use gaps::{GapCheckEntry, GapCheckReport, GapMode, GapProfile};
pub use set::{parse_set_literal, GroupContext, IntSet, ModSet, SetLiteral, MAX_MODULUS};
pub use verify::{
    Checkpoint, Counterexample, SweepContext, SweepSpec, Theorem, VerifyReport,
};
