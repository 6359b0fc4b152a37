//! Exact solvers for Closest String and Remotest String under the Hamming
//! metric, plus the reductions that tie them together.
//!
//! * [`naive`]: quadratic reference solvers and exhaustive continuous search.
//! * [`inclexcl`]: `O(n 2^d)` inclusion-exclusion solvers for small `d`.
//! * [`matmul`]: all-pairs distances through a heavy/light split of the
//!   symbol-indicator Gram matrix, for large `d`.
//! * [`codes`] and [`reductions`]: constant-weight codes and the
//!   closest/remotest equivalences built on them.
//! * [`satgadget`]: q-ary CNF to continuous Remotest String, with brute-force
//!   certification.
//!
//! Every data-parallel loop takes an [`Exec`]; with the `parallel` feature off
//! all paths run sequentially and produce identical output.

pub mod budget;
pub mod codes;
pub mod error;
pub mod gen;
pub mod hamming;
pub mod inclexcl;
pub mod instance;
pub mod matmul;
pub mod naive;
pub mod par;
pub mod reductions;
pub mod result;
pub mod rng;
pub mod satgadget;

pub use budget::Budget;
pub use error::{Error, Result};
pub use hamming::{hamming, PackedRows};
pub use instance::{read_instance, write_instance, StringSet, Symbol};
pub use par::Exec;
pub use result::{DistanceMatrix, Mode, SolveResult};
pub use rng::SplitMix64;
