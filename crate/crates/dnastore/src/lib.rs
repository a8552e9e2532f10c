//! Rewritable, random-access DNA storage.
//!
//! The pieces, bottom up:
//!
//! - [`seq`]: sequences over {A, C, G, T}, reverse complement, Hamming
//!   distance, GC statistics, running digital sums.
//! - [`correlation`]: overlap vectors, mutually uncorrelated sets, the
//!   doubling construction, set-size bounds, exact pattern-avoidance counts.
//! - [`address`]: seeded greedy search for block addresses satisfying the
//!   balance, distance, uncorrelatedness, and folding constraints.
//! - [`psc`]: the prefix-synchronized codec mapping integers to fixed-length
//!   bodies that avoid the block's address, plus prefix perturbation and
//!   single-substitution repair.
//! - [`codec`]: word dictionaries, six-word groups behind marker bits, and
//!   assembly of 1000-symbol blocks from address pairs.
//! - [`pool`]: an in-silico pool with primer selection, fragment rewriting,
//!   overlap-extension assembly, and word-level edits.
//!
//! The `dnastore` binary exposes these as subcommands; see the README.

pub mod address;
pub mod codec;
pub mod correlation;
pub mod error;
pub mod pool;
pub mod psc;
pub mod seq;

pub use crate::codec::{BlockLayout, Dictionary, EncodedBlock, Manifest};
pub use crate::correlation::{CorrelationVector, UncorrelatedSet};
pub use crate::error::{Error, Result};
pub use crate::pool::{Fragment, Pool, Primer};
pub use crate::psc::{PerturbConfig, PrefixCodec};
pub use crate::seq::{Base, DnaSeq};
