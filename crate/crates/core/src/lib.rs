//! Bridge correlational autoencoders.
//!
//! Learns one common `k`-dimensional space for `M` views of the same entities
//! when paired training data exists only between each non-pivot view and a
//! single pivot view. Views that never co-occur during training end up aligned
//! because each of them is pulled toward the pivot.
//!
//! The crate is `no_std` (with `alloc`) and performs no IO. File formats, JSON
//! configuration and the command-line tool live in the companion `bcn` crate.
//!
//! Layout:
//!
//! * [`numerics`]: matrices, activations, the seeded [`Rng`](numerics::Rng).
//! * [`model`]: parameters, encoders/decoders, the binary model container.
//! * [`objective`]: reconstruction + correlation objective and its gradient.
//! * [`trainer`]: minibatch scheduling, SGD and `lambda` selection.
//! * [`data`]: vocabularies, bag-of-words vectors, synthetic multi-view data.
//! * [`eval`]: transfer classification, retrieval and diagnostics.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod data;
pub mod error;
pub mod eval;
pub mod model;
pub mod numerics;
pub mod objective;
pub mod trainer;

pub use error::{Error, FormatError, Result};
pub use model::{Input, ModelParams, ViewKind, ViewSpec};
pub use numerics::{Activation, Matrix, Rng, SparseVector, Vector};
pub use objective::LossKind;
pub use trainer::{Pair, PairSet, TrainConfig};
