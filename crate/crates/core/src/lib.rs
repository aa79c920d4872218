//! Hong-Ou-Mandel interference of bright squeezed vacuum, scored with
//! intensity-product and rate-product correlation functions.
//!
//! The pipeline is: [`source`] builds the truncated pair distribution,
//! [`beamsplitter`] expands it into a four-mode [`fock::SparseState`],
//! [`correlations`] evaluates `G_Q` and `C_Q` and the visibilities, and
//! [`loss`] adds Bernoulli detection loss. [`closed_form`] holds the
//! infinite-order endpoint values used as an oracle, and [`classical`]
//! simulates the classical pulse model whose visibility cannot exceed 1/2.

pub mod beamsplitter;
pub mod classical;
pub mod closed_form;
pub mod correlations;
pub mod error;
pub mod fock;
pub mod loss;
pub mod numeric;
pub mod source;
pub mod validation;

pub use error::{Error, Result};
pub use fock::{Occupation4, SparseState};
pub use loss::DetectionModel;
pub use source::SourceParams;
