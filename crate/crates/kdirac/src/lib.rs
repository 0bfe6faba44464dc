//! Exact-arithmetic verification toolkit for conformally invariant operator
//! sequences on a flat parabolic model.
//!
//! Everything is computed over the quadratic field ℚ(√m) with no floating
//! point anywhere, so every reported zero is a literal zero.

pub mod casimir;
pub mod clifford;
pub mod flatmodel;
pub mod matrix;
pub mod report;
pub mod scalar;
pub mod sequences;
pub mod verify;
pub mod weights;

pub use clifford::CliffordElement;
pub use matrix::ExactMatrix;
pub use report::{CheckRecord, Finding, Report, Status};
pub use scalar::{FieldScalar, ScalarError};
pub use sequences::{Edition, OperatorDef, OperatorSet, SequenceError};
