//! Chart-based Riemannian tensor calculus on truncated Taylor jets, with
//! residual checks for almost Ricci and almost Riemann solitons.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod expr;
pub mod geometry;
pub mod jet;
pub mod residual;
pub mod sampling;
pub mod scalar;
pub mod soliton;

pub use error::{Error, Result};
pub use expr::Expr;
pub use geometry::{ChartManifold, PointFrame, Tensor, TensorField, TensorValue, Variance, VectorFieldSpec};
pub use jet::{Jet, MultiIndex};
pub use residual::Residual;
pub use scalar::Scalar;
pub use soliton::{
    AggregatedCheck, CheckRecord, CheckReport, CheckStatus, ClassificationReport, SolitonInput, SolitonKind,
    SolitonPoint, Suite,
};

pub type Jet64 = Jet<f64>;
pub type Jet32 = Jet<f32>;
pub type PointFrame64 = PointFrame<f64>;
pub type TensorValue64 = TensorValue<f64>;
pub type SolitonPoint64 = SolitonPoint<f64>;
pub type CheckReport64 = CheckReport<f64>;
pub type ClassificationReport64 = ClassificationReport<f64>;
