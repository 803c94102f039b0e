//! Chart-point Riemannian geometry on jets.

pub mod chart;
pub mod curvature;
pub mod frame;
pub mod linalg;
pub mod ops;
pub mod tensor;

pub use chart::{ChartManifold, VectorFieldSpec};
pub use curvature::{curvature, Curvature, SymmetryDefects};
pub use frame::{frame_at, PointFrame};
pub use tensor::{index_tuples, kulkarni_nomizu, Ring, Tensor, TensorField, TensorValue, Variance};
