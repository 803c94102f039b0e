//! Scaled residuals.
//!
//! A residual pairs the size of a defect with the size of the quantities it
//! was computed from. It passes when `raw ≤ tol · max(1, scale)`. Tensor
//! defects are measured componentwise in a g-orthonormal frame at the point.

use crate::geometry::frame::PointFrame;
use crate::geometry::tensor::{Tensor, TensorField, Variance};
use crate::jet::Jet;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residual<T> {
    pub raw: T,
    pub scale: T,
}

impl<T: Scalar> Residual<T> {
    pub fn new(raw: T, scale: T) -> Self {
        Residual { raw, scale }
    }

    pub fn zero() -> Self {
        Residual::new(T::zero(), T::zero())
    }

    /// `|lhs − rhs|` against `max(|lhs|, |rhs|)`.
    pub fn between(lhs: T, rhs: T) -> Self {
        Residual::new((lhs - rhs).abs(), lhs.abs().max(rhs.abs()))
    }

    /// `|defect|` against the largest of the given term magnitudes.
    pub fn of_terms(defect: T, terms: &[T]) -> Self {
        let scale = terms.iter().fold(T::zero(), |m, t| m.max(t.abs()));
        Residual::new(defect.abs(), scale)
    }

    /// Orthonormal-frame maximum of a tensor defect against the orthonormal
    /// maxima of its terms.
    pub fn tensor(frame: &PointFrame<T>, defect: &Tensor<T>, terms: &[&Tensor<T>]) -> Self {
        let raw = frame.orthonormal(defect).max_abs();
        let scale = terms
            .iter()
            .fold(T::zero(), |m, t| m.max(frame.orthonormal(t).max_abs()));
        Residual::new(raw, scale)
    }

    /// As [`Residual::tensor`] for jet-valued tensors, using their values.
    pub fn field(frame: &PointFrame<T>, defect: &TensorField<T>, terms: &[&TensorField<T>]) -> Self {
        let values: Vec<Tensor<T>> = terms.iter().map(|t| t.values()).collect();
        let refs: Vec<&Tensor<T>> = values.iter().collect();
        Self::tensor(frame, &defect.values(), &refs)
    }

    /// `raw / max(1, scale)`
    pub fn ratio(&self) -> T {
        self.raw / self.scale.max(T::one())
    }

    pub fn passes(&self, tol: T) -> bool {
        self.raw.is_finite() && self.raw <= tol * self.scale.max(T::one())
    }

    pub fn max(self, other: Self) -> Self {
        if other.ratio() > self.ratio() {
            other
        } else {
            self
        }
    }
}

/// A vector (`Up`) or covector (`Lo`) as a rank-1 tensor of values.
pub fn rank_one<T: Scalar>(variance: Variance, comps: &[Jet<T>]) -> Tensor<T> {
    Tensor::new(vec![variance], comps.len(), comps.iter().map(Jet::value).collect())
}
