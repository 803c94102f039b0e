use crate::error::{Error, Result};
use crate::geometry::curvature::{curvature, Curvature};
use crate::geometry::frame::PointFrame;
use crate::geometry::ops;
use crate::geometry::tensor::{Tensor, TensorField, Variance};
use crate::jet::Jet;
use crate::residual::{rank_one, Residual};
use crate::scalar::Scalar;
use crate::soliton::{SolitonInput, SolitonKind};

/// `|V|` below this is treated as a zero of the field.
pub const MIN_FIELD_NORM: f64 = 1e-12;

/// Soliton ingredients at one point, as jets.
///
/// With frame order `K`: `V`, `θ`, `|V|²`, `λ` have order `K`; `∇V`, `£_V g`,
/// `div V` order `K − 1`; curvature order `K − 2`.
#[derive(Clone, Debug)]
pub struct SolitonPoint<T: Scalar> {
    pub frame: PointFrame<T>,
    pub kind: SolitonKind,
    pub v: Vec<Jet<T>>,
    pub theta: Vec<Jet<T>>,
    pub norm_sq: Jet<T>,
    pub nabla_v: TensorField<T>,
    pub lie: TensorField<T>,
    pub div_v: Jet<T>,
    pub curvature: Curvature<T>,
    pub lambda: Option<Jet<T>>,
    pub tolerance: T,
}

impl<T: Scalar> SolitonPoint<T> {
    pub fn new(input: &SolitonInput, p: &[T], order: usize, tolerance: T) -> Result<Self> {
        let frame = input.manifold.frame_at(p, order)?;
        let v = input.field.evaluate(&frame)?;
        let theta = frame.lower(&v);
        let norm_sq = ops::pairing(&frame, &v, &theta);
        if !(norm_sq.value() > T::lit(MIN_FIELD_NORM * MIN_FIELD_NORM)) {
            return Err(Error::ZeroVectorField);
        }
        let nabla_v = ops::covariant_derivative_vector(&frame, &v)?;
        let lie = ops::lie_derivative_metric(&frame, &v)?;
        let div_v = ops::divergence_vector(&frame, &v)?;
        let curvature = curvature(&frame)?;
        let lambda = input.lambda.as_ref().map(|l| frame.eval(l)).transpose()?;
        Ok(SolitonPoint {
            frame,
            kind: input.kind,
            v,
            theta,
            norm_sq,
            nabla_v,
            lie,
            div_v,
            curvature,
            lambda,
            tolerance,
        })
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    pub fn n(&self) -> T {
        T::from_usize_lossy(self.dim())
    }

    pub fn point(&self) -> &[T] {
        self.frame.point()
    }

    pub fn lambda(&self) -> Result<&Jet<T>> {
        self.lambda.as_ref().ok_or(Error::MissingLambda)
    }

    /// `V(h)`
    pub fn along_v(&self, h: &Jet<T>) -> Result<Jet<T>> {
        ops::directional(&self.frame, &self.v, h)
    }

    pub fn ric_vv(&self) -> Jet<T> {
        ops::apply_02(&self.frame, &self.curvature.ricci, &self.v, &self.v)
    }

    /// `∂_i θ_j − ∂_j θ_i` against `∇V`.
    pub fn curl_residual(&self) -> Result<Residual<T>> {
        let n = self.dim();
        let dtheta = self.theta.iter().map(ops::differential).collect::<Result<Vec<_>>>()?;
        let curl = Tensor::covariant(2, n, |s| dtheta[s[1]][s[0]].value() - dtheta[s[0]][s[1]].value());
        Ok(Residual::tensor(&self.frame, &curl, &[&self.nabla_v.values()]))
    }

    /// `grad f − V` when a potential is supplied.
    pub fn potential_residual(&self, input: &SolitonInput) -> Option<Result<Residual<T>>> {
        let grad = input.field.potential_gradient(&self.frame)?;
        Some(grad.map(|g| {
            let diff: Vec<Jet<T>> = g.iter().zip(&self.v).map(|(a, b)| a - b).collect();
            Residual::tensor(
                &self.frame,
                &rank_one(Variance::Contravariant, &diff),
                &[&rank_one(Variance::Contravariant, &self.v)],
            )
        }))
    }

    /// Gradient hypothesis: `dθ = 0`, and `grad f = V` when `f` is supplied.
    pub fn gradient_residual(&self, input: &SolitonInput) -> Result<Residual<T>> {
        let curl = self.curl_residual()?;
        Ok(match self.potential_residual(input) {
            Some(r) => curl.max(r?),
            None => curl,
        })
    }

    /// Orthonormal maximum of a vector's components.
    pub fn vector_norm_max(&self, v: &[Jet<T>]) -> T {
        self.frame.orthonormal(&rank_one(Variance::Contravariant, v)).max_abs()
    }
}
